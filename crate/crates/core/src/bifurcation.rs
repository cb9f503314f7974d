//! Recovery-rate sweep of the SIS equilibrium branches and closed-form
//! location of the four transcritical points where branches exchange
//! stability.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::equilibria::{sis_equilibria, EquilibriumReport, SisLabel};
use crate::error::{Error, Result};
use crate::model::params::SisParams;

/// A transcritical point: the recovery rate at which two equilibrium
/// branches collide and exchange stability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionPoint {
    /// 0..=3, matching the T0..T3 labels.
    pub index: usize,
    pub gamma: f64,
    pub branches: (SisLabel, SisLabel),
}

impl TransitionPoint {
    pub fn label(&self) -> String {
        format!("T{}", self.index)
    }
}

/// The four transcritical recovery rates. T2 and T3 exist only when the
/// indifference prevalence lies inside (0,1); otherwise the interior branch
/// never exists and a partial result is returned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriticalPoints {
    /// gamma = alpha beta_p, where E0 and E4 cross.
    pub t0: f64,
    /// gamma = beta_p, where E1 and E2 exchange stability.
    pub t1: f64,
    /// gamma = beta_p (1 - y_int), where E2 and E3 exchange (from y_u = y_int).
    pub t2: Option<f64>,
    /// gamma = alpha beta_p (1 - y_int), where E3 and E4 exchange (from y_p = y_int).
    pub t3: Option<f64>,
    /// Set when T2/T3 are undefined.
    pub notice: Option<String>,
}

impl TranscriticalPoints {
    pub fn all(&self) -> Vec<TransitionPoint> {
        let mut out = vec![
            TransitionPoint { index: 0, gamma: self.t0, branches: (SisLabel::E0, SisLabel::E4) },
            TransitionPoint { index: 1, gamma: self.t1, branches: (SisLabel::E1, SisLabel::E2) },
        ];
        if let Some(t2) = self.t2 {
            out.push(TransitionPoint { index: 2, gamma: t2, branches: (SisLabel::E2, SisLabel::E3) });
        }
        if let Some(t3) = self.t3 {
            out.push(TransitionPoint { index: 3, gamma: t3, branches: (SisLabel::E3, SisLabel::E4) });
        }
        out
    }
}

/// Closed-form transcritical points for a parameter set (gamma itself is
/// immaterial).
pub fn transcritical_points(p: &SisParams) -> Result<TranscriticalPoints> {
    p.validate()?;
    let y_int = p.thresholds().y_int;
    let t0 = p.alpha * p.beta_p;
    let t1 = p.beta_p;
    if y_int >= 1.0 || !y_int.is_finite() {
        return Ok(TranscriticalPoints {
            t0,
            t1,
            t2: None,
            t3: None,
            notice: Some(format!(
                "y_int = {y_int} >= 1: the interior branch E3 cannot exist, T2/T3 undefined"
            )),
        });
    }
    Ok(TranscriticalPoints {
        t0,
        t1,
        t2: Some(p.beta_p * (1.0 - y_int)),
        t3: Some(p.alpha * p.beta_p * (1.0 - y_int)),
        notice: None,
    })
}

/// Equilibrium branches over a recovery-rate grid.
#[derive(Debug, Clone)]
pub struct BranchTable {
    pub gamma_grid: Vec<f64>,
    /// One report list (all five labels) per grid value.
    pub rows: Vec<Vec<EquilibriumReport>>,
    /// Exact transition points inside the sweep interval.
    pub transition_points: Vec<TransitionPoint>,
}

/// Evaluates every equilibrium branch on a uniform gamma grid. The branch
/// coordinates are closed-form in gamma, so no continuation is needed; the
/// transition points are inserted exactly, not grid-snapped.
pub fn sweep_gamma(
    p: &SisParams,
    gamma_lo: f64,
    gamma_hi: f64,
    n_points: usize,
) -> Result<BranchTable> {
    if !(gamma_lo > 0.0 && gamma_lo < gamma_hi) {
        return Err(Error::Config("sweep requires 0 < gamma_lo < gamma_hi".into()));
    }
    if n_points < 2 {
        return Err(Error::Config("sweep requires n_points >= 2".into()));
    }
    let step = (gamma_hi - gamma_lo) / (n_points - 1) as f64;
    let gamma_grid: Vec<f64> = (0..n_points).map(|i| gamma_lo + step * i as f64).collect();
    let rows = gamma_grid
        .iter()
        .map(|&g| sis_equilibria(&p.with_gamma(g)))
        .collect();
    let transition_points = transcritical_points(p)?
        .all()
        .into_iter()
        .filter(|t| t.gamma >= gamma_lo && t.gamma <= gamma_hi)
        .collect();
    Ok(BranchTable { gamma_grid, rows, transition_points })
}

/// CSV rows `gamma,label,y,z_S,z_I,stability` followed by `# T<k>` comment
/// lines for the transition points. Branch points outside the state box are
/// kept with an `exists=false` tag so the full diagram structure is
/// reconstructible.
pub fn export_branches(table: &BranchTable) -> String {
    let mut out = String::from("gamma,label,y,z_S,z_I,stability\n");
    for (gamma, reports) in table.gamma_grid.iter().zip(&table.rows) {
        for r in reports {
            let stab = if r.exists { r.stability.to_string() } else { "exists=false".to_string() };
            let _ = writeln!(
                out,
                "{gamma:.16e},{},{:.16e},{:.16e},{:.16e},{stab}",
                r.label, r.coordinates[0], r.coordinates[1], r.coordinates[2]
            );
        }
    }
    for t in &table.transition_points {
        let _ = writeln!(out, "# {} gamma={:.16e}", t.label(), t.gamma);
    }
    out
}

/// One parsed data row of a branch CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRow {
    pub gamma: f64,
    pub label: String,
    pub coordinates: [f64; 3],
    pub stability: String,
}

/// Parses a document produced by [`export_branches`]; returns the data rows
/// and the transition comments as (label, gamma) pairs.
pub fn parse_branches(csv: &str) -> Result<(Vec<BranchRow>, Vec<(String, f64)>)> {
    let mut rows = Vec::new();
    let mut transitions = Vec::new();
    for (i, line) in csv.lines().enumerate() {
        if i == 0 || line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# ") {
            let (label, gamma) = rest
                .split_once(" gamma=")
                .ok_or_else(|| Error::Config(format!("bad transition comment: {line}")))?;
            let gamma = gamma
                .parse()
                .map_err(|e| Error::Config(format!("bad gamma in comment: {e}")))?;
            transitions.push((label.to_string(), gamma));
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Config(format!("expected 6 fields, got {}", fields.len())));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|e| Error::Config(format!("bad number {s}: {e}")))
        };
        rows.push(BranchRow {
            gamma: num(fields[0])?,
            label: fields[1].to_string(),
            coordinates: [num(fields[2])?, num(fields[3])?, num(fields[4])?],
            stability: fields[5].to_string(),
        });
    }
    Ok((rows, transitions))
}
