use serde::{Deserialize, Serialize};

use super::sim::HybridSystem;
use crate::error::{Error, Result};
use crate::model::params::{SiriParams, SisParams};

/// Evaluation of the reduced SIS slow dynamics at a prevalence level:
/// either the smooth one-sided derivative or, on the switching surface, the
/// endpoints of the differential inclusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReducedSisEval {
    Smooth(f64),
    /// Derivatives with everyone unprotected (`z1`, the field below the
    /// surface) and everyone protected (`z0`, above).
    Inclusion { z1: f64, z0: f64 },
}

/// Reduced slow dynamics of the SIS model once behavior has equilibrated:
/// unprotected below `y_int`, protected above.
pub fn reduced_sis_field(y: f64, p: &SisParams) -> ReducedSisEval {
    let sys = ReducedSis::new(*p);
    let y_int = sys.surface;
    if !y_int.is_finite() || y != y_int {
        let region = usize::from(y_int.is_finite() && y > y_int);
        ReducedSisEval::Smooth(sys.region_field(region, &[y])[0])
    } else {
        ReducedSisEval::Inclusion {
            z1: sys.region_field(0, &[y])[0],
            z0: sys.region_field(1, &[y])[0],
        }
    }
}

/// Equivalent control on the reduced-SIS sliding surface: the unique
/// protection split `z_S` for which the convexified flow is stationary at
/// `y_int`. Coincides with the interior-equilibrium split.
pub fn sliding_control_sis(p: &SisParams) -> Result<f64> {
    let t = p.thresholds();
    let z = t.z_s_int;
    clamp_control(z).ok_or_else(|| {
        Error::NoSliding(format!(
            "y_int = {} is not between y_p = {} and y_u = {}",
            t.y_int, t.y_p, t.y_u
        ))
    })
}

fn clamp_control(z: f64) -> Option<f64> {
    const TOL: f64 = 1e-10;
    if (-TOL..=1.0 + TOL).contains(&z) {
        Some(z.clamp(0.0, 1.0))
    } else {
        None
    }
}

/// Which statement of the slow-SIS convergence result applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedOutcome {
    /// 1: extinction, 2: unprotected endemic level, 3: sliding at y_int,
    /// 4: protected endemic level.
    pub case_id: u8,
    /// Limiting value of y(t) for any y(0) in (0,1].
    pub limit: f64,
    /// Whether the statement claims monotone convergence.
    pub monotone: bool,
    pub sliding_limit: bool,
}

/// Convergence classification of the reduced SIS dynamics. The four cases
/// partition parameter space; measure-zero boundaries fold into the
/// lower-numbered case.
pub fn classify_reduced_sis(p: &SisParams) -> ReducedOutcome {
    let t = p.thresholds();
    if t.y_u <= 0.0 {
        ReducedOutcome { case_id: 1, limit: 0.0, monotone: true, sliding_limit: false }
    } else if t.y_u <= t.y_int {
        ReducedOutcome { case_id: 2, limit: t.y_u, monotone: true, sliding_limit: false }
    } else if t.y_int <= t.y_p {
        ReducedOutcome { case_id: 4, limit: t.y_p, monotone: true, sliding_limit: false }
    } else {
        ReducedOutcome { case_id: 3, limit: t.y_int, monotone: false, sliding_limit: true }
    }
}

/// The reduced SIS slow system as a one-dimensional hybrid system.
#[derive(Debug, Clone)]
pub struct ReducedSis {
    pub params: SisParams,
    surface: f64,
    surfaces: Vec<f64>,
}

impl ReducedSis {
    pub fn new(params: SisParams) -> Self {
        let surface = params.thresholds().y_int;
        let surfaces = if surface.is_finite() { vec![surface] } else { Vec::new() };
        Self { params, surface, surfaces }
    }
}

impl HybridSystem<1> for ReducedSis {
    const NAMES: [&'static str; 1] = ["y"];

    fn surfaces(&self) -> &[f64] {
        &self.surfaces
    }

    fn region_field(&self, region: usize, state: &[f64; 1]) -> [f64; 1] {
        let y = state[0];
        let cover = if region == 0 { 1.0 } else { self.params.alpha };
        [((1.0 - y) * cover * self.params.beta_p - self.params.gamma) * y]
    }

    fn check_state(&self, state: &[f64; 1]) -> Result<()> {
        if !(0.0..=1.0).contains(&state[0]) {
            return Err(Error::Simplex(format!("y = {} outside [0,1]", state[0])));
        }
        Ok(())
    }
}

/// Evaluation of the reduced SIRI dynamics at a point: smooth `(dy, dr)` or
/// the inclusion endpoints on one of the two switching surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReducedSiriEval {
    Smooth([f64; 2]),
    /// `z1` is the field from the region below the surface (behavioral
    /// coordinate at 1), `z0` from above.
    Inclusion { surface: usize, z1: [f64; 2], z0: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiriVariant {
    /// beta_p > beta_hat_p: surfaces at (y_int, y_hat_int).
    Strong,
    /// beta_p < beta_hat_p: surfaces at (y_hat_int, y_int).
    Weak,
}

/// Reduced SIRI dynamics on `(y, r)` once behavior has equilibrated. Each
/// open region pins `(z_S, z_R)` at a corner, which scales the susceptible
/// and recovered infection rates by 1 or alpha.
#[derive(Debug, Clone)]
pub struct ReducedSiri {
    pub params: SiriParams,
    pub variant: SiriVariant,
    surfaces: Vec<f64>,
    /// (susceptible cover, recovered cover) per region, bottom to top.
    covers: [(f64, f64); 3],
}

impl ReducedSiri {
    /// Strengthened-immunity variant; requires `beta_p > beta_hat_p` so that
    /// the susceptible threshold sits below the recovered one.
    pub fn strong(params: SiriParams) -> Result<Self> {
        params.validate()?;
        if !params.strengthened_immunity() {
            return Err(Error::WrongVariant(
                "beta_p <= beta_hat_p: use the weak variant".into(),
            ));
        }
        let t = params.thresholds();
        let a = params.sis.alpha;
        Ok(Self {
            params,
            variant: SiriVariant::Strong,
            surfaces: vec![t.y_int, t.y_hat_int.unwrap()],
            covers: [(1.0, 1.0), (a, 1.0), (a, a)],
        })
    }

    /// Compromised-immunity variant; requires `beta_p < beta_hat_p`.
    pub fn weak(params: SiriParams) -> Result<Self> {
        params.validate()?;
        if params.sis.beta_p >= params.beta_hat_p {
            return Err(Error::WrongVariant(
                "beta_p >= beta_hat_p: use the strong variant".into(),
            ));
        }
        let t = params.thresholds();
        let a = params.sis.alpha;
        Ok(Self {
            params,
            variant: SiriVariant::Weak,
            surfaces: vec![t.y_hat_int.unwrap(), t.y_int],
            covers: [(1.0, 1.0), (1.0, a), (a, a)],
        })
    }

    fn eval_at(&self, y: f64, r: f64) -> ReducedSiriEval {
        for (i, &s) in self.surfaces.iter().enumerate() {
            if y == s {
                return ReducedSiriEval::Inclusion {
                    surface: i,
                    z1: self.region_field(i, &[y, r]),
                    z0: self.region_field(i + 1, &[y, r]),
                };
            }
        }
        let region = self.surfaces.iter().filter(|&&s| y > s).count();
        ReducedSiriEval::Smooth(self.region_field(region, &[y, r]))
    }

    /// Equivalent control on surface `surface` at recovered fraction `r`:
    /// the convex weight on the below-surface field that zeroes dy/dt.
    pub fn sliding_control(&self, surface: usize, r: f64) -> Result<f64> {
        let y = self.surfaces[surface];
        let a = self.region_field(surface, &[y, r])[0];
        let b = self.region_field(surface + 1, &[y, r])[0];
        if a == b {
            return Err(Error::NoSliding("one-sided fields coincide".into()));
        }
        clamp_control(b / (b - a)).ok_or_else(|| {
            Error::NoSliding(format!(
                "no convex weight zeroes dy/dt on y = {y} at r = {r} (one-sided rates {a}, {b})"
            ))
        })
    }
}

impl HybridSystem<2> for ReducedSiri {
    const NAMES: [&'static str; 2] = ["y", "r"];

    fn surfaces(&self) -> &[f64] {
        &self.surfaces
    }

    fn region_field(&self, region: usize, state: &[f64; 2]) -> [f64; 2] {
        let [y, r] = *state;
        let (cover_s, cover_r) = self.covers[region];
        let s = 1.0 - y - r;
        let p = &self.params;
        let inflow = cover_s * p.sis.beta_p * s + cover_r * p.beta_hat_p * r;
        [
            (inflow - p.sis.gamma) * y,
            (-cover_r * p.beta_hat_p * r + p.sis.gamma) * y,
        ]
    }

    fn check_state(&self, state: &[f64; 2]) -> Result<()> {
        let [y, r] = *state;
        for (name, v) in [("y", y), ("r", r)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Simplex(format!("{name} = {v} outside [0,1]")));
            }
        }
        if y + r > 1.0 + crate::model::SIMPLEX_TOL {
            return Err(Error::Simplex(format!("y + r = {} exceeds 1", y + r)));
        }
        Ok(())
    }

    fn project(&self, mut state: [f64; 2], tol: f64, t: f64) -> Result<[f64; 2]> {
        for (i, v) in state.iter_mut().enumerate() {
            if *v < 0.0 {
                if *v < -tol {
                    return Err(Error::StepOutOfBounds { t, index: i, value: *v });
                }
                *v = 0.0;
            } else if *v > 1.0 {
                if *v > 1.0 + tol {
                    return Err(Error::StepOutOfBounds { t, index: i, value: *v });
                }
                *v = 1.0;
            }
        }
        // keep the susceptible remainder nonnegative
        let excess = state[0] + state[1] - 1.0;
        if excess > 0.0 {
            if excess > tol {
                return Err(Error::StepOutOfBounds { t, index: 1, value: state[1] });
            }
            state[1] -= excess;
        }
        Ok(state)
    }
}

/// Reduced SIRI field under strengthened immunity at `(y, r)`.
pub fn reduced_siri_strong_field(y: f64, r: f64, p: &SiriParams) -> Result<ReducedSiriEval> {
    Ok(ReducedSiri::strong(*p)?.eval_at(y, r))
}

/// Reduced SIRI field under compromised immunity at `(y, r)`.
pub fn reduced_siri_weak_field(y: f64, r: f64, p: &SiriParams) -> Result<ReducedSiriEval> {
    Ok(ReducedSiri::weak(*p)?.eval_at(y, r))
}

/// Equivalent control on a reduced-SIRI switching surface.
pub fn sliding_control_siri(sys: &ReducedSiri, surface: usize, r: f64) -> Result<f64> {
    sys.sliding_control(surface, r)
}
