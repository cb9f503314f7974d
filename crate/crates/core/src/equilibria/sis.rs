use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::{eigen3, sis_jacobian, stability_from_eigenvalues, Stability, HYPERBOLIC_TOL};
use crate::model::params::SisParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SisLabel {
    E0,
    E1,
    E2,
    E3,
    E4,
}

impl SisLabel {
    pub const ALL: [SisLabel; 5] = [SisLabel::E0, SisLabel::E1, SisLabel::E2, SisLabel::E3, SisLabel::E4];
}

impl std::fmt::Display for SisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A labeled equilibrium with its coordinates, spectrum, verdicts and the
/// analytic condition that produced them.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumReport {
    pub label: SisLabel,
    pub coordinates: [f64; 3],
    pub exists: bool,
    /// Names the violated existence condition when `exists` is false.
    pub violated: Option<String>,
    pub eigenvalues: [Complex64; 3],
    /// Eigenvalue-based verdict (E3 uses the 2x2 trace/determinant argument
    /// plus the decoupled z_I eigenvalue).
    pub stability: Stability,
    /// The analytic clause that fired.
    pub justification: String,
}

/// Existence and stability as read off the closed-form conditions, the
/// second route against which the eigenvalue verdicts are checked.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticVerdict {
    pub exists: bool,
    /// None when the equilibrium does not exist.
    pub stable: Option<bool>,
    pub clause: String,
}

/// Condition-based existence/stability per equilibrium.
pub fn table1_verdict(label: SisLabel, p: &SisParams) -> AnalyticVerdict {
    let t = p.thresholds();
    match label {
        SisLabel::E0 => AnalyticVerdict {
            exists: true,
            stable: Some(false),
            clause: "c_P > 0".into(),
        },
        SisLabel::E1 => AnalyticVerdict {
            exists: true,
            stable: Some(p.beta_p < p.gamma),
            clause: format!("beta_p < gamma ({} < {})", p.beta_p, p.gamma),
        },
        SisLabel::E2 => {
            let exists = p.beta_p > p.gamma;
            AnalyticVerdict {
                exists,
                stable: exists.then_some(t.y_u < t.y_int),
                clause: if exists {
                    format!("y_u < y_int ({} < {})", t.y_u, t.y_int)
                } else {
                    "beta_p > gamma".into()
                },
            }
        }
        SisLabel::E3 => {
            let exists = t.y_p < t.y_int && t.y_int < t.y_u;
            AnalyticVerdict {
                exists,
                stable: exists.then_some(true),
                clause: format!("y_p < y_int < y_u ({} < {} < {})", t.y_p, t.y_int, t.y_u),
            }
        }
        SisLabel::E4 => {
            let exists = p.gamma < p.alpha * p.beta_p;
            AnalyticVerdict {
                exists,
                stable: exists.then_some(t.y_p > t.y_int),
                clause: if exists {
                    format!("y_p > y_int ({} > {})", t.y_p, t.y_int)
                } else {
                    "gamma < alpha beta_p".into()
                },
            }
        }
    }
}

/// Coordinates of a labeled equilibrium, evaluated from the closed forms
/// whether or not the point lies inside the state box.
pub fn equilibrium_coordinates(label: SisLabel, p: &SisParams) -> [f64; 3] {
    let t = p.thresholds();
    match label {
        SisLabel::E0 => [0.0, 0.0, 0.0],
        SisLabel::E1 => [0.0, 1.0, 0.0],
        SisLabel::E2 => [t.y_u, 1.0, 0.0],
        SisLabel::E3 => [t.y_int, t.z_s_int, 0.0],
        SisLabel::E4 => [t.y_p, 0.0, 0.0],
    }
}

/// All five labeled equilibria of the coupled SIS dynamics with existence,
/// spectrum and stability.
pub fn sis_equilibria(p: &SisParams) -> Vec<EquilibriumReport> {
    SisLabel::ALL
        .iter()
        .map(|&label| report_for(label, p))
        .collect()
}

fn report_for(label: SisLabel, p: &SisParams) -> EquilibriumReport {
    let verdict = table1_verdict(label, p);
    let coords = equilibrium_coordinates(label, p);
    let jac = sis_jacobian(&coords, p);
    let eigenvalues = eigen3(&jac);
    let stability = if label == SisLabel::E3 {
        e3_stability(&jac)
    } else {
        stability_from_eigenvalues(&eigenvalues)
    };
    EquilibriumReport {
        label,
        coordinates: coords,
        exists: verdict.exists,
        violated: (!verdict.exists).then(|| verdict.clause.clone()),
        eigenvalues,
        stability,
        justification: verdict.clause,
    }
}

/// Stability of the interior equilibrium from the 2x2 sub-matrix in the
/// (y, z_S) directions: trace negative and determinant positive means both
/// eigenvalues have negative real part; the z_I direction decouples.
fn e3_stability(jac: &[[f64; 3]; 3]) -> Stability {
    let tr = jac[0][0] + jac[1][1];
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let z_i_eig = jac[2][2];
    if det.abs() <= HYPERBOLIC_TOL || z_i_eig.abs() <= HYPERBOLIC_TOL {
        return Stability::Nonhyperbolic;
    }
    if det < 0.0 || z_i_eig > 0.0 {
        return Stability::Unstable;
    }
    // det > 0: eigenvalue real parts share the sign of the trace
    if tr.abs() <= HYPERBOLIC_TOL {
        Stability::Nonhyperbolic
    } else if tr < 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

/// JSON document with one object per equilibrium.
pub fn reports_to_json(reports: &[EquilibriumReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

/// Plain-text table of the reports, one row per equilibrium.
pub fn render_table(reports: &[EquilibriumReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<4} {:>12} {:>12} {:>12} {:>7} {:>14}  {}\n",
        "eq", "y", "z_S", "z_I", "exists", "stability", "condition"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:<4} {:>12.6} {:>12.6} {:>12.6} {:>7} {:>14}  {}\n",
            r.label.to_string(),
            r.coordinates[0],
            r.coordinates[1],
            r.coordinates[2],
            r.exists,
            if r.exists { r.stability.to_string() } else { "-".to_string() },
            r.justification,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(gamma: f64) -> SisParams {
        SisParams::new(0.3, 0.15, 0.5, gamma, 1.0, 2.0, 1.0, 80.0).unwrap()
    }

    fn get(reports: &[EquilibriumReport], label: SisLabel) -> &EquilibriumReport {
        reports.iter().find(|r| r.label == label).unwrap()
    }

    #[test]
    fn interior_regime() {
        // gamma = 0.1 puts E3 at (1/6, 0.6, 0), stable; E1, E2 exist unstable;
        // E4 does not exist since gamma > alpha beta_p = 0.075
        let reports = sis_equilibria(&reference(0.1));
        let e3 = get(&reports, SisLabel::E3);
        assert!(e3.exists);
        assert_eq!(e3.stability, Stability::Stable);
        assert!((e3.coordinates[0] - 1.0 / 6.0).abs() < 1e-14);
        assert!((e3.coordinates[1] - 0.6).abs() < 1e-12);

        for label in [SisLabel::E1, SisLabel::E2] {
            let r = get(&reports, label);
            assert!(r.exists);
            assert_eq!(r.stability, Stability::Unstable);
        }
        assert!(!get(&reports, SisLabel::E4).exists);
        assert_eq!(get(&reports, SisLabel::E0).stability, Stability::Unstable);
    }

    #[test]
    fn disease_free_regime() {
        // gamma = 0.2 > beta_p: only E0, E1 exist and E1 is stable
        let reports = sis_equilibria(&reference(0.2));
        assert!(get(&reports, SisLabel::E0).exists);
        let e1 = get(&reports, SisLabel::E1);
        assert!(e1.exists);
        assert_eq!(e1.stability, Stability::Stable);
        for label in [SisLabel::E2, SisLabel::E3, SisLabel::E4] {
            assert!(!get(&reports, label).exists);
        }
    }

    #[test]
    fn full_protection_regime() {
        // gamma = 0.05 < alpha beta_p; y_p = 1/3 > y_int = 1/6 so E4 stable
        let reports = sis_equilibria(&reference(0.05));
        let e4 = get(&reports, SisLabel::E4);
        assert!(e4.exists);
        assert_eq!(e4.stability, Stability::Stable);
        assert!((e4.coordinates[0] - 1.0 / 3.0).abs() < 1e-14);
        assert!(!get(&reports, SisLabel::E3).exists);
    }

    #[test]
    fn existing_equilibria_are_field_zeros() {
        use crate::model::{field_sis_raw, SisState};
        for gamma in [0.05, 0.08, 0.1, 0.13, 0.2] {
            let p = reference(gamma);
            for r in sis_equilibria(&p).iter().filter(|r| r.exists) {
                SisState::from_array(r.coordinates).validate().unwrap();
                for d in field_sis_raw(&r.coordinates, &p) {
                    assert!(d.abs() < 1e-12, "gamma={gamma} {:?}: residual {d}", r.label);
                }
            }
        }
    }

    #[test]
    fn json_has_one_object_per_equilibrium() {
        let reports = sis_equilibria(&reference(0.1));
        let json = reports_to_json(&reports);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), 5);
        assert_eq!(parsed[3]["label"], "E3");
        assert_eq!(parsed[3]["stability"], "stable");
    }
}
