use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::params::SiriParams;

/// Regime of the SIRI dynamics without protective behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VanillaRegime {
    InfectionFree,
    Endemic,
    Epidemic,
    Bistable,
}

/// Classification of the unprotected SIRI dynamics in terms of the
/// reproduction numbers of first infection and reinfection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanillaSiriRegime {
    pub r0: f64,
    pub r1: f64,
    /// M = (1 - R1) / (R0 - R1); the IFE with s* = M is where stability
    /// flips in the epidemic and bistable regimes.
    pub m: f64,
    pub regime: VanillaRegime,
    /// Susceptible level at which IFE stability splits.
    pub ife_boundary: Option<f64>,
    /// In the bistable regime, initial prevalence below this value (with
    /// r(0) = 0) decays to the IFE; above it the dynamics reach the EE.
    pub basin_threshold: Option<f64>,
    /// Infected fraction at the endemic equilibrium, when it exists.
    pub endemic_level: Option<f64>,
}

/// Regime classification of the vanilla SIRI dynamics.
pub fn vanilla_siri_classify(beta: f64, beta_hat: f64, gamma: f64) -> Result<VanillaSiriRegime> {
    if !(beta > 0.0 && beta_hat > 0.0 && gamma > 0.0) {
        return Err(Error::Params("beta, beta_hat, gamma > 0".into()));
    }
    let r0 = beta / gamma;
    let r1 = beta_hat / gamma;
    if (r0 - r1).abs() <= 1e-12 * r0.max(r1) {
        return Err(Error::DegenerateSis);
    }
    let m = (1.0 - r1) / (r0 - r1);
    let regime = if r0 > 1.0 && r1 > 1.0 {
        VanillaRegime::Endemic
    } else if r0 > 1.0 {
        VanillaRegime::Epidemic
    } else if r1 > 1.0 {
        VanillaRegime::Bistable
    } else {
        VanillaRegime::InfectionFree
    };
    let basin_threshold = (regime == VanillaRegime::Bistable)
        .then(|| 1.0 - m * (r0 * m).powf(-r0 / r1));
    Ok(VanillaSiriRegime {
        r0,
        r1,
        m,
        regime,
        ife_boundary: matches!(regime, VanillaRegime::Epidemic | VanillaRegime::Bistable)
            .then_some(m),
        basin_threshold,
        endemic_level: (r1 > 1.0).then(|| 1.0 - 1.0 / r1),
    })
}

/// Stable value of a fast behavioral coordinate at a frozen prevalence, or
/// the indifference continuum when the prevalence sits exactly on the
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FastChoice {
    Value(f64),
    Indifferent,
}

impl FastChoice {
    pub fn value(&self) -> Option<f64> {
        match self {
            FastChoice::Value(v) => Some(*v),
            FastChoice::Indifferent => None,
        }
    }
}

/// Stable equilibrium of the replicator subsystem at prevalence `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FastEquilibrium {
    pub z_s: FastChoice,
    pub z_i: FastChoice,
    pub z_r: FastChoice,
}

pub fn siri_fast_equilibria(y: f64, p: &SiriParams) -> FastEquilibrium {
    let t = p.thresholds();
    let y_hat = t.y_hat_int.expect("SIRI thresholds carry y_hat_int");
    let step = |threshold: f64| {
        if y < threshold {
            FastChoice::Value(1.0)
        } else if y > threshold {
            FastChoice::Value(0.0)
        } else {
            FastChoice::Indifferent
        }
    };
    FastEquilibrium {
        z_s: step(t.y_int),
        z_i: FastChoice::Value(0.0),
        z_r: step(y_hat),
    }
}

/// IFE stability across the continuum (y = 0, r = r*).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IfeStability {
    AllStable,
    AllUnstable,
    /// Points with r* above the threshold are stable.
    StableAbove(f64),
    /// Points with r* below the threshold are stable.
    StableBelow(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attractor {
    InfectionFree,
    E2,
    E3,
    Sliding,
}

/// An endemic point of the reduced hybrid dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndemicPoint {
    /// (y, r) coordinates from the closed form.
    pub point: (f64, f64),
    /// Whether the point is an equilibrium of the hybrid system.
    pub exists: bool,
    pub stable: Option<bool>,
}

/// Case report for the reduced SIRI hybrid dynamics (strengthened or
/// compromised immunity variant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiriCaseReport {
    /// Case number within the variant's convergence classification.
    pub case_id: u8,
    pub e2: EndemicPoint,
    pub e3: EndemicPoint,
    /// The sliding point (y_hat_int, 1 - y_hat_int) when the surface is
    /// attracting.
    pub sliding_point: Option<(f64, f64)>,
    /// Equivalent control z_R at the asymptotic sliding point.
    pub sliding_control: Option<f64>,
    pub ife: IfeStability,
    /// Predicted attractor for generic initial prevalence; in the bistable
    /// regime the infection-free continuum is also locally stable.
    pub attractor: Attractor,
    /// Predicted limit of y(t) on the endemic side, 0 for infection-free.
    pub y_limit: f64,
    pub bistable: bool,
}

fn e2_point(p: &SiriParams) -> (f64, f64) {
    let g = p.sis.gamma / p.beta_hat_p;
    (1.0 - g, g)
}

fn e3_point(p: &SiriParams) -> (f64, f64) {
    let g = p.sis.gamma / (p.sis.alpha * p.beta_hat_p);
    (1.0 - g, g)
}

/// z_R making the convexified flow tangent to y = y_hat_int at the
/// asymptotic sliding point, where the susceptible pool has emptied. The
/// balance on the surface involves beta_hat_p, the reinfection rate of the
/// protected.
fn asymptotic_sliding_control(p: &SiriParams) -> f64 {
    let y_hat = p.thresholds().y_hat_int.expect("SIRI thresholds");
    let alpha = p.sis.alpha;
    (p.sis.gamma / (p.beta_hat_p * (1.0 - y_hat)) - alpha) / (1.0 - alpha)
}

/// Case classification of the reduced dynamics under strengthened immunity
/// (`beta_p > beta_hat_p`).
pub fn siri_strong_classify(p: &SiriParams) -> Result<SiriCaseReport> {
    p.validate()?;
    if !p.strengthened_immunity() {
        return Err(Error::WrongVariant(
            "beta_p <= beta_hat_p: use the compromised-immunity (weak) variant".into(),
        ));
    }
    let sp = &p.sis;
    let y_hat = p.thresholds().y_hat_int.unwrap();
    let gamma = sp.gamma;
    let bhp = p.beta_hat_p;
    let sliding_gate = bhp * (1.0 - y_hat);
    let e2 = e2_point(p);
    let e3 = e3_point(p);

    // Boundary equalities fold into the lower-numbered case.
    let case_id = if gamma >= sp.beta_p {
        1
    } else if gamma >= bhp {
        2
    } else if gamma >= sliding_gate {
        3
    } else if gamma >= sp.alpha * sliding_gate {
        4
    } else {
        5
    };

    let r_star = (sp.beta_p - gamma) / (sp.beta_p - bhp);
    let report = match case_id {
        1 => SiriCaseReport {
            case_id,
            e2: EndemicPoint { point: e2, exists: false, stable: None },
            e3: EndemicPoint { point: e3, exists: false, stable: None },
            sliding_point: None,
            sliding_control: None,
            ife: IfeStability::AllStable,
            attractor: Attractor::InfectionFree,
            y_limit: 0.0,
            bistable: false,
        },
        2 => SiriCaseReport {
            case_id,
            e2: EndemicPoint { point: e2, exists: false, stable: None },
            e3: EndemicPoint { point: e3, exists: false, stable: None },
            sliding_point: None,
            sliding_control: None,
            ife: IfeStability::StableAbove(r_star),
            attractor: Attractor::InfectionFree,
            y_limit: 0.0,
            bistable: false,
        },
        3 => SiriCaseReport {
            case_id,
            e2: EndemicPoint { point: e2, exists: true, stable: Some(true) },
            e3: EndemicPoint { point: e3, exists: false, stable: None },
            sliding_point: None,
            sliding_control: None,
            ife: IfeStability::AllUnstable,
            attractor: Attractor::E2,
            y_limit: e2.0,
            bistable: false,
        },
        4 => SiriCaseReport {
            case_id,
            e2: EndemicPoint { point: e2, exists: false, stable: None },
            e3: EndemicPoint { point: e3, exists: false, stable: None },
            sliding_point: Some((y_hat, 1.0 - y_hat)),
            sliding_control: Some(asymptotic_sliding_control(p)),
            ife: IfeStability::AllUnstable,
            attractor: Attractor::Sliding,
            y_limit: y_hat,
            bistable: false,
        },
        _ => SiriCaseReport {
            case_id,
            e2: EndemicPoint { point: e2, exists: false, stable: None },
            e3: EndemicPoint { point: e3, exists: true, stable: Some(true) },
            sliding_point: None,
            sliding_control: None,
            ife: IfeStability::AllUnstable,
            attractor: Attractor::E3,
            y_limit: e3.0,
            bistable: false,
        },
    };
    Ok(report)
}

/// Case classification of the reduced dynamics under compromised immunity
/// (`beta_p < beta_hat_p`). Verdicts are local; the hybrid system is
/// bistable when a stable IFE segment coexists with the endemic attractor.
pub fn siri_weak_classify(p: &SiriParams) -> Result<SiriCaseReport> {
    p.validate()?;
    if p.sis.beta_p >= p.beta_hat_p {
        return Err(Error::WrongVariant(
            "beta_p >= beta_hat_p: use the strengthened-immunity (strong) variant".into(),
        ));
    }
    let sp = &p.sis;
    let y_hat = p.thresholds().y_hat_int.unwrap();
    let gamma = sp.gamma;
    let bhp = p.beta_hat_p;
    let sliding_gate = bhp * (1.0 - y_hat);
    let e2 = e2_point(p);
    let e3 = e3_point(p);

    let case_id = if gamma >= bhp {
        1
    } else if gamma >= sliding_gate {
        2
    } else if gamma >= sp.alpha * sliding_gate {
        3
    } else {
        4
    };

    if case_id == 1 {
        return Ok(SiriCaseReport {
            case_id,
            e2: EndemicPoint { point: e2, exists: false, stable: None },
            e3: EndemicPoint { point: e3, exists: false, stable: None },
            sliding_point: None,
            sliding_control: None,
            ife: IfeStability::AllStable,
            attractor: Attractor::InfectionFree,
            y_limit: 0.0,
            bistable: false,
        });
    }

    let ife = if gamma > sp.beta_p {
        IfeStability::StableBelow((sp.beta_p - gamma) / (sp.beta_p - bhp))
    } else {
        IfeStability::AllUnstable
    };
    let bistable = matches!(ife, IfeStability::StableBelow(_));

    let (e2rep, e3rep, sliding_point, sliding_control, attractor, y_limit) = match case_id {
        2 => (
            EndemicPoint { point: e2, exists: true, stable: Some(true) },
            EndemicPoint { point: e3, exists: false, stable: None },
            None,
            None,
            Attractor::E2,
            e2.0,
        ),
        3 => (
            EndemicPoint { point: e2, exists: false, stable: None },
            EndemicPoint { point: e3, exists: false, stable: None },
            Some((y_hat, 1.0 - y_hat)),
            Some(asymptotic_sliding_control(p)),
            Attractor::Sliding,
            y_hat,
        ),
        _ => (
            EndemicPoint { point: e2, exists: false, stable: None },
            EndemicPoint { point: e3, exists: true, stable: Some(true) },
            None,
            None,
            Attractor::E3,
            e3.0,
        ),
    };
    Ok(SiriCaseReport {
        case_id,
        e2: e2rep,
        e3: e3rep,
        sliding_point,
        sliding_control,
        ife,
        attractor,
        y_limit,
        bistable,
    })
}
