use crate::error::Result;
use crate::model::params::{SiriParams, SisParams};
use crate::model::state::check_simplex;

/// Payoffs per (compartment, action) pair for the SIS game.
///
/// The infected entries are state-independent constants; the susceptible
/// entries trade the protection cost against the instantaneous infection
/// risk at the current population state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SisPayoff {
    pub f_su: f64,
    pub f_sp: f64,
    pub f_iu: f64,
    pub f_ip: f64,
}

impl SisPayoff {
    /// F_SU - F_SP, the replicator drive of the susceptible subpopulation.
    pub fn susceptible_gap(&self) -> f64 {
        self.f_su - self.f_sp
    }
}

/// Payoffs per (compartment, action) pair for the SIRI game; recovered
/// individuals face the reinfection rates instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiriPayoff {
    pub f_su: f64,
    pub f_sp: f64,
    pub f_iu: f64,
    pub f_ip: f64,
    pub f_ru: f64,
    pub f_rp: f64,
}

impl SiriPayoff {
    pub fn susceptible_gap(&self) -> f64 {
        self.f_su - self.f_sp
    }

    pub fn recovered_gap(&self) -> f64 {
        self.f_ru - self.f_rp
    }
}

/// Payoff vector at population state `x = (x_SU, x_SP, x_IU, x_IP)`.
pub fn payoff_sis(x: &[f64; 4], p: &SisParams) -> Result<SisPayoff> {
    check_simplex(x)?;
    let risk = p.beta_u * x[2] + p.beta_p * x[3];
    Ok(SisPayoff {
        f_su: -p.loss * risk,
        f_sp: -p.c_p - p.loss * p.alpha * risk,
        f_iu: -p.c_iu,
        f_ip: -p.c_ip,
    })
}

/// Payoff vector at population state
/// `x = (x_SU, x_SP, x_IU, x_IP, x_RU, x_RP)`.
pub fn payoff_siri(x: &[f64; 6], p: &SiriParams) -> Result<SiriPayoff> {
    check_simplex(x)?;
    let risk = p.sis.beta_u * x[2] + p.sis.beta_p * x[3];
    let risk_hat = p.beta_hat_u * x[2] + p.beta_hat_p * x[3];
    let s = &p.sis;
    Ok(SiriPayoff {
        f_su: -s.loss * risk,
        f_sp: -s.c_p - s.loss * s.alpha * risk,
        f_iu: -s.c_iu,
        f_ip: -s.c_ip,
        f_ru: -s.loss * risk_hat,
        f_rp: -s.c_p - s.loss * s.alpha * risk_hat,
    })
}
