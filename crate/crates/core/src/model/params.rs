use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the coupled SIS epidemic-behavioral model.
///
/// Rates are per unit of (dimensionless) simulation time. Protection scales
/// the infection probability of the adopter by `alpha` and an infected
/// individual transmits at `beta_p` instead of `beta_u` when protected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SisParams {
    /// Transmission rate of an unprotected infected individual.
    pub beta_u: f64,
    /// Transmission rate of a protected infected individual.
    pub beta_p: f64,
    /// Infection-probability factor for protected susceptibles, in (0,1).
    pub alpha: f64,
    /// Recovery rate.
    pub gamma: f64,
    /// Cost of adopting protection.
    pub c_p: f64,
    /// Cost for an infected individual who stays unprotected.
    pub c_iu: f64,
    /// Cost for an infected individual who adopts protection.
    pub c_ip: f64,
    /// Loss upon infection.
    pub loss: f64,
}

impl SisParams {
    pub fn new(
        beta_u: f64,
        beta_p: f64,
        alpha: f64,
        gamma: f64,
        c_p: f64,
        c_iu: f64,
        c_ip: f64,
        loss: f64,
    ) -> Result<Self> {
        let p = Self { beta_u, beta_p, alpha, gamma, c_p, c_iu, c_ip, loss };
        p.validate()?;
        Ok(p)
    }

    /// Checks the model assumptions, naming the first violated one.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Params(msg.to_string()));
        if !(self.beta_p >= 0.0 && self.beta_u > self.beta_p) {
            return fail("beta_u > beta_p >= 0");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail("alpha in (0,1)");
        }
        if !(self.gamma > 0.0) {
            return fail("gamma > 0");
        }
        if !(self.c_p > 0.0) {
            return fail("c_P > 0");
        }
        if !(self.c_ip >= 0.0 && self.c_iu > self.c_ip) {
            return fail("c_IU > c_IP >= 0");
        }
        if !(self.loss > 0.0) {
            return fail("L > 0");
        }
        for (name, v) in [
            ("beta_u", self.beta_u),
            ("beta_p", self.beta_p),
            ("alpha", self.alpha),
            ("gamma", self.gamma),
            ("c_P", self.c_p),
            ("c_IU", self.c_iu),
            ("c_IP", self.c_ip),
            ("L", self.loss),
        ] {
            if !v.is_finite() {
                return Err(Error::Params(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Same parameters with the recovery rate replaced (bifurcation sweeps).
    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { gamma, ..*self }
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds::for_sis(self)
    }
}

/// Parameters of the coupled SIRI model: the SIS set plus reinfection rates
/// for recovered individuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiriParams {
    pub sis: SisParams,
    /// Reinfection rate due to an unprotected infected individual.
    pub beta_hat_u: f64,
    /// Reinfection rate due to a protected infected individual.
    pub beta_hat_p: f64,
}

impl SiriParams {
    pub fn new(sis: SisParams, beta_hat_u: f64, beta_hat_p: f64) -> Result<Self> {
        let p = Self { sis, beta_hat_u, beta_hat_p };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.sis.validate()?;
        if !(self.beta_hat_p >= 0.0 && self.beta_hat_u > self.beta_hat_p) {
            return Err(Error::Params("beta_hat_u > beta_hat_p >= 0".to_string()));
        }
        if !self.beta_hat_u.is_finite() {
            return Err(Error::Params("beta_hat_u must be finite".to_string()));
        }
        Ok(())
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { sis: self.sis.with_gamma(gamma), ..*self }
    }

    /// True when initial infection strengthens immunity (`beta_p > beta_hat_p`),
    /// the regime where the protected-susceptible indifference level sits
    /// below the protected-recovered one.
    pub fn strengthened_immunity(&self) -> bool {
        self.sis.beta_p > self.beta_hat_p
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds::for_siri(self)
    }
}

/// Critical prevalence and endemic levels that organize every equilibrium
/// statement. Values are returned raw: endemic levels may be negative and
/// indifference levels may be `+inf` (protection useless or free); the
/// existence logic downstream consumes the signs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Prevalence at which susceptibles are indifferent about protection.
    pub y_int: f64,
    /// Prevalence at which recovered are indifferent (SIRI only).
    pub y_hat_int: Option<f64>,
    /// Endemic level with all susceptibles unprotected.
    pub y_u: f64,
    /// Endemic level with all susceptibles protected.
    pub y_p: f64,
    /// Protection split of susceptibles at the interior equilibrium.
    pub z_s_int: f64,
}

impl Thresholds {
    pub fn for_sis(p: &SisParams) -> Self {
        let y_int = indifference_level(p.c_p, p.loss, p.alpha, p.beta_p);
        Self {
            y_int,
            y_hat_int: None,
            y_u: 1.0 - p.gamma / p.beta_p,
            y_p: 1.0 - p.gamma / (p.alpha * p.beta_p),
            z_s_int: interior_split(p, y_int),
        }
    }

    pub fn for_siri(p: &SiriParams) -> Self {
        let mut t = Self::for_sis(&p.sis);
        t.y_hat_int = Some(indifference_level(
            p.sis.c_p,
            p.sis.loss,
            p.sis.alpha,
            p.beta_hat_p,
        ));
        t
    }
}

/// c_P / (L (1-alpha) beta); `+inf` when the denominator vanishes.
fn indifference_level(c_p: f64, loss: f64, alpha: f64, beta: f64) -> f64 {
    let denom = loss * (1.0 - alpha) * beta;
    if denom == 0.0 {
        f64::INFINITY
    } else {
        c_p / denom
    }
}

fn interior_split(p: &SisParams, y_int: f64) -> f64 {
    (p.gamma / (p.beta_p * (1.0 - y_int)) - p.alpha) / (1.0 - p.alpha)
}
