use crate::error::Result;
use crate::model::params::{SiriParams, SisParams};
use crate::model::state::{SiriState, SisState};

/// Transmission rate averaged over protection choices,
/// `(z_S + alpha (1 - z_S)) (beta_u z_I + beta_p (1 - z_I))`.
pub fn effective_beta(z_s: f64, z_i: f64, p: &SisParams) -> f64 {
    (z_s + p.alpha * (1.0 - z_s)) * (p.beta_u * z_i + p.beta_p * (1.0 - z_i))
}

/// Time derivative of the coupled SIS state `(y, z_S, z_I)`.
pub fn field_sis(state: &SisState, p: &SisParams) -> SisState {
    let [dy, dzs, dzi] = field_sis_raw(&state.to_array(), p);
    SisState { y: dy, z_s: dzs, z_i: dzi }
}

/// Same field on raw coordinates; used by the integrator, whose intermediate
/// stages may sit slightly outside the unit box.
pub fn field_sis_raw(state: &[f64; 3], p: &SisParams) -> [f64; 3] {
    let [y, z_s, z_i] = *state;
    let f_y = ((1.0 - y) * effective_beta(z_s, z_i, p) - p.gamma) * y;
    let risk = (p.beta_u * z_i + p.beta_p * (1.0 - z_i)) * y;
    let f_s = z_s * (1.0 - z_s) * (p.c_p - p.loss * (1.0 - p.alpha) * risk);
    let f_i = z_i * (1.0 - z_i) * (p.c_ip - p.c_iu);
    [f_y, f_s, f_i]
}

/// Time derivative of the coupled SIRI state `(s, y, r, z_S, z_I, z_R)`.
/// The input must lie on the compartment simplex.
pub fn field_siri(state: &SiriState, p: &SiriParams) -> Result<SiriState> {
    state.validate()?;
    let d = field_siri_raw(&state.to_array(), p);
    Ok(SiriState::from_array(d))
}

pub fn field_siri_raw(state: &[f64; 6], p: &SiriParams) -> [f64; 6] {
    let [s, y, r, z_s, z_i, z_r] = *state;
    let sp = &p.sis;
    let rate_s = (sp.beta_u * z_i + sp.beta_p * (1.0 - z_i)) * (z_s + sp.alpha * (1.0 - z_s));
    let rate_r =
        (p.beta_hat_u * z_i + p.beta_hat_p * (1.0 - z_i)) * (z_r + sp.alpha * (1.0 - z_r));
    let new_infections = rate_s * s * y;
    let reinfections = rate_r * r * y;
    [
        -new_infections,
        new_infections + reinfections - sp.gamma * y,
        -reinfections + sp.gamma * y,
        z_s * (1.0 - z_s)
            * (sp.c_p - sp.loss * (1.0 - sp.alpha) * (sp.beta_u * z_i + sp.beta_p * (1.0 - z_i)) * y),
        z_i * (1.0 - z_i) * (sp.c_ip - sp.c_iu),
        z_r * (1.0 - z_r)
            * (sp.c_p
                - sp.loss
                    * (1.0 - sp.alpha)
                    * (p.beta_hat_u * z_i + p.beta_hat_p * (1.0 - z_i))
                    * y),
    ]
}

/// SIRI compartment dynamics without protective behavior: susceptibles are
/// infected at rate `beta`, recovered reinfected at rate `beta_hat`.
pub fn field_siri_vanilla(s: f64, y: f64, r: f64, beta: f64, beta_hat: f64, gamma: f64) -> [f64; 3] {
    [
        -beta * s * y,
        beta * s * y + beta_hat * r * y - gamma * y,
        gamma * y - beta_hat * r * y,
    ]
}
