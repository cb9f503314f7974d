//! Parameter and state types, payoff vectors, threshold quantities and the
//! right-hand sides of the coupled epidemic-behavioral systems.

pub mod field;
pub mod params;
pub mod payoff;
pub mod state;

pub use field::{effective_beta, field_sis, field_sis_raw, field_siri, field_siri_raw, field_siri_vanilla};
pub use params::{SiriParams, SisParams, Thresholds};
pub use payoff::{payoff_sis, payoff_siri, SiriPayoff, SisPayoff};
pub use state::{check_simplex, SiriState, SisState, SIMPLEX_TOL};
