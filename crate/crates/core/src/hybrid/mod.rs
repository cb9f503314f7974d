//! Reduced slow dynamics in the fast-behavior limit: piecewise-smooth
//! fields with Filippov sliding-mode resolution on the indifference
//! surfaces.

pub mod reduced;
pub mod sim;

pub use reduced::{
    classify_reduced_sis, reduced_sis_field, reduced_siri_strong_field, reduced_siri_weak_field,
    sliding_control_sis, sliding_control_siri, ReducedOutcome, ReducedSiri, ReducedSiriEval,
    ReducedSis, ReducedSisEval, SiriVariant,
};
pub use sim::{simulate_hybrid, HybridMode, HybridRegion, HybridSystem, HybridTrajectory};
