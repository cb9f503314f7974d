//! Closed-form equilibrium computation, analytic Jacobians, eigenvalue
//! classification, and the regime classifiers of the reduced systems.

pub mod eigen;
pub mod sis;
pub mod siri;

pub use eigen::{
    char_poly_residual, cubic_roots, eigen3, frobenius, sis_jacobian, stability_from_eigenvalues,
    Stability, HYPERBOLIC_TOL,
};
pub use sis::{
    equilibrium_coordinates, render_table, reports_to_json, sis_equilibria, table1_verdict,
    AnalyticVerdict, EquilibriumReport, SisLabel,
};
pub use siri::{
    siri_fast_equilibria, siri_strong_classify, siri_weak_classify, vanilla_siri_classify,
    Attractor, EndemicPoint, FastChoice, FastEquilibrium, IfeStability, SiriCaseReport,
    VanillaRegime, VanillaSiriRegime,
};
