//! Coupled epidemic-behavioral dynamics.
//!
//! The crate simulates SIS and SIRI epidemics coupled to replicator
//! dynamics of protection adoption, computes and classifies every
//! equilibrium with its stability, resolves sliding-mode solutions of the
//! fast-behavior reduced hybrid systems, and sweeps the recovery rate to
//! reconstruct the transcritical bifurcation structure.
//!
//! ```
//! use epigame_core::integrator::{simulate, IntegrationConfig, SisSystem};
//! use epigame_core::model::SisParams;
//!
//! let params = SisParams::new(0.3, 0.15, 0.5, 0.1, 1.0, 2.0, 1.0, 80.0)?;
//! let cfg = IntegrationConfig { t_end: 500.0, epsilon: 0.1, ..Default::default() };
//! let traj = simulate(&SisSystem { params }, [0.2, 0.5, 0.5], &cfg)?;
//! // the interior equilibrium attracts: y -> 1/6, z_S -> 0.6
//! assert!((traj.final_window_mean(0, 0.1) - 1.0 / 6.0).abs() < 0.01);
//! assert!((traj.final_window_mean(1, 0.1) - 0.6).abs() < 0.02);
//! # Ok::<(), epigame_core::Error>(())
//! ```

pub mod bifurcation;
pub mod equilibria;
pub mod error;
pub mod hybrid;
pub mod integrator;
pub mod model;

pub use error::{Error, Result};
pub use model::{SiriParams, SiriState, SisParams, SisState, Thresholds};
