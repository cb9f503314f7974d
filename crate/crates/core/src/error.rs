use thiserror::Error;

/// Errors produced by model construction, integration and classification.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter set violates one of the model assumptions. The message
    /// names the violated invariant, e.g. `beta_u > beta_p`.
    #[error("parameter invariant violated: {0}")]
    Params(String),

    /// A population-state vector is off the probability simplex.
    #[error("state off the simplex: {0}")]
    Simplex(String),

    /// An integration step left the unit box by more than the projection
    /// tolerance; usually means dt is too large for the chosen epsilon.
    #[error(
        "state left [0,1] at t = {t}: coordinate {index} = {value:.6e}; \
         reduce dt or increase epsilon"
    )]
    StepOutOfBounds { t: f64, index: usize, value: f64 },

    /// Invalid integration configuration.
    #[error("invalid integration config: {0}")]
    Config(String),

    /// Too many surface transitions without sliding engagement.
    #[error("chattering detected at t = {t}: {transitions} surface transitions; dt too large")]
    Chattering { t: f64, transitions: usize },

    /// No admissible equivalent control on the switching surface.
    #[error("surface is not sliding: {0}")]
    NoSliding(String),

    /// A reduced SIRI field was requested for the wrong parameter ordering.
    #[error("wrong hybrid variant: {0}")]
    WrongVariant(String),

    /// beta = beta_hat collapses the SIRI model to SIS; the regime
    /// classification quantities are undefined.
    #[error("degenerate case beta = beta_hat: model reduces to SIS")]
    DegenerateSis,
}

pub type Result<T> = std::result::Result<T, Error>;
