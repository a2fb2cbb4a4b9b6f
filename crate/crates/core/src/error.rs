use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: argument outside the domain ({reason})")]
    Domain {
        function: &'static str,
        reason: String,
    },

    #[error("points coincide: separation {separation:e} is below {threshold:e}")]
    Coincident { separation: f64, threshold: f64 },

    #[error("separation {separation} is below the far-field minimum {minimum}")]
    TooClose { separation: f64, minimum: f64 },

    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),

    #[error(
        "quadrature did not converge: error estimate {error:e} exceeds tolerance {tolerance:e} \
         after {evaluations} integrand evaluations"
    )]
    NonConvergence {
        error: f64,
        tolerance: f64,
        evaluations: usize,
    },

    #[error(
        "{kind} Mie denominator of order {order} vanishes (|D| = {magnitude:e}); \
         morphology-dependent resonance outside the dilute small-sphere regime"
    )]
    Resonance {
        kind: &'static str,
        order: usize,
        magnitude: f64,
    },

    #[error("packing fraction {0} exceeds the random sequential addition limit 0.2")]
    TooDense(f64),

    #[error("packing failed: placed {placed} of {target} spheres after {attempts} attempts")]
    PackingFailure {
        placed: usize,
        target: usize,
        attempts: u64,
    },

    #[error("at least 2 samples are required, got {0}")]
    InsufficientSamples(usize),

    #[error("far-zone precondition violated: {0}")]
    FarZone(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("snapshot line {line}: {message}")]
    Snapshot { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
