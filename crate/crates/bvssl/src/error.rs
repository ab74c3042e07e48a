//! Error types shared across the library.

use thiserror::Error;

/// Errors produced by samplers, estimators, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A precision matrix had a non-positive diagonal entry or failed a
    /// positive-definiteness check.
    #[error("invalid precision matrix: {0}")]
    InvalidPrecision(String),

    /// Cholesky or related factorization broke down.
    #[error("numerical singularity in {context} (column {column})")]
    NumericalSingularity { context: String, column: usize },

    /// A sampler invariant was violated (empty truncation interval, cutpoint
    /// ordering, probability outside (0,1), ...).
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// Latent state inconsistent with observed categories.
    #[error("data corruption: {0}")]
    DataCorruption(String),

    /// Belief calibration requested at confidence 0 or 1.
    #[error("unbounded belief: confidence {0} must lie strictly inside (0,1)")]
    UnboundedBelief(f64),

    /// Clique enumeration exceeded the configured cap.
    #[error("graph too dense: clique count exceeded cap of {cap}")]
    GraphTooDense { cap: usize },

    /// A node is not covered by any clique.
    #[error("clique coverage error: node {0} not contained in any clique")]
    CliqueCoverage(usize),

    /// Argument outside the domain of a special function.
    #[error("domain error in {function}: {message}")]
    Domain { function: String, message: String },

    /// A series or iteration failed to reach the requested accuracy.
    #[error("accuracy failure in {function}: {message}")]
    Accuracy { function: String, message: String },

    /// Design matrix rank deficiency for a candidate model.
    #[error("collinear design: {0}")]
    Collinearity(String),

    /// A metric is undefined for the given inputs.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// A method under evaluation did not produce the required outputs.
    #[error("incomplete method output: {0}")]
    IncompleteMethod(String),

    /// Simulation covariance construction failed.
    #[error("simulation construction error: {0}")]
    SimConstruction(String),

    /// Posterior summary requested from a chain with no retained draws.
    #[error("empty chain: no retained draws")]
    EmptyChain,

    /// Dataset or prior-graph ingestion failure.
    #[error("ingestion error: {0}")]
    Ingestion(String),

    /// Configuration file or flag validation failure.
    #[error("config error: {0}")]
    Config(String),

    /// Error with the MCMC iteration index at which it occurred.
    #[error("iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach the sweep index at which a sampler error surfaced.
    pub fn at_iteration(self, iteration: usize) -> Self {
        Error::AtIteration {
            iteration,
            source: Box::new(self),
        }
    }

    /// Exit code per the CLI contract: 2 for validation problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Ingestion(_) | Error::Config(_) | Error::UnboundedBelief(_) => 2,
            Error::AtIteration { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
