use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument falls outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// Quadrature did not reach the requested tolerance after the allowed node doublings.
    #[error("quadrature failed to converge at z = {z}: last error estimate {estimate:e} with {nodes} nodes")]
    Convergence { z: f64, estimate: f64, nodes: usize },

    /// The field reached the truncation boundary; a larger window is needed.
    #[error("window too small: edge intensity {edge_mass:e} at z = {z} exceeds tolerance")]
    WindowTooSmall { z: f64, edge_mass: f64 },

    #[error("norm drift {drift:e} at z = {z} exceeds tolerance")]
    NormDrift { z: f64, drift: f64 },

    /// A solver error tagged with the propagation distance being evaluated.
    #[error("{method} failed at z = {z}: {source}")]
    Solver {
        method: String,
        z: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True when the failure is a numerical/solver failure rather than bad input.
    pub fn is_solver_failure(&self) -> bool {
        match self {
            Error::Domain(_) | Error::LengthMismatch { .. } => false,
            Error::Convergence { .. } | Error::WindowTooSmall { .. } | Error::NormDrift { .. } => true,
            Error::Solver { source, .. } => source.is_solver_failure(),
        }
    }
}
