use thiserror::Error;

/// Everything that can go wrong between building a metric and writing a report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("metric is not positive definite at node {node} (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { node: usize, min_eigenvalue: f64 },

    #[error("fields live on different discretizations")]
    DiscretizationMismatch,

    #[error("region is empty")]
    EmptyRegion,

    #[error("mollification scale {eps} is under-resolved: need eps >= 2h = {min}")]
    UnderResolved { eps: f64, min: f64 },

    #[error("mollification scale {eps} must stay below eps0 = {eps0}")]
    EpsTooLarge { eps: f64, eps0: f64 },

    #[error("test function support touches the domain boundary")]
    SupportNotCompact,

    #[error("conformal factor is not positive at node {node} (u = {value:.3e})")]
    NonPositiveFactor { node: usize, value: f64 },

    #[error("potential must be non-negative (min f = {min:.3e})")]
    NegativePotential { min: f64 },

    #[error("solver breakdown: the operator is not coercive, the smallness condition c1*||f|| < 1 is likely violated ({detail})")]
    SolverBreakdown { detail: String },

    #[error("solver did not converge in {iterations} iterations (relative residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("solution is not positive at node {node} (u = {value:.3e})")]
    PositivityLost { node: usize, value: f64 },

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("radius {radius} is inside the compact set (r_K = {compact_radius})")]
    RadiusInsideCompactSet { radius: f64, compact_radius: f64 },

    #[error("radius {radius} does not fit in the domain (max {max})")]
    RadiusOutsideDomain { radius: f64, max: f64 },

    #[error("gate violated: {0}")]
    GateViolated(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::SolverBreakdown { .. }
                | Error::NotConverged { .. }
                | Error::PositivityLost { .. }
                | Error::NonPositiveFactor { .. }
                | Error::IllConditioned(_)
        )
    }
}
