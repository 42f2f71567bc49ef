use thiserror::Error;

/// Failures raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The dispersion relation has a vanishing denominator.
    #[error("degenerate dispersion denominator at omega={omega:e} rad/s")]
    Singular { omega: f64 },
    /// Argument lies on the branch cut of a multivalued function.
    #[error("argument on branch cut: {0}")]
    BranchCut(String),
    /// A series, quadrature or search failed to reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// A search found nothing inside the requested interval.
    #[error("not found: {0}")]
    NotFound(String),
    /// The mode is bound but its normalisation is unphysical.
    #[error("nonphysical mode: {0}")]
    Nonphysical(String),
    /// The discrete spectral grid cannot hold the propagated pulse.
    #[error("grid too small: {0}")]
    GridTooSmall(String),
}

pub type Result<T> = std::result::Result<T, Error>;
