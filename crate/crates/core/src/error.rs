use num_complex::Complex64;
use thiserror::Error;

/// Errors surfaced by the numerical pipeline.
///
/// Failures are diagnostic information, never silently patched: a pole
/// sitting on a contour or a count mismatch means the requested regime is
/// outside the asymptotic window, and the caller has to change parameters.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A resolvent was requested at a shift too close to an eigenvalue of
    /// the unperturbed operator, or a contour passes too close to a pole.
    #[error("pole collision: |lambda''*lambda_{index} - sigma| = {distance:.3e} at sigma = {sigma} (threshold {threshold:.3e})")]
    PoleCollision {
        index: usize,
        sigma: Complex64,
        distance: f64,
        threshold: f64,
    },

    /// Eigenvalue iteration did not converge within the iteration cap.
    #[error("eigenvalue iteration failed to converge: {0}")]
    NoConvergence(String),

    /// The number of perturbed eigenvalues inside a contour differs from
    /// the unperturbed count.
    #[error("eigenvalue count mismatch inside contour of radius {radius}: {inside_h} for H vs {inside_g} for lambda''*G")]
    CountMismatch {
        radius: f64,
        inside_h: usize,
        inside_g: usize,
    },

    /// Input parameters are outside the admissible window of the operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A structure-specific transformation was applied to a matrix that
    /// does not have the required structure.
    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    /// The embedded node-doubling estimate of a contour quadrature exceeds
    /// the acceptable tolerance.
    #[error("quadrature not converged: error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e} (order j = {order}, {nodes} nodes)")]
    QuadratureNotConverged {
        order: usize,
        nodes: usize,
        estimate: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
