use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {z} lies outside the closed unit disk")]
    Domain { z: Complex64 },

    #[error("invalid function spec: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pole of h' at {at}")]
    Pole { at: Complex64 },

    #[error("h' vanishes at {at}")]
    CriticalPoint { at: Complex64 },

    #[error("h' has {count} zero(s) in the disk besides the origin")]
    InteriorCriticalPoints { count: i64 },

    #[error(
        "quadrature did not converge at max depth: error estimate {worst_error:e} on [{lo}, {hi}]"
    )]
    Quadrature { worst_error: f64, lo: f64, hi: f64 },

    #[error("H vanishes on the boundary near t = {t} (|H| = {modulus:e})")]
    HVanishesOnBoundary { t: f64, modulus: f64 },

    #[error("H blows up on the boundary: pole of h' at {at}")]
    HPoleOnBoundary { at: Complex64 },

    #[error("phase unwrapping needed more than {limit} samples")]
    UnwrapFailure { limit: usize },

    #[error("probe {w} is within {distance:e} of the curve (clearance {clearance:e})")]
    IndeterminateProbe {
        w: Complex64,
        distance: f64,
        clearance: f64,
    },

    #[error("curve too coarse for a reliable winding number about {w} after refinement")]
    Resolution { w: Complex64 },

    #[error("{indeterminate} of {total} probes were indeterminate")]
    ScanQuality { indeterminate: usize, total: usize },

    #[error("arc {arc} has only {samples} samples (need at least 3)")]
    InsufficientResolution { arc: usize, samples: usize },

    #[error("criterion root t = {t} is not a zero of phi' (|phi'| = {modulus:e}, tol {tol:e})")]
    CuspMismatch { t: f64, modulus: f64, tol: f64 },

    #[error("criterion report does not certify the theorem; pass an override to trace cusps anyway")]
    CriterionUnavailable,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
