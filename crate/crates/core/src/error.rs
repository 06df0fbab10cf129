//! Error type shared across the crate.
//!
//! Every failure carries the measured quantity that triggered it, so a
//! caller can report why a construction was rejected without re-deriving
//! the diagnostic.

use thiserror::Error;

/// Errors produced by frame construction, classification, and certification.
#[derive(Debug, Clone, Error)]
pub enum FrameError {
    /// Operand shapes are incompatible with the requested operation.
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    /// A matrix that must be invertible is singular, or its inverse could
    /// not be certified against the residual tolerance.
    #[error("singular operator: smallest pivot magnitude {smallest_pivot:.3e}")]
    SingularOperator { smallest_pivot: f64 },

    /// A matrix supplied as a projection fails `P^2 = P`.
    #[error("not a projection: ||P^2 - P||_max = {residual:.3e}")]
    NotAProjection { residual: f64 },

    /// A supplied basis does not span the range of the projection.
    #[error("basis does not span the projection range: residual {residual:.3e}")]
    SpanMismatch { residual: f64 },

    /// A supplied factorization of the Bessel defect does not multiply back.
    #[error("factorization mismatch: residual {residual:.3e}")]
    FactorizationMismatch { residual: f64 },

    /// A pair expected to be an approximate dual has a certified gap >= 1.
    #[error("not an approximate dual: gap bounds {gap_left:.3e}, {gap_right:.3e}")]
    NotApproxDual { gap_left: f64, gap_right: f64 },

    /// No similarity witness reproduces the second pair from the first.
    #[error("pairs are not similar: witness residual {residual:.3e}")]
    NotSimilar { residual: f64 },

    /// An operation requiring a Parseval pair received something else.
    #[error("pair is not Parseval: residual {residual:.3e}")]
    NotParseval { residual: f64 },

    /// An operation requiring mutually orthogonal pairs received overlapping
    /// ones.
    #[error("pairs are not orthogonal: residual {residual:.3e}")]
    NotOrthogonal { residual: f64 },

    /// Interpolation mixing matrices fail the identity they must satisfy.
    #[error("mixing matrices do not combine to the identity: residual {residual:.3e}")]
    CombinationNotIdentity { residual: f64 },

    /// A perturbation hypothesis was refuted by a sampled counterexample or
    /// could not be established.
    #[error("hypothesis not certified: {context}")]
    HypothesisNotCertified { context: String },

    /// A scalar parameter is outside its admissible range.
    #[error("invalid parameter: {context}")]
    InvalidParameter { context: String },
}

pub type Result<T> = std::result::Result<T, FrameError>;

impl FrameError {
    pub(crate) fn shape(context: impl Into<String>) -> Self {
        FrameError::ShapeMismatch { context: context.into() }
    }
}
