use thiserror::Error;

/// Failures shared by every layer of the engine.
///
/// Variants carry enough detail to be rendered directly in a report; the
/// numeric residual is always the relative one that was compared against
/// the tolerance.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("slot {slot} out of range for a rank-{rank} tensor")]
    SlotOutOfRange { slot: usize, rank: usize },

    #[error("slots must be distinct, got ({0}, {0})")]
    RepeatedSlot(usize),

    #[error("non-finite entry at flat index {0}")]
    NonFinite(usize),

    #[error("axiom violated: {identity} (residual {residual:.3e})")]
    AxiomViolation { identity: String, residual: f64 },

    #[error("signature error: {0}")]
    Signature(String),

    #[error("direct sum failure: kernel dimensions add up to {found}, ambient dimension is {expected}")]
    DirectSumFailure { expected: usize, found: usize },

    #[error("rank deficiency: combined basis has rank {rank}, expected {expected}")]
    RankDeficiency { expected: usize, rank: usize },

    #[error("property violated: {property} (residual {residual:.3e})")]
    PropertyViolation { property: String, residual: f64 },

    #[error("inconsistent classification: {0}")]
    InconsistentClassification(String),

    #[error("class precondition failed: {0}")]
    ClassPrecondition(String),

    #[error("fundamental tensor is not admissible (residual {residual:.3e})")]
    AdmissibilityViolation { residual: f64 },

    #[error("structure constants violate the Jacobi identity (residual {residual:.3e})")]
    JacobiViolation { residual: f64 },

    #[error("structure constants are not antisymmetric (residual {residual:.3e})")]
    BracketNotAntisymmetric { residual: f64 },

    #[error("resampling exhausted after {attempts} attempts: {reason}")]
    ResampleExhausted { attempts: usize, reason: String },

    #[error("degenerate sample for target {target} after {attempts} attempts")]
    DegenerateSample { target: String, attempts: usize },
}

pub type Result<T> = std::result::Result<T, GeomError>;
