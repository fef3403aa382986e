use norden_core::GeomError;
use norden_sampler::SamplerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid document: {0}")]
    Schema(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const INVARIANT_FAILURE: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const INTERNAL: i32 = 3;
    pub const PRECONDITION: i32 = 4;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::Schema(_) => exit::INPUT,
            CliError::Geom(e) | CliError::Sampler(SamplerError::Geom(e)) => geom_exit_code(e),
            CliError::Sampler(_) => exit::INPUT,
        }
    }
}

pub fn geom_exit_code(e: &GeomError) -> i32 {
    use GeomError::*;
    match e {
        DimMismatch { .. }
        | NonFinite(_)
        | AxiomViolation { .. }
        | Signature(_)
        | PropertyViolation { .. }
        | AdmissibilityViolation { .. }
        | JacobiViolation { .. }
        | BracketNotAntisymmetric { .. }
        | DegenerateSample { .. } => exit::INPUT,
        ClassPrecondition(_) => exit::PRECONDITION,
        SlotOutOfRange { .. }
        | RepeatedSlot(_)
        | DirectSumFailure { .. }
        | RankDeficiency { .. }
        | InconsistentClassification(_)
        | ResampleExhausted { .. } => exit::INTERNAL,
    }
}
