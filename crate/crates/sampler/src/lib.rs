//! Seeded generation of structures, class-targeted fundamental tensors and
//! Lie-algebra models, plus a projection oracle that shares no linear
//! algebra with the main engine.

mod lie;
mod oracle;
mod spec;
mod structures;
mod tensors;

pub use lie::{random_lie_model, sample_lie_model, semidirect_constants};
pub use oracle::{oracle_decompose, oracle_project, rref_kernel, OracleSplit};
pub use spec::{derived_rng, ClassTarget, Parity, SampleSpec, SamplerError, PRNG};
pub use structures::{
    random_contact_b, random_norden, random_structure, sample_structure, SampledStructure, MAX_STRUCTURE_RETRIES,
};
pub use tensors::{
    random_f_even, random_f_odd, sample_f_in_class, sample_pair, SampledF, GENERICITY, MAX_CLASS_RETRIES,
};
