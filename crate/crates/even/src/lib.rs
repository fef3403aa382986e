//! Almost complex manifolds with Norden metric, modelled on one tangent space.
//!
//! A [`NordenStructure`] fixes `(J, g)`. The fundamental tensor `F` is
//! classified into the basic classes `W1, W2, W3`, is recovered from the
//! Nijenhuis pair `(N, N^)`, and determines the B-, canonical and KT
//! connections together with their torsion decompositions.

mod classify;
mod conformal;
mod connection;
mod fundamental;
mod nijenhuis;
mod spaces;
mod structure;
mod torsion;

pub use classify::{class_set_name, classify_even, w1_nijenhuis_hat, ClassLabelEven, EvenRoute};
pub use conformal::conformal_transform_even;
pub use connection::{
    b_connection_even, b_potential, b_torsion_from_nijenhuis, canonical_connection_even, canonical_identity_residual,
    canonical_torsion, kt_connection_even, kt_potential, naturality_check_even, ConnectionEven, Naturality,
};
pub use fundamental::{admissibility_residual, admissible_projection, lee_form, w1_form, FundamentalEven};
pub use nijenhuis::{f_from_nijenhuis_even, nijenhuis_from_f_even, NijenhuisEven};
pub use spaces::{
    admissibility_constraints, antisymmetry_constraint, class_constraints, involution_a, involution_b,
    torsion_class_constraints, torsion_form, vectorial_torsion, EvenClass, TorsionClassEven,
};
pub use structure::{block_complex, validate_norden, NordenStructure};
pub use torsion::{decompose_torsion_even, TorsionEven};

/// `admissible_F_even`: projection onto tensors with the symmetries of `F`.
pub fn admissible_f_even(raw: &norden_core::Tensor, s: &NordenStructure) -> FundamentalEven {
    FundamentalEven::admissible(raw, s)
}
