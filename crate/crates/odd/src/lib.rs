//! Almost contact structures with B-metric, modelled on one tangent space.
//!
//! A [`ContactBStructure`] fixes `(φ, ξ, η, g)`. The fundamental tensor `F`
//! splits into eleven basic classes, is recovered from the Nijenhuis pair,
//! and determines the `φB`, `φ`-canonical and `φKT` connections, whose
//! torsion splits into fifteen classes.

mod classify;
mod conformal;
mod connection;
mod fundamental;
mod nijenhuis;
mod spaces;
mod structure;
mod torsion;

pub use classify::{
    class_of_torsion, classify_odd, nijenhuis_of_class, odd_class_set_name, t8_companion, ClassLabelOdd, OddRoute,
};
pub use conformal::contact_conformal_transform;
pub use connection::{
    d_eta_eta, eta_wedge_d_eta, naturality_check_odd, phi_b_connection, phi_b_potential, phi_b_torsion,
    phi_b_torsion_from_nijenhuis, phi_b_torsion_normal_horizontal, phi_canonical_connection,
    phi_canonical_identity_residual, phi_canonical_potential, phi_canonical_torsion_from_nijenhuis, phi_kt_connection,
    phi_kt_torsion, ConnectionOdd, NaturalityOdd,
};
pub use fundamental::{
    admissibility_residual, admissible_projection, lee_omega, lee_theta, lee_theta_star, FundamentalOdd,
};
pub use nijenhuis::{f_from_nijenhuis_odd, nijenhuis_odd_from_f, NijenhuisOdd};
pub use spaces::{
    admissibility_constraints, antisymmetry_constraint, class_constraints, f10_form, f11_form, f1_form, f4_form,
    f5_form, t15_form, torsion_block_constraints, torsion_t, torsion_t_hat, torsion_t_star, vertical_form, OddClass,
    TorsionBlock, TorsionClassOdd,
};
pub use structure::{block_contact, validate_contact_b, ContactBStructure};
pub use torsion::{decompose_torsion_odd, TorsionOdd};

/// Projection onto tensors with the symmetries of `F`.
pub fn admissible_f_odd(raw: &norden_core::Tensor, s: &ContactBStructure) -> FundamentalOdd {
    FundamentalOdd::admissible(raw, s)
}
