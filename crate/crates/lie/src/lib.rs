//! Left-invariant structures on Lie algebras.
//!
//! Structure constants and a Norden or almost contact B-metric structure
//! determine the Levi-Civita connection through the Koszul formula, and
//! from it the fundamental tensor, the Nijenhuis pair by brackets, and the
//! curvature.

mod connection;
mod curvature;
mod model;
mod nijenhuis;

pub use connection::{
    d_eta_bracket, fundamental_from_model, koszul_lc, lie_derivative, lie_derivative_metric, LeviCivita,
    ModelFundamental,
};
pub use curvature::{curvature, is_kahler_tensor, kahler_tensor_residual, CurvatureData};
pub use model::{jacobi_residual, LieAlgebraModel, ModelStructure, JACOBI_TOLERANCE};
pub use nijenhuis::bracket_nijenhuis;
