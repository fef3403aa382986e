//! Dense multilinear algebra for small real vector spaces.
//!
//! Tensors are covariant and stored densely; metrics may be indefinite.
//! Linear conditions on tensor space are carried by [`ConstraintOperator`]s
//! and their joint kernels by orthonormal [`Subspace`] bases.

pub mod error;
pub mod metric;
pub mod potential;
pub mod subspace;
pub mod tensor;
pub mod tolerance;

pub use error::{GeomError, Result};
pub use metric::{contract_metric, MetricPair};
pub use subspace::{kernel_basis, numerical_rank, project_subspace, ConstraintOperator, DirectSum, Subspace};
pub use tensor::{antisym12, bracket, cyclic_sum, sym12, Bracket, Tensor};
pub use tolerance::Tolerance;

/// Relative difference `|a - b| / max(|b|, floor)`, the standard residual
/// used throughout.
pub fn rel_diff(a: &Tensor, b: &Tensor, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}
