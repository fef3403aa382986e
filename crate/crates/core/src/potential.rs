//! Bijection between potentials and torsions of metric connections.
//!
//! Both are rank-3 covariant tensors: the potential is skew in its last two
//! slots, the torsion in its first two.

use crate::tensor::Tensor;

/// `T(x,y,z) = Q(x,y,z) - Q(y,x,z)`.
pub fn torsion_from_potential(q: &Tensor) -> Tensor {
    q - q.permuted(&[1, 0, 2])
}

/// `2Q(x,y,z) = T(x,y,z) - T(y,z,x) + T(z,x,y)`.
pub fn potential_from_torsion(t: &Tensor) -> Tensor {
    0.5 * (t - t.permuted(&[1, 2, 0]) + t.permuted(&[2, 0, 1]))
}

/// Relative failure of `Q(x,y,z) = -Q(x,z,y)`.
pub fn metricity_residual(q: &Tensor) -> f64 {
    let n = q.norm();
    if n == 0.0 {
        return 0.0;
    }
    (q + q.permuted(&[0, 2, 1])).norm() / n
}

/// Relative failure of total skew-symmetry of a torsion (a 3-form).
pub fn total_skew_residual(t: &Tensor) -> f64 {
    let n = t.norm();
    if n == 0.0 {
        return 0.0;
    }
    ((t + t.permuted(&[1, 0, 2])).norm() + (t + t.permuted(&[0, 2, 1])).norm()) / n
}
