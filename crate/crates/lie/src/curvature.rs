use nalgebra::DMatrix;
use norden_core::Tensor;

use crate::connection::koszul_lc;
use crate::model::LieAlgebraModel;

/// Levi-Civita curvature `R(x,y,z,w) = g(R(x,y)z, w)` with
/// `R(x,y) = [∇_x, ∇_y] - ∇_[x,y]`, its Ricci tensor and scalar curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData {
    pub r: Tensor,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
}

impl CurvatureData {
    /// Largest of the two skew-symmetry failures, relative to `|R|`.
    pub fn symmetry_residual(&self) -> f64 {
        let r = &self.r;
        let a = (r + r.permuted(&[1, 0, 2, 3])).max_abs();
        let b = (r + r.permuted(&[0, 1, 3, 2])).max_abs();
        a.max(b) / r.max_abs().max(1.0)
    }

    /// `σ_{x,y,z} R(x,y,z,w)`, relative to `|R|`.
    pub fn bianchi_residual(&self) -> f64 {
        let r = &self.r;
        (r + r.permuted(&[1, 2, 0, 3]) + r.permuted(&[2, 0, 1, 3])).max_abs() / r.max_abs().max(1.0)
    }

    pub fn ricci_symmetry_residual(&self) -> f64 {
        (&self.ricci - self.ricci.transpose()).amax() / self.ricci.amax().max(1.0)
    }
}

pub fn curvature(model: &LieAlgebraModel) -> CurvatureData {
    let d = model.dim();
    let gamma = koszul_lc(model).gamma().clone();
    let c = model.c();
    // R^l_{ijk} = Γ^m_{jk} Γ^l_{im} - Γ^m_{ik} Γ^l_{jm} - c^m_{ij} Γ^l_{mk}
    let r_up = Tensor::from_fn(d, 4, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        (0..d)
            .map(|m| {
                gamma[[j, k, m]] * gamma[[i, m, l]]
                    - gamma[[i, k, m]] * gamma[[j, m, l]]
                    - c[[i, j, m]] * gamma[[m, k, l]]
            })
            .sum()
    });
    let r = r_up.apply_slot(model.g(), 3);
    let g_inv = model.structure().g_inv();
    // ρ(y,z) = g^{ij} R(e_i, y, z, e_j)
    let ricci = r.contract_with(g_inv, (0, 3)).expect("rank 4").to_matrix();
    let scalar = (g_inv.transpose() * &ricci).trace();
    CurvatureData { r, ricci, scalar }
}

/// Relative failure of `L(x,y,Jz,Jw) = -L(x,y,z,w)`.
pub fn kahler_tensor_residual(l: &Tensor, j: &DMatrix<f64>) -> f64 {
    let lj = l.apply_slot(j, 2).apply_slot(j, 3);
    (&lj + l).max_abs() / l.max_abs().max(1e-300)
}

/// Curvature-like tensor that also satisfies the Kähler identity.
pub fn is_kahler_tensor(l: &Tensor, j: &DMatrix<f64>, tol: f64) -> bool {
    l.max_abs() == 0.0 || kahler_tensor_residual(l, j) < tol
}
