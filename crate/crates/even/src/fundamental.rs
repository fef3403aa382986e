use nalgebra::DVector;
use norden_core::{cyclic_sum, GeomError, Result, Tensor, Tolerance};

use crate::structure::NordenStructure;

/// The fundamental tensor `F(x,y,z) = g((∇_x J)y, z)` with its Lee forms.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalEven {
    f: Tensor,
    theta: DVector<f64>,
    theta_tilde: DVector<f64>,
}

impl FundamentalEven {
    /// Projects an arbitrary rank-3 tensor onto the admissible space.
    pub fn admissible(raw: &Tensor, s: &NordenStructure) -> Self {
        Self::from_parts(admissible_projection(raw, s), s)
    }

    /// Accepts `f` only if it already satisfies both symmetry identities.
    pub fn new(f: Tensor, s: &NordenStructure, tol: &Tolerance) -> Result<Self> {
        if f.dim() != s.dim() || f.rank() != 3 {
            return Err(GeomError::DimMismatch { expected: s.dim(), found: f.dim() });
        }
        let residual = admissibility_residual(&f, s);
        if !tol.passes(residual) {
            return Err(GeomError::AdmissibilityViolation { residual });
        }
        Ok(Self::from_parts(f, s))
    }

    pub fn zero(s: &NordenStructure) -> Self {
        Self::from_parts(Tensor::zeros(s.dim(), 3), s)
    }

    pub(crate) fn from_parts(f: Tensor, s: &NordenStructure) -> Self {
        let theta = lee_form(&f, s);
        let theta_tilde = s.assoc_metric().contract(&f, (0, 1)).expect("rank-3 tensor").to_vector();
        Self { f, theta, theta_tilde }
    }

    pub fn f(&self) -> &Tensor {
        &self.f
    }

    pub fn theta(&self) -> &DVector<f64> {
        &self.theta
    }

    pub fn theta_tilde(&self) -> &DVector<f64> {
        &self.theta_tilde
    }

    pub fn norm(&self) -> f64 {
        self.f.norm()
    }

    /// Relative failure of `θ~ = θ∘J`.
    pub fn lee_residual(&self, s: &NordenStructure) -> f64 {
        let want = s.j().transpose() * &self.theta;
        (&self.theta_tilde - &want).norm() / want.norm().max(self.f.norm()).max(1e-300)
    }
}

/// `θ(z) = g^{ij} F(e_i, e_j, z)`.
pub fn lee_form(f: &Tensor, s: &NordenStructure) -> DVector<f64> {
    s.metric().contract(f, (0, 1)).expect("rank-3 tensor").to_vector()
}

/// `F(x, Jy, Jz)`.
pub(crate) fn k_map(f: &Tensor, s: &NordenStructure) -> Tensor {
    f.apply_slot(s.j(), 1).apply_slot(s.j(), 2)
}

/// `P = (Id + S)(Id + K)/4` with `S` the swap of the last two slots.
pub fn admissible_projection(raw: &Tensor, s: &NordenStructure) -> Tensor {
    let g = raw + k_map(raw, s);
    0.25 * (&g + g.permuted(&[0, 2, 1]))
}

/// Largest relative failure of `F(x,y,z) = F(x,z,y) = F(x,Jy,Jz)`.
pub fn admissibility_residual(f: &Tensor, s: &NordenStructure) -> f64 {
    let n = f.norm();
    if n == 0.0 {
        return 0.0;
    }
    let sym = (f - f.permuted(&[0, 2, 1])).norm();
    let jj = (f - k_map(f, s)).norm();
    sym.max(jj) / n
}

/// `(1/2n){g(x,y)θ(z) + g(x,Jy)θ(Jz)}` symmetrised over `(y,z)`: the
/// tensor of the first basic class with Lee form `θ`.
pub fn w1_form(theta: &DVector<f64>, s: &NordenStructure) -> Tensor {
    let g = s.g();
    let gt = s.assoc_metric().g();
    let tj = s.j().transpose() * theta;
    let c = 1.0 / (2.0 * s.n() as f64);
    let a = Tensor::from_fn3(s.dim(), |x, y, z| c * (g[(x, y)] * theta[z] + gt[(x, y)] * tj[z]));
    &a + a.permuted(&[0, 2, 1])
}

/// `σF(x, y, Jz)`.
pub(crate) fn cyclic_j(f: &Tensor, s: &NordenStructure) -> Tensor {
    cyclic_sum(&f.apply_slot(s.j(), 2))
}
