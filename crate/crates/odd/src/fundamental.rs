use nalgebra::DVector;
use norden_core::{GeomError, Result, Tensor, Tolerance};

use crate::structure::ContactBStructure;

/// The fundamental tensor `F(x,y,z) = g((∇_x φ)y, z)` with its Lee forms.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalOdd {
    f: Tensor,
    theta: DVector<f64>,
    theta_star: DVector<f64>,
    omega: DVector<f64>,
}

impl FundamentalOdd {
    /// Projects an arbitrary rank-3 tensor onto the admissible space.
    pub fn admissible(raw: &Tensor, s: &ContactBStructure) -> Self {
        Self::from_parts(admissible_projection(raw, s), s)
    }

    /// Accepts `f` only if it already satisfies the symmetry identities.
    pub fn new(f: Tensor, s: &ContactBStructure, tol: &Tolerance) -> Result<Self> {
        if f.dim() != s.dim() || f.rank() != 3 {
            return Err(GeomError::DimMismatch { expected: s.dim(), found: f.dim() });
        }
        let residual = admissibility_residual(&f, s);
        if !tol.passes(residual) {
            return Err(GeomError::AdmissibilityViolation { residual });
        }
        Ok(Self::from_parts(f, s))
    }

    pub fn zero(s: &ContactBStructure) -> Self {
        Self::from_parts(Tensor::zeros(s.dim(), 3), s)
    }

    pub(crate) fn from_parts(f: Tensor, s: &ContactBStructure) -> Self {
        let theta = lee_theta(&f, s);
        let theta_star = lee_theta_star(&f, s);
        let omega = lee_omega(&f, s);
        Self { f, theta, theta_star, omega }
    }

    pub fn f(&self) -> &Tensor {
        &self.f
    }

    pub fn theta(&self) -> &DVector<f64> {
        &self.theta
    }

    pub fn theta_star(&self) -> &DVector<f64> {
        &self.theta_star
    }

    pub fn omega(&self) -> &DVector<f64> {
        &self.omega
    }

    pub fn norm(&self) -> f64 {
        self.f.norm()
    }

    /// Relative failures of `θ*∘φ = -θ∘φ²` and `ω(ξ) = 0`.
    pub fn lee_residuals(&self, s: &ContactBStructure) -> (f64, f64) {
        let phi = s.phi();
        let lhs = phi.transpose() * &self.theta_star;
        let rhs = -(phi * phi).transpose() * &self.theta;
        let scale = (self.theta.norm() + self.theta_star.norm()).max(self.f.norm()).max(1e-300);
        let w = self.omega.dot(s.xi()).abs() / self.omega.norm().max(self.f.norm()).max(1e-300);
        ((lhs - rhs).norm() / scale, w)
    }

    /// `dη(x,y) = F(x,φy,ξ) - F(y,φx,ξ)`.
    pub fn d_eta(&self, s: &ContactBStructure) -> Tensor {
        let b = xi_phi_form(&self.f, s);
        &b - b.permuted(&[1, 0])
    }
}

/// `θ(z) = g^{ij} F(e_i, e_j, z)` with the trace over the contact distribution.
pub fn lee_theta(f: &Tensor, s: &ContactBStructure) -> DVector<f64> {
    f.contract_with(s.g_inv_h(), (0, 1)).expect("rank-3 tensor").to_vector()
}

/// `θ*(z) = g^{ij} F(e_i, φe_j, z)` over the contact distribution.
pub fn lee_theta_star(f: &Tensor, s: &ContactBStructure) -> DVector<f64> {
    lee_theta(&f.apply_slot(s.phi(), 1), s)
}

/// `ω(z) = F(ξ, ξ, z)`.
pub fn lee_omega(f: &Tensor, s: &ContactBStructure) -> DVector<f64> {
    f.insert_vector(0, s.xi()).insert_vector(0, s.xi()).to_vector()
}

/// `b(x,y) = F(x, φy, ξ)`.
pub(crate) fn xi_phi_form(f: &Tensor, s: &ContactBStructure) -> Tensor {
    f.apply_slot(s.phi(), 1).insert_vector(2, s.xi())
}

/// `F(x,φy,φz) + η(y)F(x,ξ,z) + η(z)F(x,y,ξ)`.
pub(crate) fn k_map(f: &Tensor, s: &ContactBStructure) -> Tensor {
    let eta = Tensor::from_covector(s.eta());
    let fy = f.insert_vector(1, s.xi());
    let fz = f.insert_vector(2, s.xi());
    let a = f.apply_slot(s.phi(), 1).apply_slot(s.phi(), 2);
    let b = eta.outer(&fy).permuted(&[1, 0, 2]);
    let c = fz.outer(&eta);
    a + b + c
}

/// Closed-form projector onto the admissible space: symmetrise in the last
/// two slots, average the horizontal block with its `φ`-image, keep the
/// mixed blocks and drop the `ξξ` block.
pub fn admissible_projection(raw: &Tensor, s: &ContactBStructure) -> Tensor {
    let g = 0.5 * (raw + raw.permuted(&[0, 2, 1]));
    let (h, v, phi) = (s.h_proj(), s.v_proj(), s.phi());
    let hh = g.apply_each(&[None, Some(h), Some(h)]);
    let pp = g.apply_each(&[None, Some(phi), Some(phi)]);
    let hv = g.apply_each(&[None, Some(h), Some(v)]);
    let vh = g.apply_each(&[None, Some(v), Some(h)]);
    0.5 * (hh + pp) + hv + vh
}

/// Largest relative failure of `F(x,y,z) = F(x,z,y)` and
/// `F(x,y,z) = F(x,φy,φz) + η(y)F(x,ξ,z) + η(z)F(x,y,ξ)`.
pub fn admissibility_residual(f: &Tensor, s: &ContactBStructure) -> f64 {
    let n = f.norm();
    if n == 0.0 {
        return 0.0;
    }
    let sym = (f - f.permuted(&[0, 2, 1])).norm();
    let k = (f - k_map(f, s)).norm();
    sym.max(k) / n
}
