use norden_core::{antisym12, sym12, GeomError, Result, Tensor, Tolerance};

use crate::fundamental::{admissibility_residual, xi_phi_form, FundamentalOdd};
use crate::structure::ContactBStructure;

/// The Nijenhuis tensor `[φ,φ] + dη⊗ξ` and its symmetric companion
/// `{φ,φ} + (L_ξ g)⊗ξ`, lowered to `(0,3)` tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct NijenhuisOdd {
    n: Tensor,
    n_hat: Tensor,
}

impl NijenhuisOdd {
    /// `N, N^ = {F(φx,y,z) - F(x,y,φz) + η(z)F(x,φy,ξ)}` antisymmetrised,
    /// resp. symmetrised, over `(x,y)`.
    pub fn from_fundamental(f: &FundamentalOdd, s: &ContactBStructure) -> Self {
        let a = nijenhuis_kernel(f.f(), s);
        Self { n: antisym12(&a), n_hat: sym12(&a) }
    }

    pub fn new(n: Tensor, n_hat: Tensor) -> Self {
        Self { n, n_hat }
    }

    pub fn n(&self) -> &Tensor {
        &self.n
    }

    pub fn n_hat(&self) -> &Tensor {
        &self.n_hat
    }

    pub fn norm(&self) -> f64 {
        (self.n.norm().powi(2) + self.n_hat.norm().powi(2)).sqrt()
    }

    /// Residuals of the identities satisfied by every pair built from an
    /// admissible `F`, relative to the pair norm.
    pub fn property_residuals(&self, s: &ContactBStructure) -> Vec<(&'static str, f64)> {
        let scale = self.norm();
        let rel = |d: Tensor| if scale == 0.0 { 0.0 } else { d.norm() / scale };
        let mut out: Vec<(&'static str, f64)> = Vec::with_capacity(9);
        out.extend(N_PROPERTIES.iter().copied().zip(identity_residuals(&self.n, -1.0, s, scale)));
        out.extend(N_HAT_PROPERTIES.iter().copied().zip(identity_residuals(&self.n_hat, 1.0, s, scale)));
        let phi = s.phi();
        let a = (&self.n + &self.n_hat).apply_slot(phi, 1).apply_slot(phi, 2).insert_vector(0, s.xi());
        out.push(("A(ξ,y,z) + A(ξ,z,y) = 0 for A = N(x,φy,φz) + N^(x,φy,φz)", rel(&a + a.permuted(&[1, 0]))));
        out
    }

    /// Recovers `F` from the pair.
    ///
    /// Rejects pairs violating the property block or not induced by any
    /// admissible tensor.
    pub fn to_fundamental(&self, s: &ContactBStructure, tol: &Tolerance) -> Result<FundamentalOdd> {
        if let Some((name, r)) = self.property_residuals(s).into_iter().find(|(_, r)| !tol.passes(*r)) {
            return Err(GeomError::PropertyViolation { property: name.into(), residual: r });
        }
        let f = fundamental_from_pair(&self.n, &self.n_hat, s);
        let adm = admissibility_residual(&f, s);
        if !tol.passes(adm) {
            return Err(GeomError::PropertyViolation { property: "recovered F is admissible".into(), residual: adm });
        }
        let f = FundamentalOdd::from_parts(f, s);
        let back = Self::from_fundamental(&f, s);
        let r = tol.relative(
            ((&back.n - &self.n).norm().powi(2) + (&back.n_hat - &self.n_hat).norm().powi(2)).sqrt(),
            self.norm(),
        );
        if !tol.passes(r) {
            return Err(GeomError::PropertyViolation {
                property: "pair is induced by an admissible F".into(),
                residual: r,
            });
        }
        Ok(f)
    }
}

/// `F(φx,y,z) - F(x,y,φz) + η(z)F(x,φy,ξ)`.
fn nijenhuis_kernel(f: &Tensor, s: &ContactBStructure) -> Tensor {
    let phi = s.phi();
    f.apply_slot(phi, 0) - f.apply_slot(phi, 2) + xi_phi_form(f, s).outer(&Tensor::from_covector(s.eta()))
}

const N_PROPERTIES: [&str; 4] =
    ["N(x,y,z) = -N(y,x,z)", "N(x,φy,φz) = N(x,φ²y,φ²z)", "N(φx,y,φz) = N(φ²x,y,φ²z)", "N(φx,φy,z) = -N(φ²x,φ²y,z)"];

const N_HAT_PROPERTIES: [&str; 4] = [
    "N^(x,y,z) = N^(y,x,z)",
    "N^(x,φy,φz) = N^(x,φ²y,φ²z)",
    "N^(φx,y,φz) = N^(φ²x,y,φ²z)",
    "N^(φx,φy,z) = -N^(φ²x,φ²y,z)",
];

fn identity_residuals(t: &Tensor, swap_sign: f64, s: &ContactBStructure, scale: f64) -> [f64; 4] {
    let rel = |d: Tensor| if scale == 0.0 { 0.0 } else { d.norm() / scale };
    let phi = s.phi();
    let p2 = phi * phi;
    let with =
        |m: &nalgebra::DMatrix<f64>, slots: &[usize]| slots.iter().fold(t.clone(), |acc, &sl| acc.apply_slot(m, sl));
    [
        rel(t - swap_sign * t.permuted(&[1, 0, 2])),
        rel(with(phi, &[1, 2]) - with(&p2, &[1, 2])),
        rel(with(phi, &[0, 2]) - with(&p2, &[0, 2])),
        rel(with(phi, &[0, 1]) + with(&p2, &[0, 1])),
    ]
}

/// `-1/4 {N(φx,y,z) + N(φx,z,y) + N^(φx,y,z) + N^(φx,z,y)}
///  + 1/2 η(x){N(ξ,y,φz) + N^(ξ,y,φz) + η(z)N^(ξ,ξ,φy)}`.
pub(crate) fn fundamental_from_pair(n: &Tensor, n_hat: &Tensor, s: &ContactBStructure) -> Tensor {
    let phi = s.phi();
    let sum = n + n_hat;
    let a = sum.apply_slot(phi, 0);
    let horizontal = -0.25 * (&a + a.permuted(&[0, 2, 1]));
    let b = sum.apply_slot(phi, 2).insert_vector(0, s.xi());
    let w = n_hat.apply_slot(phi, 2).insert_vector(0, s.xi()).insert_vector(0, s.xi());
    let eta = Tensor::from_covector(s.eta());
    let c = b + Tensor::from_covector(&w.to_vector()).outer(&eta);
    horizontal + 0.5 * eta.outer(&c)
}

pub fn nijenhuis_odd_from_f(f: &FundamentalOdd, s: &ContactBStructure) -> NijenhuisOdd {
    NijenhuisOdd::from_fundamental(f, s)
}

pub fn f_from_nijenhuis_odd(nij: &NijenhuisOdd, s: &ContactBStructure, tol: &Tolerance) -> Result<FundamentalOdd> {
    nij.to_fundamental(s, tol)
}
