use nalgebra::DVector;
use norden_core::{antisym12, sym12, GeomError, Result, Tensor, Tolerance};

use crate::fundamental::FundamentalEven;
use crate::structure::NordenStructure;

/// The Nijenhuis tensor and its symmetric companion, as `(0,3)` tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct NijenhuisEven {
    n: Tensor,
    n_hat: Tensor,
    nu_hat: DVector<f64>,
    nu_hat_tilde: DVector<f64>,
}

impl NijenhuisEven {
    /// `N = {F(x,Jy,z) + F(Jx,y,z)}_[x<->y]`, `N^ = {..}_(x<->y)`.
    pub fn from_fundamental(f: &FundamentalEven, s: &NordenStructure) -> Self {
        let f = f.f();
        let a = f.apply_slot(s.j(), 1) + f.apply_slot(s.j(), 0);
        Self::new(antisym12(&a), sym12(&a), s)
    }

    pub fn new(n: Tensor, n_hat: Tensor, s: &NordenStructure) -> Self {
        let nu_hat = s.metric().contract(&n_hat, (0, 1)).expect("rank 3").to_vector();
        let nu_hat_tilde = s.assoc_metric().contract(&n_hat, (0, 1)).expect("rank 3").to_vector();
        Self { n, n_hat, nu_hat, nu_hat_tilde }
    }

    pub fn n(&self) -> &Tensor {
        &self.n
    }

    pub fn n_hat(&self) -> &Tensor {
        &self.n_hat
    }

    pub fn nu_hat(&self) -> &DVector<f64> {
        &self.nu_hat
    }

    pub fn nu_hat_tilde(&self) -> &DVector<f64> {
        &self.nu_hat_tilde
    }

    pub fn norm(&self) -> f64 {
        (self.n.norm().powi(2) + self.n_hat.norm().powi(2)).sqrt()
    }

    /// Residuals of the algebraic identities every pair built from an
    /// admissible `F` satisfies, relative to the pair norm.
    pub fn property_residuals(&self, s: &NordenStructure) -> Vec<(&'static str, f64)> {
        let scale = self.norm();
        let mut out: Vec<(&'static str, f64)> =
            N_PROPERTIES.iter().copied().zip(identity_residuals(&self.n, -1.0, s, scale)).collect();
        out.extend(N_HAT_PROPERTIES.iter().copied().zip(identity_residuals(&self.n_hat, 1.0, s, scale)));
        out
    }

    /// Recovers `F = -1/4 {N(Jx,y,z) + N(Jx,z,y) + N^(Jx,y,z) + N^(Jx,z,y)}`.
    pub fn to_fundamental(&self, s: &NordenStructure, tol: &Tolerance) -> Result<FundamentalEven> {
        if let Some((name, r)) = self.property_residuals(s).into_iter().find(|(_, r)| !tol.passes(*r)) {
            return Err(GeomError::PropertyViolation { property: name.into(), residual: r });
        }
        Ok(FundamentalEven::from_parts(fundamental_from_pair(&self.n, &self.n_hat, s), s))
    }
}

const N_PROPERTIES: [&str; 6] = [
    "N(x,y,z) = -N(y,x,z)",
    "N(x,y,z) = N(x,Jy,Jz)",
    "N(x,y,z) = N(Jx,y,Jz)",
    "N(x,y,z) = -N(Jx,Jy,z)",
    "N(Jx,y,z) = N(x,Jy,z)",
    "N(Jx,y,z) = -N(x,y,Jz)",
];

const N_HAT_PROPERTIES: [&str; 6] = [
    "N^(x,y,z) = N^(y,x,z)",
    "N^(x,y,z) = N^(x,Jy,Jz)",
    "N^(x,y,z) = N^(Jx,y,Jz)",
    "N^(x,y,z) = -N^(Jx,Jy,z)",
    "N^(Jx,y,z) = N^(x,Jy,z)",
    "N^(Jx,y,z) = -N^(x,y,Jz)",
];

/// The six identities in the order of the name tables; `swap_sign` is the
/// parity under exchanging the first two slots.
fn identity_residuals(t: &Tensor, swap_sign: f64, s: &NordenStructure, scale: f64) -> [f64; 6] {
    let rel = |d: Tensor| if scale == 0.0 { 0.0 } else { d.norm() / scale };
    let with_j = |slots: &[usize]| slots.iter().fold(t.clone(), |acc, &sl| acc.apply_slot(s.j(), sl));
    [
        rel(t - swap_sign * t.permuted(&[1, 0, 2])),
        rel(t - with_j(&[1, 2])),
        rel(t - with_j(&[0, 2])),
        rel(t + with_j(&[0, 1])),
        rel(with_j(&[0]) - with_j(&[1])),
        rel(with_j(&[0]) + with_j(&[2])),
    ]
}

pub(crate) fn fundamental_from_pair(n: &Tensor, n_hat: &Tensor, s: &NordenStructure) -> Tensor {
    let a = (n + n_hat).apply_slot(s.j(), 0);
    -0.25 * (&a + a.permuted(&[0, 2, 1]))
}

pub fn nijenhuis_from_f_even(f: &FundamentalEven, s: &NordenStructure) -> NijenhuisEven {
    NijenhuisEven::from_fundamental(f, s)
}

pub fn f_from_nijenhuis_even(nij: &NijenhuisEven, s: &NordenStructure, tol: &Tolerance) -> Result<FundamentalEven> {
    nij.to_fundamental(s, tol)
}
