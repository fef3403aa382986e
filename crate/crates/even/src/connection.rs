use norden_core::potential::{potential_from_torsion, torsion_from_potential};
use norden_core::{cyclic_sum, GeomError, Result, Tensor, Tolerance};

use crate::fundamental::FundamentalEven;
use crate::nijenhuis::NijenhuisEven;
use crate::structure::NordenStructure;
use crate::torsion::{decompose_torsion_even, TorsionEven};

/// A metric connection given by its potential relative to Levi-Civita.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionEven {
    q: Tensor,
    torsion: TorsionEven,
}

impl ConnectionEven {
    pub fn from_potential(q: Tensor, s: &NordenStructure, tol: &Tolerance) -> Result<Self> {
        let torsion = decompose_torsion_even(&torsion_from_potential(&q), s, tol)?;
        Ok(Self { q, torsion })
    }

    pub fn q(&self) -> &Tensor {
        &self.q
    }

    pub fn torsion(&self) -> &TorsionEven {
        &self.torsion
    }

    pub fn t(&self) -> &Tensor {
        self.torsion.t()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Naturality {
    pub natural: bool,
    /// Failure of `F(x,y,z) = Q(x,y,Jz) - Q(x,Jy,z)`.
    pub structure_residual: f64,
    /// Failure of `Q(x,y,z) = -Q(x,z,y)`.
    pub metric_residual: f64,
}

/// A potential `Q` defines a connection preserving `J` and `g` exactly when
/// it is skew in its last two slots and reproduces `F`.
pub fn naturality_check_even(q: &Tensor, f: &Tensor, s: &NordenStructure, tol: &Tolerance) -> Naturality {
    let recovered = q.apply_slot(s.j(), 2) - q.apply_slot(s.j(), 1);
    let scale = f.norm().max(q.norm());
    let structure_residual = tol.relative((f - &recovered).norm(), scale);
    let metric_residual = tol.relative((q + q.permuted(&[0, 2, 1])).norm(), scale);
    Naturality {
        natural: tol.passes(structure_residual) && tol.passes(metric_residual),
        structure_residual,
        metric_residual,
    }
}

/// Potential `-F(x,y,Jz)/2`.
pub fn b_potential(f: &FundamentalEven, s: &NordenStructure) -> Tensor {
    -0.5 * f.f().apply_slot(s.j(), 2)
}

pub fn b_connection_even(f: &FundamentalEven, s: &NordenStructure, tol: &Tolerance) -> Result<ConnectionEven> {
    ConnectionEven::from_potential(b_potential(f, s), s, tol)
}

/// `1/8 {N + σN + N^(z,y,x) - N^(z,x,y)}`.
pub fn b_torsion_from_nijenhuis(nij: &NijenhuisEven) -> Tensor {
    let n = nij.n();
    0.125 * (n + cyclic_sum(n) + hat_terms(nij))
}

/// `N^(z,y,x) - N^(z,x,y)`.
fn hat_terms(nij: &NijenhuisEven) -> Tensor {
    nij.n_hat().permuted(&[2, 1, 0]) - nij.n_hat().permuted(&[2, 0, 1])
}

/// `1/4 N + 1/8 {N^(z,y,x) - N^(z,x,y)}`.
pub fn canonical_torsion(nij: &NijenhuisEven) -> Tensor {
    0.25 * nij.n() + 0.125 * hat_terms(nij)
}

pub fn canonical_connection_even(f: &FundamentalEven, s: &NordenStructure, tol: &Tolerance) -> Result<ConnectionEven> {
    let t = canonical_torsion(&NijenhuisEven::from_fundamental(f, s));
    ConnectionEven::from_potential(potential_from_torsion(&t), s, tol)
}

/// Residual of `T(x,y,z) + T(y,z,x) - T(Jx,y,Jz) - T(y,Jz,Jx) = 0`.
pub fn canonical_identity_residual(t: &Tensor, s: &NordenStructure) -> f64 {
    let j = s.j();
    let tj02 = t.apply_slot(j, 0).apply_slot(j, 2);
    let tj12 = t.apply_slot(j, 1).apply_slot(j, 2);
    let r = t + t.permuted(&[1, 2, 0]) - tj02 - tj12.permuted(&[1, 2, 0]);
    let n = t.norm();
    if n == 0.0 {
        r.norm()
    } else {
        r.norm() / n
    }
}

/// Potential `-σF(x,y,Jz)/4`, whose torsion is totally skew.
pub fn kt_potential(f: &FundamentalEven, s: &NordenStructure) -> Tensor {
    -0.25 * cyclic_sum(&f.f().apply_slot(s.j(), 2))
}

/// Exists only for the quasi-Kähler class, where `σF = 0`.
pub fn kt_connection_even(f: &FundamentalEven, s: &NordenStructure, tol: &Tolerance) -> Result<ConnectionEven> {
    let r = tol.relative(cyclic_sum(f.f()).norm(), f.norm());
    if !tol.passes(r) {
        return Err(GeomError::ClassPrecondition(format!(
            "a connection with totally skew torsion preserving the structure exists \
             only for the quasi-Kähler class W3 (σF residual {r:.3e})"
        )));
    }
    ConnectionEven::from_potential(kt_potential(f, s), s, tol)
}
