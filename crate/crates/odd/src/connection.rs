use norden_core::potential::{potential_from_torsion, torsion_from_potential};
use norden_core::{cyclic_sum, GeomError, Result, Tensor, Tolerance};

use crate::fundamental::{xi_phi_form, FundamentalOdd};
use crate::nijenhuis::NijenhuisOdd;
use crate::structure::ContactBStructure;
use crate::torsion::{decompose_torsion_odd, TorsionOdd};

/// A metric connection given by its potential relative to Levi-Civita.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionOdd {
    q: Tensor,
    torsion: TorsionOdd,
}

impl ConnectionOdd {
    pub fn from_potential(q: Tensor, s: &ContactBStructure, tol: &Tolerance) -> Result<Self> {
        let torsion = decompose_torsion_odd(&torsion_from_potential(&q), s, tol)?;
        Ok(Self { q, torsion })
    }

    pub fn q(&self) -> &Tensor {
        &self.q
    }

    pub fn torsion(&self) -> &TorsionOdd {
        &self.torsion
    }

    pub fn t(&self) -> &Tensor {
        self.torsion.t()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalityOdd {
    pub natural: bool,
    /// Failure of `F(x,y,z) = Q(x,y,φz) - Q(x,φy,z)`, i.e. of `Dφ = 0`.
    pub structure_residual: f64,
    /// Failure of `Q(x,y,z) = -Q(x,z,y)`, i.e. of `Dg = 0`.
    pub metric_residual: f64,
}

/// `Dφ = 0` and `Dg = 0` for `D = ∇ + Q`; together they force `Dξ = Dη = 0`.
pub fn naturality_check_odd(q: &Tensor, f: &Tensor, s: &ContactBStructure, tol: &Tolerance) -> NaturalityOdd {
    let recovered = q.apply_slot(s.phi(), 2) - q.apply_slot(s.phi(), 1);
    let scale = f.norm().max(q.norm());
    let structure_residual = tol.relative((f - &recovered).norm(), scale);
    let metric_residual = tol.relative((q + q.permuted(&[0, 2, 1])).norm(), scale);
    NaturalityOdd {
        natural: tol.passes(structure_residual) && tol.passes(metric_residual),
        structure_residual,
        metric_residual,
    }
}

fn eta(s: &ContactBStructure) -> Tensor {
    Tensor::from_covector(s.eta())
}

/// `{T}_[x<->y]`.
fn alt(t: &Tensor) -> Tensor {
    t - t.permuted(&[1, 0, 2])
}

/// `1/2 {F(x,φy,z) + F(x,φy,ξ)η(z)} - η(y)F(x,φz,ξ)`.
pub fn phi_b_potential(f: &FundamentalOdd, s: &ContactBStructure) -> Tensor {
    let b = xi_phi_form(f.f(), s);
    let first = 0.5 * (f.f().apply_slot(s.phi(), 1) + b.outer(&eta(s)));
    first - eta(s).outer(&b).permuted(&[1, 0, 2])
}

pub fn phi_b_connection(f: &FundamentalOdd, s: &ContactBStructure, tol: &Tolerance) -> Result<ConnectionOdd> {
    ConnectionOdd::from_potential(phi_b_potential(f, s), s, tol)
}

/// `1/2 {F(x,φy,z) + η(z)F(x,φy,ξ) + 2η(x)F(y,φz,ξ)}_[x<->y]`.
pub fn phi_b_torsion(f: &FundamentalOdd, s: &ContactBStructure) -> Tensor {
    let b = xi_phi_form(f.f(), s);
    let a = f.f().apply_slot(s.phi(), 1) + b.outer(&eta(s)) + 2.0 * eta(s).outer(&b);
    0.5 * alt(&a)
}

/// `T(ax, by, cz)`.
fn at(t: &Tensor, m: [&nalgebra::DMatrix<f64>; 3]) -> Tensor {
    t.apply_each(&[Some(m[0]), Some(m[1]), Some(m[2])])
}

/// `1/8 {hN + σhN + hN^(z,y,x) - hN^(z,x,y)}` with `hT = T(hx,hy,hz)`.
fn horizontal_part(nij: &NijenhuisOdd, s: &ContactBStructure, with_n: bool) -> Tensor {
    let h = s.h_proj();
    let hn_hat = at(nij.n_hat(), [h, h, h]);
    let hat = hn_hat.permuted(&[2, 1, 0]) - hn_hat.permuted(&[2, 0, 1]);
    if with_n {
        let hn = at(nij.n(), [h, h, h]);
        0.125 * (&hn + cyclic_sum(&hn) + hat)
    } else {
        0.125 * hat
    }
}

/// Mixed blocks of the `φB` torsion:
/// `1/4 {2N(vx,hy,hz) + N(hy,hz,vx) + N^(hy,hz,vx) + N(hx,hy,vz) + N(vz,hx,hy)
///       - N^(vz,hx,hy) - 2N^(vz,vx,hy)}_[x<->y]`.
fn mixed_part(nij: &NijenhuisOdd, s: &ContactBStructure, with_hhv: bool) -> Tensor {
    let (h, v) = (s.h_proj(), s.v_proj());
    let (n, nh) = (nij.n(), nij.n_hat());
    let n_vhh = at(n, [v, h, h]);
    let n_hhv = at(n, [h, h, v]);
    let mut a = 2.0 * &n_vhh + at(nh, [h, h, v]).permuted(&[1, 2, 0]) + n_vhh.permuted(&[2, 0, 1])
        - at(nh, [v, h, h]).permuted(&[2, 0, 1])
        - 2.0 * at(nh, [v, v, h]).permuted(&[2, 0, 1]);
    if with_hhv {
        a += n_hhv.permuted(&[1, 2, 0]) + n_hhv;
    }
    0.25 * alt(&a)
}

/// `φB` torsion expressed through the Nijenhuis pair.
pub fn phi_b_torsion_from_nijenhuis(nij: &NijenhuisOdd, s: &ContactBStructure) -> Tensor {
    horizontal_part(nij, s, true) + mixed_part(nij, s, true)
}

/// The same torsion when `N(hx,hy) = 0`, where the `N(hx,hy,.)` terms drop.
pub fn phi_b_torsion_normal_horizontal(nij: &NijenhuisOdd, s: &ContactBStructure) -> Tensor {
    horizontal_part(nij, s, false) + mixed_part(nij, s, false)
}

/// `Q̇ - 1/8 {N(φ²z,φ²y,φ²x) + 2N(φz,φy,ξ)η(x)}`.
pub fn phi_canonical_potential(f: &FundamentalOdd, s: &ContactBStructure) -> Tensor {
    let nij = NijenhuisOdd::from_fundamental(f, s);
    let phi = s.phi();
    let p2 = phi * phi;
    let first = at(nij.n(), [&p2, &p2, &p2]).permuted(&[2, 1, 0]);
    let m = nij.n().apply_slot(phi, 0).apply_slot(phi, 1).insert_vector(2, s.xi());
    let second = eta(s).outer(&m.permuted(&[1, 0]));
    phi_b_potential(f, s) - 0.125 * (first + 2.0 * second)
}

pub fn phi_canonical_connection(f: &FundamentalOdd, s: &ContactBStructure, tol: &Tolerance) -> Result<ConnectionOdd> {
    ConnectionOdd::from_potential(phi_canonical_potential(f, s), s, tol)
}

/// `Ṫ + 1/8 (hN - σhN) + 1/4 (hvN - σhvN)` with `hvN = N(hx,hy,vz)`.
pub fn phi_canonical_torsion_from_nijenhuis(nij: &NijenhuisOdd, s: &ContactBStructure) -> Tensor {
    let (h, v) = (s.h_proj(), s.v_proj());
    let hn = at(nij.n(), [h, h, h]);
    let hvn = at(nij.n(), [h, h, v]);
    phi_b_torsion_from_nijenhuis(nij, s) + 0.125 * (&hn - cyclic_sum(&hn)) + 0.25 * (&hvn - cyclic_sum(&hvn))
}

/// Relative residual of the identity characterising the `φ`-canonical
/// connection: `A(x,y,z) = A(x,z,y)` for
/// `A = T - T(x,φy,φz) - η(x){T(ξ,y,z) - T(ξ,φy,φz)}
///      - η(y){T(x,ξ,z) - T(x,z,ξ) - η(x)T(z,ξ,ξ)}`.
pub fn phi_canonical_identity_residual(t: &Tensor, s: &ContactBStructure) -> f64 {
    let (phi, xi) = (s.phi(), s.xi());
    let e = eta(s);
    let tp = t.apply_slot(phi, 1).apply_slot(phi, 2);
    let xi_block = t.insert_vector(0, xi) - tp.insert_vector(0, xi);
    let mixed = t.insert_vector(1, xi)
        - t.insert_vector(2, xi)
        - e.outer(&Tensor::from_covector(&t.insert_vector(2, xi).insert_vector(1, xi).to_vector()));
    let a = t - &tp - e.outer(&xi_block) - e.outer(&mixed).permuted(&[1, 0, 2]);
    let r = &a - a.permuted(&[0, 2, 1]);
    let n = t.norm();
    if n == 0.0 {
        r.norm()
    } else {
        r.norm() / n
    }
}

/// `-1/2 σ{F(x,y,φz) - 3η(x)F(y,φz,ξ)}`.
pub fn phi_kt_torsion(f: &FundamentalOdd, s: &ContactBStructure) -> Tensor {
    let b = xi_phi_form(f.f(), s);
    -0.5 * cyclic_sum(&(f.f().apply_slot(s.phi(), 2) - 3.0 * eta(s).outer(&b)))
}

/// Exists only when `N^ = 0`, i.e. for `F3 ⊕ F7`.
pub fn phi_kt_connection(f: &FundamentalOdd, s: &ContactBStructure, tol: &Tolerance) -> Result<ConnectionOdd> {
    let nij = NijenhuisOdd::from_fundamental(f, s);
    let r = tol.relative(nij.n_hat().norm(), nij.norm());
    if !tol.passes(r) {
        return Err(GeomError::ClassPrecondition(format!(
            "a natural connection with totally skew torsion exists on an almost contact \
             B-metric manifold only for the class F3 ⊕ F7, where N^ = 0 (N^ residual {r:.3e})"
        )));
    }
    ConnectionOdd::from_potential(potential_from_torsion(&phi_kt_torsion(f, s)), s, tol)
}

/// `η∧dη`: `σ{η(x)dη(y,z)}`.
pub fn eta_wedge_d_eta(f: &FundamentalOdd, s: &ContactBStructure) -> Tensor {
    cyclic_sum(&eta(s).outer(&f.d_eta(s)))
}

/// `dη⊗η`: `dη(x,y)η(z)`.
pub fn d_eta_eta(f: &FundamentalOdd, s: &ContactBStructure) -> Tensor {
    f.d_eta(s).outer(&eta(s))
}
