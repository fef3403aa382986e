#![allow(dead_code)]

use nalgebra::DMatrix;
use norden_core::Tensor;
use norden_even::NordenStructure;
use norden_lie::{LieAlgebraModel, ModelStructure};
use norden_odd::ContactBStructure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(r: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| r.sample(StandardNormal))
}

fn well_conditioned(r: &mut ChaCha8Rng, d: usize, spread: f64) -> DMatrix<f64> {
    loop {
        let p = DMatrix::identity(d, d) + spread * normal_matrix(r, d);
        let sv = p.singular_values();
        if sv.max() / sv.min() < 10.0 {
            return p;
        }
    }
}

fn metric_ok(g: &DMatrix<f64>) -> bool {
    let ev = g.clone().symmetric_eigen().eigenvalues;
    let (lo, hi) = ev.iter().fold((f64::MAX, 0.0f64), |(lo, hi), v| (lo.min(v.abs()), hi.max(v.abs())));
    hi / lo < 30.0
}

pub fn even_structure(r: &mut ChaCha8Rng, n: usize) -> NordenStructure {
    loop {
        let p = well_conditioned(r, 2 * n, 0.4);
        let h = normal_matrix(r, 2 * n);
        if let Ok(s) = NordenStructure::conjugated(&p, &(&h + h.transpose())) {
            if metric_ok(s.g()) {
                return s;
            }
        }
    }
}

pub fn odd_structure(r: &mut ChaCha8Rng, n: usize) -> ContactBStructure {
    loop {
        let p = well_conditioned(r, 2 * n + 1, 0.3);
        let h = normal_matrix(r, 2 * n + 1);
        if let Ok(s) = ContactBStructure::conjugated(&p, &(&h + h.transpose())) {
            if metric_ok(s.g()) {
                return s;
            }
        }
    }
}

/// `R ⋉_A R^{d-1}` in a random basis, scaled to unit max-norm.
pub fn semidirect(r: &mut ChaCha8Rng, d: usize) -> Tensor {
    let a = 0.7 * normal_matrix(r, d - 1);
    let c = Tensor::from_fn3(d, |i, j, k| {
        if k == 0 {
            0.0
        } else if i == 0 && j > 0 {
            a[(k - 1, j - 1)]
        } else if j == 0 && i > 0 {
            -a[(k - 1, i - 1)]
        } else {
            0.0
        }
    });
    let p = well_conditioned(r, d, 0.4);
    let p_inv = p.clone().try_inverse().unwrap();
    let c = c.apply_slot(&p, 0).apply_slot(&p, 1).apply_slot(&p_inv.transpose(), 2);
    c.scale(1.0 / c.max_abs())
}

pub fn even_model(r: &mut ChaCha8Rng, n: usize) -> LieAlgebraModel {
    let s = even_structure(r, n);
    LieAlgebraModel::new(semidirect(r, 2 * n), ModelStructure::Even(s)).unwrap()
}

pub fn odd_model(r: &mut ChaCha8Rng, n: usize) -> LieAlgebraModel {
    let s = odd_structure(r, n);
    LieAlgebraModel::new(semidirect(r, 2 * n + 1), ModelStructure::Odd(s)).unwrap()
}

/// 5-dimensional Heisenberg algebra `[e1,e3] = [e2,e4] = e5` with the
/// canonical contact B-structure; `ξ = e5` is central.
pub fn heisenberg() -> LieAlgebraModel {
    let c = Tensor::from_fn3(5, |i, j, k| match (i, j, k) {
        (0, 2, 4) | (1, 3, 4) => 1.0,
        (2, 0, 4) | (3, 1, 4) => -1.0,
        _ => 0.0,
    });
    LieAlgebraModel::new(c, ModelStructure::Odd(ContactBStructure::canonical(2))).unwrap()
}

pub fn rel(a: &Tensor, b: &Tensor) -> f64 {
    (a - b).norm() / b.norm().max(a.norm()).max(1e-300)
}
