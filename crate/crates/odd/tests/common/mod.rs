#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use norden_core::Tensor;
use norden_odd::{ContactBStructure, FundamentalOdd, OddClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| r.sample(StandardNormal))
}

pub fn random_tensor(r: &mut ChaCha8Rng, d: usize) -> Tensor {
    Tensor::from_fn3(d, |_, _, _| r.sample(StandardNormal))
}

pub fn random_covector(r: &mut ChaCha8Rng, d: usize) -> DVector<f64> {
    DVector::from_fn(d, |_, _| r.sample(StandardNormal))
}

pub fn random_antisymmetric(r: &mut ChaCha8Rng, d: usize) -> Tensor {
    let raw = random_tensor(r, d);
    &raw - raw.permuted(&[1, 0, 2])
}

/// Conjugated canonical model with an averaged metric; retries on bad
/// signature or poor conditioning.
pub fn structure(r: &mut ChaCha8Rng, n: usize) -> ContactBStructure {
    let d = 2 * n + 1;
    for _ in 0..200 {
        let p = DMatrix::identity(d, d) + 0.5 * normal_matrix(r, d, d);
        let sv = p.singular_values();
        if sv.max() / sv.min() > 20.0 {
            continue;
        }
        let h = normal_matrix(r, d, d);
        if let Ok(s) = ContactBStructure::conjugated(&p, &(&h + h.transpose())) {
            let ev = s.g().clone().symmetric_eigen().eigenvalues;
            let (lo, hi) = ev.iter().fold((f64::MAX, 0.0f64), |(lo, hi), v| (lo.min(v.abs()), hi.max(v.abs())));
            if hi / lo < 50.0 {
                return s;
            }
        }
    }
    panic!("no admissible structure found");
}

pub fn admissible(r: &mut ChaCha8Rng, s: &ContactBStructure) -> FundamentalOdd {
    FundamentalOdd::admissible(&random_tensor(r, s.dim()), s)
}

/// Random element of the direct sum of the given classes with every
/// summand present.
pub fn in_classes(r: &mut ChaCha8Rng, s: &ContactBStructure, classes: &[OddClass]) -> FundamentalOdd {
    let d = s.dim();
    let mut f = Tensor::zeros(d, 3);
    for c in classes {
        let basis = s.class_space(*c).basis();
        let coeff = DVector::from_fn(basis.ncols(), |_, _| r.sample(StandardNormal));
        let part = Tensor::from_flat(d, 3, &(basis * coeff));
        f += part.scale(1.0 / part.norm());
    }
    FundamentalOdd::new(f, s, &Default::default()).expect("class elements are admissible")
}

pub fn rel(a: &Tensor, b: &Tensor) -> f64 {
    (a - b).norm() / b.norm().max(a.norm()).max(1e-300)
}
