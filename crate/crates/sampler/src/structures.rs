use nalgebra::DMatrix;
use norden_core::{GeomError, Result};
use norden_even::NordenStructure;
use norden_odd::ContactBStructure;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::spec::{Parity, SampleSpec};

/// Bound on resampling for signature or conditioning failures.
pub const MAX_STRUCTURE_RETRIES: usize = 256;
/// Largest accepted condition number of the conjugating matrix.
const MAX_CONJUGATION_COND: f64 = 20.0;
/// Largest accepted ratio of extreme metric eigenvalue moduli.
const MAX_METRIC_SPREAD: f64 = 50.0;

#[derive(Debug, Clone)]
pub enum SampledStructure {
    Even(NordenStructure),
    Odd(ContactBStructure),
}

impl SampledStructure {
    pub fn dim(&self) -> usize {
        match self {
            SampledStructure::Even(s) => s.dim(),
            SampledStructure::Odd(s) => s.dim(),
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            SampledStructure::Even(_) => Parity::Even,
            SampledStructure::Odd(_) => Parity::Odd,
        }
    }

    pub fn g(&self) -> &DMatrix<f64> {
        match self {
            SampledStructure::Even(s) => s.g(),
            SampledStructure::Odd(s) => s.g(),
        }
    }
}

pub(crate) fn normal_matrix<R: Rng + ?Sized>(r: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| r.sample(StandardNormal))
}

/// `I + spread·N` with bounded condition number.
pub(crate) fn conjugator<R: Rng + ?Sized>(r: &mut R, d: usize, spread: f64) -> Option<DMatrix<f64>> {
    let p = DMatrix::identity(d, d) + spread * normal_matrix(r, d, d);
    let sv = p.singular_values();
    (sv.max() < MAX_CONJUGATION_COND * sv.min()).then_some(p)
}

fn metric_spread(g: &DMatrix<f64>) -> f64 {
    let ev = g.clone().symmetric_eigen().eigenvalues;
    let (lo, hi) = ev.iter().fold((f64::MAX, 0.0f64), |(lo, hi), v| (lo.min(v.abs()), hi.max(v.abs())));
    hi / lo
}

fn retry<T, R: Rng + ?Sized>(r: &mut R, what: &str, mut attempt: impl FnMut(&mut R) -> Option<T>) -> Result<T> {
    for _ in 0..MAX_STRUCTURE_RETRIES {
        if let Some(t) = attempt(r) {
            return Ok(t);
        }
    }
    Err(GeomError::ResampleExhausted {
        attempts: MAX_STRUCTURE_RETRIES,
        reason: format!("no well-conditioned {what} with the required signature"),
    })
}

/// `J = P J0 P^{-1}` with the averaged metric of a random symmetric form.
pub fn random_norden<R: Rng + ?Sized>(r: &mut R, n: usize) -> Result<NordenStructure> {
    let d = 2 * n;
    retry(r, "Norden structure", |r| {
        let p = conjugator(r, d, 0.5)?;
        let h = normal_matrix(r, d, d);
        let s = NordenStructure::conjugated(&p, &(&h + h.transpose())).ok()?;
        (metric_spread(s.g()) < MAX_METRIC_SPREAD).then_some(s)
    })
}

pub fn random_contact_b<R: Rng + ?Sized>(r: &mut R, n: usize) -> Result<ContactBStructure> {
    let d = 2 * n + 1;
    retry(r, "almost contact B-metric structure", |r| {
        let p = conjugator(r, d, 0.4)?;
        let h = normal_matrix(r, d, d);
        let s = ContactBStructure::conjugated(&p, &(&h + h.transpose())).ok()?;
        (metric_spread(s.g()) < MAX_METRIC_SPREAD).then_some(s)
    })
}

pub fn random_structure<R: Rng + ?Sized>(r: &mut R, parity: Parity, n: usize) -> Result<SampledStructure> {
    Ok(match parity {
        Parity::Even => SampledStructure::Even(random_norden(r, n)?),
        Parity::Odd => SampledStructure::Odd(random_contact_b(r, n)?),
    })
}

/// The structure of sample 0 of `spec`.
pub fn sample_structure(spec: &SampleSpec) -> Result<SampledStructure> {
    random_structure(&mut spec.rng(0), spec.parity, spec.n)
}
