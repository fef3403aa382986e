use std::collections::BTreeSet;

use nalgebra::DVector;
use norden_core::{GeomError, Result, Subspace, Tensor, Tolerance};
use norden_even::{classify_even, EvenClass, FundamentalEven, NordenStructure};
use norden_odd::{classify_odd, ContactBStructure, FundamentalOdd, OddClass};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::spec::{ClassTarget, SampleSpec, SamplerError};
use crate::structures::{random_structure, SampledStructure};

/// Each targeted class must carry at least this fraction of `‖F‖`.
pub const GENERICITY: f64 = 1e-3;
pub const MAX_CLASS_RETRIES: usize = 64;
/// Stream reserved for [`sample_f_in_class`], away from per-sample streams.
const F_STREAM: u64 = 1 << 63;

#[derive(Debug, Clone)]
pub enum SampledF {
    Even(FundamentalEven),
    Odd(FundamentalOdd),
}

impl SampledF {
    pub fn f(&self) -> &Tensor {
        match self {
            SampledF::Even(f) => f.f(),
            SampledF::Odd(f) => f.f(),
        }
    }
}

fn random_in<R: Rng + ?Sized>(r: &mut R, space: &Subspace, dim: usize) -> Tensor {
    let b = space.basis();
    let coeff = DVector::from_fn(b.ncols(), |_, _| r.sample(StandardNormal));
    Tensor::from_flat(dim, 3, &(b * coeff))
}

/// Draws from the target sum until every summand is present and the
/// classification returns exactly the target.
fn targeted<R, C, F>(
    r: &mut R,
    target: &BTreeSet<C>,
    spaces: &[(C, &Subspace)],
    dim: usize,
    components: impl Fn(&Tensor) -> Vec<Tensor>,
    accept: impl Fn(Tensor) -> Result<Option<F>>,
    name: String,
) -> Result<F>
where
    R: Rng + ?Sized,
    C: Copy + Ord,
{
    let degenerate = |attempts| GeomError::DegenerateSample { target: name.clone(), attempts };
    if spaces.iter().any(|(c, sp)| target.contains(c) && sp.dim() == 0) {
        return Err(degenerate(0));
    }
    for _ in 0..MAX_CLASS_RETRIES {
        let mut f = Tensor::zeros(dim, 3);
        for (c, sp) in spaces {
            if target.contains(c) {
                f += random_in(r, sp, dim);
            }
        }
        let norm = f.norm();
        let comps = components(&f);
        // `components` follows the order of `spaces`.
        if spaces.iter().zip(&comps).any(|((c, _), t)| target.contains(c) && t.norm() < GENERICITY * norm) {
            continue;
        }
        if let Some(out) = accept(f)? {
            return Ok(out);
        }
    }
    Err(degenerate(MAX_CLASS_RETRIES))
}

pub fn random_f_even<R: Rng + ?Sized>(
    r: &mut R,
    target: &BTreeSet<EvenClass>,
    s: &NordenStructure,
    tol: &Tolerance,
) -> Result<FundamentalEven> {
    if target.is_empty() {
        return Ok(FundamentalEven::zero(s));
    }
    let spaces: Vec<_> = EvenClass::ALL.iter().map(|c| (*c, s.class_space(*c))).collect();
    targeted(
        r,
        target,
        &spaces,
        s.dim(),
        |f| s.class_components(f).to_vec(),
        |f| {
            let f = FundamentalEven::new(f, s, tol)?;
            Ok((classify_even(&f, s, tol)?.members == *target).then_some(f))
        },
        norden_even::class_set_name(target),
    )
}

pub fn random_f_odd<R: Rng + ?Sized>(
    r: &mut R,
    target: &BTreeSet<OddClass>,
    s: &ContactBStructure,
    tol: &Tolerance,
) -> Result<FundamentalOdd> {
    if target.is_empty() {
        return Ok(FundamentalOdd::zero(s));
    }
    let spaces: Vec<_> = OddClass::ALL.iter().map(|c| (*c, s.class_space(*c))).collect();
    targeted(
        r,
        target,
        &spaces,
        s.dim(),
        |f| s.class_components(f),
        |f| {
            let f = FundamentalOdd::new(f, s, tol)?;
            Ok((classify_odd(&f, s, tol)?.members == *target).then_some(f))
        },
        norden_odd::odd_class_set_name(target),
    )
}

fn draw<R: Rng + ?Sized>(
    r: &mut R,
    target: &ClassTarget,
    s: &SampledStructure,
    tol: &Tolerance,
) -> std::result::Result<SampledF, SamplerError> {
    match (target, s) {
        (ClassTarget::Even(t), SampledStructure::Even(s)) => Ok(SampledF::Even(random_f_even(r, t, s, tol)?)),
        (ClassTarget::Odd(t), SampledStructure::Odd(s)) => Ok(SampledF::Odd(random_f_odd(r, t, s, tol)?)),
        _ => Err(SamplerError::ParityMismatch { target: target.to_string(), parity: s.parity() }),
    }
}

/// A targeted `F` on a given structure, from the stream reserved for it.
pub fn sample_f_in_class(
    spec: &SampleSpec,
    s: &SampledStructure,
    tol: &Tolerance,
) -> std::result::Result<SampledF, SamplerError> {
    draw(&mut spec.rng(F_STREAM), &spec.class_target, s, tol)
}

/// Sample `index`: a structure and a targeted `F` from one stream.
pub fn sample_pair(
    spec: &SampleSpec,
    index: u64,
    tol: &Tolerance,
) -> std::result::Result<(SampledStructure, SampledF), SamplerError> {
    let mut r = spec.rng(index);
    let s = random_structure(&mut r, spec.parity, spec.n)?;
    let f = draw(&mut r, &spec.class_target, &s, tol)?;
    Ok((s, f))
}
