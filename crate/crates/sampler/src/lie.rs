use nalgebra::DMatrix;
use norden_core::{GeomError, Result, Tensor};
use norden_lie::{LieAlgebraModel, ModelStructure};
use rand::Rng;

use crate::spec::{Parity, SampleSpec};
use crate::structures::{conjugator, normal_matrix, random_structure, SampledStructure, MAX_STRUCTURE_RETRIES};

/// Structure constants of `R ⋉_A R^{d-1}` in the basis `P e_i`, scaled to
/// unit max-norm. The ideal is abelian, so the Jacobi identity holds exactly.
pub fn semidirect_constants(a: &DMatrix<f64>, p: &DMatrix<f64>) -> Tensor {
    let d = a.nrows() + 1;
    let c = Tensor::from_fn3(d, |i, j, k| match (i, j) {
        _ if k == 0 => 0.0,
        (0, j) if j > 0 => a[(k - 1, j - 1)],
        (i, 0) if i > 0 => -a[(k - 1, i - 1)],
        _ => 0.0,
    });
    let p_inv = p.clone().try_inverse().expect("conjugator is invertible");
    let c = c.apply_slot(p, 0).apply_slot(p, 1).apply_slot(&p_inv.transpose(), 2);
    let m = c.max_abs();
    if m == 0.0 {
        c
    } else {
        c.scale(1.0 / m)
    }
}

/// A random solvable algebra carrying the given structure.
pub fn random_lie_model<R: Rng + ?Sized>(r: &mut R, structure: SampledStructure) -> Result<LieAlgebraModel> {
    let d = structure.dim();
    let a = 0.7 * normal_matrix(r, d - 1, d - 1);
    let p =
        (0..MAX_STRUCTURE_RETRIES).find_map(|_| conjugator(r, d, 0.4)).ok_or_else(|| GeomError::ResampleExhausted {
            attempts: MAX_STRUCTURE_RETRIES,
            reason: "no well-conditioned basis change".into(),
        })?;
    let structure = match structure {
        SampledStructure::Even(s) => ModelStructure::Even(s),
        SampledStructure::Odd(s) => ModelStructure::Odd(s),
    };
    LieAlgebraModel::new(semidirect_constants(&a, &p), structure)
}

/// Model `index` of `spec` (its class target is ignored).
pub fn sample_lie_model(spec: &SampleSpec, index: u64) -> Result<LieAlgebraModel> {
    lie_for(&mut spec.rng(index), spec.parity, spec.n)
}

fn lie_for<R: Rng + ?Sized>(r: &mut R, parity: Parity, n: usize) -> Result<LieAlgebraModel> {
    let s = random_structure(r, parity, n)?;
    random_lie_model(r, s)
}
