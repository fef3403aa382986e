//! Brute-force projections: kernels by row reduction, components by the
//! normal equations. Nothing here goes through a singular value
//! decomposition, so agreement with the engine is a genuine cross-check.

use nalgebra::{DMatrix, DVector};
use norden_core::subspace::stack;
use norden_core::{ConstraintOperator, GeomError, Result, Tensor};

/// Pivots below this fraction of the largest entry count as zero.
const PIVOT_TOLERANCE: f64 = 1e-10;

/// Kernel basis of `m` read off its reduced row echelon form: one vector per
/// free column, with a unit entry there.
pub fn rref_kernel(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let eps = PIVOT_TOLERANCE * scale.max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let (best, val) =
            (row..rows).map(|i| (i, a[(i, col)].abs())).fold((row, -1.0), |b, x| if x.1 > b.1 { x } else { b });
        if val <= eps {
            continue;
        }
        a.swap_rows(row, best);
        let p = a[(row, col)];
        for j in 0..cols {
            a[(row, j)] /= p;
        }
        for i in 0..rows {
            if i != row {
                let factor = a[(i, col)];
                if factor != 0.0 {
                    for j in 0..cols {
                        a[(i, j)] -= factor * a[(row, j)];
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut k = DMatrix::zeros(cols, free.len());
    for (j, &f) in free.iter().enumerate() {
        k[(f, j)] = 1.0;
        for (r, &p) in pivots.iter().enumerate() {
            k[(p, j)] = -a[(r, f)];
        }
    }
    k
}

/// Modified Gram-Schmidt; the input columns must be independent.
fn orthonormalise(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut q = m.clone();
    for j in 0..q.ncols() {
        for i in 0..j {
            let d = q.column(i).dot(&q.column(j));
            let qi = q.column(i).into_owned();
            q.column_mut(j).axpy(-d, &qi, 1.0);
        }
        let n = q.column(j).norm();
        q.column_mut(j).unscale_mut(n);
    }
    q
}

/// Solves the square system by Gaussian elimination with partial pivoting.
fn solve(mut a: DMatrix<f64>, mut b: DVector<f64>) -> Option<DVector<f64>> {
    let n = a.nrows();
    for col in 0..n {
        let best = (col..n).max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))?;
        if a[(best, col)].abs() < 1e-300 {
            return None;
        }
        a.swap_rows(col, best);
        b.swap_rows(col, best);
        for i in col + 1..n {
            let factor = a[(i, col)] / a[(col, col)];
            for j in col..n {
                a[(i, j)] -= factor * a[(col, j)];
            }
            b[i] -= factor * b[col];
        }
    }
    let mut x = DVector::zeros(n);
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[(i, j)] * x[j]).sum();
        x[i] = (b[i] - s) / a[(i, i)];
    }
    Some(x)
}

fn kernel_of(ops: &[ConstraintOperator], n: usize) -> Result<DMatrix<f64>> {
    if ops.is_empty() {
        return Ok(DMatrix::identity(n, n));
    }
    let c = stack(ops)?;
    if c.ncols() != n {
        return Err(GeomError::DimMismatch { expected: n, found: c.ncols() });
    }
    Ok(orthonormalise(&rref_kernel(&c)))
}

/// A direct sum `ambient = ⊕ (ambient ∩ ker(parts[i]))` with
/// `ambient = ker(ambient_constraints)`, prepared once for many tensors.
#[derive(Debug, Clone)]
pub struct OracleSplit {
    bases: Vec<DMatrix<f64>>,
    all: DMatrix<f64>,
    gram: DMatrix<f64>,
}

impl OracleSplit {
    pub fn new(
        n: usize,
        parts: &[Vec<ConstraintOperator>],
        ambient_constraints: &[ConstraintOperator],
    ) -> Result<Self> {
        let ambient_dim = kernel_of(ambient_constraints, n)?.ncols();
        let bases =
            parts.iter().map(|p| kernel_of(&[ambient_constraints, p].concat(), n)).collect::<Result<Vec<_>>>()?;
        let total: usize = bases.iter().map(DMatrix::ncols).sum();
        if total != ambient_dim {
            return Err(GeomError::DirectSumFailure { expected: ambient_dim, found: total });
        }
        let mut all = DMatrix::zeros(n, total);
        let mut c0 = 0;
        for b in &bases {
            all.view_mut((0, c0), (n, b.ncols())).copy_from(b);
            c0 += b.ncols();
        }
        let gram = all.transpose() * &all;
        Ok(Self { bases, all, gram })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(DMatrix::ncols).collect()
    }

    /// Components of `t`; a tensor outside the ambient space is first
    /// projected orthogonally onto it.
    pub fn components(&self, t: &Tensor) -> Result<Vec<Tensor>> {
        if t.len() != self.all.nrows() {
            return Err(GeomError::DimMismatch { expected: self.all.nrows(), found: t.len() });
        }
        let total = self.all.ncols();
        let coeff = solve(self.gram.clone(), self.all.transpose() * t.to_flat())
            .ok_or(GeomError::RankDeficiency { expected: total, rank: 0 })?;
        let mut c0 = 0;
        Ok(self
            .bases
            .iter()
            .map(|b| {
                let part = b * coeff.rows(c0, b.ncols());
                c0 += b.ncols();
                Tensor::from_flat(t.dim(), t.rank(), &part)
            })
            .collect())
    }
}

pub fn oracle_decompose(
    t: &Tensor,
    parts: &[Vec<ConstraintOperator>],
    ambient_constraints: &[ConstraintOperator],
) -> Result<Vec<Tensor>> {
    OracleSplit::new(t.len(), parts, ambient_constraints)?.components(t)
}

/// Component of `t` in `ambient ∩ ker(constraints)` along
/// `ambient ∩ ker(complement)`.
pub fn oracle_project(
    t: &Tensor,
    constraints: &[ConstraintOperator],
    complement: &[ConstraintOperator],
    ambient_constraints: &[ConstraintOperator],
) -> Result<Tensor> {
    let mut parts = oracle_decompose(t, &[constraints.to_vec(), complement.to_vec()], ambient_constraints)?;
    Ok(parts.swap_remove(0))
}
