use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::tensor::Tensor;

/// Singular values at or below this fraction of the largest are treated as zero.
pub const RANK_THRESHOLD: f64 = 1e-9;

/// A linear map on flattened rank-K tensors, stored as an `m x d^K` matrix.
#[derive(Debug, Clone)]
pub struct ConstraintOperator {
    matrix: DMatrix<f64>,
}

impl ConstraintOperator {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if let Some(pos) = matrix.iter().position(|v| !v.is_finite()) {
            return Err(GeomError::NonFinite(pos));
        }
        Ok(Self { matrix })
    }

    /// Assembles the matrix of a linear map by evaluating it on unit tensors.
    pub fn from_map(dim: usize, rank: usize, f: impl Fn(&Tensor) -> Tensor) -> Self {
        let cols = dim.pow(rank as u32);
        let columns: Vec<DVector<f64>> = (0..cols)
            .map(|c| {
                let mut data = vec![0.0; cols];
                data[c] = 1.0;
                let unit = Tensor::from_vec(dim, rank, data).expect("unit tensor");
                f(&unit).to_flat()
            })
            .collect();
        let rows = columns.first().map_or(0, |c| c.len());
        Self { matrix: DMatrix::from_fn(rows, cols, |r, c| columns[c][r]) }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn apply(&self, t: &Tensor) -> DVector<f64> {
        &self.matrix * t.to_flat()
    }
}

/// Stacks the matrices of several operators acting on the same space.
pub fn stack(ops: &[ConstraintOperator]) -> Result<DMatrix<f64>> {
    let cols = ops.first().map_or(0, |o| o.ncols());
    if let Some(bad) = ops.iter().find(|o| o.ncols() != cols) {
        return Err(GeomError::DimMismatch { expected: cols, found: bad.ncols() });
    }
    let rows: usize = ops.iter().map(|o| o.nrows()).sum();
    let mut m = DMatrix::zeros(rows, cols);
    let mut r0 = 0;
    for op in ops {
        m.view_mut((r0, 0), (op.nrows(), cols)).copy_from(op.matrix());
        r0 += op.nrows();
    }
    Ok(m)
}

/// Singular values of `m` together with right singular vectors spanning
/// the whole column space (rows are reduced or padded first).
fn right_svd(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.ncols();
    let square = if m.nrows() > n {
        m.clone().qr().r()
    } else {
        let mut s = DMatrix::zeros(n, n);
        s.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        s
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    (svd.singular_values, v_t)
}

fn threshold(sv: &DVector<f64>) -> f64 {
    RANK_THRESHOLD * sv.iter().fold(0.0f64, |a, b| a.max(*b))
}

/// Orthonormal basis (as columns) of the null space of `m`.
pub fn kernel_basis(m: &DMatrix<f64>) -> DMatrix<f64> {
    kernel_basis_at_scale(m, 0.0)
}

/// As [`kernel_basis`], with singular values below `RANK_THRESHOLD · scale`
/// also counted as zero. A restriction `C·B` of an operator `C` must be
/// judged against the scale of `C`, or pure roundoff reads as full rank.
fn kernel_basis_at_scale(m: &DMatrix<f64>, scale: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 || m.iter().all(|v| *v == 0.0) {
        return DMatrix::identity(n, n);
    }
    let (sv, v_t) = right_svd(m);
    let cut = threshold(&sv).max(RANK_THRESHOLD * scale);
    let cols: Vec<DVector<f64>> = (0..n).filter(|&i| sv[i] <= cut).map(|i| v_t.row(i).transpose()).collect();
    columns_to_matrix(n, &cols)
}

pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let (sv, _) = right_svd(m);
    let cut = threshold(&sv);
    if cut == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > cut).count()
}

fn columns_to_matrix(n: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(n, cols.len(), |r, c| cols[c][r])
}

/// A linear subspace of flattened tensor space with an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn full(n: usize) -> Self {
        Self { basis: DMatrix::identity(n, n) }
    }

    pub fn zero(n: usize) -> Self {
        Self { basis: DMatrix::zeros(n, 0) }
    }

    /// Orthonormalises the column span of `m`.
    pub fn span(m: &DMatrix<f64>) -> Self {
        if m.ncols() == 0 {
            return Self::zero(m.nrows());
        }
        let svd = m.clone().svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let cut = threshold(&svd.singular_values);
        let cols: Vec<DVector<f64>> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > cut)
            .map(|i| u.column(i).into_owned())
            .collect();
        Self { basis: columns_to_matrix(m.nrows(), &cols) }
    }

    /// `ambient ∩ ker(c_1) ∩ .. ∩ ker(c_r)`.
    pub fn kernel_within(ambient: &Subspace, constraints: &[ConstraintOperator]) -> Result<Self> {
        if constraints.is_empty() {
            return Ok(ambient.clone());
        }
        let c = stack(constraints)?;
        if c.ncols() != ambient.ambient_dim() {
            return Err(GeomError::DimMismatch { expected: ambient.ambient_dim(), found: c.ncols() });
        }
        let restricted = &c * &ambient.basis;
        // Lower bound for the largest singular value of `c`.
        let scale = c.norm() / (c.nrows().min(c.ncols()).max(1) as f64).sqrt();
        let k = kernel_basis_at_scale(&restricted, scale);
        Ok(Self { basis: &ambient.basis * k })
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthogonal (Euclidean) projection of a flat vector.
    pub fn orthogonal_projection(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.basis * (self.basis.transpose() * v)
    }

    /// Relative distance of `t` from the subspace.
    pub fn residual(&self, t: &Tensor) -> f64 {
        let v = t.to_flat();
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        (&v - self.orthogonal_projection(&v)).norm() / n
    }

    /// Basis vectors reshaped as tensors.
    pub fn basis_tensors(&self, dim: usize, rank: usize) -> Vec<Tensor> {
        (0..self.dim()).map(|c| Tensor::from_flat(dim, rank, &self.basis.column(c).into_owned())).collect()
    }
}

/// A decomposition of an ambient subspace into complementary parts.
#[derive(Debug, Clone)]
pub struct DirectSum {
    parts: Vec<Subspace>,
    offsets: Vec<usize>,
    /// Left inverse of the concatenated basis.
    coeff_map: DMatrix<f64>,
}

impl DirectSum {
    /// Fails unless the parts have dimensions adding up to the ambient one
    /// and are jointly independent.
    pub fn new(parts: Vec<Subspace>, ambient: &Subspace) -> Result<Self> {
        let n = ambient.ambient_dim();
        if let Some(bad) = parts.iter().find(|p| p.ambient_dim() != n) {
            return Err(GeomError::DimMismatch { expected: n, found: bad.ambient_dim() });
        }
        let total: usize = parts.iter().map(Subspace::dim).sum();
        if total != ambient.dim() {
            return Err(GeomError::DirectSumFailure { expected: ambient.dim(), found: total });
        }
        let mut all = DMatrix::zeros(n, total);
        let mut offsets = Vec::with_capacity(parts.len() + 1);
        let mut c0 = 0;
        for p in &parts {
            offsets.push(c0);
            all.view_mut((0, c0), (n, p.dim())).copy_from(p.basis());
            c0 += p.dim();
        }
        offsets.push(c0);
        if total == 0 {
            return Ok(Self { parts, offsets, coeff_map: DMatrix::zeros(0, n) });
        }
        let svd = all.svd(true, true);
        let cut = threshold(&svd.singular_values);
        let rank = svd.singular_values.iter().filter(|s| **s > cut).count();
        if rank < total {
            return Err(GeomError::RankDeficiency { expected: total, rank });
        }
        let coeff_map = svd.pseudo_inverse(0.0).map_err(|_| GeomError::RankDeficiency { expected: total, rank })?;
        Ok(Self { parts, offsets, coeff_map })
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Components of `t` along each part; they sum to `t` when `t` lies in
    /// the ambient subspace.
    pub fn components(&self, t: &Tensor) -> Vec<Tensor> {
        let coeff = &self.coeff_map * t.to_flat();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let c = coeff.rows(self.offsets[i], p.dim());
                Tensor::from_flat(t.dim(), t.rank(), &(p.basis() * c))
            })
            .collect()
    }

    pub fn component(&self, index: usize, t: &Tensor) -> Tensor {
        let p = &self.parts[index];
        let coeff = self.coeff_map.rows(self.offsets[index], p.dim()) * t.to_flat();
        Tensor::from_flat(t.dim(), t.rank(), &(p.basis() * coeff))
    }
}

/// Component of `t` in `ambient ∩ ker(constraints)` along
/// `ambient ∩ ker(complement)`.
pub fn project_subspace(
    t: &Tensor,
    constraints: &[ConstraintOperator],
    complement: &[ConstraintOperator],
    ambient: &Subspace,
) -> Result<Tensor> {
    if t.len() != ambient.ambient_dim() {
        return Err(GeomError::DimMismatch { expected: ambient.ambient_dim(), found: t.len() });
    }
    let target = Subspace::kernel_within(ambient, constraints)?;
    let other = Subspace::kernel_within(ambient, complement)?;
    let sum = DirectSum::new(vec![target, other], ambient)?;
    Ok(sum.component(0, t))
}
