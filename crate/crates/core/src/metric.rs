use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{GeomError, Result};
use crate::tensor::Tensor;
use crate::tolerance::Tolerance;

/// A non-degenerate symmetric bilinear form with its inverse and signature.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPair {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
    signature: (usize, usize),
}

impl MetricPair {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(g, &Tolerance::default())
    }

    pub fn with_tolerance(g: DMatrix<f64>, tol: &Tolerance) -> Result<Self> {
        let d = g.nrows();
        if g.ncols() != d {
            return Err(GeomError::DimMismatch { expected: d, found: g.ncols() });
        }
        if let Some(pos) = g.iter().position(|v| !v.is_finite()) {
            return Err(GeomError::NonFinite(pos));
        }
        let asym = tol.relative((&g - g.transpose()).norm(), g.norm());
        if !tol.passes(asym) {
            return Err(GeomError::AxiomViolation { identity: "g(x,y) = g(y,x)".into(), residual: asym });
        }
        let g = (&g + g.transpose()) * 0.5;
        let eig = SymmetricEigen::new(g.clone());
        let largest = eig.eigenvalues.amax();
        if largest == 0.0 || eig.eigenvalues.iter().any(|l| l.abs() <= 1e-12 * largest) {
            return Err(GeomError::Signature("metric is degenerate".into()));
        }
        let p = eig.eigenvalues.iter().filter(|l| **l > 0.0).count();
        let g_inv = g.clone().try_inverse().ok_or_else(|| GeomError::Signature("metric is not invertible".into()))?;
        Ok(Self { g, g_inv, signature: (p, d - p) })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn g_inv(&self) -> &DMatrix<f64> {
        &self.g_inv
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Requires an exact signature, reporting the observed one otherwise.
    pub fn expect_signature(&self, want: (usize, usize), name: &str) -> Result<()> {
        if self.signature == want {
            Ok(())
        } else {
            Err(GeomError::Signature(format!("{name} has signature {:?}, expected {:?}", self.signature, want)))
        }
    }

    /// `g^{ij}` contraction over two slots.
    pub fn contract(&self, t: &Tensor, slots: (usize, usize)) -> Result<Tensor> {
        t.contract_with(&self.g_inv, slots)
    }

    /// Vector dual to a covector.
    pub fn raise(&self, w: &DVector<f64>) -> DVector<f64> {
        &self.g_inv * w
    }

    /// `T(x,y)^k = g^{ka} T(x,y,e_a)` for a rank-3 tensor.
    pub fn raise_last(&self, t: &Tensor) -> Tensor {
        t.apply_slot(&self.g_inv, t.rank() - 1)
    }

    /// Inverse of [`raise_last`](Self::raise_last).
    pub fn lower_last(&self, t: &Tensor) -> Tensor {
        t.apply_slot(&self.g, t.rank() - 1)
    }

    /// `g^{ia} g^{jb} g^{kc} t_abc`: the metric dual used for pairings.
    pub fn raise_all(&self, t: &Tensor) -> Tensor {
        (0..t.rank()).fold(t.clone(), |acc, s| acc.apply_slot(&self.g_inv, s))
    }

    /// Full metric pairing of two tensors of equal rank.
    pub fn pairing(&self, a: &Tensor, b: &Tensor) -> f64 {
        self.raise_all(a).dot(b)
    }
}

/// `g^{ij}` contraction of a tensor over two slots.
pub fn contract_metric(t: &Tensor, m: &MetricPair, slots: (usize, usize)) -> Result<Tensor> {
    m.contract(t, slots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_counts_eigenvalue_signs() {
        let m = MetricPair::new(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -2.0, 3.0]))).unwrap();
        assert_eq!(m.signature(), (2, 1));
        assert!((m.g() * m.g_inv() - DMatrix::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn degenerate_and_asymmetric_rejected() {
        let deg = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0]));
        assert!(matches!(MetricPair::new(deg), Err(GeomError::Signature(_))));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(MetricPair::new(asym), Err(GeomError::AxiomViolation { .. })));
    }

    #[test]
    fn trace_of_metric_is_dimension() {
        let g = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, -1.0, 0.2, 0.0, 0.2, 3.0]);
        let m = MetricPair::new(g.clone()).unwrap();
        let tr = m.contract(&Tensor::from_matrix(&g), (0, 1)).unwrap();
        assert!((tr.value() - 3.0).abs() < 1e-13);
    }
}
