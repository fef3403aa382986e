use std::sync::OnceLock;

use nalgebra::DMatrix;
use norden_core::{GeomError, MetricPair, Result, Tolerance};

use crate::spaces::EvenSpaces;

/// Block model `J0 = [[0, -I], [I, 0]]` on `R^{2n}`.
pub fn block_complex(n: usize) -> DMatrix<f64> {
    let d = 2 * n;
    DMatrix::from_fn(d, d, |r, c| {
        if r < n && c == r + n {
            -1.0
        } else if r >= n && c + n == r {
            1.0
        } else {
            0.0
        }
    })
}

/// An almost complex structure with a Norden metric on a single tangent space.
///
/// `J^2 = -Id`, `g(Jx,Jy) = -g(x,y)`; both `g` and the associated metric
/// `g~(x,y) = g(x,Jy)` have neutral signature `(n,n)`.
#[derive(Debug, Clone)]
pub struct NordenStructure {
    n: usize,
    j: DMatrix<f64>,
    metric: MetricPair,
    assoc: MetricPair,
    spaces: OnceLock<EvenSpaces>,
}

impl NordenStructure {
    pub fn new(j: DMatrix<f64>, g: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(j, g, &Tolerance::default())
    }

    pub fn with_tolerance(j: DMatrix<f64>, g: DMatrix<f64>, tol: &Tolerance) -> Result<Self> {
        let d = j.nrows();
        if j.ncols() != d {
            return Err(GeomError::DimMismatch { expected: d, found: j.ncols() });
        }
        if g.nrows() != d || g.ncols() != d {
            return Err(GeomError::DimMismatch { expected: d, found: g.nrows() });
        }
        if d == 0 || !d.is_multiple_of(2) {
            return Err(GeomError::AxiomViolation {
                identity: format!("even dimension (got {d})"),
                residual: f64::INFINITY,
            });
        }
        let n = d / 2;
        let id = DMatrix::<f64>::identity(d, d);
        let jn = j.norm();
        let check = |identity: &str, diff: f64, scale: f64| -> Result<()> {
            let r = tol.relative(diff, scale);
            if tol.passes(r) {
                Ok(())
            } else {
                Err(GeomError::AxiomViolation { identity: identity.into(), residual: r })
            }
        };
        check("J^2 = -Id", (&j * &j + &id).norm(), jn * jn)?;
        let metric = MetricPair::with_tolerance(g, tol)?;
        let g = metric.g();
        check("g(Jx,Jy) = -g(x,y)", (j.transpose() * g * &j + g).norm(), jn * jn * g.norm())?;
        let gj = g * &j;
        check("g(Jx,y) = g(x,Jy)", (&gj - gj.transpose()).norm(), jn * g.norm())?;
        metric.expect_signature((n, n), "g")?;
        let assoc = MetricPair::with_tolerance((&gj + gj.transpose()) * 0.5, tol)?;
        assoc.expect_signature((n, n), "associated metric")?;
        Ok(Self { n, j, metric, assoc, spaces: OnceLock::new() })
    }

    /// `J0` with `g = diag(I_n, -I_n)`.
    pub fn canonical(n: usize) -> Self {
        let d = 2 * n;
        let g = DMatrix::from_fn(d, d, |r, c| match (r == c, r < n) {
            (true, true) => 1.0,
            (true, false) => -1.0,
            _ => 0.0,
        });
        Self::new(block_complex(n), g).expect("canonical model is a Norden structure")
    }

    /// `J = P J0 P^{-1}` and `g = (h - h(J.,J.))/2` for symmetric `h`.
    ///
    /// The result satisfies the algebraic axioms exactly up to roundoff;
    /// only the signature can fail.
    pub fn conjugated(p: &DMatrix<f64>, h: &DMatrix<f64>) -> Result<Self> {
        let d = p.nrows();
        let p_inv = p.clone().try_inverse().ok_or_else(|| GeomError::AxiomViolation {
            identity: "conjugating matrix is invertible".into(),
            residual: f64::INFINITY,
        })?;
        let j = p * block_complex(d / 2) * p_inv;
        let h = (h + h.transpose()) * 0.5;
        let g = (&h - j.transpose() * &h * &j) * 0.5;
        Self::new(j, g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn j(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn metric(&self) -> &MetricPair {
        &self.metric
    }

    pub fn assoc_metric(&self) -> &MetricPair {
        &self.assoc
    }

    pub fn g(&self) -> &DMatrix<f64> {
        self.metric.g()
    }

    /// Class and torsion subspaces, built on first use.
    pub(crate) fn spaces(&self) -> &EvenSpaces {
        self.spaces.get_or_init(|| EvenSpaces::build(self))
    }
}

/// Checks the Norden axioms and builds the associated metric.
pub fn validate_norden(j: DMatrix<f64>, g: DMatrix<f64>) -> Result<NordenStructure> {
    NordenStructure::new(j, g)
}
