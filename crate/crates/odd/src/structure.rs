use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use norden_core::{GeomError, MetricPair, Result, Tolerance};

use crate::spaces::OddSpaces;

/// `φ0` acting as the block complex structure on the first `2n` coordinates
/// and killing the last one.
pub fn block_contact(n: usize) -> DMatrix<f64> {
    let d = 2 * n + 1;
    DMatrix::from_fn(d, d, |r, c| {
        if r < n && c == r + n {
            -1.0
        } else if r >= n && r < 2 * n && c + n == r {
            1.0
        } else {
            0.0
        }
    })
}

/// An almost contact structure `(φ, ξ, η)` with a B-metric on one tangent space.
///
/// `φ² = -Id + η⊗ξ`, `φξ = 0`, `η∘φ = 0`, `η(ξ) = 1` and
/// `g(φx,φy) = -g(x,y) + η(x)η(y)`; both `g` and
/// `g~(x,y) = g(x,φy) + η(x)η(y)` have signature `(n+1,n)`.
#[derive(Debug, Clone)]
pub struct ContactBStructure {
    n: usize,
    phi: DMatrix<f64>,
    xi: DVector<f64>,
    eta: DVector<f64>,
    metric: MetricPair,
    assoc: MetricPair,
    h_proj: DMatrix<f64>,
    v_proj: DMatrix<f64>,
    g_inv_h: DMatrix<f64>,
    spaces: OnceLock<OddSpaces>,
}

impl ContactBStructure {
    pub fn new(phi: DMatrix<f64>, xi: DVector<f64>, eta: DVector<f64>, g: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(phi, xi, eta, g, &Tolerance::default())
    }

    pub fn with_tolerance(
        phi: DMatrix<f64>,
        xi: DVector<f64>,
        eta: DVector<f64>,
        g: DMatrix<f64>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let d = phi.nrows();
        for found in [phi.ncols(), xi.len(), eta.len(), g.nrows(), g.ncols()] {
            if found != d {
                return Err(GeomError::DimMismatch { expected: d, found });
            }
        }
        if d.is_multiple_of(2) {
            return Err(GeomError::AxiomViolation {
                identity: format!("odd dimension (got {d})"),
                residual: f64::INFINITY,
            });
        }
        let n = d / 2;
        let check = |identity: &str, diff: f64, scale: f64| -> Result<()> {
            let r = tol.relative(diff, scale);
            if tol.passes(r) {
                Ok(())
            } else {
                Err(GeomError::AxiomViolation { identity: identity.into(), residual: r })
            }
        };
        let pn = phi.norm().max(1.0);
        let scale_v = xi.norm() * eta.norm();
        check("η(ξ) = 1", (eta.dot(&xi) - 1.0).abs(), 1.0)?;
        check("φξ = 0", (&phi * &xi).norm(), pn * xi.norm())?;
        check("η∘φ = 0", (phi.transpose() * &eta).norm(), pn * eta.norm())?;
        let vertical = &xi * eta.transpose();
        let id = DMatrix::<f64>::identity(d, d);
        check("φ² = -Id + η⊗ξ", (&phi * &phi + &id - &vertical).norm(), pn * pn + scale_v)?;
        let metric = MetricPair::with_tolerance(g, tol)?;
        let g = metric.g();
        let ee = &eta * eta.transpose();
        check(
            "g(φx,φy) = -g(x,y) + η(x)η(y)",
            (phi.transpose() * g * &phi + g - &ee).norm(),
            pn * pn * g.norm() + ee.norm(),
        )?;
        metric.expect_signature((n + 1, n), "g")?;
        let gphi = g * &phi;
        check("g(φx,y) = g(x,φy)", (&gphi - gphi.transpose()).norm(), pn * g.norm())?;
        let assoc = MetricPair::with_tolerance((&gphi + gphi.transpose()) * 0.5 + &ee, tol)?;
        assoc.expect_signature((n + 1, n), "associated metric")?;
        let h_proj = -(&phi * &phi);
        let g_inv_h = metric.g_inv() - &xi * xi.transpose();
        Ok(Self { n, phi, xi, eta, metric, assoc, h_proj, v_proj: vertical, g_inv_h, spaces: OnceLock::new() })
    }

    /// `φ0`, `ξ = e_d`, `η = e_d*`, `g = diag(I_n, -I_n, 1)`.
    pub fn canonical(n: usize) -> Self {
        let d = 2 * n + 1;
        let g = DMatrix::from_fn(d, d, |r, c| match (r == c, r >= n && r < 2 * n) {
            (true, false) => 1.0,
            (true, true) => -1.0,
            _ => 0.0,
        });
        let mut e = DVector::zeros(d);
        e[d - 1] = 1.0;
        Self::new(block_contact(n), e.clone(), e, g).expect("canonical model is a B-metric structure")
    }

    /// `φ = Pφ0P^{-1}`, `ξ = P e_d`, `η = e_d* P^{-1}` and
    /// `g = (h(h.,h.) - h(φ.,φ.))/2 + η⊗η` for symmetric `h`, where `h.` is
    /// the horizontal projection. Only the signature can fail.
    pub fn conjugated(p: &DMatrix<f64>, h: &DMatrix<f64>) -> Result<Self> {
        let d = p.nrows();
        let p_inv = p.clone().try_inverse().ok_or_else(|| GeomError::AxiomViolation {
            identity: "conjugating matrix is invertible".into(),
            residual: f64::INFINITY,
        })?;
        let phi = p * block_contact(d / 2) * &p_inv;
        let xi = p.column(d - 1).into_owned();
        let eta = p_inv.row(d - 1).transpose();
        let hp = -(&phi * &phi);
        let h = (h + h.transpose()) * 0.5;
        let g = (hp.transpose() * &h * &hp - phi.transpose() * &h * &phi) * 0.5 + &eta * eta.transpose();
        Self::new(phi, xi, eta, (&g + g.transpose()) * 0.5)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn xi(&self) -> &DVector<f64> {
        &self.xi
    }

    pub fn eta(&self) -> &DVector<f64> {
        &self.eta
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

    /// `hx = -φ²x`.
    pub fn h_proj(&self) -> &DMatrix<f64> {
        &self.h_proj
    }

    /// `vx = η(x)ξ`.
    pub fn v_proj(&self) -> &DMatrix<f64> {
        &self.v_proj
    }

    /// `g^{-1} - ξ⊗ξ`: the inverse metric restricted to the contact distribution.
    pub fn g_inv_h(&self) -> &DMatrix<f64> {
        &self.g_inv_h
    }

    /// `g(x, φy)`.
    pub fn g_phi(&self) -> DMatrix<f64> {
        self.g() * &self.phi
    }

    /// `g(φx, φy)`.
    pub fn g_phi_phi(&self) -> DMatrix<f64> {
        self.phi.transpose() * self.g() * &self.phi
    }

    pub(crate) fn spaces(&self) -> &OddSpaces {
        self.spaces.get_or_init(|| OddSpaces::build(self))
    }
}

/// Checks the almost contact B-metric axioms and builds the associated metric.
pub fn validate_contact_b(
    phi: DMatrix<f64>,
    xi: DVector<f64>,
    eta: DVector<f64>,
    g: DMatrix<f64>,
) -> Result<ContactBStructure> {
    ContactBStructure::new(phi, xi, eta, g)
}
