use nalgebra::{DMatrix, DVector};
use norden_core::{GeomError, Result, Tensor};
use norden_even::{conformal_transform_even, NordenStructure};
use norden_odd::{contact_conformal_transform, ContactBStructure};

/// Absolute Jacobi tolerance for structure constants scaled to unit max-norm.
pub const JACOBI_TOLERANCE: f64 = 1e-10;

/// The invariant structure carried by a Lie algebra model.
#[derive(Debug, Clone)]
pub enum ModelStructure {
    Even(NordenStructure),
    Odd(ContactBStructure),
}

impl ModelStructure {
    pub fn dim(&self) -> usize {
        match self {
            ModelStructure::Even(s) => s.dim(),
            ModelStructure::Odd(s) => s.dim(),
        }
    }

    pub fn g(&self) -> &DMatrix<f64> {
        match self {
            ModelStructure::Even(s) => s.g(),
            ModelStructure::Odd(s) => s.g(),
        }
    }

    pub fn g_inv(&self) -> &DMatrix<f64> {
        match self {
            ModelStructure::Even(s) => s.metric().g_inv(),
            ModelStructure::Odd(s) => s.metric().g_inv(),
        }
    }

    /// `J` or `φ`.
    pub fn endomorphism(&self) -> &DMatrix<f64> {
        match self {
            ModelStructure::Even(s) => s.j(),
            ModelStructure::Odd(s) => s.phi(),
        }
    }
}

/// A Lie algebra with structure constants `c[i,j,k] = c^k_{ij}`, so that
/// `[e_i, e_j] = c^k_{ij} e_k`, and a left-invariant structure on it.
#[derive(Debug, Clone)]
pub struct LieAlgebraModel {
    c: Tensor,
    structure: ModelStructure,
}

impl LieAlgebraModel {
    /// Checks antisymmetry and the Jacobi identity.
    pub fn new(c: Tensor, structure: ModelStructure) -> Result<Self> {
        let d = structure.dim();
        if c.dim() != d || c.rank() != 3 {
            return Err(GeomError::DimMismatch { expected: d, found: c.dim() });
        }
        let scale = c.max_abs();
        if scale > 0.0 {
            let anti = (&c + c.permuted(&[1, 0, 2])).max_abs() / scale;
            if anti > JACOBI_TOLERANCE {
                return Err(GeomError::BracketNotAntisymmetric { residual: anti });
            }
            let jac = jacobi_residual(&c) / (scale * scale);
            if jac > JACOBI_TOLERANCE {
                return Err(GeomError::JacobiViolation { residual: jac });
            }
        }
        Ok(Self { c, structure })
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn c(&self) -> &Tensor {
        &self.c
    }

    pub fn structure(&self) -> &ModelStructure {
        &self.structure
    }

    pub fn g(&self) -> &DMatrix<f64> {
        self.structure.g()
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.c.insert_vector(0, x).insert_vector(0, y).to_vector()
    }

    /// Same algebra with a different structure.
    pub fn with_structure(&self, structure: ModelStructure) -> Result<Self> {
        Self::new(self.c.clone(), structure)
    }

    /// Constant-parameter conformal change of the structure; `w` is ignored
    /// in even dimension.
    pub fn conformal(&self, u: f64, v: f64, w: f64) -> Result<Self> {
        let structure = match &self.structure {
            ModelStructure::Even(s) => ModelStructure::Even(conformal_transform_even(s, u, v)?),
            ModelStructure::Odd(s) => ModelStructure::Odd(contact_conformal_transform(s, u, v, w)?),
        };
        self.with_structure(structure)
    }
}

/// `max |[[e_i,e_j],e_k] + cyclic|`.
pub fn jacobi_residual(c: &Tensor) -> f64 {
    let d = c.dim();
    let t = Tensor::from_fn(d, 4, |ix| (0..d).map(|m| c[[ix[0], ix[1], m]] * c[[m, ix[2], ix[3]]]).sum());
    (&t + t.permuted(&[1, 2, 0, 3]) + t.permuted(&[2, 0, 1, 3])).max_abs()
}
