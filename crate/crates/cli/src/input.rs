//! The self-describing input document.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use norden_core::{Tensor, Tolerance};
use norden_even::{FundamentalEven, NordenStructure};
use norden_lie::{LieAlgebraModel, ModelStructure};
use norden_odd::{ContactBStructure, FundamentalOdd};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "even-point")]
    EvenPoint,
    #[serde(rename = "odd-point")]
    OddPoint,
    #[serde(rename = "lie")]
    Lie,
}

/// Row-major data with an explicit shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Array {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl Array {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        Self { shape: vec![m.nrows(), m.ncols()], data: m.transpose().as_slice().to_vec() }
    }

    pub fn from_vector(v: &DVector<f64>) -> Self {
        Self { shape: vec![v.len()], data: v.as_slice().to_vec() }
    }

    pub fn from_tensor(t: &Tensor) -> Self {
        Self { shape: vec![t.dim(); t.rank()], data: t.to_flat().as_slice().to_vec() }
    }

    fn check(&self, field: &str, shape: &[usize]) -> Result<(), CliError> {
        if self.shape != shape {
            return Err(CliError::Schema(format!("field `{field}`: shape {:?}, expected {shape:?}", self.shape)));
        }
        let len: usize = shape.iter().product();
        if self.data.len() != len {
            return Err(CliError::Schema(format!(
                "field `{field}`: {} entries for shape {shape:?} ({len} expected)",
                self.data.len()
            )));
        }
        if let Some(i) = self.data.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Schema(format!("field `{field}`: non-finite entry at index {i}")));
        }
        Ok(())
    }

    fn matrix(&self, field: &str, d: usize) -> Result<DMatrix<f64>, CliError> {
        self.check(field, &[d, d])?;
        Ok(DMatrix::from_row_slice(d, d, &self.data))
    }

    fn vector(&self, field: &str, d: usize) -> Result<DVector<f64>, CliError> {
        self.check(field, &[d])?;
        Ok(DVector::from_column_slice(&self.data))
    }

    fn tensor3(&self, field: &str, d: usize) -> Result<Tensor, CliError> {
        self.check(field, &[d, d, d])?;
        Ok(Tensor::from_flat(d, 3, &DVector::from_column_slice(&self.data)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub g: Array,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Array>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Array>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Array>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Array>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Array>,
    /// A torsion tensor to decompose.
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Array>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<Array>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub enum Structure {
    Even(NordenStructure),
    Odd(ContactBStructure),
}

#[derive(Debug, Clone)]
pub enum Fundamental {
    Even(FundamentalEven),
    Odd(FundamentalOdd),
}

impl Fundamental {
    pub fn f(&self) -> &Tensor {
        match self {
            Fundamental::Even(f) => f.f(),
            Fundamental::Odd(f) => f.f(),
        }
    }
}

/// A validated document.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub structure: Structure,
    pub model: Option<LieAlgebraModel>,
    pub f: Option<Fundamental>,
    pub t: Option<Tensor>,
}

impl Loaded {
    pub fn dim(&self) -> usize {
        match &self.structure {
            Structure::Even(s) => s.dim(),
            Structure::Odd(s) => s.dim(),
        }
    }
}

pub fn parse_document(text: &str) -> Result<InputDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

fn require<'a>(field: &'a Option<Array>, name: &str) -> Result<&'a Array, CliError> {
    field.as_ref().ok_or_else(|| CliError::Schema(format!("missing field `{name}`")))
}

fn forbid(field: &Option<Array>, name: &str, why: &str) -> Result<(), CliError> {
    match field {
        Some(_) => Err(CliError::Schema(format!("field `{name}` is not allowed {why}"))),
        None => Ok(()),
    }
}

impl InputDocument {
    fn dimension(&self) -> Result<usize, CliError> {
        let d = *self.g.shape.first().ok_or_else(|| CliError::Schema("field `g`: empty shape".into()))?;
        if let Some(dim) = self.dim {
            if dim != d {
                return Err(CliError::Schema(format!("dim = {dim} but `g` has {d} rows")));
            }
        }
        Ok(d)
    }

    fn structure(&self, d: usize) -> Result<Structure, CliError> {
        let g = self.g.matrix("g", d)?;
        let even = match self.kind {
            Kind::EvenPoint => true,
            Kind::OddPoint => false,
            Kind::Lie => self.j.is_some(),
        };
        let n = if even { d / 2 } else { d.saturating_sub(1) / 2 };
        if d == 0 || d % 2 != usize::from(!even) {
            return Err(CliError::Schema(format!(
                "dimension {d} does not fit the {} case",
                if even { "even" } else { "odd" }
            )));
        }
        if let Some(given) = self.n {
            if given != n {
                return Err(CliError::Schema(format!("n = {given} but the dimension gives n = {n}")));
            }
        }
        if even {
            forbid(&self.phi, "phi", "with J")?;
            let j = require(&self.j, "J")?.matrix("J", d)?;
            Ok(Structure::Even(NordenStructure::new(j, g)?))
        } else {
            let phi = require(&self.phi, "phi")?.matrix("phi", d)?;
            let xi = require(&self.xi, "xi")?.vector("xi", d)?;
            let eta = require(&self.eta, "eta")?.vector("eta", d)?;
            Ok(Structure::Odd(ContactBStructure::new(phi, xi, eta, g)?))
        }
    }

    /// Validates shapes, structure axioms, `F` admissibility and the bracket.
    pub fn load(&self, tol: &Tolerance) -> Result<Loaded, CliError> {
        let d = self.dimension()?;
        let structure = self.structure(d)?;
        let t = self.t.as_ref().map(|t| t.tensor3("T", d)).transpose()?;
        let model = match self.kind {
            Kind::Lie => {
                forbid(&self.f, "F", "for a Lie model; it is computed from the bracket")?;
                let c = require(&self.structure_constants, "structure_constants")?.tensor3("structure_constants", d)?;
                let ms = match &structure {
                    Structure::Even(s) => ModelStructure::Even(s.clone()),
                    Structure::Odd(s) => ModelStructure::Odd(s.clone()),
                };
                Some(LieAlgebraModel::new(c, ms)?)
            }
            _ => {
                forbid(&self.structure_constants, "structure_constants", "for a point document")?;
                None
            }
        };
        let f = match (&model, &self.f) {
            (Some(m), _) => Some(match norden_lie::fundamental_from_model(m, tol)? {
                norden_lie::ModelFundamental::Even(f) => Fundamental::Even(f),
                norden_lie::ModelFundamental::Odd(f) => Fundamental::Odd(f),
            }),
            (None, Some(a)) => {
                let f = a.tensor3("F", d)?;
                Some(match &structure {
                    Structure::Even(s) => Fundamental::Even(FundamentalEven::new(f, s, tol)?),
                    Structure::Odd(s) => Fundamental::Odd(FundamentalOdd::new(f, s, tol)?),
                })
            }
            (None, None) => None,
        };
        Ok(Loaded { structure, model, f, t })
    }
}

/// Document for a structure, an optional `F` and optional bracket.
pub fn document_for(
    structure: &Structure,
    f: Option<&Tensor>,
    c: Option<&Tensor>,
    metadata: BTreeMap<String, String>,
) -> InputDocument {
    let (kind, n, g) = match structure {
        Structure::Even(s) => (Kind::EvenPoint, s.n(), s.g()),
        Structure::Odd(s) => (Kind::OddPoint, s.n(), s.g()),
    };
    let mut doc = InputDocument {
        kind: if c.is_some() { Kind::Lie } else { kind },
        n: Some(n),
        dim: Some(g.nrows()),
        g: Array::from_matrix(g),
        j: None,
        phi: None,
        xi: None,
        eta: None,
        f: f.map(Array::from_tensor),
        t: None,
        structure_constants: c.map(Array::from_tensor),
        metadata,
    };
    match structure {
        Structure::Even(s) => doc.j = Some(Array::from_matrix(s.j())),
        Structure::Odd(s) => {
            doc.phi = Some(Array::from_matrix(s.phi()));
            doc.xi = Some(Array::from_vector(s.xi()));
            doc.eta = Some(Array::from_vector(s.eta()));
        }
    }
    doc
}
