use std::collections::BTreeMap;

use nalgebra::DVector;
use norden_core::{GeomError, Result, Tensor, Tolerance};

use crate::spaces::{torsion_t, torsion_t_hat, torsion_t_star, TorsionClassOdd};
use crate::structure::ContactBStructure;

/// A torsion tensor split into its fifteen invariant components.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionOdd {
    t: Tensor,
    components: BTreeMap<TorsionClassOdd, Tensor>,
    t_form: DVector<f64>,
    t_star_form: DVector<f64>,
    t_hat_form: DVector<f64>,
}

impl TorsionOdd {
    pub fn t(&self) -> &Tensor {
        &self.t
    }

    pub fn component(&self, class: TorsionClassOdd) -> &Tensor {
        &self.components[&class]
    }

    pub fn components(&self) -> &BTreeMap<TorsionClassOdd, Tensor> {
        &self.components
    }

    pub fn t_form(&self) -> &DVector<f64> {
        &self.t_form
    }

    pub fn t_star_form(&self) -> &DVector<f64> {
        &self.t_star_form
    }

    pub fn t_hat_form(&self) -> &DVector<f64> {
        &self.t_hat_form
    }

    /// Relative norm of each component.
    pub fn component_norms(&self) -> BTreeMap<TorsionClassOdd, f64> {
        let scale = self.t.norm();
        self.components.iter().map(|(c, t)| (*c, if scale == 0.0 { 0.0 } else { t.norm() / scale })).collect()
    }

    /// Classes whose component exceeds the tolerance relative to `|T|`.
    pub fn support(&self, tol: &Tolerance) -> Vec<TorsionClassOdd> {
        self.component_norms().into_iter().filter(|(_, r)| !tol.passes(*r)).map(|(c, _)| c).collect()
    }
}

pub fn decompose_torsion_odd(t: &Tensor, s: &ContactBStructure, tol: &Tolerance) -> Result<TorsionOdd> {
    if t.dim() != s.dim() || t.rank() != 3 {
        return Err(GeomError::DimMismatch { expected: s.dim(), found: t.dim() });
    }
    let skew = tol.relative((t + t.permuted(&[1, 0, 2])).norm(), t.norm());
    if !tol.passes(skew) {
        return Err(GeomError::PropertyViolation { property: "T(x,y,z) = -T(y,x,z)".into(), residual: skew });
    }
    let components = TorsionClassOdd::ALL.into_iter().zip(s.torsion_components(t)).collect();
    Ok(TorsionOdd {
        t: t.clone(),
        components,
        t_form: torsion_t(t, s),
        t_star_form: torsion_t_star(t, s),
        t_hat_form: torsion_t_hat(t, s),
    })
}
