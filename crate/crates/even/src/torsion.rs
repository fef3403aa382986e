use std::collections::BTreeMap;

use nalgebra::DVector;
use norden_core::{GeomError, Result, Tensor, Tolerance};

use crate::spaces::{involution_a, involution_b, torsion_form, TorsionClassEven};
use crate::structure::NordenStructure;

/// A torsion tensor split into its invariant components.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionEven {
    t: Tensor,
    components: BTreeMap<TorsionClassEven, Tensor>,
    t_form: DVector<f64>,
}

impl TorsionEven {
    pub fn t(&self) -> &Tensor {
        &self.t
    }

    pub fn component(&self, class: TorsionClassEven) -> &Tensor {
        &self.components[&class]
    }

    pub fn components(&self) -> &BTreeMap<TorsionClassEven, Tensor> {
        &self.components
    }

    pub fn t_form(&self) -> &DVector<f64> {
        &self.t_form
    }

    /// Relative norm of each component.
    pub fn component_norms(&self) -> BTreeMap<TorsionClassEven, f64> {
        let scale = self.t.norm();
        self.components.iter().map(|(c, t)| (*c, if scale == 0.0 { 0.0 } else { t.norm() / scale })).collect()
    }

    /// `T3` component split as (trace-free, vectorial).
    pub fn t3_split(&self, s: &NordenStructure) -> (Tensor, Tensor) {
        let parts = s.spaces().t3_split.components(self.component(TorsionClassEven::T3));
        let mut it = parts.into_iter();
        (it.next().expect("two parts"), it.next().expect("two parts"))
    }
}

/// Splits `T` by the involutions `A(T) = T(J.,J.,.)` and `B(T) = T(J.,.,J.)`,
/// then separates `T3` from `T4` inside the `A = +1` eigenspace.
pub fn decompose_torsion_even(t: &Tensor, s: &NordenStructure, tol: &Tolerance) -> Result<TorsionEven> {
    if t.dim() != s.dim() || t.rank() != 3 {
        return Err(GeomError::DimMismatch { expected: s.dim(), found: t.dim() });
    }
    let skew = tol.relative((t + t.permuted(&[1, 0, 2])).norm(), t.norm());
    if !tol.passes(skew) {
        return Err(GeomError::PropertyViolation { property: "T(x,y,z) = -T(y,x,z)".into(), residual: skew });
    }
    let a = involution_a(t, s);
    let minus = 0.5 * (t - &a);
    let plus = 0.5 * (t + &a);
    let b = involution_b(&minus, s);
    let t1 = 0.5 * (&minus - &b);
    let t2 = 0.5 * (&minus + &b);
    let mut rest = s.spaces().a_plus_split.components(&plus).into_iter();
    let t3 = rest.next().expect("two parts");
    let t4 = rest.next().expect("two parts");
    let components = BTreeMap::from([
        (TorsionClassEven::T1, t1),
        (TorsionClassEven::T2, t2),
        (TorsionClassEven::T3, t3),
        (TorsionClassEven::T4, t4),
    ]);
    Ok(TorsionEven { t: t.clone(), components, t_form: torsion_form(t, s) })
}
