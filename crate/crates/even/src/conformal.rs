use norden_core::Result;

use crate::structure::NordenStructure;

/// `g -> e^{2u}(cos 2v · g + sin 2v · g~)` with constant `u, v`; `J` is kept.
pub fn conformal_transform_even(s: &NordenStructure, u: f64, v: f64) -> Result<NordenStructure> {
    let scale = (2.0 * u).exp();
    let g = scale * ((2.0 * v).cos() * s.g() + (2.0 * v).sin() * s.assoc_metric().g());
    NordenStructure::new(s.j().clone(), g)
}
