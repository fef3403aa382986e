use norden_core::Result;

use crate::structure::ContactBStructure;

/// Constant-parameter contactly conformal change: `ξ -> e^{-w}ξ`,
/// `η -> e^{w}η` and
/// `g -> e^{2u}cos 2v · g + e^{2u}sin 2v · g(.,φ.) + (e^{2w} - e^{2u}cos 2v) η⊗η`.
pub fn contact_conformal_transform(s: &ContactBStructure, u: f64, v: f64, w: f64) -> Result<ContactBStructure> {
    let a = (2.0 * u).exp() * (2.0 * v).cos();
    let b = (2.0 * u).exp() * (2.0 * v).sin();
    let gphi = s.g_phi();
    let ee = s.eta() * s.eta().transpose();
    let g = a * s.g() + b * 0.5 * (&gphi + gphi.transpose()) + ((2.0 * w).exp() - a) * ee;
    ContactBStructure::new(s.phi().clone(), (-w).exp() * s.xi(), w.exp() * s.eta(), g)
}
