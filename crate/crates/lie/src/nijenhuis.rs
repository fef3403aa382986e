use nalgebra::DMatrix;
use norden_core::Tensor;

use crate::connection::{d_eta_bracket, koszul_lc, lie_derivative};
use crate::model::{LieAlgebraModel, ModelStructure};

/// `B(Mx,My) + M²B(x,y) - M B(Mx,y) - M B(x,My)` for a vector-valued
/// bilinear map `B[x,y,k]`.
fn structure_bracket(b: &Tensor, m: &DMatrix<f64>) -> Tensor {
    let out = |t: &Tensor, a: &DMatrix<f64>| t.apply_slot(&a.transpose(), 2);
    let m2 = m * m;
    b.apply_slot(m, 0).apply_slot(m, 1) + out(b, &m2) - out(&b.apply_slot(m, 0), m) - out(&b.apply_slot(m, 1), m)
}

/// `(N, N^)` lowered to `(0,3)` tensors, from brackets of invariant fields:
/// `N = [Φ,Φ] (+ dη⊗ξ)` and `N^ = {Φ,Φ} (+ (L_ξ g)⊗ξ)` with
/// `{x,y} = ∇_x y + ∇_y x`.
pub fn bracket_nijenhuis(model: &LieAlgebraModel) -> (Tensor, Tensor) {
    let m = model.structure().endomorphism();
    let gamma = koszul_lc(model).gamma().clone();
    let sym = &gamma + gamma.permuted(&[1, 0, 2]);
    let mut n = structure_bracket(model.c(), m);
    let mut n_hat = structure_bracket(&sym, m);
    if let ModelStructure::Odd(s) = model.structure() {
        let xi = Tensor::from_covector(s.xi());
        n += d_eta_bracket(model, s.eta()).outer(&xi);
        n_hat += lie_derivative(model, s.xi()).outer(&xi);
    }
    (n.apply_slot(model.g(), 2), n_hat.apply_slot(model.g(), 2))
}
