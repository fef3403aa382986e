use nalgebra::DMatrix;
use norden_core::{Result, Tensor, Tolerance};
use norden_even::FundamentalEven;
use norden_odd::FundamentalOdd;

use crate::model::{LieAlgebraModel, ModelStructure};

/// Levi-Civita coefficients `Γ[x,y,k] = (∇_{e_x} e_y)^k` of a left-invariant metric.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviCivita {
    gamma: Tensor,
}

impl LeviCivita {
    pub fn gamma(&self) -> &Tensor {
        &self.gamma
    }

    /// `∇_x y - ∇_y x - [x,y]`, relative to the bracket scale.
    pub fn torsion_residual(&self, model: &LieAlgebraModel) -> f64 {
        let t = &self.gamma - self.gamma.permuted(&[1, 0, 2]) - model.c();
        t.max_abs() / model.c().max_abs().max(1.0)
    }

    /// `g(∇_x y, z) + g(y, ∇_x z)`, relative to the bracket scale.
    pub fn metric_residual(&self, model: &LieAlgebraModel) -> f64 {
        let low = self.gamma.apply_slot(model.g(), 2);
        (&low + low.permuted(&[0, 2, 1])).max_abs() / (model.c().max_abs() * model.g().amax()).max(1.0)
    }

    /// `((∇_x M) y)^k` for an endomorphism `M`.
    pub fn covariant_derivative(&self, m: &DMatrix<f64>) -> Tensor {
        self.gamma.apply_slot(m, 1) - self.gamma.apply_slot(&m.transpose(), 2)
    }
}

/// `2g(∇_x y, z) = g([x,y],z) - g([y,z],x) + g([z,x],y)`.
pub fn koszul_lc(model: &LieAlgebraModel) -> LeviCivita {
    let cl = model.c().apply_slot(model.g(), 2);
    let lowered = 0.5 * (&cl - cl.permuted(&[1, 2, 0]) + cl.permuted(&[2, 0, 1]));
    LeviCivita { gamma: lowered.apply_slot(model.structure().g_inv(), 2) }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelFundamental {
    Even(FundamentalEven),
    Odd(FundamentalOdd),
}

impl ModelFundamental {
    pub fn f(&self) -> &Tensor {
        match self {
            ModelFundamental::Even(f) => f.f(),
            ModelFundamental::Odd(f) => f.f(),
        }
    }
}

/// `F(x,y,z) = g((∇_x Φ)y, z)` from the Levi-Civita connection; the result
/// must already be admissible.
pub fn fundamental_from_model(model: &LieAlgebraModel, tol: &Tolerance) -> Result<ModelFundamental> {
    let lc = koszul_lc(model);
    let f = lc.covariant_derivative(model.structure().endomorphism()).apply_slot(model.g(), 2);
    Ok(match model.structure() {
        ModelStructure::Even(s) => ModelFundamental::Even(FundamentalEven::new(f, s, tol)?),
        ModelStructure::Odd(s) => ModelFundamental::Odd(FundamentalOdd::new(f, s, tol)?),
    })
}

/// `dη(x,y) = -η([x,y])` for left-invariant fields.
pub fn d_eta_bracket(model: &LieAlgebraModel, eta: &nalgebra::DVector<f64>) -> Tensor {
    -1.0 * model.c().insert_vector(2, eta)
}

/// `(L_v g)(x,y) = -g([v,x],y) - g(x,[v,y])`.
pub fn lie_derivative(model: &LieAlgebraModel, v: &nalgebra::DVector<f64>) -> Tensor {
    let vx = model.c().insert_vector(0, v).apply_slot(model.g(), 1);
    -1.0 * (&vx + vx.permuted(&[1, 0]))
}

/// `L_ξ g`; `None` in even dimension.
pub fn lie_derivative_metric(model: &LieAlgebraModel) -> Option<Tensor> {
    match model.structure() {
        ModelStructure::Odd(s) => Some(lie_derivative(model, s.xi())),
        ModelStructure::Even(_) => None,
    }
}
