mod common;

use norden_core::{GeomError, Tensor, Tolerance};
use norden_even::{canonical_torsion, classify_even, NijenhuisEven, NordenStructure};
use norden_lie::{
    bracket_nijenhuis, curvature, d_eta_bracket, fundamental_from_model, is_kahler_tensor, koszul_lc,
    lie_derivative_metric, LieAlgebraModel, ModelFundamental, ModelStructure,
};
use norden_odd::{classify_odd, phi_canonical_connection, ContactBStructure, NijenhuisOdd, OddClass};

#[test]
fn abelian_algebra_is_flat() {
    let tol = Tolerance::default();
    for structure in
        [ModelStructure::Even(NordenStructure::canonical(2)), ModelStructure::Odd(ContactBStructure::canonical(2))]
    {
        let d = structure.dim();
        let m = LieAlgebraModel::new(Tensor::zeros(d, 3), structure).unwrap();
        assert_eq!(koszul_lc(&m).gamma().norm(), 0.0);
        assert_eq!(fundamental_from_model(&m, &tol).unwrap().f().norm(), 0.0);
        let curv = curvature(&m);
        assert_eq!(curv.r.norm(), 0.0);
        assert_eq!(curv.scalar, 0.0);
        if let Some(l) = lie_derivative_metric(&m) {
            assert_eq!(l.norm(), 0.0);
        }
    }
}

#[test]
fn invalid_brackets_are_rejected() {
    let mut r = common::rng(71);
    let s = ModelStructure::Odd(common::odd_structure(&mut r, 2));
    let mut c = common::semidirect(&mut r, 5);
    let mut bad = c.clone();
    bad[[0, 1, 2]] += 0.3;
    assert!(matches!(LieAlgebraModel::new(bad, s.clone()), Err(GeomError::BracketNotAntisymmetric { .. })));
    let (i, j, k) = (1, 2, 3);
    c[[i, j, k]] += 0.3;
    c[[j, i, k]] -= 0.3;
    assert!(matches!(LieAlgebraModel::new(c, s), Err(GeomError::JacobiViolation { .. })));
}

#[test]
fn levi_civita_and_bracket_routes_even() {
    let tol = Tolerance::default();
    let mut r = common::rng(72);
    for n in [2, 3] {
        for _ in 0..10 {
            let m = common::even_model(&mut r, n);
            let lc = koszul_lc(&m);
            assert!(lc.torsion_residual(&m) < 1e-12);
            assert!(lc.metric_residual(&m) < 1e-12);
            let ModelFundamental::Even(f) = fundamental_from_model(&m, &tol).unwrap() else { panic!() };
            let ModelStructure::Even(s) = m.structure() else { panic!() };
            let nij = NijenhuisEven::from_fundamental(&f, s);
            let (n_b, n_hat_b) = bracket_nijenhuis(&m);
            assert!(common::rel(&n_b, nij.n()) < 1e-10);
            assert!(common::rel(&n_hat_b, nij.n_hat()) < 1e-10);
            classify_even(&f, s, &tol).unwrap();
            let curv = curvature(&m);
            assert!(curv.bianchi_residual() < 1e-10);
            assert!(curv.symmetry_residual() < 1e-10);
            assert!(curv.ricci_symmetry_residual() < 1e-10);
        }
    }
}

#[test]
fn levi_civita_and_bracket_routes_odd() {
    let tol = Tolerance::default();
    let mut r = common::rng(73);
    for n in [2, 3] {
        for _ in 0..10 {
            let m = common::odd_model(&mut r, n);
            let lc = koszul_lc(&m);
            assert!(lc.torsion_residual(&m) < 1e-12);
            assert!(lc.metric_residual(&m) < 1e-12);
            let ModelFundamental::Odd(f) = fundamental_from_model(&m, &tol).unwrap() else { panic!() };
            let ModelStructure::Odd(s) = m.structure() else { panic!() };
            let nij = NijenhuisOdd::from_fundamental(&f, s);
            let (n_b, n_hat_b) = bracket_nijenhuis(&m);
            assert!(common::rel(&n_b, nij.n()) < 1e-10);
            assert!(common::rel(&n_hat_b, nij.n_hat()) < 1e-10);
            assert!(common::rel(&d_eta_bracket(&m, s.eta()), &f.d_eta(s)) < 1e-10);
            classify_odd(&f, s, &tol).unwrap();
            let curv = curvature(&m);
            assert!(curv.bianchi_residual() < 1e-10);
            assert!(curv.ricci_symmetry_residual() < 1e-10);
        }
    }
}

#[test]
fn heisenberg_model_end_to_end() {
    let tol = Tolerance::default();
    let m = common::heisenberg();
    let l = lie_derivative_metric(&m).unwrap();
    assert!(l.norm() < 1e-15);
    let ModelFundamental::Odd(f) = fundamental_from_model(&m, &tol).unwrap() else { panic!() };
    assert!(f.norm() > 0.1);
    let ModelStructure::Odd(s) = m.structure() else { panic!() };
    // Normal, yet outside the normal sum: F lies on the F8+F10 diagonal.
    let label = classify_odd(&f, s, &tol).unwrap();
    assert_eq!(label.members, [OddClass::F8, OddClass::F10].into_iter().collect());
    let (n_b, n_hat_b) = bracket_nijenhuis(&m);
    let nij = NijenhuisOdd::from_fundamental(&f, s);
    assert!((&n_b - nij.n()).norm() < 1e-12 && (&n_hat_b - nij.n_hat()).norm() < 1e-12);
    assert!(n_b.norm() < 1e-12);
    assert!(n_hat_b.norm() > 0.1);
}

#[test]
fn kahler_tensor_predicate() {
    let s = NordenStructure::canonical(2);
    let g = s.g();
    let gj = s.assoc_metric().g();
    let pi = |a: &nalgebra::DMatrix<f64>| {
        Tensor::from_fn(4, 4, |ix| a[(ix[1], ix[2])] * a[(ix[0], ix[3])] - a[(ix[0], ix[2])] * a[(ix[1], ix[3])])
    };
    let (pi1, pi2) = (pi(g), pi(gj));
    assert!(is_kahler_tensor(&(&pi1 - &pi2), s.j(), 1e-12));
    assert!(!is_kahler_tensor(&pi1, s.j(), 1e-12));
}

#[test]
fn conformal_invariance_of_canonical_torsion() {
    let tol = Tolerance::default();
    let mut r = common::rng(74);
    for _ in 0..5 {
        let m = common::even_model(&mut r, 2);
        let t12 = |m: &LieAlgebraModel| {
            let ModelStructure::Even(s) = m.structure() else { panic!() };
            let ModelFundamental::Even(f) = fundamental_from_model(m, &tol).unwrap() else { panic!() };
            let label = classify_even(&f, s, &tol).unwrap();
            (s.metric().raise_last(&canonical_torsion(&NijenhuisEven::from_fundamental(&f, s))), label.members)
        };
        let (base, label) = t12(&m);
        for (u, v) in [(0.3, 0.0), (0.0, 0.4), (0.2, -0.7)] {
            let (t, l) = t12(&m.conformal(u, v, 0.0).unwrap());
            assert!(common::rel(&t, &base) < 1e-9);
            assert_eq!(l, label);
        }
    }
    for _ in 0..5 {
        let m = common::odd_model(&mut r, 2);
        let t12 = |m: &LieAlgebraModel| {
            let ModelStructure::Odd(s) = m.structure() else { panic!() };
            let ModelFundamental::Odd(f) = fundamental_from_model(m, &tol).unwrap() else { panic!() };
            let label = classify_odd(&f, s, &tol).unwrap();
            (s.metric().raise_last(phi_canonical_connection(&f, s, &tol).unwrap().t()), label.members)
        };
        let (base, label) = t12(&m);
        for (u, v, w) in [(0.3, 0.0, 0.0), (0.0, 0.4, 0.0), (0.0, 0.0, 0.5), (0.2, -0.3, 0.4)] {
            let (t, l) = t12(&m.conformal(u, v, w).unwrap());
            assert!(common::rel(&t, &base) < 1e-9);
            assert_eq!(l, label);
        }
    }
}
