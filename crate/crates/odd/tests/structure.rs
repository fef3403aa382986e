mod common;

use nalgebra::{DMatrix, DVector};
use norden_core::{project_subspace, ConstraintOperator, GeomError, Tensor, Tolerance};
use norden_odd::{
    admissibility_residual, admissible_projection, block_contact, contact_conformal_transform, f_from_nijenhuis_odd,
    nijenhuis_odd_from_f, validate_contact_b, ContactBStructure, FundamentalOdd, NijenhuisOdd,
};

#[test]
fn canonical_model_signature() {
    for n in 1..4 {
        let s = ContactBStructure::canonical(n);
        assert_eq!(s.metric().signature(), (n + 1, n));
        assert_eq!(s.assoc_metric().signature(), (n + 1, n));
        let id = DMatrix::<f64>::identity(2 * n + 1, 2 * n + 1);
        assert!((s.h_proj() + s.v_proj() - &id).norm() < 1e-15);
        assert!((s.h_proj() * s.v_proj()).norm() < 1e-15);
    }
}

#[test]
fn degenerate_reeb_pairing_rejected() {
    let s = ContactBStructure::canonical(2);
    let mut xi = DVector::zeros(5);
    xi[0] = 1.0;
    let err = validate_contact_b(block_contact(2), xi, s.eta().clone(), s.g().clone()).unwrap_err();
    match err {
        GeomError::AxiomViolation { identity, .. } => assert_eq!(identity, "η(ξ) = 1"),
        other => panic!("unexpected {other:?}"),
    }
    assert!(validate_contact_b(block_contact(2), s.xi().clone(), s.eta().clone(), DMatrix::identity(5, 5)).is_err());
}

#[test]
fn conjugated_structures_validate() {
    let mut r = common::rng(41);
    for n in [1, 2, 3] {
        for _ in 0..50 {
            let s = common::structure(&mut r, n);
            let d = 2 * n + 1;
            assert!((s.h_proj() + s.v_proj() - DMatrix::<f64>::identity(d, d)).norm() < 1e-10);
            assert_eq!(s.metric().signature(), (n + 1, n));
        }
    }
}

#[test]
fn admissible_projection_properties() {
    let tol = Tolerance::default();
    let mut r = common::rng(42);
    for n in [2, 3] {
        let s = common::structure(&mut r, n);
        for _ in 0..100 {
            let f = common::admissible(&mut r, &s);
            assert!(admissibility_residual(f.f(), &s) < 1e-12);
            assert!(common::rel(&admissible_projection(f.f(), &s), f.f()) < 1e-12);
            let (lee, omega) = f.lee_residuals(&s);
            assert!(lee < 1e-10 && omega < 1e-10, "{lee} {omega}");
            // Traces against the associated metric: θ~ = -θ*, θ*~ = θ.
            let gt_h = s.assoc_metric().g_inv() - s.xi() * s.xi().transpose();
            let tt = f.f().contract_with(&gt_h, (0, 1)).unwrap().to_vector();
            let tts = f.f().apply_slot(s.phi(), 1).contract_with(&gt_h, (0, 1)).unwrap().to_vector();
            let sc = f.theta().norm() + f.theta_star().norm();
            assert!((tt + f.theta_star()).norm() < 1e-10 * sc);
            assert!((tts - f.theta()).norm() < 1e-10 * sc);
        }
        let zero = FundamentalOdd::admissible(&Tensor::zeros(s.dim(), 3), &s);
        assert_eq!(zero.norm(), 0.0);
        assert!(FundamentalOdd::new(common::random_tensor(&mut r, s.dim()), &s, &tol).is_err());
    }
}

#[test]
fn closed_form_projector_matches_subspace_projection() {
    let mut r = common::rng(43);
    let s = common::structure(&mut r, 2);
    let d = s.dim();
    let full = norden_core::Subspace::full(d * d * d);
    let constraints = norden_odd::admissibility_constraints(&s);
    let complement = vec![ConstraintOperator::from_map(d, 3, |t| admissible_projection(t, &s))];
    for _ in 0..10 {
        let raw = common::random_tensor(&mut r, d);
        let p = project_subspace(&raw, &constraints, &complement, &full).unwrap();
        assert!(common::rel(&p, &admissible_projection(&raw, &s)) < 1e-10);
    }
    assert_eq!(s.admissible_space().dim(), 40);
}

#[test]
fn nijenhuis_round_trip_and_properties() {
    let tol = Tolerance::default();
    let mut r = common::rng(44);
    for n in [2, 3] {
        let s = common::structure(&mut r, n);
        for _ in 0..100 {
            let f = common::admissible(&mut r, &s);
            let nij = nijenhuis_odd_from_f(&f, &s);
            for (name, res) in nij.property_residuals(&s) {
                assert!(res < 1e-12, "{name}: {res}");
            }
            let back = f_from_nijenhuis_odd(&nij, &s, &tol).unwrap();
            assert!(common::rel(back.f(), f.f()) < 1e-9);
        }
    }
}

#[test]
fn zero_and_invalid_pairs() {
    let tol = Tolerance::default();
    let mut r = common::rng(45);
    let s = common::structure(&mut r, 2);
    let zero = NijenhuisOdd::new(Tensor::zeros(5, 3), Tensor::zeros(5, 3));
    assert_eq!(zero.to_fundamental(&s, &tol).unwrap().norm(), 0.0);
    assert_eq!(nijenhuis_odd_from_f(&FundamentalOdd::zero(&s), &s).norm(), 0.0);
    let bad = NijenhuisOdd::new(common::random_antisymmetric(&mut r, 5), common::random_tensor(&mut r, 5));
    assert!(matches!(bad.to_fundamental(&s, &tol), Err(GeomError::PropertyViolation { .. })));
}

#[test]
fn contact_conformal_cases() {
    let mut r = common::rng(46);
    let s = common::structure(&mut r, 2);
    let same = contact_conformal_transform(&s, 0.0, 0.0, 0.0).unwrap();
    assert!((same.g() - s.g()).norm() < 1e-14);
    let scaled = contact_conformal_transform(&s, 0.3, 0.0, 0.0).unwrap();
    let h = s.h_proj();
    let gh = h.transpose() * s.g() * h;
    let gh_bar = h.transpose() * scaled.g() * h;
    assert!((gh_bar - (0.6f64).exp() * &gh).norm() < 1e-12 * gh.norm());
    assert!((scaled.xi() - s.xi()).norm() < 1e-15);
    let mixed = contact_conformal_transform(&s, -0.2, 0.5, 0.4).unwrap();
    assert_eq!(mixed.metric().signature(), (3, 2));
    assert!((mixed.xi() - (-0.4f64).exp() * s.xi()).norm() < 1e-14);
}

#[test]
fn single_tensor_corollaries() {
    let tol = Tolerance::default();
    let mut r = common::rng(47);
    let s = common::structure(&mut r, 2);
    let phi = s.phi();
    let eta = Tensor::from_covector(s.eta());
    let recover = |t: &Tensor, with_w: bool| {
        let a = t.apply_slot(phi, 0);
        let b = t.apply_slot(phi, 2).insert_vector(0, s.xi());
        let mut c = b;
        if with_w {
            let w = t.apply_slot(phi, 2).insert_vector(0, s.xi()).insert_vector(0, s.xi());
            c += Tensor::from_covector(&w.to_vector()).outer(&eta);
        }
        -0.25 * (&a + a.permuted(&[0, 2, 1])) + 0.5 * eta.outer(&c)
    };
    for classes in [&[norden_odd::OddClass::F3][..], &[norden_odd::OddClass::F3, norden_odd::OddClass::F7]] {
        let f = common::in_classes(&mut r, &s, classes);
        let nij = nijenhuis_odd_from_f(&f, &s);
        assert!(common::rel(&recover(nij.n(), false), f.f()) < 1e-10);
        assert!(common::rel(f_from_nijenhuis_odd(&nij, &s, &tol).unwrap().f(), f.f()) < 1e-10);
    }
    use norden_odd::OddClass::*;
    let f = common::in_classes(&mut r, &s, &[F1, F2, F4, F5, F6]);
    let nij = nijenhuis_odd_from_f(&f, &s);
    assert!(common::rel(&recover(nij.n_hat(), true), f.f()) < 1e-10);
}
