mod common;

use norden_core::potential::{potential_from_torsion, torsion_from_potential, total_skew_residual};
use norden_core::{cyclic_sum, GeomError, Tensor, Tolerance};
use norden_even::{
    b_connection_even, b_torsion_from_nijenhuis, canonical_connection_even, canonical_identity_residual,
    canonical_torsion, decompose_torsion_even, kt_connection_even, naturality_check_even, vectorial_torsion, EvenClass,
    FundamentalEven, NijenhuisEven, NordenStructure, TorsionClassEven,
};

use EvenClass::{W1, W2, W3};

#[test]
fn levi_civita_case() {
    let tol = Tolerance::default();
    let s = NordenStructure::canonical(2);
    let f = FundamentalEven::zero(&s);
    assert_eq!(b_connection_even(&f, &s, &tol).unwrap().q().norm(), 0.0);
    assert_eq!(canonical_connection_even(&f, &s, &tol).unwrap().t().norm(), 0.0);
    assert_eq!(kt_connection_even(&f, &s, &tol).unwrap().q().norm(), 0.0);
    assert!(naturality_check_even(&Tensor::zeros(4, 3), f.f(), &s, &tol).natural);
}

#[test]
fn zero_potential_is_not_natural_for_nonzero_f() {
    let tol = Tolerance::default();
    let mut r = common::rng(31);
    let s = common::structure(&mut r, 2);
    let f = common::admissible(&mut r, &s);
    assert!(!naturality_check_even(&Tensor::zeros(4, 3), f.f(), &s, &tol).natural);
}

#[test]
fn b_and_canonical_connections_on_random_tensors() {
    let tol = Tolerance::default();
    let mut r = common::rng(32);
    for n in [2, 3] {
        let s = common::structure(&mut r, n);
        for _ in 0..30 {
            let f = common::admissible(&mut r, &s);
            let nij = NijenhuisEven::from_fundamental(&f, &s);
            let b = b_connection_even(&f, &s, &tol).unwrap();
            assert!(naturality_check_even(b.q(), f.f(), &s, &tol).natural);
            assert!(common::rel(b.t(), &b_torsion_from_nijenhuis(&nij)) < 1e-10);

            let c = canonical_connection_even(&f, &s, &tol).unwrap();
            assert!(canonical_identity_residual(c.t(), &s) < 1e-10);
            assert!(naturality_check_even(c.q(), f.f(), &s, &tol).natural);
            assert!(common::rel(&torsion_from_potential(c.q()), c.t()) < 1e-12);
            let norms = c.torsion().component_norms();
            assert!(norms[&TorsionClassEven::T1] < 1e-10 && norms[&TorsionClassEven::T4] < 1e-10);
        }
    }
}

#[test]
fn class_specific_torsions() {
    let tol = Tolerance::default();
    let mut r = common::rng(33);
    let s = common::structure(&mut r, 2);
    for _ in 0..10 {
        let w3 = common::in_classes(&mut r, &s, &[W3]);
        let nij = NijenhuisEven::from_fundamental(&w3, &s);
        let b = b_connection_even(&w3, &s, &tol).unwrap();
        let n = nij.n();
        assert!(common::rel(b.t(), &(0.125 * (n + cyclic_sum(n)))) < 1e-10);
        let c = canonical_connection_even(&w3, &s, &tol).unwrap();
        assert!(common::rel(c.t(), &(0.25 * n)) < 1e-10);
        let k = kt_connection_even(&w3, &s, &tol).unwrap();
        assert!(total_skew_residual(k.t()) < 1e-10);
        assert!(common::rel(k.t(), &(0.25 * cyclic_sum(n))) < 1e-10);
        assert!(common::rel(b.t(), &(0.5 * (c.t() + k.t()))) < 1e-10);
        assert!(common::rel(b.q(), &(0.5 * (c.q() + k.q()))) < 1e-10);
        assert!(naturality_check_even(k.q(), w3.f(), &s, &tol).natural);
        assert!(c.torsion().component_norms()[&TorsionClassEven::T3] < 1e-10);

        let w12 = common::in_classes(&mut r, &s, &[W1, W2]);
        let b = b_connection_even(&w12, &s, &tol).unwrap();
        let c = canonical_connection_even(&w12, &s, &tol).unwrap();
        assert!(common::rel(b.t(), c.t()) < 1e-10);
        assert!(c.torsion().component_norms()[&TorsionClassEven::T2] < 1e-10);

        let w1 = common::in_classes(&mut r, &s, &[W1]);
        let nij = NijenhuisEven::from_fundamental(&w1, &s);
        let t = canonical_torsion(&nij);
        assert!(common::rel(&t, &vectorial_torsion(&(nij.nu_hat() / 8.0), &s)) < 1e-10);

        let w2 = common::in_classes(&mut r, &s, &[W2]);
        let c = canonical_connection_even(&w2, &s, &tol).unwrap();
        let (_, vectorial) = c.torsion().t3_split(&s);
        assert!(c.torsion().t_form().norm() < 1e-10 && vectorial.norm() < 1e-10);
    }
}

#[test]
fn kt_requires_quasi_kaehler() {
    let tol = Tolerance::default();
    let mut r = common::rng(34);
    let s = common::structure(&mut r, 2);
    for target in [&[W1][..], &[W2], &[W1, W3]] {
        let f = common::in_classes(&mut r, &s, target);
        assert!(matches!(kt_connection_even(&f, &s, &tol), Err(GeomError::ClassPrecondition(_))));
    }
}

#[test]
fn potential_torsion_bijection() {
    let tol = Tolerance::default();
    let mut r = common::rng(35);
    let s = common::structure(&mut r, 3);
    let raw = common::random_tensor(&mut r, 6);
    let q = &raw - raw.permuted(&[0, 2, 1]);
    let t = torsion_from_potential(&q);
    assert!(common::rel(&potential_from_torsion(&t), &q) < 1e-12);
    decompose_torsion_even(&t, &s, &tol).unwrap();
}
