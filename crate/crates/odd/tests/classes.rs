mod common;

use std::collections::BTreeSet;

use norden_core::{Tensor, Tolerance};
use norden_odd::{
    classify_odd, decompose_torsion_odd, f11_form, f5_form, nijenhuis_of_class, phi_canonical_connection,
    ContactBStructure, FundamentalOdd, NijenhuisOdd, OddClass, TorsionClassOdd,
};

use OddClass::*;

fn set(c: &[OddClass]) -> BTreeSet<OddClass> {
    c.iter().copied().collect()
}

#[test]
fn class_and_torsion_dimensions() {
    let s = ContactBStructure::canonical(2);
    let dims: Vec<usize> = OddClass::ALL.iter().map(|c| s.class_space(*c).dim()).collect();
    assert_eq!(dims, vec![4, 8, 4, 1, 1, 4, 2, 4, 4, 4, 4]);
    let t: Vec<usize> = TorsionClassOdd::ALL.iter().map(|c| s.torsion_class_space(*c).dim()).collect();
    assert_eq!(t.iter().sum::<usize>(), 50);
    // Paired blocks: T1+T2, T4+T5, T9+T10+T11.
    assert_eq!(t[0] + t[1], 4);
    assert_eq!(t[2], 4);
    assert_eq!(t[3] + t[4], 12);
    assert_eq!(&t[5..8], &[4, 2, 4]);
    assert_eq!(t[8] + t[9] + t[10], 6);
    assert_eq!(&t[11..], &[2, 4, 4, 4]);
}

#[test]
fn zero_tensor_is_f0() {
    let s = ContactBStructure::canonical(2);
    let label = classify_odd(&FundamentalOdd::zero(&s), &s, &Tolerance::default()).unwrap();
    assert!(label.is_cosymplectic());
    assert_eq!(label.name(), "F0");
}

#[test]
fn explicit_f5_and_f11_tensors() {
    let tol = Tolerance::default();
    let mut r = common::rng(51);
    let s = common::structure(&mut r, 2);
    let f5 = FundamentalOdd::new(f5_form(1.7, &s), &s, &tol).unwrap();
    assert!((f5.theta_star().dot(s.xi()) - 1.7).abs() < 1e-10);
    assert_eq!(classify_odd(&f5, &s, &tol).unwrap().members, set(&[F5]));

    let mut omega = common::random_covector(&mut r, 5);
    omega -= s.eta() * omega.dot(s.xi());
    let f11 = FundamentalOdd::new(f11_form(&omega, &s), &s, &tol).unwrap();
    assert!((f11.omega() - &omega).norm() < 1e-10 * omega.norm());
    assert_eq!(classify_odd(&f11, &s, &tol).unwrap().members, set(&[F11]));
    let nij = NijenhuisOdd::from_fundamental(&f11, &s);
    let table = nijenhuis_of_class(F11, &f11, &s);
    assert!(common::rel(table.n_hat(), nij.n_hat()) < 1e-10);
    assert!(common::rel(table.n(), nij.n()) < 1e-10);
}

#[test]
fn every_basic_class_classifies_identically() {
    let tol = Tolerance::default();
    let mut r = common::rng(52);
    for n in [2, 3] {
        let s = common::structure(&mut r, n);
        for c in OddClass::ALL {
            for _ in 0..5 {
                let f = common::in_classes(&mut r, &s, &[c]);
                let label = classify_odd(&f, &s, &tol).unwrap_or_else(|e| panic!("{c}: {e}"));
                assert_eq!(label.members, set(&[c]));
                let nij = NijenhuisOdd::from_fundamental(&f, &s);
                let table = nijenhuis_of_class(c, &f, &s);
                assert!(common::rel(table.n(), nij.n()) < 1e-9 || nij.n().norm() < 1e-12);
                assert!(common::rel(table.n_hat(), nij.n_hat()) < 1e-9 || nij.n_hat().norm() < 1e-12);
            }
        }
    }
}

#[test]
fn mixed_samples_classify_to_their_union() {
    let tol = Tolerance::default();
    let mut r = common::rng(53);
    let s = common::structure(&mut r, 2);
    let targets: [&[OddClass]; 6] =
        [&[F3, F7], &[F1, F2, F4, F5, F6], &[F8, F10], &[F1, F11], &[F2, F9, F10], &OddClass::ALL];
    for target in targets {
        let f = common::in_classes(&mut r, &s, target);
        let label = classify_odd(&f, &s, &tol).unwrap();
        assert_eq!(label.members, set(target));
    }
}

#[test]
fn nijenhuis_characterisation_of_unions() {
    let mut r = common::rng(54);
    let s = common::structure(&mut r, 2);
    let f = common::in_classes(&mut r, &s, &[F3, F7]);
    let nij = NijenhuisOdd::from_fundamental(&f, &s);
    assert!(nij.n_hat().norm() < 1e-12 * nij.n().norm());
    let f = common::in_classes(&mut r, &s, &[F1, F2, F4, F5, F6]);
    let nij = NijenhuisOdd::from_fundamental(&f, &s);
    assert!(nij.n().norm() < 1e-12 * nij.n_hat().norm());
}

#[test]
fn correspondence_with_torsion_classes() {
    use TorsionClassOdd as T;
    let tol = Tolerance::default();
    let mut r = common::rng(55);
    let s = common::structure(&mut r, 2);
    let expect: [(OddClass, &[T]); 11] = [
        (F1, &[T::T4]),
        (F2, &[T::T5]),
        (F3, &[T::T3]),
        (F4, &[T::T10]),
        (F5, &[T::T9]),
        (F6, &[T::T11]),
        (F7, &[T::T7]),
        (F8, &[T::T8, T::T14]),
        (F9, &[T::T13]),
        (F10, &[T::T14]),
        (F11, &[T::T15]),
    ];
    for (c, want) in expect {
        let f = common::in_classes(&mut r, &s, &[c]);
        let can = phi_canonical_connection(&f, &s, &tol).unwrap();
        assert_eq!(can.torsion().support(&tol), want.to_vec(), "{c}");
    }
}

#[test]
fn torsion_decomposition_properties() {
    let tol = Tolerance::default();
    let mut r = common::rng(56);
    let s = common::structure(&mut r, 2);
    let zero = decompose_torsion_odd(&Tensor::zeros(5, 3), &s, &tol).unwrap();
    assert!(zero.components().values().all(|t| t.norm() == 0.0));
    for _ in 0..20 {
        let t = common::random_antisymmetric(&mut r, 5);
        let dec = decompose_torsion_odd(&t, &s, &tol).unwrap();
        let sum: Tensor = dec.components().values().cloned().sum();
        assert!(common::rel(&sum, &t) < 1e-10);
        for (class, comp) in dec.components() {
            assert!(s.torsion_class_space(*class).residual(comp) < 1e-9, "{class}");
            let again = decompose_torsion_odd(comp, &s, &tol).unwrap();
            assert!(common::rel(again.component(*class), comp) < 1e-9);
        }
    }
    assert!(decompose_torsion_odd(&common::random_tensor(&mut r, 5), &s, &tol).is_err());
}

/// `N` (resp. `N^`) vanishes on the normal (resp. `F3+F7`) sum and, beyond it,
/// only on an `n²`-dimensional diagonal of `F8+F10`.
#[test]
fn nijenhuis_kernels_exceed_class_sums_inside_f8_f10() {
    use norden_core::{ConstraintOperator, Subspace};
    let tol = Tolerance::default();
    let mut r = common::rng(57);
    for n in [2, 3] {
        let s = common::structure(&mut r, n);
        let d = s.dim();
        let dim_of = |cs: &[OddClass]| cs.iter().map(|c| s.class_space(*c).dim()).sum::<usize>();
        let pair = |t: &Tensor| NijenhuisOdd::from_fundamental(&FundamentalOdd::admissible(t, &s), &s);
        for (part, sum, allowed) in [
            (0, &OddClass::NORMAL[..], [&OddClass::NORMAL[..], &[F8, F10]].concat()),
            (1, &OddClass::QUASI_KAEHLER[..], [&OddClass::QUASI_KAEHLER[..], &[F8, F10]].concat()),
        ] {
            let op = ConstraintOperator::from_map(d, 3, |t| {
                let p = pair(t);
                if part == 0 {
                    p.n().clone()
                } else {
                    p.n_hat().clone()
                }
            });
            let ker = Subspace::kernel_within(s.admissible_space(), &[op]).unwrap();
            assert_eq!(ker.dim(), dim_of(sum) + n * n);
            for b in ker.basis_tensors(d, 3) {
                let comps = s.class_components(&b);
                for c in OddClass::ALL.iter().filter(|c| !allowed.contains(c)) {
                    assert!(comps[c.index()].norm() < 1e-9, "{c}");
                }
                let diag: Tensor = comps[F8.index()].clone() + &comps[F10.index()];
                if diag.norm() > 1e-3 {
                    let f = FundamentalOdd::new(diag, &s, &tol).unwrap();
                    let label = classify_odd(&f, &s, &tol).unwrap();
                    assert_eq!(label.members, set(&[F8, F10]));
                    let p = NijenhuisOdd::from_fundamental(&f, &s);
                    let vanishing = if part == 0 { p.n() } else { p.n_hat() };
                    assert!(vanishing.norm() < 1e-9 * p.norm());
                }
            }
        }
    }
}
