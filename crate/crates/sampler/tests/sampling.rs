use std::collections::BTreeSet;

use norden_core::{GeomError, Tolerance};
use norden_even::{classify_even, validate_norden, EvenClass, NijenhuisEven};
use norden_odd::{classify_odd, validate_contact_b, OddClass};
use norden_sampler::{
    derived_rng, random_contact_b, random_f_even, random_f_odd, random_norden, sample_f_in_class, sample_lie_model,
    sample_pair, sample_structure, ClassTarget, Parity, SampleSpec, SampledF, SampledStructure, SamplerError,
};

fn spec(parity: Parity, n: usize, target: &str, seed: u64) -> SampleSpec {
    SampleSpec::new(parity, n, target.parse().unwrap(), seed, 1).unwrap()
}

#[test]
fn class_target_expressions() {
    let even = |cs: &[EvenClass]| ClassTarget::Even(cs.iter().copied().collect());
    let odd = |cs: &[OddClass]| ClassTarget::Odd(cs.iter().copied().collect());
    assert_eq!("W₃".parse::<ClassTarget>().unwrap(), even(&[EvenClass::W3]));
    assert_eq!("w1 + w3".parse::<ClassTarget>().unwrap(), even(&[EvenClass::W1, EvenClass::W3]));
    assert_eq!("F₃⊕F₇".parse::<ClassTarget>().unwrap(), odd(&[OddClass::F3, OddClass::F7]));
    assert_eq!("W0".parse::<ClassTarget>().unwrap(), even(&[]));
    assert_eq!("F0".parse::<ClassTarget>().unwrap(), odd(&[]));
    let u0 = "U₀".parse::<ClassTarget>().unwrap();
    assert_eq!(u0.to_string(), "F1+F2+F4+F5+F6+F8+F9+F10+F11");
    for bad in ["", "W4", "W1+F2", "F12", "W1++W2", "X"] {
        assert!(matches!(bad.parse::<ClassTarget>(), Err(SamplerError::InvalidTarget(_))), "{bad}");
    }
    let t: ClassTarget = "W1".parse().unwrap();
    assert!(matches!(SampleSpec::new(Parity::Odd, 2, t.clone(), 0, 1), Err(SamplerError::ParityMismatch { .. })));
    assert_eq!(SampleSpec::new(Parity::Even, 0, t, 0, 1), Err(SamplerError::InvalidDimension));
}

#[test]
fn sampling_is_deterministic() {
    let tol = Tolerance::default();
    for (parity, target) in [(Parity::Even, "W1+W2"), (Parity::Odd, "F3+F7+F10")] {
        let sp = spec(parity, 2, target, 42);
        let (s1, f1) = sample_pair(&sp, 3, &tol).unwrap();
        let (s2, f2) = sample_pair(&sp, 3, &tol).unwrap();
        assert_eq!(s1.g(), s2.g());
        assert_eq!(f1.f(), f2.f());
        let (s3, _) = sample_pair(&sp, 4, &tol).unwrap();
        assert_ne!(s1.g(), s3.g());
        let a = sample_structure(&sp).unwrap();
        let b = sample_structure(&sp).unwrap();
        assert_eq!(a.g(), b.g());
        assert_eq!(sample_f_in_class(&sp, &a, &tol).unwrap().f(), sample_f_in_class(&sp, &b, &tol).unwrap().f());
        assert_eq!(sample_lie_model(&sp, 7).unwrap().c(), sample_lie_model(&sp, 7).unwrap().c());
    }
}

#[test]
fn sampled_structures_pass_validation() {
    let mut r = derived_rng(1, 0);
    for _ in 0..1000 {
        let s = random_norden(&mut r, 2).unwrap();
        validate_norden(s.j().clone(), s.g().clone()).unwrap();
    }
    let mut r = derived_rng(2, 0);
    for _ in 0..1000 {
        let s = random_contact_b(&mut r, 2).unwrap();
        validate_contact_b(s.phi().clone(), s.xi().clone(), s.eta().clone(), s.g().clone()).unwrap();
    }
}

#[test]
fn targeted_samples_classify_to_target() {
    let tol = Tolerance::default();
    let sp = spec(Parity::Even, 2, "W0", 5);
    let s = sample_structure(&sp).unwrap();
    assert_eq!(sample_f_in_class(&sp, &s, &tol).unwrap().f().norm(), 0.0);

    let sp = spec(Parity::Even, 2, "W3", 6);
    let s = sample_structure(&sp).unwrap();
    let (SampledStructure::Even(s), SampledF::Even(f)) = (&s, sample_f_in_class(&sp, &s, &tol).unwrap()) else {
        panic!()
    };
    assert_eq!(classify_even(&f, s, &tol).unwrap().members, BTreeSet::from([EvenClass::W3]));
    let nij = NijenhuisEven::from_fundamental(&f, s);
    assert!(nij.n_hat().norm() < 1e-10 * nij.norm());

    let sp = spec(Parity::Odd, 2, "F11", 7);
    let s = sample_structure(&sp).unwrap();
    let (SampledStructure::Odd(s), SampledF::Odd(f)) = (&s, sample_f_in_class(&sp, &s, &tol).unwrap()) else {
        panic!()
    };
    assert_eq!(classify_odd(&f, s, &tol).unwrap().members, BTreeSet::from([OddClass::F11]));

    let mut r = derived_rng(8, 0);
    let s = random_contact_b(&mut r, 2).unwrap();
    let u0 = OddClass::ALL.into_iter().filter(|c| !OddClass::QUASI_KAEHLER.contains(c)).collect();
    let f = random_f_odd(&mut r, &u0, &s, &tol).unwrap();
    assert_eq!(classify_odd(&f, &s, &tol).unwrap().members, u0);
}

#[test]
fn empty_target_subspaces_are_reported() {
    let tol = Tolerance::default();
    let mut r = derived_rng(9, 0);
    let s = random_norden(&mut r, 1).unwrap();
    let empty: Vec<EvenClass> = EvenClass::ALL.into_iter().filter(|c| s.class_space(*c).dim() == 0).collect();
    assert!(!empty.is_empty());
    for c in empty {
        let err = random_f_even(&mut r, &BTreeSet::from([c]), &s, &tol).unwrap_err();
        assert!(matches!(err, GeomError::DegenerateSample { .. }), "{err}");
    }
    let s = random_contact_b(&mut r, 1).unwrap();
    let empty: Vec<OddClass> = OddClass::ALL.into_iter().filter(|c| s.class_space(*c).dim() == 0).collect();
    for c in empty {
        let err = random_f_odd(&mut r, &BTreeSet::from([c]), &s, &tol).unwrap_err();
        assert!(matches!(err, GeomError::DegenerateSample { .. }), "{err}");
    }
}

#[test]
fn lie_models_are_consistent() {
    for parity in [Parity::Even, Parity::Odd] {
        let sp = spec(parity, 2, if parity == Parity::Even { "W0" } else { "F0" }, 10);
        for i in 0..20 {
            let m = sample_lie_model(&sp, i).unwrap();
            assert_eq!(m.dim(), parity.dim(2));
            assert!(norden_lie::jacobi_residual(m.c()) < 1e-12);
            assert!((m.c().max_abs() - 1.0).abs() < 1e-15);
        }
    }
}
