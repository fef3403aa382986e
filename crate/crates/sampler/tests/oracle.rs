use nalgebra::DMatrix;
use norden_core::{project_subspace, ConstraintOperator, Tensor, Tolerance};
use norden_even::{
    admissibility_constraints, antisymmetry_constraint, class_constraints, decompose_torsion_even, lee_form,
    torsion_class_constraints, w1_form, EvenClass, FundamentalEven, NordenStructure, TorsionClassEven,
};
use norden_odd::{admissibility_constraints as odd_admissibility, class_constraints as odd_class, OddClass};
use norden_sampler::{derived_rng, random_contact_b, random_norden, rref_kernel, OracleSplit};
use rand::Rng;
use rand_distr::StandardNormal;

fn random_tensor(r: &mut impl Rng, d: usize) -> Tensor {
    Tensor::from_fn3(d, |_, _, _| r.sample(StandardNormal))
}

fn rel(a: &Tensor, b: &Tensor) -> f64 {
    (a - b).norm() / b.norm().max(a.norm()).max(1e-300)
}

#[test]
fn rref_kernel_of_known_matrices() {
    let m = DMatrix::from_row_slice(2, 4, &[1.0, 2.0, 0.0, -1.0, 2.0, 4.0, 1.0, 0.0]);
    let k = rref_kernel(&m);
    assert_eq!(k.ncols(), 2);
    assert!((&m * &k).norm() < 1e-14);
    assert_eq!(rref_kernel(&DMatrix::zeros(3, 2)).ncols(), 2);
    assert_eq!(rref_kernel(&DMatrix::identity(3, 3)).ncols(), 0);
}

fn theta_zero(s: &NordenStructure) -> Vec<ConstraintOperator> {
    let s = s.clone();
    vec![ConstraintOperator::from_map(s.dim(), 3, move |t| Tensor::from_covector(&lee_form(t, &s)))]
}

fn sigma_j_zero(s: &NordenStructure) -> Vec<ConstraintOperator> {
    let s = s.clone();
    vec![ConstraintOperator::from_map(s.dim(), 3, move |t| norden_core::cyclic_sum(&t.apply_slot(s.j(), 2)))]
}

/// Same contract as `project_subspace`, computed without any SVD.
#[test]
fn oracle_agrees_with_engine_projection() {
    let mut r = derived_rng(20, 0);
    for n in [2, 3] {
        let s = random_norden(&mut r, n).unwrap();
        let d = s.dim();
        let adm = admissibility_constraints(&s);
        let w1 = OracleSplit::new(d * d * d, &[class_constraints(&s, EvenClass::W1), theta_zero(&s)], &adm).unwrap();
        let w3 = OracleSplit::new(d * d * d, &[class_constraints(&s, EvenClass::W3), sigma_j_zero(&s)], &adm).unwrap();
        for _ in 0..50 {
            let t = random_tensor(&mut r, d);
            let e1 = project_subspace(&t, &class_constraints(&s, EvenClass::W1), &theta_zero(&s), s.admissible_space())
                .unwrap();
            let e3 =
                project_subspace(&t, &class_constraints(&s, EvenClass::W3), &sigma_j_zero(&s), s.admissible_space())
                    .unwrap();
            assert!(rel(&w1.components(&t).unwrap()[0], &e1) < 1e-9);
            assert!(rel(&w3.components(&t).unwrap()[0], &e3) < 1e-9);
        }
    }
    let s = random_contact_b(&mut r, 2).unwrap();
    let parts: Vec<_> = OddClass::ALL.iter().map(|c| odd_class(&s, *c)).collect();
    let split = OracleSplit::new(125, &parts, &odd_admissibility(&s)).unwrap();
    assert_eq!(split.dims(), OddClass::ALL.iter().map(|c| s.class_space(*c).dim()).collect::<Vec<_>>());
    for _ in 0..20 {
        let f = s.admissible_space().basis() * nalgebra::DVector::from_fn(40, |_, _| r.sample(StandardNormal));
        let f = Tensor::from_flat(5, 3, &f);
        for (a, b) in split.components(&f).unwrap().iter().zip(s.class_components(&f)) {
            assert!((a - &b).norm() < 1e-9 * f.norm());
        }
    }
}

#[test]
fn w1_closed_form_matches_oracle() {
    let tol = Tolerance::default();
    let mut r = derived_rng(21, 0);
    for n in [2, 3] {
        let s = random_norden(&mut r, n).unwrap();
        let d = s.dim();
        let parts: Vec<_> = EvenClass::ALL.iter().map(|c| class_constraints(&s, *c)).collect();
        let split = OracleSplit::new(d * d * d, &parts, &admissibility_constraints(&s)).unwrap();
        for _ in 0..50 {
            let f = FundamentalEven::admissible(&random_tensor(&mut r, d), &s);
            let oracle = split.components(f.f()).unwrap();
            assert!(rel(&w1_form(f.theta(), &s), &oracle[0]) < 1e-9);
            FundamentalEven::new(oracle[0].clone(), &s, &tol).unwrap();
        }
    }
}

#[test]
fn involution_torsion_split_matches_oracle() {
    let tol = Tolerance::default();
    let mut r = derived_rng(22, 0);
    for n in [2, 3] {
        let s = random_norden(&mut r, n).unwrap();
        let d = s.dim();
        let parts: Vec<_> = TorsionClassEven::ALL.iter().map(|c| torsion_class_constraints(&s, *c)).collect();
        let split = OracleSplit::new(d * d * d, &parts, &[antisymmetry_constraint(d)]).unwrap();
        for _ in 0..50 {
            let raw = random_tensor(&mut r, d);
            let t = &raw - raw.permuted(&[1, 0, 2]);
            let dec = decompose_torsion_even(&t, &s, &tol).unwrap();
            let oracle = split.components(&t).unwrap();
            for (c, o) in TorsionClassEven::ALL.iter().zip(&oracle) {
                assert!((dec.component(*c) - o).norm() < 1e-9 * t.norm(), "{c:?}");
            }
        }
    }
}
