//! Linear conditions defining the basic classes and torsion classes, and
//! the cached kernels they span for a given structure.

use std::fmt;

use norden_core::{cyclic_sum, ConstraintOperator, DirectSum, Subspace, Tensor};

use crate::fundamental::{cyclic_j, k_map, lee_form, w1_form};
use crate::structure::NordenStructure;

/// Basic classes of the fundamental tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvenClass {
    W1,
    W2,
    W3,
}

impl EvenClass {
    pub const ALL: [EvenClass; 3] = [EvenClass::W1, EvenClass::W2, EvenClass::W3];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EvenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}", self.index() + 1)
    }
}

/// Invariant subspaces of torsion tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorsionClassEven {
    T1,
    T2,
    T3,
    T4,
}

impl TorsionClassEven {
    pub const ALL: [TorsionClassEven; 4] =
        [TorsionClassEven::T1, TorsionClassEven::T2, TorsionClassEven::T3, TorsionClassEven::T4];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for TorsionClassEven {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.index() + 1)
    }
}

fn op(s: &NordenStructure, f: impl Fn(&Tensor) -> Tensor) -> ConstraintOperator {
    ConstraintOperator::from_map(s.dim(), 3, f)
}

/// `F(x,y,z) = F(x,z,y) = F(x,Jy,Jz)`.
pub fn admissibility_constraints(s: &NordenStructure) -> Vec<ConstraintOperator> {
    vec![op(s, |f| f - f.permuted(&[0, 2, 1])), op(s, |f| f - k_map(f, s))]
}

/// Conditions of a basic class, to be imposed on admissible tensors.
pub fn class_constraints(s: &NordenStructure, class: EvenClass) -> Vec<ConstraintOperator> {
    match class {
        EvenClass::W1 => vec![op(s, |f| f - w1_form(&lee_form(f, s), s))],
        EvenClass::W2 => vec![op(s, |f| cyclic_j(f, s)), op(s, |f| Tensor::from_covector(&lee_form(f, s)))],
        EvenClass::W3 => vec![op(s, cyclic_sum)],
    }
}

/// `T(x,y,z) = -T(y,x,z)`.
pub fn antisymmetry_constraint(dim: usize) -> ConstraintOperator {
    ConstraintOperator::from_map(dim, 3, |t| t + t.permuted(&[1, 0, 2]))
}

/// `T(Jx, Jy, z)`.
pub fn involution_a(t: &Tensor, s: &NordenStructure) -> Tensor {
    t.apply_slot(s.j(), 0).apply_slot(s.j(), 1)
}

/// `T(Jx, y, Jz)`.
pub fn involution_b(t: &Tensor, s: &NordenStructure) -> Tensor {
    t.apply_slot(s.j(), 0).apply_slot(s.j(), 2)
}

/// Conditions of a torsion class, to be imposed on antisymmetric tensors.
pub fn torsion_class_constraints(s: &NordenStructure, class: TorsionClassEven) -> Vec<ConstraintOperator> {
    match class {
        TorsionClassEven::T1 => {
            vec![op(s, |t| t + involution_a(t, s)), op(s, |t| t + involution_b(t, s))]
        }
        TorsionClassEven::T2 => {
            vec![op(s, |t| t + involution_a(t, s)), op(s, |t| t - involution_b(t, s))]
        }
        TorsionClassEven::T3 => vec![op(s, |t| t - involution_a(t, s)), op(s, cyclic_sum)],
        TorsionClassEven::T4 => vec![op(s, |t| t - involution_a(t, s)), op(s, |t| cyclic_sum(&t.apply_slot(s.j(), 0)))],
    }
}

/// `t(x) = g^{ij} T(x, e_i, e_j)`.
pub fn torsion_form(t: &Tensor, s: &NordenStructure) -> nalgebra::DVector<f64> {
    s.metric().contract(t, (1, 2)).expect("rank 3").to_vector()
}

/// `(1/2n){t(x)g(y,z) + t(Jx)g~(y,z)}_[x<->y]`: the vectorial torsion with form `t`.
pub fn vectorial_torsion(t: &nalgebra::DVector<f64>, s: &NordenStructure) -> Tensor {
    let g = s.g();
    let gt = s.assoc_metric().g();
    let tj = s.j().transpose() * t;
    let c = 1.0 / (2.0 * s.n() as f64);
    let a = Tensor::from_fn3(s.dim(), |x, y, z| c * (t[x] * g[(y, z)] + tj[x] * gt[(y, z)]));
    &a - a.permuted(&[1, 0, 2])
}

#[derive(Debug, Clone)]
pub(crate) struct EvenSpaces {
    pub admissible: Subspace,
    pub classes: [Subspace; 3],
    pub class_sum: DirectSum,
    pub antisym: Subspace,
    pub torsion: [Subspace; 4],
    /// `T3` split into its trace-free part and its vectorial part.
    pub t3_split: DirectSum,
    /// Decomposition of the `A = +1` eigenspace into `T3 ⊕ T4`.
    pub a_plus_split: DirectSum,
}

impl EvenSpaces {
    pub fn build(s: &NordenStructure) -> Self {
        let d = s.dim();
        let full = Subspace::full(d * d * d);
        let admissible = Subspace::kernel_within(&full, &admissibility_constraints(s)).expect("shapes agree");
        let classes = EvenClass::ALL
            .map(|c| Subspace::kernel_within(&admissible, &class_constraints(s, c)).expect("shapes agree"));
        let class_sum = DirectSum::new(classes.to_vec(), &admissible).expect("basic classes span admissible space");

        let antisym = Subspace::kernel_within(&full, &[antisymmetry_constraint(d)]).expect("shapes agree");
        let torsion = TorsionClassEven::ALL
            .map(|c| Subspace::kernel_within(&antisym, &torsion_class_constraints(s, c)).expect("shapes agree"));
        let a_plus = Subspace::kernel_within(&antisym, &[op(s, |t| t - involution_a(t, s))]).expect("shapes agree");
        let a_plus_split = DirectSum::new(vec![torsion[2].clone(), torsion[3].clone()], &a_plus)
            .expect("T3 and T4 span the A = +1 space");
        let t3 = &torsion[2];
        let trace_free = Subspace::kernel_within(t3, &[op(s, |t| Tensor::from_covector(&torsion_form(t, s)))])
            .expect("shapes agree");
        let vectorial = Subspace::kernel_within(t3, &[op(s, |t| t - vectorial_torsion(&torsion_form(t, s), s))])
            .expect("shapes agree");
        let t3_split = DirectSum::new(vec![trace_free, vectorial], t3).expect("T3 splits by its trace");
        Self { admissible, classes, class_sum, antisym, torsion, t3_split, a_plus_split }
    }
}

impl NordenStructure {
    pub fn admissible_space(&self) -> &Subspace {
        &self.spaces().admissible
    }

    pub fn class_space(&self, class: EvenClass) -> &Subspace {
        &self.spaces().classes[class.index()]
    }

    pub fn torsion_class_space(&self, class: TorsionClassEven) -> &Subspace {
        &self.spaces().torsion[class.index()]
    }

    pub fn antisymmetric_space(&self) -> &Subspace {
        &self.spaces().antisym
    }

    /// Components of an admissible tensor in `W1, W2, W3`.
    pub fn class_components(&self, f: &Tensor) -> [Tensor; 3] {
        let mut parts = self.spaces().class_sum.components(f).into_iter();
        [0; 3].map(|_| parts.next().expect("three parts"))
    }
}
