//! Linear conditions defining the eleven basic classes of `F`, the fifteen
//! torsion classes, and their cached kernels for a given structure.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use norden_core::{cyclic_sum, ConstraintOperator, DirectSum, Subspace, Tensor};

use crate::fundamental::{k_map, lee_omega, lee_theta, lee_theta_star};
use crate::structure::ContactBStructure;

/// Basic classes of the fundamental tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OddClass {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
    F11,
}

impl OddClass {
    pub const ALL: [OddClass; 11] = [
        OddClass::F1,
        OddClass::F2,
        OddClass::F3,
        OddClass::F4,
        OddClass::F5,
        OddClass::F6,
        OddClass::F7,
        OddClass::F8,
        OddClass::F9,
        OddClass::F10,
        OddClass::F11,
    ];

    /// Classes with vanishing `N`.
    pub const NORMAL: [OddClass; 5] = [OddClass::F1, OddClass::F2, OddClass::F4, OddClass::F5, OddClass::F6];

    /// Classes with vanishing `N^`.
    pub const QUASI_KAEHLER: [OddClass; 2] = [OddClass::F3, OddClass::F7];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for OddClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.index() + 1)
    }
}

/// Invariant subspaces of torsion tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorsionClassOdd {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
    T14,
    T15,
}

impl TorsionClassOdd {
    pub const ALL: [TorsionClassOdd; 15] = [
        TorsionClassOdd::T1,
        TorsionClassOdd::T2,
        TorsionClassOdd::T3,
        TorsionClassOdd::T4,
        TorsionClassOdd::T5,
        TorsionClassOdd::T6,
        TorsionClassOdd::T7,
        TorsionClassOdd::T8,
        TorsionClassOdd::T9,
        TorsionClassOdd::T10,
        TorsionClassOdd::T11,
        TorsionClassOdd::T12,
        TorsionClassOdd::T13,
        TorsionClassOdd::T14,
        TorsionClassOdd::T15,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for TorsionClassOdd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.index() + 1)
    }
}

fn op(s: &ContactBStructure, f: impl Fn(&Tensor) -> Tensor) -> ConstraintOperator {
    ConstraintOperator::from_map(s.dim(), 3, f)
}

fn covector(v: DVector<f64>) -> Tensor {
    Tensor::from_covector(&v)
}

/// `a(x,y) c(z)`.
fn outer2(a: &DMatrix<f64>, c: &DVector<f64>) -> Tensor {
    Tensor::from_matrix(a).outer(&Tensor::from_covector(c))
}

fn sym23(t: &Tensor) -> Tensor {
    t + t.permuted(&[0, 2, 1])
}

/// `(1/2n){g(x,φy)θ(φz) + g(φx,φy)θ(φ²z)}` symmetrised over `(y,z)`.
pub fn f1_form(theta: &DVector<f64>, s: &ContactBStructure) -> Tensor {
    let phi = s.phi();
    let a = outer2(&s.g_phi(), &(phi.transpose() * theta)) + outer2(&s.g_phi_phi(), &((phi * phi).transpose() * theta));
    sym23(&a).scale(1.0 / (2.0 * s.n() as f64))
}

/// `-θ(ξ)/(2n) {g(φx,φy)η(z) + g(φx,φz)η(y)}`.
pub fn f4_form(theta_xi: f64, s: &ContactBStructure) -> Tensor {
    sym23(&outer2(&s.g_phi_phi(), s.eta())).scale(-theta_xi / (2.0 * s.n() as f64))
}

/// `-θ*(ξ)/(2n) {g(x,φy)η(z) + g(x,φz)η(y)}`.
pub fn f5_form(theta_star_xi: f64, s: &ContactBStructure) -> Tensor {
    sym23(&outer2(&s.g_phi(), s.eta())).scale(-theta_star_xi / (2.0 * s.n() as f64))
}

/// `F(x,y,ξ)η(z) + F(x,z,ξ)η(y)`.
pub fn vertical_form(f: &Tensor, s: &ContactBStructure) -> Tensor {
    sym23(&f.insert_vector(2, s.xi()).outer(&Tensor::from_covector(s.eta())))
}

/// `F(ξ,φy,φz)η(x)`.
pub fn f10_form(f: &Tensor, s: &ContactBStructure) -> Tensor {
    let b = f.insert_vector(0, s.xi()).apply_slot(s.phi(), 0).apply_slot(s.phi(), 1);
    Tensor::from_covector(s.eta()).outer(&b)
}

/// `η(x){η(y)ω(z) + η(z)ω(y)}`.
pub fn f11_form(omega: &DVector<f64>, s: &ContactBStructure) -> Tensor {
    let e = Tensor::from_covector(s.eta());
    sym23(&e.outer(&e).outer(&Tensor::from_covector(omega)))
}

/// `B - sign·B(φx,φy)` for a rank-2 tensor.
fn phi_pair(b: &Tensor, sign: f64, s: &ContactBStructure) -> Tensor {
    b - sign * b.apply_slot(s.phi(), 0).apply_slot(s.phi(), 1)
}

fn swap2(b: &Tensor, sign: f64) -> Tensor {
    b - sign * b.permuted(&[1, 0])
}

/// `F(x,y,z) = F(x,z,y) = F(x,φy,φz) + η(y)F(x,ξ,z) + η(z)F(x,y,ξ)`.
pub fn admissibility_constraints(s: &ContactBStructure) -> Vec<ConstraintOperator> {
    vec![op(s, |f| f - f.permuted(&[0, 2, 1])), op(s, |f| f - k_map(f, s))]
}

/// Conditions of a basic class, to be imposed on admissible tensors.
pub fn class_constraints(s: &ContactBStructure, class: OddClass) -> Vec<ConstraintOperator> {
    let xi0 = |f: &Tensor| f.insert_vector(0, s.xi());
    let xi1 = |f: &Tensor| f.insert_vector(1, s.xi());
    let b = |f: &Tensor| f.insert_vector(2, s.xi());
    let theta = |f: &Tensor| covector(lee_theta(f, s));
    let theta_star = |f: &Tensor| covector(lee_theta_star(f, s));
    let vert = move |f: &Tensor| f - vertical_form(f, s);
    let vertical = |sym: f64, phi_sign: f64, traces: bool| {
        let mut v = vec![op(s, vert), op(s, move |f| swap2(&b(f), sym)), op(s, move |f| phi_pair(&b(f), phi_sign, s))];
        if traces {
            v.push(op(s, theta));
            v.push(op(s, theta_star));
        }
        v
    };
    match class {
        OddClass::F1 => vec![op(s, |f| f - f1_form(&lee_theta(f, s), s))],
        OddClass::F2 => vec![op(s, xi0), op(s, xi1), op(s, |f| cyclic_sum(&f.apply_slot(s.phi(), 2))), op(s, theta)],
        OddClass::F3 => vec![op(s, xi0), op(s, xi1), op(s, cyclic_sum)],
        OddClass::F4 => vec![op(s, |f| f - f4_form(lee_theta(f, s).dot(s.xi()), s))],
        OddClass::F5 => vec![op(s, |f| f - f5_form(lee_theta_star(f, s).dot(s.xi()), s))],
        OddClass::F6 => vertical(1.0, -1.0, true),
        OddClass::F7 => vertical(-1.0, -1.0, true),
        OddClass::F8 => vertical(1.0, 1.0, false),
        OddClass::F9 => vertical(-1.0, 1.0, false),
        OddClass::F10 => vec![op(s, |f| f - f10_form(f, s))],
        OddClass::F11 => vec![op(s, |f| f - f11_form(&lee_omega(f, s), s))],
    }
}

/// `t(x) = g^{jk} T(x, e_j, e_k)` over the contact distribution.
pub fn torsion_t(t: &Tensor, s: &ContactBStructure) -> DVector<f64> {
    t.contract_with(s.g_inv_h(), (1, 2)).expect("rank 3").to_vector()
}

/// `t*(x) = g^{jk} T(x, e_j, φe_k)` over the contact distribution.
pub fn torsion_t_star(t: &Tensor, s: &ContactBStructure) -> DVector<f64> {
    torsion_t(&t.apply_slot(s.phi(), 2), s)
}

/// `t^(x) = T(x, ξ, ξ)`.
pub fn torsion_t_hat(t: &Tensor, s: &ContactBStructure) -> DVector<f64> {
    t.insert_vector(2, s.xi()).insert_vector(1, s.xi()).to_vector()
}

/// `T(x,y,z) = -T(y,x,z)`.
pub fn antisymmetry_constraint(dim: usize) -> ConstraintOperator {
    ConstraintOperator::from_map(dim, 3, |t| t + t.permuted(&[1, 0, 2]))
}

/// `η(z) T(φ²x, φ²y, ξ)`.
fn vertical_torsion(t: &Tensor, s: &ContactBStructure) -> Tensor {
    let p2 = s.phi() * s.phi();
    let b = t.insert_vector(2, s.xi()).apply_slot(&p2, 0).apply_slot(&p2, 1);
    b.outer(&Tensor::from_covector(s.eta()))
}

/// `{η(x) T(ξ, φ²y, φ²z)}_[x<->y]`.
fn xi_torsion(t: &Tensor, s: &ContactBStructure) -> Tensor {
    let p2 = s.phi() * s.phi();
    let b = t.insert_vector(0, s.xi()).apply_slot(&p2, 0).apply_slot(&p2, 1);
    let a = Tensor::from_covector(s.eta()).outer(&b);
    &a - a.permuted(&[1, 0, 2])
}

/// `η(z){η(y)t^(x) - η(x)t^(y)}`.
pub fn t15_form(t_hat: &DVector<f64>, s: &ContactBStructure) -> Tensor {
    let a = Tensor::from_covector(t_hat).outer(&Tensor::from_covector(s.eta()));
    let a = &a - a.permuted(&[1, 0]);
    a.outer(&Tensor::from_covector(s.eta()))
}

/// Linear subspaces from which the torsion classes are assembled; classes
/// distinguished by a non-vanishing trace are complements inside these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorsionBlock {
    /// `T1 ⊕ T2`.
    S12,
    T3,
    /// `T4 ⊕ T5`.
    S45,
    T6,
    T7,
    T8,
    /// `T9 ⊕ T10 ⊕ T11`.
    S911,
    T12,
    T13,
    T14,
    T15,
}

impl TorsionBlock {
    pub const ALL: [TorsionBlock; 11] = [
        TorsionBlock::S12,
        TorsionBlock::T3,
        TorsionBlock::S45,
        TorsionBlock::T6,
        TorsionBlock::T7,
        TorsionBlock::T8,
        TorsionBlock::S911,
        TorsionBlock::T12,
        TorsionBlock::T13,
        TorsionBlock::T14,
        TorsionBlock::T15,
    ];
}

/// Defining conditions of a torsion block, imposed on antisymmetric tensors.
pub fn torsion_block_constraints(s: &ContactBStructure, block: TorsionBlock) -> Vec<ConstraintOperator> {
    let xi0 = |t: &Tensor| t.insert_vector(0, s.xi());
    let xi2 = |t: &Tensor| t.insert_vector(2, s.xi());
    let phi = s.phi();
    let ppz = move |t: &Tensor| t.apply_slot(phi, 0).apply_slot(phi, 1);
    let pyz = move |t: &Tensor| t.apply_slot(phi, 1).apply_slot(phi, 2);
    let horizontal = |extra: Vec<ConstraintOperator>| {
        let mut v = vec![op(s, xi0), op(s, xi2)];
        v.extend(extra);
        v
    };
    let vertical = |sign: f64| vec![op(s, |t| t - vertical_torsion(t, s)), op(s, move |t| phi_pair(&xi2(t), -sign, s))];
    let xi_block = |sym: f64, phi_sign: f64| {
        vec![
            op(s, |t| t - xi_torsion(t, s)),
            op(s, move |t| swap2(&xi0(t), sym)),
            op(s, move |t| phi_pair(&xi0(t), phi_sign, s)),
        ]
    };
    match block {
        TorsionBlock::S12 => horizontal(vec![op(s, move |t| t + ppz(t)), op(s, move |t| t + pyz(t))]),
        TorsionBlock::T3 => horizontal(vec![op(s, move |t| t + ppz(t)), op(s, move |t| t - pyz(t))]),
        TorsionBlock::S45 => horizontal(vec![op(s, move |t| t - ppz(t)), op(s, cyclic_sum)]),
        TorsionBlock::T6 => {
            horizontal(vec![op(s, move |t| t - ppz(t)), op(s, move |t| cyclic_sum(&t.apply_slot(phi, 0)))])
        }
        TorsionBlock::T7 => vertical(1.0),
        TorsionBlock::T8 => vertical(-1.0),
        TorsionBlock::S911 => xi_block(1.0, -1.0),
        TorsionBlock::T12 => xi_block(-1.0, -1.0),
        TorsionBlock::T13 => xi_block(1.0, 1.0),
        TorsionBlock::T14 => xi_block(-1.0, 1.0),
        TorsionBlock::T15 => vec![op(s, |t| t - t15_form(&torsion_t_hat(t, s), s))],
    }
}

#[derive(Debug, Clone)]
pub(crate) struct OddSpaces {
    pub admissible: Subspace,
    pub classes: Vec<Subspace>,
    pub class_sum: DirectSum,
    pub antisym: Subspace,
    pub torsion: Vec<Subspace>,
    pub torsion_sum: DirectSum,
}

/// Functionals `v -> <k_i, v>` for a basis `k_i` of `inner`, paired through
/// the inverse metric in every slot.
fn g_orthogonality(inner: &Subspace, s: &ContactBStructure) -> ConstraintOperator {
    let d = s.dim();
    let rows: Vec<Tensor> = inner.basis_tensors(d, 3).iter().map(|k| s.metric().raise_all(k)).collect();
    let m = DMatrix::from_fn(rows.len(), d * d * d, |r, c| rows[r].as_slice()[c]);
    ConstraintOperator::from_matrix(m).expect("finite entries")
}

impl OddSpaces {
    pub fn build(s: &ContactBStructure) -> Self {
        let d = s.dim();
        let full = Subspace::full(d * d * d);
        let kernel = |amb: &Subspace, c: &[ConstraintOperator]| Subspace::kernel_within(amb, c).expect("shapes agree");
        let admissible = kernel(&full, &admissibility_constraints(s));
        let classes: Vec<Subspace> =
            OddClass::ALL.iter().map(|c| kernel(&admissible, &class_constraints(s, *c))).collect();
        let class_sum = DirectSum::new(classes.clone(), &admissible).expect("basic classes span admissible space");

        let antisym = kernel(&full, &[antisymmetry_constraint(d)]);
        let blocks: Vec<Subspace> =
            TorsionBlock::ALL.iter().map(|b| kernel(&antisym, &torsion_block_constraints(s, *b))).collect();
        let t_op = op(s, |t| covector(torsion_t(t, s)));
        let ts_op = op(s, |t| covector(torsion_t_star(t, s)));

        let split_pair = |block: &Subspace| {
            let trace_free = kernel(block, std::slice::from_ref(&t_op));
            let vectorial = kernel(block, &[g_orthogonality(&trace_free, s)]);
            (vectorial, trace_free)
        };
        let (t1, t2) = split_pair(&blocks[0]);
        let (t4, t5) = split_pair(&blocks[2]);
        let s911 = &blocks[6];
        let t11 = kernel(s911, &[t_op.clone(), ts_op.clone()]);
        let rest = kernel(s911, &[g_orthogonality(&t11, s)]);
        let t9 = kernel(&rest, std::slice::from_ref(&ts_op));
        let t10 = kernel(&rest, std::slice::from_ref(&t_op));

        let torsion = vec![
            t1,
            t2,
            blocks[1].clone(),
            t4,
            t5,
            blocks[3].clone(),
            blocks[4].clone(),
            blocks[5].clone(),
            t9,
            t10,
            t11,
            blocks[7].clone(),
            blocks[8].clone(),
            blocks[9].clone(),
            blocks[10].clone(),
        ];
        let torsion_sum = DirectSum::new(torsion.clone(), &antisym).expect("torsion classes span antisymmetric space");
        Self { admissible, classes, class_sum, antisym, torsion, torsion_sum }
    }
}

impl ContactBStructure {
    pub fn admissible_space(&self) -> &Subspace {
        &self.spaces().admissible
    }

    pub fn class_space(&self, class: OddClass) -> &Subspace {
        &self.spaces().classes[class.index()]
    }

    pub fn torsion_class_space(&self, class: TorsionClassOdd) -> &Subspace {
        &self.spaces().torsion[class.index()]
    }

    pub fn antisymmetric_space(&self) -> &Subspace {
        &self.spaces().antisym
    }

    /// Components of an admissible tensor in `F1, .., F11`.
    pub fn class_components(&self, f: &Tensor) -> Vec<Tensor> {
        self.spaces().class_sum.components(f)
    }

    /// Components of an antisymmetric tensor in `T1, .., T15`.
    pub fn torsion_components(&self, t: &Tensor) -> Vec<Tensor> {
        self.spaces().torsion_sum.components(t)
    }
}
