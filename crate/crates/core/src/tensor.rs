use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};

/// Dense covariant tensor over a `dim`-dimensional space.
///
/// Entries are stored row-major: `t[[i, j, k]]` is `t(e_i, e_j, e_k)`.
/// Matrices act on slots by `t(.., M e_i, ..) = sum_a M[(a, i)] t(.., e_a, ..)`,
/// i.e. column `i` of `M` holds the components of `M e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dim: usize,
    rank: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Self { dim, rank, data: vec![0.0; dim.pow(rank as u32)] }
    }

    pub fn from_vec(dim: usize, rank: usize, data: Vec<f64>) -> Result<Self> {
        let expected = dim.pow(rank as u32);
        if data.len() != expected {
            return Err(GeomError::DimMismatch { expected, found: data.len() });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(GeomError::NonFinite(pos));
        }
        Ok(Self { dim, rank, data })
    }

    /// Builds a tensor entrywise from its multi-index.
    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(dim, rank);
        let mut idx = vec![0usize; rank];
        for flat in 0..t.data.len() {
            t.data[flat] = f(&idx);
            increment(&mut idx, dim);
        }
        t
    }

    pub fn from_fn3(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dim, rank: 3, data }
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let dim = m.nrows();
        assert_eq!(dim, m.ncols(), "rank-2 tensors need a square matrix");
        Self::from_fn(dim, 2, |ix| m[(ix[0], ix[1])])
    }

    pub fn from_covector(v: &DVector<f64>) -> Self {
        Self { dim: v.len(), rank: 1, data: v.iter().copied().collect() }
    }

    pub fn scalar(value: f64) -> Self {
        Self { dim: 0, rank: 0, data: vec![value] }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.rank, 2, "to_matrix needs rank 2");
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn to_vector(&self) -> DVector<f64> {
        assert_eq!(self.rank, 1, "to_vector needs rank 1");
        DVector::from_column_slice(&self.data)
    }

    pub fn to_flat(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.data)
    }

    pub fn from_flat(dim: usize, rank: usize, v: &DVector<f64>) -> Self {
        assert_eq!(v.len(), dim.pow(rank as u32));
        Self { dim, rank, data: v.iter().copied().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Value of a rank-0 tensor.
    pub fn value(&self) -> f64 {
        assert_eq!(self.rank, 0);
        self.data[0]
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dot(&self, other: &Tensor) -> f64 {
        self.check_same(other);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    fn check_same(&self, other: &Tensor) {
        assert!(
            self.dim == other.dim && self.rank == other.rank,
            "tensor shape mismatch: ({}, {}) vs ({}, {})",
            self.dim,
            self.rank,
            other.dim,
            other.rank
        );
    }

    pub fn check_slot(&self, slot: usize) -> Result<()> {
        if slot >= self.rank {
            Err(GeomError::SlotOutOfRange { slot, rank: self.rank })
        } else {
            Ok(())
        }
    }

    /// Argument permutation: `out[i_0, .., i_{K-1}] = self[i_{order[0]}, .., i_{order[K-1]}]`.
    ///
    /// For rank 3 with arguments named (x, y, z), `[1, 2, 0]` yields
    /// `(x, y, z) -> t(y, z, x)`.
    pub fn permuted(&self, order: &[usize]) -> Tensor {
        assert_eq!(order.len(), self.rank);
        let mut src = vec![0usize; self.rank];
        Tensor::from_fn(self.dim, self.rank, |ix| {
            for (s, &o) in src.iter_mut().zip(order) {
                *s = ix[o];
            }
            self.get(&src)
        })
    }

    /// `out(.., e_i, ..) = self(.., M e_i, ..)` in the given slot.
    pub fn apply_slot(&self, m: &DMatrix<f64>, slot: usize) -> Tensor {
        assert!(slot < self.rank && m.nrows() == self.dim && m.ncols() == self.dim);
        let d = self.dim;
        let inner = d.pow((self.rank - slot - 1) as u32);
        let outer = d.pow(slot as u32);
        let mut out = Tensor::zeros(d, self.rank);
        for o in 0..outer {
            for i in 0..d {
                for a in 0..d {
                    let c = m[(a, i)];
                    if c == 0.0 {
                        continue;
                    }
                    let src = (o * d + a) * inner;
                    let dst = (o * d + i) * inner;
                    for r in 0..inner {
                        out.data[dst + r] += c * self.data[src + r];
                    }
                }
            }
        }
        out
    }

    /// Applies one matrix per slot; `None` leaves the slot unchanged.
    pub fn apply_each(&self, ms: &[Option<&DMatrix<f64>>]) -> Tensor {
        assert_eq!(ms.len(), self.rank);
        ms.iter().enumerate().fold(self.clone(), |acc, (s, m)| match m {
            Some(m) => acc.apply_slot(m, s),
            None => acc,
        })
    }

    /// Evaluates one slot on a vector, lowering the rank by one.
    pub fn insert_vector(&self, slot: usize, v: &DVector<f64>) -> Tensor {
        assert!(slot < self.rank && v.len() == self.dim);
        let d = self.dim;
        let inner = d.pow((self.rank - slot - 1) as u32);
        let outer = d.pow(slot as u32);
        let mut out = Tensor::zeros(d, self.rank - 1);
        for o in 0..outer {
            for (a, &va) in v.iter().enumerate() {
                if va == 0.0 {
                    continue;
                }
                let src = (o * d + a) * inner;
                let dst = o * inner;
                for r in 0..inner {
                    out.data[dst + r] += va * self.data[src + r];
                }
            }
        }
        out
    }

    /// Contracts two slots against the components of a symmetric bilinear
    /// form on the dual space (typically an inverse metric).
    pub fn contract_with(&self, inv: &DMatrix<f64>, slots: (usize, usize)) -> Result<Tensor> {
        let (a, b) = slots;
        self.check_slot(a)?;
        self.check_slot(b)?;
        if a == b {
            return Err(GeomError::RepeatedSlot(a));
        }
        if inv.nrows() != self.dim || inv.ncols() != self.dim {
            return Err(GeomError::DimMismatch { expected: self.dim, found: inv.nrows() });
        }
        let keep: Vec<usize> = (0..self.rank).filter(|s| *s != a && *s != b).collect();
        let mut src = vec![0usize; self.rank];
        Ok(Tensor::from_fn(self.dim, self.rank - 2, |ix| {
            for (s, &k) in keep.iter().enumerate() {
                src[k] = ix[s];
            }
            let mut acc = 0.0;
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let w = inv[(i, j)];
                    if w != 0.0 {
                        src[a] = i;
                        src[b] = j;
                        acc += w * self.get(&src);
                    }
                }
            }
            acc
        }))
    }

    pub fn outer(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.dim, other.dim);
        let mut data = Vec::with_capacity(self.len() * other.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Tensor { dim: self.dim, rank: self.rank + other.rank, data }
    }

    pub fn scale(&self, c: f64) -> Tensor {
        Tensor { dim: self.dim, rank: self.rank, data: self.data.iter().map(|v| c * v).collect() }
    }
}

fn increment(idx: &mut [usize], dim: usize) {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return;
        }
        *slot = 0;
    }
}

impl<const N: usize> Index<[usize; N]> for Tensor {
    type Output = f64;
    fn index(&self, idx: [usize; N]) -> &f64 {
        assert_eq!(N, self.rank, "index arity must equal tensor rank");
        &self.data[self.offset(&idx)]
    }
}

impl<const N: usize> IndexMut<[usize; N]> for Tensor {
    fn index_mut(&mut self, idx: [usize; N]) -> &mut f64 {
        assert_eq!(N, self.rank, "index arity must equal tensor rank");
        let o = self.offset(&idx);
        &mut self.data[o]
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Tensor> for &Tensor {
            type Output = Tensor;
            fn $method(self, rhs: &Tensor) -> Tensor {
                self.check_same(rhs);
                Tensor {
                    dim: self.dim,
                    rank: self.rank,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }
        impl $trait<Tensor> for Tensor {
            type Output = Tensor;
            fn $method(self, rhs: Tensor) -> Tensor {
                &self $op &rhs
            }
        }
        impl $trait<&Tensor> for Tensor {
            type Output = Tensor;
            fn $method(self, rhs: &Tensor) -> Tensor {
                &self $op rhs
            }
        }
        impl $trait<Tensor> for &Tensor {
            type Output = Tensor;
            fn $method(self, rhs: Tensor) -> Tensor {
                self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);

impl AddAssign<&Tensor> for Tensor {
    fn add_assign(&mut self, rhs: &Tensor) {
        self.check_same(rhs);
        self.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a += b);
    }
}

impl AddAssign<Tensor> for Tensor {
    fn add_assign(&mut self, rhs: Tensor) {
        *self += &rhs;
    }
}

impl SubAssign<&Tensor> for Tensor {
    fn sub_assign(&mut self, rhs: &Tensor) {
        self.check_same(rhs);
        self.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a -= b);
    }
}

impl SubAssign<Tensor> for Tensor {
    fn sub_assign(&mut self, rhs: Tensor) {
        *self -= &rhs;
    }
}

impl Mul<&Tensor> for f64 {
    type Output = Tensor;
    fn mul(self, rhs: &Tensor) -> Tensor {
        rhs.scale(self)
    }
}

impl Mul<Tensor> for f64 {
    type Output = Tensor;
    fn mul(self, rhs: Tensor) -> Tensor {
        rhs.scale(self)
    }
}

impl Neg for Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        self.scale(-1.0)
    }
}

impl Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        self.scale(-1.0)
    }
}

impl std::iter::Sum for Tensor {
    /// Panics on an empty iterator since the shape would be unknown.
    fn sum<I: Iterator<Item = Tensor>>(mut iter: I) -> Tensor {
        let first = iter.next().expect("sum of an empty tensor iterator");
        iter.fold(first, |acc, t| acc + t)
    }
}

/// `(σt)(x,y,z) = t(x,y,z) + t(y,z,x) + t(z,x,y)`.
pub fn cyclic_sum(t: &Tensor) -> Tensor {
    assert_eq!(t.rank(), 3, "cyclic sum is defined on rank-3 tensors");
    t + &t.permuted(&[1, 2, 0]) + t.permuted(&[2, 0, 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bracket {
    /// `t - t` with the two slots exchanged.
    Antisym,
    /// `t + t` with the two slots exchanged.
    Sym,
}

/// Brace operators over a slot pair, without a normalising factor.
pub fn bracket(t: &Tensor, mode: Bracket, slots: (usize, usize)) -> Result<Tensor> {
    t.check_slot(slots.0)?;
    t.check_slot(slots.1)?;
    if slots.0 == slots.1 {
        return Err(GeomError::RepeatedSlot(slots.0));
    }
    let mut order: Vec<usize> = (0..t.rank()).collect();
    order.swap(slots.0, slots.1);
    let swapped = t.permuted(&order);
    Ok(match mode {
        Bracket::Antisym => t - swapped,
        Bracket::Sym => t + swapped,
    })
}

/// `{t}_[x<->y]` on the first two slots.
pub fn antisym12(t: &Tensor) -> Tensor {
    t - t.permuted(&[1, 0, 2])
}

/// `{t}_(x<->y)` on the first two slots.
pub fn sym12(t: &Tensor) -> Tensor {
    t + t.permuted(&[1, 0, 2])
}
