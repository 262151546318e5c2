//! Dense tensors over the rationals.
//!
//! Entries are stored row-major: the first index is the most significant, so
//! `pos(i1,...,im) = sum_k (i_k - 1) * prod_{j>k} dim_j` with 1-based indices.
//! That single linearization is shared by `flatten`, `vectorize` and every
//! report, which is what makes a tensor problem an ordinary matrix problem.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    dims: Vec<usize>,
}

impl Shape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::shape("tensor order must be at least 1"));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::shape(format!("zero dimension in {dims:?}")));
        }
        Ok(Shape { dims })
    }

    /// `order` modes of dimension `n` each, i.e. the space `R^[order, n]`.
    pub fn cubical(order: usize, n: usize) -> Result<Self> {
        Shape::new(vec![n; order])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_cubical(&self, n: usize) -> bool {
        self.dims.iter().all(|&d| d == n)
    }

    /// The common dimension when all modes agree.
    pub fn cubical_dim(&self) -> Option<usize> {
        let n = self.dims[0];
        self.is_cubical(n).then_some(n)
    }

    /// Flat position of a 1-based multi-index.
    pub fn position(&self, index: &MultiIndex) -> Result<usize> {
        self.check(index)?;
        Ok(self.position0(index.0.iter().map(|i| i - 1)))
    }

    pub(crate) fn position0(&self, index0: impl IntoIterator<Item = usize>) -> usize {
        index0
            .into_iter()
            .zip(&self.dims)
            .fold(0, |acc, (i, d)| acc * d + i)
    }

    pub(crate) fn index0_of(&self, mut pos: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = pos % d;
            pos /= d;
        }
        out
    }

    /// 1-based multi-index at a flat position.
    pub fn index_of(&self, pos: usize) -> MultiIndex {
        MultiIndex(self.index0_of(pos).into_iter().map(|i| i + 1).collect())
    }

    /// All multi-indices in storage order.
    pub fn indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.len()).map(|p| self.index_of(p))
    }

    fn check(&self, index: &MultiIndex) -> Result<()> {
        let ok = index.0.len() == self.dims.len()
            && index.0.iter().zip(&self.dims).all(|(&i, &d)| i >= 1 && i <= d);
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: index.0.clone(),
                dims: self.dims.clone(),
            })
        }
    }
}

/// A 1-based multi-index `(i1, ..., im)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(components: Vec<usize>) -> Self {
        MultiIndex(components)
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }
}

impl From<&[usize]> for MultiIndex {
    fn from(c: &[usize]) -> Self {
        MultiIndex(c.to_vec())
    }
}

impl<const K: usize> From<[usize; K]> for MultiIndex {
    fn from(c: [usize; K]) -> Self {
        MultiIndex(c.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// Result of a general mode product: contracting every mode leaves a scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModeProduct {
    Scalar(Rational),
    Tensor(DenseTensor),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseTensor {
    shape: Shape,
    entries: Vec<Rational>,
}

impl DenseTensor {
    pub fn zeros(shape: Shape) -> Self {
        DenseTensor::filled(shape, Rational::zero())
    }

    pub fn filled(shape: Shape, value: Rational) -> Self {
        let entries = vec![value; shape.len()];
        DenseTensor { shape, entries }
    }

    pub fn from_entries(shape: Shape, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != shape.len() {
            return Err(Error::shape(format!(
                "{} entries for shape {:?} ({} expected)",
                entries.len(),
                shape.dims(),
                shape.len()
            )));
        }
        Ok(DenseTensor { shape, entries })
    }

    /// Integer entries in storage order; convenient for fixtures.
    pub fn from_ints(dims: &[usize], values: &[i64]) -> Result<Self> {
        let shape = Shape::new(dims.to_vec())?;
        DenseTensor::from_entries(shape, values.iter().map(|&v| rational::int(v)).collect())
    }

    /// Tensor equal to `default` except at the listed 1-based indices.
    pub fn make(
        shape: Shape,
        assignments: &[(MultiIndex, Rational)],
        default: Rational,
    ) -> Result<Self> {
        let mut t = DenseTensor::filled(shape, default);
        let mut seen = vec![false; t.entries.len()];
        for (index, value) in assignments {
            let p = t.shape.position(index)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::DuplicateIndex(index.components().to_vec()));
            }
            t.entries[p] = value.clone();
        }
        Ok(t)
    }

    /// The order-`2m` tensor with `m_{I I} = 1` and zeros elsewhere; it acts as
    /// the identity on `R^[m, n]`.
    pub fn block_identity(m: usize, n: usize) -> Result<Self> {
        let shape = Shape::cubical(2 * m, n)?;
        let big_n = n.pow(m as u32);
        let mut t = DenseTensor::zeros(shape);
        for i in 0..big_n {
            t.entries[i * big_n + i] = rational::one();
        }
        Ok(t)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, index: &MultiIndex) -> Result<&Rational> {
        Ok(&self.entries[self.shape.position(index)?])
    }

    pub fn set(&mut self, index: &MultiIndex, value: Rational) -> Result<()> {
        let p = self.shape.position(index)?;
        self.entries[p] = value;
        Ok(())
    }

    fn same_shape(&self, other: &DenseTensor, op: &str) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::shape(format!(
                "{op}: {:?} vs {:?}",
                self.shape.dims(),
                other.shape.dims()
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &DenseTensor,
        op: &str,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<DenseTensor> {
        self.same_shape(other, op)?;
        Ok(DenseTensor {
            shape: self.shape.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> DenseTensor {
        DenseTensor {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn scale(&self, beta: &Rational) -> DenseTensor {
        self.map(|a| a * beta)
    }

    pub fn neg(&self) -> DenseTensor {
        self.map(|a| -a)
    }

    /// Componentwise product `A o B`.
    pub fn hadamard(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.zip_with(other, "hadamard", |a, b| a * b)
    }

    pub fn inner_product(&self, other: &DenseTensor) -> Result<Rational> {
        self.same_shape(other, "inner_product")?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    /// `<A, A>`; the norm itself is irrational in general.
    pub fn norm_squared(&self) -> Rational {
        self.entries.iter().fold(Rational::zero(), |acc, a| acc + a * a)
    }

    pub fn elementwise_max(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.zip_with(other, "elementwise_max", rational::max)
    }

    /// `A+ = max{A, O}`.
    pub fn positive_part(&self) -> DenseTensor {
        self.map(|a| if a.is_positive() { a.clone() } else { Rational::zero() })
    }

    /// `A- = max{-A, O}`.
    pub fn negative_part(&self) -> DenseTensor {
        self.map(|a| if a.is_negative() { -a } else { Rational::zero() })
    }

    pub fn abs(&self) -> DenseTensor {
        self.map(|a| a.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|a| !a.is_negative())
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.entries.iter().all(Signed::is_positive)
    }

    /// General `J(p)`-mode product. `modes` are the 1-based, strictly
    /// increasing positions of `self` summed against the modes of `other` in
    /// order; the result is indexed by the remaining positions in increasing
    /// order. Each summation index is placed back at its own position of
    /// `self` when reading an entry.
    pub fn jp_mode_product(&self, other: &DenseTensor, modes: &[usize]) -> Result<ModeProduct> {
        let m = self.order();
        let p = modes.len();
        if p == 0 || p > m {
            return Err(Error::InvalidModeSet(format!("{p} modes for an order-{m} tensor")));
        }
        if modes.windows(2).any(|w| w[0] >= w[1]) || modes[0] < 1 || modes[p - 1] > m {
            return Err(Error::InvalidModeSet(format!(
                "{modes:?} is not strictly increasing within 1..={m}"
            )));
        }
        if other.order() != p {
            return Err(Error::shape(format!(
                "mode product needs an order-{p} operand, got order {}",
                other.order()
            )));
        }
        let dims = self.shape.dims();
        for (l, &j) in modes.iter().enumerate() {
            if dims[j - 1] != other.shape.dims()[l] {
                return Err(Error::shape(format!(
                    "mode {j} has dim {} but operand mode {} has dim {}",
                    dims[j - 1],
                    l + 1,
                    other.shape.dims()[l]
                )));
            }
        }
        let free: Vec<usize> = (0..m).filter(|k| !modes.contains(&(k + 1))).collect();
        let summed: Vec<usize> = modes.iter().map(|j| j - 1).collect();

        let out_len: usize = free.iter().map(|&k| dims[k]).product();
        let mut out = vec![Rational::zero(); out_len];
        let out_shape = if free.is_empty() {
            None
        } else {
            Some(Shape::new(free.iter().map(|&k| dims[k]).collect())?)
        };
        let mut full = vec![0usize; m];
        for (o, slot) in out.iter_mut().enumerate() {
            if let Some(s) = &out_shape {
                for (&k, i) in free.iter().zip(s.index0_of(o)) {
                    full[k] = i;
                }
            }
            let mut acc = Rational::zero();
            for (q, nval) in other.entries.iter().enumerate() {
                if nval.is_zero() {
                    continue;
                }
                for (&k, i) in summed.iter().zip(other.shape.index0_of(q)) {
                    full[k] = i;
                }
                let mval = &self.entries[self.shape.position0(full.iter().copied())];
                if !mval.is_zero() {
                    acc += mval * nval;
                }
            }
            *slot = acc;
        }
        Ok(match out_shape {
            None => ModeProduct::Scalar(out.pop().unwrap_or_else(Rational::zero)),
            Some(shape) => ModeProduct::Tensor(DenseTensor { shape, entries: out }),
        })
    }

    /// Returns `(m, n)` when `self` is a cubical tensor of even order `2m`.
    pub fn operator_dims(&self) -> Result<(usize, usize)> {
        let order = self.order();
        if order % 2 != 0 {
            return Err(Error::NotEvenOrder(order));
        }
        let n = self
            .shape
            .cubical_dim()
            .ok_or_else(|| Error::shape(format!("{:?} is not cubical", self.shape.dims())))?;
        Ok((order / 2, n))
    }

    /// `MZ`: contraction of the last `m` modes of the order-`2m` tensor `self`
    /// against the order-`m` tensor `z`.
    pub fn contract(&self, z: &DenseTensor) -> Result<DenseTensor> {
        let (m, n) = self.operator_dims()?;
        if !(z.order() == m && z.shape.is_cubical(n)) {
            return Err(Error::shape(format!(
                "contract: operator on R^[{m},{n}] applied to {:?}",
                z.shape.dims()
            )));
        }
        let modes: Vec<usize> = (m + 1..=2 * m).collect();
        match self.jp_mode_product(z, &modes)? {
            ModeProduct::Tensor(t) => Ok(t),
            ModeProduct::Scalar(_) => unreachable!("contract leaves m >= 1 free modes"),
        }
    }

    pub fn is_block_symmetric(&self) -> Result<bool> {
        let order = self.order();
        if order % 2 != 0 {
            return Err(Error::NotEvenOrder(order));
        }
        let (m, _) = self.operator_dims()?;
        for p in 0..self.entries.len() {
            let idx = self.shape.index0_of(p);
            let swapped = idx[m..].iter().chain(&idx[..m]).copied();
            if self.entries[p] != self.entries[self.shape.position0(swapped)] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction of every index to `1..=k`.
    pub fn sequential_principal_subtensor(&self, k: usize) -> Result<DenseTensor> {
        let n = self
            .shape
            .cubical_dim()
            .ok_or_else(|| Error::shape(format!("{:?} is not cubical", self.shape.dims())))?;
        if k == 0 || k > n {
            return Err(Error::KOutOfRange { k, n });
        }
        let shape = Shape::cubical(self.order(), k)?;
        let entries = (0..shape.len())
            .map(|p| self.entries[self.shape.position0(shape.index0_of(p))].clone())
            .collect();
        Ok(DenseTensor { shape, entries })
    }

    /// The `N x N` matrix of `Z -> MZ` with `N = n^m`; row `pos(i1..im)`,
    /// column `pos(i_{m+1}..i_{2m})`.
    pub fn flatten(&self) -> Result<Matrix> {
        let (m, n) = self.operator_dims()?;
        let half = Shape::cubical(m, n)?;
        let big_n = half.len();
        let mut a = Matrix::zeros(big_n, big_n);
        for p in 0..self.entries.len() {
            let idx = self.shape.index0_of(p);
            let row = half.position0(idx[..m].iter().copied());
            let col = half.position0(idx[m..].iter().copied());
            a.set(row, col, self.entries[p].clone());
        }
        Ok(a)
    }

    /// Inverse of `flatten` for an `N x N` matrix with `N = n^m`.
    pub fn unflatten(a: &Matrix, m: usize, n: usize) -> Result<DenseTensor> {
        let half = Shape::cubical(m, n)?;
        let big_n = half.len();
        if a.rows() != big_n || a.cols() != big_n {
            return Err(Error::shape(format!(
                "{}x{} matrix cannot be an operator on R^[{m},{n}]",
                a.rows(),
                a.cols()
            )));
        }
        let shape = Shape::cubical(2 * m, n)?;
        let mut entries = Vec::with_capacity(shape.len());
        for p in 0..shape.len() {
            let idx = shape.index0_of(p);
            let row = half.position0(idx[..m].iter().copied());
            let col = half.position0(idx[m..].iter().copied());
            entries.push(a.get(row, col).clone());
        }
        Ok(DenseTensor { shape, entries })
    }

    pub fn vectorize(&self) -> Vec<Rational> {
        self.entries.clone()
    }

    pub fn unvectorize(shape: Shape, v: Vec<Rational>) -> Result<DenseTensor> {
        DenseTensor::from_entries(shape, v)
    }
}

impl fmt::Display for DenseTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims = self.shape.dims();
        let cols = *dims.last().unwrap_or(&1);
        write!(f, "[")?;
        for (r, row) in self.entries.chunks(cols).enumerate() {
            if r > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = row.iter().map(rational::format).collect();
            write!(f, "{}", parts.join(" "))?;
        }
        write!(f, "]")
    }
}
