//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::shape("ragged rows"));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "from_ints: wrong entry count");
        Matrix {
            rows,
            cols,
            entries: values.iter().map(|&v| rational::int(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<Rational>) -> Result<()> {
        if self.rows == 0 && self.entries.is_empty() && self.cols == 0 {
            self.cols = row.len();
        }
        if row.len() != self.cols {
            return Err(Error::shape(format!(
                "row of length {} pushed onto {} columns",
                row.len(),
                self.cols
            )));
        }
        self.entries.extend(row);
        self.rows += 1;
        Ok(())
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols, "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|r| dot(self.row(r), x))
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// `(A + A^T) / 2`, the part of `A` seen by the quadratic form `x^T A x`.
    pub fn symmetric_part(&self) -> Matrix {
        let half = rational::frac(1, 2);
        let mut s = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.set(r, c, (self.get(r, c) + self.get(c, r)) * &half);
            }
        }
        s
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut s = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                s.set(i, j, self.get(r, c).clone());
            }
        }
        s
    }

    /// `x^T A x`.
    pub fn quadratic_form(&self, x: &[Rational]) -> Rational {
        dot(x, &self.mul_vec(x))
    }

    pub fn rank(&self) -> usize {
        rref(self.clone()).1.len()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSystemSolution {
    Inconsistent,
    Unique(Vec<Rational>),
    /// `x = particular + V t` for any `t`; `nullspace` holds the columns of `V`.
    Affine {
        particular: Vec<Rational>,
        nullspace: Vec<Vec<Rational>>,
    },
}

/// Reduced row echelon form in place; returns the matrix and its pivot columns.
fn rref(mut a: Matrix) -> (Matrix, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for k in 0..a.cols {
                a.entries.swap(p * a.cols + k, r * a.cols + k);
            }
        }
        let inv = a.get(r, c).recip();
        for k in c..a.cols {
            let v = a.get(r, k) * &inv;
            a.set(r, k, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for k in c..a.cols {
                if a.get(r, k).is_zero() {
                    continue;
                }
                let v = a.get(i, k) - &f * a.get(r, k);
                a.set(i, k, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Solves `A x = b` exactly, returning a particular solution and a nullspace
/// basis when solvable.
pub fn solve_linear_system(a: &Matrix, b: &[Rational]) -> LinearSystemSolution {
    assert_eq!(a.rows, b.len(), "solve_linear_system: rhs length");
    let n = a.cols;
    let mut aug = Matrix::zeros(a.rows, n + 1);
    for r in 0..a.rows {
        for c in 0..n {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, n, b[r].clone());
    }
    let (red, pivots) = rref(aug);
    if pivots.last() == Some(&n) {
        return LinearSystemSolution::Inconsistent;
    }
    let mut particular = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = red.get(r, n).clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return LinearSystemSolution::Unique(particular);
    }
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -red.get(r, f).clone();
            }
            v
        })
        .collect();
    LinearSystemSolution::Affine { particular, nullspace }
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(a: &Matrix) -> Vec<Vec<Rational>> {
    match solve_linear_system(a, &vec![Rational::zero(); a.rows]) {
        LinearSystemSolution::Affine { nullspace, .. } => nullspace,
        _ => Vec::new(),
    }
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(a: &Matrix) -> Result<Rational> {
    if a.rows != a.cols {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut m = a.clone();
    let mut sign = Rational::one();
    let mut prev = Rational::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(Rational::zero());
            };
            for c in 0..n {
                m.entries.swap(p * n + c, k * n + c);
            }
            sign = -sign;
        }
        let pivot = m.get(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m.get(i, j) * &pivot - m.get(i, k) * m.get(k, j)) / &prev;
                m.set(i, j, v);
            }
        }
        prev = pivot;
    }
    Ok(sign * m.get(n - 1, n - 1))
}

/// Determinant of the principal submatrix on the 0-based index set `set`.
pub fn principal_minor(a: &Matrix, set: &[usize]) -> Result<Rational> {
    if set.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if a.rows != a.cols {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    determinant(&a.submatrix(set, set))
}
