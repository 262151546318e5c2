//! Reference checks that share no code with the deciders: brute-force grids,
//! principal minors and vertex enumeration in place of simplex.

#![allow(dead_code)]

use num_traits::{Signed, Zero};
use tensorlcp::linalg::determinant;
use tensorlcp::polyhedron::Polyhedron;
use tensorlcp::rational::{frac, int};
use tensorlcp::{DenseTensor, Matrix, Rational, Shape, TensorClass};

/// Every tensor of the given shape with entries in `{-2, -1, -1/2, 0, 1/2, 1, 2}`.
pub fn grid(shape: &Shape) -> Vec<DenseTensor> {
    let values = [int(-2), int(-1), frac(-1, 2), int(0), frac(1, 2), int(1), int(2)];
    let n = shape.len();
    let mut out = Vec::with_capacity(values.len().pow(n as u32));
    let mut digits = vec![0usize; n];
    loop {
        let entries = digits.iter().map(|&d| values[d].clone()).collect();
        out.push(DenseTensor::from_entries(shape.clone(), entries).unwrap());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            digits[i] += 1;
            if digits[i] < values.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Whether `z` contradicts membership of `m` in `class`, straight from the
/// class definition.
pub fn refutes(class: TensorClass, m: &DenseTensor, z: &DenseTensor) -> bool {
    refuted_by(m, z).contains(&class)
}

/// Every class whose definition `z` contradicts for `m`.
pub fn refuted_by(m: &DenseTensor, z: &DenseTensor) -> Vec<TensorClass> {
    if z.is_zero() {
        return Vec::new();
    }
    let mz = m.contract(z).unwrap();
    let zs = z.entries();
    let ws = mz.entries();
    let p: Vec<Rational> = zs.iter().zip(ws).map(|(a, b)| a * b).collect();
    let form: Rational = p.iter().sum();
    let nonneg = zs.iter().all(|v| !v.is_negative());
    let on_support = |pred: &dyn Fn(&Rational) -> bool| {
        zs.iter().zip(ws).filter(|(a, _)| a.is_positive()).all(|(_, b)| pred(b))
    };
    let sufficiency = p.iter().all(|v| !v.is_positive()) && p.iter().any(Signed::is_negative);
    let holds = |class| match class {
        TensorClass::ColumnSufficient => sufficiency,
        TensorClass::ColumnSufficientOnNonneg => nonneg && sufficiency,
        TensorClass::P => p.iter().all(|v| !v.is_positive()),
        TensorClass::NonDegenerate => p.iter().all(Zero::is_zero),
        TensorClass::SemiPositive => nonneg && on_support(&|b| b.is_negative()),
        TensorClass::StrictlySemiPositive => nonneg && on_support(&|b| !b.is_positive()),
        TensorClass::Copositive => nonneg && form.is_negative(),
        TensorClass::StrictlyCopositive => nonneg && !form.is_positive(),
        TensorClass::PositiveSemidefinite => form.is_negative(),
    };
    TensorClass::ALL.into_iter().filter(|&c| holds(c)).collect()
}

fn principal_minors(a: &Matrix) -> Vec<Rational> {
    let n = a.rows();
    (1..1usize << n)
        .map(|mask| {
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            determinant(&a.submatrix(&set, &set)).unwrap()
        })
        .collect()
}

/// P-matrix: every principal minor positive.
pub fn is_p_matrix(a: &Matrix) -> bool {
    principal_minors(a).iter().all(Signed::is_positive)
}

/// Non-degenerate matrix: every principal minor nonzero.
pub fn is_nondegenerate_matrix(a: &Matrix) -> bool {
    principal_minors(a).iter().all(|v| !v.is_zero())
}

/// Column sufficiency of a matrix, optionally only over `z >= 0`.
///
/// For a sign pattern `s` with support `S`, the violations with that pattern
/// form a cone whose slice `{y >= 0, sum y = 1, s_i (A s y)_i <= 0 on S}` is
/// a polytope. A violation exists iff the barycenter of the slice's vertices
/// is positive on all of `S` and strictly negative in some row: the
/// barycenter has the largest support of any point and is strict in every
/// row where some point is.
pub fn is_column_sufficient_matrix(a: &Matrix, nonneg_only: bool) -> bool {
    let n = a.rows();
    let digits: &[i64] = if nonneg_only { &[0, 1] } else { &[0, 1, -1] };
    let total = digits.len().pow(n as u32);
    for code in 1..total {
        let mut c = code;
        let signs: Vec<i64> = (0..n)
            .map(|_| {
                let d = digits[c % digits.len()];
                c /= digits.len();
                d
            })
            .collect();
        let support: Vec<usize> = (0..n).filter(|&i| signs[i] != 0).collect();
        let k = support.len();
        let row = |i: usize| -> Vec<Rational> {
            support.iter().map(|&j| a.get(i, j) * int(signs[i] * signs[j])).collect()
        };
        let mut p = Polyhedron::new(k);
        for &i in &support {
            p.le(row(i), int(0));
        }
        for j in 0..k {
            let mut e = vec![int(0); k];
            e[j] = int(1);
            p.ge(e, int(0));
        }
        p.equal(vec![int(1); k], int(1));
        let vertices = p.vertices().unwrap();
        if vertices.is_empty() {
            continue;
        }
        let count = int(vertices.len() as i64);
        let bary: Vec<Rational> =
            (0..k).map(|j| vertices.iter().map(|v| v[j].clone()).sum::<Rational>() / &count).collect();
        let strict = support.iter().any(|&i| {
            let v: Rational = row(i).iter().zip(&bary).map(|(r, y)| r * y).sum();
            v.is_negative()
        });
        if bary.iter().all(Signed::is_positive) && strict {
            return false;
        }
    }
    true
}

/// The predicates a grid search can refute, checked over the whole grid.
/// Returns the classes for which some grid point is a counterexample.
pub fn grid_refuted(m: &DenseTensor) -> Vec<TensorClass> {
    let (half, n) = m.operator_dims().unwrap();
    let shape = Shape::cubical(half, n).unwrap();
    let mut out = Vec::new();
    for z in grid(&shape) {
        for c in refuted_by(m, &z) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}
