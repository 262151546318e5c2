//! Vertices and extreme rays of small pointed polyhedra
//! `{x : G x <= h, E x = f}` by exhaustive basis enumeration.
//!
//! The equality system is solved first, so the enumeration runs in the
//! parameter space of the affine hull `x = x0 + V y`. A vertex is a feasible
//! point where `k = dim y` linearly independent inequalities are tight; an
//! extreme ray of the recession cone is a feasible direction where `k - 1`
//! independent inequalities are tight.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::check_cap;
use crate::error::{Error, Result};
use crate::linalg::{dot, nullspace, solve_linear_system, LinearSystemSolution, Matrix};
use crate::rational::{primitive_direction, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    pub ineq: Matrix,
    pub ineq_rhs: Vec<Rational>,
    pub eq: Matrix,
    pub eq_rhs: Vec<Rational>,
}

/// Affine hull parametrization plus the inequalities rewritten over it.
struct Reduced {
    origin: Vec<Rational>,
    basis: Vec<Vec<Rational>>,
    g: Matrix,
    h: Vec<Rational>,
}

impl Reduced {
    fn lift(&self, y: &[Rational]) -> Vec<Rational> {
        let mut x = self.origin.clone();
        for (v, c) in self.basis.iter().zip(y) {
            if c.is_zero() {
                continue;
            }
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += c * vi;
            }
        }
        x
    }

    fn lift_direction(&self, y: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.origin.len()];
        for (v, c) in self.basis.iter().zip(y) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += c * vi;
            }
        }
        x
    }
}

impl Polyhedron {
    pub fn new(dim: usize) -> Self {
        Polyhedron {
            ineq: Matrix::zeros(0, dim),
            ineq_rhs: Vec::new(),
            eq: Matrix::zeros(0, dim),
            eq_rhs: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.ineq.cols()
    }

    /// `row . x <= rhs`
    pub fn le(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.ineq.push_row(row).expect("constraint width");
        self.ineq_rhs.push(rhs);
    }

    /// `row . x >= rhs`
    pub fn ge(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.le(row.into_iter().map(|v| -v).collect(), -rhs);
    }

    pub fn equal(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.eq.push_row(row).expect("constraint width");
        self.eq_rhs.push(rhs);
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        (0..self.ineq.rows()).all(|r| dot(self.ineq.row(r), x) <= self.ineq_rhs[r])
            && (0..self.eq.rows()).all(|r| dot(self.eq.row(r), x) == self.eq_rhs[r])
    }

    /// `None` when the equality system is inconsistent.
    fn reduce(&self) -> Result<Option<Reduced>> {
        check_cap(self.dim())?;
        let d = self.dim();
        let (origin, basis) = if self.eq.rows() == 0 {
            let basis = (0..d)
                .map(|j| {
                    let mut e = vec![Rational::zero(); d];
                    e[j] = Rational::from_integer(1.into());
                    e
                })
                .collect();
            (vec![Rational::zero(); d], basis)
        } else {
            match solve_linear_system(&self.eq, &self.eq_rhs) {
                LinearSystemSolution::Inconsistent => return Ok(None),
                LinearSystemSolution::Unique(x) => (x, Vec::new()),
                LinearSystemSolution::Affine { particular, nullspace } => (particular, nullspace),
            }
        };
        let k = basis.len();
        let mut g = Matrix::zeros(0, k);
        let mut h = Vec::with_capacity(self.ineq.rows());
        for r in 0..self.ineq.rows() {
            let row = self.ineq.row(r);
            g.push_row(basis.iter().map(|v| dot(row, v)).collect())?;
            h.push(&self.ineq_rhs[r] - dot(row, &origin));
        }
        if k > 0 && !nullspace(&g).is_empty() {
            return Err(Error::NotPointed);
        }
        Ok(Some(Reduced { origin, basis, g, h }))
    }

    /// All vertices, in order of discovery, without duplicates.
    pub fn vertices(&self) -> Result<Vec<Vec<Rational>>> {
        let Some(red) = self.reduce()? else {
            return Ok(Vec::new());
        };
        let k = red.basis.len();
        if k == 0 {
            return Ok(if self.contains(&red.origin) { vec![red.origin] } else { Vec::new() });
        }
        let rows = red.g.rows();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for subset in Subsets::new(rows, k) {
            let sys = red.g.submatrix(&subset, &(0..k).collect::<Vec<_>>());
            let rhs: Vec<Rational> = subset.iter().map(|&i| red.h[i].clone()).collect();
            let LinearSystemSolution::Unique(y) = solve_linear_system(&sys, &rhs) else {
                continue;
            };
            let feasible = (0..rows).all(|r| dot(red.g.row(r), &y) <= red.h[r]);
            if feasible {
                let x = red.lift(&y);
                if seen.insert(x.clone()) {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }

    /// Extreme rays of the recession cone as primitive integer directions.
    pub fn recession_generators(&self) -> Result<Vec<Vec<Rational>>> {
        let Some(red) = self.reduce()? else {
            return Ok(Vec::new());
        };
        let k = red.basis.len();
        if k == 0 {
            return Ok(Vec::new());
        }
        let rows = red.g.rows();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for subset in Subsets::new(rows, k - 1) {
            let sys = if subset.is_empty() {
                Matrix::zeros(1, k)
            } else {
                red.g.submatrix(&subset, &(0..k).collect::<Vec<_>>())
            };
            let ns = nullspace(&sys);
            if ns.len() != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let y: Vec<Rational> = ns[0].iter().map(|v| v * Rational::from_integer(sign.into())).collect();
                let recedes = (0..rows).all(|r| !dot(red.g.row(r), &y).is_positive());
                if recedes {
                    let x = primitive_direction(&red.lift_direction(&y));
                    if seen.insert(x.clone()) {
                        out.push(x);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn from_blocks(g: &Matrix, h: &[Rational], e: &Matrix, f: &[Rational]) -> Result<Polyhedron> {
    if g.rows() != h.len() || e.rows() != f.len() || (g.rows() > 0 && e.rows() > 0 && g.cols() != e.cols()) {
        return Err(Error::shape("polyhedron blocks have inconsistent sizes"));
    }
    let dim = if g.rows() > 0 { g.cols() } else { e.cols() };
    let mut p = Polyhedron::new(dim);
    for r in 0..g.rows() {
        p.le(g.row(r).to_vec(), h[r].clone());
    }
    for r in 0..e.rows() {
        p.equal(e.row(r).to_vec(), f[r].clone());
    }
    Ok(p)
}

/// Vertices of `{x : G x <= h, E x = f}`.
pub fn vertex_enumeration(g: &Matrix, h: &[Rational], e: &Matrix, f: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    from_blocks(g, h, e, f)?.vertices()
}

/// Extreme rays of the recession cone of `{x : G x <= h, E x = f}`.
pub fn recession_generators(g: &Matrix, h: &[Rational], e: &Matrix, f: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    from_blocks(g, h, e, f)?.recession_generators()
}

/// `k`-subsets of `0..n` in lexicographic order.
pub(crate) struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Subsets {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{lp_solve, LinearProgram, LpOutcome};
    use crate::rational::int;
    use proptest::prelude::*;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn subsets_enumerate_in_order() {
        let all: Vec<_> = Subsets::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(Subsets::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Subsets::new(2, 3).count(), 0);
    }

    #[test]
    fn unit_square() {
        let mut p = Polyhedron::new(2);
        p.ge(r(&[1, 0]), int(0));
        p.ge(r(&[0, 1]), int(0));
        p.le(r(&[1, 0]), int(1));
        p.le(r(&[0, 1]), int(1));
        let v = p.vertices().unwrap();
        assert_eq!(v.len(), 4);
        assert!(p.recession_generators().unwrap().is_empty());
    }

    #[test]
    fn half_line() {
        let mut p = Polyhedron::new(1);
        p.ge(r(&[1]), int(0));
        assert_eq!(p.vertices().unwrap(), vec![r(&[0])]);
        assert_eq!(p.recession_generators().unwrap(), vec![r(&[1])]);
    }

    #[test]
    fn simplex_edge() {
        let mut p = Polyhedron::new(2);
        p.equal(r(&[1, 1]), int(1));
        p.ge(r(&[1, 0]), int(0));
        p.ge(r(&[0, 1]), int(0));
        let mut v = p.vertices().unwrap();
        v.sort();
        assert_eq!(v, vec![r(&[0, 1]), r(&[1, 0])]);
    }

    #[test]
    fn lineality_is_rejected() {
        let mut p = Polyhedron::new(2);
        p.ge(r(&[1, 0]), int(0));
        assert_eq!(p.vertices(), Err(Error::NotPointed));
    }

    #[test]
    fn dimension_cap_enforced() {
        let p = Polyhedron::new(13);
        assert!(matches!(p.vertices(), Err(Error::DimensionCapExceeded { .. })));
    }

    proptest! {
        #[test]
        fn lp_optimum_matches_vertex_scan(vals in prop::collection::vec(-3i64..=3, 6),
                                          rhs in prop::collection::vec(0i64..=6, 3),
                                          c in prop::collection::vec(-3i64..=3, 2)) {
            // box-bounded so the brute force over vertices is exhaustive
            let mut poly = Polyhedron::new(2);
            let mut lp = LinearProgram::new(2).minimize(r(&c));
            for k in 0..3 {
                poly.le(r(&vals[2 * k..2 * k + 2]), int(rhs[k]));
                lp.le(r(&vals[2 * k..2 * k + 2]), int(rhs[k]));
            }
            for j in 0..2 {
                let mut e = vec![int(0), int(0)];
                e[j] = int(1);
                poly.le(e.clone(), int(4));
                poly.ge(e, int(-4));
                lp.lower_bound(j, int(-4));
                lp.upper_bound(j, int(4));
            }
            let verts = poly.vertices().unwrap();
            for v in &verts {
                prop_assert!(poly.contains(v));
            }
            let best = verts.iter().map(|v| dot(&r(&c), v)).min();
            match lp_solve(&lp) {
                LpOutcome::Optimal { value, .. } => prop_assert_eq!(Some(value), best),
                LpOutcome::Infeasible => prop_assert!(verts.is_empty()),
                LpOutcome::Unbounded { .. } => prop_assert!(false, "box is bounded"),
            }
        }
    }
}
