//! Small exact linear-programming kernel: two-phase tableau simplex with
//! Bland's rule (lowest index enters, lowest basic index leaves on ties).

use num_traits::{One, Signed, Zero};

use crate::linalg::{dot, Matrix};
use crate::rational::Rational;

/// `min c^T x` subject to `G x <= h`, `E x = f` and optional per-variable bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub ineq: Matrix,
    pub ineq_rhs: Vec<Rational>,
    pub eq: Matrix,
    pub eq_rhs: Vec<Rational>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Optimal { x: Vec<Rational>, value: Rational },
    /// `point + t * ray` is feasible for all `t >= 0` and the objective
    /// decreases strictly along `ray`.
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Infeasible => None,
            LpOutcome::Optimal { x, .. } => Some(x),
            LpOutcome::Unbounded { point, .. } => Some(point),
        }
    }
}

impl LinearProgram {
    /// Zero objective, no constraints, all variables free.
    pub fn new(dim: usize) -> Self {
        LinearProgram {
            objective: vec![Rational::zero(); dim],
            ineq: Matrix::zeros(0, dim),
            ineq_rhs: Vec::new(),
            eq: Matrix::zeros(0, dim),
            eq_rhs: Vec::new(),
            lower: vec![None; dim],
            upper: vec![None; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.objective.len()
    }

    pub fn minimize(mut self, c: Vec<Rational>) -> Self {
        assert_eq!(c.len(), self.dim());
        self.objective = c;
        self
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

    /// `row . x = rhs`
    pub fn equal(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.eq.push_row(row).expect("constraint width");
        self.eq_rhs.push(rhs);
    }

    pub fn lower_bound(&mut self, j: usize, v: Rational) {
        self.lower[j] = Some(v);
    }

    pub fn upper_bound(&mut self, j: usize, v: Rational) {
        self.upper[j] = Some(v);
    }

    /// True when `x` satisfies every constraint and bound exactly.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.dim()
            && (0..self.ineq.rows()).all(|r| dot(self.ineq.row(r), x) <= self.ineq_rhs[r])
            && (0..self.eq.rows()).all(|r| dot(self.eq.row(r), x) == self.eq_rhs[r])
            && x.iter().zip(&self.lower).all(|(v, l)| l.as_ref().map_or(true, |l| v >= l))
            && x.iter().zip(&self.upper).all(|(v, u)| u.as_ref().map_or(true, |u| v <= u))
    }
}

/// How an original variable is recovered from standard-form variables.
enum VarMap {
    /// `x = offset + s`
    Shifted { offset: Rational, col: usize },
    /// `x = offset - s`
    Reflected { offset: Rational, col: usize },
    /// `x = s+ - s-`
    Split { pos: usize, neg: usize },
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.a[r][c].recip();
        for v in self.a[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.a[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (v, p) in self.a[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Runs the simplex to optimality for `cost`. Returns `Err(col)` when
    /// `col` is an improving direction with no blocking row.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Result<(), usize> {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.a[i][j].is_zero() && !cost[b].is_zero() {
                        d -= &cost[b] * &self.a[i][j];
                    }
                }
                d.is_negative()
            });
            let Some(c) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.a[i][c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Err(c),
            }
        }
    }

    fn values(&self, ncols: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < ncols {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

/// Solves `p` exactly. Deterministic: identical inputs give identical pivots.
pub fn lp_solve(p: &LinearProgram) -> LpOutcome {
    let d = p.dim();
    // standard form: columns are nonnegative variables
    let mut maps = Vec::with_capacity(d);
    let mut ncols = 0;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for j in 0..d {
        match (&p.lower[j], &p.upper[j]) {
            (Some(l), u) => {
                maps.push(VarMap::Shifted { offset: l.clone(), col: ncols });
                if let Some(u) = u {
                    bound_rows.push((ncols, u - l));
                }
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Reflected { offset: u.clone(), col: ncols });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }
    // x = offset + T s, as (offset, coefficient list)
    let offset: Vec<Rational> = maps
        .iter()
        .map(|m| match m {
            VarMap::Shifted { offset, .. } | VarMap::Reflected { offset, .. } => offset.clone(),
            VarMap::Split { .. } => Rational::zero(),
        })
        .collect();
    let expand = |row: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); ncols];
        for (j, m) in maps.iter().enumerate() {
            match m {
                VarMap::Shifted { col, .. } => out[*col] += &row[j],
                VarMap::Reflected { col, .. } => out[*col] -= &row[j],
                VarMap::Split { pos, neg } => {
                    out[*pos] += &row[j];
                    out[*neg] -= &row[j];
                }
            }
        }
        out
    };

    let n_ineq = p.ineq.rows() + bound_rows.len();
    let n_slack = n_ineq;
    let total = ncols + n_slack;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut slack = ncols;
    for r in 0..p.ineq.rows() {
        let mut row = expand(p.ineq.row(r));
        row.resize(total, Rational::zero());
        row[slack] = Rational::one();
        slack += 1;
        rows.push(row);
        rhs.push(&p.ineq_rhs[r] - dot(p.ineq.row(r), &offset));
    }
    for (col, ub) in &bound_rows {
        let mut row = vec![Rational::zero(); total];
        row[*col] = Rational::one();
        row[slack] = Rational::one();
        slack += 1;
        rows.push(row);
        rhs.push(ub.clone());
    }
    for r in 0..p.eq.rows() {
        let mut row = expand(p.eq.row(r));
        row.resize(total, Rational::zero());
        rows.push(row);
        rhs.push(&p.eq_rhs[r] - dot(p.eq.row(r), &offset));
    }
    let m = rows.len();
    for i in 0..m {
        if rhs[i].is_negative() {
            rhs[i] = -rhs[i].clone();
            for v in rows[i].iter_mut() {
                *v = -v.clone();
            }
        }
    }
    // phase one: an artificial variable per row
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(total + m, Rational::zero());
        row[total + i] = Rational::one();
    }
    let mut t = Tableau {
        a: rows,
        rhs,
        basis: (total..total + m).collect(),
    };
    let mut phase1 = vec![Rational::zero(); total + m];
    for c in phase1[total..].iter_mut() {
        *c = Rational::one();
    }
    t.optimize(&phase1, total + m)
        .expect("phase one objective is bounded below by zero");
    let infeasibility = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&b, _)| b >= total)
        .fold(Rational::zero(), |acc, (_, v)| acc + v);
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.a.len() {
        if t.basis[i] >= total {
            match (0..total).find(|&j| !t.a[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.a.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut cost = expand(&p.objective);
    cost.resize(total + m, Rational::zero());
    let recover = |s: &[Rational], with_offset: bool| -> Vec<Rational> {
        maps.iter()
            .enumerate()
            .map(|(j, map)| {
                let base = if with_offset { offset[j].clone() } else { Rational::zero() };
                match map {
                    VarMap::Shifted { col, .. } => base + &s[*col],
                    VarMap::Reflected { col, .. } => base - &s[*col],
                    VarMap::Split { pos, neg } => &s[*pos] - &s[*neg],
                }
            })
            .collect()
    };
    match t.optimize(&cost, total) {
        Ok(()) => {
            let x = recover(&t.values(total), true);
            let value = dot(&p.objective, &x);
            LpOutcome::Optimal { x, value }
        }
        Err(c) => {
            let point = recover(&t.values(total), true);
            let mut dir = vec![Rational::zero(); total];
            dir[c] = Rational::one();
            for (i, &b) in t.basis.iter().enumerate() {
                if b < total {
                    dir[b] = -t.a[i][c].clone();
                }
            }
            let ray = recover(&dir, false);
            LpOutcome::Unbounded { point, ray }
        }
    }
}
