//! Feasibility, Lemke's method, solution-set enumeration and certificate
//! checks for `TLCP(M, Q)`.
//!
//! Solving goes through the flattened LCP `(A, q)` with `A = flatten(M)` and
//! `q = vec(Q)`. Verification does not: [`verify_solution`] and [`verify_kkt`]
//! evaluate the definitions with [`DenseTensor::contract`].

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::check_cap;
use crate::classify::is_column_sufficient;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::polyhedron::Polyhedron;
use crate::rational::Rational;
use crate::tensor::{DenseTensor, MultiIndex, Shape};

/// The pair `(M, Q)` together with its flattened form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TlcpInstance {
    m: DenseTensor,
    q: DenseTensor,
    a: Matrix,
    q_vec: Vec<Rational>,
}

impl TlcpInstance {
    pub fn new(m: DenseTensor, q: DenseTensor) -> Result<Self> {
        let (half, n) = m.operator_dims()?;
        let expected = Shape::cubical(half, n)?;
        if q.shape() != &expected {
            return Err(Error::shape(format!(
                "Q has dims {:?} but M of order {} acts on dims {:?}",
                q.shape().dims(),
                m.order(),
                expected.dims()
            )));
        }
        let a = m.flatten()?;
        let q_vec = q.vectorize();
        Ok(TlcpInstance { m, q, a, q_vec })
    }

    pub fn m(&self) -> &DenseTensor {
        &self.m
    }

    pub fn q(&self) -> &DenseTensor {
        &self.q
    }

    /// `flatten(M)`.
    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    /// `vec(Q)`.
    pub fn q_vec(&self) -> &[Rational] {
        &self.q_vec
    }

    /// Shape of `Z` and `Q`.
    pub fn shape(&self) -> &Shape {
        self.q.shape()
    }

    /// `N = n^m`.
    pub fn size(&self) -> usize {
        self.q_vec.len()
    }

    /// `MZ + Q`.
    pub fn residual(&self, z: &DenseTensor) -> Result<DenseTensor> {
        self.m.contract(z)?.add(&self.q)
    }

    fn to_tensor(&self, z: Vec<Rational>) -> DenseTensor {
        DenseTensor::from_entries(self.shape().clone(), z).expect("length matches shape")
    }

    fn affine(&self, z: &[Rational]) -> Vec<Rational> {
        self.a.mul_vec(z).into_iter().zip(&self.q_vec).map(|(v, q)| v + q).collect()
    }

    fn check_shape(&self, z: &DenseTensor) -> Result<()> {
        if z.shape() != self.shape() {
            return Err(Error::shape(format!(
                "expected dims {:?}, got {:?}",
                self.shape().dims(),
                z.shape().dims()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub z: DenseTensor,
    /// `MZ + Q`.
    pub w: DenseTensor,
}

impl Solution {
    fn new(inst: &TlcpInstance, z: DenseTensor) -> Result<Self> {
        let w = inst.residual(&z)?;
        Ok(Solution { z, w })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    ZNonnegative,
    WNonnegative,
    Complementarity,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::ZNonnegative => "Z >= O",
            Condition::WNonnegative => "MZ + Q >= O",
            Condition::Complementarity => "<Z, MZ + Q> = 0",
        })
    }
}

/// First violated condition of a candidate solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    /// Offending entry; `None` for the complementarity condition.
    pub index: Option<MultiIndex>,
    pub value: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.index {
            Some(i) => write!(f, "{} fails at {i}: value {}", self.condition, self.value),
            None => write!(f, "{} fails: value {}", self.condition, self.value),
        }
    }
}

/// `Ok(())` when `Z` solves the instance, else the first violation.
pub fn verify_solution(inst: &TlcpInstance, z: &DenseTensor) -> Result<std::result::Result<(), Violation>> {
    inst.check_shape(z)?;
    let w = inst.residual(z)?;
    let shape = inst.shape();
    for (condition, t) in [(Condition::ZNonnegative, z), (Condition::WNonnegative, &w)] {
        if let Some(p) = t.entries().iter().position(Signed::is_negative) {
            return Ok(Err(Violation {
                condition,
                index: Some(shape.index_of(p)),
                value: t.entries()[p].clone(),
            }));
        }
    }
    let gap = z.inner_product(&w)?;
    if !gap.is_zero() {
        return Ok(Err(Violation { condition: Condition::Complementarity, index: None, value: gap }));
    }
    Ok(Ok(()))
}

/// Feasibility of `{Z >= O, MZ + Q >= O}` with a feasible point.
pub fn is_feasible(inst: &TlcpInstance) -> Result<Option<DenseTensor>> {
    let n = inst.size();
    check_cap(n)?;
    if inst.q.is_nonnegative() {
        return Ok(Some(DenseTensor::zeros(inst.shape().clone())));
    }
    let mut lp = LinearProgram::new(n);
    for j in 0..n {
        lp.lower_bound(j, Rational::zero());
    }
    for i in 0..n {
        lp.ge(inst.a.row(i).to_vec(), -inst.q_vec[i].clone());
    }
    Ok(lp_solve(&lp).point().map(|z| inst.to_tensor(z.to_vec())))
}

/// Secondary ray at which Lemke's method stopped: for `t >= 0` the point
/// `(z, w, z0) + t (dz, dw, dz0)` satisfies `w = Az + q + z0 * 1`, is
/// nonnegative and almost complementary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayTermination {
    pub z: Vec<Rational>,
    pub w: Vec<Rational>,
    pub z0: Rational,
    pub dz: Vec<Rational>,
    pub dw: Vec<Rational>,
    pub dz0: Rational,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemkeOutcome {
    Solution { solution: Solution, pivots: usize },
    RayTermination(RayTermination),
}

const PIVOT_GUARD: usize = 100_000;

/// Lemke's complementary pivoting on the flattened LCP, with covering vector
/// all-ones and lexicographic ratio tests.
///
/// Tableau columns are `w_1..w_N, z_1..z_N, z0, rhs` for the system
/// `w - A z - z0 1 = q`. The `w` columns always hold the current basis
/// inverse, which supplies the lexicographic tie-breaking rows.
pub fn lemke_solve(inst: &TlcpInstance) -> Result<LemkeOutcome> {
    let n = inst.size();
    check_cap(n)?;
    if inst.q_vec.iter().all(|v| !v.is_negative()) {
        let solution = Solution::new(inst, DenseTensor::zeros(inst.shape().clone()))?;
        return Ok(LemkeOutcome::Solution { solution, pivots: 0 });
    }
    let z0 = 2 * n;
    let rhs = 2 * n + 1;
    let mut t: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = vec![Rational::zero(); 2 * n + 2];
            row[i] = Rational::one();
            for j in 0..n {
                row[n + j] = -inst.a.get(i, j).clone();
            }
            row[z0] = -Rational::one();
            row[rhs] = inst.q_vec[i].clone();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (0..n).collect();

    // lexicographically smallest (q_i, e_i): most negative q, last index on ties
    let mut r = 0;
    for i in 1..n {
        if t[i][rhs] <= t[r][rhs] {
            r = i;
        }
    }
    pivot(&mut t, r, z0);
    let mut leaving = basis[r];
    basis[r] = z0;
    let mut pivots = 1;

    loop {
        let entering = if leaving < n { leaving + n } else { leaving - n };
        let candidates: Vec<usize> = (0..n).filter(|&i| t[i][entering].is_positive()).collect();
        if candidates.is_empty() {
            return Ok(LemkeOutcome::RayTermination(ray(&t, &basis, entering, n, pivots)));
        }
        let ratio = |i: usize, col: usize| &t[i][col] / &t[i][entering];
        let min_rhs = candidates.iter().map(|&i| ratio(i, rhs)).min().expect("nonempty");
        let tied: Vec<usize> = candidates.into_iter().filter(|&i| ratio(i, rhs) == min_rhs).collect();
        let r = match tied.iter().find(|&&i| basis[i] == z0) {
            Some(&i) => i,
            None => *tied
                .iter()
                .min_by(|&&a, &&b| {
                    (0..n).map(|c| ratio(a, c)).cmp((0..n).map(|c| ratio(b, c)))
                })
                .expect("nonempty"),
        };
        pivot(&mut t, r, entering);
        leaving = basis[r];
        basis[r] = entering;
        pivots += 1;
        if leaving == z0 {
            let mut z = vec![Rational::zero(); n];
            for (i, &b) in basis.iter().enumerate() {
                if (n..2 * n).contains(&b) {
                    z[b - n] = t[i][rhs].clone();
                }
            }
            let z = inst.to_tensor(z);
            if let Err(v) = verify_solution(inst, &z)? {
                return Err(Error::InternalInconsistency(format!("Lemke output fails: {v}")));
            }
            let solution = Solution::new(inst, z)?;
            return Ok(LemkeOutcome::Solution { solution, pivots });
        }
        if pivots > PIVOT_GUARD {
            return Err(Error::InternalInconsistency(format!(
                "Lemke exceeded {PIVOT_GUARD} pivots"
            )));
        }
    }
}

fn pivot(t: &mut [Vec<Rational>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

fn ray(t: &[Vec<Rational>], basis: &[usize], entering: usize, n: usize, pivots: usize) -> RayTermination {
    let rhs = 2 * n + 1;
    let mut point = vec![Rational::zero(); 2 * n + 1];
    let mut dir = vec![Rational::zero(); 2 * n + 1];
    for (i, &b) in basis.iter().enumerate() {
        point[b] = t[i][rhs].clone();
        dir[b] = -t[i][entering].clone();
    }
    dir[entering] = Rational::one();
    RayTermination {
        w: point[..n].to_vec(),
        z: point[n..2 * n].to_vec(),
        z0: point[2 * n].clone(),
        dw: dir[..n].to_vec(),
        dz: dir[n..2 * n].to_vec(),
        dz0: dir[2 * n].clone(),
        pivots,
    }
}

/// The closed polyhedron of solutions whose positive entries lie in a given
/// support `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PieceStatus {
    Empty,
    Point(DenseTensor),
    Polyhedron {
        vertices: Vec<DenseTensor>,
        rays: Vec<DenseTensor>,
        dim: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionPiece {
    /// Support `alpha` as 0-based positions into `vec(Z)`.
    pub support: Vec<usize>,
    pub status: PieceStatus,
}

impl SolutionPiece {
    pub fn vertices(&self) -> &[DenseTensor] {
        match &self.status {
            PieceStatus::Empty => &[],
            PieceStatus::Point(z) => std::slice::from_ref(z),
            PieceStatus::Polyhedron { vertices, .. } => vertices,
        }
    }

    pub fn rays(&self) -> &[DenseTensor] {
        match &self.status {
            PieceStatus::Polyhedron { rays, .. } => rays,
            _ => &[],
        }
    }

    pub fn dim(&self) -> usize {
        match &self.status {
            PieceStatus::Polyhedron { dim, .. } => *dim,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    /// Nonempty pieces, supports in lexicographic order.
    pub pieces: Vec<SolutionPiece>,
    pub empty: bool,
    pub singleton: bool,
    pub bounded: bool,
}

impl SolutionSet {
    /// Distinct vertices over all pieces, in order of first appearance.
    pub fn vertices(&self) -> Vec<DenseTensor> {
        let mut seen = HashSet::new();
        self.pieces
            .iter()
            .flat_map(|p| p.vertices().iter())
            .filter(|v| seen.insert((*v).clone()))
            .cloned()
            .collect()
    }

    /// Whether `z` lies in one of the pieces, by exact constraint evaluation.
    pub fn contains(&self, inst: &TlcpInstance, z: &DenseTensor) -> bool {
        let zv = z.vectorize();
        let w = inst.affine(&zv);
        self.pieces.iter().any(|p| {
            (0..zv.len()).all(|i| {
                if p.support.contains(&i) {
                    !zv[i].is_negative() && w[i].is_zero()
                } else {
                    zv[i].is_zero() && !w[i].is_negative()
                }
            })
        })
    }
}

/// Every subset of `0..n` as a sorted list, in lexicographic order of the
/// lists: `[], [0], [0, 1], ..., [n - 1]`.
fn supports(n: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        let start = prefix.last().map_or(0, |&l| l + 1);
        for i in start..n {
            prefix.push(i);
            extend(n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(1 << n);
    extend(n, &mut Vec::new(), &mut out);
    out
}

fn piece_polyhedron(inst: &TlcpInstance, alpha: &[usize]) -> Polyhedron {
    let n = inst.size();
    let k = alpha.len();
    let mut p = Polyhedron::new(k);
    for i in 0..n {
        let row: Vec<Rational> = alpha.iter().map(|&j| inst.a.get(i, j).clone()).collect();
        if alpha.contains(&i) {
            p.equal(row, -inst.q_vec[i].clone());
        } else {
            p.ge(row, -inst.q_vec[i].clone());
        }
    }
    for j in 0..k {
        let mut e = vec![Rational::zero(); k];
        e[j] = Rational::one();
        p.ge(e, Rational::zero());
    }
    p
}

fn piece_nonempty(p: &Polyhedron) -> bool {
    let mut lp = LinearProgram::new(p.dim());
    for r in 0..p.ineq.rows() {
        lp.le(p.ineq.row(r).to_vec(), p.ineq_rhs[r].clone());
    }
    for r in 0..p.eq.rows() {
        lp.equal(p.eq.row(r).to_vec(), p.eq_rhs[r].clone());
    }
    lp_solve(&lp) != LpOutcome::Infeasible
}

fn affine_dimension(vertices: &[Vec<Rational>], rays: &[Vec<Rational>]) -> usize {
    let Some(first) = vertices.first() else {
        return 0;
    };
    let mut rows: Vec<Vec<Rational>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    rows.extend(rays.iter().cloned());
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows).expect("equal widths").rank()
}

/// All of `SOL(M, Q)` as a union of polyhedral pieces, one per support
/// pattern. Point pieces repeating an earlier point are dropped.
pub fn enumerate_solution_set(inst: &TlcpInstance) -> Result<SolutionSet> {
    let n = inst.size();
    check_cap(n)?;
    let mut pieces = Vec::new();
    let mut seen_points = HashSet::new();
    for alpha in supports(n) {
        let poly = piece_polyhedron(inst, &alpha);
        if !piece_nonempty(&poly) {
            continue;
        }
        let lift = |y: &[Rational]| {
            let mut z = vec![Rational::zero(); n];
            for (&j, v) in alpha.iter().zip(y) {
                z[j] = v.clone();
            }
            z
        };
        let vertices: Vec<Vec<Rational>> = poly.vertices()?.iter().map(|y| lift(y)).collect();
        let rays: Vec<Vec<Rational>> = poly.recession_generators()?.iter().map(|y| lift(y)).collect();
        if vertices.is_empty() {
            return Err(Error::InternalInconsistency(format!(
                "nonempty piece {alpha:?} has no vertex"
            )));
        }
        let status = if vertices.len() == 1 && rays.is_empty() {
            let z = vertices.into_iter().next().expect("one vertex");
            if !seen_points.insert(z.clone()) {
                continue;
            }
            PieceStatus::Point(inst.to_tensor(z))
        } else {
            let dim = affine_dimension(&vertices, &rays);
            for v in &vertices {
                seen_points.insert(v.clone());
            }
            PieceStatus::Polyhedron {
                vertices: vertices.into_iter().map(|v| inst.to_tensor(v)).collect(),
                rays: rays.into_iter().map(|r| inst.to_tensor(r)).collect(),
                dim,
            }
        };
        let piece = SolutionPiece { support: alpha, status };
        for v in piece.vertices() {
            if let Err(violation) = verify_solution(inst, v)? {
                return Err(Error::InternalInconsistency(format!(
                    "piece {:?} vertex {v} fails: {violation}",
                    piece.support
                )));
            }
        }
        pieces.push(piece);
    }
    let mut set = SolutionSet { pieces, empty: false, singleton: false, bounded: true };
    set.empty = set.pieces.is_empty();
    set.bounded = set.pieces.iter().all(|p| p.rays().is_empty());
    set.singleton = set.bounded && set.vertices().len() == 1;
    Ok(set)
}

/// `<Z, MZ> + <Q, Z>`.
pub fn qp_objective(inst: &TlcpInstance, z: &DenseTensor) -> Result<Rational> {
    inst.check_shape(z)?;
    Ok(z.inner_product(&inst.m.contract(z)?)? + inst.q.inner_product(z)?)
}

/// Candidate optimum `Z*` of the quadratic program and its multiplier `U*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KktCertificate {
    pub z_star: DenseTensor,
    pub u_star: DenseTensor,
}

/// Outcome of each optimality condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KktReport {
    /// `2MZ* + Q - MU* >= O`.
    pub kkt1: bool,
    /// `<Z*, 2MZ* + Q - MU*> = 0`.
    pub kkt2: bool,
    /// `U* >= O` and `<U*, MZ* + Q> = 0`.
    pub kkt3: bool,
    /// `Z* >= O` and `MZ* + Q >= O`.
    pub kkt4: bool,
    /// `(Z* - U*) o M(Z* - U*) <= O`.
    pub kkt5: bool,
}

impl KktReport {
    pub fn holds(&self) -> bool {
        self.kkt1 && self.kkt2 && self.kkt3 && self.kkt4 && self.kkt5
    }

    pub fn failed(&self) -> Vec<&'static str> {
        [
            ("KKT1", self.kkt1),
            ("KKT2", self.kkt2),
            ("KKT3", self.kkt3),
            ("KKT4", self.kkt4),
            ("KKT5", self.kkt5),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }
}

pub fn verify_kkt(inst: &TlcpInstance, cert: &KktCertificate) -> Result<KktReport> {
    if !inst.m.is_block_symmetric()? {
        return Err(Error::NotBlockSymmetric);
    }
    inst.check_shape(&cert.z_star)?;
    inst.check_shape(&cert.u_star)?;
    let (z, u) = (&cert.z_star, &cert.u_star);
    let mz = inst.m.contract(z)?;
    let mu = inst.m.contract(u)?;
    let w = mz.add(&inst.q)?;
    let g = mz.scale(&Rational::from_integer(2.into())).add(&inst.q)?.sub(&mu)?;
    let d = z.sub(u)?;
    let dmd = d.hadamard(&inst.m.contract(&d)?)?;
    Ok(KktReport {
        kkt1: g.is_nonnegative(),
        kkt2: z.inner_product(&g)?.is_zero(),
        kkt3: u.is_nonnegative() && u.inner_product(&w)?.is_zero(),
        kkt4: z.is_nonnegative() && w.is_nonnegative(),
        kkt5: dmd.entries().iter().all(|v| !v.is_positive()),
    })
}

/// Extracts a solution from a valid certificate when `M` is column
/// sufficient: KKT5 plus sufficiency give `(Z*-U*) o M(Z*-U*) = O`, which
/// splits into `Z* o M(Z*-U*) = O` and then `Z* o (MZ* + Q) = O`.
pub fn solve_via_kkt_chain(inst: &TlcpInstance, cert: &KktCertificate) -> Result<Solution> {
    let report = verify_kkt(inst, cert)?;
    if !report.holds() {
        return Err(Error::KktInvalid(format!("failed {}", report.failed().join(", "))));
    }
    if !is_column_sufficient(&inst.m)?.holds {
        return Err(Error::NotColumnSufficient);
    }
    let z = &cert.z_star;
    let d = z.sub(&cert.u_star)?;
    let md = inst.m.contract(&d)?;
    if !d.hadamard(&md)?.is_zero() {
        return Err(Error::ChainViolated("(Z*-U*) o M(Z*-U*) is not zero".into()));
    }
    if !z.hadamard(&md)?.is_zero() {
        return Err(Error::ChainViolated("Z* o M(Z*-U*) is not zero".into()));
    }
    let w = inst.residual(z)?;
    if !z.hadamard(&w)?.is_zero() {
        return Err(Error::ChainViolated("Z* o (MZ*+Q) is not zero".into()));
    }
    if let Err(v) = verify_solution(inst, z)? {
        return Err(Error::ChainViolated(v.to_string()));
    }
    Ok(Solution { z: z.clone(), w })
}
