//! Convexity and uniqueness of solution sets, the constructive non-convexity
//! witness, and a seeded randomized harness over the class theorems.
//!
//! # Generator reduction
//!
//! Each piece of `SOL(M, Q)` is a pointed polyhedron `conv(V_P) + cone(R_P)`.
//! For solutions `z = sum l_v v + sum m_u u` and `z' = sum l'_v v' + sum m'_u u'`
//! (convex weights `l`, nonnegative `m`) the cross value expands as
//!
//! ```text
//! <z, Az' + q> = sum l l' <v, Av' + q> + sum l m' <v, Au'>
//!              + sum m l' <u, Av' + q> + sum m m' <u, Au'>
//! ```
//!
//! Vertices and rays are nonnegative, `Av' + q >= 0` at every vertex and
//! `Au' >= 0` along every ray of a piece, so each term is nonnegative. The
//! cross value vanishes for every pair of solutions exactly when all four
//! kinds of generator terms vanish, and [`check_convexity`] tests precisely
//! those. A positive term yields an explicit pair of solutions by taking a
//! vertex of the ray's own piece plus the ray.

use std::collections::BTreeMap;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{classify, is_column_sufficient, is_positive_semidefinite, TensorClass};
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::rational::{self, Rational};
use crate::solver::{enumerate_solution_set, verify_solution, Solution, SolutionSet, TlcpInstance};
use crate::tensor::{DenseTensor, Shape};

/// `(<Z1, MZ2 + Q>, <Z2, MZ1 + Q>)`.
pub fn cross_complementarity(
    inst: &TlcpInstance,
    z1: &DenseTensor,
    z2: &DenseTensor,
) -> Result<(Rational, Rational)> {
    let a = z1.inner_product(&inst.residual(z2)?)?;
    let b = z2.inner_product(&inst.residual(z1)?)?;
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexityVerdict {
    Convex,
    NonConvex,
    Empty,
    Singleton,
}

impl ConvexityVerdict {
    pub fn is_convex(self) -> bool {
        self != ConvexityVerdict::NonConvex
    }

    pub fn name(self) -> &'static str {
        match self {
            ConvexityVerdict::Convex => "Convex",
            ConvexityVerdict::NonConvex => "NonConvex",
            ConvexityVerdict::Empty => "Empty",
            ConvexityVerdict::Singleton => "Singleton",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexityReport {
    pub verdict: ConvexityVerdict,
    /// Two solutions with a positive cross value, when non-convex.
    pub pair: Option<(DenseTensor, DenseTensor)>,
    pub cross: Option<(Rational, Rational)>,
    /// Distinct vertices over all pieces.
    pub vertices: Vec<DenseTensor>,
    /// Distinct recession generators over all pieces.
    pub rays: Vec<DenseTensor>,
    /// Vertex midpoints confirmed to solve, for convex verdicts.
    pub midpoints_checked: usize,
}

/// A generator together with the point it is attached to: a vertex is its
/// own base, a ray is based at the first vertex of its piece.
struct Generator {
    base: Vec<Rational>,
    direction: Option<Vec<Rational>>,
}

impl Generator {
    fn vector(&self) -> &[Rational] {
        self.direction.as_deref().unwrap_or(&self.base)
    }

    /// The solution `base + direction`.
    fn solution(&self) -> Vec<Rational> {
        match &self.direction {
            None => self.base.clone(),
            Some(u) => self.base.iter().zip(u).map(|(a, b)| a + b).collect(),
        }
    }
}

const MIDPOINT_VERTICES: usize = 16;

pub fn check_convexity(inst: &TlcpInstance) -> Result<ConvexityReport> {
    let set = enumerate_solution_set(inst)?;
    convexity_of(inst, &set)
}

/// Convexity verdict for an already enumerated solution set.
pub fn convexity_of(inst: &TlcpInstance, set: &SolutionSet) -> Result<ConvexityReport> {
    let vertices = set.vertices();
    let mut rays = Vec::new();
    let mut generators: Vec<Generator> =
        vertices.iter().map(|v| Generator { base: v.vectorize(), direction: None }).collect();
    for piece in &set.pieces {
        let base = piece.vertices()[0].vectorize();
        for u in piece.rays() {
            if !rays.contains(u) {
                rays.push(u.clone());
            }
            generators.push(Generator { base: base.clone(), direction: Some(u.vectorize()) });
        }
    }
    let mut report = ConvexityReport {
        verdict: ConvexityVerdict::Convex,
        pair: None,
        cross: None,
        vertices,
        rays,
        midpoints_checked: 0,
    };
    if set.empty {
        report.verdict = ConvexityVerdict::Empty;
        return Ok(report);
    }
    if set.singleton {
        report.verdict = ConvexityVerdict::Singleton;
        return Ok(report);
    }

    let a = inst.matrix();
    let q = inst.q_vec();
    // Av + q for vertices, Au for rays
    let images: Vec<Vec<Rational>> = generators
        .iter()
        .map(|g| match &g.direction {
            None => a.mul_vec(&g.base).into_iter().zip(q).map(|(x, y)| x + y).collect(),
            Some(u) => a.mul_vec(u),
        })
        .collect();
    for g in &generators {
        for (h, image) in generators.iter().zip(&images) {
            if !dot(g.vector(), image).is_positive() {
                continue;
            }
            let shape = inst.shape();
            let z1 = DenseTensor::from_entries(shape.clone(), g.solution())?;
            let z2 = DenseTensor::from_entries(shape.clone(), h.solution())?;
            for z in [&z1, &z2] {
                if let Err(v) = verify_solution(inst, z)? {
                    return Err(Error::InternalInconsistency(format!("generator pair point {z}: {v}")));
                }
            }
            let cross = cross_complementarity(inst, &z1, &z2)?;
            if !cross.0.is_positive() {
                return Err(Error::InternalInconsistency(format!(
                    "generator term is positive but the cross value of {z1} and {z2} is {}",
                    cross.0
                )));
            }
            report.verdict = ConvexityVerdict::NonConvex;
            report.pair = Some((z1, z2));
            report.cross = Some(cross);
            return Ok(report);
        }
    }

    let checked = &report.vertices[..report.vertices.len().min(MIDPOINT_VERTICES)];
    let half = rational::frac(1, 2);
    for (i, v) in checked.iter().enumerate() {
        for w in &checked[i + 1..] {
            let mid = v.add(w)?.scale(&half);
            if let Err(violation) = verify_solution(inst, &mid)? {
                return Err(Error::InternalInconsistency(format!(
                    "cross values vanish but midpoint of {v} and {w} fails: {violation}"
                )));
            }
            report.midpoints_checked += 1;
        }
    }
    Ok(report)
}

/// An instance whose solution set is not convex, built from a tensor that is
/// not column sufficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonConvexWitness {
    /// The sufficiency violation `Z` the construction starts from.
    pub z: DenseTensor,
    pub q: DenseTensor,
    /// `Z+`.
    pub x1: Solution,
    /// `Z-`.
    pub x2: Solution,
    /// `(<X1, MX2 + Q>, <X2, MX1 + Q>)`.
    pub cross: (Rational, Rational),
}

impl NonConvexWitness {
    pub fn instance(&self, m: &DenseTensor) -> Result<TlcpInstance> {
        TlcpInstance::new(m.clone(), self.q.clone())
    }
}

/// With `Z` the classifier's sufficiency violation and `Y = MZ`:
/// `Q = Y+ - M Z+`, and both `Z+` and `Z-` solve `TLCP(M, Q)`.
pub fn construct_nonconvex_witness(m: &DenseTensor) -> Result<NonConvexWitness> {
    let decision = is_column_sufficient(m)?;
    let Some(witness) = decision.witness else {
        return Err(Error::NotApplicable("the tensor is column sufficient".into()));
    };
    let z = witness.tensor;
    let y_plus = m.contract(&z)?.positive_part();
    let z_plus = z.positive_part();
    let z_minus = z.negative_part();
    let q = y_plus.sub(&m.contract(&z_plus)?)?;
    let inst = TlcpInstance::new(m.clone(), q.clone())?;
    for x in [&z_plus, &z_minus] {
        if let Err(v) = verify_solution(&inst, x)? {
            return Err(Error::InternalInconsistency(format!("constructed point {x} fails: {v}")));
        }
    }
    let cross = cross_complementarity(&inst, &z_plus, &z_minus)?;
    if !cross.0.is_positive() && !cross.1.is_positive() {
        return Err(Error::InternalInconsistency(format!(
            "constructed solutions {z_plus} and {z_minus} are cross complementary"
        )));
    }
    Ok(NonConvexWitness {
        z,
        x1: Solution { w: inst.residual(&z_plus)?, z: z_plus },
        x2: Solution { w: inst.residual(&z_minus)?, z: z_minus },
        q,
        cross,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Uniqueness {
    Unique(DenseTensor),
    /// Two distinct solutions.
    Multiple(DenseTensor, DenseTensor),
}

/// Whether `TLCP(M, Q)` has exactly one solution for the given `Q > O`
/// (which is then `O`).
pub fn check_uniqueness_positive_q(m: &DenseTensor, q: &DenseTensor) -> Result<Uniqueness> {
    if !q.is_strictly_positive() {
        return Err(Error::QNotStrictlyPositive);
    }
    let inst = TlcpInstance::new(m.clone(), q.clone())?;
    let set = enumerate_solution_set(&inst)?;
    let zero = DenseTensor::zeros(q.shape().clone());
    if set.singleton {
        return Ok(Uniqueness::Unique(set.vertices().swap_remove(0)));
    }
    if let Some(other) = set.vertices().into_iter().find(|v| !v.is_zero()) {
        return Ok(Uniqueness::Multiple(zero, other));
    }
    let piece = set
        .pieces
        .iter()
        .find(|p| !p.rays().is_empty())
        .ok_or_else(|| Error::InternalInconsistency("non-singleton set without a second point".into()))?;
    let other = piece.vertices()[0].add(&piece.rays()[0])?;
    Ok(Uniqueness::Multiple(zero, other))
}

/// Seed for iteration `i` of a run with the given base seed.
pub fn derive_seed(seed: u64, i: u64) -> u64 {
    let mut x = seed ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Tensor in `R^[order, n]` with i.i.d. integer entries in `low..=high`.
pub fn random_tensor(rng: &mut impl Rng, order: usize, n: usize, low: i64, high: i64) -> Result<DenseTensor> {
    let shape = Shape::cubical(order, n)?;
    let entries = (0..shape.len()).map(|_| rational::int(rng.gen_range(low..=high))).collect();
    DenseTensor::from_entries(shape, entries)
}

/// Strictly positive `Q` with integer entries in `1..=high`.
pub fn random_positive_q(rng: &mut impl Rng, m: usize, n: usize, high: i64) -> Result<DenseTensor> {
    random_tensor(rng, m, n, 1, high.max(1))
}

/// Block-symmetric tensor with positive semidefinite flattening, hence
/// column sufficient. Either `B + B^T + cI` with the least `c >= 0` the
/// semidefiniteness test accepts, or a Gram matrix `C^T C` of random rank.
pub fn random_block_symmetric_sufficient(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    low: i64,
    high: i64,
) -> Result<DenseTensor> {
    let size = Shape::cubical(m, n)?.len();
    let s = if rng.gen_bool(0.5) {
        let b = Matrix::from_ints(
            size,
            size,
            &(0..size * size).map(|_| rng.gen_range(low..=high)).collect::<Vec<_>>(),
        );
        let mut s = b.clone();
        for i in 0..size {
            for j in 0..size {
                s.set(i, j, b.get(i, j) + b.get(j, i));
            }
        }
        loop {
            if is_positive_semidefinite(&DenseTensor::unflatten(&s, m, n)?)?.holds {
                break s;
            }
            for i in 0..size {
                let v = s.get(i, i) + rational::int(1);
                s.set(i, i, v);
            }
        }
    } else {
        let rank = rng.gen_range(1..=size);
        let c = Matrix::from_ints(
            rank,
            size,
            &(0..rank * size).map(|_| rng.gen_range(low..=high)).collect::<Vec<_>>(),
        );
        let ct = c.transpose();
        let mut s = Matrix::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                s.set(i, j, dot(ct.row(i), ct.row(j)));
            }
        }
        s
    };
    DenseTensor::unflatten(&s, m, n)
}

/// `Q = W - MZ` for random nonnegative `W` and `Z`, so `Z` is feasible.
pub fn random_feasible_q(rng: &mut impl Rng, m_tensor: &DenseTensor, high: i64) -> Result<DenseTensor> {
    let (m, n) = m_tensor.operator_dims()?;
    let w = random_tensor(rng, m, n, 0, high.max(0))?;
    let z = random_tensor(rng, m, n, 0, high.max(0))?;
    w.sub(&m_tensor.contract(&z)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessParams {
    pub seed: u64,
    pub count: usize,
    /// `Z` has order `m`; tensors have order `2m`.
    pub m: usize,
    pub n: usize,
    pub low: i64,
    pub high: i64,
    /// Random `Q` per tensor for the convexity and uniqueness checks.
    pub q_per_tensor: usize,
}

impl Default for HarnessParams {
    fn default() -> Self {
        HarnessParams { seed: 1, count: 10, m: 2, n: 2, low: -3, high: 3, q_per_tensor: 5 }
    }
}

/// Names of the harness checks, in report order.
pub const HARNESS_CHECKS: [&str; 6] = [
    "classify_consistent",
    "p_iff_cs_and_nd",
    "cs_implies_convex",
    "not_cs_has_nonconvex_witness",
    "cs_nonneg_implies_unique",
    "cs_hereditary",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckTally {
    pub checked: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub iteration: usize,
    pub check: &'static str,
    pub tensor: DenseTensor,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessReport {
    pub params: HarnessParams,
    pub class_counts: BTreeMap<TensorClass, usize>,
    pub checks: BTreeMap<&'static str, CheckTally>,
    pub counterexamples: Vec<Counterexample>,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

struct Recorder<'a> {
    report: &'a mut HarnessReport,
    iteration: usize,
    tensor: &'a DenseTensor,
}

impl Recorder<'_> {
    fn record(&mut self, check: &'static str, outcome: std::result::Result<(), String>) {
        let tally = self.report.checks.get_mut(check).expect("known check");
        tally.checked += 1;
        if let Err(detail) = outcome {
            tally.violations += 1;
            self.report.counterexamples.push(Counterexample {
                iteration: self.iteration,
                check,
                tensor: self.tensor.clone(),
                detail,
            });
        }
    }
}

/// Random tensors checked against the class theorems. Iteration `i` draws
/// from [`derive_seed`]`(seed, i)`, so any iteration can be replayed alone.
pub fn theorem_harness(params: &HarnessParams) -> Result<HarnessReport> {
    crate::check_cap(Shape::cubical(params.m, params.n)?.len())?;
    if params.low > params.high {
        return Err(Error::shape(format!("empty entry range {}..={}", params.low, params.high)));
    }
    let mut report = HarnessReport {
        params: params.clone(),
        class_counts: TensorClass::ALL.iter().map(|&c| (c, 0)).collect(),
        checks: HARNESS_CHECKS.iter().map(|&c| (c, CheckTally::default())).collect(),
        counterexamples: Vec::new(),
    };
    for i in 0..params.count {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, i as u64));
        let m = random_tensor(&mut rng, 2 * params.m, params.n, params.low, params.high)?;
        harness_iteration(&mut report, i, &m, &mut rng, params)?;
    }
    Ok(report)
}

/// Runs every harness check on one tensor.
pub fn harness_iteration(
    report: &mut HarnessReport,
    iteration: usize,
    m: &DenseTensor,
    rng: &mut impl Rng,
    params: &HarnessParams,
) -> Result<()> {
    let mut rec = Recorder { report, iteration, tensor: m };
    let classes = match classify(m) {
        Ok(c) => {
            rec.record("classify_consistent", Ok(()));
            c
        }
        Err(Error::InternalInconsistency(detail)) => {
            rec.record("classify_consistent", Err(detail));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    for (class, &holds) in &classes.verdicts {
        if holds {
            *rec.report.class_counts.get_mut(class).expect("all classes") += 1;
        }
    }
    let cs = classes.holds(TensorClass::ColumnSufficient);
    let p = classes.holds(TensorClass::P);
    let nd = classes.holds(TensorClass::NonDegenerate);
    rec.record(
        "p_iff_cs_and_nd",
        if p == (cs && nd) { Ok(()) } else { Err(format!("P={p} CS={cs} ND={nd}")) },
    );

    let (half, n) = m.operator_dims()?;
    if cs {
        for _ in 0..params.q_per_tensor {
            let q = random_tensor(rng, half, n, params.low, params.high)?;
            let inst = TlcpInstance::new(m.clone(), q.clone())?;
            let outcome = match check_convexity(&inst) {
                Ok(r) if r.verdict.is_convex() => Ok(()),
                Ok(r) => Err(format!("Q = {q}: non-convex with pair {:?}", r.pair)),
                Err(Error::InternalInconsistency(d)) => Err(d),
                Err(e) => return Err(e),
            };
            rec.record("cs_implies_convex", outcome);
        }
        for k in 1..n {
            let sub = m.sequential_principal_subtensor(k)?;
            let outcome = if is_column_sufficient(&sub)?.holds {
                Ok(())
            } else {
                Err(format!("principal subtensor of size {k} is not column sufficient"))
            };
            rec.record("cs_hereditary", outcome);
        }
    } else {
        let outcome = match construct_nonconvex_witness(m) {
            Ok(w) => match check_convexity(&w.instance(m)?) {
                Ok(r) if r.verdict == ConvexityVerdict::NonConvex => Ok(()),
                Ok(r) => Err(format!("witness instance reported {}", r.verdict.name())),
                Err(Error::InternalInconsistency(d)) => Err(d),
                Err(e) => return Err(e),
            },
            Err(Error::InternalInconsistency(d)) => Err(d),
            Err(e) => return Err(e),
        };
        rec.record("not_cs_has_nonconvex_witness", outcome);
    }
    if classes.holds(TensorClass::ColumnSufficientOnNonneg) {
        for _ in 0..params.q_per_tensor {
            let q = random_positive_q(rng, half, n, params.high)?;
            let outcome = match check_uniqueness_positive_q(m, &q)? {
                Uniqueness::Unique(z) if z.is_zero() => Ok(()),
                Uniqueness::Unique(z) => Err(format!("Q = {q}: unique solution {z} is not O")),
                Uniqueness::Multiple(a, b) => Err(format!("Q = {q}: solutions {a} and {b}")),
            };
            rec.record("cs_nonneg_implies_unique", outcome);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, mat2};
    use crate::rational::int;

    fn zero_q() -> DenseTensor {
        DenseTensor::from_ints(&[2, 2], &[0; 4]).unwrap()
    }

    #[test]
    fn cross_values_of_corrected_example() {
        let inst = TlcpInstance::new(fixtures::orthant_sufficient_not_sufficient(), zero_q()).unwrap();
        let c = cross_complementarity(&inst, &mat2([0, 1, 0, 0]), &mat2([0, 0, 1, 0])).unwrap();
        assert_eq!(c, (int(2), int(1)));
        let o = mat2([0, 0, 0, 0]);
        assert_eq!(cross_complementarity(&inst, &mat2([3, 1, 2, 0]), &o).unwrap(), (int(0), int(0)));
    }

    #[test]
    fn convexity_verdicts() {
        let inst = TlcpInstance::new(fixtures::orthant_sufficient_not_sufficient(), zero_q()).unwrap();
        let r = check_convexity(&inst).unwrap();
        assert_eq!(r.verdict, ConvexityVerdict::NonConvex);
        assert_eq!(r.pair, Some((mat2([0, 1, 0, 0]), mat2([0, 0, 1, 0]))));
        assert_eq!(r.cross, Some((int(2), int(1))));

        let ones = DenseTensor::from_ints(&[2, 2], &[1; 4]).unwrap();
        let inst = TlcpInstance::new(fixtures::sufficient_not_psd(), ones).unwrap();
        assert_eq!(check_convexity(&inst).unwrap().verdict, ConvexityVerdict::Singleton);

        let neg = TlcpInstance::new(
            DenseTensor::block_identity(2, 2).unwrap().neg(),
            DenseTensor::from_ints(&[2, 2], &[-1; 4]).unwrap(),
        )
        .unwrap();
        assert_eq!(check_convexity(&neg).unwrap().verdict, ConvexityVerdict::Empty);
    }

    #[test]
    fn zero_tensor_gives_the_orthant() {
        let inst = TlcpInstance::new(
            DenseTensor::zeros(Shape::cubical(2, 2).unwrap()),
            DenseTensor::zeros(Shape::cubical(1, 2).unwrap()),
        )
        .unwrap();
        let r = check_convexity(&inst).unwrap();
        assert_eq!(r.verdict, ConvexityVerdict::Convex);
        assert_eq!(r.vertices.len(), 1);
        assert_eq!(r.rays.len(), 2);
    }

    #[test]
    fn segment_checks_midpoints() {
        // z1 + z2 = 1 on the support {1, 2}
        let m = DenseTensor::unflatten(&Matrix::from_ints(2, 2, &[1, 1, 1, 1]), 1, 2).unwrap();
        let q = DenseTensor::from_ints(&[2], &[-1, -1]).unwrap();
        let r = check_convexity(&TlcpInstance::new(m, q).unwrap()).unwrap();
        assert_eq!(r.verdict, ConvexityVerdict::Convex);
        assert_eq!(r.vertices.len(), 2);
        assert_eq!(r.midpoints_checked, 1);
    }

    #[test]
    fn witness_for_corrected_example() {
        let w = construct_nonconvex_witness(&fixtures::orthant_sufficient_not_sufficient()).unwrap();
        assert!(w.q.is_zero());
        assert_eq!(w.x1.z, mat2([0, 1, 0, 0]));
        assert_eq!(w.x2.z, mat2([0, 0, 1, 0]));
        assert_eq!(w.cross, (int(2), int(1)));
    }

    #[test]
    fn witness_for_matrix_case() {
        let m = DenseTensor::unflatten(&Matrix::from_ints(2, 2, &[0, -1, 0, 0]), 1, 2).unwrap();
        let w = construct_nonconvex_witness(&m).unwrap();
        assert_eq!(w.z.vectorize(), vec![int(1), int(1)]);
        assert_eq!(w.q.vectorize(), vec![int(1), int(0)]);
        assert_eq!(w.x1.z.vectorize(), vec![int(1), int(1)]);
        assert!(w.x2.z.is_zero());
        assert_eq!(w.cross, (int(1), int(0)));
        let id = DenseTensor::block_identity(2, 2).unwrap();
        assert!(matches!(construct_nonconvex_witness(&id), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn uniqueness() {
        let ones = DenseTensor::from_ints(&[2, 2], &[1; 4]).unwrap();
        for m in [
            fixtures::sufficient_not_psd(),
            DenseTensor::block_identity(2, 2).unwrap(),
            DenseTensor::zeros(Shape::cubical(4, 2).unwrap()),
        ] {
            assert_eq!(check_uniqueness_positive_q(&m, &ones).unwrap(), Uniqueness::Unique(mat2([0, 0, 0, 0])));
        }
        let neg = DenseTensor::block_identity(2, 2).unwrap().neg();
        assert!(matches!(check_uniqueness_positive_q(&neg, &ones).unwrap(), Uniqueness::Multiple(..)));
        assert_eq!(
            check_uniqueness_positive_q(&neg, &zero_q()),
            Err(Error::QNotStrictlyPositive)
        );
    }

    #[test]
    fn harness_is_deterministic_and_clean() {
        let params = HarnessParams { seed: 7, count: 8, ..HarnessParams::default() };
        let a = theorem_harness(&params).unwrap();
        let b = theorem_harness(&params).unwrap();
        assert_eq!(a, b);
        assert!(a.passed(), "{:?}", a.counterexamples);
        assert_eq!(a.checks["classify_consistent"].checked, 8);
    }

    #[test]
    fn generated_sufficient_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let m = random_block_symmetric_sufficient(&mut rng, 2, 2, -2, 2).unwrap();
            assert!(m.is_block_symmetric().unwrap());
            assert!(is_column_sufficient(&m).unwrap().holds);
            let q = random_feasible_q(&mut rng, &m, 3).unwrap();
            let inst = TlcpInstance::new(m, q).unwrap();
            assert!(crate::solver::is_feasible(&inst).unwrap().is_some());
        }
    }
}
