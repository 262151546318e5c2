//! Exact decision procedures for the structured-tensor classes.
//!
//! All deciders work on `A = flatten(M)`. The classes are defined by sign
//! conditions on `z o (Az)` or on `Az` over a support, and those conditions
//! are positively homogeneous (degree 2 in `z` for the products, degree 1 for
//! `Az`). So an open condition such as `z_i != 0` or `(Az)_k < 0` can be
//! normalized to `sigma_i z_i >= 1` or `sigma_k (Az)_k <= -1`, and each class
//! reduces to a finite family of LP feasibility problems indexed by sign
//! patterns or supports.
//!
//! Patterns are scanned in a fixed order (see [`SignPattern::all`]) and the
//! first feasible one provides the witness, with `sum |z_i|` minimized over
//! that pattern. Witnesses are therefore deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::check_cap;
use crate::error::{Error, Result};
use crate::linalg::{principal_minor, solve_linear_system, LinearSystemSolution, Matrix};
use crate::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::rational::{self, Rational};
use crate::tensor::{DenseTensor, MultiIndex, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TensorClass {
    ColumnSufficient,
    ColumnSufficientOnNonneg,
    P,
    NonDegenerate,
    SemiPositive,
    StrictlySemiPositive,
    Copositive,
    StrictlyCopositive,
    PositiveSemidefinite,
}

impl TensorClass {
    pub const ALL: [TensorClass; 9] = [
        TensorClass::ColumnSufficient,
        TensorClass::ColumnSufficientOnNonneg,
        TensorClass::P,
        TensorClass::NonDegenerate,
        TensorClass::SemiPositive,
        TensorClass::StrictlySemiPositive,
        TensorClass::Copositive,
        TensorClass::StrictlyCopositive,
        TensorClass::PositiveSemidefinite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TensorClass::ColumnSufficient => "ColumnSufficient",
            TensorClass::ColumnSufficientOnNonneg => "ColumnSufficientOnNonneg",
            TensorClass::P => "P",
            TensorClass::NonDegenerate => "NonDegenerate",
            TensorClass::SemiPositive => "SemiPositive",
            TensorClass::StrictlySemiPositive => "StrictlySemiPositive",
            TensorClass::Copositive => "Copositive",
            TensorClass::StrictlyCopositive => "StrictlyCopositive",
            TensorClass::PositiveSemidefinite => "PositiveSemidefinite",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        TensorClass::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for TensorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Vector in `{-1, 0, +1}^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(signs.iter().all(|s| (-1..=1).contains(s)), "signs must be -1, 0 or 1");
        SignPattern(signs)
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != 0).collect()
    }

    /// Every nonzero pattern of length `n`. Each coordinate cycles through
    /// `0, +1, -1` and the first coordinate is the most significant, so the
    /// scan starts at `(0, ..., 0, +1)`.
    pub fn all(n: usize) -> impl Iterator<Item = SignPattern> {
        const DIGIT: [i8; 3] = [0, 1, -1];
        let total = 3usize.pow(n as u32);
        (1..total).map(move |mut code| {
            let mut s = vec![0i8; n];
            for slot in s.iter_mut().rev() {
                *slot = DIGIT[code % 3];
                code /= 3;
            }
            SignPattern(s)
        })
    }

    /// Every nonzero pattern in `{0, 1}^n`, first coordinate most significant.
    pub fn nonnegative(n: usize) -> impl Iterator<Item = SignPattern> {
        (1..1usize << n).map(move |code| {
            SignPattern((0..n).map(|i| ((code >> (n - 1 - i)) & 1) as i8).collect())
        })
    }
}

/// Evidence that a tensor is outside a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub tensor: DenseTensor,
    /// Index where a strict inequality occurs, when the class has one.
    pub index: Option<MultiIndex>,
    /// Quadratic form value `<Z, MZ>` for the (co)positivity classes.
    pub value: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Decision {
    fn yes() -> Self {
        Decision { holds: true, witness: None }
    }

    fn no(witness: Witness) -> Self {
        Decision { holds: false, witness: Some(witness) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub verdicts: BTreeMap<TensorClass, bool>,
    pub witnesses: BTreeMap<TensorClass, Witness>,
}

impl ClassificationReport {
    pub fn holds(&self, class: TensorClass) -> bool {
        self.verdicts[&class]
    }

    /// Implications that hold for every tensor; returns the first violated one.
    pub fn implication_violation(&self) -> Option<&'static str> {
        use TensorClass::*;
        let v = |c| self.verdicts[&c];
        let rules: [(&'static str, bool); 9] = [
            ("PositiveSemidefinite => ColumnSufficient", !v(PositiveSemidefinite) || v(ColumnSufficient)),
            ("P => ColumnSufficient", !v(P) || v(ColumnSufficient)),
            ("Copositive => ColumnSufficientOnNonneg", !v(Copositive) || v(ColumnSufficientOnNonneg)),
            ("ColumnSufficientOnNonneg => SemiPositive", !v(ColumnSufficientOnNonneg) || v(SemiPositive)),
            ("P <=> ColumnSufficient and NonDegenerate", v(P) == (v(ColumnSufficient) && v(NonDegenerate))),
            ("StrictlyCopositive => Copositive", !v(StrictlyCopositive) || v(Copositive)),
            ("StrictlySemiPositive => SemiPositive", !v(StrictlySemiPositive) || v(SemiPositive)),
            ("ColumnSufficient => ColumnSufficientOnNonneg", !v(ColumnSufficient) || v(ColumnSufficientOnNonneg)),
            ("PositiveSemidefinite => Copositive", !v(PositiveSemidefinite) || v(Copositive)),
        ];
        rules.into_iter().find(|(_, ok)| !ok).map(|(name, _)| name)
    }
}

/// The flattened operator together with the shape it acts on.
struct Operator {
    a: Matrix,
    shape: Shape,
}

impl Operator {
    fn new(m: &DenseTensor) -> Result<Self> {
        let (half, n) = m.operator_dims()?;
        let shape = Shape::cubical(half, n)?;
        check_cap(shape.len())?;
        Ok(Operator { a: m.flatten()?, shape })
    }

    fn size(&self) -> usize {
        self.shape.len()
    }

    fn tensor(&self, z: Vec<Rational>) -> DenseTensor {
        DenseTensor::from_entries(self.shape.clone(), z).expect("length matches shape")
    }

    /// Row `i` of `A` restricted to the columns in `support`, with column `j`
    /// multiplied by `sign_j`: the coefficients of `(Az)_i` in `y = sigma o z`.
    fn signed_row(&self, i: usize, support: &[usize], signs: &[i8]) -> Vec<Rational> {
        support
            .iter()
            .map(|&j| {
                let v = self.a.get(i, j);
                if signs[j] < 0 {
                    -v
                } else {
                    v.clone()
                }
            })
            .collect()
    }

    /// LP over `y = sigma_S o z_S >= 1`, minimizing `sum y`.
    fn pattern_lp(&self, support: &[usize]) -> LinearProgram {
        let mut lp = LinearProgram::new(support.len()).minimize(vec![Rational::one(); support.len()]);
        for j in 0..support.len() {
            lp.lower_bound(j, Rational::one());
        }
        lp
    }

    fn lift(&self, pattern: &SignPattern, support: &[usize], y: &[Rational]) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); self.size()];
        for (&j, v) in support.iter().zip(y) {
            z[j] = if pattern.0[j] < 0 { -v.clone() } else { v.clone() };
        }
        z
    }
}

fn scale_row(row: Vec<Rational>, sign: i8) -> Vec<Rational> {
    if sign < 0 {
        row.into_iter().map(|v| -v).collect()
    } else {
        row
    }
}

/// Shared engine for the two column-sufficiency deciders: finds `z` with
/// `z o Az <= 0` and some component `< 0`, over the given patterns.
fn sufficiency_violation(
    op: &Operator,
    patterns: impl Iterator<Item = SignPattern>,
) -> Option<Witness> {
    for pattern in patterns {
        let support = pattern.support();
        let rows: Vec<Vec<Rational>> = support
            .iter()
            .map(|&i| scale_row(op.signed_row(i, &support, &pattern.0), pattern.0[i]))
            .collect();
        // screen: minimize the sum of the (nonpositive) products' linear parts
        let mut screen = op.pattern_lp(&support);
        let mut total = vec![Rational::zero(); support.len()];
        for row in &rows {
            screen.le(row.clone(), Rational::zero());
            for (t, r) in total.iter_mut().zip(row) {
                *t += r;
            }
        }
        let screen = screen.minimize(total);
        match lp_solve(&screen) {
            LpOutcome::Infeasible => continue,
            LpOutcome::Optimal { value, .. } if !value.is_negative() => continue,
            _ => {}
        }
        for (pos, &k) in support.iter().enumerate() {
            let mut lp = op.pattern_lp(&support);
            for (q, row) in rows.iter().enumerate() {
                let rhs = if q == pos { -Rational::one() } else { Rational::zero() };
                lp.le(row.clone(), rhs);
            }
            if let LpOutcome::Optimal { x, .. } = lp_solve(&lp) {
                return Some(Witness {
                    tensor: op.tensor(op.lift(&pattern, &support, &x)),
                    index: Some(op.shape.index_of(k)),
                    value: None,
                });
            }
        }
        unreachable!("screen found a strict component, so some index LP is feasible");
    }
    None
}

/// `z o (MZ) <= O` forces `z o (MZ) = O`.
pub fn is_column_sufficient(m: &DenseTensor) -> Result<Decision> {
    let op = Operator::new(m)?;
    Ok(match sufficiency_violation(&op, SignPattern::all(op.size())) {
        None => Decision::yes(),
        Some(w) => Decision::no(w),
    })
}

/// Column sufficiency with the quantifier restricted to `Z >= O`.
pub fn is_column_sufficient_on_nonneg(m: &DenseTensor) -> Result<Decision> {
    let op = Operator::new(m)?;
    Ok(match sufficiency_violation(&op, SignPattern::nonnegative(op.size())) {
        None => Decision::yes(),
        Some(w) => Decision::no(w),
    })
}

/// Every nonzero `Z` has an index with `z (MZ) > 0`.
pub fn is_p(m: &DenseTensor) -> Result<Decision> {
    let op = Operator::new(m)?;
    for pattern in SignPattern::all(op.size()) {
        let support = pattern.support();
        let mut lp = op.pattern_lp(&support);
        for &i in &support {
            lp.le(scale_row(op.signed_row(i, &support, &pattern.0), pattern.0[i]), Rational::zero());
        }
        if let LpOutcome::Optimal { x, .. } = lp_solve(&lp) {
            let z = op.tensor(op.lift(&pattern, &support, &x));
            return Ok(Decision::no(Witness { tensor: z, index: None, value: None }));
        }
    }
    Ok(Decision::yes())
}

/// No nonzero `Z` has `z o (MZ) = O`.
pub fn is_nondegenerate(m: &DenseTensor) -> Result<Decision> {
    let op = Operator::new(m)?;
    for pattern in SignPattern::all(op.size()) {
        let support = pattern.support();
        let mut lp = op.pattern_lp(&support);
        for &i in &support {
            lp.equal(op.signed_row(i, &support, &pattern.0), Rational::zero());
        }
        if let LpOutcome::Optimal { x, .. } = lp_solve(&lp) {
            let z = op.tensor(op.lift(&pattern, &support, &x));
            return Ok(Decision::no(Witness { tensor: z, index: None, value: None }));
        }
    }
    Ok(Decision::yes())
}

fn semi_positive_impl(m: &DenseTensor, strict: bool) -> Result<Decision> {
    let op = Operator::new(m)?;
    let bound = if strict { Rational::zero() } else { -Rational::one() };
    for pattern in SignPattern::nonnegative(op.size()) {
        let support = pattern.support();
        let mut lp = op.pattern_lp(&support);
        for &i in &support {
            lp.le(op.signed_row(i, &support, &pattern.0), bound.clone());
        }
        if let LpOutcome::Optimal { x, .. } = lp_solve(&lp) {
            let z = op.tensor(op.lift(&pattern, &support, &x));
            return Ok(Decision::no(Witness { tensor: z, index: None, value: None }));
        }
    }
    Ok(Decision::yes())
}

/// Every nonzero `Z >= O` has an index with `z > 0` and `(MZ) >= 0`.
pub fn is_semi_positive(m: &DenseTensor) -> Result<Decision> {
    semi_positive_impl(m, false)
}

/// Every nonzero `Z >= O` has an index with `z > 0` and `(MZ) > 0`.
pub fn is_strictly_semi_positive(m: &DenseTensor) -> Result<Decision> {
    semi_positive_impl(m, true)
}

/// Minimum of `z^T S z` over the standard simplex, with a minimizer.
///
/// A minimizer lies in the relative interior of some face `F`, where the KKT
/// conditions read `2 S_FF z_F = lambda 1`, `1^T z_F = 1`. On that affine set
/// the form is constant and equal to `lambda / 2`, so the minimum is the
/// smallest such value over faces whose stationary set meets `z_F >= 0`.
fn simplex_minimum(s: &Matrix) -> (Rational, Vec<Rational>) {
    let n = s.rows();
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for face in SignPattern::nonnegative(n) {
        let f = face.support();
        let k = f.len();
        // unknowns (z_F, lambda)
        let mut sys = Matrix::zeros(0, k + 1);
        let mut rhs = Vec::with_capacity(k + 1);
        for &i in &f {
            let mut row: Vec<Rational> = f.iter().map(|&j| s.get(i, j) * rational::int(2)).collect();
            row.push(-Rational::one());
            sys.push_row(row).expect("width");
            rhs.push(Rational::zero());
        }
        let mut ones = vec![Rational::one(); k];
        ones.push(Rational::zero());
        sys.push_row(ones).expect("width");
        rhs.push(Rational::one());
        if solve_linear_system(&sys, &rhs) == LinearSystemSolution::Inconsistent {
            continue;
        }
        let mut lp = LinearProgram::new(k + 1);
        for r in 0..sys.rows() {
            lp.equal(sys.row(r).to_vec(), rhs[r].clone());
        }
        for j in 0..k {
            lp.lower_bound(j, Rational::zero());
        }
        let Some(point) = lp_solve(&lp).point().map(<[Rational]>::to_vec) else {
            continue;
        };
        let value = &point[k] / rational::int(2);
        let mut z = vec![Rational::zero(); n];
        for (&j, v) in f.iter().zip(&point) {
            z[j] = v.clone();
        }
        debug_assert_eq!(s.quadratic_form(&z), value);
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            best = Some((value, z));
        }
    }
    best.expect("singleton faces are always stationary")
}

fn copositivity(m: &DenseTensor) -> Result<(Operator, Rational, Vec<Rational>)> {
    let op = Operator::new(m)?;
    let (value, z) = simplex_minimum(&op.a.symmetric_part());
    Ok((op, value, z))
}

/// `<Z, MZ> >= 0` for every `Z >= O`.
pub fn is_copositive(m: &DenseTensor) -> Result<Decision> {
    let (op, value, z) = copositivity(m)?;
    Ok(if value.is_negative() {
        Decision::no(Witness { tensor: op.tensor(z), index: None, value: Some(value) })
    } else {
        Decision::yes()
    })
}

/// `<Z, MZ> > 0` for every nonzero `Z >= O`.
pub fn is_strictly_copositive(m: &DenseTensor) -> Result<Decision> {
    let (op, value, z) = copositivity(m)?;
    Ok(if value.is_positive() {
        Decision::yes()
    } else {
        Decision::no(Witness { tensor: op.tensor(z), index: None, value: Some(value) })
    })
}

/// A direction with `z^T S z < 0` for symmetric `S`, found by symmetric
/// Gaussian elimination while tracking the congruence transform.
fn negative_direction(s: &Matrix) -> Option<Vec<Rational>> {
    let n = s.rows();
    let mut w = s.clone();
    // columns of the transform, stored as rows
    let mut basis: Vec<Vec<Rational>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for k in 0..n {
        let d = w.get(k, k).clone();
        if d.is_negative() {
            return Some(basis[k].clone());
        }
        if d.is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !w.get(k, j).is_zero()) {
                // (t e_k + e_j)^T W (t e_k + e_j) = 2 t W_kj + W_jj = -1
                let t = -(w.get(j, j) + Rational::one()) / (w.get(k, j) * rational::int(2));
                return Some(
                    basis[k].iter().zip(&basis[j]).map(|(bk, bj)| &t * bk + bj).collect(),
                );
            }
            continue;
        }
        for j in k + 1..n {
            let f = w.get(k, j) / &d;
            if f.is_zero() {
                continue;
            }
            for l in k + 1..n {
                let v = w.get(j, l) - &f * w.get(k, l);
                w.set(j, l, v);
            }
            let col_k = basis[k].clone();
            for (b, c) in basis[j].iter_mut().zip(&col_k) {
                *b -= &f * c;
            }
        }
        for j in k + 1..n {
            w.set(j, k, Rational::zero());
            w.set(k, j, Rational::zero());
        }
    }
    None
}

/// `<Z, MZ> >= 0` for every `Z`. Decided by the principal minors of the
/// symmetric part of `A`; the witness comes from an independent elimination.
pub fn is_positive_semidefinite(m: &DenseTensor) -> Result<Decision> {
    let op = Operator::new(m)?;
    let s = op.a.symmetric_part();
    let mut minors_ok = true;
    for set in SignPattern::nonnegative(op.size()) {
        if principal_minor(&s, &set.support())?.is_negative() {
            minors_ok = false;
            break;
        }
    }
    match (minors_ok, negative_direction(&s)) {
        (true, None) => Ok(Decision::yes()),
        (false, Some(z)) => {
            let value = s.quadratic_form(&z);
            Ok(Decision::no(Witness { tensor: op.tensor(z), index: None, value: Some(value) }))
        }
        (ok, _) => Err(Error::InternalInconsistency(format!(
            "principal minors say PSD = {ok} but elimination disagrees"
        ))),
    }
}

pub fn decide(class: TensorClass, m: &DenseTensor) -> Result<Decision> {
    match class {
        TensorClass::ColumnSufficient => is_column_sufficient(m),
        TensorClass::ColumnSufficientOnNonneg => is_column_sufficient_on_nonneg(m),
        TensorClass::P => is_p(m),
        TensorClass::NonDegenerate => is_nondegenerate(m),
        TensorClass::SemiPositive => is_semi_positive(m),
        TensorClass::StrictlySemiPositive => is_strictly_semi_positive(m),
        TensorClass::Copositive => is_copositive(m),
        TensorClass::StrictlyCopositive => is_strictly_copositive(m),
        TensorClass::PositiveSemidefinite => is_positive_semidefinite(m),
    }
}

/// Runs every decider and checks the implications between classes.
pub fn classify(m: &DenseTensor) -> Result<ClassificationReport> {
    Operator::new(m)?;
    let mut verdicts = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for class in TensorClass::ALL {
        let d = decide(class, m)?;
        verdicts.insert(class, d.holds);
        if let Some(w) = d.witness {
            if !verify_witness(class, m, &w.tensor)? {
                return Err(Error::InternalInconsistency(format!(
                    "{class} witness {} does not re-verify",
                    w.tensor
                )));
            }
            witnesses.insert(class, w);
        }
    }
    let report = ClassificationReport { verdicts, witnesses };
    if let Some(rule) = report.implication_violation() {
        return Err(Error::InternalInconsistency(format!("implication violated: {rule}")));
    }
    Ok(report)
}

/// Checks a rejection witness against the class definition by direct
/// contraction, independently of the flattened deciders.
pub fn verify_witness(class: TensorClass, m: &DenseTensor, z: &DenseTensor) -> Result<bool> {
    let mz = m.contract(z)?;
    let products = z.hadamard(&mz)?;
    let p = products.entries();
    let all_nonpos = p.iter().all(|v| !v.is_positive());
    let some_neg = p.iter().any(Signed::is_negative);
    let form = z.inner_product(&mz)?;
    let support_signs = || {
        z.entries()
            .iter()
            .zip(mz.entries())
            .filter(|(zi, _)| zi.is_positive())
            .map(|(_, w)| w.clone())
            .collect::<Vec<_>>()
    };
    Ok(match class {
        TensorClass::ColumnSufficient => all_nonpos && some_neg,
        TensorClass::ColumnSufficientOnNonneg => z.is_nonnegative() && all_nonpos && some_neg,
        TensorClass::P => !z.is_zero() && all_nonpos,
        TensorClass::NonDegenerate => !z.is_zero() && p.iter().all(Zero::is_zero),
        TensorClass::SemiPositive => {
            z.is_nonnegative() && !z.is_zero() && support_signs().iter().all(Signed::is_negative)
        }
        TensorClass::StrictlySemiPositive => {
            z.is_nonnegative() && !z.is_zero() && support_signs().iter().all(|w| !w.is_positive())
        }
        TensorClass::Copositive => z.is_nonnegative() && form.is_negative(),
        TensorClass::StrictlyCopositive => z.is_nonnegative() && !z.is_zero() && !form.is_positive(),
        TensorClass::PositiveSemidefinite => form.is_negative(),
    })
}

/// `z o (MZ)` as a flat vector.
pub fn products(m: &DenseTensor, z: &DenseTensor) -> Result<Vec<Rational>> {
    Ok(z.hadamard(&m.contract(z)?)?.vectorize())
}
