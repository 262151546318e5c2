//! Acceptance criteria 1 to 8, run in order with one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the lines are printed even
//! when the test harness would capture output:
//! `cargo test -p tensorlcp-core --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tensorlcp::analysis::{
    derive_seed, random_block_symmetric_sufficient, random_feasible_q, random_positive_q, random_tensor,
};
use tensorlcp::classify::{decide, verify_witness};
use tensorlcp::fixtures::{self, mat2};
use tensorlcp::rational::{frac, int};
use tensorlcp::solver::{
    enumerate_solution_set, is_feasible, lemke_solve, solve_via_kkt_chain, verify_kkt, verify_solution,
    KktCertificate,
};
use tensorlcp::{
    check_convexity, check_uniqueness_positive_q, construct_nonconvex_witness, cross_complementarity, ConvexityVerdict,
    DenseTensor, LemkeOutcome, Rational, Shape, TensorClass, TlcpInstance, Uniqueness,
};

const SEED: u64 = 20_240_607;
const POPULATION: usize = 200;
const Q_PER_TENSOR: usize = 5;

type Verdict = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Tensors and the shared random population, accumulated across criteria.
#[derive(Default)]
struct State {
    population: Vec<DenseTensor>,
    verdicts: Vec<BTreeMap<TensorClass, bool>>,
    touched: Vec<DenseTensor>,
}

fn rng_for(stream: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(SEED ^ stream, i as u64))
}

fn products(m: &DenseTensor, z: &DenseTensor) -> Vec<Rational> {
    z.hadamard(&m.contract(z).unwrap()).unwrap().vectorize()
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn decide_all(m: &DenseTensor) -> Result<BTreeMap<TensorClass, bool>, String> {
    TensorClass::ALL.into_iter().map(|c| Ok((c, ok(decide(c, m))?.holds))).collect()
}

fn example(name: &str, limit: Duration, check: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let detail = check().map_err(|e| format!("({name}) {e}"))?;
    let elapsed = start.elapsed();
    ensure!(elapsed < limit, "({name}) took {elapsed:?}");
    Ok(format!("({name}) {detail} in {elapsed:.2?}"))
}

fn criterion_1(state: &mut State) -> Verdict {
    let limit = Duration::from_secs(1);
    let mut lines = Vec::new();

    let m = fixtures::orthant_sufficient_not_sufficient();
    state.touched.push(m.clone());
    lines.push(example("a", limit, || {
        ensure!(ok(decide(TensorClass::ColumnSufficientOnNonneg, &m))?.holds, "not sufficient on the orthant");
        let d = ok(decide(TensorClass::ColumnSufficient, &m))?;
        ensure!(!d.holds, "reported column sufficient");
        let z = d.witness.ok_or("no witness")?.tensor;
        let p = products(&m, &z);
        ensure!(p == ints(&[0, -2, -1, 0]), "witness {z} has products {p:?}");
        Ok(format!("CS false, witness {z}, products (0,-2,-1,0)"))
    })?);

    let m = fixtures::sufficient_not_psd();
    state.touched.push(m.clone());
    lines.push(example("b", limit, || {
        ensure!(ok(decide(TensorClass::ColumnSufficient, &m))?.holds, "not column sufficient");
        let d = ok(decide(TensorClass::PositiveSemidefinite, &m))?;
        ensure!(!d.holds, "reported semidefinite");
        let z = d.witness.ok_or("no witness")?.tensor;
        let value = ok(z.inner_product(&m.contract(&z).unwrap()))?;
        ensure!(value == int(-1), "witness {z} has <Z,MZ> = {value}");
        Ok(format!("PSD false, <Z,MZ> = -1 at {z}"))
    })?);

    let m = fixtures::orthant_sufficient_not_copositive();
    state.touched.push(m.clone());
    lines.push(example("c", limit, || {
        ensure!(ok(decide(TensorClass::ColumnSufficientOnNonneg, &m))?.holds, "not sufficient on the orthant");
        ensure!(!ok(decide(TensorClass::Copositive, &m))?.holds, "reported copositive");
        let ones = mat2([1, 1, 1, 1]);
        let value = ok(ones.inner_product(&m.contract(&ones).unwrap()))?;
        ensure!(value == int(-7), "all-ones gives {value}");
        ensure!(ok(verify_witness(TensorClass::Copositive, &m, &ones))?, "all-ones does not refute copositivity");
        Ok("COP false, all-ones <Z,MZ> = -7".into())
    })?);

    let m = fixtures::sufficient_not_p();
    state.touched.push(m.clone());
    lines.push(example("d", limit, || {
        ensure!(ok(decide(TensorClass::ColumnSufficient, &m))?.holds, "not column sufficient");
        ensure!(!ok(decide(TensorClass::P, &m))?.holds, "reported P");
        let z = mat2([2, 0, 0, 0]);
        ensure!(ok(verify_witness(TensorClass::P, &m, &z))?, "{z} does not refute P");
        ensure!(common::refutes(TensorClass::P, &m, &z), "{z} fails the grid predicate");
        Ok(format!("P false, witness {z} verified"))
    })?);

    let m = fixtures::nondegenerate_not_p();
    state.touched.push(m.clone());
    lines.push(example("e", limit, || {
        ensure!(ok(decide(TensorClass::NonDegenerate, &m))?.holds, "reported degenerate");
        ensure!(!ok(decide(TensorClass::P, &m))?.holds, "reported P");
        let ones = mat2([1, 1, 1, 1]);
        let mz = ok(m.contract(&ones))?;
        ensure!(mz == mat2([0, 0, -1, -1]), "all-ones gives MZ = {mz}");
        ensure!(ok(verify_witness(TensorClass::P, &m, &ones))?, "all-ones does not refute P");
        Ok("ND true, P false, all-ones MZ = [[0,0],[-1,-1]]".into())
    })?);
    Ok(lines.join("; "))
}

fn criterion_2(state: &mut State) -> Verdict {
    let mut count = 0;
    for i in 0..120 {
        let mut rng = rng_for(2, i);
        let m_half = rng.gen_range(1..=2usize);
        let n = rng.gen_range(2..=3usize);
        let m = fractional_tensor(&mut rng, 2 * m_half, n);
        let z = fractional_tensor(&mut rng, m_half, n);
        let lhs = ok(m.flatten())?.mul_vec(&z.vectorize());
        let rhs = ok(m.contract(&z))?.vectorize();
        ensure!(lhs == rhs, "mismatch for m={m_half}, n={n} at sample {i}");
        if Shape::cubical(m_half, n).unwrap().len() <= 4 {
            state.touched.push(m);
        }
        count += 1;
    }
    Ok(format!("{count} random (M, Z) pairs agree exactly"))
}

fn fractional_tensor(rng: &mut ChaCha8Rng, order: usize, n: usize) -> DenseTensor {
    let shape = Shape::cubical(order, n).unwrap();
    let entries = (0..shape.len()).map(|_| frac(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
    DenseTensor::from_entries(shape, entries).unwrap()
}

fn criterion_3(state: &mut State) -> Verdict {
    let mut violations = Vec::new();
    for i in 0..POPULATION {
        let m = ok(random_tensor(&mut rng_for(3, i), 4, 2, -3, 3))?;
        let v = decide_all(&m)?;
        let (p, cs, nd) = (v[&TensorClass::P], v[&TensorClass::ColumnSufficient], v[&TensorClass::NonDegenerate]);
        if p != (cs && nd) {
            violations.push(format!("#{i}: P={p} CS={cs} ND={nd}"));
        }
        state.population.push(m);
        state.verdicts.push(v);
    }
    state.touched.extend(state.population.iter().cloned());
    ensure!(violations.is_empty(), "violations: {}", violations.join(", "));
    let count = |c| state.verdicts.iter().filter(|v| v[&c]).count();
    Ok(format!(
        "{POPULATION} tensors, 0 violations (P {}, CS {}, ND {})",
        count(TensorClass::P),
        count(TensorClass::ColumnSufficient),
        count(TensorClass::NonDegenerate)
    ))
}

fn criterion_4(state: &mut State) -> Verdict {
    let w = ok(construct_nonconvex_witness(&fixtures::orthant_sufficient_not_sufficient()))?;
    ensure!(w.q.is_zero(), "worked case Q = {}", w.q);
    ensure!(w.x1.z == mat2([0, 1, 0, 0]) && w.x2.z == mat2([0, 0, 1, 0]), "worked case X1 = {}, X2 = {}", w.x1.z, w.x2.z);
    ensure!(w.cross == (int(2), int(1)), "worked case cross values {:?}", w.cross);

    let (mut convex_checks, mut witnesses) = (0, 0);
    for (i, (m, v)) in state.population.iter().zip(&state.verdicts).enumerate() {
        if v[&TensorClass::ColumnSufficient] {
            let mut rng = rng_for(4, i);
            for _ in 0..Q_PER_TENSOR {
                let q = ok(random_tensor(&mut rng, 2, 2, -3, 3))?;
                let inst = ok(TlcpInstance::new(m.clone(), q.clone()))?;
                let r = ok(check_convexity(&inst))?;
                ensure!(r.verdict.is_convex(), "#{i} is column sufficient but Q = {q} gives a non-convex set");
                convex_checks += 1;
            }
        } else {
            let w = ok(construct_nonconvex_witness(m)).map_err(|e| format!("#{i}: {e}"))?;
            let inst = ok(w.instance(m))?;
            for x in [&w.x1.z, &w.x2.z] {
                ensure!(ok(verify_solution(&inst, x))?.is_ok(), "#{i}: {x} does not solve");
            }
            let (a, b) = ok(cross_complementarity(&inst, &w.x1.z, &w.x2.z))?;
            ensure!(a.is_positive() || b.is_positive(), "#{i}: cross values ({a}, {b})");
            let r = ok(check_convexity(&inst))?;
            ensure!(r.verdict == ConvexityVerdict::NonConvex, "#{i}: witness instance reported {}", r.verdict.name());
            witnesses += 1;
        }
    }
    Ok(format!(
        "worked case Q = O, cross (2,1); {convex_checks} convex checks on sufficient tensors; {witnesses} verified non-convex witnesses"
    ))
}

fn criterion_5(state: &mut State) -> Verdict {
    let mut checks = 0;
    for (i, (m, v)) in state.population.iter().zip(&state.verdicts).enumerate() {
        if !v[&TensorClass::ColumnSufficientOnNonneg] {
            continue;
        }
        let mut rng = rng_for(5, i);
        for _ in 0..Q_PER_TENSOR {
            let q = ok(random_positive_q(&mut rng, 2, 2, 4))?;
            let inst = ok(TlcpInstance::new(m.clone(), q.clone()))?;
            let set = ok(enumerate_solution_set(&inst))?;
            let vertices = set.vertices();
            ensure!(
                set.singleton && vertices.len() == 1 && vertices[0].is_zero(),
                "#{i} with Q = {q}: SOL is not {{O}}"
            );
            ensure!(
                matches!(ok(check_uniqueness_positive_q(m, &q))?, Uniqueness::Unique(ref z) if z.is_zero()),
                "#{i}: uniqueness check disagrees"
            );
            checks += 1;
        }
    }
    Ok(format!("{checks} instances, all with SOL = {{O}}"))
}

fn criterion_6(state: &mut State) -> Verdict {
    let mut certificates = 0;
    let target = 50;
    for i in 0..target {
        let mut rng = rng_for(6, i);
        let m = ok(random_block_symmetric_sufficient(&mut rng, 2, 2, -2, 2))?;
        ensure!(ok(m.is_block_symmetric())?, "#{i} not block symmetric");
        ensure!(ok(decide(TensorClass::ColumnSufficient, &m))?.holds, "#{i} not column sufficient");
        ensure!(common::is_column_sufficient_matrix(&ok(m.flatten())?, false), "#{i} fails the matrix oracle");
        let q = ok(random_feasible_q(&mut rng, &m, 3))?;
        let inst = ok(TlcpInstance::new(m.clone(), q))?;
        ensure!(ok(is_feasible(&inst))?.is_some(), "#{i} infeasible");
        let set = ok(enumerate_solution_set(&inst))?;
        ensure!(!set.empty, "#{i}: feasible but no solution");
        for z in set.vertices() {
            let cert = KktCertificate { z_star: z.clone(), u_star: z.clone() };
            let report = ok(verify_kkt(&inst, &cert))?;
            ensure!(report.holds(), "#{i}: certificate fails {:?}", report.failed());
            let s = ok(solve_via_kkt_chain(&inst, &cert))?;
            ensure!(s.z == z, "#{i}: chain returned a different point");
            certificates += 1;
        }
        state.touched.push(m);
    }
    Ok(format!("{target} instances solvable, {certificates} certificates (Z*, U* = Z*) verified"))
}

fn criterion_7(_state: &mut State) -> Verdict {
    let (mut solved, mut rays, mut attempts) = (0, 0, 0);
    while solved < 100 {
        ensure!(attempts < 5000, "only {solved} Lemke solutions in {attempts} attempts");
        let mut rng = rng_for(7, attempts);
        attempts += 1;
        let m = if rng.gen_bool(0.5) {
            ok(random_tensor(&mut rng, 4, 2, -3, 3))?
        } else {
            ok(random_tensor(&mut rng, 2, 4, -3, 3))?
        };
        let (half, n) = ok(m.operator_dims())?;
        let q = ok(random_tensor(&mut rng, half, n, -4, 4))?;
        let inst = ok(TlcpInstance::new(m, q))?;
        match ok(lemke_solve(&inst))? {
            LemkeOutcome::Solution { solution, .. } => {
                let set = ok(enumerate_solution_set(&inst))?;
                ensure!(set.contains(&inst, &solution.z), "attempt {attempts}: {} not enumerated", solution.z);
                solved += 1;
            }
            LemkeOutcome::RayTermination(_) => rays += 1,
        }
    }
    for i in 0..100 {
        let q = ok(random_tensor(&mut rng_for(70, i), 2, 2, -5, 5))?;
        let inst = ok(TlcpInstance::new(DenseTensor::block_identity(2, 2).unwrap(), q.clone()))?;
        let LemkeOutcome::Solution { solution, .. } = ok(lemke_solve(&inst))? else {
            return Err(format!("identity instance Q = {q} ended on a ray"));
        };
        ensure!(solution.z == q.neg().positive_part(), "identity instance Q = {q} gave {}", solution.z);
    }
    Ok(format!("{solved} Lemke solutions enumerated ({rays} ray terminations skipped); 100 identity instances exact"))
}

fn criterion_8(state: &mut State) -> Verdict {
    use TensorClass::*;
    let rules: [(&str, TensorClass, TensorClass); 4] = [
        ("PSD => CS", PositiveSemidefinite, ColumnSufficient),
        ("P => CS", P, ColumnSufficient),
        ("COP => CS on orthant", Copositive, ColumnSufficientOnNonneg),
        ("CS on orthant => SP", ColumnSufficientOnNonneg, SemiPositive),
    ];
    let mut violations = Vec::new();
    let mut heredity = 0;
    for (i, m) in state.touched.iter().enumerate() {
        let v = decide_all(m)?;
        for (name, a, b) in rules {
            if v[&a] && !v[&b] {
                violations.push(format!("{name} fails for tensor #{i}"));
            }
        }
        if v[&ColumnSufficient] {
            let (_, n) = ok(m.operator_dims())?;
            for k in 1..n {
                heredity += 1;
                if !ok(decide(ColumnSufficient, &ok(m.sequential_principal_subtensor(k))?))?.holds {
                    violations.push(format!("subtensor {k} of tensor #{i} is not column sufficient"));
                }
            }
        }
    }
    ensure!(violations.is_empty(), "{}", violations.join("; "));
    Ok(format!("{} tensors, {heredity} subtensor checks, 0 violations", state.touched.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut State) -> Verdict, Option<Duration>); 8] = [
        ("example reproduction", criterion_1, None),
        ("flattening soundness", criterion_2, Some(Duration::from_secs(5))),
        ("P iff CS and ND", criterion_3, Some(Duration::from_secs(120))),
        ("convex iff column sufficient", criterion_4, Some(Duration::from_secs(300))),
        ("uniqueness for Q > O", criterion_5, None),
        ("feasibility implies solvability", criterion_6, None),
        ("solver cross-validation", criterion_7, None),
        ("implication lattice", criterion_8, None),
    ];
    let mut state = State::default();
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut verdict = run(&mut state);
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&verdict, limit) {
            if elapsed >= limit {
                verdict = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        let bound = limit.map(|l| format!(", limit {l:?}")).unwrap_or_default();
        match verdict {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({elapsed:.2?}{bound}) {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({elapsed:.2?}{bound}) {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
