//! JSON encodings: the tensor file format and the structured reports.
//!
//! A tensor file lists its explicit entries with 1-based indices; every other
//! entry takes the default value. All numbers are strings holding an integer
//! or a fraction `p/q`, so nothing passes through floating point.
//!
//! ```json
//! {"order": 4, "dims": [2, 2, 2, 2],
//!  "entries": [{"idx": [2, 1, 1, 1], "val": "1"}, {"idx": [1, 1, 2, 1], "val": "-2"}],
//!  "default": "0"}
//! ```

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::analysis::{ConvexityReport, HarnessReport, NonConvexWitness, Uniqueness};
use crate::classify::ClassificationReport;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Rational};
use crate::solver::{LemkeOutcome, PieceStatus, Solution, SolutionSet, Violation};
use crate::tensor::{DenseTensor, MultiIndex, Shape};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_rational(v: &Value, field: &str) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse(s).map_err(|message| Error::Parse { context: field.into(), message }),
        Value::Number(n) if n.is_f64() => Err(Error::Parse {
            context: field.into(),
            message: format!("decimal float {n} rejected; write numbers as strings like \"1/3\""),
        }),
        Value::Number(n) => Err(Error::Parse {
            context: field.into(),
            message: format!("number {n} must be written as a string, e.g. \"{n}\""),
        }),
        other => Err(schema(format!("{field}: expected a rational string, found {other}"))),
    }
}

fn parse_usize_list(v: &Value, field: &str) -> Result<Vec<usize>> {
    let items = v.as_array().ok_or_else(|| schema(format!("{field}: expected an array of integers")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| schema(format!("{field}[{i}]: expected a nonnegative integer, found {x}")))
        })
        .collect()
}

/// Decodes a tensor from its file-format JSON value.
pub fn tensor_from_value(v: &Value) -> Result<DenseTensor> {
    let obj = v.as_object().ok_or_else(|| schema("tensor: expected a JSON object"))?;
    for key in obj.keys() {
        if !["order", "dims", "entries", "default"].contains(&key.as_str()) {
            return Err(schema(format!("unknown field {key:?}")));
        }
    }
    let dims = parse_usize_list(obj.get("dims").ok_or_else(|| schema("missing field \"dims\""))?, "dims")?;
    let order = obj
        .get("order")
        .ok_or_else(|| schema("missing field \"order\""))?
        .as_u64()
        .ok_or_else(|| schema("order: expected a nonnegative integer"))? as usize;
    if order != dims.len() {
        return Err(schema(format!("order {order} but {} dims given", dims.len())));
    }
    let shape = Shape::new(dims).map_err(|e| schema(format!("dims: {e}")))?;
    let default = match obj.get("default") {
        Some(d) => parse_rational(d, "default")?,
        None => Rational::zero(),
    };
    let mut tensor = DenseTensor::filled(shape, default);
    let entries = match obj.get("entries") {
        None => Vec::new(),
        Some(e) => e.as_array().ok_or_else(|| schema("entries: expected an array"))?.clone(),
    };
    let mut seen = HashSet::new();
    for (k, entry) in entries.iter().enumerate() {
        let field = format!("entries[{k}]");
        let e = entry.as_object().ok_or_else(|| schema(format!("{field}: expected an object")))?;
        for key in e.keys() {
            if key != "idx" && key != "val" {
                return Err(schema(format!("{field}: unknown field {key:?}")));
            }
        }
        let idx = parse_usize_list(
            e.get("idx").ok_or_else(|| schema(format!("{field}: missing \"idx\"")))?,
            &format!("{field}.idx"),
        )?;
        if idx.len() != order {
            return Err(schema(format!("{field}.idx has {} components, order is {order}", idx.len())));
        }
        let val = parse_rational(
            e.get("val").ok_or_else(|| schema(format!("{field}: missing \"val\"")))?,
            &format!("{field}.val"),
        )?;
        if !seen.insert(idx.clone()) {
            return Err(Error::DuplicateIndex(idx));
        }
        tensor.set(&MultiIndex::new(idx), val)?;
    }
    Ok(tensor)
}

/// File-format JSON value listing the nonzero entries, default `"0"`.
pub fn tensor_value(t: &DenseTensor) -> Value {
    let entries: Vec<Value> = t
        .shape()
        .indices()
        .zip(t.entries())
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| json!({"idx": i.components(), "val": rational::format(v)}))
        .collect();
    json!({
        "order": t.order(),
        "dims": t.shape().dims(),
        "entries": entries,
        "default": "0",
    })
}

fn parse_json(text: &str, source: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("{source} line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

pub fn parse_tensor_str(text: &str) -> Result<DenseTensor> {
    tensor_from_value(&parse_json(text, "input")?)
}

pub fn write_tensor_string(t: &DenseTensor) -> String {
    let mut s = serde_json::to_string_pretty(&tensor_value(t)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_tensor(path: impl AsRef<Path>) -> Result<DenseTensor> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    tensor_from_value(&parse_json(&text, &path.display().to_string())?)
}

pub fn write_tensor(t: &DenseTensor, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_tensor_string(t)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn rational_value(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn rationals_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub fn matrix_value(a: &Matrix) -> Value {
    Value::Array((0..a.rows()).map(|r| rationals_value(a.row(r))).collect())
}

pub fn classification_value(r: &ClassificationReport) -> Value {
    let verdicts: Map<String, Value> =
        r.verdicts.iter().map(|(c, &v)| (c.name().to_string(), Value::Bool(v))).collect();
    let witnesses: Map<String, Value> = r
        .witnesses
        .iter()
        .map(|(c, w)| {
            let mut obj = Map::new();
            obj.insert("tensor".into(), tensor_value(&w.tensor));
            if let Some(i) = &w.index {
                obj.insert("index".into(), json!(i.components()));
            }
            if let Some(v) = &w.value {
                obj.insert("value".into(), rational_value(v));
            }
            (c.name().to_string(), Value::Object(obj))
        })
        .collect();
    json!({"verdicts": verdicts, "witnesses": witnesses})
}

pub fn solution_value(s: &Solution) -> Value {
    json!({"Z": tensor_value(&s.z), "W": tensor_value(&s.w)})
}

pub fn violation_value(v: &Violation) -> Value {
    json!({
        "condition": v.condition.to_string(),
        "index": v.index.as_ref().map(|i| i.components().to_vec()),
        "value": rational_value(&v.value),
    })
}

pub fn lemke_value(outcome: &LemkeOutcome) -> Value {
    match outcome {
        LemkeOutcome::Solution { solution, pivots } => json!({
            "status": "Solution",
            "pivots": pivots,
            "solution": solution_value(solution),
        }),
        LemkeOutcome::RayTermination(r) => json!({
            "status": "RayTermination",
            "pivots": r.pivots,
            "point": {"z": rationals_value(&r.z), "w": rationals_value(&r.w), "z0": rational_value(&r.z0)},
            "ray": {"z": rationals_value(&r.dz), "w": rationals_value(&r.dw), "z0": rational_value(&r.dz0)},
        }),
    }
}

pub fn solution_set_value(s: &SolutionSet) -> Value {
    let pieces: Vec<Value> = s
        .pieces
        .iter()
        .map(|p| {
            let support: Vec<usize> = p.support.iter().map(|i| i + 1).collect();
            match &p.status {
                PieceStatus::Empty => json!({"support": support, "kind": "Empty"}),
                PieceStatus::Point(z) => json!({"support": support, "kind": "Point", "point": tensor_value(z)}),
                PieceStatus::Polyhedron { vertices, rays, dim } => json!({
                    "support": support,
                    "kind": "Polyhedron",
                    "dim": dim,
                    "vertices": vertices.iter().map(tensor_value).collect::<Vec<_>>(),
                    "rays": rays.iter().map(tensor_value).collect::<Vec<_>>(),
                }),
            }
        })
        .collect();
    json!({
        "empty": s.empty,
        "singleton": s.singleton,
        "bounded": s.bounded,
        "pieces": pieces,
    })
}

pub fn convexity_value(r: &ConvexityReport) -> Value {
    json!({
        "verdict": r.verdict.name(),
        "convex": r.verdict.is_convex(),
        "pair": r.pair.as_ref().map(|(a, b)| json!([tensor_value(a), tensor_value(b)])),
        "cross": r.cross.as_ref().map(|(a, b)| json!([rational_value(a), rational_value(b)])),
        "vertices": r.vertices.iter().map(tensor_value).collect::<Vec<_>>(),
        "rays": r.rays.iter().map(tensor_value).collect::<Vec<_>>(),
        "midpoints_checked": r.midpoints_checked,
    })
}

pub fn nonconvex_witness_value(w: &NonConvexWitness) -> Value {
    json!({
        "Z": tensor_value(&w.z),
        "Q": tensor_value(&w.q),
        "X1": tensor_value(&w.x1.z),
        "X2": tensor_value(&w.x2.z),
        "cross": [rational_value(&w.cross.0), rational_value(&w.cross.1)],
    })
}

pub fn uniqueness_value(u: &Uniqueness) -> Value {
    match u {
        Uniqueness::Unique(z) => json!({"status": "Unique", "solution": tensor_value(z)}),
        Uniqueness::Multiple(a, b) => {
            json!({"status": "Multiple", "solutions": [tensor_value(a), tensor_value(b)]})
        }
    }
}

pub fn harness_value(r: &HarnessReport) -> Value {
    let p = &r.params;
    let counts: BTreeMap<&str, usize> = r.class_counts.iter().map(|(c, &n)| (c.name(), n)).collect();
    let checks: BTreeMap<&str, Value> = r
        .checks
        .iter()
        .map(|(&name, t)| (name, json!({"checked": t.checked, "violations": t.violations})))
        .collect();
    let counterexamples: Vec<Value> = r
        .counterexamples
        .iter()
        .map(|c| {
            json!({"iteration": c.iteration, "check": c.check, "tensor": tensor_value(&c.tensor), "detail": c.detail})
        })
        .collect();
    json!({
        "params": {
            "seed": p.seed, "count": p.count, "m": p.m, "n": p.n,
            "low": p.low, "high": p.high, "q_per_tensor": p.q_per_tensor,
        },
        "passed": r.passed(),
        "class_counts": counts,
        "checks": checks,
        "counterexamples": counterexamples,
    })
}

/// SHA-256 digest of an input file, recorded in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything a command prints: its arguments, digests of the files it read,
/// the result and, only when requested, the elapsed time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl ReportFile {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            context: format!("report line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }
}
