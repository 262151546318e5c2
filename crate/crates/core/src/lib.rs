//! Linear complementarity problems over tensor spaces.
//!
//! A tensor `M` of order `2m` acts linearly on order-`m` tensors through
//! contraction of its last `m` modes. The complementarity problem asks for
//! `Z >= O` with `MZ + Q >= O` and `<Z, MZ + Q> = 0`. Everything here works in
//! exact rational arithmetic: the tensor algebra, the structured-tensor
//! deciders (column sufficiency and friends), Lemke's method, exhaustive
//! solution-set enumeration and the convexity/uniqueness analysis built on it.
//!
//! Every decision procedure runs on the flattened `N x N` matrix with
//! `N = n^m`, using row-major linearization with the first index most
//! significant.

pub mod analysis;
pub mod classify;
pub mod fixtures;
mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod polyhedron;
pub mod rational;
pub mod solver;
pub mod tensor;

pub use solver::{
    enumerate_solution_set, is_feasible, lemke_solve, qp_objective, solve_via_kkt_chain, verify_kkt, verify_solution,
    KktCertificate, KktReport, LemkeOutcome, PieceStatus, Solution, SolutionPiece, SolutionSet, TlcpInstance,
};
pub use analysis::{
    check_convexity, check_uniqueness_positive_q, construct_nonconvex_witness, cross_complementarity, theorem_harness,
    ConvexityReport, ConvexityVerdict, HarnessParams, HarnessReport, NonConvexWitness, Uniqueness,
};
pub use classify::{classify, ClassificationReport, Decision, SignPattern, TensorClass, Witness};
pub use error::{Error, Result};
pub use linalg::{LinearSystemSolution, Matrix};
pub use lp::{LinearProgram, LpOutcome};
pub use rational::Rational;
pub use tensor::{DenseTensor, ModeProduct, MultiIndex, Shape};

/// Environment variable overriding the default enumeration cap.
pub const ENUM_CAP_ENV: &str = "TLCP_ENUM_CAP";

/// Default bound on `N = n^m` (and on polyhedron dimension) for exhaustive routines.
pub const DEFAULT_ENUM_CAP: usize = 12;

/// Current enumeration cap: `TLCP_ENUM_CAP` if set to a positive integer, else 12.
pub fn enumeration_cap() -> usize {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_ENUM_CAP)
}

pub(crate) fn check_cap(size: usize) -> Result<()> {
    let cap = enumeration_cap();
    if size > cap {
        return Err(Error::DimensionCapExceeded { size, cap });
    }
    Ok(())
}
