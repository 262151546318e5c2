//! Fixtures shared by the benchmark targets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensorlcp::analysis::{random_block_symmetric_sufficient, random_feasible_q, random_tensor};
use tensorlcp::{DenseTensor, TlcpInstance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `M` in `R^[2m, n]` and `Z` in `R^[m, n]` with entries in `-3..=3`.
pub fn operator_and_argument(seed: u64, m: usize, n: usize) -> (DenseTensor, DenseTensor) {
    let mut r = rng(seed);
    let op = random_tensor(&mut r, 2 * m, n, -3, 3).expect("shape");
    let z = random_tensor(&mut r, m, n, -3, 3).expect("shape");
    (op, z)
}

/// Column-sufficient block-symmetric instance with a feasible `Q`.
pub fn sufficient_instance(seed: u64, m: usize, n: usize) -> TlcpInstance {
    let mut r = rng(seed);
    let op = random_block_symmetric_sufficient(&mut r, m, n, -2, 2).expect("shape");
    let q = random_feasible_q(&mut r, &op, 3).expect("shape");
    TlcpInstance::new(op, q).expect("shapes match")
}

/// Random integer instance.
pub fn random_instance(seed: u64, m: usize, n: usize) -> TlcpInstance {
    let mut r = rng(seed);
    let op = random_tensor(&mut r, 2 * m, n, -3, 3).expect("shape");
    let q = random_tensor(&mut r, m, n, -4, 4).expect("shape");
    TlcpInstance::new(op, q).expect("shapes match")
}
