//! Named tensors from the worked examples of the theory, plus small builders.
//!
//! Each order-4 tensor lives in `R^[4,2]` and acts on `2 x 2` matrices. Entries
//! are listed with 1-based indices `m_{i1 i2 i3 i4}`.

use crate::rational::int;
use crate::tensor::{DenseTensor, MultiIndex, Shape};

fn order4(entries: &[([usize; 4], i64)]) -> DenseTensor {
    let assignments: Vec<(MultiIndex, _)> =
        entries.iter().map(|(i, v)| (MultiIndex::from(*i), int(*v))).collect();
    DenseTensor::make(Shape::cubical(4, 2).expect("shape"), &assignments, int(0))
        .expect("fixture indices are valid")
}

/// Column sufficient on the nonnegative orthant but not column sufficient:
/// `MZ = [2 z11, 2 z21; 2 z22 + z12, z11 + z22]`.
///
/// The product above needs `m_1221 = 2`. Placing that 2 at `m_1212` instead
/// (see [`orthant_sufficient_not_sufficient_as_printed`]) gives
/// `(MZ)_12 = 2 z12`, which no longer matches it.
pub fn orthant_sufficient_not_sufficient() -> DenseTensor {
    order4(&[
        ([1, 1, 1, 1], 2),
        ([1, 2, 2, 1], 2),
        ([2, 1, 2, 2], 2),
        ([2, 2, 1, 1], 1),
        ([2, 1, 1, 2], 1),
        ([2, 2, 2, 2], 1),
    ])
}

/// Variant of [`orthant_sufficient_not_sufficient`] with `m_1212 = 2` in place of `m_1221 = 2`.
pub fn orthant_sufficient_not_sufficient_as_printed() -> DenseTensor {
    order4(&[
        ([1, 1, 1, 1], 2),
        ([1, 2, 1, 2], 2),
        ([2, 1, 2, 2], 2),
        ([2, 2, 1, 1], 1),
        ([2, 1, 1, 2], 1),
        ([2, 2, 2, 2], 1),
    ])
}

/// Column sufficient but not positive semidefinite:
/// `MZ = [-2 z21, 0; z11, z22]`.
pub fn sufficient_not_psd() -> DenseTensor {
    order4(&[([2, 1, 1, 1], 1), ([2, 2, 2, 2], 1), ([1, 1, 2, 1], -2)])
}

/// Column sufficient on the nonnegative orthant but not copositive:
/// `MZ = [-10 z12, z12; z22, z11]`.
pub fn orthant_sufficient_not_copositive() -> DenseTensor {
    order4(&[
        ([1, 1, 1, 2], -10),
        ([1, 2, 1, 2], 1),
        ([2, 1, 2, 2], 1),
        ([2, 2, 1, 1], 1),
    ])
}

/// Column sufficient but not a P tensor: `MZ = [-10 z12, z11 + z12; z22, -z21]`.
pub fn sufficient_not_p() -> DenseTensor {
    order4(&[
        ([1, 1, 1, 2], -10),
        ([1, 2, 1, 1], 1),
        ([1, 2, 1, 2], 1),
        ([2, 1, 2, 2], 1),
        ([2, 2, 2, 1], -1),
    ])
}

/// Non-degenerate but not a P tensor:
/// `MZ = [z11 - z22, z12 - z21; z21 - 2 z12, z22 - 2 z11]`.
pub fn nondegenerate_not_p() -> DenseTensor {
    order4(&[
        ([1, 1, 1, 1], 1),
        ([1, 2, 1, 2], 1),
        ([2, 1, 2, 1], 1),
        ([2, 2, 2, 2], 1),
        ([1, 1, 2, 2], -1),
        ([1, 2, 2, 1], -1),
        ([2, 1, 1, 2], -2),
        ([2, 2, 1, 1], -2),
    ])
}

/// Block-diagonal tensor `m_{I I} = d_I`, zero elsewhere.
pub fn block_diagonal(m: usize, n: usize, diagonal: &[i64]) -> DenseTensor {
    let big_n = n.pow(m as u32);
    assert_eq!(diagonal.len(), big_n, "one diagonal entry per multi-index");
    let mut values = vec![0; big_n * big_n];
    for (i, d) in diagonal.iter().enumerate() {
        values[i * big_n + i] = *d;
    }
    DenseTensor::from_ints(&vec![n; 2 * m], &values).expect("shape")
}

/// `2 x 2` integer matrix in row-major order, as an order-2 tensor.
pub fn mat2(values: [i64; 4]) -> DenseTensor {
    DenseTensor::from_ints(&[2, 2], &values).expect("shape")
}
