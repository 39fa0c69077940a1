//! Permanent by Laplace expansion along a chosen column.
//!
//! The top level expands along the requested column. The minors are
//! expanded recursively along the remaining columns in ascending order,
//! memoised on the set of surviving rows.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::matrix::IntMatrix;

/// `col` is 0-based here; range checks happen in the caller.
pub(crate) fn permanent(a: &IntMatrix, col: usize) -> BigInt {
    let m = a.size();
    if m == 0 {
        return BigInt::one();
    }
    let order: Vec<usize> = std::iter::once(col)
        .chain((0..m).filter(|&c| c != col))
        .collect();

    // minors[mask] = permanent of the rows in `mask` against the last
    // popcount(mask) columns of `order`.
    let full = (1usize << m) - 1;
    let mut minors: Vec<BigInt> = vec![BigInt::zero(); 1 << m];
    minors[0] = BigInt::one();
    let mut masks: Vec<usize> = (1..full).collect();
    masks.sort_by_key(|mask| mask.count_ones());
    for mask in masks {
        let c = order[m - mask.count_ones() as usize];
        let mut sum = BigInt::zero();
        for r in (0..m).filter(|r| mask >> r & 1 == 1) {
            let e = a.get(r, c);
            if e != 0 {
                sum += &minors[mask & !(1 << r)] * e;
            }
        }
        minors[mask] = sum;
    }

    (0..m)
        .map(|k| &minors[full & !(1 << k)] * a.get(k, col))
        .sum()
}
