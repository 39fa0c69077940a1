//! Permanent by full enumeration of the symmetric group.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::matrix::IntMatrix;

pub(crate) fn permanent(a: &IntMatrix) -> BigInt {
    small(a).map(BigInt::from).unwrap_or_else(|| big(a))
}

/// Enumeration in `i128`; `None` as soon as anything overflows.
fn small(a: &IntMatrix) -> Option<i128> {
    fn go(a: &IntMatrix, row: usize, used: u32, partial: i128, total: &mut i128) -> Option<()> {
        let m = a.size();
        if row == m {
            *total = total.checked_add(partial)?;
            return Some(());
        }
        for col in 0..m {
            if used >> col & 1 == 0 {
                let p = partial.checked_mul(a.get(row, col) as i128)?;
                go(a, row + 1, used | 1 << col, p, total)?;
            }
        }
        Some(())
    }
    let mut total = 0;
    go(a, 0, 0, 1, &mut total)?;
    Some(total)
}

fn big(a: &IntMatrix) -> BigInt {
    fn go(a: &IntMatrix, row: usize, used: u32, partial: &BigInt, total: &mut BigInt) {
        let m = a.size();
        if row == m {
            *total += partial;
            return;
        }
        for col in 0..m {
            if used >> col & 1 == 0 {
                let p = partial * a.get(row, col);
                go(a, row + 1, used | 1 << col, &p, total);
            }
        }
    }
    let mut total = BigInt::zero();
    go(a, 0, 0, &BigInt::one(), &mut total);
    total
}
