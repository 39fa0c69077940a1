//! The expansion of `Per(J - 2B)` in terms of `p_k(B)`, the sum of the
//! permanents of all `k x k` submatrices of `B`:
//!
//! ```text
//! Per(J - 2B) = sum_{k=0}^{m} (-1)^k 2^k (m-k)! p_k(B)
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, SignMatrix};

/// `A = J - 2B` split into its `(0,1)` part and the terms of the expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumExpansion {
    /// The `(0,1)` matrix `B = (J - A) / 2`.
    pub b: IntMatrix,
    /// `terms[k] = (-1)^k 2^k (m-k)! p_k(B)` for `k = 0..=m`.
    pub terms: Vec<BigInt>,
}

impl SumExpansion {
    pub fn size(&self) -> usize {
        self.b.size()
    }

    pub fn total(&self) -> BigInt {
        self.terms.iter().sum()
    }

    /// The term carrying `k!`, i.e. `(-1)^(m-k) 2^(m-k) k! p_{m-k}(B)`.
    pub fn term_with_factorial(&self, k: usize) -> &BigInt {
        &self.terms[self.size() - k]
    }
}

/// `B = (J - A) / 2`; fails unless every entry of `A` is `+1` or `-1`.
pub fn zero_one_part(a: &IntMatrix) -> Result<IntMatrix> {
    if !a.is_sign_matrix() {
        return Err(Error::argument("sum expansion needs a +1/-1 matrix"));
    }
    let b = IntMatrix::from_fn(a.size(), |r, c| (1 - a.get(r, c)) / 2);
    if !b.entries().iter().all(|&e| e == 0 || e == 1) {
        return Err(Error::Internal("J - A is not twice a (0,1) matrix".into()));
    }
    Ok(b)
}

/// Subsets of `0..m` of size `k`, as sorted index lists.
fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << m)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..m).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

pub(crate) fn p_k_sum(
    b: &IntMatrix,
    k: usize,
    inner: impl Fn(&IntMatrix) -> Result<BigInt>,
) -> Result<BigInt> {
    if k == 0 {
        return Ok(BigInt::one());
    }
    let chosen = subsets(b.size(), k);
    let mut total = BigInt::zero();
    for rows in &chosen {
        for cols in &chosen {
            total += inner(&b.submatrix(rows, cols))?;
        }
    }
    Ok(total)
}

pub(crate) fn expand(
    a: &SignMatrix,
    inner: impl Fn(&IntMatrix) -> Result<BigInt>,
) -> Result<SumExpansion> {
    let m = a.size();
    let b = zero_one_part(a.as_int())?;
    let mut factorial = vec![BigInt::one(); m + 1];
    for i in 1..=m {
        factorial[i] = &factorial[i - 1] * i;
    }
    let mut terms = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut term = (p_k_sum(&b, k, &inner)? << k) * &factorial[m - k];
        if k % 2 == 1 {
            term = -term;
        }
        terms.push(term);
    }
    Ok(SumExpansion { b, terms })
}
