//! Exact permanent engines.
//!
//! Every engine returns the same [`BigInt`] on any input inside its size
//! cap; `Per` of the `0 x 0` matrix is 1 everywhere. Exceeding a cap is an
//! error, never a truncation.

mod expansion;
mod gray;
mod laplace;
mod naive;
mod wide;

use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use expansion::{zero_one_part, SumExpansion};

use crate::error::{Error, Result};
use crate::matrix::{sylvester, IntMatrix, MinorSpec, SignMatrix};
use gray::GrayWalk;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineChoice {
    Naive,
    Laplace,
    Ryser,
    Glynn,
    SumExpansion,
    SylvesterFast,
}

impl EngineChoice {
    pub const ALL: [EngineChoice; 6] = [
        EngineChoice::Naive,
        EngineChoice::Laplace,
        EngineChoice::Ryser,
        EngineChoice::Glynn,
        EngineChoice::SumExpansion,
        EngineChoice::SylvesterFast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineChoice::Naive => "naive",
            EngineChoice::Laplace => "laplace",
            EngineChoice::Ryser => "ryser",
            EngineChoice::Glynn => "glynn",
            EngineChoice::SumExpansion => "sum-expansion",
            EngineChoice::SylvesterFast => "sylvester-fast",
        }
    }
}

impl fmt::Display for EngineChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EngineChoice::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::argument(format!("unknown engine {s:?}")))
    }
}

/// Worker count for the Gray-code engines. Results do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    #[default]
    Auto,
    Fixed(NonZeroUsize),
}

impl Workers {
    /// # Panics
    /// If `n == 0`.
    pub fn fixed(n: usize) -> Self {
        Workers::Fixed(NonZeroUsize::new(n).expect("worker count must be positive"))
    }
}

/// Size caps, one per engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub naive: usize,
    pub laplace: usize,
    pub ryser: usize,
    pub glynn: usize,
    /// Cap on `m` for `p_k(B)` and therefore for the sum expansion.
    pub p_k: usize,
    pub sylvester_fast_min: u32,
    pub sylvester_fast_max: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            naive: 10,
            laplace: 12,
            ryser: 34,
            glynn: 34,
            p_k: 8,
            sylvester_fast_min: 2,
            sylvester_fast_max: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PermanentEngine {
    pub limits: Limits,
    pub workers: Workers,
}

impl PermanentEngine {
    pub fn new(limits: Limits, workers: Workers) -> Self {
        PermanentEngine { limits, workers }
    }

    pub fn with_workers(workers: Workers) -> Self {
        PermanentEngine {
            workers,
            ..Default::default()
        }
    }

    /// Sum over all `m!` permutations.
    pub fn naive(&self, a: &IntMatrix) -> Result<BigInt> {
        Error::check_size("naive permanent", a.size(), self.limits.naive)?;
        Ok(naive::permanent(a))
    }

    /// Laplace expansion along column `col` (1-based, like `S_{i,j}`).
    pub fn laplace(&self, a: &IntMatrix, col: usize) -> Result<BigInt> {
        let m = a.size();
        Error::check_size("laplace permanent", m, self.limits.laplace)?;
        if m == 0 {
            return Ok(BigInt::one());
        }
        if !(1..=m).contains(&col) {
            return Err(Error::argument(format!(
                "column {col} out of range for a {m}x{m} matrix"
            )));
        }
        Ok(laplace::permanent(a, col - 1))
    }

    /// Ryser's inclusion-exclusion over column subsets:
    /// `Per(A) = (-1)^m sum_S (-1)^|S| prod_i sum_{j in S} a_ij`.
    pub fn ryser(&self, a: &IntMatrix) -> Result<BigInt> {
        let m = a.size();
        Error::check_size("ryser permanent", m, self.limits.ryser)?;
        let mut deltas = Vec::with_capacity(m * m);
        for j in 0..m {
            deltas.extend((0..m).map(|i| a.get(i, j) as i64));
        }
        let total = GrayWalk::new(vec![0; m], deltas, m as u32).sum(self.workers)?;
        Ok(if m % 2 == 1 { -total } else { total })
    }

    /// Glynn's formula over sign vectors with the first sign fixed to `+1`:
    /// `Per(A) = 2^-(m-1) sum_d (prod_k d_k) prod_i sum_j d_j a_ij`.
    pub fn glynn(&self, a: &IntMatrix) -> Result<BigInt> {
        let m = a.size();
        Error::check_size("glynn permanent", m, self.limits.glynn)?;
        if m == 0 {
            return Ok(BigInt::one());
        }
        // Start from d = (+1, ..., +1); flipping d_j subtracts 2 * column j.
        let base: Vec<i64> = (0..m)
            .map(|i| (0..m).map(|j| a.get(i, j) as i64).sum())
            .collect();
        let mut deltas = Vec::with_capacity(m * (m - 1));
        for j in 1..m {
            deltas.extend((0..m).map(|i| -2 * a.get(i, j) as i64));
        }
        let total = GrayWalk::new(base, deltas, m as u32 - 1).sum(self.workers)?;
        let (quotient, remainder) = total.div_rem(&(BigInt::one() << (m - 1)));
        if !remainder.is_zero() {
            return Err(Error::Internal(format!(
                "glynn sum {total} is not divisible by 2^{}",
                m - 1
            )));
        }
        Ok(quotient)
    }

    /// `p_k(B)`: sum of the permanents of all `k x k` submatrices of `b`,
    /// with `p_0 = 1`.
    pub fn p_k_sum(&self, b: &IntMatrix, k: usize) -> Result<BigInt> {
        Error::check_size("p_k sum", b.size(), self.limits.p_k)?;
        if k > b.size() {
            return Err(Error::argument(format!(
                "k = {k} exceeds the matrix size {}",
                b.size()
            )));
        }
        expansion::p_k_sum(b, k, |sub| self.ryser(sub))
    }

    /// Splits `a = J - 2B` and evaluates every term of the expansion.
    pub fn sum_expansion_terms(&self, a: &SignMatrix) -> Result<SumExpansion> {
        Error::check_size("sum expansion", a.size(), self.limits.p_k)?;
        let serial = PermanentEngine {
            workers: Workers::fixed(1),
            ..*self
        };
        expansion::expand(a, |sub| serial.ryser(sub))
    }

    pub fn sum_expansion(&self, a: &SignMatrix) -> Result<BigInt> {
        Ok(self.sum_expansion_terms(a)?.total())
    }

    /// `Per(H_n) = 2^n Per(S_{1,1})`, with the minor done by Ryser.
    pub fn sylvester_fast(&self, n: u32) -> Result<BigInt> {
        let (lo, hi) = (
            self.limits.sylvester_fast_min,
            self.limits.sylvester_fast_max,
        );
        if !(lo..=hi).contains(&n) {
            return Err(Error::argument(format!(
                "sylvester fast path needs {lo} <= n <= {hi}, got {n}"
            )));
        }
        let minor = sylvester(n)?.minor(MinorSpec::new(1, 1))?;
        Ok(self.ryser(minor.as_int())? << n)
    }

    /// Runs `choice` on a general matrix. Laplace expands along column 1.
    /// The Sylvester fast path needs an order, not a matrix, so it is only
    /// accepted for matrices generated by [`sylvester`].
    pub fn compute(&self, choice: EngineChoice, a: &IntMatrix) -> Result<BigInt> {
        match choice {
            EngineChoice::Naive => self.naive(a),
            EngineChoice::Laplace => self.laplace(a, 1),
            EngineChoice::Ryser => self.ryser(a),
            EngineChoice::Glynn => self.glynn(a),
            EngineChoice::SumExpansion => self.sum_expansion(&SignMatrix::new(a.clone())?),
            EngineChoice::SylvesterFast => Err(Error::argument(
                "the sylvester-fast engine takes an order n, not a matrix",
            )),
        }
    }

    /// `Per(H_n)` with the chosen engine.
    pub fn compute_sylvester(&self, choice: EngineChoice, n: u32) -> Result<BigInt> {
        match choice {
            EngineChoice::SylvesterFast => self.sylvester_fast(n),
            other => self.compute(other, sylvester(n)?.as_int()),
        }
    }

    /// Whether `choice` accepts a matrix of side `m` under these limits.
    pub fn supports(&self, choice: EngineChoice, m: usize) -> bool {
        match choice {
            EngineChoice::Naive => m <= self.limits.naive,
            EngineChoice::Laplace => m <= self.limits.laplace,
            EngineChoice::Ryser => m <= self.limits.ryser,
            EngineChoice::Glynn => m <= self.limits.glynn,
            EngineChoice::SumExpansion => m <= self.limits.p_k,
            EngineChoice::SylvesterFast => false,
        }
    }
}

pub fn per_naive(a: &IntMatrix) -> Result<BigInt> {
    PermanentEngine::default().naive(a)
}

pub fn per_laplace(a: &IntMatrix, col: usize) -> Result<BigInt> {
    PermanentEngine::default().laplace(a, col)
}

pub fn per_ryser(a: &IntMatrix) -> Result<BigInt> {
    PermanentEngine::default().ryser(a)
}

pub fn per_glynn(a: &IntMatrix) -> Result<BigInt> {
    PermanentEngine::default().glynn(a)
}

pub fn p_k_sum(b: &IntMatrix, k: usize) -> Result<BigInt> {
    PermanentEngine::default().p_k_sum(b, k)
}

pub fn per_sum_expansion(a: &SignMatrix) -> Result<BigInt> {
    PermanentEngine::default().sum_expansion(a)
}

pub fn per_sylvester_fast(n: u32) -> Result<BigInt> {
    PermanentEngine::default().sylvester_fast(n)
}

/// `m!` as an exact integer.
pub fn factorial(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * k)
}
