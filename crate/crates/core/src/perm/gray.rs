//! Signed subset sums of products, walked in Gray-code order.
//!
//! For a base vector `b` and delta vectors `d_0 .. d_{t-1}` (all of length
//! `m`), computes
//!
//! ```text
//! sum over S ⊆ {0..t} of (-1)^|S| * prod_i (b_i + sum_{j in S} d_{j,i})
//! ```
//!
//! Ryser's and Glynn's formulas are both instances. Consecutive Gray-code
//! subsets differ in one index, so each step costs one vector update plus
//! one product.
//!
//! The index range `0 .. 2^t` is cut into a fixed number of contiguous
//! chunks that do not depend on the worker count. Each chunk rebuilds its
//! starting vector from scratch.

use std::ops::Range;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::wide::Wide;
use super::Workers;
use crate::error::{Error, Result};

/// Walks with at most `2^SERIAL_BITS` steps run as a single chunk.
const SERIAL_BITS: u32 = 14;
const MAX_CHUNK_BITS: u32 = 10;

pub(crate) struct GrayWalk {
    len: usize,
    bits: u32,
    base: Vec<i64>,
    /// `bits` vectors of length `len`, stored back to back.
    deltas: Vec<i64>,
    /// Consecutive coordinate ranges whose product magnitude is proven
    /// below `2^63`, so each group multiplies exactly in `i64`.
    groups: Vec<Range<usize>>,
    /// Some coordinate is identically zero, so every product vanishes.
    always_zero: bool,
    /// Bits needed to hold the signed total, from `2^t * prod_i R_i`.
    total_bits: u64,
    /// Every `R_i` is below `2^31`, so the running vector fits in `i32`.
    fits_i32: bool,
}

impl GrayWalk {
    pub(crate) fn new(base: Vec<i64>, deltas: Vec<i64>, bits: u32) -> Self {
        let len = base.len();
        debug_assert_eq!(deltas.len(), len * bits as usize);

        // R_i bounds |b_i + sum_{j in S} d_{j,i}| for every S.
        let radius: Vec<u64> = (0..len)
            .map(|i| {
                let spread: u64 = (0..bits as usize)
                    .map(|j| deltas[j * len + i].unsigned_abs())
                    .sum();
                base[i].unsigned_abs() + spread
            })
            .collect();

        let always_zero = radius.contains(&0);
        let mut groups = Vec::new();
        let mut start = 0;
        let mut acc: u128 = 1;
        for (i, &r) in radius.iter().enumerate() {
            let next = acc * r.max(1) as u128;
            if next >= 1u128 << 63 {
                groups.push(start..i);
                start = i;
                acc = r.max(1) as u128;
            } else {
                acc = next;
            }
        }
        if start < len {
            groups.push(start..len);
        }

        let mut bound = BigUint::one() << bits;
        for &r in &radius {
            bound *= r;
        }
        let total_bits = bound.bits() + 1;
        let fits_i32 = radius.iter().all(|&r| r < 1 << 31);

        GrayWalk {
            len,
            bits,
            base,
            deltas,
            groups,
            always_zero,
            total_bits,
            fits_i32,
        }
    }

    pub(crate) fn sum(&self, workers: Workers) -> Result<BigInt> {
        if self.always_zero {
            return Ok(BigInt::zero());
        }
        if self.fits_i32 {
            self.sum_with::<i32>(workers)
        } else {
            self.sum_with::<i64>(workers)
        }
    }

    fn sum_with<T: Lane>(&self, workers: Workers) -> Result<BigInt> {
        let lanes = Prepared::<T>::new(self);
        match self.total_bits.div_ceil(64) {
            0..=2 => self.run::<T, Wide<2>>(&lanes, workers),
            3 => self.run::<T, Wide<3>>(&lanes, workers),
            4 => self.run::<T, Wide<4>>(&lanes, workers),
            5..=6 => self.run::<T, Wide<6>>(&lanes, workers),
            7..=8 => self.run::<T, Wide<8>>(&lanes, workers),
            _ => self.run::<T, BigAcc>(&lanes, workers),
        }
    }

    fn run<T: Lane, A: Accumulator>(
        &self,
        lanes: &Prepared<T>,
        workers: Workers,
    ) -> Result<BigInt> {
        let chunk_bits = self.bits.saturating_sub(SERIAL_BITS).min(MAX_CHUNK_BITS);
        if chunk_bits == 0 {
            return Ok(self
                .walk_chunk::<T, A>(lanes, 0, 1u64 << self.bits)
                .into_bigint());
        }
        let chunk_len = 1u64 << (self.bits - chunk_bits);
        let reduce = || {
            (0..1u64 << chunk_bits)
                .into_par_iter()
                .map(|c| self.walk_chunk::<T, A>(lanes, c * chunk_len, (c + 1) * chunk_len))
                .reduce(A::zero, A::merge)
        };
        let total = match workers {
            Workers::Auto => reduce(),
            Workers::Fixed(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.get())
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
                .install(reduce),
        };
        Ok(total.into_bigint())
    }

    fn walk_chunk<T: Lane, A: Accumulator>(&self, lanes: &Prepared<T>, lo: u64, hi: u64) -> A {
        let len = self.len;
        let mut acc = A::zero();
        let mut gray = lo ^ (lo >> 1);
        let mut v = lanes.base.clone();
        for j in 0..self.bits as usize {
            if gray >> j & 1 == 1 {
                let d = &lanes.deltas[0][j * len..(j + 1) * len];
                v.iter_mut().zip(d).for_each(|(x, &y)| *x = x.add(y));
            }
        }
        let mut odd = gray.count_ones() & 1 == 1;
        let mut scratch = vec![0u64; self.groups.len()];

        self.add_term(&mut acc, odd, &v, &mut scratch);
        for k in lo + 1..hi {
            let j = k.trailing_zeros() as usize;
            // deltas[1] holds the negated vectors, used when j leaves the subset.
            let d = &lanes.deltas[(gray >> j & 1) as usize][j * len..(j + 1) * len];
            v.iter_mut().zip(d).for_each(|(x, &y)| *x = x.add(y));
            gray ^= 1 << j;
            odd = !odd;
            self.add_term(&mut acc, odd, &v, &mut scratch);
        }
        acc
    }

    #[inline(always)]
    fn add_term<T: Lane, A: Accumulator>(
        &self,
        acc: &mut A,
        odd: bool,
        v: &[T],
        scratch: &mut [u64],
    ) {
        let mut negative = odd;
        let mut any_zero = false;
        for (slot, range) in scratch.iter_mut().zip(&self.groups) {
            let p = group_product(&v[range.clone()]);
            any_zero |= p == 0;
            negative ^= p < 0;
            *slot = p.unsigned_abs();
        }
        if !any_zero {
            acc.add(negative, scratch);
        }
    }
}

/// Element type of the running vector. `i32` halves the memory traffic of
/// each update and is chosen whenever every `R_i` fits.
trait Lane: Copy + Send + Sync + TryFrom<i64> {
    fn add(self, rhs: Self) -> Self;
    fn widen(self) -> i64;
}

impl Lane for i32 {
    #[inline(always)]
    fn add(self, rhs: Self) -> Self {
        self.wrapping_add(rhs)
    }
    #[inline(always)]
    fn widen(self) -> i64 {
        self as i64
    }
}

impl Lane for i64 {
    #[inline(always)]
    fn add(self, rhs: Self) -> Self {
        self.wrapping_add(rhs)
    }
    #[inline(always)]
    fn widen(self) -> i64 {
        self
    }
}

struct Prepared<T> {
    base: Vec<T>,
    /// `[+d, -d]` for every toggle index, back to back.
    deltas: [Vec<T>; 2],
}

impl<T: Lane> Prepared<T> {
    fn new(walk: &GrayWalk) -> Self {
        // Every value here is bounded by some R_i, which was checked to fit T.
        let narrow = |x: i64| {
            T::try_from(x)
                .ok()
                .expect("lane value fits by the R_i bound")
        };
        Prepared {
            base: walk.base.iter().map(|&x| narrow(x)).collect(),
            deltas: [
                walk.deltas.iter().map(|&x| narrow(x)).collect(),
                walk.deltas.iter().map(|&x| narrow(-x)).collect(),
            ],
        }
    }
}

/// Product of a group whose magnitude is known to fit in `i64`. Four
/// independent lanes keep the multiply chain short.
#[inline(always)]
fn group_product<T: Lane>(xs: &[T]) -> i64 {
    let mut lanes = [1i64; 4];
    let mut chunks = xs.chunks_exact(4);
    for c in &mut chunks {
        lanes[0] = lanes[0].wrapping_mul(c[0].widen());
        lanes[1] = lanes[1].wrapping_mul(c[1].widen());
        lanes[2] = lanes[2].wrapping_mul(c[2].widen());
        lanes[3] = lanes[3].wrapping_mul(c[3].widen());
    }
    for (lane, &x) in lanes.iter_mut().zip(chunks.remainder()) {
        *lane = lane.wrapping_mul(x.widen());
    }
    lanes[0]
        .wrapping_mul(lanes[1])
        .wrapping_mul(lanes[2].wrapping_mul(lanes[3]))
}

/// Exact running total of signed products of `u64` factors.
trait Accumulator: Send + Sized {
    fn zero() -> Self;
    fn add(&mut self, negative: bool, factors: &[u64]);
    fn merge(self, other: Self) -> Self;
    fn into_bigint(self) -> BigInt;
}

impl<const L: usize> Accumulator for Wide<L> {
    fn zero() -> Self {
        Wide::ZERO
    }

    #[inline(always)]
    fn add(&mut self, negative: bool, factors: &[u64]) {
        let mut term = Wide::from_u64(factors.first().copied().unwrap_or(1));
        for &f in factors.iter().skip(1) {
            term.mul_u64(f);
        }
        if negative {
            self.sub_assign(&term);
        } else {
            self.add_assign(&term);
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.add_assign(&other);
        self
    }

    fn into_bigint(self) -> BigInt {
        self.to_bigint()
    }
}

struct BigAcc(BigInt);

impl Accumulator for BigAcc {
    fn zero() -> Self {
        BigAcc(BigInt::zero())
    }

    fn add(&mut self, negative: bool, factors: &[u64]) {
        let magnitude: BigUint = factors.iter().map(|&f| BigUint::from(f)).product();
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        self.0 += BigInt::from_biguint(sign, magnitude);
    }

    fn merge(self, other: Self) -> Self {
        BigAcc(self.0 + other.0)
    }

    fn into_bigint(self) -> BigInt {
        self.0
    }
}
