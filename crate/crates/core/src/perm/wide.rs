//! Fixed-width two's-complement integers used as Gray-walk accumulators.
//!
//! All arithmetic wraps modulo `2^(64 L)`. A caller may only read the result
//! back when it has proven that the exact value fits in `64 L - 1` bits;
//! intermediate wrap-around then cancels out.

use num_bigint::{BigInt, BigUint, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Wide<const L: usize>(pub(crate) [u64; L]);

impl<const L: usize> Wide<L> {
    pub(crate) const ZERO: Self = Wide([0; L]);

    #[inline]
    pub(crate) fn from_u64(x: u64) -> Self {
        let mut limbs = [0; L];
        limbs[0] = x;
        Wide(limbs)
    }

    #[inline]
    pub(crate) fn mul_u64(&mut self, x: u64) {
        let mut carry = 0u128;
        for limb in self.0.iter_mut() {
            let t = (*limb as u128) * (x as u128) + carry;
            *limb = t as u64;
            carry = t >> 64;
        }
    }

    #[inline]
    pub(crate) fn add_assign(&mut self, rhs: &Self) {
        let mut carry = false;
        for (a, &b) in self.0.iter_mut().zip(rhs.0.iter()) {
            let (s1, c1) = a.overflowing_add(b);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *a = s2;
            carry = c1 | c2;
        }
    }

    #[inline]
    pub(crate) fn sub_assign(&mut self, rhs: &Self) {
        let mut borrow = false;
        for (a, &b) in self.0.iter_mut().zip(rhs.0.iter()) {
            let (d1, b1) = a.overflowing_sub(b);
            let (d2, b2) = d1.overflowing_sub(borrow as u64);
            *a = d2;
            borrow = b1 | b2;
        }
    }

    fn is_negative(&self) -> bool {
        self.0[L - 1] >> 63 == 1
    }

    fn negated(&self) -> Self {
        let mut out = Self::ZERO;
        out.sub_assign(self);
        out
    }

    pub(crate) fn to_bigint(self) -> BigInt {
        let (sign, magnitude) = if self.is_negative() {
            (Sign::Minus, self.negated())
        } else {
            (Sign::Plus, self)
        };
        let bytes: Vec<u8> = magnitude.0.iter().flat_map(|l| l.to_le_bytes()).collect();
        BigInt::from_biguint(sign, BigUint::from_bytes_le(&bytes))
    }
}
