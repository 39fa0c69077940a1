//! 2-adic valuation and the Legendre digit-sum identity `v2(k!) = k - s_k`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// `v2(x)`: a nonnegative exponent, or `Infinity` exactly when `x = 0`.
///
/// `Infinity` compares greater than every finite value and absorbs
/// addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl From<u64> for Valuation {
    fn from(v: u64) -> Self {
        Valuation::Finite(v)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseValuationError(String);

impl fmt::Display for ParseValuationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid valuation {:?}", self.0)
    }
}

impl std::error::Error for ParseValuationError {}

impl FromStr for Valuation {
    type Err = ParseValuationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Valuation::Infinity);
        }
        s.parse()
            .map(Valuation::Finite)
            .map_err(|_| ParseValuationError(s.to_string()))
    }
}

/// JSON form: a nonnegative integer, or the string `"inf"`.
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_u64(*v),
            Valuation::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ValuationVisitor;

        impl Visitor<'_> for ValuationVisitor {
            type Value = Valuation;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Valuation, E> {
                Ok(Valuation::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Valuation, E> {
                u64::try_from(v)
                    .map(Valuation::Finite)
                    .map_err(|_| E::invalid_value(de::Unexpected::Signed(v), &self))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Valuation, E> {
                if v == "inf" {
                    Ok(Valuation::Infinity)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(ValuationVisitor)
    }
}

/// Largest `e` with `2^e | x`; sign is ignored and `v2(0) = Infinity`.
pub fn nu2(x: &BigInt) -> Valuation {
    match x.trailing_zeros() {
        Some(e) => Valuation::Finite(e),
        None => Valuation::Infinity,
    }
}

pub fn nu2_i64(x: i64) -> Valuation {
    if x == 0 {
        Valuation::Infinity
    } else {
        Valuation::Finite(x.trailing_zeros() as u64)
    }
}

/// `s_k`: number of ones in the binary expansion of `k`.
pub fn digit_sum_base2(k: u64) -> u64 {
    k.count_ones() as u64
}

/// `v2(k!)` by Legendre's formula, `k - s_k`.
pub fn nu2_factorial(k: u64) -> u64 {
    k - digit_sum_base2(k)
}
