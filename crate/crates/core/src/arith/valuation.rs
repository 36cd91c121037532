use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;

/// A p-adic valuation: a (possibly negative) integer, or `+inf` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PAdicVal {
    Finite(i64),
    Infinite,
}

impl PAdicVal {
    pub fn is_infinite(self) -> bool {
        matches!(self, PAdicVal::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            PAdicVal::Finite(v) => Some(v),
            PAdicVal::Infinite => None,
        }
    }

    /// `self - required`, saturating at `+inf` when `self` is infinite.
    ///
    /// An infinite requirement is only met by an infinite valuation; the
    /// margin is then reported as `+inf` as well (and `Finite(-1)` when a
    /// finite value misses an infinite requirement).
    pub fn margin(self, required: PAdicVal) -> PAdicVal {
        match (self, required) {
            (PAdicVal::Infinite, _) => PAdicVal::Infinite,
            (PAdicVal::Finite(_), PAdicVal::Infinite) => PAdicVal::Finite(-1),
            (PAdicVal::Finite(a), PAdicVal::Finite(b)) => PAdicVal::Finite(a - b),
        }
    }

    pub fn at_least(self, n: i64) -> bool {
        self >= PAdicVal::Finite(n)
    }
}

impl Ord for PAdicVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PAdicVal::Infinite, PAdicVal::Infinite) => Ordering::Equal,
            (PAdicVal::Infinite, _) => Ordering::Greater,
            (_, PAdicVal::Infinite) => Ordering::Less,
            (PAdicVal::Finite(a), PAdicVal::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for PAdicVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for PAdicVal {
    type Output = PAdicVal;
    fn add(self, rhs: PAdicVal) -> PAdicVal {
        match (self, rhs) {
            (PAdicVal::Finite(a), PAdicVal::Finite(b)) => PAdicVal::Finite(a + b),
            _ => PAdicVal::Infinite,
        }
    }
}

impl fmt::Display for PAdicVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PAdicVal::Finite(v) => write!(f, "{v}"),
            PAdicVal::Infinite => f.write_str("inf"),
        }
    }
}

// Serialized as a JSON integer, or the string "inf".
impl Serialize for PAdicVal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PAdicVal::Finite(v) => s.serialize_i64(*v),
            PAdicVal::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PAdicVal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(PAdicVal::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(PAdicVal::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Valuation of a non-negative big integer.
pub fn vp_uint(x: &BigUint, p: u64) -> PAdicVal {
    if x.is_zero() {
        return PAdicVal::Infinite;
    }
    if p == 2 {
        return PAdicVal::Finite(x.trailing_zeros().unwrap_or(0) as i64);
    }
    // Strip the largest power of p that fits in a u64 first.
    let mut chunk_exp = 1u32;
    let mut chunk = p;
    while let Some(next) = chunk.checked_mul(p) {
        chunk = next;
        chunk_exp += 1;
    }
    let mut v = 0i64;
    let mut cur = x.clone();
    let big_chunk = BigUint::from(chunk);
    loop {
        let (q, r) = cur.div_rem(&big_chunk);
        if !r.is_zero() {
            break;
        }
        v += chunk_exp as i64;
        cur = q;
    }
    let rem = (&cur % &big_chunk).to_u64().expect("remainder fits");
    let mut rem = rem;
    while rem.is_multiple_of(p) {
        v += 1;
        rem /= p;
    }
    PAdicVal::Finite(v)
}

pub fn vp_int(x: &BigInt, p: u64) -> PAdicVal {
    vp_uint(x.magnitude(), p)
}

/// `vp(num) - vp(den)`; `+inf` for zero.
pub fn vp(x: &Rational, p: u64) -> PAdicVal {
    match (vp_int(x.numer(), p), vp_int(x.denom(), p)) {
        (PAdicVal::Infinite, _) => PAdicVal::Infinite,
        (PAdicVal::Finite(a), PAdicVal::Finite(b)) => PAdicVal::Finite(a - b),
        (PAdicVal::Finite(_), PAdicVal::Infinite) => unreachable!("zero denominator"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&int(0), 3), PAdicVal::Infinite);
        assert_eq!(vp(&rat(3, 2), 3), PAdicVal::Finite(1));
        assert_eq!(vp(&int(8), 2), PAdicVal::Finite(3));
        assert_eq!(vp(&rat(3, 2), 2), PAdicVal::Finite(-1));
        assert_eq!(vp(&rat(-50, 7), 5), PAdicVal::Finite(2));
    }

    #[test]
    fn large_powers_cross_chunk_boundary() {
        for e in [0u32, 1, 39, 40, 41, 85, 200] {
            let x = BigUint::from(3u32).pow(e) * BigUint::from(7u32);
            assert_eq!(vp_uint(&x, 3), PAdicVal::Finite(e as i64));
        }
    }

    #[test]
    fn ordering_and_margin() {
        assert!(PAdicVal::Infinite > PAdicVal::Finite(i64::MAX));
        assert!(PAdicVal::Finite(-3) < PAdicVal::Finite(0));
        assert_eq!(PAdicVal::Finite(3).margin(PAdicVal::Finite(1)), PAdicVal::Finite(2));
        assert_eq!(PAdicVal::Infinite.margin(PAdicVal::Infinite), PAdicVal::Infinite);
        assert!(PAdicVal::Finite(5).margin(PAdicVal::Infinite) < PAdicVal::Finite(0));
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
