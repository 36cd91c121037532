//! Digit-pattern integers and the index sets used by the generalized
//! congruences.
//!
//! For `r = sum r_i 2^i` in binary, `k_r` has base-p digits `(p-1) r_i` and
//! `m(r)` has base-p digits `b r_i`. The reflection `d_a(r) = 2^a - 1 - r`
//! pairs indices of the alternating sums, and `S_k(r)` / `R_{k'}(r)` are the
//! blocks those sums are split into.

use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// Parameters `(p, b, n, a)` of one congruence family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DigitContext {
    pub p: u64,
    pub b: u64,
    pub n: u32,
    pub a: u32,
}

impl DigitContext {
    pub fn new(p: u64, b: u64, n: u32, a: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if b < 1 || b > p - 1 {
            return Err(Error::InvalidContext(format!("b = {b} outside [1, {}]", p - 1)));
        }
        if n < 1 {
            return Err(Error::InvalidContext("n must be at least 1".into()));
        }
        if a < n {
            return Err(Error::InvalidContext(format!("a = {a} < n = {n}")));
        }
        if a > 40 {
            return Err(Error::InvalidContext(format!("a = {a} is too large")));
        }
        Ok(DigitContext { p, b, n, a })
    }

    /// `m(r)` for this context.
    pub fn m(&self, r: u64) -> u64 {
        m_of(self, r)
    }

    /// `m(2^a - 1)`.
    pub fn m_top(&self) -> u64 {
        self.m((1u64 << self.a) - 1)
    }

    /// Number of indices `2^n`.
    pub fn width(&self) -> u64 {
        1u64 << self.n
    }
}

/// Reads the binary digits of `r` as base-p digits scaled by `digit`.
fn spread(p: u64, digit: u64, mut r: u64) -> u64 {
    let mut out: u64 = 0;
    let mut place: u64 = 1;
    while r > 0 {
        if r & 1 == 1 {
            out = place
                .checked_mul(digit)
                .and_then(|v| out.checked_add(v))
                .expect("digit pattern overflows u64");
        }
        r >>= 1;
        if r > 0 {
            place = place.checked_mul(p).expect("digit pattern overflows u64");
        }
    }
    out
}

/// The `r`-th non-negative integer whose base-p digits are all `0` or `p-1`.
pub fn k_r(p: u64, r: u64) -> u64 {
    spread(p, p - 1, r)
}

pub fn m_of(ctx: &DigitContext, r: u64) -> u64 {
    spread(ctx.p, ctx.b, r)
}

/// `2^a - 1 - r`, for `0 <= r <= 2^a - 1`.
pub fn d_reflect(a: u32, r: i64) -> Result<u64> {
    let top = (1i64 << a) - 1;
    if r < 0 || r > top {
        return Err(Error::OutOfRange(format!("d_{a}({r}) needs 0 <= r <= {top}")));
    }
    Ok((top - r) as u64)
}

// Internal form for indices already known to be in range.
pub(crate) fn reflect(a: u32, r: u64) -> u64 {
    ((1u64 << a) - 1) - r
}

/// A sorted set of indices in `[0, 2^n - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSet(Vec<u64>);

impl IndexSet {
    pub fn from_unsorted(mut v: Vec<u64>) -> Self {
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.0.binary_search(&s).is_ok()
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.iter().all(|s| !other.contains(s))
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet::from_unsorted(self.iter().chain(other.iter()).collect())
    }

    pub fn map(&self, f: impl Fn(u64) -> u64) -> IndexSet {
        IndexSet::from_unsorted(self.iter().map(f).collect())
    }
}

fn check_kr(ctx: &DigitContext, k: u32, r: u64) -> Result<()> {
    if k > ctx.n {
        return Err(Error::OutOfRange(format!("k = {k} > n = {}", ctx.n)));
    }
    let bound = 1u64 << (ctx.n - k);
    if r >= bound {
        return Err(Error::OutOfRange(format!("r = {r} must be below 2^(n-k) = {bound}")));
    }
    Ok(())
}

/// `S'_k(r) = { r + 2^(n-k+1) r' : 0 <= r' < 2^(k-1) }` for `k >= 1`.
pub fn set_s_prime(ctx: &DigitContext, k: u32, r: u64) -> Result<IndexSet> {
    check_kr(ctx, k, r)?;
    if k == 0 {
        return Err(Error::OutOfRange("S'_k needs k >= 1".into()));
    }
    let step = 1u64 << (ctx.n - k + 1);
    Ok(IndexSet::from_unsorted((0..1u64 << (k - 1)).map(|rp| r + step * rp).collect()))
}

/// `S''_k(r)`: the reflection `d_n` of `S'_k(r)`.
pub fn set_s_second(ctx: &DigitContext, k: u32, r: u64) -> Result<IndexSet> {
    Ok(set_s_prime(ctx, k, r)?.map(|s| reflect(ctx.n, s)))
}

/// `S_0(r) = {r}`; `S_k(r) = S'_k(r) ∪ S''_k(r)` for `k >= 1`.
pub fn set_s(ctx: &DigitContext, k: u32, r: u64) -> Result<IndexSet> {
    check_kr(ctx, k, r)?;
    if k == 0 {
        return Ok(IndexSet(vec![r]));
    }
    Ok(set_s_prime(ctx, k, r)?.union(&set_s_second(ctx, k, r)?))
}

/// `R_{k'}(r) = { s in S_k(r) : s <= 2^(n-k') - 1 }`.
pub fn set_r(ctx: &DigitContext, k: u32, k_prime: u32, r: u64) -> Result<IndexSet> {
    if k_prime > k {
        return Err(Error::OutOfRange(format!("k' = {k_prime} > k = {k}")));
    }
    let s = set_s(ctx, k, r)?;
    let bound = 1u64 << (ctx.n - k_prime);
    Ok(IndexSet(s.iter().filter(|&x| x < bound).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, b: u64, n: u32, a: u32) -> DigitContext {
        DigitContext::new(p, b, n, a).unwrap()
    }

    fn set(v: &[u64]) -> IndexSet {
        IndexSet::from_unsorted(v.to_vec())
    }

    #[test]
    fn context_validation() {
        assert!(DigitContext::new(4, 1, 1, 1).is_err());
        assert!(DigitContext::new(3, 0, 1, 1).is_err());
        assert!(DigitContext::new(3, 3, 1, 1).is_err());
        assert!(DigitContext::new(3, 1, 0, 1).is_err());
        assert!(DigitContext::new(3, 1, 2, 1).is_err());
        assert!(DigitContext::new(2, 1, 3, 3).is_ok());
    }

    #[test]
    fn k_r_examples() {
        assert_eq!(k_r(3, 0), 0);
        assert_eq!(k_r(3, 3), 8);
        assert_eq!(k_r(5, 2), 20);
        // digits are 0 or p-1, strictly increasing
        let ks: Vec<u64> = (0..64).map(|r| k_r(5, r)).collect();
        assert!(ks.windows(2).all(|w| w[0] < w[1]));
        let by_search: Vec<u64> = (0u64..)
            .filter(|&v| {
                let mut x = v;
                while x > 0 {
                    if x % 5 != 0 && x % 5 != 4 {
                        return false;
                    }
                    x /= 5;
                }
                true
            })
            .take(64)
            .collect();
        assert_eq!(ks, by_search);
    }

    #[test]
    fn m_examples() {
        assert_eq!(m_of(&ctx(2, 1, 4, 4), 13), 13);
        assert_eq!(m_of(&ctx(5, 2, 2, 2), 3), 12);
        assert_eq!(m_of(&ctx(7, 3, 1, 1), 0), 0);
        // b = (p-1)/2 gives k_r / 2
        for p in [3u64, 5, 7, 11] {
            let c = ctx(p, (p - 1) / 2, 3, 3);
            for r in 0..32 {
                assert_eq!(2 * m_of(&c, r), k_r(p, r));
            }
        }
    }

    #[test]
    fn reflection() {
        assert_eq!(d_reflect(3, 2).unwrap(), 5);
        assert_eq!(d_reflect(2, 0).unwrap(), 3);
        assert!(d_reflect(2, 4).is_err());
        assert!(d_reflect(2, -1).is_err());
        for a in 1..8u32 {
            for r in 0..(1i64 << a) {
                let d = d_reflect(a, r).unwrap();
                assert_eq!(d_reflect(a, d as i64).unwrap(), r as u64);
                if r < (1 << (a - 1)) {
                    assert!((r as u64) < d);
                }
            }
        }
    }

    #[test]
    fn reflection_identity_for_m() {
        for p in [2u64, 3, 5, 7] {
            for b in 1..p {
                for a in 0..8u32 {
                    let c = DigitContext { p, b, n: 1, a };
                    let top = m_of(&c, (1 << a) - 1);
                    for r in 0..(1u64 << a) {
                        assert_eq!(m_of(&c, r) + m_of(&c, reflect(a, r)), top);
                    }
                }
            }
        }
    }

    #[test]
    fn m_strictly_increasing() {
        for p in [2u64, 3, 5, 7] {
            for b in 1..p {
                let c = ctx(p, b, 1, 1);
                let ms: Vec<u64> = (0..1u64 << 12).map(|r| m_of(&c, r)).collect();
                assert!(ms.windows(2).all(|w| w[0] < w[1]), "p={p} b={b}");
            }
        }
    }

    #[test]
    fn s_examples() {
        let c = ctx(3, 1, 2, 3);
        assert_eq!(set_s(&c, 0, 1).unwrap(), set(&[1]));
        assert_eq!(set_s(&c, 1, 0).unwrap(), set(&[0, 3]));
        assert_eq!(set_s(&c, 2, 0).unwrap(), set(&[0, 1, 2, 3]));
        assert!(set_s(&c, 1, 2).is_err());
        assert!(set_s(&c, 3, 0).is_err());
    }

    #[test]
    fn s_prime_alternate_description() {
        // S''_k(r) = { d_{n-k+1}(r) + 2^(n-k+1) r' }
        for n in 1..=8u32 {
            let c = ctx(2, 1, n, n);
            for k in 1..=n {
                for r in 0..(1u64 << (n - k)) {
                    let step = 1u64 << (n - k + 1);
                    let alt = IndexSet::from_unsorted(
                        (0..1u64 << (k - 1)).map(|rp| reflect(n - k + 1, r) + step * rp).collect(),
                    );
                    assert_eq!(set_s_second(&c, k, r).unwrap(), alt);
                }
            }
        }
    }

    #[test]
    fn partition_identity() {
        for n in 1..=10u32 {
            let c = ctx(2, 1, n, n);
            for k in 0..=n {
                for r in 0..(1u64 << (n - k)) {
                    let s = set_s(&c, k, r).unwrap();
                    assert_eq!(s.len(), 1 << k);
                    assert!(s.iter().all(|x| x < (1 << n)));
                }
            }
            for k in 0..n {
                for r in 0..(1u64 << (n - k - 1)) {
                    let left = set_s(&c, k, r).unwrap();
                    let right = set_s(&c, k, reflect(n - k, r)).unwrap();
                    assert!(left.is_disjoint(&right));
                    assert_eq!(left.union(&right), set_s(&c, k + 1, r).unwrap(), "n={n} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn r_sets() {
        let c = ctx(2, 1, 2, 2);
        assert_eq!(set_r(&c, 2, 1, 0).unwrap(), set(&[0, 1]));
        assert!(set_r(&c, 1, 2, 0).is_err());
        for n in 1..=8u32 {
            let c = ctx(3, 1, n, n);
            for k in 0..=n {
                for r in 0..(1u64 << (n - k)) {
                    assert_eq!(set_r(&c, k, 0, r).unwrap(), set_s(&c, k, r).unwrap());
                    assert_eq!(set_r(&c, k, k, r).unwrap(), set(&[r]));
                    for kp in 0..k {
                        let upper = set_r(&c, k, kp + 1, r).unwrap();
                        let reflected = upper.map(|s| reflect(n - kp, s));
                        assert!(upper.is_disjoint(&reflected));
                        assert_eq!(set_r(&c, k, kp, r).unwrap(), upper.union(&reflected));
                    }
                }
            }
        }
    }
}
