use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{Integer, Rational};
use crate::error::{Error, Result};

/// `n! / (k! (n-k)!)` for `0 <= k <= n`, zero for `k < 0` or `k > n`.
///
/// Negative `n` is rejected; use [`binom_rat`] for a non-integral or negative
/// upper argument.
pub fn binom_int(n: i64, k: i64) -> Result<Integer> {
    if n < 0 {
        return Err(Error::NegativeUpper(n));
    }
    if k < 0 || k > n {
        return Ok(Integer::zero());
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc == binom(n, i) here, so the division is exact.
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(BigInt::from(acc))
}

/// `x (x-1) ... (x-k+1) / k!` for an arbitrary rational `x`.
pub fn binom_rat(x: &Rational, k: u64) -> Rational {
    let (a, b) = (x.numer(), x.denom());
    let mut num = Integer::one();
    let mut den = Integer::one();
    for i in 0..k {
        num *= a - b * Integer::from(i);
        den *= b * Integer::from(i + 1);
    }
    Rational::new(num, den)
}

fn range_product(lo: u64, hi: u64) -> BigUint {
    // product of lo..=hi, balanced so the big multiplications stay even-sized
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        let mut acc = BigUint::from(lo);
        for v in lo + 1..=hi {
            acc *= v;
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

pub fn factorial(n: u64) -> BigUint {
    range_product(1, n)
}

/// Memoized factorials `0!, 1!, ..., bound!`.
///
/// Built once per sweep context and then shared read-only; lookups return
/// exactly what [`factorial`] would.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    table: Vec<BigUint>,
}

impl FactorialTable {
    pub fn up_to(bound: u64) -> Self {
        let mut table = Vec::with_capacity(bound as usize + 1);
        let mut acc = BigUint::one();
        table.push(acc.clone());
        for v in 1..=bound {
            acc *= v;
            table.push(acc.clone());
        }
        FactorialTable { table }
    }

    pub fn bound(&self) -> u64 {
        self.table.len() as u64 - 1
    }

    /// `n!`, falling back to a direct computation past the bound.
    pub fn get(&self, n: u64) -> std::borrow::Cow<'_, BigUint> {
        match self.table.get(n as usize) {
            Some(v) => std::borrow::Cow::Borrowed(v),
            None => std::borrow::Cow::Owned(factorial(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, vp, vp_uint, PAdicVal};

    #[test]
    fn binom_int_examples() {
        assert_eq!(binom_int(4, 2).unwrap(), Integer::from(6));
        assert_eq!(binom_int(3, 5).unwrap(), Integer::zero());
        assert_eq!(binom_int(5, -1).unwrap(), Integer::zero());
        assert_eq!(binom_int(0, 0).unwrap(), Integer::one());
        assert_eq!(binom_int(-1, 0), Err(Error::NegativeUpper(-1)));
    }

    #[test]
    fn binom_int_matches_pascal() {
        let mut row = vec![Integer::one()];
        for n in 0..60i64 {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(&binom_int(n, k as i64).unwrap(), v, "({n},{k})");
            }
            let mut next = vec![Integer::one(); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
    }

    #[test]
    fn binom_rat_examples() {
        let h = rat(-1, 2);
        assert_eq!(binom_rat(&h, 0), int(1));
        assert_eq!(binom_rat(&h, 1), rat(-1, 2));
        assert_eq!(binom_rat(&h, 2), rat(3, 8));
        // agrees with the integer binomial, including k > n
        for n in 0..15i64 {
            for k in 0..20u64 {
                assert_eq!(
                    binom_rat(&int(n), k),
                    Rational::from_integer(binom_int(n, k as i64).unwrap())
                );
            }
        }
    }

    #[test]
    fn rational_binomials_stay_p_integral() {
        for p in [3u64, 5, 7] {
            for (num, den) in [(-1i64, 2i64), (7, 4), (-13, 8), (5, 11), (22, 1)] {
                if (den as u64).is_multiple_of(p) {
                    continue;
                }
                for k in 0..40 {
                    assert!(vp(&binom_rat(&rat(num, den), k), p) >= PAdicVal::Finite(0));
                }
            }
        }
    }

    // binom((p^a - 1)/2 - i, k) == binom(-1/2 - i, k) mod p^n once
    // a >= n + vp(k!): the arguments differ by p^a / 2.
    #[test]
    fn continuity_in_the_upper_argument() {
        for p in [3u64, 5] {
            for n in 1..=3i64 {
                for k in 0..30u64 {
                    let a = n + vp_uint(&factorial(k), p).finite().unwrap() + 1;
                    let pa = Integer::from(p).pow(a as u32);
                    for i in 0..6i64 {
                        let near = Rational::new(pa.clone() - 1 - 2 * i, Integer::from(2));
                        let limit = rat(-1 - 2 * i, 2);
                        let diff = binom_rat(&near, k) - binom_rat(&limit, k);
                        assert!(vp(&diff, p) >= PAdicVal::Finite(n), "p={p} n={n} k={k} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn factorial_table_is_transparent() {
        let t = FactorialTable::up_to(300);
        for n in [0u64, 1, 2, 17, 100, 300, 301, 350] {
            assert_eq!(*t.get(n), factorial(n));
            let direct = (1..=n).fold(BigUint::one(), |acc, v| acc * v);
            assert_eq!(factorial(n), direct);
        }
    }
}
