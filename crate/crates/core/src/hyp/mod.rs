//! The terminating hypergeometric polynomials
//! `F_m(t) = 2F1(-m, -m + 1/2; 1; t) = sum_i binom(m, i) binom(m - 1/2, i) t^i`
//! and the alternating sums built from them.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binom_int, binom_rat, int, is_prime, rat, vp, PAdicVal, Rational};
use crate::digits::k_r;
use crate::engine::key_sum;
use crate::error::{Error, Result};
use crate::poly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypPoly {
    pub m: u64,
    pub poly: UniPoly,
}

fn binom_small(m: u64, i: u64) -> Rational {
    Rational::from_integer(binom_int(m as i64, i as i64).expect("m >= 0"))
}

/// `F_m` from its coefficient formula.
pub fn f_m(m: u64) -> HypPoly {
    let x = rat(2 * m as i64 - 1, 2);
    let coeffs = (0..=m).map(|i| binom_small(m, i) * binom_rat(&x, i)).collect();
    HypPoly { m, poly: UniPoly::from_coeffs(coeffs) }
}

/// `F_m(1 - t)` in the closed form `sum_i (-1)^i binom(m, i) binom(-1/2 - i, m) t^(m - i)`.
pub fn f_m_shifted(m: u64) -> UniPoly {
    let mut coeffs = vec![Rational::zero(); m as usize + 1];
    for i in 0..=m {
        let c = binom_small(m, i) * binom_rat(&rat(-1 - 2 * i as i64, 2), m);
        coeffs[(m - i) as usize] = if i % 2 == 0 { c } else { -c };
    }
    UniPoly::from_coeffs(coeffs)
}

/// Gould's identity for each sample `x`:
///
/// ```text
/// sum_i binom(m, i) binom(x, i) t^i = sum_i binom(m, i) binom(x + i, m) (t - 1)^(m - i)
/// ```
pub fn verify_gould(m: u64, xs: &[Rational]) -> bool {
    let t_minus_1 = UniPoly::from_coeffs(vec![int(-1), int(1)]);
    xs.iter().all(|x| {
        let lhs = UniPoly::from_coeffs((0..=m).map(|i| binom_small(m, i) * binom_rat(x, i)).collect());
        let rhs = (0..=m).fold(UniPoly::zero(), |acc, i| {
            let c = binom_small(m, i) * binom_rat(&(x + int(i as i64)), m);
            &acc + &t_minus_1.pow((m - i) as u32).scale(&c)
        });
        lhs == rhs
    })
}

fn odd_prime_power(p: u64, n: u32) -> Result<u64> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n < 1 {
        return Err(Error::InvalidContext("n must be at least 1".into()));
    }
    p.checked_pow(n)
        .filter(|&q| q <= 1 << 16)
        .ok_or_else(|| Error::InvalidContext(format!("p^n = {p}^{n} is too large")))
}

fn alternate(r: u64, f: UniPoly) -> UniPoly {
    if r.is_multiple_of(2) {
        f
    } else {
        -&f
    }
}

/// `sum_r (-1)^r t^((p^n - 1 - k_r)/2) F_{k_r/2}(1 - t)`.
pub fn hyp_sum(p: u64, n: u32) -> Result<UniPoly> {
    let pn = odd_prime_power(p, n)?;
    let terms: Vec<UniPoly> = (0..1u64 << n)
        .into_par_iter()
        .map(|r| {
            let k = k_r(p, r);
            alternate(r, f_m_shifted(k / 2).shift(((pn - 1 - k) / 2) as usize))
        })
        .collect();
    Ok(terms.iter().fold(UniPoly::zero(), |acc, t| &acc + t))
}

/// `sum_r (-1)^r (1 - t)^((p^n - 1 - k_r)/2) F_{k_r/2}(t)`, the same sum
/// before the substitution `t -> 1 - t`.
pub fn hyp_sum_direct(p: u64, n: u32) -> Result<UniPoly> {
    let pn = odd_prime_power(p, n)?;
    let one_minus_t = UniPoly::from_coeffs(vec![int(1), int(-1)]);
    let terms: Vec<UniPoly> = (0..1u64 << n)
        .into_par_iter()
        .map(|r| {
            let k = k_r(p, r);
            alternate(r, &one_minus_t.pow(((pn - 1 - k) / 2) as u32) * &f_m(k / 2).poly)
        })
        .collect();
    Ok(terms.iter().fold(UniPoly::zero(), |acc, t| &acc + t))
}

#[derive(Debug, Clone, Serialize)]
pub struct HypCheck {
    pub p: u64,
    pub n: u32,
    pub degree: Option<usize>,
    pub min_valuation: PAdicVal,
    pub required: u32,
    /// `hyp_sum_direct(1 - t) == hyp_sum`.
    pub forms_agree: bool,
    /// The coefficient of `t^((p^n-1)/2 - i)` equals `(-1)^i key_sum(i)` for every `i`.
    pub bridge: bool,
    pub pass: bool,
    #[serde(skip)]
    pub sum: UniPoly,
}

pub fn verify_hyp(p: u64, n: u32) -> Result<HypCheck> {
    let pn = odd_prime_power(p, n)?;
    let sum = hyp_sum(p, n)?;
    let direct = hyp_sum_direct(p, n)?;
    let forms_agree = direct.reflect() == sum;
    let half = (pn - 1) / 2;
    let bridge = sum.degree().is_none_or(|d| d as u64 <= half)
        && (0..=half).into_par_iter().all(|i| {
            let k = key_sum(p, n, i);
            sum.coeff((half - i) as usize) == if i % 2 == 0 { k } else { -k }
        });
    let min_valuation = sum.min_vp(p);
    let pass = forms_agree && bridge && min_valuation.at_least(n as i64) && direct.min_vp(p).at_least(n as i64);
    Ok(HypCheck { p, n, degree: sum.degree(), min_valuation, required: n, forms_agree, bridge, pass, sum })
}

#[derive(Debug, Clone, Serialize)]
pub struct I0Check {
    pub p: u64,
    pub n: u32,
    #[serde(serialize_with = "crate::engine::serialize_rational")]
    pub value: Rational,
    pub valuation: PAdicVal,
    pub pass: bool,
}

/// `sum_r (-1)^r binom(-1/2, k_r/2) == 0 mod p^n`.
pub fn verify_i0(p: u64, n: u32) -> Result<I0Check> {
    odd_prime_power(p, n)?;
    let minus_half = rat(-1, 2);
    let value = (0..1u64 << n).fold(Rational::zero(), |acc, r| {
        let term = binom_rat(&minus_half, k_r(p, r) / 2);
        if r % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    });
    let valuation = vp(&value, p);
    Ok(I0Check { p, n, value, valuation, pass: valuation.at_least(n as i64) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{in_z_half, vp, vp_int};
    use crate::engine::verify_key;

    #[test]
    fn small_f() {
        assert_eq!(f_m(0).poly, UniPoly::one());
        assert_eq!(f_m(1).poly.coeffs(), &[int(1), rat(1, 2)]);
        assert_eq!(f_m(2).poly.coeffs(), &[int(1), int(3), rat(3, 8)]);
        assert_eq!(f_m_shifted(0), UniPoly::one());
        assert_eq!(f_m_shifted(1).coeffs(), &[rat(3, 2), rat(-1, 2)]);
    }

    #[test]
    fn shifted_is_composition() {
        for m in 0..=60 {
            let f = f_m(m).poly;
            assert_eq!(f.degree(), Some(m as usize));
            assert_eq!(f_m_shifted(m), f.reflect(), "m={m}");
            for (i, c) in f.coeffs().iter().enumerate() {
                assert!(in_z_half(c));
                // binom(m - 1/2, i) = (odd) / (2^i i!)
                let b = binom_int(m as i64, i as i64).unwrap();
                let expect = vp_int(&b, 2).finite().unwrap() - 2 * i as i64 + (i as u64).count_ones() as i64;
                assert_eq!(vp(c, 2), PAdicVal::Finite(expect), "m={m} i={i}");
            }
        }
    }

    #[test]
    fn two_adic_denominators_exceed_degree() {
        assert_eq!(vp(&f_m(2).poly.coeff(2), 2), PAdicVal::Finite(-3));
    }

    #[test]
    fn gould() {
        assert!(verify_gould(0, &[int(5)]));
        for m in 0..=20u64 {
            assert!(verify_gould(m, &[rat(2 * m as i64 - 1, 2)]));
        }
        let xs = [int(0), int(1), rat(-1, 2), rat(7, 3)];
        for m in 0..=10 {
            assert!(verify_gould(m, &xs));
        }
    }

    #[test]
    fn hyp_examples() {
        let s = hyp_sum(3, 1).unwrap();
        assert_eq!(s.coeffs(), &[rat(-3, 2), rat(3, 2)]);
        for (p, n) in [(3, 1), (5, 1), (3, 2)] {
            let c = verify_hyp(p, n).unwrap();
            assert!(c.pass && c.forms_agree && c.bridge, "p={p} n={n}");
        }
        assert_eq!(verify_hyp(2, 1).unwrap_err(), Error::EvenPrime);
    }

    #[test]
    fn i0() {
        let c = verify_i0(3, 1).unwrap();
        assert_eq!(c.value, rat(3, 2));
        assert!(c.pass);
        for (p, n) in [(3, 2), (5, 1), (5, 2), (7, 1), (3, 3)] {
            let c = verify_i0(p, n).unwrap();
            let key = verify_key(p, n, Some(0)).unwrap();
            assert_eq!(c.valuation, key.cells[0].valuation);
            assert_eq!(c.pass, key.cells[0].pass);
            assert_eq!(c.value, key_sum(p, n, 0));
        }
    }
}
