use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{phi_kl, phi_kl_by_derivatives, BasePolys};
use crate::arith::{binom_int, binom_rat, int, is_prime, rat, vp, Integer, PAdicVal, Rational};
use crate::digits::k_r;
use crate::engine::{Cell, SweepParams, SweepResult};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

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
        .filter(|&q| q <= 1 << 12)
        .ok_or_else(|| Error::InvalidContext(format!("p^n = {p}^{n} is too large")))
}

fn sign(e: u64) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `psi_r = (-1)^(k_r/2) 2^(-k_r) phi_{k_r,k_r} nu^(p^n - k_r)`.
pub fn psi_r(p: u64, n: u32, r: u64) -> Result<MultiPoly> {
    let pn = odd_prime_power(p, n)?;
    if r >> n != 0 {
        return Err(Error::OutOfRange(format!("r = {r} with n = {n}")));
    }
    let k = k_r(p, r);
    let c = int(sign(k / 2)) / Rational::from_integer(Integer::from(2).pow(k as u32));
    let nu = BasePolys::new().nu;
    Ok((&phi_kl(k as u32, k as u32) * &nu.pow((pn - k) as u32)).scale(&c))
}

/// `sum_{r < 2^n} (-1)^r psi_r`.
pub fn main_sum(p: u64, n: u32) -> Result<MultiPoly> {
    odd_prime_power(p, n)?;
    let terms = (0..1u64 << n)
        .into_par_iter()
        .map(|r| psi_r(p, n, r).map(|f| if r % 2 == 0 { f } else { -&f }))
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.iter().fold(MultiPoly::zero(4), |acc, t| &acc + t))
}

#[derive(Debug, Clone, Serialize)]
pub struct MainCheck {
    pub p: u64,
    pub n: u32,
    pub terms: usize,
    pub min_valuation: PAdicVal,
    pub required: u32,
    pub pass: bool,
    #[serde(skip)]
    pub sum: MultiPoly,
}

/// Whether `main_sum(p, n)` lies in `p^n Z[1/2][z]`.
pub fn verify_main(p: u64, n: u32) -> Result<MainCheck> {
    let sum = main_sum(p, n)?;
    let pass = sum.is_divisible(p, n)?;
    Ok(MainCheck { p, n, terms: sum.len(), min_valuation: sum.min_vp(p), required: n, pass, sum })
}

/// For even `k <= k_max`:
///
/// ```text
/// D^k(phi^k) / k! = 2^k sum_{i <= k/2} binom(k/2, i) binom((k-1)/2, i) xi^i eta^(k/2 - i)
/// ```
pub fn verify_dk_identity(k_max: u32) -> bool {
    let b = BasePolys::new();
    (0..=k_max).step_by(2).all(|k| {
        let h = k / 2;
        let mut rhs = MultiPoly::zero(4);
        for i in 0..=h {
            let c = binom_rat(&int(h as i64), i as u64) * binom_rat(&rat(k as i64 - 1, 2), i as u64);
            rhs = &rhs + &(&b.xi.pow(i) * &b.eta.pow(h - i)).scale(&c);
        }
        let two_k = Rational::from_integer(Integer::from(2).pow(k));
        phi_kl_by_derivatives(k, k) == rhs.scale(&two_k)
    })
}

fn binom_nonneg(n: i64, k: i64) -> Integer {
    if n < 0 {
        Integer::zero()
    } else {
        binom_int(n, k).expect("n >= 0")
    }
}

/// The double sum
///
/// ```text
/// sum_r sum_l (-1)^(r + k_r/2 + l) 2^(-k_r) binom(k_r, k_r/2 + j) binom(k_r - 2j, k_r - i + l)
///             * binom(k_r + 2j, i - l) binom(p^n - k_r, l)
/// ```
pub fn intro_coefficient_sum(p: u64, n: u32, i: u64, j: u64) -> Result<Rational> {
    let pn = odd_prime_power(p, n)? as i64;
    let (i, j) = (i as i64, j as i64);
    let mut acc = Rational::zero();
    for r in 0..1u64 << n {
        let k = k_r(p, r) as i64;
        let lead = binom_nonneg(k, k / 2 + j);
        if lead.is_zero() {
            continue;
        }
        let mut inner = Integer::zero();
        for l in 0..=(pn - k).min(i) {
            let t = binom_nonneg(k - 2 * j, k - i + l) * binom_nonneg(k + 2 * j, i - l) * binom_nonneg(pn - k, l);
            if l % 2 == 0 {
                inner += t;
            } else {
                inner -= t;
            }
        }
        let s = sign(r + (k / 2) as u64);
        acc += Rational::new(lead * inner * s, Integer::one() << k as usize);
    }
    Ok(acc)
}

/// `intro_coefficient_sum == 0 mod p^n` for `i <= p^n`, `j <= (p^n - 1)/2`,
/// the range outside which every term vanishes.
pub fn verify_intro_coefficients(p: u64, n: u32) -> Result<SweepResult> {
    let pn = odd_prime_power(p, n)?;
    let specs: Vec<(u64, u64)> = (0..=pn).flat_map(|i| (0..=(pn - 1) / 2).map(move |j| (i, j))).collect();
    let cells = specs
        .par_iter()
        .map(|&(i, j)| {
            let v = vp(&intro_coefficient_sum(p, n, i, j)?, p);
            Ok(Cell::new(None, None, i, Some(j as u32), v, PAdicVal::Finite(n as i64)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::assemble(SweepParams { p, b: None, n, a: None }, cells, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{op_d, op_e, op_h};

    #[test]
    fn psi_examples() {
        let b = BasePolys::new();
        assert_eq!(psi_r(3, 1, 0).unwrap(), b.nu.pow(3));
        assert_eq!(psi_r(5, 2, 0).unwrap(), b.nu.pow(25));
        let phi22 = &b.chi.pow(2).scale(&int(4)) + &b.xi.scale(&int(2));
        assert_eq!(psi_r(3, 1, 1).unwrap(), (&phi22 * &b.nu).scale(&rat(-1, 4)));
        for r in 0..4 {
            let f = psi_r(3, 2, r).unwrap();
            assert!(f.is_homogeneous());
            assert_eq!(f.total_degree(), Some(18));
        }
        assert_eq!(psi_r(2, 1, 0), Err(Error::EvenPrime));
        assert!(psi_r(3, 1, 2).is_err());
    }

    #[test]
    fn main_sum_small() {
        let b = BasePolys::new();
        let expect = &b.nu.pow(3).scale(&rat(3, 2)) + &(&b.chi.pow(2) * &b.nu).scale(&rat(3, 2));
        let got = main_sum(3, 1).unwrap();
        assert_eq!(got, expect);
        let check = verify_main(3, 1).unwrap();
        assert!(check.pass);
        assert_eq!(check.min_valuation, PAdicVal::Finite(1));
        assert!(verify_main(3, 2).unwrap().pass);
        assert!(verify_main(5, 1).unwrap().pass);
    }

    #[test]
    fn main_sum_operator_structure() {
        let f = main_sum(3, 1).unwrap();
        assert!(op_h(&f).unwrap().is_zero());
        // E does not annihilate the sum: E(chi^2 nu) = 2 chi phi nu.
        assert!(!op_e(&f).unwrap().is_zero());
        for (p, n) in [(3, 1), (3, 2), (5, 1)] {
            for r in 0..1u64 << n {
                let k = k_r(p, r) as u32;
                let mut g = psi_r(p, n, r).unwrap();
                for _ in 0..k {
                    g = op_d(&g).unwrap();
                }
                assert!(!g.is_zero());
                assert!(op_d(&g).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn dk_identity() {
        assert!(verify_dk_identity(8));
    }

    #[test]
    fn intro_examples() {
        assert_eq!(intro_coefficient_sum(3, 1, 0, 0).unwrap(), rat(3, 2));
        assert!(intro_coefficient_sum(3, 1, 4, 0).unwrap().is_zero());
        assert!(intro_coefficient_sum(3, 1, 0, 2).unwrap().is_zero());
        assert!(intro_coefficient_sum(3, 1, 40, 40).unwrap().is_zero());
        let s = verify_intro_coefficients(3, 1).unwrap();
        assert!(s.all_pass);
        assert_eq!(s.cells.len(), 4 * 2);
    }

    #[test]
    fn intro_vanishes_outside_range() {
        for (p, n) in [(3u64, 1u32), (3, 2), (5, 1)] {
            let pn = p.pow(n);
            for i in 0..=pn + 4 {
                for j in 0..=(pn + 5) / 2 {
                    if i > pn || j > (pn - 1) / 2 {
                        assert!(intro_coefficient_sum(p, n, i, j).unwrap().is_zero(), "p={p} n={n} i={i} j={j}");
                    }
                }
            }
        }
    }
}
