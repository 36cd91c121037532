use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::arith::{vp, Integer, PAdicVal, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial in `t`; trailing zero coefficients are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// `t`.
    pub fn t() -> Self {
        UniPoly::monomial(1, Rational::one())
    }

    /// `c * t^d`.
    pub fn monomial(d: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); d + 1];
        coeffs[d] = c;
        UniPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplies by `t^d`.
    pub fn shift(&self, d: usize) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); d];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `self(c0 + c1 t)`.
    pub fn compose_affine(&self, c0: &Rational, c1: &Rational) -> Result<UniPoly> {
        if c1.is_zero() {
            return Err(Error::OutOfRange("affine substitution with zero slope".into()));
        }
        let lin = UniPoly::from_coeffs(vec![c0.clone(), c1.clone()]);
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(), |acc, c| &(&acc * &lin) + &UniPoly::constant(c.clone())))
    }

    /// `self(1 - t)`.
    pub fn reflect(&self) -> UniPoly {
        let one = Rational::one();
        self.compose_affine(&one, &-&one).expect("nonzero slope")
    }

    pub fn min_vp(&self, p: u64) -> PAdicVal {
        self.coeffs.iter().map(|c| vp(c, p)).min().unwrap_or(PAdicVal::Infinite)
    }

    pub fn scale_int(&self, c: i64) -> UniPoly {
        self.scale(&Rational::from_integer(Integer::from(c)))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|d| self.coeff(d) + o.coeff(d)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        self + &-o
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

/// Ascending powers: `-3/2 + 3/2 * t^1`.
impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if d == 0 {
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{} * t^{}", c.abs(), d)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn f1() -> UniPoly {
        UniPoly::from_coeffs(vec![int(1), rat(1, 2)])
    }

    #[test]
    fn basics() {
        assert_eq!(UniPoly::from_coeffs(vec![int(1), int(0), int(0)]).degree(), Some(0));
        assert_eq!(UniPoly::zero().degree(), None);
        assert_eq!(UniPoly::from_coeffs(vec![int(0)]), UniPoly::zero());
        let sq = f1().pow(2);
        assert_eq!(sq.coeffs(), &[int(1), int(1), rat(1, 4)]);
        assert_eq!(f1().shift(2).coeff(3), rat(1, 2));
        assert_eq!(f1().eval(&int(4)), int(3));
        assert_eq!((&f1() - &f1()), UniPoly::zero());
    }

    #[test]
    fn affine_examples() {
        let one = int(1);
        assert_eq!(f1().compose_affine(&int(0), &one).unwrap(), f1());
        assert_eq!(f1().reflect(), UniPoly::from_coeffs(vec![rat(3, 2), rat(-1, 2)]));
        assert_eq!(f1().reflect().reflect(), f1());
        assert!(f1().compose_affine(&one, &int(0)).is_err());
    }

    #[test]
    fn display() {
        let p = UniPoly::from_coeffs(vec![rat(-3, 2), rat(3, 2)]);
        assert_eq!(p.to_string(), "-3/2 + 3/2 * t^1");
        assert_eq!(UniPoly::zero().to_string(), "0");
        assert_eq!(p.min_vp(3), PAdicVal::Finite(1));
        assert_eq!(UniPoly::zero().min_vp(3), PAdicVal::Infinite);
    }

    fn small() -> impl Strategy<Value = UniPoly> {
        prop::collection::vec((-6i64..7, 1i64..5), 0..7)
            .prop_map(|v| UniPoly::from_coeffs(v.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn composition_agrees_with_evaluation(f in small(), c0 in -4i64..5, c1 in 1i64..4, x in -5i64..6) {
            let g = f.compose_affine(&int(c0), &int(c1)).unwrap();
            prop_assert_eq!(g.eval(&int(x)), f.eval(&int(c0 + c1 * x)));
            prop_assert_eq!(g.degree(), f.degree());
            prop_assert_eq!(f.reflect().reflect(), f.clone());
        }

        #[test]
        fn product_is_evaluation_homomorphism(f in small(), g in small(), x in -5i64..6) {
            prop_assert_eq!((&f * &g).eval(&int(x)), f.eval(&int(x)) * g.eval(&int(x)));
        }
    }
}
