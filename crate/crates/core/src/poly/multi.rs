use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Mat2;
use crate::arith::{in_z_half, vp, Integer, PAdicVal, Rational};
use crate::error::{Error, Result};

pub const MAX_ARITY: usize = 4;

/// Exponent vector; entries past the polynomial's arity are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; MAX_ARITY]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }
}

// Graded lexicographic: total degree first, then exponents left to right.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients. No zero coefficient is
/// ever stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        assert!((1..=MAX_ARITY).contains(&arity), "unsupported arity {arity}");
        MultiPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        MultiPoly::term(arity, [0; MAX_ARITY], c)
    }

    pub fn one(arity: usize) -> Self {
        MultiPoly::constant(arity, Rational::one())
    }

    pub fn var(arity: usize, idx: usize) -> Self {
        assert!(idx < arity, "variable {idx} out of range for arity {arity}");
        let mut e = [0; MAX_ARITY];
        e[idx] = 1;
        MultiPoly::term(arity, e, Rational::one())
    }

    /// `coeff * z^exps`.
    pub fn term(arity: usize, exps: [u32; MAX_ARITY], coeff: Rational) -> Self {
        let mut p = MultiPoly::zero(arity);
        assert!(exps[arity..].iter().all(|&e| e == 0), "exponent beyond arity");
        p.add_term(Monomial(exps), coeff);
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn same_arity(&self, other: &MultiPoly) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_arity(other)?;
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                *acc.entry(ma.times(mb)).or_insert_with(Rational::zero) += c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { arity: self.arity, terms: acc })
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.arity);
        }
        MultiPoly { arity: self.arity, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn scale_int(&self, c: i64) -> MultiPoly {
        self.scale(&Rational::from_integer(Integer::from(c)))
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one(self.arity);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative in variable `idx`.
    pub fn partial_derivative(&self, idx: usize) -> Result<MultiPoly> {
        if idx >= self.arity {
            return Err(Error::OutOfRange(format!("variable {idx} with arity {}", self.arity)));
        }
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut next = *m;
            next.0[idx] -= 1;
            out.add_term(next, c * Rational::from_integer(Integer::from(e)));
        }
        Ok(out)
    }

    /// `f(z alpha)`, with `z = (z1, z2)` (arity 2) or `z = [[z11, z12], [z21, z22]]`
    /// (arity 4).
    pub fn substitute(&self, alpha: &Mat2) -> Result<MultiPoly> {
        if alpha.is_singular() {
            return Err(Error::SingularMatrix);
        }
        let ar = self.arity;
        let r = |v: &Integer| Rational::from_integer(v.clone());
        let lin = |x: usize, cx: &Integer, y: usize, cy: &Integer| {
            &MultiPoly::var(ar, x).scale(&r(cx)) + &MultiPoly::var(ar, y).scale(&r(cy))
        };
        // (z alpha)_{ij} = sum_k z_{ik} alpha_{kj}
        let images: Vec<MultiPoly> = match ar {
            2 => vec![lin(0, &alpha.a11, 1, &alpha.a21), lin(0, &alpha.a12, 1, &alpha.a22)],
            4 => vec![
                lin(0, &alpha.a11, 1, &alpha.a21),
                lin(0, &alpha.a12, 1, &alpha.a22),
                lin(2, &alpha.a11, 3, &alpha.a21),
                lin(2, &alpha.a12, 3, &alpha.a22),
            ],
            _ => return Err(Error::OutOfRange(format!("matrix action needs arity 2 or 4, got {ar}"))),
        };
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(ar), p.clone()]).collect();
        for (v, pw) in powers.iter_mut().enumerate() {
            let max_e = self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0) as usize;
            while pw.len() <= max_e {
                let next = &pw[pw.len() - 1] * &images[v];
                pw.push(next);
            }
        }
        let mut out = MultiPoly::zero(ar);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(ar, c.clone());
            for v in 0..ar {
                if m.0[v] > 0 {
                    t = &t * &powers[v][m.0[v] as usize];
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Minimum p-adic valuation of the coefficients; `+inf` for zero.
    pub fn min_vp(&self, p: u64) -> PAdicVal {
        self.terms.values().map(|c| vp(c, p)).min().unwrap_or(PAdicVal::Infinite)
    }

    /// Membership in `p^n Z[1/2][z]`. Every coefficient must already lie in
    /// Z[1/2], and `p` must be odd.
    pub fn is_divisible(&self, p: u64, n: u32) -> Result<bool> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if let Some(c) = self.terms.values().find(|c| !in_z_half(c)) {
            return Err(Error::NotInZHalf(c.to_string()));
        }
        Ok(self.min_vp(p).at_least(n as i64))
    }

    pub fn all_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Keeps the terms whose exponents satisfy `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Leading (largest) term.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.checked_add(o).expect("arity mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.checked_sub(o).expect("arity mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.checked_mul(o).expect("arity mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { arity: self.arity, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn z(i: usize) -> MultiPoly {
        MultiPoly::var(4, i)
    }

    fn nu() -> MultiPoly {
        &(&z(0) * &z(3)) - &(&z(1) * &z(2))
    }

    fn chi() -> MultiPoly {
        &(&z(0) * &z(1)) + &(&z(2) * &z(3))
    }

    #[test]
    fn ring_basics() {
        assert_eq!(&nu() * &nu(), nu().pow(2));
        assert_eq!(nu().pow(0), MultiPoly::one(4));
        assert!((&nu() - &nu()).is_zero());
        assert_eq!(nu().len(), 2);
        let x = MultiPoly::var(2, 0);
        assert_eq!(nu().checked_add(&x), Err(Error::ArityMismatch(4, 2)));
        assert_eq!(nu().checked_mul(&x), Err(Error::ArityMismatch(4, 2)));
    }

    #[test]
    fn quadric_identity() {
        let phi = &z(0).pow(2) + &z(2).pow(2);
        let second = &z(1).pow(2) + &z(3).pow(2);
        assert_eq!(&phi * &second, &nu().pow(2) + &chi().pow(2));
    }

    #[test]
    fn derivatives() {
        let sq = z(0).pow(2);
        assert_eq!(sq.partial_derivative(0).unwrap(), z(0).scale_int(2));
        assert!(MultiPoly::constant(4, rat(5, 3)).partial_derivative(2).unwrap().is_zero());
        assert!(sq.partial_derivative(4).is_err());
    }

    #[test]
    fn substitution_examples() {
        let f = &nu().pow(3) + &chi().scale(&rat(1, 2));
        assert_eq!(f.substitute(&Mat2::identity()).unwrap(), f);
        assert_eq!(f.substitute(&Mat2::new(1, 2, 2, 4)), Err(Error::SingularMatrix));
        let a = Mat2::new(2, -1, 3, 5);
        let det = Rational::from_integer(a.det());
        assert_eq!(nu().pow(4).substitute(&a).unwrap(), nu().pow(4).scale(&det.pow(4)));
    }

    #[test]
    fn action_composes_on_the_left() {
        // beta (alpha f) = (beta alpha) f under f(z) -> f(z alpha)
        let f = &(&z(0).pow(3) * &z(3)) + &(&chi() * &z(2)).scale(&rat(-2, 3));
        let mats = [Mat2::new(1, 0, 1, 1), Mat2::new(1, 1, 0, 1), Mat2::new(2, 1, -1, 3), Mat2::diag(3, -2)];
        for a in &mats {
            for b in &mats {
                let lhs = f.substitute(a).unwrap().substitute(b).unwrap();
                assert_eq!(lhs, f.substitute(&(b * a)).unwrap());
            }
        }
        let g = &MultiPoly::var(2, 0).pow(3) + &MultiPoly::var(2, 1).scale_int(7);
        for a in &mats {
            for b in &mats {
                let lhs = g.substitute(a).unwrap().substitute(b).unwrap();
                assert_eq!(lhs, g.substitute(&(b * a)).unwrap());
            }
        }
    }

    #[test]
    fn valuations_and_divisibility() {
        assert_eq!(MultiPoly::zero(4).min_vp(3), PAdicVal::Infinite);
        let f = &nu().pow(3).scale(&rat(3, 2)) + &(&chi().pow(2) * &nu()).scale(&rat(3, 2));
        assert_eq!(f.min_vp(3), PAdicVal::Finite(1));
        assert!(f.is_divisible(3, 1).unwrap());
        assert!(!f.is_divisible(3, 2).unwrap());
        assert_eq!(nu().pow(9).min_vp(3), PAdicVal::Finite(0));
        assert!(!nu().pow(9).is_divisible(3, 2).unwrap());
        assert!(nu().pow(5).scale(&int(125)).is_divisible(5, 3).unwrap());
        assert!(matches!(nu().scale(&rat(1, 3)).is_divisible(5, 1), Err(Error::NotInZHalf(_))));
        assert_eq!(nu().is_divisible(2, 1), Err(Error::EvenPrime));
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -5i64..6, 1i64..4), 0..5).prop_map(|ts| {
            let mut p = MultiPoly::zero(4);
            for ((a, b, c, d), num, den) in ts {
                p.add_term(Monomial([a, b, c, d]), rat(num, den));
            }
            p
        })
    }

    fn small_matrix() -> impl Strategy<Value = Mat2> {
        (-3i64..4, -3i64..4, -3i64..4, -3i64..4)
            .prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
            .prop_filter("nonsingular", |m| !m.is_singular())
    }

    proptest! {
        #[test]
        fn canonical_form_and_ring_laws(f in small_poly(), g in small_poly(), h in small_poly()) {
            prop_assert!(f.terms().all(|(_, c)| !c.is_zero()));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert!((&f - &f).is_zero());
        }

        #[test]
        fn substitution_is_a_degree_preserving_homomorphism(f in small_poly(), g in small_poly(), a in small_matrix()) {
            let fg = (&f * &g).substitute(&a).unwrap();
            prop_assert_eq!(fg, &f.substitute(&a).unwrap() * &g.substitute(&a).unwrap());
            let h = f.filter(|m| m.degree() == 3);
            let image = h.substitute(&a).unwrap();
            prop_assert!(image.terms().all(|(m, _)| m.degree() == 3));
        }
    }
}
