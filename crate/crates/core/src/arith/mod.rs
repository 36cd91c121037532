//! Exact integer and rational arithmetic: binomial coefficients with integer
//! or rational upper argument, p-adic valuations, p-deprived factorials,
//! base-p digit windows with their carries, and Granville's congruence for
//! deprived factorials.
//!
//! Everything here is exact. [`Integer`] and [`Rational`] are the
//! arbitrary-precision types from `num-bigint` / `num-rational`; rationals are
//! always kept in lowest terms with a positive denominator.

mod binomial;
mod base_p;
mod granville;
mod valuation;

pub use binomial::{binom_int, binom_rat, factorial, FactorialTable};
pub use base_p::{carry_eps, t_j, t_jl, verify_carry_lemma};
pub use granville::{
    deprived_factorial, delta_sign, verify_granville, GranvilleBatch, GranvilleSample,
};
pub use valuation::{is_prime, vp, vp_int, vp_uint, PAdicVal};

pub type Integer = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;

use num_traits::{One, Signed, Zero};

/// `num / den` as a reduced rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(Integer::from(v))
}

/// True iff the reduced denominator is a power of two, i.e. `x` lies in Z[1/2].
pub fn in_z_half(x: &Rational) -> bool {
    let den = x.denom();
    den.is_positive() && (den & (den - Integer::one())).is_zero()
}

/// True iff `p` does not divide the reduced denominator, i.e. `x` lies in Z_(p).
pub fn in_z_local(x: &Rational, p: u64) -> bool {
    !(x.denom() % Integer::from(p)).is_zero()
}
