//! The quantities behind the generalized binomial congruences and exact
//! verifiers for them.
//!
//! For a context `(p, b, n, a)` write `M = m(2^a - 1)`. For `0 <= r < 2^n`
//!
//! ```text
//! x_j(r, i) = t_j(M - i)! / (t_j(i)! t_j(m(r) - i)! t_j(m(d_a(r)) - i)!)
//! ```
//!
//! (zero when `i > m(r)`), `y_j = x_j / x_{j+1}`, and
//! `X_{j,k}(r, i) = sum over s in S_k(r) of (-1)^s x_j(s, i)`.
//!
//! Every `x_j` is in fact an integer: the three lower arguments sum to at
//! most the upper one, so the ratio is a multinomial coefficient times a
//! factorial. The engine stores them as exact integers and only `y_j` needs
//! rationals.
//!
//! When `a = n` the reflection `d_a` maps `[0, 2^n)` onto itself and
//! `m(d_a(r)) - i` may go negative; `x_j` is then taken to be zero whenever
//! `i > min(m(r), m(d_a(r)))`, which is the only reading under which the
//! factorial form agrees with the binomial form of the sums.

mod sweep;

pub use sweep::{
    key_sum, p2_sum, verify_gen1, verify_gen2, verify_key, verify_lemma_base, verify_lemma_ind, verify_lemma_y,
    verify_p2_corollary, Cell, SweepParams, SweepResult,
};

use num_bigint::BigUint;
use num_integer::Integer as _;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{t_j, vp, vp_int, FactorialTable, Integer, PAdicVal, Rational};
use crate::digits::{reflect, set_s, DigitContext};
use crate::error::{Error, Result};

/// An exact value together with its p-adic valuation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellValue {
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    pub valuation: PAdicVal,
}

impl CellValue {
    pub fn new(value: Rational, p: u64) -> Self {
        let valuation = vp(&value, p);
        CellValue { value, valuation }
    }

    fn from_int(value: Integer, p: u64) -> Self {
        let valuation = vp_int(&value, p);
        CellValue { value: Rational::from_integer(value), valuation }
    }
}

pub(crate) fn serialize_rational<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn sign(s: u64) -> i32 {
    if s.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Precomputed `x_j(s, i)` for `s < 2^n`, `i <= i_max`, `j <= j_max`.
struct XTable {
    i_max: u64,
    j_max: u32,
    values: Vec<Integer>,
}

impl XTable {
    fn index(&self, s: u64, i: u64, j: u32) -> Option<usize> {
        if i > self.i_max || j > self.j_max {
            return None;
        }
        let per_s = (self.j_max as u64 + 1) * (self.i_max + 1);
        Some((s * per_s + j as u64 * (self.i_max + 1) + i) as usize)
    }
}

/// Evaluator for one context. Holds the factorials up to `m(2^a - 1)`.
pub struct Engine {
    ctx: DigitContext,
    facts: FactorialTable,
    table: Option<XTable>,
}

impl Engine {
    pub fn new(ctx: DigitContext) -> Self {
        let facts = FactorialTable::up_to(ctx.m_top());
        Engine { ctx, facts, table: None }
    }

    /// Fills the `x_j` cache for `i <= i_max`, `j <= j_max` in parallel.
    pub fn prepared(mut self, i_max: u64, j_max: u32) -> Self {
        let width = self.ctx.width();
        let specs: Vec<(u64, u32, u64)> = (0..width)
            .flat_map(|s| (0..=j_max).flat_map(move |j| (0..=i_max).map(move |i| (s, j, i))))
            .collect();
        let values: Vec<Integer> = specs.par_iter().map(|&(s, j, i)| self.compute_x(s, i, j)).collect();
        self.table = Some(XTable { i_max, j_max, values });
        self
    }

    pub fn ctx(&self) -> &DigitContext {
        &self.ctx
    }

    fn check_r(&self, r: u64) -> Result<()> {
        if r >= self.ctx.width() {
            return Err(Error::OutOfRange(format!("r = {r} must be below 2^n = {}", self.ctx.width())));
        }
        Ok(())
    }

    /// `i <= m(r)` and `i <= m(d_a(r))`; always the latter when `a > n`.
    fn in_support(&self, r: u64, i: u64) -> bool {
        i <= self.ctx.m(r) && i <= self.ctx.m(reflect(self.ctx.a, r))
    }

    /// `e_j(r, i) = t_j(M - i) - t_j(i) - t_j(m(r) - i) - t_j(m(d_a(r)) - i)`.
    pub fn e_val(&self, r: u64, i: u64, j: u32) -> Result<i64> {
        self.check_r(r)?;
        if !self.in_support(r, i) {
            return Err(Error::OutOfRange(format!("e_j(r, i) undefined for i = {i} > m(r)")));
        }
        Ok(self.e_unchecked(r, i, j))
    }

    fn e_unchecked(&self, r: u64, i: u64, j: u32) -> i64 {
        let (p, c) = (self.ctx.p, &self.ctx);
        let top = c.m_top() - i;
        let mr = c.m(r) - i;
        let md = c.m(reflect(c.a, r)) - i;
        t_j(top, j, p) as i64 - t_j(i, j, p) as i64 - t_j(mr, j, p) as i64 - t_j(md, j, p) as i64
    }

    fn compute_x(&self, r: u64, i: u64, j: u32) -> Integer {
        if !self.in_support(r, i) {
            return Integer::zero();
        }
        let (p, c) = (self.ctx.p, &self.ctx);
        let top = t_j(c.m_top() - i, j, p);
        let parts = [
            t_j(i, j, p),
            t_j(c.m(r) - i, j, p),
            t_j(c.m(reflect(c.a, r)) - i, j, p),
        ];
        let den: BigUint = parts.iter().map(|&v| self.facts.get(v).into_owned()).product();
        let (q, rem) = self.facts.get(top).div_rem(&den);
        assert!(rem.is_zero(), "x_j is integral by construction");
        Integer::from(q)
    }

    fn x_int(&self, r: u64, i: u64, j: u32) -> Integer {
        if let Some(t) = &self.table {
            if let Some(idx) = t.index(r, i, j) {
                return t.values[idx].clone();
            }
        }
        self.compute_x(r, i, j)
    }

    /// `x_j(r, i)`; zero outside the support.
    pub fn x_val(&self, r: u64, i: u64, j: u32) -> Result<CellValue> {
        self.check_r(r)?;
        Ok(CellValue::from_int(self.x_int(r, i, j), self.ctx.p))
    }

    pub(crate) fn y_rational(&self, r: u64, i: u64, j: u32) -> Result<Rational> {
        if !self.in_support(r, i) {
            return Ok(Rational::zero());
        }
        let next = self.x_int(r, i, j + 1);
        if next.is_zero() {
            return Err(Error::LogicFault(format!("x_{}({r}, {i}) vanished inside the support", j + 1)));
        }
        Ok(Rational::new(self.x_int(r, i, j), next))
    }

    /// `y_j(r, i) = x_j(r, i) / x_{j+1}(r, i)`; zero outside the support.
    pub fn y_val(&self, r: u64, i: u64, j: u32) -> Result<CellValue> {
        self.check_r(r)?;
        Ok(CellValue::new(self.y_rational(r, i, j)?, self.ctx.p))
    }

    pub(crate) fn x_block_int(&self, k: u32, r: u64, i: u64, j: u32) -> Result<Integer> {
        let s = set_s(&self.ctx, k, r)?;
        let mut acc = Integer::zero();
        for idx in s.iter() {
            let x = self.x_int(idx, i, j);
            if sign(idx) > 0 {
                acc += x;
            } else {
                acc -= x;
            }
        }
        Ok(acc)
    }

    /// `X_{j,k}(r, i)`, the signed sum of `x_j(s, i)` over `s in S_k(r)`.
    pub fn x_block(&self, k: u32, r: u64, i: u64, j: u32) -> Result<CellValue> {
        Ok(CellValue::from_int(self.x_block_int(k, r, i, j)?, self.ctx.p))
    }
}
