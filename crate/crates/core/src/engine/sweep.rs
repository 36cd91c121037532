use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Engine;
use crate::arith::{binom_int, binom_rat, int, rat, vp, vp_int, Integer, PAdicVal, Rational};
use crate::digits::{k_r, reflect, DigitContext};
use crate::error::{Error, Result};

/// Parameters of a sweep; `b` and `a` are absent for families that do not
/// use them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SweepParams {
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<u64>,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<u32>,
}

impl From<DigitContext> for SweepParams {
    fn from(c: DigitContext) -> Self {
        SweepParams { p: c.p, b: Some(c.b), n: c.n, a: Some(c.a) }
    }
}

/// One checked congruence: the observed valuation against the required one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<u64>,
    pub i: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<u32>,
    pub valuation: PAdicVal,
    pub required: PAdicVal,
    pub pass: bool,
}

impl Cell {
    pub(crate) fn new(k: Option<u32>, r: Option<u64>, i: u64, j: Option<u32>, valuation: PAdicVal, required: PAdicVal) -> Self {
        Cell { k, r, i, j, valuation, required, pass: valuation >= required }
    }

    pub fn margin(&self) -> PAdicVal {
        self.valuation.margin(self.required)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    pub params: SweepParams,
    pub cells: Vec<Cell>,
    /// Outcome of the independent second computation, where the family has one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cross_check: Option<bool>,
    pub all_pass: bool,
}

impl SweepResult {
    pub(crate) fn assemble(params: SweepParams, mut cells: Vec<Cell>, cross_check: Option<bool>) -> Self {
        cells.sort();
        let all_pass = cells.iter().all(|c| c.pass) && cross_check != Some(false);
        SweepResult { params, cells, cross_check, all_pass }
    }

    /// Smallest `valuation - required` over all cells.
    pub fn min_margin(&self) -> Option<PAdicVal> {
        self.cells.iter().map(Cell::margin).min()
    }
}

fn sign_of(r: u64) -> i64 {
    if r.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn default_range(i_max: Option<i64>, default: u64) -> Vec<u64> {
    match i_max {
        Some(m) if m < 0 => Vec::new(),
        Some(m) => (0..=m as u64).collect(),
        None => (0..=default).collect(),
    }
}

/// Block congruences: `X_{j,k}(r, i) == 0 mod p^k` for `0 <= k <= n`,
/// `r < 2^(n-k)`, `j <= n - k`, `i <= m(2^n - 1)`.
///
/// For `a = n` the `k = n` cells must moreover vanish exactly (required
/// valuation `+inf`): the reflection `r -> d_n(r)` pairs the terms with
/// opposite signs.
pub fn verify_gen2(ctx: &DigitContext) -> SweepResult {
    let n = ctx.n;
    let i_top = ctx.m(ctx.width() - 1);
    let engine = Engine::new(*ctx).prepared(i_top, n);
    let specs: Vec<(u32, u64, u32, u64)> = (0..=n)
        .flat_map(|k| {
            (0..1u64 << (n - k)).flat_map(move |r| (0..=n - k).flat_map(move |j| (0..=i_top).map(move |i| (k, r, j, i))))
        })
        .collect();
    let cells = specs
        .par_iter()
        .map(|&(k, r, j, i)| {
            let v = vp_int(&engine.x_block_int(k, r, i, j).expect("in range"), ctx.p);
            let required = if ctx.a == n && k == n { PAdicVal::Infinite } else { PAdicVal::Finite(k as i64) };
            Cell::new(Some(k), Some(r), i, Some(j), v, required)
        })
        .collect();
    SweepResult::assemble((*ctx).into(), cells, None)
}

fn gen1_direct(ctx: &DigitContext, i: u64) -> Integer {
    let top = ctx.m_top() as i64;
    let mut acc = Integer::zero();
    for r in 0..ctx.width() {
        let mr = ctx.m(r) as i64;
        let i = i as i64;
        let upper = top - i;
        if upper < 0 {
            continue;
        }
        let term = binom_int(mr, i).expect("m(r) >= 0") * binom_int(upper, mr).expect("checked");
        acc += term * sign_of(r);
    }
    acc
}

/// Generalized binomial sums: `sum_r (-1)^r binom(m(r), i) binom(m(2^a-1) - i, m(r)) == 0 mod p^n`.
///
/// Each sum is computed from binomial coefficients and compared exactly with
/// `X_{0,n}(0, i)` computed from factorial ratios; any disagreement fails
/// the cross check.
pub fn verify_gen1(ctx: &DigitContext, i_max: Option<i64>) -> SweepResult {
    let is = default_range(i_max, ctx.m(ctx.width() - 1));
    let bound = is.last().copied().unwrap_or(0);
    let engine = Engine::new(*ctx).prepared(bound.min(ctx.m_top()), 0);
    let rows: Vec<(Cell, bool)> = is
        .par_iter()
        .map(|&i| {
            let direct = gen1_direct(ctx, i);
            let agree = engine.x_block_int(ctx.n, 0, i, 0).expect("in range") == direct;
            let v = vp_int(&direct, ctx.p);
            (Cell::new(None, None, i, None, v, PAdicVal::Finite(ctx.n as i64)), agree)
        })
        .collect();
    let agree = rows.iter().all(|(_, a)| *a);
    SweepResult::assemble((*ctx).into(), rows.into_iter().map(|(c, _)| c).collect(), Some(agree))
}

/// `sum_r (-1)^r binom(k_r/2, i) binom(-1/2 - i, k_r/2)` as an exact rational.
pub fn key_sum(p: u64, n: u32, i: u64) -> Rational {
    let mut acc = Rational::zero();
    for r in 0..1u64 << n {
        let half = k_r(p, r) / 2;
        let term = binom_rat(&int(half as i64), i) * binom_rat(&rat(-1 - 2 * i as i64, 2), half);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Half-integer binomial sums for odd `p`; `i` defaults to `0..=(p^n - 1)/2`.
pub fn verify_key(p: u64, n: u32, i_max: Option<i64>) -> Result<SweepResult> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n < 1 {
        return Err(Error::InvalidContext("n must be at least 1".into()));
    }
    let pn = p.checked_pow(n).ok_or_else(|| Error::InvalidContext("p^n overflows".into()))?;
    let is = default_range(i_max, (pn - 1) / 2);
    let cells = is
        .par_iter()
        .map(|&i| Cell::new(None, None, i, None, vp(&key_sum(p, n, i), p), PAdicVal::Finite(n as i64)))
        .collect();
    let params = SweepParams { p, b: None, n, a: None };
    Ok(SweepResult::assemble(params, cells, None))
}

/// `sum_{r < 2^n} (-1)^r binom(r, i) binom(2^a - 1 - i, r)`.
pub fn p2_sum(n: u32, a: u32, i: u64) -> Integer {
    let top = (1i64 << a) - 1;
    let mut acc = Integer::zero();
    for r in 0..1i64 << n {
        let upper = top - i as i64;
        if upper < 0 {
            continue;
        }
        acc += binom_int(r, i as i64).expect("r >= 0") * binom_int(upper, r).expect("checked") * sign_of(r as u64);
    }
    acc
}

/// The `p = 2` family `sum_r (-1)^r binom(r, i) binom(2^a-1-i, r) == 0 mod 2^n`.
pub fn verify_p2_corollary(n: u32, a: u32, i_max: Option<i64>) -> Result<SweepResult> {
    if n < 1 || a < n {
        return Err(Error::InvalidContext(format!("need a >= n >= 1, got n = {n}, a = {a}")));
    }
    let is = default_range(i_max, (1u64 << n) - 1);
    let cells = is
        .par_iter()
        .map(|&i| Cell::new(None, None, i, None, vp_int(&p2_sum(n, a, i), 2), PAdicVal::Finite(n as i64)))
        .collect();
    let params = SweepParams { p: 2, b: Some(1), n, a: Some(a) };
    Ok(SweepResult::assemble(params, cells, None))
}

/// Reflection invariance of `y_j`:
/// `y_j(d_n(d_{n-k}(r)), i) == y_j(d_n(r), i) mod p^(n-j-k)` for `k < n`,
/// `r < 2^(n-k-1)`, `j < n - k`, `i <= m(d_n(d_{n-k}(r)))`.
///
/// Only defined for `a > n`; for `a = n` the sweep is empty.
pub fn verify_lemma_y(ctx: &DigitContext) -> SweepResult {
    let n = ctx.n;
    if ctx.a == n {
        return SweepResult::assemble((*ctx).into(), Vec::new(), None);
    }
    let i_top = ctx.m(ctx.width() - 1);
    let engine = Engine::new(*ctx).prepared(i_top, n + 1);
    let mut specs = Vec::new();
    for k in 0..n {
        for r in 0..1u64 << (n - k - 1) {
            let s_prime = reflect(n, reflect(n - k, r));
            for j in 0..n - k {
                for i in 0..=ctx.m(s_prime) {
                    specs.push((k, r, j, i));
                }
            }
        }
    }
    let cells = specs
        .par_iter()
        .map(|&(k, r, j, i)| {
            let s_prime = reflect(n, reflect(n - k, r));
            let s = reflect(n, r);
            let diff = engine.y_rational(s_prime, i, j).expect("in range") - engine.y_rational(s, i, j).expect("in range");
            Cell::new(Some(k), Some(r), i, Some(j), vp(&diff, ctx.p), PAdicVal::Finite((n - j - k) as i64))
        })
        .collect();
    SweepResult::assemble((*ctx).into(), cells, None)
}

/// Induction step as a congruence family:
/// `X_{j,k}(r, i) == y_j(d_n(r), i) X_{j+1,k}(r, i) mod p^k` for `1 <= k <= n`,
/// `j <= n - k`, `r < 2^(n-k)`, `i <= m(2^n - 1)`. Requires `a > n`.
pub fn verify_lemma_ind(ctx: &DigitContext) -> SweepResult {
    let n = ctx.n;
    if ctx.a == n {
        return SweepResult::assemble((*ctx).into(), Vec::new(), None);
    }
    let i_top = ctx.m(ctx.width() - 1);
    let engine = Engine::new(*ctx).prepared(i_top, n + 1);
    let specs: Vec<(u32, u64, u32, u64)> = (1..=n)
        .flat_map(|k| (0..1u64 << (n - k)).flat_map(move |r| (0..=n - k).flat_map(move |j| (0..=i_top).map(move |i| (k, r, j, i)))))
        .collect();
    let cells = specs
        .par_iter()
        .map(|&(k, r, j, i)| {
            let lhs = Rational::from_integer(engine.x_block_int(k, r, i, j).expect("in range"));
            let y = engine.y_rational(reflect(n, r), i, j).expect("in range");
            let rhs = y * Rational::from_integer(engine.x_block_int(k, r, i, j + 1).expect("in range"));
            Cell::new(Some(k), Some(r), i, Some(j), vp(&(lhs - rhs), ctx.p), PAdicVal::Finite(k as i64))
        })
        .collect();
    SweepResult::assemble((*ctx).into(), cells, None)
}

/// Base case: `X_{n-k,k}(r, i) == 0 mod p^k` for `1 <= k <= n`.
/// Requires `a > n`.
pub fn verify_lemma_base(ctx: &DigitContext) -> SweepResult {
    let n = ctx.n;
    if ctx.a == n {
        return SweepResult::assemble((*ctx).into(), Vec::new(), None);
    }
    let i_top = ctx.m(ctx.width() - 1);
    let engine = Engine::new(*ctx).prepared(i_top, n);
    let specs: Vec<(u32, u64, u64)> = (1..=n)
        .flat_map(|k| (0..1u64 << (n - k)).flat_map(move |r| (0..=i_top).map(move |i| (k, r, i))))
        .collect();
    let cells = specs
        .par_iter()
        .map(|&(k, r, i)| {
            let v = vp_int(&engine.x_block_int(k, r, i, n - k).expect("in range"), ctx.p);
            Cell::new(Some(k), Some(r), i, Some(n - k), v, PAdicVal::Finite(k as i64))
        })
        .collect();
    SweepResult::assemble((*ctx).into(), cells, None)
}
