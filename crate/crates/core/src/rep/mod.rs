//! The polynomials `phi_{k,l}`, `psi_r` and the `sl_2`-type operators acting
//! on `Q[z11, z12, z21, z22]`, together with the `GL_2` action checks.
//!
//! ```text
//! D = z12 d/dz11 + z22 d/dz21      E = z11 d/dz12 + z21 d/dz22      H = ED - DE
//! phi_{k,l} = D^l(phi^k) / l!
//! ```

mod action;
mod main_sum;

pub use action::{
    decompose, pairing, sample_delta, verify_intertwiner_f, verify_ladder, verify_pairing_equivariance,
    verify_unipotent_action, verify_weights,
};
pub use main_sum::{
    intro_coefficient_sum, main_sum, psi_r, verify_dk_identity, verify_intro_coefficients, verify_main, MainCheck,
};

use num_traits::One;

use crate::arith::{binom_int, factorial, Integer, Rational};
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, MAX_ARITY};

pub const Z11: usize = 0;
pub const Z12: usize = 1;
pub const Z21: usize = 2;
pub const Z22: usize = 3;

fn z(v: usize) -> MultiPoly {
    MultiPoly::var(4, v)
}

/// The quadrics the construction is built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePolys {
    /// `z11^2 + z21^2`
    pub phi: MultiPoly,
    /// `z11 z22 - z12 z21`
    pub nu: MultiPoly,
    /// `z11 z12 + z21 z22`
    pub chi: MultiPoly,
    /// `z12^2 + z22^2`
    pub second_quadric: MultiPoly,
    /// `phi * second_quadric`
    pub xi: MultiPoly,
    /// `chi^2`
    pub eta: MultiPoly,
}

impl BasePolys {
    pub fn new() -> Self {
        let phi = &z(Z11).pow(2) + &z(Z21).pow(2);
        let nu = &(&z(Z11) * &z(Z22)) - &(&z(Z12) * &z(Z21));
        let chi = &(&z(Z11) * &z(Z12)) + &(&z(Z21) * &z(Z22));
        let second_quadric = &z(Z12).pow(2) + &z(Z22).pow(2);
        let xi = &phi * &second_quadric;
        let eta = chi.pow(2);
        BasePolys { phi, nu, chi, second_quadric, xi, eta }
    }
}

impl Default for BasePolys {
    fn default() -> Self {
        BasePolys::new()
    }
}

fn need_arity4(f: &MultiPoly) -> Result<()> {
    if f.arity() != 4 {
        return Err(Error::ArityMismatch(4, f.arity()));
    }
    Ok(())
}

fn first_order(f: &MultiPoly, a: (usize, usize), b: (usize, usize)) -> Result<MultiPoly> {
    need_arity4(f)?;
    let left = &z(a.0) * &f.partial_derivative(a.1)?;
    let right = &z(b.0) * &f.partial_derivative(b.1)?;
    Ok(&left + &right)
}

pub fn op_d(f: &MultiPoly) -> Result<MultiPoly> {
    first_order(f, (Z12, Z11), (Z22, Z21))
}

pub fn op_e(f: &MultiPoly) -> Result<MultiPoly> {
    first_order(f, (Z11, Z12), (Z21, Z22))
}

pub fn op_h(f: &MultiPoly) -> Result<MultiPoly> {
    let ed = op_e(&op_d(f)?)?;
    let de = op_d(&op_e(f)?)?;
    Ok(&ed - &de)
}

/// `phi_{k,l}` from the explicit double sum over the expansion of `phi^k`.
pub fn phi_kl(k: u32, l: u32) -> MultiPoly {
    let mut out = MultiPoly::zero(4);
    if l > 2 * k {
        return out;
    }
    let (k, l) = (k as i64, l as i64);
    for j in 0..=k {
        let outer = binom_int(k, j).expect("k >= 0");
        let lo = (l - (2 * k - 2 * j)).max(0);
        for i in lo..=l.min(2 * j) {
            let c = &outer * binom_int(2 * k - 2 * j, l - i).expect("nonneg") * binom_int(2 * j, i).expect("nonneg");
            let mut e = [0u32; MAX_ARITY];
            e[Z11] = (2 * k - 2 * j - l + i) as u32;
            e[Z12] = (l - i) as u32;
            e[Z21] = (2 * j - i) as u32;
            e[Z22] = i as u32;
            out = &out + &MultiPoly::term(4, e, Rational::from_integer(c));
        }
    }
    out
}

/// `phi_{k,l}` as `D^l(phi^k) / l!`.
pub fn phi_kl_by_derivatives(k: u32, l: u32) -> MultiPoly {
    let mut f = BasePolys::new().phi.pow(k);
    for _ in 0..l {
        if f.is_zero() {
            break;
        }
        f = op_d(&f).expect("arity 4");
    }
    let fact = Rational::from_integer(Integer::from(factorial(l as u64)));
    f.scale(&(Rational::one() / fact))
}

/// `[phi_{k,l} nu^m for 0 <= l <= 2k]`, a basis of the lattice these span.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    pub k: u32,
    pub m: u32,
    pub basis: Vec<MultiPoly>,
}

impl LatticeBasis {
    pub fn new(k: u32, m: u32) -> Self {
        let num = BasePolys::new().nu.pow(m);
        let basis = (0..=2 * k).map(|l| &phi_kl(k, l) * &num).collect();
        LatticeBasis { k, m, basis }
    }
}
