use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{op_d, op_e, op_h, phi_kl, LatticeBasis, Z12, Z22};
use crate::arith::{binom_int, Integer, Rational};
use crate::error::{Error, Result};
use crate::poly::{Mat2, Monomial, MultiPoly, MAX_ARITY};

/// Generators of the invertible integer matrices (diagonals and both
/// unipotents) followed by `random` seeded matrices with entries in
/// `[-5, 5]` and nonzero determinant.
pub fn sample_delta(random: usize, seed: u64) -> Vec<Mat2> {
    let mut out = vec![
        Mat2::identity(),
        Mat2::diag(2, 1),
        Mat2::diag(1, -1),
        Mat2::diag(-3, 2),
        Mat2::lower_unipotent(),
        Mat2::upper_unipotent(),
        Mat2::new(1, 0, -1, 1),
        Mat2::new(0, 1, 1, 0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = 0;
    while drawn < random {
        let e: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-5..=5));
        let m = Mat2::new(e[0], e[1], e[2], e[3]);
        if !m.is_singular() {
            out.push(m);
            drawn += 1;
        }
    }
    out
}

fn int(v: i64) -> Rational {
    Rational::from_integer(Integer::from(v))
}

fn binom(n: u32, k: u32) -> Rational {
    Rational::from_integer(binom_int(n as i64, k as i64).expect("n >= 0"))
}

/// `D`, `E` and `H` against their action on `phi_{k,l}` for `k <= k_max`.
pub fn verify_ladder(k_max: u32) -> bool {
    (0..=k_max).all(|k| {
        let phis: Vec<MultiPoly> = (0..=2 * k + 1).map(|l| phi_kl(k, l)).collect();
        (0..=2 * k).all(|l| {
            let lu = l as usize;
            let f = &phis[lu];
            let down = if l == 0 { MultiPoly::zero(4) } else { phis[lu - 1].scale(&int((2 * k - l + 1) as i64)) };
            op_d(f).unwrap() == phis[lu + 1].scale(&int(l as i64 + 1))
                && op_e(f).unwrap() == down
                && op_h(f).unwrap() == f.scale(&int(2 * k as i64 - 2 * l as i64))
        })
    })
}

/// The two unipotent generators act on `phi_{k,l}` by binomial combinations
/// of its neighbours:
///
/// ```text
/// [[1,0],[1,1]] phi_{k,l} = sum_{i <= 2k-l} binom(l+i, i) phi_{k,l+i}
/// [[1,1],[0,1]] phi_{k,l} = sum_{i <= l}    binom(2k-l+i, i) phi_{k,l-i}
/// ```
pub fn verify_unipotent_action(k_max: u32) -> bool {
    let lower = Mat2::lower_unipotent();
    let upper = Mat2::upper_unipotent();
    (0..=k_max).all(|k| {
        let phis: Vec<MultiPoly> = (0..=2 * k).map(|l| phi_kl(k, l)).collect();
        (0..=2 * k).all(|l| {
            let f = &phis[l as usize];
            let expect_lower = (0..=2 * k - l)
                .fold(MultiPoly::zero(4), |acc, i| &acc + &phis[(l + i) as usize].scale(&binom(l + i, i)));
            let expect_upper = (0..=l)
                .fold(MultiPoly::zero(4), |acc, i| &acc + &phis[(l - i) as usize].scale(&binom(2 * k - l + i, i)));
            f.substitute(&lower).unwrap() == expect_lower && f.substitute(&upper).unwrap() == expect_upper
        })
    })
}

/// `H (phi_{k,l} nu^m) = (2k - 2l) phi_{k,l} nu^m` on every lattice basis
/// element with `k <= k_max`, `m <= m_max`.
pub fn verify_weights(k_max: u32, m_max: u32) -> bool {
    (0..=k_max).all(|k| {
        (0..=m_max).all(|m| {
            let lb = LatticeBasis::new(k, m);
            lb.basis
                .iter()
                .enumerate()
                .all(|(l, f)| op_h(f).unwrap() == f.scale(&int(2 * k as i64 - 2 * l as i64)))
        })
    })
}

fn binary_form_coeffs(f: &MultiPoly, k: u32) -> Result<Vec<Rational>> {
    if f.arity() != 2 {
        return Err(Error::ArityMismatch(2, f.arity()));
    }
    let mut c = vec![Rational::zero(); k as usize + 1];
    for (m, v) in f.terms() {
        if m.degree() != k {
            return Err(Error::OutOfRange(format!("term of degree {} in a form of degree {k}", m.degree())));
        }
        c[m.0[1] as usize] = v.clone();
    }
    Ok(c)
}

/// The pairing between binary forms of degree `k` determined by
/// `(binom(k,i) z1^(k-i) z2^i, z1^(k-j) z2^j) = (-1)^i [i + j = k]`.
pub fn pairing(k: u32, f: &MultiPoly, g: &MultiPoly) -> Result<Rational> {
    let a = binary_form_coeffs(f, k)?;
    let b = binary_form_coeffs(g, k)?;
    let mut acc = Rational::zero();
    for i in 0..=k {
        let term = &a[i as usize] / binom(k, i) * &b[(k - i) as usize];
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

fn binary_monomial(k: u32, i: u32, c: Rational) -> MultiPoly {
    let mut e = [0; MAX_ARITY];
    e[0] = k - i;
    e[1] = i;
    MultiPoly::term(2, e, c)
}

/// `(alpha f, alpha g) = det(alpha)^k (f, g)` for all pairs of basis forms
/// of degree `k` and every sample.
pub fn verify_pairing_equivariance(k: u32, samples: &[Mat2]) -> Result<bool> {
    let left: Vec<MultiPoly> = (0..=k).map(|i| binary_monomial(k, i, binom(k, i))).collect();
    let right: Vec<MultiPoly> = (0..=k).map(|j| binary_monomial(k, j, Rational::one())).collect();
    for alpha in samples {
        let det = Rational::from_integer(alpha.det()).pow(k as i32);
        let left_a = left.iter().map(|f| f.substitute(alpha)).collect::<Result<Vec<_>>>()?;
        let right_a = right.iter().map(|f| f.substitute(alpha)).collect::<Result<Vec<_>>>()?;
        for (f, fa) in left.iter().zip(&left_a) {
            for (g, ga) in right.iter().zip(&right_a) {
                if pairing(k, fa, ga)? != &det * pairing(k, f, g)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Coordinates of `f` in [`LatticeBasis::new(k, m)`], or `None` when `f` is
/// not in the span.
///
/// `phi_{k,l} nu^m` is the only basis element whose degree in `z12, z22`
/// is `l + m`, so each coordinate is read off one graded component.
pub fn decompose(f: &MultiPoly, basis: &LatticeBasis) -> Option<Vec<Rational>> {
    let col2 = |mo: &Monomial| mo.0[Z12] + mo.0[Z22];
    let mut coords = Vec::with_capacity(basis.basis.len());
    let mut rebuilt = MultiPoly::zero(4);
    for (l, b) in basis.basis.iter().enumerate() {
        let d = l as u32 + basis.m;
        let part = f.filter(|mo| col2(mo) == d);
        let (lead, lc) = b.leading().expect("basis elements are nonzero");
        let c = part.coeff(lead) / lc;
        rebuilt = &rebuilt + &b.scale(&c);
        coords.push(c);
    }
    (rebuilt == *f).then_some(coords)
}

/// `f(phi_{k,l} nu^m) = binom(2k, l) z1^(2k-l) z2^l`, checked against
/// `f(alpha x) = det(alpha)^m alpha f(x)` on every basis element.
pub fn verify_intertwiner_f(k: u32, m: u32, samples: &[Mat2]) -> Result<bool> {
    let basis = LatticeBasis::new(k, m);
    let images: Vec<MultiPoly> = (0..=2 * k).map(|l| binary_monomial(2 * k, l, binom(2 * k, l))).collect();
    let apply_f = |coords: &[Rational]| {
        coords.iter().zip(&images).fold(MultiPoly::zero(2), |acc, (c, im)| &acc + &im.scale(c))
    };
    for alpha in samples {
        let det_m = Rational::from_integer(alpha.det()).pow(m as i32);
        for (b, image) in basis.basis.iter().zip(&images) {
            let moved = b.substitute(alpha)?;
            let Some(coords) = decompose(&moved, &basis) else {
                return Ok(false);
            };
            if apply_f(&coords) != image.substitute(alpha)?.scale(&det_m) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
