//! Text form of [`MultiPoly`]: terms in descending graded-lex order, each
//! written `coeff * z11^a z12^b z21^c z22^d` with every exponent present.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use super::multi::{Monomial, MultiPoly, MAX_ARITY};
use crate::arith::Rational;
use crate::error::{Error, Result};

pub fn var_names(arity: usize) -> &'static [&'static str] {
    match arity {
        2 => &["z1", "z2"],
        4 => &["z11", "z12", "z21", "z22"],
        1 => &["t"],
        _ => &["x1", "x2", "x3"],
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, arity: usize, m: &Monomial) -> fmt::Result {
    for (v, name) in var_names(arity).iter().enumerate() {
        if v > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{}^{}", name, m.0[v])?;
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().rev().enumerate() {
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{} * ", c.abs())?;
            write_monomial(f, self.arity(), m)?;
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))
}

fn parse_term(arity: usize, body: &str) -> Result<(Monomial, Rational)> {
    let (coeff, vars) = match body.split_once('*') {
        Some((c, v)) => (parse_rational(c)?, v),
        None => (parse_rational(body)?, ""),
    };
    let names = var_names(arity);
    let mut exps = [0u32; MAX_ARITY];
    for factor in vars.split_whitespace() {
        let (name, e) = factor.split_once('^').unwrap_or((factor, "1"));
        let v = names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
        let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
        exps[v] += e;
    }
    Ok((Monomial(exps), coeff))
}

impl MultiPoly {
    /// Inverse of `Display`. Also accepts omitted exponents (`z11` for
    /// `z11^1`) and omitted variables.
    pub fn parse(arity: usize, s: &str) -> Result<MultiPoly> {
        if !(1..=MAX_ARITY).contains(&arity) {
            return Err(Error::OutOfRange(format!("arity {arity}")));
        }
        let s = s.trim();
        let mut out = MultiPoly::zero(arity);
        if s == "0" {
            return Ok(out);
        }
        let (mut negative, mut rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s),
        };
        loop {
            let next = [" + ", " - "].iter().filter_map(|sep| rest.find(sep).map(|at| (at, *sep))).min();
            let (body, tail) = match next {
                Some((at, sep)) => (&rest[..at], Some((sep, &rest[at + sep.len()..]))),
                None => (rest, None),
            };
            if body.trim().is_empty() {
                return Err(Error::Parse(format!("empty term in `{s}`")));
            }
            let (m, c) = parse_term(arity, body)?;
            out.add_term(m, if negative { -c } else { c });
            match tail {
                Some((sep, t)) => {
                    negative = sep == " - ";
                    rest = t;
                }
                None => break,
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn display_format() {
        let nu = MultiPoly::parse(4, "1 * z11 z22 - 1 * z12 z21").unwrap();
        assert_eq!(nu.to_string(), "1 * z11^1 z12^0 z21^0 z22^1 - 1 * z11^0 z12^1 z21^1 z22^0");
        let f = &nu.pow(3).scale(&rat(3, 2)) + &MultiPoly::constant(4, rat(-1, 4));
        let s = f.to_string();
        assert!(s.starts_with("3/2 * z11^3 z12^0 z21^0 z22^3"));
        assert!(s.ends_with(" - 1/4 * z11^0 z12^0 z21^0 z22^0"));
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
        assert_eq!(MultiPoly::var(2, 1).scale(&rat(-5, 1)).to_string(), "-5 * z1^0 z2^1");
    }

    #[test]
    fn round_trip() {
        let inputs = [
            (4, "3/2 * z11^3 z22^3 - 9/2 * z11^2 z12 z21 z22^2 + 7"),
            (2, "-1 * z1^4 + 2/3 * z2"),
            (2, "0"),
        ];
        for (ar, s) in inputs {
            let p = MultiPoly::parse(ar, s).unwrap();
            assert_eq!(MultiPoly::parse(ar, &p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(MultiPoly::parse(4, "1 * z3^2"), Err(Error::Parse(_))));
        assert!(matches!(MultiPoly::parse(2, "x * z1"), Err(Error::Parse(_))));
        assert!(matches!(MultiPoly::parse(2, "1 * z1 + "), Err(Error::Parse(_))));
    }
}
