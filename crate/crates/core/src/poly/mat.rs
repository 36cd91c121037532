use std::fmt;
use std::ops::Mul;

use num_traits::Zero;

use crate::arith::Integer;

/// An integer 2x2 matrix `[[a11, a12], [a21, a22]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a11: Integer,
    pub a12: Integer,
    pub a21: Integer,
    pub a22: Integer,
}

impl Mat2 {
    pub fn new(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        Mat2 { a11: a11.into(), a12: a12.into(), a21: a21.into(), a22: a22.into() }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn diag(a1: i64, a2: i64) -> Self {
        Mat2::new(a1, 0, 0, a2)
    }

    /// `[[1, 0], [1, 1]]`, acting as `exp(D)`.
    pub fn lower_unipotent() -> Self {
        Mat2::new(1, 0, 1, 1)
    }

    /// `[[1, 1], [0, 1]]`, acting as `exp(E)`.
    pub fn upper_unipotent() -> Self {
        Mat2::new(1, 1, 0, 1)
    }

    pub fn det(&self) -> Integer {
        &self.a11 * &self.a22 - &self.a12 * &self.a21
    }

    pub fn is_singular(&self) -> bool {
        self.det().is_zero()
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2 {
            a11: &self.a11 * &o.a11 + &self.a12 * &o.a21,
            a12: &self.a11 * &o.a12 + &self.a12 * &o.a22,
            a21: &self.a21 * &o.a11 + &self.a22 * &o.a21,
            a22: &self.a21 * &o.a12 + &self.a22 * &o.a22,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}
