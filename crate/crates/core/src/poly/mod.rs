//! Exact polynomial arithmetic over the rationals.
//!
//! [`MultiPoly`] is sparse, in two variables `z1, z2` (arity 2) or four
//! variables `z11, z12, z21, z22` (arity 4). [`UniPoly`] is dense in `t`.
//! [`Mat2`] acts on both through `(alpha f)(z) = f(z alpha)`, with `z` a row
//! vector or a 2x2 matrix of variables.

mod mat;
mod multi;
mod text;
mod uni;

pub use mat::Mat2;
pub use multi::{Monomial, MultiPoly, MAX_ARITY};
pub use text::var_names;
pub use uni::UniPoly;
