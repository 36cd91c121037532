pub mod arith;
pub mod digits;
pub mod engine;
pub mod hyp;
pub mod error;
pub mod poly;
pub mod rep;

pub use error::{Error, Result};
