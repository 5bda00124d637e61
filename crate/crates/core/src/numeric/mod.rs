//! Floating-point support: arbitrary-precision reals and complexes with error
//! bounds, compensated summation, and double-exponential quadrature.

mod bigreal;
mod complex;
pub mod quadrature;
mod sum;

pub use bigreal::{BigReal, DEFAULT_PREC};
pub(crate) use bigreal::{bigfloat_to_f64, RM};
pub use complex::BigComplex;
pub use sum::CompensatedSum;
