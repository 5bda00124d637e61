//! Mahler measures of P_k = x + 1/x + y + 1/y + z + 1/z − k and the
//! arithmetic of the singular K3 surfaces behind them.

pub mod arith;
pub mod error;
pub mod exactalg;
pub mod lattices;
pub mod lfunctions;
pub mod mahler;
pub mod mwsections;
pub mod numeric;
pub mod pointcount;

pub use error::{Error, Result};
