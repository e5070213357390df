pub mod error;
pub mod lattice;
pub mod limits;
pub mod numerics;
pub mod tgtg;

pub use error::{Error, Result};
