pub mod compose;
pub mod error;
pub mod examples;
pub mod integrab;
pub mod modulus;
pub mod poly;
pub mod rif;
pub mod singular;
pub mod stability;
mod torus;

pub use error::{Result, RifError};
pub use rif::{Decomposition, Rif, SliceDet, SliceMap, SliceMatrix, SliceZero};
