pub mod bsd;
pub mod complexes;
pub mod error;
pub mod exterior;
pub mod fitting;
pub mod group_algebra;
pub mod linalg;
pub mod organiser;
pub mod plattice;
pub mod scalars;
pub mod synth;

pub use error::{Error, Result};
