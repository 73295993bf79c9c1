//! Group rings, irreducible representation data, central elements and reduced norms.

mod algebra;
mod central;
mod datasets;
mod element;
mod group;
mod irreps;
mod norm;
mod units;

pub use algebra::GroupAlgebra;
pub use central::CentralElement;
pub use datasets::{builtin, BUILTIN_GROUPS};
pub use element::{GroupRingElement, ScalarRing};
pub use group::GroupData;
pub use irreps::{validate_irreps, IrrepData, ValidationReport};
pub use norm::GrMatrix;

pub use units::{unit_reduced_norm_test, unit_test_against, UnitVerdict};
