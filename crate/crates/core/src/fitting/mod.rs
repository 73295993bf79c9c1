//! Whitehead-order estimates, denominator witnesses and non-commutative Fitting invariants.

mod lattice;
mod whitehead;

pub use lattice::{CentralLattice, Exactness};
pub use whitehead::{
    default_entry_pool, default_whitehead, denominator_witnesses, whitehead_estimate_with,
    whitehead_lattice_estimate, DenominatorWitness, WhiteheadConfig, WhiteheadEstimate,
};
mod minors;
pub use minors::{
    dual_basis_pool, fitting_invariant_matrix, replace_columns, FitOptions, FitResult,
};
mod presentation;
pub use presentation::{
    annihilation_from_fitting, fitting_of_presentation, total_fitting_lower_bound,
    AnnihilationCertificate, AnnihilationCheck, Presentation,
};
