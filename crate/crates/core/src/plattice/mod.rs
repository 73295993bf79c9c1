//! Linear algebra over ℤ_(p) and ℤ_(p)[G].

mod hom;
mod lattice;
mod quotient;
mod snf;
mod torsion;

pub use hom::{equivariant_hom_lift, hom_matrix, EquivariantHom};
pub use lattice::{lattice_membership, vector_content, Membership, PLattice};
pub use quotient::{cohomology, quotient_module, LatticeComplex, QuotientModule};
pub use snf::{residue, snf_diagonal, snf_plocal, Snf};
pub use torsion::{annihilation_witness_check, FinPModule};

use crate::group_algebra::GroupData;
use crate::linalg::Matrix;
use crate::scalars::Rational;

/// Permutation matrix of the left action of g on ℚ[G]^r (row convention).
pub fn left_action_matrix(group: &GroupData, g: usize, r: usize) -> Matrix<Rational> {
    let n = group.order();
    let mut m = Matrix::zeros(r * n, r * n);
    for k in 0..r {
        for h in 0..n {
            m[(k * n + h, k * n + group.mul(g, h))] = Rational::from_integer(1.into());
        }
    }
    m
}

pub fn left_action_matrices(group: &GroupData, r: usize) -> Vec<Matrix<Rational>> {
    (0..group.order())
        .map(|g| left_action_matrix(group, g, r))
        .collect()
}
