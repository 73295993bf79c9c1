use std::sync::Arc;

use super::lattice::{CentralLattice, Exactness};
use super::minors::{fitting_invariant_matrix, FitOptions, FitResult};
use crate::error::{Error, Result};
use crate::group_algebra::{CentralElement, GrMatrix, GroupAlgebra, GroupRingElement};
use crate::linalg::Matrix;
use crate::plattice::{
    annihilation_witness_check, left_action_matrices, quotient_module, EquivariantHom, FinPModule,
    PLattice, QuotientModule,
};
use crate::scalars::Rational;

/// F¹ →θ F² → Z → 0 given by the d×d′ matrix of θ (row convention), d ≥ d′.
#[derive(Clone, Debug)]
pub struct Presentation {
    ga: Arc<GroupAlgebra>,
    p: u64,
    matrix: GrMatrix,
}

impl Presentation {
    /// Pads with zero rows when there are fewer relations than generators.
    pub fn new(ga: &Arc<GroupAlgebra>, p: u64, m: GrMatrix) -> Result<Self> {
        let n = ga.order();
        if m.entries()
            .iter()
            .any(|x| x.len() != n || !x.is_rational() || !x.is_p_integral(p))
        {
            return Err(Error::InvalidRepresentation(
                "presentation entries must lie in ℤ_(p)[G]".into(),
            ));
        }
        let mut m = m;
        while m.rows() < m.cols() {
            m.push_row(vec![GroupRingElement::zero(n); m.cols()]);
        }
        Ok(Presentation {
            ga: ga.clone(),
            p,
            matrix: m,
        })
    }

    pub fn matrix(&self) -> &GrMatrix {
        &self.matrix
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn is_quadratic(&self) -> bool {
        self.matrix.is_square()
    }

    fn relations(&self) -> Matrix<Rational> {
        self.ga
            .group()
            .expand::<Rational>(&self.matrix)
            .expect("rational entries")
    }

    /// The presented module as a quotient of ℤ_(p)[G]^{d′}.
    pub fn module(&self) -> Result<QuotientModule> {
        let n = self.ga.order();
        let dp = self.target_rank();
        let acts = left_action_matrices(self.ga.group(), dp);
        quotient_module(&Matrix::identity(dp * n), &self.relations(), self.p, &acts)
    }

    /// Checks that `self` is finer than `coarse`: equal ranks and `iso` (identity when None)
    /// maps the relations of `self` into those of `coarse`.
    pub fn check_finer_than(&self, coarse: &Presentation, iso: Option<&GrMatrix>) -> Result<()> {
        if self.source_rank() != coarse.source_rank() || self.target_rank() != coarse.target_rank()
        {
            return Err(Error::NotFiner("ranks differ".into()));
        }
        let g = self.ga.group();
        let rel = match iso {
            Some(t) => {
                if !t.is_square() || t.rows() != self.target_rank() {
                    return Err(Error::NotFiner("isomorphism has the wrong shape".into()));
                }
                let inv = g
                    .gr_inverse(t)
                    .ok_or_else(|| Error::NotFiner("isomorphism is not invertible".into()))?;
                if !inv.entries().iter().all(|x| x.is_p_integral(self.p))
                    || !t.entries().iter().all(|x| x.is_p_integral(self.p))
                {
                    return Err(Error::NotFiner(
                        "isomorphism is not invertible over ℤ_(p)[G]".into(),
                    ));
                }
                g.expand::<Rational>(&g.gr_matmul(&self.matrix, t))
                    .expect("rational")
            }
            None => self.relations(),
        };
        let target = PLattice::from_generators_untracked(&coarse.relations(), self.p);
        for (i, row) in rel.row_vecs().iter().enumerate() {
            if !target.contains(row) {
                return Err(Error::NotFiner(format!(
                    "relation {} does not map into the coarse relations",
                    i / g.order()
                )));
            }
        }
        Ok(())
    }
}

pub fn fitting_of_presentation(
    pi: &Presentation,
    a: usize,
    phi_pool: &[EquivariantHom],
    opts: &FitOptions,
) -> Result<FitResult> {
    fitting_invariant_matrix(&pi.ga, pi.p, &pi.matrix, a, phi_pool, opts)
}

/// Σ of Fit^a over Π and the supplied finer presentations, each with an optional
/// isomorphism of the free target modules.
pub fn total_fitting_lower_bound(
    pi: &Presentation,
    finer: &[(Presentation, Option<GrMatrix>)],
    a: usize,
    phi_pool: &[EquivariantHom],
    opts: &FitOptions,
) -> Result<CentralLattice> {
    let mut total = fitting_of_presentation(pi, a, phi_pool, opts)?.lattice;
    for (f, iso) in finer {
        f.check_finer_than(pi, iso.as_ref())?;
        total = total.sum(&fitting_of_presentation(f, a, phi_pool, opts)?.lattice);
    }
    total.flag = Exactness::LowerBound;
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct AnnihilationCheck {
    pub element: CentralElement,
    pub integral: bool,
    pub annihilates: bool,
}

#[derive(Clone, Debug)]
pub struct AnnihilationCertificate {
    pub checks: Vec<AnnihilationCheck>,
}

impl AnnihilationCertificate {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.annihilates)
    }
}

/// For each basis element f of Fit⁰(Π), whether w·f annihilates Z.
pub fn annihilation_from_fitting(
    pi: &Presentation,
    w: &CentralElement,
    z: &FinPModule,
    opts: &FitOptions,
) -> Result<AnnihilationCertificate> {
    let coker = pi.module()?;
    if coker.free_rank != 0 || coker.torsion.exponents != z.exponents {
        return Err(Error::PresentationMismatch(format!(
            "presented module has free rank {} and exponents {:?}, expected {:?}",
            coker.free_rank, coker.torsion.exponents, z.exponents
        )));
    }
    let fit = fitting_of_presentation(pi, 0, &[], opts)?.lattice;
    let mut checks = Vec::new();
    for f in fit.basis() {
        let x = w.mul(&f);
        let elt = pi.ga.to_group_ring(&x);
        let integral = elt.is_rational() && elt.is_p_integral(pi.p);
        let annihilates = z.is_zero() || (integral && annihilation_witness_check(&elt, z)?);
        checks.push(AnnihilationCheck {
            element: x,
            integral,
            annihilates,
        });
    }
    Ok(AnnihilationCertificate { checks })
}
