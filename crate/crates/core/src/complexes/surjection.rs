use super::AdmissibleComplex;
use crate::error::{Error, Result};
use crate::group_algebra::{CentralElement, GrMatrix};
use crate::linalg::Matrix;
use crate::plattice::{
    left_action_matrices, quotient_module, FinPModule, PLattice, QuotientModule,
};
use crate::scalars::Rational;

/// A surjection π: H²(C) → Y with Y = R[G]^{r_Y} / (relations), given at chain level by a
/// matrix P: F² → R[G]^{r_Y} (row convention).
#[derive(Clone, Debug)]
pub struct Surjection {
    target_rank: usize,
    relations: GrMatrix,
    matrix: GrMatrix,
    target: QuotientModule,
}

impl Surjection {
    pub fn new(c: &AdmissibleComplex, relations: GrMatrix, matrix: GrMatrix) -> Result<Self> {
        let ga = c.algebra();
        let group = ga.group();
        let p = c.p();
        let (r1, r2) = (c.rank_at(1), c.rank_at(2));
        let ry = matrix.cols();
        if matrix.rows() != r2 || (relations.rows() > 0 && relations.cols() != ry) {
            return Err(Error::ShapeError(format!(
                "surjection matrix is {}x{} and relations have {} columns; source rank is {r2}",
                matrix.rows(),
                ry,
                relations.cols()
            )));
        }
        if r1 == 0 || r2 == 0 {
            return Err(Error::ShapeError(
                "surjections need terms in degrees 1 and 2".into(),
            ));
        }
        let pf = group.expand::<Rational>(&matrix).ok_or_else(|| {
            Error::InvalidRepresentation("surjection matrix must be rational".into())
        })?;
        let rel = if relations.rows() == 0 {
            Matrix::zeros(0, ry * ga.order())
        } else {
            group
                .expand::<Rational>(&relations)
                .ok_or_else(|| Error::InvalidRepresentation("relations must be rational".into()))?
        };
        if !pf
            .entries()
            .iter()
            .chain(rel.entries())
            .all(|x| crate::scalars::is_p_integral(x, p))
        {
            return Err(Error::InvalidRepresentation(
                "surjection data must be p-integral".into(),
            ));
        }
        let rel_lat = PLattice::from_generators(&rel, p);
        let d1: Matrix<Rational> = group
            .expand(c.differential_from(1).expect("degree 1"))
            .expect("rational");
        let b1 = c.term_basis(1).expect("degree 1");
        let b2 = c.term_basis(2).expect("degree 2");
        for row in b1.mul(&d1).mul(&pf).row_vecs() {
            if !rel_lat.contains(&row) {
                return Err(Error::InvalidRepresentation(
                    "π does not vanish on coboundaries".into(),
                ));
            }
        }
        let image = PLattice::from_generators(&b2.mul(&pf).vstack(&rel), p);
        let standard = PLattice::standard(ry * ga.order(), p);
        if !image.contains_lattice(&standard) {
            return Err(Error::NotSurjective("image of π misses part of Y".into()));
        }
        let target = quotient_module(
            &standard.basis(),
            &rel_lat.basis(),
            p,
            &left_action_matrices(group, ry),
        )?;
        Ok(Surjection {
            target_rank: ry,
            relations,
            matrix,
            target,
        })
    }

    /// π = id on H² = F² / im(∂).
    pub fn identity(c: &AdmissibleComplex) -> Result<Self> {
        if c.idempotent().is_some() {
            return Err(Error::ShapeError(
                "identity surjection needs a complex without idempotent".into(),
            ));
        }
        let d1 = c
            .differential_from(1)
            .ok_or_else(|| Error::ShapeError("no degree 1 term".into()))?;
        Self::new(c, d1.clone(), c.algebra().gr_identity(c.rank_at(2)))
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn relations(&self) -> &GrMatrix {
        &self.relations
    }

    pub fn matrix(&self) -> &GrMatrix {
        &self.matrix
    }

    pub fn target(&self) -> &QuotientModule {
        &self.target
    }

    pub fn torsion(&self) -> &FinPModule {
        &self.target.torsion
    }
}

/// Sum of the primitive idempotents of the support of C at which π is rationally injective.
pub fn surjection_idempotent(c: &AdmissibleComplex, pi: &Surjection) -> CentralElement {
    let ga = c.algebra();
    let h2 = c.component_dims(2);
    let supp = c.support();
    let mask: Vec<bool> = (0..ga.num_chars())
        .map(|chi| {
            let k = ga.degree(chi);
            let rel = if pi.relations.rows() == 0 {
                0
            } else {
                ga.rho_rank(chi, &pi.relations)
            };
            supp[chi] && h2[chi] == pi.target_rank * k - rel
        })
        .collect();
    CentralElement::indicator(ga.num_chars(), &mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::tests::gr;
    use crate::group_algebra::builtin;

    #[test]
    fn identity_is_everywhere_injective() {
        let ga = builtin("C2").unwrap();
        let c = AdmissibleComplex::two_term(&ga, 3, gr(&ga, &[&[&[1, -1]]])).unwrap();
        let pi = Surjection::identity(&c).unwrap();
        assert!(surjection_idempotent(&c, &pi).is_one());
        assert_eq!(pi.target().free_rank, 1);
    }

    #[test]
    fn killing_torsion_keeps_e_pi() {
        let ga = builtin("C1").unwrap();
        let c = AdmissibleComplex::two_term(&ga, 3, gr(&ga, &[&[&[3]]])).unwrap();
        let pi = Surjection::new(&c, gr(&ga, &[&[&[1]]]), gr(&ga, &[&[&[1]]])).unwrap();
        assert!(pi.torsion().is_zero());
        assert!(surjection_idempotent(&c, &pi).is_one());
        let id = Surjection::identity(&c).unwrap();
        assert_eq!(id.torsion().exponents, vec![1]);
    }

    #[test]
    fn not_surjective() {
        let ga = builtin("C1").unwrap();
        let c = AdmissibleComplex::two_term(&ga, 3, gr(&ga, &[&[&[0]]])).unwrap();
        let r = Surjection::new(&c, gr(&ga, &[&[&[9]]]), gr(&ga, &[&[&[3]]]));
        assert!(matches!(r, Err(Error::NotSurjective(_))));
    }

    #[test]
    fn ill_defined_rejected() {
        let ga = builtin("C1").unwrap();
        let c = AdmissibleComplex::two_term(&ga, 3, gr(&ga, &[&[&[3]]])).unwrap();
        let r = Surjection::new(&c, gr(&ga, &[&[&[9]]]), gr(&ga, &[&[&[1]]]));
        assert!(matches!(r, Err(Error::InvalidRepresentation(_))));
    }

    #[test]
    fn free_target_drops_component() {
        // Y = ℤ_(p) with trivial action, as the quotient of ℤ_(p)[C2] by (1 − σ)
        let ga = builtin("C2").unwrap();
        let c = AdmissibleComplex::two_term(&ga, 3, gr(&ga, &[&[&[0]]])).unwrap();
        let pi = Surjection::new(&c, gr(&ga, &[&[&[1, -1]]]), gr(&ga, &[&[&[1]]])).unwrap();
        assert_eq!(
            surjection_idempotent(&c, &pi),
            CentralElement::from_ints(&[1, 0])
        );
    }
}
