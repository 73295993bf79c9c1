//! Organising matrices, their canonical presentations, non-abelian higher special elements and
//! the end-to-end integrality check.

use std::sync::Arc;

use serde::Serialize;

use crate::complexes::AdmissibleComplex;
use crate::error::{Error, Result};
use crate::fitting::{
    fitting_invariant_matrix, total_fitting_lower_bound, CentralLattice, Exactness, FitOptions,
    Presentation,
};
use crate::group_algebra::{
    unit_reduced_norm_test, CentralElement, GrMatrix, GroupAlgebra, GroupRingElement, UnitVerdict,
};
use crate::linalg::Matrix;
use crate::plattice::{equivariant_hom_lift, EquivariantHom};
use crate::scalars::CycloElement;

mod pipeline;
mod special;

pub use pipeline::{
    integrality_pipeline, AnnihilationStatus, AnnihilationVerdict, OrganiserStage, PipelineInput,
    PipelineReport, Witness,
};
pub use special::{special_element, SpecialElement};

/// Φ = (ψ | Δ¹) with ψ_j the z-scaled lifts of φ_j to D¹, and Λ = (φ_j(δ⁰(b_i⁰))).
#[derive(Clone, Debug)]
pub struct OrganisingMatrix {
    ga: Arc<GroupAlgebra>,
    p: u64,
    pub a: usize,
    pub phi: GrMatrix,
    pub lambda: GrMatrix,
    pub delta1: GrMatrix,
    pub z: GroupRingElement,
    pub homs: Vec<EquivariantHom>,
    pub lifts: Vec<EquivariantHom>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MembershipVerdict {
    #[serde(rename = "MEMBER")]
    Member,
    #[serde(rename = "NOT-MEMBER")]
    NotMember,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl MembershipVerdict {
    pub(crate) fn of(l: &CentralLattice, x: &CentralElement) -> Self {
        if l.contains(x) {
            MembershipVerdict::Member
        } else if l.flag == Exactness::Exact {
            MembershipVerdict::NotMember
        } else {
            MembershipVerdict::Inconclusive
        }
    }
}

/// Resolves the shape of D as (a, d, d − a) with a term in degree 0 of rank a (possibly absent
/// when a = 0).
fn organiser_shape(d: &AdmissibleComplex) -> Result<(usize, usize)> {
    if d.end() != 2 || !(d.start() == 0 || d.start() == 1) {
        return Err(Error::ShapeError(
            "organising matrices need a complex in degrees 0..2".into(),
        ));
    }
    let (a, dd, r2) = (d.rank_at(0), d.rank_at(1), d.rank_at(2));
    if dd < a || r2 != dd - a {
        return Err(Error::ShapeError(format!(
            "ranks ({a}, {dd}, {r2}) are not of the form (a, d, d − a)"
        )));
    }
    Ok((a, dd))
}

pub fn organising_matrix(
    d: &AdmissibleComplex,
    z: &GroupRingElement,
    phis: &[EquivariantHom],
) -> Result<OrganisingMatrix> {
    let ga = d.algebra();
    let group = ga.group();
    let (a, dd) = organiser_shape(d)?;
    if phis.len() != a {
        return Err(Error::ShapeError(format!(
            "{} homomorphisms for a = {a}",
            phis.len()
        )));
    }
    if !group.is_central(z) || !z.is_rational() || !z.is_p_integral(d.p()) {
        return Err(Error::InvalidRepresentation(
            "z must be a central element of ℤ_(p)[G]".into(),
        ));
    }
    if let Some(h0) = d.cohomology_at(0)? {
        if !h0.is_zero() {
            return Err(Error::InvalidRepresentation(
                "D has cohomology in degree 0".into(),
            ));
        }
    }
    let mut lifts = Vec::with_capacity(a);
    for phi in phis {
        if phi.rank() != dd {
            return Err(Error::ShapeError("homomorphism on the wrong module".into()));
        }
        lifts.push(equivariant_hom_lift(phi, z)?);
    }
    let delta1 = d.differential_from(1).expect("degree 1").clone();
    let cols: Vec<Vec<GroupRingElement>> = lifts.iter().map(|l| l.columns()).collect();
    let phi = Matrix::from_fn(dd, dd, |k, j| {
        if j < a {
            cols[j][k].clone()
        } else {
            delta1[(k, j - a)].clone()
        }
    });
    let lambda = match d.differential_from(0) {
        Some(d0) => {
            let rows: Vec<Vec<_>> = (0..a)
                .map(|i| group.flatten(d0.row(i)).expect("rational"))
                .collect();
            Matrix::from_fn(a, a, |i, j| phis[j].eval(&rows[i]))
        }
        None => Matrix::new(0, 0, vec![]),
    };
    Ok(OrganisingMatrix {
        ga: ga.clone(),
        p: d.p(),
        a,
        phi,
        lambda,
        delta1,
        z: z.clone(),
        homs: phis.to_vec(),
        lifts,
    })
}

/// nr(z)^a·nr(Λ)·e₀·𝓛 against nr(Φ).
#[derive(Clone, Debug)]
pub struct OrganiserVerdict {
    pub lhs: CentralElement,
    pub rhs: CentralElement,
    /// lhs/rhs where both are nonzero, 1 where both vanish; None if exactly one vanishes.
    pub ratio: Option<CentralElement>,
    pub exact: bool,
    pub unit: Option<UnitVerdict>,
}

impl OrganiserVerdict {
    pub fn passed(&self) -> bool {
        self.exact || self.unit.is_some_and(|u| u.passed())
    }
}

impl OrganisingMatrix {
    pub fn algebra(&self) -> &Arc<GroupAlgebra> {
        &self.ga
    }

    /// nr(z)^a·nr(Λ)·e₀·𝓛.
    pub fn displayed_element(
        &self,
        l: &CentralElement,
        e0: &CentralElement,
    ) -> Result<CentralElement> {
        let nz = self.ga.reduced_norm_element(&self.z).pow(self.a as u32);
        Ok(nz.mul(&self.ga.reduced_norm(&self.lambda)?).mul(e0).mul(l))
    }

    /// (I_a over 0 | Δ¹).
    pub fn fit_block(&self) -> GrMatrix {
        let n = self.ga.order();
        let a = self.a;
        let dd = self.phi.rows();
        Matrix::from_fn(dd, dd, |k, j| {
            if j < a {
                if k == j {
                    GroupRingElement::one(n)
                } else {
                    GroupRingElement::zero(n)
                }
            } else {
                self.delta1[(k, j - a)].clone()
            }
        })
    }
}

/// Compares on the components in `mask` (all components when None).
pub fn verify_organiser_identity(
    om: &OrganisingMatrix,
    l: &CentralElement,
    e0: &CentralElement,
    mask: Option<&[bool]>,
) -> Result<OrganiserVerdict> {
    let ga = &om.ga;
    let all = vec![true; ga.num_chars()];
    let mask = mask.unwrap_or(&all);
    let lhs = om.displayed_element(l, e0)?.restrict(mask);
    let rhs = ga.reduced_norm(&om.phi)?.restrict(mask);
    let exact = lhs == rhs;
    let ratio = component_ratio(&lhs, &rhs);
    let unit = match &ratio {
        Some(r) => Some(unit_reduced_norm_test(ga, r, om.p)?),
        None => None,
    };
    Ok(OrganiserVerdict {
        lhs,
        rhs,
        ratio,
        exact,
        unit,
    })
}

pub(crate) fn component_ratio(x: &CentralElement, y: &CentralElement) -> Option<CentralElement> {
    let mut out = Vec::with_capacity(x.len());
    for (a, b) in x.comps().iter().zip(y.comps()) {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => out.push(CycloElement::one()),
            (false, false) => out.push(a.div(b).ok()?),
            _ => return None,
        }
    }
    Some(CentralElement::new(out))
}

/// Π: D⁰⊕D¹ → D⁰⊕D² with matrix diag(I_a, Δ¹), the finer Π′ with matrix (0 over Φ), and
/// membership of an element in Fit^{0,tot}(Π) and in Fit^a(I_a over 0 | Δ¹).
#[derive(Clone, Debug)]
pub struct CanonicalPresentations {
    pub pi: Presentation,
    pub finer: Presentation,
    pub block: GrMatrix,
    pub fit0_tot: CentralLattice,
    pub fit_a: CentralLattice,
    pub element: CentralElement,
    pub fit0_tot_verdict: MembershipVerdict,
    pub fit_a_verdict: MembershipVerdict,
}

/// `scale` multiplies both Fitting lattices (an idempotent e passes to R[G]e).
pub fn canonical_presentations(
    om: &OrganisingMatrix,
    element: &CentralElement,
    scale: Option<&CentralElement>,
    opts: &FitOptions,
) -> Result<CanonicalPresentations> {
    let ga = &om.ga;
    let n = ga.order();
    let (a, dd) = (om.a, om.phi.rows());
    // rows: D⁰ then D¹; columns: D⁰ then D²
    let pi_m = Matrix::from_fn(a + dd, dd, |i, j| {
        if i < a {
            if i == j {
                GroupRingElement::one(n)
            } else {
                GroupRingElement::zero(n)
            }
        } else if j < a {
            GroupRingElement::zero(n)
        } else {
            om.delta1[(i - a, j - a)].clone()
        }
    });
    let finer_m = Matrix::from_fn(a + dd, dd, |i, j| {
        if i < a {
            GroupRingElement::zero(n)
        } else {
            om.phi[(i - a, j)].clone()
        }
    });
    let pi = Presentation::new(ga, om.p, pi_m)?;
    let finer = Presentation::new(ga, om.p, finer_m)?;
    if let Err(e) = finer.check_finer_than(&pi, None) {
        return Err(Error::Critical(format!(
            "organiser presentation is not finer: {e}"
        )));
    }
    let mut fit0_tot = total_fitting_lower_bound(&pi, &[(finer.clone(), None)], 0, &[], opts)?;
    let block = om.fit_block();
    let mut fit_a = fitting_invariant_matrix(ga, om.p, &block, a, &om.lifts, opts)?.lattice;
    if let Some(e) = scale {
        let (f0, fa) = (fit0_tot.flag, fit_a.flag);
        fit0_tot = fit0_tot.scale(e)?;
        fit_a = fit_a.scale(e)?;
        fit0_tot.flag = f0.meet(Exactness::LowerBound);
        fit_a.flag = fa.meet(Exactness::LowerBound);
    }
    let fit0_tot_verdict = MembershipVerdict::of(&fit0_tot, element);
    let fit_a_verdict = MembershipVerdict::of(&fit_a, element);
    Ok(CanonicalPresentations {
        pi,
        finer,
        block,
        fit0_tot,
        fit_a,
        element: element.clone(),
        fit0_tot_verdict,
        fit_a_verdict,
    })
}
