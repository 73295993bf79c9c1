use serde::Serialize;

use super::special::flat_rows;
use super::{
    canonical_presentations, component_ratio, organising_matrix, special_element,
    verify_organiser_identity, MembershipVerdict, OrganiserVerdict, SpecialElement,
};
use crate::complexes::{
    annihilation_idempotent, characteristic_element, rank_idempotents, AdmissibleComplex,
    Surjection, Trivialisation,
};
use crate::error::{Error, Result};
use crate::exterior::WedgeFrame;
use crate::fitting::{Exactness, FitOptions};
use crate::group_algebra::{
    unit_reduced_norm_test, CentralElement, GrMatrix, GroupAlgebra, GroupRingElement, UnitVerdict,
};
use crate::linalg::Matrix;
use crate::plattice::{annihilation_witness_check, equivariant_hom_lift, EquivariantHom, PLattice};
use crate::scalars::{CycloElement, Rational};

/// The element killing the Ext-obstruction: z enters as nr(z)^a, y as nr(y)^{2a} with the
/// organiser run at z = y².
#[derive(Clone, Debug)]
pub enum Witness {
    Z(GroupRingElement),
    Y(GroupRingElement),
}

impl Witness {
    fn factor(&self, ga: &GroupAlgebra, a: usize) -> CentralElement {
        match self {
            Witness::Z(z) => ga.reduced_norm_element(z).pow(a as u32),
            Witness::Y(y) => ga.reduced_norm_element(y).pow(2 * a as u32),
        }
    }

    fn organiser_z(&self, ga: &GroupAlgebra) -> GroupRingElement {
        match self {
            Witness::Z(z) => z.clone(),
            Witness::Y(y) => ga.group().gr_mul(y, y),
        }
    }
}

pub struct PipelineInput<'a> {
    pub complex: &'a AdmissibleComplex,
    pub trivialisation: &'a Trivialisation,
    /// 𝓛; computed with the canonical splitting when absent.
    pub char_element: Option<CentralElement>,
    pub surjection: &'a Surjection,
    /// Elements of Y_π as flat vectors of ℚ[G]^{r_Y}.
    pub xs: Vec<Vec<Rational>>,
    /// Homomorphisms H¹(C) → R[G], defined on Z¹(C).
    pub phis: Vec<EquivariantHom>,
    /// Denominator witness; Σ_{χ ∈ e_(a)} (|G|/χ(1))·e_χ when absent.
    pub x: Option<CentralElement>,
    pub witness: Witness,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AnnihilationStatus {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "VACUOUS-PASS")]
    VacuousPass,
    #[serde(rename = "USER-WITNESS-FAIL")]
    UserWitnessFail,
}

#[derive(Clone, Debug)]
pub struct AnnihilationVerdict {
    pub element: CentralElement,
    pub integral: bool,
    pub status: AnnihilationStatus,
}

#[derive(Clone, Debug)]
pub struct OrganiserStage {
    pub a: usize,
    pub identity: OrganiserVerdict,
    /// value / nr(Φ) on e_a.
    pub value_ratio: Option<CentralElement>,
    pub value_unit: Option<UnitVerdict>,
    pub fit0_tot: MembershipVerdict,
    pub fit_a: MembershipVerdict,
    pub fit0_tot_flag: Exactness,
    pub fit_a_flag: Exactness,
}

impl OrganiserStage {
    pub fn passed(&self) -> bool {
        self.identity.passed()
            && self.value_unit.is_some_and(|u| u.passed())
            && self.fit_a != MembershipVerdict::NotMember
            && self.fit0_tot != MembershipVerdict::NotMember
    }
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub a: usize,
    pub e_a: CentralElement,
    pub e_above: CentralElement,
    pub e_pi: CentralElement,
    pub char_element: CentralElement,
    pub special: SpecialElement,
    /// nr(z)^a·(∧φ)(η), or nr(y)^{2a}·(∧φ)(η).
    pub value: CentralElement,
    pub outside_reduction: bool,
    pub organiser: Option<OrganiserStage>,
    pub annihilation: AnnihilationVerdict,
    pub seed: u64,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.annihilation.status != AnnihilationStatus::UserWitnessFail
            && self.organiser.as_ref().is_none_or(|o| o.passed())
    }
}

fn default_x(ga: &GroupAlgebra, e: &CentralElement) -> CentralElement {
    let n = ga.order() as i64;
    let supp = e.support();
    CentralElement::new(
        (0..ga.num_chars())
            .map(|chi| {
                if supp[chi] {
                    CycloElement::from(Rational::new(n.into(), (ga.degree(chi) as i64).into()))
                } else {
                    CycloElement::zero()
                }
            })
            .collect(),
    )
}

pub fn integrality_pipeline(input: &PipelineInput<'_>) -> Result<PipelineReport> {
    let c = input.complex;
    let ga = c.algebra();
    let p = c.p();
    let a = input.xs.len();
    if c.start() != 1 || c.end() != 2 || c.idempotent().is_some() {
        return Err(Error::ShapeError(
            "the pipeline takes a two-term complex F¹ → F² over R[G]".into(),
        ));
    }
    if input.phis.len() != a {
        return Err(Error::ShapeError(format!(
            "{} homomorphisms for |𝒳| = {a}",
            input.phis.len()
        )));
    }
    let (r1, r2) = (c.rank_at(1), c.rank_at(2));
    let l = match &input.char_element {
        Some(l) => l.clone(),
        None => characteristic_element(c, input.trivialisation)?.value,
    };
    let pi = input.surjection;
    let special = special_element(c, input.trivialisation, &l, pi, &input.xs, input.seed)?;
    let (e_a, e_above) = rank_idempotents(c, a)?;
    let pairing = special.eta.pair(&input.phis)?;
    let value = input.witness.factor(ga, a).mul(&pairing);

    let above_mask = e_above.support();
    let rel_rows = flat_rows(ga, pi.relations())?;
    let outside_reduction = !e_above.is_zero()
        && match WedgeFrame::new(
            ga,
            pi.target_rank(),
            above_mask.clone(),
            input.xs.clone(),
            &rel_rows,
        ) {
            Ok(_) => false,
            Err(Error::NotFree(_)) => true,
            Err(e) => return Err(e),
        };

    let organiser = if outside_reduction || e_above.is_zero() {
        None
    } else {
        Some(organiser_stage(input, &e_a, &e_above, &value, r1, r2)?)
    };

    let x = input.x.clone().unwrap_or_else(|| default_x(ga, &e_above));
    let target = x.mul(&value);
    let elt = ga.to_group_ring(&target);
    let integral = elt.is_rational() && elt.is_p_integral(p);
    let torsion = pi.torsion();
    let status = if torsion.is_zero() {
        AnnihilationStatus::VacuousPass
    } else if integral && annihilation_witness_check(&elt, torsion)? {
        AnnihilationStatus::Pass
    } else {
        AnnihilationStatus::UserWitnessFail
    };
    Ok(PipelineReport {
        a,
        e_a,
        e_above,
        e_pi: special.e_pi.clone(),
        char_element: l,
        special,
        value,
        outside_reduction,
        organiser,
        annihilation: AnnihilationVerdict {
            element: target,
            integral,
            status,
        },
        seed: input.seed,
    })
}

fn block(rows: Vec<Vec<GroupRingElement>>, cols: usize) -> GrMatrix {
    Matrix::from_rows(rows, cols)
}

/// The auxiliary complex D: X → X ⊕ F¹ → F² on the e_(a)-part and its organising matrix.
fn organiser_stage(
    input: &PipelineInput<'_>,
    e_a: &CentralElement,
    e_above: &CentralElement,
    value: &CentralElement,
    r1: usize,
    r2: usize,
) -> Result<OrganiserStage> {
    let c = input.complex;
    let ga = c.algebra();
    let group = ga.group();
    let n = ga.order();
    let p = c.p();
    let a = input.xs.len();
    let pi = input.surjection;
    let zero = || GroupRingElement::zero(n);

    // ι₂: X → F² through integral preimages of 𝒳 under π
    let pf: Matrix<Rational> = group.expand(pi.matrix()).expect("rational");
    let rel: Matrix<Rational> = if pi.relations().rows() == 0 {
        Matrix::zeros(0, pi.target_rank() * n)
    } else {
        group.expand(pi.relations()).expect("rational")
    };
    let lat = PLattice::from_generators(&pf.vstack(&rel), p);
    let mut gamma = Vec::with_capacity(a);
    for x in &input.xs {
        let w = lat.membership(x).witness.ok_or_else(|| {
            Error::InvalidRepresentation("elements of 𝒳 must lie in the lattice Y".into())
        })?;
        gamma.push(group.unflatten::<Rational>(&w[..r2 * n]));
    }

    // ι₁: X → Z¹(C), injective on e_(a)
    let iota1 = WedgeFrame::search_free(
        ga,
        r1,
        e_above.support(),
        a,
        &c.cocycle_basis(1)?,
        input.seed.wrapping_add(7),
    )?;
    let iota1: Vec<Vec<GroupRingElement>> = iota1
        .basis()
        .iter()
        .map(|v| group.unflatten::<Rational>(v))
        .collect();

    let d0 = block(
        (0..a)
            .map(|i| {
                (0..a)
                    .map(|_| zero())
                    .chain(iota1[i].iter().cloned())
                    .collect()
            })
            .collect(),
        a + r1,
    );
    let d1 = Matrix::from_fn(a + r1, r2, |i, j| {
        if i < a {
            gamma[i][j].clone()
        } else {
            c.differential_from(1).expect("degree 1")[(i - a, j)].clone()
        }
    });
    let d = if e_above.is_one() {
        AdmissibleComplex::three_term(ga, p, d0, d1)?
    } else {
        AdmissibleComplex::with_idempotent(ga, p, 0, vec![d0, d1], e_above.clone())?
    };

    let mut phis_d = Vec::with_capacity(a);
    let zd = d.cocycle_basis(1)?;
    for phi in &input.phis {
        let ext = equivariant_hom_lift(phi, &GroupRingElement::one(n))?;
        let mut f = vec![Rational::from_integer(0.into()); a * n];
        f.extend_from_slice(ext.functional());
        phis_d.push(EquivariantHom::new(group, p, zd.clone(), f)?);
    }
    let om = organising_matrix(&d, &input.witness.organiser_z(ga), &phis_d)?;

    let e0 = annihilation_idempotent(&d);
    let l0 = if e0.is_zero() {
        ga.central_zero()
    } else {
        let d0c = d.component(&e0)?;
        characteristic_element(&d0c, &Trivialisation::zero(&d0c))?.value
    };
    let above_mask = e_above.support();
    let identity = verify_organiser_identity(&om, &l0, &e0, Some(&above_mask))?;

    let a_mask = e_a.support();
    let nr_phi = ga.reduced_norm(&om.phi)?.restrict(&a_mask);
    let value_ratio = component_ratio(&value.restrict(&a_mask), &nr_phi);
    let value_unit = match &value_ratio {
        Some(r) => Some(unit_reduced_norm_test(ga, r, p)?),
        None => None,
    };

    let pres = canonical_presentations(
        &om,
        value,
        (!e_above.is_one()).then_some(e_above),
        &FitOptions::default(),
    )?;
    Ok(OrganiserStage {
        a,
        identity,
        value_ratio,
        value_unit,
        fit0_tot: pres.fit0_tot_verdict,
        fit_a: pres.fit_a_verdict,
        fit0_tot_flag: pres.fit0_tot.flag,
        fit_a_flag: pres.fit_a.flag,
    })
}
