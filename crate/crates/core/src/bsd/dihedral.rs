use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_algebra::{CentralElement, GroupAlgebra, GroupRingElement};
use crate::linalg::Matrix;
use crate::scalars::{p_content, CycloElement, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PsiClass {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "sign")]
    Sign,
    #[serde(rename = "induced")]
    Induced,
}

/// G with an abelian normal Sylow p-subgroup P of index 2 inverted by τ.
#[derive(Clone, Debug)]
pub struct DihedralStructure {
    ga: Arc<GroupAlgebra>,
    pub p: u64,
    pub in_p: Vec<bool>,
    pub tau: usize,
    pub classes: Vec<PsiClass>,
}

fn is_p_power(mut k: usize, p: usize) -> bool {
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

impl DihedralStructure {
    pub fn new(ga: &Arc<GroupAlgebra>, p: u64) -> Result<Self> {
        let group = ga.group();
        let n = ga.order();
        let fail = |m: String| {
            Err(Error::ClassificationError(format!(
                "{} at p = {p}: {m}",
                ga.name()
            )))
        };
        if p.is_multiple_of(2) {
            return fail("p must be odd".into());
        }
        let in_p: Vec<bool> = (0..n)
            .map(|g| is_p_power(group.element_order(g), p as usize))
            .collect();
        let ps: Vec<usize> = (0..n).filter(|&g| in_p[g]).collect();
        if 2 * ps.len() != n {
            return fail(format!(
                "the p-elements form a set of size {}, not |G|/2",
                ps.len()
            ));
        }
        if ps.iter().any(|&x| {
            ps.iter()
                .any(|&y| !in_p[group.mul(x, y)] || group.mul(x, y) != group.mul(y, x))
        }) {
            return fail("the Sylow p-subgroup is not normal and abelian".into());
        }
        let tau = (0..n).find(|&g| !in_p[g]).expect("index 2");
        if ps
            .iter()
            .any(|&x| group.mul(group.mul(tau, x), group.inv(tau)) != group.inv(x))
        {
            return fail("τ does not invert P".into());
        }
        let one = CycloElement::one();
        let mut classes = Vec::with_capacity(ga.num_chars());
        for chi in 0..ga.num_chars() {
            let v = ga.character(chi);
            let class = match ga.degree(chi) {
                1 if v.iter().all(|x| *x == one) => PsiClass::Trivial,
                1 if (0..n).all(|g| v[g] == if in_p[g] { one.clone() } else { -one.clone() }) => {
                    PsiClass::Sign
                }
                2 if (0..n).all(|g| in_p[g] || v[g].is_zero()) => PsiClass::Induced,
                _ => {
                    return fail(format!(
                        "character {} is not 1, ε or induced from P",
                        ga.label(chi)
                    ))
                }
            };
            classes.push(class);
        }
        Ok(DihedralStructure {
            ga: ga.clone(),
            p,
            in_p,
            tau,
            classes,
        })
    }

    pub fn algebra(&self) -> &Arc<GroupAlgebra> {
        &self.ga
    }

    pub fn class(&self, chi: usize) -> PsiClass {
        self.classes[chi]
    }

    fn find(&self, c: PsiClass) -> usize {
        self.classes
            .iter()
            .position(|&x| x == c)
            .expect("1 and ε always occur")
    }
}

/// Inputs for one branch of 𝒬_ψ. `sqrt` is the supplied square root of |d_k|, |d_K/d_k| or
/// |d_K|·Nf(φ); when `radicand` is given its square is checked against it.
#[derive(Clone, Debug)]
pub struct QInputs {
    pub s_ram: usize,
    pub s_ram_split: usize,
    pub sqrt: CycloElement,
    pub radicand: Option<Rational>,
    pub l_value: CycloElement,
    pub omega: CycloElement,
    pub h: CycloElement,
    pub u: Option<CycloElement>,
}

pub fn dihedral_q(ds: &DihedralStructure, chi: usize, q: &QInputs) -> Result<CycloElement> {
    if let Some(r) = &q.radicand {
        if q.sqrt.pow(2) != CycloElement::from(r.clone()) {
            return Err(Error::RangeError(format!(
                "supplied square root does not square to {r}"
            )));
        }
    }
    let sign = |k: usize| {
        if k.is_multiple_of(2) {
            CycloElement::one()
        } else {
            CycloElement::from_int(-1)
        }
    };
    let prefactor = match ds.class(chi) {
        PsiClass::Trivial => sign(q.s_ram),
        PsiClass::Sign => sign(q.s_ram_split),
        PsiClass::Induced => {
            q.u.clone()
                .ok_or_else(|| Error::IncompleteData(vec!["u_psi".into()]))?
        }
    };
    let denom = &q.omega * &q.h;
    Ok(&(&prefactor * &q.sqrt) * &q.l_value.div(&denom)?)
}

/// h_{F,ψ}(Q) from the values ⟨g(Q), Q⟩ for g ∈ G.
pub fn h_f_psi(
    ds: &DihedralStructure,
    chi: usize,
    i_q: u8,
    pairing: &[CycloElement],
) -> Result<CycloElement> {
    let ga = &ds.ga;
    let group = ga.group();
    let n = ga.order();
    check_iq(i_q)?;
    match (ds.class(chi), i_q) {
        (PsiClass::Trivial, 1) | (PsiClass::Sign, 0) => return Ok(CycloElement::one()),
        _ => {}
    }
    if pairing.len() != n {
        return Err(Error::ShapeError(format!(
            "{} pairing values for |G| = {n}",
            pairing.len()
        )));
    }
    let psi = ga.character(chi);
    let psi_dual = ga.character(ga.dual(chi));
    // ⟨gQ, hQ⟩ = ⟨h⁻¹g·Q, Q⟩
    let mut total = CycloElement::zero();
    for g in 0..n {
        for h in 0..n {
            let c = &psi[group.inv(g)] * &psi_dual[group.inv(h)];
            if c.is_zero() {
                continue;
            }
            total = &total + &(&c * &pairing[group.mul(group.inv(h), g)]);
        }
    }
    Ok(total.scale(&Rational::new(
        (ga.degree(chi) as i64).into(),
        (n as i64).into(),
    )))
}

/// ∏_v det(−Φ_v⁻¹ | V_ψ^{I_v}) from the matrices of Φ_v on the inertia-fixed spaces.
pub fn u_psi(fixed: &[Matrix<CycloElement>]) -> Result<CycloElement> {
    let mut u = CycloElement::one();
    for m in fixed {
        if !m.is_square() {
            return Err(Error::ShapeError("Frobenius matrix must be square".into()));
        }
        let det = m.det();
        if det.is_zero() {
            return Err(Error::RangeError(
                "Frobenius is not invertible on the inertia invariants".into(),
            ));
        }
        let sign = if m.rows() % 2 == 0 {
            CycloElement::one()
        } else {
            CycloElement::from_int(-1)
        };
        u = &u * &sign.div(&det)?;
    }
    Ok(u)
}

fn check_iq(i_q: u8) -> Result<()> {
    if i_q > 1 {
        return Err(Error::RangeError(format!("i_Q = {i_q} must be 0 or 1")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct GVerdict {
    pub g: usize,
    pub value: CycloElement,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct DihedralReport {
    pub i_q: u8,
    pub verdicts: Vec<GVerdict>,
}

impl DihedralReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> Vec<usize> {
        self.verdicts
            .iter()
            .filter(|v| !v.pass)
            .map(|v| v.g)
            .collect()
    }
}

/// The per-g integrality congruence; `q` and `delta` are indexed by character.
pub fn dihedral_congruence_check(
    ds: &DihedralStructure,
    q: &[CycloElement],
    t_q: i64,
    delta: &[CycloElement],
    i_q: u8,
) -> Result<DihedralReport> {
    let ga = &ds.ga;
    let group = ga.group();
    let k = ga.num_chars();
    check_iq(i_q)?;
    if q.len() != k || delta.len() != k {
        return Err(Error::ShapeError(format!("𝒬 and δ need {k} entries")));
    }
    for (chi, d) in delta.iter().enumerate() {
        if ds.class(chi) == PsiClass::Induced
            && d.is_rational()
            && !p_content(d, ds.p).is_integral()
        {
            return Err(Error::RangeError(format!(
                "δ for {} is not in the inverse different at p = {}",
                ga.label(chi),
                ds.p
            )));
        }
    }
    let t2 = CycloElement::from_int(t_q * t_q);
    let two = CycloElement::from_int(2);
    let eps = ds.find(PsiClass::Sign);
    let lead = if i_q == 0 {
        &two * &q[ds.find(PsiClass::Trivial)]
    } else {
        &two * &q[eps]
    };
    let mut verdicts = Vec::with_capacity(ga.order());
    for g in 0..ga.order() {
        let tg = group.mul(ds.tau, g);
        let mut sum = CycloElement::zero();
        for chi in 0..k {
            if ds.class(chi) != PsiClass::Induced {
                continue;
            }
            let dual = ga.character(ga.dual(chi));
            let c = if i_q == 0 {
                &dual[g] + &dual[tg]
            } else {
                &dual[g] - &dual[tg]
            };
            sum = &sum + &(&(&c * &delta[chi]) * &q[chi]);
        }
        let head = if i_q == 0 {
            lead.clone()
        } else {
            &lead * &ga.character(eps)[g]
        };
        let value = &t2 * &(&head + &(&t2 * &sum));
        let pass = p_content(&value, ds.p).is_integral();
        verdicts.push(GVerdict { g, value, pass });
    }
    Ok(DihedralReport { i_q, verdicts })
}

/// (1 + (−1)^{i_Q}τ)·Σ_ψ t_Q^{2ψ(1)}·𝒬_ψ·e_ψ.
pub fn dihedral_key_element(
    ds: &DihedralStructure,
    q: &[CycloElement],
    t_q: i64,
    i_q: u8,
) -> Result<GroupRingElement> {
    let ga = &ds.ga;
    let n = ga.order();
    check_iq(i_q)?;
    if q.len() != ga.num_chars() {
        return Err(Error::ShapeError(format!(
            "𝒬 needs {} entries",
            ga.num_chars()
        )));
    }
    let z = CentralElement::new(
        (0..q.len())
            .map(|chi| &CycloElement::from_int(t_q).pow(2 * ga.degree(chi) as u32) * &q[chi])
            .collect(),
    );
    let sign = if i_q == 0 {
        CycloElement::one()
    } else {
        CycloElement::from_int(-1)
    };
    let factor = GroupRingElement::one(n).add(&GroupRingElement::basis(n, ds.tau).scale(&sign));
    Ok(ga.group().gr_mul(&factor, &ga.to_group_ring(&z)))
}
