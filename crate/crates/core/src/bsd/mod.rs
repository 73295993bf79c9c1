//! Exact evaluation of leading-term products, Euler factors, logarithmic resolvents and height
//! matrices, and the resulting integrality and annihilation checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fitting::{
    dual_basis_pool, fitting_of_presentation, Exactness, FitOptions, Presentation,
};
use crate::group_algebra::{CentralElement, GrMatrix, GroupAlgebra, GroupRingElement};
use crate::linalg::Matrix;
use crate::organiser::MembershipVerdict;
use crate::plattice::{annihilation_witness_check, FinPModule};
use crate::scalars::{CycloElement, Rational};

mod dihedral;

pub use dihedral::{
    dihedral_congruence_check, dihedral_key_element, dihedral_q, h_f_psi, u_psi, DihedralReport,
    DihedralStructure, GVerdict, PsiClass, QInputs,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum EulerNormalisation {
    /// 1 − Φ·a_v + Φ²·Nv⁻².
    #[default]
    AsPrinted,
    /// 1 − Φ·a_v·Nv⁻¹ + Φ²·Nv⁻².
    Customary,
}

#[derive(Clone, Debug)]
pub struct EulerFactor {
    pub element: GroupRingElement,
    pub value: CentralElement,
    /// ι_#(value).
    pub involuted: CentralElement,
}

/// P_v = nr(1 − Φ_v·a_v + Φ_v²·Nv⁻²) with Φ_v the group element `frob`.
pub fn euler_factor(
    ga: &GroupAlgebra,
    frob: usize,
    a_v: i64,
    nv: u64,
    norm: EulerNormalisation,
) -> Result<EulerFactor> {
    let n = ga.order();
    if nv < 2 {
        return Err(Error::RangeError(format!("Nv = {nv} must be at least 2")));
    }
    if frob >= n {
        return Err(Error::RangeError(format!(
            "Frobenius index {frob} outside a group of order {n}"
        )));
    }
    let nv_q = Rational::from_integer((nv as i64).into());
    let mut middle = Rational::from_integer(a_v.into());
    if norm == EulerNormalisation::Customary {
        middle /= &nv_q;
    }
    let group = ga.group();
    let phi = GroupRingElement::basis(n, frob);
    let phi2 = GroupRingElement::basis(n, group.mul(frob, frob));
    let element = GroupRingElement::one(n)
        .sub(&phi.scale(&middle.into()))
        .add(&phi2.scale(&(Rational::from_integer(1.into()) / (&nv_q * &nv_q)).into()));
    let value = ga.reduced_norm_element(&element);
    let involuted = ga.involution_central(&value);
    Ok(EulerFactor {
        element,
        value,
        involuted,
    })
}

/// nr of the pre-assembled logarithmic resolvent matrix.
pub fn log_resolvent(ga: &GroupAlgebra, table: &GrMatrix) -> Result<CentralElement> {
    if !table.is_square() {
        return Err(Error::ShapeError(format!(
            "resolvent table is {}×{}",
            table.rows(),
            table.cols()
        )));
    }
    if table.entries().iter().any(|x| x.len() != ga.order()) {
        return Err(Error::ShapeError(
            "resolvent entries must lie in the group ring of G".into(),
        ));
    }
    ga.reduced_norm(table)
}

/// Assembles entries Σ_g c_g·g from per-g coefficient tables `coeffs[i][j][g]`.
pub fn assemble_resolvent(
    ga: &GroupAlgebra,
    coeffs: &[Vec<Vec<CycloElement>>],
) -> Result<GrMatrix> {
    let k = coeffs.len();
    let n = ga.order();
    if coeffs
        .iter()
        .any(|row| row.len() != k || row.iter().any(|c| c.len() != n))
    {
        return Err(Error::ShapeError(format!(
            "coefficient table must be {k}×{k}×{n}"
        )));
    }
    Ok(Matrix::from_fn(k, k, |i, j| {
        GroupRingElement::from_coeffs(coeffs[i][j].clone())
    }))
}

/// nr of e·(Σ_g ⟨g(P_i), Q_j⟩·g⁻¹)_{ij}; `pairings[g]` is the a×a table at g.
pub fn height_matrix_nr(
    ga: &GroupAlgebra,
    pairings: &[Matrix<CycloElement>],
    a: usize,
    e: &CentralElement,
) -> Result<CentralElement> {
    let n = ga.order();
    if a == 0 {
        return Ok(ga.central_one());
    }
    if pairings.len() != n || pairings.iter().any(|m| m.rows() != a || m.cols() != a) {
        return Err(Error::ShapeError(format!(
            "height table must hold {n} matrices of size {a}×{a}"
        )));
    }
    let group = ga.group();
    let h = Matrix::from_fn(a, a, |i, j| {
        let mut c = vec![CycloElement::zero(); n];
        for (g, m) in pairings.iter().enumerate() {
            c[group.inv(g)] = &c[group.inv(g)] + &m[(i, j)];
        }
        GroupRingElement::from_coeffs(c)
    });
    Ok(ga.reduced_norm(&h)?.restrict(&e.support()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum KeyProductMode {
    #[default]
    #[serde(rename = "general")]
    General,
    #[serde(rename = "classical-selmer")]
    ClassicalSelmer,
}

/// Per-character constants entering the leading-term product.
#[derive(Clone, Debug, Default)]
pub struct KeyProductInput {
    pub a: usize,
    pub d: u32,
    pub alpha: Option<GroupRingElement>,
    pub y: Option<GroupRingElement>,
    /// e_(a); 1 when absent.
    pub e_above: Option<CentralElement>,
    /// P_v(A_{F/k}, 1) for v ∈ T, before applying ι_#.
    pub euler: Vec<CentralElement>,
    pub l_value: Option<CentralElement>,
    pub omega: Option<CentralElement>,
    pub root_number: Option<CentralElement>,
    pub log_resolvent: Option<CentralElement>,
    /// (∧θ)(ht^(a)(∧φ)).
    pub height: Option<CentralElement>,
    pub tau_star: Option<CentralElement>,
    pub varrho: Option<Vec<CentralElement>>,
    pub sha: Option<FinPModule>,
    pub selmer: Option<Presentation>,
}

#[derive(Clone, Debug)]
pub struct CongruenceReport {
    pub mode: KeyProductMode,
    /// The product without α.
    pub element: CentralElement,
    /// Group-ring coefficients of α times the product (α = 1 when absent).
    pub coefficients: GroupRingElement,
    pub integral: bool,
    /// Per group element, whether its coefficient lies in ℤ_(p).
    pub coefficient_integral: Vec<bool>,
    pub annihilates: Option<bool>,
    pub fit_membership: Option<MembershipVerdict>,
    pub fit_flag: Option<Exactness>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.integral
            && self.annihilates != Some(false)
            && self.fit_membership != Some(MembershipVerdict::NotMember)
    }
}

fn require<'a, T>(missing: &mut Vec<String>, name: &str, v: &'a Option<T>) -> Option<&'a T> {
    if v.is_none() {
        missing.push(name.to_string());
    }
    v.as_ref()
}

pub fn key_product(
    ga: &std::sync::Arc<GroupAlgebra>,
    p: u64,
    input: &KeyProductInput,
    mode: KeyProductMode,
) -> Result<CongruenceReport> {
    let n = ga.order();
    let k = ga.num_chars();
    let mut missing = Vec::new();
    let y = require(&mut missing, "y", &input.y);
    let l = require(&mut missing, "L", &input.l_value);
    let omega = require(&mut missing, "Omega", &input.omega);
    let w = require(&mut missing, "w", &input.root_number);
    let ht = require(&mut missing, "height", &input.height);
    let (alpha, lr, tau, varrho) = match mode {
        KeyProductMode::General => (
            require(&mut missing, "alpha", &input.alpha),
            require(&mut missing, "log_resolvent", &input.log_resolvent),
            None,
            None,
        ),
        KeyProductMode::ClassicalSelmer => (
            input.alpha.as_ref(),
            None,
            require(&mut missing, "tau_star", &input.tau_star),
            require(&mut missing, "varrho", &input.varrho),
        ),
    };
    if !missing.is_empty() {
        return Err(Error::IncompleteData(missing));
    }
    let (y, l, omega, w, ht) = (
        y.unwrap(),
        l.unwrap(),
        omega.unwrap(),
        w.unwrap(),
        ht.unwrap(),
    );
    let mut centrals: Vec<&CentralElement> = vec![l, omega, w, ht];
    centrals.extend(input.euler.iter());
    centrals.extend(lr);
    centrals.extend(tau);
    if let Some(v) = varrho {
        centrals.extend(v.iter());
    }
    if centrals.iter().any(|c| c.len() != k) {
        return Err(Error::ShapeError(format!(
            "central constants must have {k} components"
        )));
    }
    if y.len() != n || alpha.is_some_and(|x| x.len() != n) {
        return Err(Error::ShapeError(
            "y and α must lie in the group ring of G".into(),
        ));
    }

    let e_above = input.e_above.clone().unwrap_or_else(|| ga.central_one());
    let mask = e_above.support();
    let mut x = ga
        .reduced_norm_element(y)
        .pow(2 * input.a as u32)
        .restrict(&mask);
    let denom = omega.mul(&w.pow(input.d));
    x = x.mul(&l.div(&denom).map_err(|_| Error::DivisionByZero)?);
    match mode {
        KeyProductMode::General => {
            for pv in &input.euler {
                x = x.mul(&ga.involution_central(pv));
            }
            x = x.mul(lr.unwrap());
        }
        KeyProductMode::ClassicalSelmer => {
            let mut t = tau.unwrap().clone();
            for v in varrho.unwrap() {
                t = t.mul(v);
            }
            x = x.mul(&t.pow(input.d));
        }
    }
    let element = x.mul(ht);

    let scaled_gr = match alpha {
        Some(al) => ga.group().gr_mul(al, &ga.to_group_ring(&element)),
        None => ga.to_group_ring(&element),
    };
    let coefficient_integral: Vec<bool> = scaled_gr
        .coeffs()
        .iter()
        .map(|c| c.p_content(p).is_integral())
        .collect();
    let rational = scaled_gr.is_rational();
    let integral = rational && coefficient_integral.iter().all(|&b| b);
    let annihilates = match &input.sha {
        Some(t) if t.is_zero() => Some(true),
        Some(t) => Some(integral && annihilation_witness_check(&scaled_gr, t)?),
        None => None,
    };
    let (fit_membership, fit_flag) = match &input.selmer {
        Some(pres) => {
            let pool = dual_basis_pool(ga, p, pres.target_rank());
            let mut lat =
                fitting_of_presentation(pres, input.a, &pool, &FitOptions::default())?.lattice;
            if !e_above.is_one() {
                let f = lat.flag;
                lat = lat.scale(&e_above)?;
                lat.flag = f.meet(Exactness::LowerBound);
            }
            (Some(MembershipVerdict::of(&lat, &element)), Some(lat.flag))
        }
        None => (None, None),
    };
    Ok(CongruenceReport {
        mode,
        element,
        coefficients: scaled_gr,
        integral,
        coefficient_integral,
        annihilates,
        fit_membership,
        fit_flag,
    })
}

/// ϱ_v = Σ_ψ det(Nv | V_ψ^{I_v})·e_ψ = Σ_ψ Nv^{dim V_ψ^{I_v}}·e_ψ.
pub fn varrho(fixed_dims: &[usize], nv: u64) -> CentralElement {
    CentralElement::new(
        fixed_dims
            .iter()
            .map(|&d| CycloElement::from(Rational::from_integer((nv as i64).into())).pow(d as u32))
            .collect(),
    )
}

#[cfg(test)]
mod tests;
