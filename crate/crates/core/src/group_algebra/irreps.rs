use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::CycloElement;

use super::GroupData;

/// Irreducible representation given by its matrices ρ(g) for every group element.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepData {
    pub label: String,
    pub degree: usize,
    pub matrices: Vec<Matrix<CycloElement>>,
}

impl IrrepData {
    pub fn character(&self) -> Vec<CycloElement> {
        self.matrices
            .iter()
            .map(|m| (0..self.degree).fold(CycloElement::zero(), |acc, i| &acc + &m[(i, i)]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub characters: usize,
    pub degree_square_sum: usize,
    pub checks: Vec<String>,
}

pub fn validate_irreps(group: &GroupData, irreps: &[IrrepData]) -> Result<ValidationReport> {
    let n = group.order();
    let bad = |s: String| Err(Error::InvalidRepresentation(s));
    if irreps.len() != group.classes().len() {
        return bad(format!(
            "{} representations for {} conjugacy classes",
            irreps.len(),
            group.classes().len()
        ));
    }
    let mut checks = Vec::new();
    for rep in irreps {
        if rep.matrices.len() != n {
            return bad(format!(
                "{}: {} matrices for {n} group elements",
                rep.label,
                rep.matrices.len()
            ));
        }
        for (g, m) in rep.matrices.iter().enumerate() {
            if m.rows() != rep.degree || m.cols() != rep.degree {
                return bad(format!(
                    "{}: matrix of g{g} is not {}x{}",
                    rep.label, rep.degree, rep.degree
                ));
            }
            for x in m.entries() {
                if !group.exponent().is_multiple_of(x.conductor()) {
                    return bad(format!(
                        "{}: entry of g{g} lies outside Q(zeta_{})",
                        rep.label,
                        group.exponent()
                    ));
                }
            }
        }
        if !rep.matrices[0].is_identity() {
            return bad(format!("{}: identity does not act trivially", rep.label));
        }
        for g in 0..n {
            for h in 0..n {
                if rep.matrices[g].mul(&rep.matrices[h]) != rep.matrices[group.mul(g, h)] {
                    return bad(format!(
                        "{}: rho(g{g})rho(g{h}) != rho(g{g}g{h}) for pair (g{g}, g{h})",
                        rep.label
                    ));
                }
            }
        }
        checks.push(format!("{}: multiplicative", rep.label));
    }
    let sq: usize = irreps.iter().map(|r| r.degree * r.degree).sum();
    if sq != n {
        return bad(format!("sum of squared degrees {sq} != |G| = {n}"));
    }
    checks.push(format!("sum of squared degrees = {n}"));
    let chars: Vec<Vec<CycloElement>> = irreps.iter().map(|r| r.character()).collect();
    let inv_n = CycloElement::from(crate::scalars::rat(1, n as i64));
    for (i, a) in chars.iter().enumerate() {
        for (j, b) in chars.iter().enumerate().skip(i) {
            let mut s = CycloElement::zero();
            for g in 0..n {
                s = &s + &(&a[g] * &b[group.inv(g)]);
            }
            let s = &s * &inv_n;
            let expect = if i == j {
                CycloElement::one()
            } else {
                CycloElement::zero()
            };
            if s != expect {
                return bad(format!(
                    "orthogonality fails for characters ({}, {}): <.,.> = {s}",
                    irreps[i].label, irreps[j].label
                ));
            }
        }
    }
    checks.push("characters orthonormal".into());
    Ok(ValidationReport {
        characters: irreps.len(),
        degree_square_sum: sq,
        checks,
    })
}
