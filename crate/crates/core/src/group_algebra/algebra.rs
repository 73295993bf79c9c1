use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{rat, CycloElement, Field, Rational};

use super::{validate_irreps, CentralElement, GroupData, GroupRingElement, IrrepData};

/// A finite group together with a validated complete set of irreducible representations
/// over E = ℚ(ζ_m), m the exponent. Fixes the Wedderburn decomposition of E[G].
#[derive(Debug)]
pub struct GroupAlgebra {
    group: GroupData,
    irreps: Vec<IrrepData>,
    chars: Vec<Vec<CycloElement>>,
    rational_reps: Vec<Option<Vec<Matrix<Rational>>>>,
    dual: Vec<usize>,
    galois: Vec<(i64, Vec<usize>)>,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl GroupAlgebra {
    pub fn new(group: GroupData, irreps: Vec<IrrepData>) -> Result<Self> {
        validate_irreps(&group, &irreps)?;
        let n = group.order();
        let chars: Vec<Vec<CycloElement>> = irreps.iter().map(|r| r.character()).collect();
        let find = |target: &Vec<CycloElement>| chars.iter().position(|c| c == target);
        let dual = chars
            .iter()
            .map(|c| {
                let d: Vec<CycloElement> = (0..n).map(|g| c[group.inv(g)].clone()).collect();
                find(&d).ok_or_else(|| {
                    Error::InvalidRepresentation("character set not closed under duals".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let m = group.exponent();
        let mut galois = Vec::new();
        for k in 1..=m as i64 {
            if (k as u64).gcd(&m) != 1 {
                continue;
            }
            let perm = chars
                .iter()
                .map(|c| {
                    let s: Vec<CycloElement> = c.iter().map(|x| x.galois(k)).collect();
                    find(&s).ok_or_else(|| {
                        Error::InvalidRepresentation(
                            "character set not closed under Galois action".into(),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            galois.push((k, perm));
        }
        let mut orbit_of = vec![usize::MAX; chars.len()];
        let mut orbits = Vec::new();
        for chi in 0..chars.len() {
            if orbit_of[chi] != usize::MAX {
                continue;
            }
            let mut orb: Vec<usize> = galois.iter().map(|(_, p)| p[chi]).collect();
            orb.sort_unstable();
            orb.dedup();
            for &c in &orb {
                orbit_of[c] = orbits.len();
            }
            orbits.push(orb);
        }
        let rational_reps = irreps
            .iter()
            .map(|r| {
                r.matrices
                    .iter()
                    .map(|m| m.try_map(|x| x.to_rational().ok_or(())))
                    .collect::<std::result::Result<Vec<_>, ()>>()
                    .ok()
            })
            .collect();
        Ok(GroupAlgebra {
            group,
            irreps,
            chars,
            rational_reps,
            dual,
            galois,
            orbits,
            orbit_of,
        })
    }

    pub fn group(&self) -> &GroupData {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn name(&self) -> &str {
        &self.group.name
    }

    pub fn irreps(&self) -> &[IrrepData] {
        &self.irreps
    }

    pub fn num_chars(&self) -> usize {
        self.irreps.len()
    }

    pub fn degree(&self, chi: usize) -> usize {
        self.irreps[chi].degree
    }

    pub fn character(&self, chi: usize) -> &[CycloElement] {
        &self.chars[chi]
    }

    /// Index of the contragredient character χ̌.
    pub fn dual(&self, chi: usize) -> usize {
        self.dual[chi]
    }

    pub fn is_abelian(&self) -> bool {
        self.group.is_abelian()
    }

    /// Rational Wedderburn components: Galois orbits of characters.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, chi: usize) -> usize {
        self.orbit_of[chi]
    }

    pub fn galois_perms(&self) -> &[(i64, Vec<usize>)] {
        &self.galois
    }

    pub fn label(&self, chi: usize) -> &str {
        &self.irreps[chi].label
    }

    pub fn character_index(&self, label: &str) -> Option<usize> {
        self.irreps.iter().position(|r| r.label == label)
    }

    pub fn rho(&self, chi: usize, g: usize) -> &Matrix<CycloElement> {
        &self.irreps[chi].matrices[g]
    }

    /// ρ_χ(x) for a group ring element.
    pub fn rho_element(&self, chi: usize, x: &GroupRingElement) -> Matrix<CycloElement> {
        let k = self.degree(chi);
        let mut out = Matrix::zeros(k, k);
        for (g, a) in x.coeffs().iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&self.irreps[chi].matrices[g].scale(a));
            }
        }
        out
    }

    /// ρ_χ(x) over ℚ when both the representation and x are rational.
    pub fn rho_element_rational(
        &self,
        chi: usize,
        x: &GroupRingElement,
    ) -> Option<Matrix<Rational>> {
        let mats = self.rational_reps[chi].as_ref()?;
        let k = self.degree(chi);
        let mut out = Matrix::<Rational>::zeros(k, k);
        for (g, a) in x.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let a = a.to_rational()?;
            for i in 0..k {
                for j in 0..k {
                    let v = &mats[g][(i, j)];
                    if !Field::is_zero(v) {
                        out[(i, j)] = &out[(i, j)] + &a * v;
                    }
                }
            }
        }
        Some(out)
    }

    pub fn has_rational_rep(&self, chi: usize) -> bool {
        self.rational_reps[chi].is_some()
    }

    /// Coefficient form a_g = (1/|G|) Σ_χ χ(1) χ(g⁻¹) z_χ.
    pub fn to_group_ring(&self, z: &CentralElement) -> GroupRingElement {
        let n = self.order();
        let inv_n = CycloElement::from(rat(1, n as i64));
        let coeffs = (0..n)
            .map(|g| {
                let gi = self.group.inv(g);
                let mut s = CycloElement::zero();
                for chi in 0..self.num_chars() {
                    let zc = z.comp(chi);
                    if !zc.is_zero() {
                        let d = CycloElement::from_int(self.degree(chi) as i64);
                        s = &s + &(&(&d * &self.chars[chi][gi]) * zc);
                    }
                }
                &s * &inv_n
            })
            .collect();
        GroupRingElement::from_coeffs(coeffs)
    }

    /// Components z_χ = (1/χ(1)) Σ_g a_g χ(g) of a central group ring element.
    pub fn from_group_ring(&self, x: &GroupRingElement) -> Result<CentralElement> {
        if !self.group.is_central(x) {
            return Err(Error::ShapeError(
                "group ring element is not central".into(),
            ));
        }
        Ok(self.character_values(x))
    }

    /// (1/χ(1))·tr ρ_χ(x) for every χ; equals the components when x is central.
    pub fn character_values(&self, x: &GroupRingElement) -> CentralElement {
        let comps = (0..self.num_chars())
            .map(|chi| {
                let mut s = CycloElement::zero();
                for (g, a) in x.coeffs().iter().enumerate() {
                    if !a.is_zero() {
                        s = &s + &(a * &self.chars[chi][g]);
                    }
                }
                &s * &CycloElement::from(rat(1, self.degree(chi) as i64))
            })
            .collect();
        CentralElement::new(comps)
    }

    /// Coefficients on class sums (one rational per conjugacy class), if the element is rational.
    pub fn class_coords(&self, z: &CentralElement) -> Option<Vec<Rational>> {
        let x = self.to_group_ring(z);
        self.group
            .classes()
            .iter()
            .map(|c| x.coeff(c[0]).to_rational())
            .collect()
    }

    pub fn from_class_coords(&self, v: &[Rational]) -> CentralElement {
        let mut x = GroupRingElement::zero(self.order());
        for (c, a) in self.group.classes().iter().zip(v) {
            for &g in c {
                x.set_coeff(g, CycloElement::from(a.clone()));
            }
        }
        self.character_values(&x)
    }

    /// z_{χ^σ} = σ(z_χ) for every σ.
    pub fn is_galois_stable(&self, z: &CentralElement) -> bool {
        self.galois.iter().all(|(k, perm)| {
            (0..self.num_chars()).all(|chi| *z.comp(perm[chi]) == z.comp(chi).galois(*k))
        })
    }

    /// χ ↦ χ̌ swap of components (image under ι_#).
    pub fn involution_central(&self, z: &CentralElement) -> CentralElement {
        CentralElement::new(
            (0..self.num_chars())
                .map(|chi| z.comp(self.dual[chi]).clone())
                .collect(),
        )
    }

    pub fn primitive_idempotents(&self) -> Vec<CentralElement> {
        let k = self.num_chars();
        (0..k)
            .map(|chi| {
                let mut mask = vec![false; k];
                mask[chi] = true;
                CentralElement::indicator(k, &mask)
            })
            .collect()
    }

    /// e_χ = (χ(1)/|G|) Σ_g χ(g⁻¹) g.
    pub fn idempotent_element(&self, chi: usize) -> GroupRingElement {
        self.to_group_ring(&self.primitive_idempotents()[chi])
    }

    /// Rational idempotent of a Galois orbit.
    pub fn orbit_idempotent(&self, orbit: usize) -> CentralElement {
        let k = self.num_chars();
        let mask: Vec<bool> = (0..k).map(|chi| self.orbit_of[chi] == orbit).collect();
        CentralElement::indicator(k, &mask)
    }

    pub fn central_one(&self) -> CentralElement {
        CentralElement::one(self.num_chars())
    }

    pub fn central_zero(&self) -> CentralElement {
        CentralElement::zero(self.num_chars())
    }

    /// Central element of a scalar.
    pub fn central_scalar(&self, c: CycloElement) -> CentralElement {
        CentralElement::constant(self.num_chars(), c)
    }
}
