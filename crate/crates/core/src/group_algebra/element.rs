use crate::error::{Error, Result};
use crate::scalars::{CycloElement, Field, Rational};

use super::GroupData;

/// Scalar ring an element is meant to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarRing {
    Rational,
    /// ℤ localised at p.
    PLocal(u64),
    Cyclotomic(u64),
}

/// Element Σ_g a_g·g of a group ring, coefficients indexed by group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    coeffs: Vec<CycloElement>,
}

impl GroupRingElement {
    pub fn zero(n: usize) -> Self {
        GroupRingElement {
            coeffs: vec![CycloElement::zero(); n],
        }
    }

    pub fn one(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, g: usize) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[g] = CycloElement::one();
        e
    }

    pub fn scalar(n: usize, c: CycloElement) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[0] = c;
        e
    }

    pub fn from_coeffs(coeffs: Vec<CycloElement>) -> Self {
        GroupRingElement { coeffs }
    }

    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        GroupRingElement {
            coeffs: coeffs.into_iter().map(CycloElement::from).collect(),
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        GroupRingElement {
            coeffs: coeffs.iter().map(|&c| CycloElement::from_int(c)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, g: usize) -> &CycloElement {
        &self.coeffs[g]
    }

    pub fn coeffs(&self) -> &[CycloElement] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, g: usize, c: CycloElement) {
        self.coeffs[g] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.to_rational()).collect()
    }

    pub fn to_field<F: Field>(&self) -> Option<Vec<F>> {
        self.coeffs.iter().map(F::from_cyclo).collect()
    }

    pub fn lies_in(&self, ring: ScalarRing) -> bool {
        match ring {
            ScalarRing::Rational => self.is_rational(),
            ScalarRing::PLocal(p) => {
                self.is_rational() && self.coeffs.iter().all(|c| c.p_content(p).is_integral())
            }
            ScalarRing::Cyclotomic(m) => self.coeffs.iter().all(|c| m % c.conductor() == 0),
        }
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| c.p_content(p).is_integral())
    }

    pub fn add(&self, o: &Self) -> Self {
        GroupRingElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GroupRingElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &CycloElement) -> Self {
        GroupRingElement {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Sum of coefficients (image under the trivial character).
    pub fn augmentation(&self) -> CycloElement {
        self.coeffs
            .iter()
            .fold(CycloElement::zero(), |acc, c| &acc + c)
    }
}

impl GroupData {
    pub fn gr_mul(&self, x: &GroupRingElement, y: &GroupRingElement) -> GroupRingElement {
        let n = self.order();
        let mut out = vec![CycloElement::zero(); n];
        for (g, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (h, b) in y.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let k = self.mul(g, h);
                    out[k] = &out[k] + &(a * b);
                }
            }
        }
        GroupRingElement { coeffs: out }
    }

    /// The anti-involution ι_#: g ↦ g⁻¹.
    pub fn involution(&self, x: &GroupRingElement) -> GroupRingElement {
        let mut out = vec![CycloElement::zero(); self.order()];
        for (g, a) in x.coeffs.iter().enumerate() {
            out[self.inv(g)] = a.clone();
        }
        GroupRingElement { coeffs: out }
    }

    pub fn gr_pow(&self, x: &GroupRingElement, e: u32) -> GroupRingElement {
        let mut r = GroupRingElement::one(self.order());
        for _ in 0..e {
            r = self.gr_mul(&r, x);
        }
        r
    }

    pub fn is_central(&self, x: &GroupRingElement) -> bool {
        self.classes()
            .iter()
            .all(|c| c.iter().all(|&g| x.coeff(g) == x.coeff(c[0])))
    }

    /// Left action of g on a flat vector of ℚ[G]^r: coordinate (k, h) moves to (k, gh).
    pub fn act<F: Field>(&self, g: usize, v: &[F]) -> Vec<F> {
        let n = self.order();
        let mut out = vec![F::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let (k, h) = (i / n, i % n);
                out[k * n + self.mul(g, h)] = x.clone();
            }
        }
        out
    }

    /// Left multiplication of a flat vector of ℚ[G]^r by a group ring element.
    pub fn left_mul_vec<F: Field>(&self, x: &GroupRingElement, v: &[F]) -> Result<Vec<F>> {
        let n = self.order();
        let mut out = vec![F::zero(); v.len()];
        for (g, a) in x.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let a = F::from_cyclo(a)
                .ok_or_else(|| Error::ShapeError("coefficient outside the working field".into()))?;
            for (i, y) in v.iter().enumerate() {
                if !y.is_zero() {
                    let (k, h) = (i / n, i % n);
                    let j = k * n + self.mul(g, h);
                    out[j] = out[j].fadd(&a.fmul(y));
                }
            }
        }
        Ok(out)
    }

    /// Flat vector of ℚ[G]^r from group ring entries.
    pub fn flatten<F: Field>(&self, v: &[GroupRingElement]) -> Option<Vec<F>> {
        let mut out = Vec::with_capacity(v.len() * self.order());
        for x in v {
            out.extend(x.to_field::<F>()?);
        }
        Some(out)
    }

    pub fn unflatten<F: Field>(&self, v: &[F]) -> Vec<GroupRingElement> {
        v.chunks(self.order())
            .map(|c| GroupRingElement::from_coeffs(c.iter().map(|x| x.to_cyclo()).collect()))
            .collect()
    }
}
