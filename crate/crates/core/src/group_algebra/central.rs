use crate::error::{Error, Result};
use crate::scalars::{CycloElement, Rational};

/// Element of the centre of E[G], stored by its components z_χ (one per irreducible character).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralElement {
    comps: Vec<CycloElement>,
}

impl CentralElement {
    pub fn new(comps: Vec<CycloElement>) -> Self {
        CentralElement { comps }
    }

    pub fn from_ints(comps: &[i64]) -> Self {
        CentralElement {
            comps: comps.iter().map(|&c| CycloElement::from_int(c)).collect(),
        }
    }

    pub fn from_rationals(comps: Vec<Rational>) -> Self {
        CentralElement {
            comps: comps.into_iter().map(CycloElement::from).collect(),
        }
    }

    pub fn constant(k: usize, c: CycloElement) -> Self {
        CentralElement { comps: vec![c; k] }
    }

    pub fn one(k: usize) -> Self {
        Self::constant(k, CycloElement::one())
    }

    pub fn zero(k: usize) -> Self {
        Self::constant(k, CycloElement::zero())
    }

    /// Indicator of a set of characters.
    pub fn indicator(k: usize, mask: &[bool]) -> Self {
        CentralElement {
            comps: (0..k)
                .map(|i| {
                    if mask[i] {
                        CycloElement::one()
                    } else {
                        CycloElement::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comps(&self) -> &[CycloElement] {
        &self.comps
    }

    pub fn comp(&self, chi: usize) -> &CycloElement {
        &self.comps[chi]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.comps.iter().all(|c| c.is_one())
    }

    pub fn support(&self) -> Vec<bool> {
        self.comps.iter().map(|c| !c.is_zero()).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        CentralElement {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CentralElement {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        CentralElement {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CentralElement {
            comps: self.comps.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &CycloElement) -> Self {
        CentralElement {
            comps: self.comps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        CentralElement {
            comps: self.comps.iter().map(|a| a.pow(e)).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(CentralElement {
            comps: self.comps.iter().map(|a| a.inv()).collect::<Result<_>>()?,
        })
    }

    /// Inverse on the support, zero elsewhere.
    pub fn pseudo_inv(&self) -> Self {
        CentralElement {
            comps: self
                .comps
                .iter()
                .map(|a| a.inv().unwrap_or_else(|_| CycloElement::zero()))
                .collect(),
        }
    }

    /// Componentwise quotient where the denominator is nonzero; fails if the
    /// numerator is nonzero where the denominator vanishes.
    pub fn div(&self, o: &Self) -> Result<Self> {
        let comps = self
            .comps
            .iter()
            .zip(&o.comps)
            .map(|(a, b)| {
                if b.is_zero() {
                    if a.is_zero() {
                        Ok(CycloElement::zero())
                    } else {
                        Err(Error::DivisionByZero)
                    }
                } else {
                    a.div(b)
                }
            })
            .collect::<Result<_>>()?;
        Ok(CentralElement { comps })
    }

    /// Keeps the components where `mask` is set.
    pub fn restrict(&self, mask: &[bool]) -> Self {
        CentralElement {
            comps: self
                .comps
                .iter()
                .zip(mask)
                .map(|(a, &m)| if m { a.clone() } else { CycloElement::zero() })
                .collect(),
        }
    }
}
