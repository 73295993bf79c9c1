use num_traits::{One, Zero};

use super::{CycloElement, Rational};

/// Exact field arithmetic used by the generic linear algebra.
pub trait Field: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    fn finv(&self) -> Option<Self>;
    fn from_rational(q: &Rational) -> Self;
    fn from_cyclo(c: &CycloElement) -> Option<Self>;
    fn to_cyclo(&self) -> CycloElement;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Field for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn from_cyclo(c: &CycloElement) -> Option<Self> {
        c.to_rational()
    }
    fn to_cyclo(&self) -> CycloElement {
        CycloElement::Rat(self.clone())
    }
}

impl Field for CycloElement {
    fn zero() -> Self {
        CycloElement::zero()
    }
    fn one() -> Self {
        CycloElement::one()
    }
    fn is_zero(&self) -> bool {
        CycloElement::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn from_rational(q: &Rational) -> Self {
        CycloElement::Rat(q.clone())
    }
    fn from_cyclo(c: &CycloElement) -> Option<Self> {
        Some(c.clone())
    }
    fn to_cyclo(&self) -> CycloElement {
        self.clone()
    }
}
