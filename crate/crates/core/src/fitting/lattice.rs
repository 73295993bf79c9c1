use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group_algebra::{CentralElement, GroupAlgebra};
use crate::plattice::PLattice;
use crate::scalars::Rational;

/// How a computed lattice relates to the lattice it estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Exactness {
    #[serde(rename = "EXACT")]
    Exact,
    #[serde(rename = "APPROXIMATE-FROM-BELOW")]
    ApproximateFromBelow,
    #[serde(rename = "LOWER-BOUND")]
    LowerBound,
}

impl Exactness {
    /// The weaker of two flags.
    pub fn meet(self, o: Exactness) -> Exactness {
        self.max(o)
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "EXACT",
            Exactness::ApproximateFromBelow => "APPROXIMATE-FROM-BELOW",
            Exactness::LowerBound => "LOWER-BOUND",
        })
    }
}

/// ℤ_(p)-lattice in Z(ℚ[G]), held in class-sum coordinates.
#[derive(Clone, Debug)]
pub struct CentralLattice {
    ga: Arc<GroupAlgebra>,
    p: u64,
    lattice: PLattice,
    generators: Vec<CentralElement>,
    pub flag: Exactness,
}

impl CentralLattice {
    pub fn zero(ga: &Arc<GroupAlgebra>, p: u64, flag: Exactness) -> Self {
        let k = ga.group().classes().len();
        CentralLattice {
            ga: ga.clone(),
            p,
            lattice: PLattice::zero(k, p),
            generators: vec![],
            flag,
        }
    }

    pub fn from_generators(
        ga: &Arc<GroupAlgebra>,
        p: u64,
        gens: impl IntoIterator<Item = CentralElement>,
        flag: Exactness,
    ) -> Result<Self> {
        let mut l = Self::zero(ga, p, flag);
        for g in gens {
            l.insert(g)?;
        }
        Ok(l)
    }

    /// The image of ℤ_(p)[G] in its centre: class sums.
    pub fn group_ring_centre(ga: &Arc<GroupAlgebra>, p: u64) -> Self {
        let k = ga.group().classes().len();
        let gens = (0..k).map(|i| {
            let mut v = vec![Rational::from_integer(0.into()); k];
            v[i] = Rational::from_integer(1.into());
            ga.from_class_coords(&v)
        });
        Self::from_generators(ga, p, gens, Exactness::Exact).expect("class sums are rational")
    }

    pub fn algebra(&self) -> &Arc<GroupAlgebra> {
        &self.ga
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn coords(&self, z: &CentralElement) -> Result<Vec<Rational>> {
        if !self.ga.is_galois_stable(z) {
            return Err(Error::RangeError("central element is not rational".into()));
        }
        self.ga
            .class_coords(z)
            .ok_or_else(|| Error::RangeError("central element is not rational".into()))
    }

    /// Adds a generator; returns whether the lattice grew.
    pub fn insert(&mut self, z: CentralElement) -> Result<bool> {
        let v = self.coords(&z)?;
        let grew = self.lattice.insert(v);
        if grew {
            self.generators.push(z);
        }
        Ok(grew)
    }

    pub fn contains(&self, z: &CentralElement) -> bool {
        self.coords(z)
            .map(|v| self.lattice.contains(&v))
            .unwrap_or(false)
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Generators that enlarged the lattice when inserted.
    pub fn generators(&self) -> &[CentralElement] {
        &self.generators
    }

    /// Echelon basis as central elements.
    pub fn basis(&self) -> Vec<CentralElement> {
        self.lattice
            .basis_rows()
            .map(|r| self.ga.from_class_coords(r))
            .collect()
    }

    pub fn contains_lattice(&self, o: &CentralLattice) -> bool {
        self.lattice.contains_lattice(&o.lattice)
    }

    pub fn same_as(&self, o: &CentralLattice) -> bool {
        self.lattice.same_as(&o.lattice)
    }

    pub fn sum(&self, o: &CentralLattice) -> CentralLattice {
        let mut out = self.clone();
        for z in o.basis() {
            out.insert(z).expect("rational");
        }
        out.flag = self.flag.meet(o.flag);
        out
    }

    /// ℤ_(p)-span of all products.
    pub fn product(&self, o: &CentralLattice) -> CentralLattice {
        let mut out = Self::zero(&self.ga, self.p, self.flag.meet(o.flag));
        let (a, b) = (self.basis(), o.basis());
        for x in &a {
            for y in &b {
                out.insert(x.mul(y)).expect("rational");
            }
        }
        out
    }

    /// x·L.
    pub fn scale(&self, x: &CentralElement) -> Result<CentralLattice> {
        let mut out = Self::zero(&self.ga, self.p, self.flag);
        for y in self.basis() {
            out.insert(x.mul(&y))?;
        }
        Ok(out)
    }

    pub fn contains_one(&self) -> bool {
        self.contains(&self.ga.central_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::builtin;

    #[test]
    fn centre_and_products() {
        let ga = builtin("S3").unwrap();
        let c = CentralLattice::group_ring_centre(&ga, 3);
        assert_eq!(c.rank(), 3);
        assert!(c.contains_one());
        // e_rho is not 3-integral
        let e = ga.primitive_idempotents()[2].clone();
        assert!(!c.contains(&e));
        let sq = c.product(&c);
        assert!(sq.same_as(&c));
        let three = c.scale(&ga.central_scalar(3.into())).unwrap();
        assert!(c.contains_lattice(&three) && !three.contains_lattice(&c));
    }
}
