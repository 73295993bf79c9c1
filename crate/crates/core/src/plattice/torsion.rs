use num_bigint::BigInt;
use num_traits::Zero;

use super::snf::residue;
use crate::error::{Error, Result};
use crate::group_algebra::GroupRingElement;
use crate::linalg::Matrix;
use crate::scalars::{is_p_integral, Rational};

/// Finite ℤ_(p)[G]-module ⊕ ℤ/p^{k_i} with a row-convention action: t_i·g = Σ_j a_ij t_j.
#[derive(Clone, Debug, PartialEq)]
pub struct FinPModule {
    pub p: u64,
    pub exponents: Vec<u32>,
    pub labels: Vec<String>,
    /// One matrix per group element; may be empty for a module without recorded action.
    pub action: Vec<Matrix<Rational>>,
}

impl FinPModule {
    pub fn new(p: u64, exponents: Vec<u32>, action: Vec<Matrix<Rational>>) -> Result<Self> {
        let labels = (0..exponents.len()).map(|i| format!("t{i}")).collect();
        let m = FinPModule {
            p,
            exponents,
            labels,
            action,
        };
        m.validate()?;
        Ok(m)
    }

    /// Trivial action by the identity matrix for each of `n` group elements.
    pub fn with_trivial_action(p: u64, exponents: Vec<u32>, n: usize) -> Result<Self> {
        let r = exponents.len();
        Self::new(p, exponents, vec![Matrix::identity(r); n])
    }

    pub fn zero(p: u64) -> Self {
        FinPModule {
            p,
            exponents: vec![],
            labels: vec![],
            action: vec![],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// log_p of the order.
    pub fn length(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn order(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.length() as usize)
    }

    pub fn max_exponent(&self) -> u32 {
        self.exponents.iter().copied().max().unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        if self.exponents.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidRepresentation("exponents not sorted".into()));
        }
        if self.exponents.contains(&0) {
            return Err(Error::InvalidRepresentation("zero exponent".into()));
        }
        let r = self.exponents.len();
        for (g, a) in self.action.iter().enumerate() {
            if a.rows() != r || a.cols() != r {
                return Err(Error::ShapeError(format!("action matrix {g}")));
            }
            for i in 0..r {
                for j in 0..r {
                    let x = &a[(i, j)];
                    if !is_p_integral(x, self.p) {
                        return Err(Error::InvalidRepresentation(format!(
                            "action entry ({i},{j}) of {g}"
                        )));
                    }
                    // p^{k_i}·a_ij must vanish mod p^{k_j}
                    let ki = self.exponents[i];
                    let kj = self.exponents[j];
                    if kj > ki && !residue(x, self.p, kj - ki).is_zero() {
                        return Err(Error::InvalidRepresentation(format!(
                            "action of {g} not well defined on generator {i}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// x·v for v in generator coordinates, reduced mod each exponent.
    pub fn act(&self, x: &GroupRingElement, v: &[Rational]) -> Result<Vec<BigInt>> {
        let coeffs = x
            .rational_coeffs()
            .ok_or_else(|| Error::RangeError("group ring element is not rational".into()))?;
        if coeffs.iter().any(|c| !is_p_integral(c, self.p)) {
            return Err(Error::RangeError(
                "group ring element is not p-integral".into(),
            ));
        }
        if self.action.len() != coeffs.len() && !self.is_zero() {
            return Err(Error::ShapeError(
                "group order does not match the action".into(),
            ));
        }
        let r = self.exponents.len();
        let mut out = vec![Rational::zero(); r];
        for (g, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = self.action[g].apply(v);
            for (o, y) in out.iter_mut().zip(w) {
                *o += c * y;
            }
        }
        Ok(out
            .iter()
            .zip(&self.exponents)
            .map(|(y, &k)| residue(y, self.p, k))
            .collect())
    }
}

pub fn annihilation_witness_check(x: &GroupRingElement, t: &FinPModule) -> Result<bool> {
    for i in 0..t.exponents.len() {
        let mut e = vec![Rational::zero(); t.exponents.len()];
        e[i] = Rational::from_integer(1.into());
        if t.act(x, &e)?.iter().any(|y| !y.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat_int;

    #[test]
    fn examples() {
        let t = FinPModule::with_trivial_action(3, vec![1, 2], 1).unwrap();
        let pmax = GroupRingElement::from_ints(&[9]);
        assert!(annihilation_witness_check(&pmax, &t).unwrap());
        let z3 = FinPModule::with_trivial_action(3, vec![1], 1).unwrap();
        assert!(!annihilation_witness_check(&GroupRingElement::from_ints(&[1]), &z3).unwrap());
        let sign = FinPModule::new(
            3,
            vec![1],
            vec![
                Matrix::identity(1),
                Matrix::from_rows(vec![vec![rat_int(-1)]], 1),
            ],
        )
        .unwrap();
        assert!(annihilation_witness_check(&GroupRingElement::from_ints(&[1, 1]), &sign).unwrap());
        assert!(
            !annihilation_witness_check(&GroupRingElement::from_ints(&[1, -1]), &sign).unwrap()
        );
    }

    #[test]
    fn ill_defined_action_rejected() {
        // sending a generator of order 3 to one of order 9 with coefficient 1 is not well defined
        let a = Matrix::from_rows(
            vec![vec![rat_int(0), rat_int(1)], vec![rat_int(1), rat_int(0)]],
            2,
        );
        assert!(FinPModule::new(3, vec![1, 2], vec![a]).is_err());
    }
}
