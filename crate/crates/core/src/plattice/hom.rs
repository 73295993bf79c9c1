use num_bigint::BigInt;
use num_traits::Zero;

use super::snf::{snf_plocal, val};
use crate::error::{Error, Result};
use crate::group_algebra::{GroupData, GroupRingElement};
use crate::linalg::Matrix;
use crate::scalars::{is_p_integral, Rational};

/// R[G]-linear map ψ: Z → R[G] on a lattice Z ⊆ ℚ[G]^r, stored through the functional
/// φ = (coefficient of 1)∘ψ, so that ψ(x)_h = φ(h⁻¹x).
#[derive(Clone, Debug)]
pub struct EquivariantHom {
    group: GroupData,
    p: u64,
    rank: usize,
    source: Matrix<Rational>,
    functional: Vec<Rational>,
}

impl EquivariantHom {
    pub fn new(
        group: &GroupData,
        p: u64,
        source: Matrix<Rational>,
        functional: Vec<Rational>,
    ) -> Result<Self> {
        let n = group.order();
        if !source.cols().is_multiple_of(n) || functional.len() != source.cols() {
            return Err(Error::ShapeError("source and functional lengths".into()));
        }
        Ok(EquivariantHom {
            group: group.clone(),
            p,
            rank: source.cols() / n,
            source,
            functional,
        })
    }

    /// The map ℚ[G]^r → ℚ[G] sending e_k to cols[k], on the standard lattice.
    pub fn from_columns(group: &GroupData, p: u64, cols: &[GroupRingElement]) -> Result<Self> {
        let n = group.order();
        let mut f = Vec::with_capacity(cols.len() * n);
        for c in cols {
            for h in 0..n {
                let v = c.coeff(group.inv(h));
                f.push(
                    v.to_rational()
                        .ok_or_else(|| Error::RangeError("irrational coefficient".into()))?,
                );
            }
        }
        let r = cols.len();
        Self::new(group, p, Matrix::identity(r * n), f)
    }

    /// The map with prescribed values on the generators of `source`; fails if no R[G]-linear
    /// map has these values.
    pub fn from_values(
        group: &GroupData,
        p: u64,
        source: Matrix<Rational>,
        values: &[GroupRingElement],
    ) -> Result<Self> {
        if values.len() != source.rows() {
            return Err(Error::ShapeError("one value per generator".into()));
        }
        let (a, t) = value_system(group, &source, |i, h| {
            values[i]
                .coeff(h)
                .to_rational()
                .ok_or_else(|| Error::RangeError("irrational value".into()))
        })?;
        let f = a
            .transpose()
            .solve_left(&t)
            .ok_or_else(|| Error::InvalidRepresentation("values are not G-compatible".into()))?;
        Self::new(group, p, source, f)
    }

    pub fn source(&self) -> &Matrix<Rational> {
        &self.source
    }

    pub fn functional(&self) -> &[Rational] {
        &self.functional
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eval(&self, x: &[Rational]) -> GroupRingElement {
        let n = self.group.order();
        GroupRingElement::from_rationals(
            (0..n)
                .map(|h| {
                    let y = self.group.act(self.group.inv(h), x);
                    dot(&y, &self.functional)
                })
                .collect(),
        )
    }

    /// Values on the standard basis e_k of ℚ[G]^r.
    pub fn columns(&self) -> Vec<GroupRingElement> {
        let n = self.group.order();
        (0..self.rank)
            .map(|k| {
                let mut e = vec![Rational::zero(); self.rank * n];
                e[k * n] = Rational::from_integer(1.into());
                self.eval(&e)
            })
            .collect()
    }

    /// ψ maps the source lattice into ℤ_(p)[G].
    pub fn is_integral(&self) -> bool {
        self.source
            .row_vecs()
            .iter()
            .all(|b| self.eval(b).is_p_integral(self.p))
    }

    /// ψ(g·b) = g·ψ(b) for all generators b and group elements g.
    pub fn check_linearity(&self) -> bool {
        let g = &self.group;
        self.source.row_vecs().iter().all(|b| {
            let v = self.eval(b);
            (0..g.order()).all(|s| {
                self.eval(&g.act(s, b)) == g.gr_mul(&GroupRingElement::basis(g.order(), s), &v)
            })
        })
    }

    /// x ↦ ψ(x)·z, which is again R[G]-linear and equals z·ψ for central z.
    pub fn scaled(&self, z: &GroupRingElement) -> Result<Self> {
        let zc = z
            .rational_coeffs()
            .ok_or_else(|| Error::RangeError("irrational scalar".into()))?;
        let n = self.group.order();
        let mut f = vec![Rational::zero(); self.functional.len()];
        // φ'(x) = Σ_g z_g φ(g x)
        for (g, c) in zc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, fi) in f.iter_mut().enumerate() {
                let (k, h) = (i / n, i % n);
                let src = &self.functional[k * n + self.group.mul(g, h)];
                if !src.is_zero() {
                    *fi += c * src;
                }
            }
        }
        Ok(EquivariantHom {
            functional: f,
            ..self.clone()
        })
    }

    /// Restriction to a sublattice given by generators.
    pub fn restrict(&self, source: Matrix<Rational>) -> Self {
        EquivariantHom {
            source,
            ..self.clone()
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |s, (x, y)| s + x * y)
}

/// Rows h⁻¹·b and targets value(b)_h for all generators b and h ∈ G.
fn value_system(
    group: &GroupData,
    source: &Matrix<Rational>,
    value: impl Fn(usize, usize) -> Result<Rational>,
) -> Result<(Matrix<Rational>, Vec<Rational>)> {
    let n = group.order();
    let mut rows = Vec::with_capacity(source.rows() * n);
    let mut t = Vec::with_capacity(source.rows() * n);
    for i in 0..source.rows() {
        for h in 0..n {
            rows.push(group.act(group.inv(h), source.row(i)));
            t.push(value(i, h)?);
        }
    }
    Ok((Matrix::from_rows(rows, source.cols()), t))
}

/// Extends ψ·z from the source lattice Z of `phi` to an R[G]-linear map on the whole free
/// module ℤ_(p)[G]^r.
pub fn equivariant_hom_lift(phi: &EquivariantHom, z: &GroupRingElement) -> Result<EquivariantHom> {
    let zphi = phi.scaled(z)?;
    let g = &phi.group;
    let p = phi.p;
    let vals: Vec<GroupRingElement> = phi.source.row_vecs().iter().map(|b| zphi.eval(b)).collect();
    let (a, t) = value_system(g, &phi.source, |i, h| {
        Ok(vals[i].coeff(h).to_rational().expect("rational"))
    })?;
    let s = snf_plocal(&a, p);
    // A f = t  ⇔  D (V⁻¹ f) = U t
    let ut = s.u.transpose().apply(&t);
    let mut y = vec![Rational::zero(); a.cols()];
    let mut worst = 0i64;
    for (i, v) in ut.iter().enumerate() {
        if i < s.rank {
            y[i] = v / &s.d[(i, i)];
            if !y[i].is_zero() {
                worst = worst.max(-val(&y[i], p));
            }
        } else if !v.is_zero() {
            return Err(Error::LiftObstruction {
                order: "infinite".into(),
                detail: "no rational solution".into(),
            });
        }
    }
    if worst > 0 {
        let order = num_traits::pow(BigInt::from(p), worst as usize);
        return Err(Error::LiftObstruction {
            order: order.to_string(),
            detail: format!("solution has denominator {p}^{worst}"),
        });
    }
    let f = s.v.transpose().apply(&y);
    debug_assert!(f.iter().all(|x| is_p_integral(x, p)));
    let n = g.order();
    EquivariantHom::new(g, p, Matrix::identity(phi.rank * n), f)
}

/// ψ as a 1-column group ring matrix acting on row vectors.
pub fn hom_matrix(psi: &EquivariantHom) -> Matrix<GroupRingElement> {
    Matrix::from_rows(psi.columns().into_iter().map(|c| vec![c]).collect(), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::builtin;
    use crate::scalars::rat_int;
    use crate::synth::{int_matrix, random_element, rng};
    use proptest::prelude::*;

    fn trivial() -> GroupData {
        builtin("C1").unwrap().group().clone()
    }

    #[test]
    fn examples() {
        let g = trivial();
        let three = Matrix::from_rows(vec![vec![rat_int(3)]], 1);
        let phi =
            EquivariantHom::from_values(&g, 3, three.clone(), &[GroupRingElement::from_ints(&[1])])
                .unwrap();
        let psi = equivariant_hom_lift(&phi, &GroupRingElement::from_ints(&[3])).unwrap();
        assert_eq!(psi.functional(), &[rat_int(1)]);
        assert_eq!(psi.eval(&[rat_int(3)]), GroupRingElement::from_ints(&[3]));
        match equivariant_hom_lift(&phi, &GroupRingElement::from_ints(&[1])) {
            Err(Error::LiftObstruction { order, .. }) => assert_eq!(order, "3"),
            other => panic!("{other:?}"),
        }
        let s3 = builtin("S3").unwrap();
        let cols = vec![
            GroupRingElement::from_ints(&[1, 2, 0, -1, 0, 3]),
            GroupRingElement::from_ints(&[0, 0, 1, 0, 0, 0]),
        ];
        let full = EquivariantHom::from_columns(s3.group(), 3, &cols).unwrap();
        assert_eq!(full.columns(), cols);
        let same = equivariant_hom_lift(&full, &GroupRingElement::one(6)).unwrap();
        assert_eq!(same.functional(), full.functional());
        assert!(full.check_linearity());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn lift_restricts_to_z_phi(seed in 0u64..500, name in prop::sample::select(vec!["C2", "C3", "S3"])) {
            let ga = builtin(name).unwrap();
            let g = ga.group();
            let n = g.order();
            let mut r = rng(seed);
            let cols: Vec<_> = (0..2).map(|_| random_element(&ga, &mut r, 2)).collect();
            let f0 = EquivariantHom::from_columns(g, 3, &cols).unwrap();
            let z_gens = int_matrix(&mut r, 3, 2 * n, 3);
            let phi = f0.restrict(z_gens.clone());
            let z = random_element(&ga, &mut r, 2);
            let psi = equivariant_hom_lift(&phi, &z).unwrap();
            prop_assert!(psi.is_integral());
            for b in z_gens.row_vecs() {
                prop_assert_eq!(psi.eval(&b), g.gr_mul(&phi.eval(&b), &z));
            }
        }
    }

    #[test]
    fn obstruction_on_scaled_lattice() {
        let ga = builtin("C2").unwrap();
        let g = ga.group();
        let z_gens = Matrix::identity(2).scale(&rat_int(3));
        let third = Rational::new(1.into(), 3.into());
        let f0 = EquivariantHom::new(g, 3, z_gens.clone(), vec![third, rat_int(0)]).unwrap();
        assert!(f0.is_integral());
        assert!(matches!(
            equivariant_hom_lift(&f0, &GroupRingElement::one(2)),
            Err(Error::LiftObstruction { .. })
        ));
        let psi = equivariant_hom_lift(&f0, &GroupRingElement::from_ints(&[3, 0])).unwrap();
        assert_eq!(psi.columns(), vec![GroupRingElement::from_ints(&[1, 0])]);
    }
}
