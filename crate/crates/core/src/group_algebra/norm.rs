use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{CycloElement, Field, Rational};

use super::{CentralElement, GroupAlgebra, GroupData, GroupRingElement};

/// Matrix with group ring entries.
pub type GrMatrix = Matrix<GroupRingElement>;

impl GroupAlgebra {
    /// nr(M): component χ is det of the χ(1)·d square block matrix ρ_χ(M).
    pub fn reduced_norm(&self, m: &GrMatrix) -> Result<CentralElement> {
        if !m.is_square() {
            return Err(Error::ShapeError(format!(
                "reduced norm of a {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        let comps = (0..self.num_chars())
            .map(|chi| self.norm_component(chi, m))
            .collect();
        Ok(CentralElement::new(comps))
    }

    pub fn norm_component(&self, chi: usize, m: &GrMatrix) -> CycloElement {
        if m.rows() == 0 {
            return CycloElement::one();
        }
        match self.rho_matrix_rational(chi, m) {
            Some(big) => CycloElement::from(big.det()),
            None => self.rho_matrix(chi, m).det(),
        }
    }

    /// Block matrix ρ_χ(M), of size χ(1)·rows × χ(1)·cols.
    pub fn rho_matrix(&self, chi: usize, m: &GrMatrix) -> Matrix<CycloElement> {
        let k = self.degree(chi);
        let mut big = Matrix::<CycloElement>::zeros(m.rows() * k, m.cols() * k);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)].is_zero() {
                    continue;
                }
                let blk = self.rho_element(chi, &m[(i, j)]);
                for a in 0..k {
                    for b in 0..k {
                        big[(i * k + a, j * k + b)] = blk[(a, b)].clone();
                    }
                }
            }
        }
        big
    }

    /// ρ_χ(M) over ℚ, when both the representation and the entries are rational.
    pub fn rho_matrix_rational(&self, chi: usize, m: &GrMatrix) -> Option<Matrix<Rational>> {
        if !self.has_rational_rep(chi) || !m.entries().iter().all(|x| x.is_rational()) {
            return None;
        }
        let k = self.degree(chi);
        let mut big = Matrix::<Rational>::zeros(m.rows() * k, m.cols() * k);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)].is_zero() {
                    continue;
                }
                let blk = self.rho_element_rational(chi, &m[(i, j)])?;
                for a in 0..k {
                    for b in 0..k {
                        big[(i * k + a, j * k + b)] = blk[(a, b)].clone();
                    }
                }
            }
        }
        Some(big)
    }

    /// Rank over E of ρ_χ(M).
    pub fn rho_rank(&self, chi: usize, m: &GrMatrix) -> usize {
        match self.rho_matrix_rational(chi, m) {
            Some(r) => r.rank(),
            None => self.rho_matrix(chi, m).rank(),
        }
    }

    /// nr of a 1×1 matrix.
    pub fn reduced_norm_element(&self, x: &GroupRingElement) -> CentralElement {
        self.reduced_norm(&Matrix::new(1, 1, vec![x.clone()]))
            .expect("square")
    }

    pub fn gr_identity(&self, d: usize) -> GrMatrix {
        let n = self.order();
        Matrix::from_fn(d, d, |i, j| {
            if i == j {
                GroupRingElement::one(n)
            } else {
                GroupRingElement::zero(n)
            }
        })
    }

    pub fn gr_zeros(&self, r: usize, c: usize) -> GrMatrix {
        Matrix::filled(r, c, GroupRingElement::zero(self.order()))
    }

    pub fn gr_matmul(&self, a: &GrMatrix, b: &GrMatrix) -> GrMatrix {
        self.group().gr_matmul(a, b)
    }

    /// ι_#-transpose: (ι_#(M_ji))_ij.
    pub fn involution_transpose(&self, m: &GrMatrix) -> GrMatrix {
        Matrix::from_fn(m.cols(), m.rows(), |i, j| {
            self.group().involution(&m[(j, i)])
        })
    }

    pub fn central_to_matrix_entry(&self, z: &CentralElement) -> GroupRingElement {
        self.to_group_ring(z)
    }
}

impl GroupData {
    pub fn gr_matmul(&self, a: &GrMatrix, b: &GrMatrix) -> GrMatrix {
        assert_eq!(a.cols(), b.rows(), "group ring matrix product shape");
        let n = self.order();
        Matrix::from_fn(a.rows(), b.cols(), |i, j| {
            let mut s = GroupRingElement::zero(n);
            for k in 0..a.cols() {
                if !a[(i, k)].is_zero() && !b[(k, j)].is_zero() {
                    s = s.add(&self.gr_mul(&a[(i, k)], &b[(k, j)]));
                }
            }
            s
        })
    }

    /// ℚ-linear matrix of x ↦ x·M on flat vectors of ℚ[G]^r (row convention).
    pub fn expand<F: Field>(&self, m: &GrMatrix) -> Option<Matrix<F>> {
        let n = self.order();
        let mut out = Matrix::<F>::zeros(m.rows() * n, m.cols() * n);
        for k in 0..m.rows() {
            for j in 0..m.cols() {
                for (g, c) in m[(k, j)].coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let c = F::from_cyclo(c)?;
                    for h in 0..n {
                        let col = j * n + self.mul(h, g);
                        let v = out[(k * n + h, col)].fadd(&c);
                        out[(k * n + h, col)] = v;
                    }
                }
            }
        }
        Some(out)
    }

    /// Group ring matrix of an E-linear map given on flat vectors, assuming it is G-equivariant.
    pub fn contract<F: Field>(&self, m: &Matrix<F>) -> GrMatrix {
        let n = self.order();
        let (r, c) = (m.rows() / n, m.cols() / n);
        Matrix::from_fn(r, c, |k, j| {
            GroupRingElement::from_coeffs(
                (0..n).map(|g| m[(k * n, j * n + g)].to_cyclo()).collect(),
            )
        })
    }

    /// Inverse over E[G] via the regular representation.
    pub fn gr_inverse(&self, m: &GrMatrix) -> Option<GrMatrix> {
        if m.entries().iter().all(|x| x.is_rational()) {
            let e = self.expand::<Rational>(m)?;
            Some(self.contract(&e.inverse()?))
        } else {
            let e = self.expand::<CycloElement>(m)?;
            Some(self.contract(&e.inverse()?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::builtin;
    use crate::scalars::rat_int;

    fn gr(ga: &GroupAlgebra, c: &[(usize, i64)]) -> GroupRingElement {
        let mut x = GroupRingElement::zero(ga.order());
        for &(g, a) in c {
            x.set_coeff(g, &CycloElement::from_int(a) + x.coeff(g));
        }
        x
    }

    #[test]
    fn c2_examples() {
        let ga = builtin("C2").unwrap();
        let (a, b) = (4, 7);
        let m = Matrix::new(1, 1, vec![gr(&ga, &[(0, a), (1, b)])]);
        assert_eq!(
            ga.reduced_norm(&m).unwrap(),
            CentralElement::from_ints(&[a + b, a - b])
        );
        let one = gr(&ga, &[(0, 1)]);
        let s = gr(&ga, &[(1, 1)]);
        let m = Matrix::new(2, 2, vec![one.clone(), s.clone(), s, one]);
        assert!(ga.reduced_norm(&m).unwrap().is_zero());
    }

    #[test]
    fn s3_transposition() {
        let ga = builtin("S3").unwrap();
        let tau = (0..6).find(|&g| ga.group().element_order(g) == 2).unwrap();
        let m = Matrix::new(1, 1, vec![GroupRingElement::basis(6, tau)]);
        assert_eq!(
            ga.reduced_norm(&m).unwrap(),
            CentralElement::from_ints(&[1, -1, -1])
        );
        assert!(ga.reduced_norm(&ga.gr_zeros(1, 2)).is_err());
    }

    #[test]
    fn expand_contract_roundtrip() {
        let ga = builtin("S3").unwrap();
        let g = ga.group();
        let m = Matrix::from_fn(2, 3, |i, j| gr(&ga, &[(i + j, 1), ((2 * i + j) % 6, 2)]));
        let e = g.expand::<Rational>(&m).unwrap();
        assert_eq!(g.contract(&e), m);
        // equivariance of x ↦ x·M
        let v: Vec<Rational> = (0..12).map(|i| rat_int(i as i64 - 3)).collect();
        for h in 0..6 {
            assert_eq!(e.apply(&g.act(h, &v)), g.act(h, &e.apply(&v)));
        }
    }

    #[test]
    fn inverse_over_group_ring() {
        let ga = builtin("S3").unwrap();
        let g = ga.group();
        let m = Matrix::from_fn(2, 2, |i, j| {
            gr(&ga, &[(0, if i == j { 1 } else { 0 }), (i + 2 * j + 1, 1)])
        });
        let inv = g.gr_inverse(&m).unwrap();
        assert_eq!(g.gr_matmul(&m, &inv), ga.gr_identity(2));
    }
}

#[cfg(test)]
mod invariants {
    use super::*;
    use crate::group_algebra::builtin;
    use crate::synth::{random_matrix, random_unimodular, rng};

    /// Determinant over a commutative group ring by cofactor expansion.
    fn cofactor_det(g: &GroupData, m: &GrMatrix) -> GroupRingElement {
        let d = m.rows();
        if d == 0 {
            return GroupRingElement::one(g.order());
        }
        let mut acc = GroupRingElement::zero(g.order());
        for j in 0..d {
            let rows: Vec<usize> = (1..d).collect();
            let cols: Vec<usize> = (0..d).filter(|&c| c != j).collect();
            let minor = cofactor_det(g, &m.submatrix(&rows, &cols));
            let term = g.gr_mul(&m[(0, j)], &minor);
            acc = if j % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }

    #[test]
    fn multiplicative() {
        let mut r = rng(11);
        for name in ["C2", "C3", "S3", "D4", "Q8", "D5", "A4"] {
            let ga = builtin(name).unwrap();
            for d in 1..=3 {
                let a = random_matrix(&ga, &mut r, d, d, 2);
                let b = random_matrix(&ga, &mut r, d, d, 2);
                let ab = ga.gr_matmul(&a, &b);
                let lhs = ga.reduced_norm(&ab).unwrap();
                let rhs = ga
                    .reduced_norm(&a)
                    .unwrap()
                    .mul(&ga.reduced_norm(&b).unwrap());
                assert_eq!(lhs, rhs, "{name} d={d}");
                assert!(ga.is_galois_stable(&lhs));
            }
        }
    }

    #[test]
    fn abelian_matches_cofactor_determinant() {
        let mut r = rng(12);
        for name in ["C2", "C3", "C4", "C2xC2", "C5"] {
            let ga = builtin(name).unwrap();
            for d in 1..=4 {
                let m = random_matrix(&ga, &mut r, d, d, 2);
                let det = cofactor_det(ga.group(), &m);
                assert_eq!(
                    ga.reduced_norm(&m).unwrap(),
                    ga.from_group_ring(&det).unwrap(),
                    "{name}"
                );
            }
        }
    }

    #[test]
    fn invertible_factors() {
        let mut r = rng(13);
        for name in ["S3", "D4", "Q8"] {
            let ga = builtin(name).unwrap();
            let p = random_unimodular(&ga, &mut r, 3, 6);
            let q = random_unimodular(&ga, &mut r, 3, 6);
            let m = random_matrix(&ga, &mut r, 3, 3, 2);
            let pmq = ga.gr_matmul(&ga.gr_matmul(&p, &m), &q);
            let expect = ga
                .reduced_norm(&p)
                .unwrap()
                .mul(&ga.reduced_norm(&m).unwrap())
                .mul(&ga.reduced_norm(&q).unwrap());
            assert_eq!(ga.reduced_norm(&pmq).unwrap(), expect);
        }
    }

    #[test]
    fn involution_transpose_swaps_contragredient() {
        let mut r = rng(14);
        for name in ["C3", "C4", "S3", "Q8", "D5", "A4"] {
            let ga = builtin(name).unwrap();
            for d in 1..=3 {
                let m = random_matrix(&ga, &mut r, d, d, 2);
                let lhs = ga.reduced_norm(&ga.involution_transpose(&m)).unwrap();
                let rhs = ga.involution_central(&ga.reduced_norm(&m).unwrap());
                assert_eq!(lhs, rhs, "{name}");
            }
        }
    }

    #[test]
    fn central_roundtrip_and_galois_criteria() {
        let mut r = rng(15);
        for name in ["C3", "C4", "S3", "D5", "Q8", "A4"] {
            let ga = builtin(name).unwrap();
            for _ in 0..10 {
                let comps = (0..ga.num_chars())
                    .map(|_| {
                        let m = ga.group().exponent();
                        let c: Vec<crate::scalars::Rational> = (0..3)
                            .map(|_| crate::scalars::rat_int(rand::Rng::gen_range(&mut r, -3..4)))
                            .collect();
                        CycloElement::from_poly(m, &c)
                    })
                    .collect();
                let z = CentralElement::new(comps);
                let x = ga.to_group_ring(&z);
                assert_eq!(ga.from_group_ring(&x).unwrap(), z);
                assert_eq!(ga.is_galois_stable(&z), x.is_rational(), "{name}");
            }
            // a Galois-stable element from a rational group ring element
            let m = random_matrix(&ga, &mut r, 2, 2, 2);
            let z = ga.reduced_norm(&m).unwrap();
            assert!(ga.is_galois_stable(&z) && ga.to_group_ring(&z).is_rational());
            let cc = ga.class_coords(&z).unwrap();
            assert_eq!(ga.from_class_coords(&cc), z);
        }
    }

    #[test]
    fn idempotents_complete_and_orthogonal() {
        for name in ["S3", "Q8", "D5", "A4", "C6"] {
            let ga = builtin(name).unwrap();
            let g = ga.group();
            let es: Vec<GroupRingElement> = (0..ga.num_chars())
                .map(|c| ga.idempotent_element(c))
                .collect();
            let mut sum = GroupRingElement::zero(ga.order());
            for (i, a) in es.iter().enumerate() {
                sum = sum.add(a);
                for (j, b) in es.iter().enumerate() {
                    let ab = g.gr_mul(a, b);
                    if i == j {
                        assert_eq!(&ab, a);
                    } else {
                        assert!(ab.is_zero());
                    }
                }
            }
            assert_eq!(sum, GroupRingElement::one(ga.order()));
            assert_eq!(
                ga.to_group_ring(&ga.central_one()),
                GroupRingElement::one(ga.order())
            );
        }
        let ga = builtin("C4").unwrap();
        let e0 = ga.idempotent_element(0);
        assert!(e0
            .coeffs()
            .iter()
            .all(|c| *c == CycloElement::from(crate::scalars::rat(1, 4))));
    }
}
