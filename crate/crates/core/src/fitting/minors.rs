use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;

use super::lattice::{CentralLattice, Exactness};
use super::whitehead::default_whitehead;
use crate::error::{Error, Result};
use crate::group_algebra::{CentralElement, GrMatrix, GroupAlgebra, GroupRingElement};
use crate::plattice::EquivariantHom;

#[derive(Clone, Debug, Default)]
pub struct FitOptions {
    /// Allow J with repeated indices (later functionals overwrite earlier ones).
    pub repeated_indices: bool,
    /// Whitehead estimate to multiply by; the cached default is used otherwise.
    pub xi: Option<CentralLattice>,
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub lattice: CentralLattice,
    /// Reduced norms of the enumerated minors, before multiplying by ξ.
    pub minors: Vec<CentralElement>,
    pub minors_enumerated: usize,
    /// The minors are the full defining generating set.
    pub generators_exact: bool,
}

/// Columns b ↦ φ(b) of the dual basis functionals on R[G]^d.
pub fn dual_basis_pool(ga: &GroupAlgebra, p: u64, d: usize) -> Vec<EquivariantHom> {
    let n = ga.order();
    (0..d)
        .map(|k| {
            let cols: Vec<GroupRingElement> = (0..d)
                .map(|i| {
                    if i == k {
                        GroupRingElement::one(n)
                    } else {
                        GroupRingElement::zero(n)
                    }
                })
                .collect();
            EquivariantHom::from_columns(ga.group(), p, &cols).expect("rational")
        })
        .collect()
}

fn is_dual_basis(pool: &[Vec<GroupRingElement>], d: usize, n: usize) -> bool {
    (0..d).all(|k| {
        pool.iter().any(|c| {
            c.iter().enumerate().all(|(i, x)| {
                if i == k {
                    *x == GroupRingElement::one(n)
                } else {
                    x.is_zero()
                }
            })
        })
    })
}

/// Fit^a(M) for a d×d′ matrix with d ≥ d′, from the functionals in `phi_pool`.
pub fn fitting_invariant_matrix(
    ga: &Arc<GroupAlgebra>,
    p: u64,
    m: &GrMatrix,
    a: usize,
    phi_pool: &[EquivariantHom],
    opts: &FitOptions,
) -> Result<FitResult> {
    let (d, dp) = (m.rows(), m.cols());
    if d < dp {
        return Err(Error::ShapeError(format!(
            "{d}x{dp} matrix has fewer rows than columns"
        )));
    }
    if a > dp {
        return Err(Error::RangeError(format!("a = {a} exceeds d' = {dp}")));
    }
    let n = ga.order();
    let cols: Vec<Vec<GroupRingElement>> = phi_pool
        .iter()
        .map(|phi| {
            if phi.rank() != d {
                return Err(Error::ShapeError(
                    "functional on the wrong free module".into(),
                ));
            }
            Ok(phi.columns())
        })
        .collect::<Result<_>>()?;
    let mut cands: Vec<GrMatrix> = Vec::new();
    for t in 0..=a {
        if t > 0 && cols.is_empty() {
            break;
        }
        let js: Vec<Vec<usize>> = if opts.repeated_indices {
            (0..t)
                .map(|_| 0..dp)
                .multi_cartesian_product()
                .filter(|j| j.windows(2).all(|w| w[0] <= w[1]))
                .collect()
        } else {
            (0..dp).combinations(t).collect()
        };
        let phis: Vec<Vec<usize>> = if t == 0 {
            vec![vec![]]
        } else {
            (0..t)
                .map(|_| 0..cols.len())
                .multi_cartesian_product()
                .collect()
        };
        for j in &js {
            for f in &phis {
                let chosen: Vec<Vec<GroupRingElement>> =
                    f.iter().map(|&k| cols[k].clone()).collect();
                let mj = replace_columns(m, j, &chosen);
                for rows in (0..d).combinations(dp) {
                    cands.push(mj.select_rows(&rows));
                }
            }
        }
    }
    let minors: Vec<CentralElement> = cands
        .par_iter()
        .map(|x| ga.reduced_norm(x).expect("square"))
        .collect();
    let mut span = CentralLattice::zero(ga, p, Exactness::Exact);
    let mut kept = Vec::new();
    for z in &minors {
        if span.insert(z.clone())? {
            kept.push(z.clone());
        }
    }
    let xi = opts.xi.clone().unwrap_or_else(|| default_whitehead(ga, p));
    let generators_exact = a == 0 || is_dual_basis(&cols, d, n);
    let mut lattice = xi.product(&span);
    lattice.flag = if ga.is_abelian() && generators_exact && xi.flag == Exactness::Exact {
        Exactness::Exact
    } else {
        Exactness::ApproximateFromBelow
    };
    Ok(FitResult {
        lattice,
        minors: kept,
        minors_enumerated: cands.len(),
        generators_exact,
    })
}

/// Square matrix of functional values replaced into columns, as built in the enumeration.
pub fn replace_columns(m: &GrMatrix, j: &[usize], phis: &[Vec<GroupRingElement>]) -> GrMatrix {
    let mut out = m.clone();
    for (slot, &col) in j.iter().enumerate() {
        for i in 0..m.rows() {
            out[(i, col)] = phis[slot][i].clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::builtin;
    use crate::linalg::Matrix;
    use crate::scalars::CycloElement;
    use crate::synth::{random_matrix, rng};
    use proptest::prelude::*;

    fn diag(ga: &GroupAlgebra, xs: &[i64]) -> GrMatrix {
        let n = ga.order();
        Matrix::from_fn(xs.len(), xs.len(), |i, j| {
            if i == j {
                GroupRingElement::scalar(n, CycloElement::from_int(xs[i]))
            } else {
                GroupRingElement::zero(n)
            }
        })
    }

    #[test]
    fn trivial_group_examples() {
        let ga = builtin("C1").unwrap();
        let p = 5;
        let m = diag(&ga, &[5, 5]);
        let dual = dual_basis_pool(&ga, p, 2);
        let o = FitOptions::default();
        let f0 = fitting_invariant_matrix(&ga, p, &m, 0, &dual, &o)
            .unwrap()
            .lattice;
        let expect = |x: i64| {
            CentralLattice::from_generators(
                &ga,
                p,
                [CentralElement::from_ints(&[x])],
                Exactness::Exact,
            )
            .unwrap()
        };
        assert!(f0.same_as(&expect(25)));
        assert_eq!(f0.flag, Exactness::Exact);
        let f1 = fitting_invariant_matrix(&ga, p, &m, 1, &dual, &o)
            .unwrap()
            .lattice;
        assert!(f1.same_as(&expect(5)));
        let f2 = fitting_invariant_matrix(&ga, p, &m, 2, &dual, &o)
            .unwrap()
            .lattice;
        assert!(f2.contains_one());
        assert!(matches!(
            fitting_invariant_matrix(&ga, p, &m, 3, &dual, &o),
            Err(Error::RangeError(_))
        ));
    }

    #[test]
    fn repeated_indices_add_nothing_new() {
        let ga = builtin("S3").unwrap();
        let mut r = rng(3);
        let m = random_matrix(&ga, &mut r, 3, 2, 1);
        let dual = dual_basis_pool(&ga, 3, 3);
        let strict =
            fitting_invariant_matrix(&ga, 3, &m, 2, &dual, &FitOptions::default()).unwrap();
        let rep = FitOptions {
            repeated_indices: true,
            ..Default::default()
        };
        let loose = fitting_invariant_matrix(&ga, 3, &m, 2, &dual, &rep).unwrap();
        assert!(strict.lattice.same_as(&loose.lattice));
    }

    /// Classical determinant over the commutative ring ℚ[G] by cofactor expansion.
    fn cofactor_det(ga: &GroupAlgebra, m: &GrMatrix) -> GroupRingElement {
        let d = m.rows();
        let n = ga.order();
        if d == 0 {
            return GroupRingElement::one(n);
        }
        let mut s = GroupRingElement::zero(n);
        for j in 0..d {
            let rows: Vec<usize> = (1..d).collect();
            let cols: Vec<usize> = (0..d).filter(|&c| c != j).collect();
            let minor = cofactor_det(ga, &m.submatrix(&rows, &cols));
            let term = ga.group().gr_mul(&m[(0, j)], &minor);
            s = if j % 2 == 0 {
                s.add(&term)
            } else {
                s.sub(&term)
            };
        }
        s
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn abelian_fit0_is_classical(seed in 0u64..1000, name in prop::sample::select(vec!["C2", "C3", "C2xC2"])) {
            let ga = builtin(name).unwrap();
            let p = 3;
            let mut r = rng(seed);
            let m = random_matrix(&ga, &mut r, 3, 3, 2);
            let fit = fitting_invariant_matrix(&ga, p, &m, 0, &[], &FitOptions::default()).unwrap().lattice;
            let det = cofactor_det(&ga, &m);
            // the ideal det·ℤ_(p)[G]
            let n = ga.order();
            let gens = (0..n).map(|g| ga.from_group_ring(&ga.group().gr_mul(&det, &GroupRingElement::basis(n, g))).unwrap());
            let oracle = CentralLattice::from_generators(&ga, p, gens, Exactness::Exact).unwrap();
            prop_assert!(fit.same_as(&oracle));
        }

        #[test]
        fn monotone_in_a(seed in 0u64..1000, name in prop::sample::select(vec!["C3", "S3"])) {
            let ga = builtin(name).unwrap();
            let mut r = rng(seed);
            let m = random_matrix(&ga, &mut r, 3, 2, 1);
            let pool = dual_basis_pool(&ga, 3, 3);
            let mut prev: Option<CentralLattice> = None;
            for a in 0..=2 {
                let f = fitting_invariant_matrix(&ga, 3, &m, a, &pool, &FitOptions::default()).unwrap().lattice;
                if let Some(pr) = prev {
                    prop_assert!(f.contains_lattice(&pr));
                }
                prev = Some(f);
            }
        }
    }
}
