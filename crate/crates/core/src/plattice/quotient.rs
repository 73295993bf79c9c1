use num_traits::Zero;

use super::snf::{residue, snf_plocal, val};
use super::torsion::FinPModule;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, RowSolver};
use crate::scalars::{is_p_integral, Rational};

/// A finitely generated ℤ_(p)-module L/M with L, M lattices in ℚ^n, presented through
/// lifts of a diagonal generating set.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    pub p: u64,
    pub free_rank: usize,
    pub torsion: FinPModule,
    /// Lifts of the torsion generators followed by the free generators (ambient coordinates).
    pub generators: Matrix<Rational>,
    /// Induced action on the free quotient, one matrix per group element.
    pub free_action: Vec<Matrix<Rational>>,
    solver: RowSolver<Rational>,
    transform: Matrix<Rational>,
    keep: Vec<usize>,
}

impl QuotientModule {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_zero()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_zero()
    }

    /// Coordinates of x ∈ L in the generators (torsion parts reduced), or None if x ∉ L.
    pub fn coords(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        let c = self.solver.coords(x)?;
        if c.iter().any(|v| !is_p_integral(v, self.p)) {
            return None;
        }
        let y = self.transform.apply(&c);
        let nt = self.torsion.exponents.len();
        Some(
            self.keep
                .iter()
                .enumerate()
                .map(|(i, &j)| {
                    if i < nt {
                        Rational::from_integer(residue(&y[j], self.p, self.torsion.exponents[i]))
                    } else {
                        y[j].clone()
                    }
                })
                .collect(),
        )
    }

    /// Whether x ∈ L maps to zero in L/M.
    pub fn is_zero_class(&self, x: &[Rational]) -> Option<bool> {
        Some(self.coords(x)?.iter().all(|v| v.is_zero()))
    }
}

/// L/M for L spanned by the rows of `sup`, M by the rows of `sub` (M ⊆ L required), with the
/// action given by matrices on the ambient space (row convention) when supplied.
pub fn quotient_module(
    sup: &Matrix<Rational>,
    sub: &Matrix<Rational>,
    p: u64,
    actions: &[Matrix<Rational>],
) -> Result<QuotientModule> {
    // a ℤ_(p)-basis of L
    let lat = super::PLattice::from_generators_untracked(sup, p);
    let basis = lat.basis();
    let k = basis.rows();
    let solver = RowSolver::new(&basis);
    let mut rel = Vec::with_capacity(sub.rows());
    for i in 0..sub.rows() {
        let c = solver
            .coords(sub.row(i))
            .filter(|c| c.iter().all(|v| is_p_integral(v, p)))
            .ok_or_else(|| {
                Error::ShapeError(format!("relation {i} is not in the ambient lattice"))
            })?;
        rel.push(c);
    }
    let rel = Matrix::from_rows(rel, k);
    let snf = snf_plocal(&rel, p);
    // new basis of L is V⁻¹·basis; relations become diagonal
    let vinv = snf.v.inverse().expect("unimodular transform");
    let new_basis = vinv.mul(&basis);
    let diag = snf.diagonal();
    let mut torsion_idx = Vec::new();
    let mut exps = Vec::new();
    for (j, d) in diag.iter().enumerate() {
        if !d.is_zero() {
            let v = val(d, p);
            if v > 0 {
                torsion_idx.push(j);
                exps.push(v as u32);
            }
        }
    }
    let free_idx: Vec<usize> = (snf.rank..k).collect();
    let keep: Vec<usize> = torsion_idx.iter().chain(&free_idx).copied().collect();
    let generators = new_basis.select_rows(&keep);
    let nt = torsion_idx.len();
    let nf = free_idx.len();
    let mut tors_act = Vec::with_capacity(actions.len());
    let mut free_act = Vec::with_capacity(actions.len());
    for (g, a) in actions.iter().enumerate() {
        let mut full = Vec::with_capacity(keep.len());
        for row in generators.row_vecs() {
            let img = a.apply(&row);
            let c = solver
                .coords(&img)
                .filter(|c| c.iter().all(|v| is_p_integral(v, p)))
                .ok_or_else(|| {
                    Error::InvalidRepresentation(format!(
                        "element {g} does not preserve the lattice"
                    ))
                })?;
            let y = snf.v.apply(&c);
            full.push(keep.iter().map(|&j| y[j].clone()).collect::<Vec<_>>());
        }
        let t = Matrix::from_fn(nt, nt, |i, j| {
            Rational::from_integer(residue(&full[i][j], p, exps[j]))
        });
        // free generators map into torsion ⊕ free; only the free part is canonical
        let f = Matrix::from_fn(nf, nf, |i, j| full[nt + i][nt + j].clone());
        for i in 0..nt {
            for j in nt..keep.len() {
                if !full[i][j].is_zero() {
                    return Err(Error::InvalidRepresentation(format!(
                        "element {g} does not preserve the relations"
                    )));
                }
            }
        }
        tors_act.push(t);
        free_act.push(f);
    }
    let torsion = FinPModule::new(p, exps, tors_act)?;
    Ok(QuotientModule {
        p,
        free_rank: nf,
        torsion,
        generators,
        free_action: free_act,
        solver,
        transform: snf.v.clone(),
        keep,
    })
}

/// Cohomology of a cochain complex of free ℤ_(p)-modules
/// F^s → F^{s+1} → … with differentials x ↦ x·d_i.
#[derive(Clone, Debug)]
pub struct LatticeComplex {
    pub p: u64,
    pub start: i32,
    pub ranks: Vec<usize>,
    pub differentials: Vec<Matrix<Rational>>,
    /// Per term, one action matrix per group element (may be empty).
    pub actions: Vec<Vec<Matrix<Rational>>>,
}

impl LatticeComplex {
    pub fn new(p: u64, start: i32, differentials: Vec<Matrix<Rational>>) -> Result<Self> {
        if differentials.is_empty() {
            return Err(Error::ShapeError(
                "complex needs at least one differential".into(),
            ));
        }
        let mut ranks = vec![differentials[0].rows()];
        for (i, d) in differentials.iter().enumerate() {
            if d.rows() != *ranks.last().unwrap() {
                return Err(Error::ShapeError(format!(
                    "differential {i} has {} rows",
                    d.rows()
                )));
            }
            ranks.push(d.cols());
        }
        if differentials
            .iter()
            .any(|d| d.entries().iter().any(|x| !is_p_integral(x, p)))
        {
            return Err(Error::InvalidRepresentation(
                "differential is not p-integral".into(),
            ));
        }
        let c = LatticeComplex {
            p,
            start,
            ranks,
            differentials,
            actions: vec![],
        };
        c.check_complex()?;
        Ok(c)
    }

    pub fn with_actions(mut self, actions: Vec<Vec<Matrix<Rational>>>) -> Result<Self> {
        if actions.len() != self.ranks.len() {
            return Err(Error::ShapeError("one action list per term".into()));
        }
        for (i, acts) in actions.iter().enumerate() {
            for a in acts {
                if a.rows() != self.ranks[i] || a.cols() != self.ranks[i] {
                    return Err(Error::ShapeError(format!("action on term {i}")));
                }
            }
            if let Some(d) = self.differentials.get(i) {
                for (g, a) in acts.iter().enumerate() {
                    if a.mul(d) != d.mul(&actions[i + 1][g]) {
                        return Err(Error::InvalidRepresentation(format!(
                            "differential {i} is not equivariant for element {g}"
                        )));
                    }
                }
            }
        }
        self.actions = actions;
        Ok(self)
    }

    fn check_complex(&self) -> Result<()> {
        for (i, w) in self.differentials.windows(2).enumerate() {
            if !w[0].mul(&w[1]).is_zero() {
                return Err(Error::NotAComplex(format!(
                    "d^{} ∘ d^{} ≠ 0",
                    self.start + i as i32 + 1,
                    self.start + i as i32
                )));
            }
        }
        Ok(())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.ranks.len()).map(move |i| self.start + i as i32)
    }

    /// H^deg as a quotient module.
    pub fn cohomology_at(&self, deg: i32) -> Result<QuotientModule> {
        let i = (deg - self.start) as usize;
        let n = *self
            .ranks
            .get(i)
            .ok_or_else(|| Error::RangeError(format!("degree {deg} outside the complex")))?;
        let kernel = match self.differentials.get(i) {
            Some(d) => {
                let s = snf_plocal(d, self.p);
                let rows: Vec<usize> = (s.rank..n).collect();
                s.u.select_rows(&rows)
            }
            None => Matrix::identity(n),
        };
        let image = if i == 0 {
            Matrix::zeros(0, n)
        } else {
            self.differentials[i - 1].clone()
        };
        let acts = self.actions.get(i).cloned().unwrap_or_default();
        quotient_module(&kernel, &image, self.p, &acts)
    }

    pub fn cohomology(&self) -> Result<Vec<(i32, QuotientModule)>> {
        self.degrees()
            .map(|d| Ok((d, self.cohomology_at(d)?)))
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| if i % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}

pub fn cohomology(complex: &LatticeComplex) -> Result<Vec<(i32, QuotientModule)>> {
    complex.cohomology()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::builtin;
    use crate::scalars::rat_int;
    use crate::synth::{int_matrix, rng};
    use proptest::prelude::*;

    fn scalar(x: i64) -> Matrix<Rational> {
        Matrix::from_rows(vec![vec![rat_int(x)]], 1)
    }

    #[test]
    fn examples() {
        let c = LatticeComplex::new(3, 1, vec![scalar(3)]).unwrap();
        let h = c.cohomology().unwrap();
        assert!(h[0].1.is_zero());
        assert_eq!(h[1].1.free_rank, 0);
        assert_eq!(h[1].1.torsion.exponents, vec![1]);

        let c = LatticeComplex::new(3, 1, vec![scalar(0)]).unwrap();
        let h = c.cohomology().unwrap();
        assert_eq!((h[0].1.free_rank, h[1].1.free_rank), (1, 1));
        assert!(h[0].1.is_torsion_free() && h[1].1.is_torsion_free());

        let g = builtin("C2").unwrap();
        let two = g
            .group()
            .expand::<Rational>(&g.gr_identity(1).map(|x| x.scale(&2.into())))
            .unwrap();
        let acts: Vec<_> = (0..2)
            .map(|h| crate::plattice::left_action_matrix(g.group(), h, 1))
            .collect();
        let c = LatticeComplex::new(3, 1, vec![two])
            .unwrap()
            .with_actions(vec![acts.clone(), acts])
            .unwrap();
        assert!(c.cohomology().unwrap().iter().all(|(_, h)| h.is_zero()));
    }

    #[test]
    fn not_a_complex() {
        assert!(matches!(
            LatticeComplex::new(3, 0, vec![scalar(1), scalar(1)]),
            Err(Error::NotAComplex(_))
        ));
    }

    #[test]
    fn induced_action_on_torsion() {
        // ℤ_(3)[C2] --(1+σ)·3--> ℤ_(3)[C2]: H² ≅ ℤ/3 (sigma = +1) ⊕ ℤ_(3) (sigma = −1)
        let g = builtin("C2").unwrap();
        let x = crate::group_algebra::GroupRingElement::from_ints(&[3, 3]);
        let d = g
            .group()
            .expand::<Rational>(&Matrix::from_rows(vec![vec![x]], 1))
            .unwrap();
        let acts: Vec<_> = (0..2)
            .map(|h| crate::plattice::left_action_matrix(g.group(), h, 1))
            .collect();
        let c = LatticeComplex::new(3, 1, vec![d])
            .unwrap()
            .with_actions(vec![acts.clone(), acts])
            .unwrap();
        let h2 = c.cohomology_at(2).unwrap();
        assert_eq!(h2.torsion.exponents, vec![1]);
        assert_eq!(h2.free_rank, 1);
        assert_eq!(h2.torsion.action[1], Matrix::identity(1));
        assert_eq!(h2.free_action[1], scalar(-1));
        let h1 = c.cohomology_at(1).unwrap();
        assert_eq!((h1.free_rank, h1.torsion.is_zero()), (1, true));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn euler_characteristic(seed in 0u64..1000, a in 1usize..4, b in 1usize..4, c in 1usize..4) {
            let mut r = rng(seed);
            // columns of d2 lie in the right kernel of d1
            let d1 = int_matrix(&mut r, a, b, 3);
            let k = d1.right_kernel();
            let d2 = if k.rows() == 0 {
                Matrix::zeros(b, c)
            } else {
                let w = int_matrix(&mut r, k.rows(), c, 2);
                let d = k.transpose().mul(&w);
                let den = d.entries().iter().fold(num_bigint::BigInt::from(1), |a, x| num_integer::lcm(a, x.denom().clone()));
                d.scale(&Rational::from_integer(den))
            };
            let cx = LatticeComplex::new(3, 0, vec![d1, d2]).unwrap();
            let h = cx.cohomology().unwrap();
            let alt: i64 = h.iter().enumerate()
                .map(|(i, (_, m))| if i % 2 == 0 { m.free_rank as i64 } else { -(m.free_rank as i64) })
                .sum();
            prop_assert_eq!(alt, cx.euler_characteristic());
        }
    }
}
