use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::snf::val;
use crate::linalg::Matrix;
use crate::scalars::{p_valuation, PContent, Rational};

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    row: Vec<Rational>,
    /// Coefficients of this row w.r.t. the generators, when tracked.
    coeffs: Option<Vec<Rational>>,
}

/// ℤ_(p)-lattice in ℚ^n generated by the rows of a matrix, kept in an echelon basis
/// whose pivots are powers of p.
#[derive(Clone, Debug)]
pub struct PLattice {
    p: u64,
    dim: usize,
    ngens: usize,
    track: bool,
    rows: Vec<EchelonRow>,
}

/// Outcome of a membership test.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// x = Σ witness_i · generator_i, all p-integral (only with tracking).
    pub witness: Option<Vec<Rational>>,
}

impl PLattice {
    pub fn zero(dim: usize, p: u64) -> Self {
        PLattice {
            p,
            dim,
            ngens: 0,
            track: false,
            rows: vec![],
        }
    }

    /// Lattice spanned by the rows of `gens`, remembering how basis rows arise from them.
    pub fn from_generators(gens: &Matrix<Rational>, p: u64) -> Self {
        Self::build(gens, p, true)
    }

    /// As `from_generators` but without witness tracking.
    pub fn from_generators_untracked(gens: &Matrix<Rational>, p: u64) -> Self {
        Self::build(gens, p, false)
    }

    pub fn standard(dim: usize, p: u64) -> Self {
        Self::from_generators_untracked(&Matrix::identity(dim), p)
    }

    fn build(gens: &Matrix<Rational>, p: u64, track: bool) -> Self {
        let mut l = PLattice {
            p,
            dim: gens.cols(),
            ngens: gens.rows(),
            track,
            rows: vec![],
        };
        for i in 0..gens.rows() {
            let coeffs = track.then(|| {
                let mut c = vec![Rational::zero(); gens.rows()];
                c[i] = Rational::one();
                c
            });
            l.insert_with(gens.row(i).to_vec(), coeffs);
        }
        l
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a generator (not tracked); returns whether the lattice grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        self.track = false;
        for r in &mut self.rows {
            r.coeffs = None;
        }
        self.insert_with(v, None)
    }

    fn insert_with(&mut self, mut v: Vec<Rational>, mut c: Option<Vec<Rational>>) -> bool {
        let p = self.p;
        loop {
            let Some(lc) = v.iter().position(|x| !x.is_zero()) else {
                return false;
            };
            match self.rows.binary_search_by_key(&lc, |r| r.pivot) {
                Ok(idx) => {
                    let row = &mut self.rows[idx];
                    if val(&v[lc], p) < val(&row.row[lc], p) {
                        std::mem::swap(&mut v, &mut row.row);
                        std::mem::swap(&mut c, &mut row.coeffs);
                        normalize(row, p);
                    }
                    let row = &self.rows[idx];
                    let f = &v[lc] / &row.row[lc];
                    for (x, y) in v.iter_mut().zip(&row.row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                    if let (Some(c), Some(rc)) = (c.as_mut(), row.coeffs.as_ref()) {
                        for (x, y) in c.iter_mut().zip(rc) {
                            if !y.is_zero() {
                                *x -= &f * y;
                            }
                        }
                    }
                }
                Err(idx) => {
                    let mut row = EchelonRow {
                        pivot: lc,
                        row: v,
                        coeffs: c,
                    };
                    normalize(&mut row, p);
                    self.rows.insert(idx, row);
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.membership(x).member
    }

    pub fn membership(&self, x: &[Rational]) -> Membership {
        assert_eq!(x.len(), self.dim, "vector length");
        let p = self.p;
        let mut v = x.to_vec();
        let mut w = self.track.then(|| vec![Rational::zero(); self.ngens]);
        for row in &self.rows {
            let lc = row.pivot;
            if v[..lc].iter().any(|t| !t.is_zero()) {
                return Membership {
                    member: false,
                    witness: None,
                };
            }
            if v[lc].is_zero() {
                continue;
            }
            if val(&v[lc], p) < val(&row.row[lc], p) {
                return Membership {
                    member: false,
                    witness: None,
                };
            }
            let f = &v[lc] / &row.row[lc];
            for (a, b) in v.iter_mut().zip(&row.row) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
            if let (Some(w), Some(rc)) = (w.as_mut(), row.coeffs.as_ref()) {
                for (a, b) in w.iter_mut().zip(rc) {
                    if !b.is_zero() {
                        *a += &f * b;
                    }
                }
            }
        }
        if v.iter().all(|t| t.is_zero()) {
            Membership {
                member: true,
                witness: w,
            }
        } else {
            Membership {
                member: false,
                witness: None,
            }
        }
    }

    /// Echelon basis as matrix rows.
    pub fn basis(&self) -> Matrix<Rational> {
        Matrix::from_rows(self.rows.iter().map(|r| r.row.clone()).collect(), self.dim)
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.rows.iter().map(|r| r.row.as_slice())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    /// Valuations of the pivots; for full-rank lattices their sum is log_p of the index
    /// relative to ℤ_(p)^n.
    pub fn pivot_valuations(&self) -> Vec<i64> {
        self.rows
            .iter()
            .map(|r| val(&r.row[r.pivot], self.p))
            .collect()
    }

    pub fn contains_lattice(&self, other: &PLattice) -> bool {
        other.basis_rows().all(|r| self.contains(r))
    }

    pub fn same_as(&self, other: &PLattice) -> bool {
        self.rank() == other.rank() && self.contains_lattice(other) && other.contains_lattice(self)
    }

    pub fn sum(&self, other: &PLattice) -> PLattice {
        let mut out = self.clone();
        for r in other.basis_rows() {
            out.insert(r.to_vec());
        }
        out
    }

    /// Lattice membership of every basis vector under `act`.
    pub fn is_stable_under(&self, act: impl Fn(&[Rational]) -> Vec<Rational>) -> bool {
        self.basis_rows().all(|r| self.contains(&act(r)))
    }
}

fn normalize(row: &mut EchelonRow, p: u64) {
    let lead = &row.row[row.pivot];
    let k = val(lead, p);
    let pk = if k >= 0 {
        Rational::from_integer(num_traits::pow(BigInt::from(p), k as usize))
    } else {
        Rational::new(
            BigInt::one(),
            num_traits::pow(BigInt::from(p), (-k) as usize),
        )
    };
    let unit = lead / &pk;
    if unit.is_one() {
        return;
    }
    let inv = unit.recip();
    for x in &mut row.row {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    if let Some(c) = row.coeffs.as_mut() {
        for x in c.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
    }
}

/// Minimum valuation over the entries of a vector.
pub fn vector_content(v: &[Rational], p: u64) -> PContent {
    v.iter()
        .map(|x| p_valuation(x, p))
        .min()
        .unwrap_or(PContent::Infinite)
}

pub fn lattice_membership(x: &[Rational], l: &PLattice) -> Membership {
    l.membership(x)
}
