use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::Matrix;
use crate::scalars::{p_valuation, PContent, Rational};

pub(crate) fn val(q: &Rational, p: u64) -> i64 {
    p_valuation(q, p).finite().expect("valuation of zero")
}

/// Representative in [0, p^k) of a p-integral rational modulo p^k.
pub fn residue(q: &Rational, p: u64, k: u32) -> BigInt {
    let m = num_traits::pow(BigInt::from(p), k as usize);
    if m.is_one() {
        return BigInt::zero();
    }
    let num = q.numer().mod_floor(&m);
    let den = q.denom().mod_floor(&m);
    let inv = mod_inverse(&den, &m).expect("denominator is a p-unit");
    (num * inv).mod_floor(&m)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.abs().is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Smith normal form over ℤ_(p): `u · m · v = d` with `u`, `v` invertible over ℤ_(p) and
/// `d` diagonal with valuations non-decreasing.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Matrix<Rational>,
    pub d: Matrix<Rational>,
    pub v: Matrix<Rational>,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Valuations of the diagonal (`Infinite` for zero entries).
    pub fn valuations(&self, p: u64) -> Vec<PContent> {
        self.diagonal().iter().map(|x| p_valuation(x, p)).collect()
    }
}

pub fn snf_plocal(m: &Matrix<Rational>, p: u64) -> Snf {
    snf_impl(m, p, true)
}

/// Same elimination without tracking the transforms.
pub fn snf_diagonal(m: &Matrix<Rational>, p: u64) -> Vec<Rational> {
    let s = snf_impl(m, p, false);
    s.diagonal()
}

fn snf_impl(m: &Matrix<Rational>, p: u64, track: bool) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u: Matrix<Rational> = if track {
        Matrix::identity(r)
    } else {
        Matrix::zeros(0, 0)
    };
    let mut v: Matrix<Rational> = if track {
        Matrix::identity(c)
    } else {
        Matrix::zeros(0, 0)
    };
    let mut rank = 0;
    for t in 0..r.min(c) {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = &a[(i, j)];
                if !x.is_zero() {
                    let vv = val(x, p);
                    if best.is_none_or(|(b, _, _)| vv < b) {
                        best = Some((vv, i, j));
                    }
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        swap_cols(&mut a, t, bj);
        if track {
            u.swap_rows(t, bi);
            swap_cols(&mut v, t, bj);
        }
        let piv = a[(t, t)].clone();
        for i in t + 1..r {
            if a[(i, t)].is_zero() {
                continue;
            }
            let f = &a[(i, t)] / &piv;
            for j in t..c {
                if !a[(t, j)].is_zero() {
                    let x = &a[(i, j)] - &f * &a[(t, j)];
                    a[(i, j)] = x;
                }
            }
            if track {
                for j in 0..r {
                    if !u[(t, j)].is_zero() {
                        let x = &u[(i, j)] - &f * &u[(t, j)];
                        u[(i, j)] = x;
                    }
                }
            }
        }
        for j in t + 1..c {
            if a[(t, j)].is_zero() {
                continue;
            }
            let f = &a[(t, j)] / &piv;
            a[(t, j)] = Rational::zero();
            if track {
                for i in 0..c {
                    if !v[(i, t)].is_zero() {
                        let x = &v[(i, j)] - &f * &v[(i, t)];
                        v[(i, j)] = x;
                    }
                }
            }
        }
        rank += 1;
    }
    Snf { u, d: a, v, rank }
}

fn swap_cols(m: &mut Matrix<Rational>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = x;
    }
}
