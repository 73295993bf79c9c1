//! Seeded generators of random group ring data for property checks and synthetic runs.

use rand::Rng;

use crate::group_algebra::{GrMatrix, GroupAlgebra, GroupRingElement};
use crate::linalg::Matrix;
use crate::scalars::{CycloElement, Rational};

pub use rand_chacha::ChaCha8Rng as SynthRng;

pub fn rng(seed: u64) -> SynthRng {
    use rand::SeedableRng;
    SynthRng::seed_from_u64(seed)
}

/// Integer coefficients in [-bound, bound].
pub fn random_element(ga: &GroupAlgebra, rng: &mut SynthRng, bound: i64) -> GroupRingElement {
    GroupRingElement::from_coeffs(
        (0..ga.order())
            .map(|_| CycloElement::from_int(rng.gen_range(-bound..=bound)))
            .collect(),
    )
}

/// Element with few nonzero integer coefficients.
pub fn sparse_element(
    ga: &GroupAlgebra,
    rng: &mut SynthRng,
    terms: usize,
    bound: i64,
) -> GroupRingElement {
    let mut x = GroupRingElement::zero(ga.order());
    for _ in 0..terms {
        let g = rng.gen_range(0..ga.order());
        let c = rng.gen_range(-bound..=bound);
        x.set_coeff(g, x.coeff(g) + &CycloElement::from_int(c));
    }
    x
}

/// Rational matrix with integer entries in [-bound, bound].
pub fn int_matrix(rng: &mut SynthRng, rows: usize, cols: usize, bound: i64) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols, |_, _| {
        Rational::from_integer(rng.gen_range(-bound..=bound).into())
    })
}

pub fn random_matrix(
    ga: &GroupAlgebra,
    rng: &mut SynthRng,
    rows: usize,
    cols: usize,
    bound: i64,
) -> GrMatrix {
    Matrix::from_fn(rows, cols, |_, _| random_element(ga, rng, bound))
}

pub fn sparse_matrix(
    ga: &GroupAlgebra,
    rng: &mut SynthRng,
    rows: usize,
    cols: usize,
    terms: usize,
    bound: i64,
) -> GrMatrix {
    Matrix::from_fn(rows, cols, |_, _| sparse_element(ga, rng, terms, bound))
}

/// Product of random elementary matrices and group-element diagonal scalings: invertible
/// over ℤ[G].
pub fn random_unimodular(
    ga: &GroupAlgebra,
    rng: &mut SynthRng,
    d: usize,
    steps: usize,
) -> GrMatrix {
    let g = ga.group();
    let mut m = ga.gr_identity(d);
    for _ in 0..steps {
        if d >= 2 && rng.gen_bool(0.8) {
            let i = rng.gen_range(0..d);
            let mut j = rng.gen_range(0..d - 1);
            if j >= i {
                j += 1;
            }
            let c = sparse_element(ga, rng, 2, 1);
            // row_i += c·row_j
            for k in 0..d {
                let add = g.gr_mul(&c, &m[(j, k)]);
                m[(i, k)] = m[(i, k)].add(&add);
            }
        } else {
            let i = rng.gen_range(0..d);
            let h = rng.gen_range(0..ga.order());
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let u = GroupRingElement::basis(ga.order(), h).scale(&CycloElement::from_int(sign));
            for k in 0..d {
                m[(i, k)] = g.gr_mul(&u, &m[(i, k)]);
            }
        }
    }
    m
}

/// A random three-term complex R[G]^a → R[G]^d → R[G]^{d−a} with injective first map,
/// together with `a` random integral homomorphisms Z¹ → R[G].
pub fn random_three_term(
    ga: &std::sync::Arc<GroupAlgebra>,
    p: u64,
    rng: &mut SynthRng,
    a: usize,
    d: usize,
    bound: i64,
) -> crate::Result<(
    crate::complexes::AdmissibleComplex,
    Vec<crate::plattice::EquivariantHom>,
)> {
    let group = ga.group();
    let n = ga.order();
    let (u, uinv) = loop {
        let u = random_unimodular(ga, rng, d, 2 * d + 2);
        if let Some(v) = group.gr_inverse(&u) {
            break (u, v);
        }
    };
    let a_block = loop {
        let m = random_matrix(ga, rng, a, a, bound);
        if ga.reduced_norm(&m)?.comps().iter().all(|c| !c.is_zero()) {
            break m;
        }
    };
    let b_block = random_matrix(ga, rng, d - a, d - a, bound);
    let z = || GroupRingElement::zero(n);
    let left = Matrix::from_fn(
        a,
        d,
        |i, j| if j < a { a_block[(i, j)].clone() } else { z() },
    );
    let right = Matrix::from_fn(d, d - a, |i, j| {
        if i < a {
            z()
        } else {
            b_block[(i - a, j)].clone()
        }
    });
    let c = crate::complexes::AdmissibleComplex::three_term(
        ga,
        p,
        ga.gr_matmul(&left, &u),
        ga.gr_matmul(&uinv, &right),
    )?;
    let phis = random_cocycle_homs(ga, p, rng, &c, a, bound)?;
    Ok((c, phis))
}

/// `count` random homomorphisms F¹ → R[G] restricted to Z¹(C).
pub fn random_cocycle_homs(
    ga: &GroupAlgebra,
    p: u64,
    rng: &mut SynthRng,
    c: &crate::complexes::AdmissibleComplex,
    count: usize,
    bound: i64,
) -> crate::Result<Vec<crate::plattice::EquivariantHom>> {
    let zb = c.cocycle_basis(1)?;
    (0..count)
        .map(|_| {
            let cols: Vec<_> = (0..c.rank_at(1))
                .map(|_| random_element(ga, rng, bound))
                .collect();
            Ok(
                crate::plattice::EquivariantHom::from_columns(ga.group(), p, &cols)?
                    .restrict(zb.clone()),
            )
        })
        .collect()
}

/// ∂ = U·diag(x_1, …, x_k, 0_a, 1, …)·V with x_i = 1 + (p^{m_i} − 1)·e_1, so that
/// H²(C) ≅ ⊕ ℤ/p^{m_i} ⊕ R[G]^a. Needs |G| to divide p^{m_i} − 1.
pub fn engineered_two_term(
    ga: &std::sync::Arc<GroupAlgebra>,
    p: u64,
    rng: &mut SynthRng,
    exponents: &[u32],
    a: usize,
    extra: usize,
) -> crate::Result<crate::complexes::AdmissibleComplex> {
    let n = ga.order();
    let d = exponents.len() + a + extra;
    let mut diag = Vec::with_capacity(d);
    for &m in exponents {
        let q = (p as i64).pow(m) - 1;
        if q % n as i64 != 0 {
            return Err(crate::Error::RangeError(format!(
                "|G| = {n} does not divide {p}^{m} − 1"
            )));
        }
        let mut x = vec![q / n as i64; n];
        x[0] += 1;
        diag.push(GroupRingElement::from_ints(&x));
    }
    diag.extend((0..a).map(|_| GroupRingElement::zero(n)));
    diag.extend((0..extra).map(|_| GroupRingElement::one(n)));
    let mid = Matrix::from_fn(d, d, |i, j| {
        if i == j {
            diag[i].clone()
        } else {
            GroupRingElement::zero(n)
        }
    });
    let u = random_unimodular(ga, rng, d, 2 * d + 2);
    let v = random_unimodular(ga, rng, d, 2 * d + 2);
    crate::complexes::AdmissibleComplex::two_term(ga, p, ga.gr_matmul(&ga.gr_matmul(&u, &mid), &v))
}
