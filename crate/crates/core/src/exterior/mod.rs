//! Reduced exterior powers of modules whose supported components are free of a fixed rank.

use std::sync::Arc;

use crate::complexes::idempotent_projection;
use crate::error::{Error, Result};
use crate::group_algebra::{CentralElement, GrMatrix, GroupAlgebra, GroupRingElement};
use crate::linalg::Matrix;
use crate::plattice::EquivariantHom;
use crate::scalars::Rational;
use crate::synth::{int_matrix, rng};

/// A reference basis of e·M for M = ℚ[G]^m / (relations) and e the sum of the supported
/// primitive idempotents, where e·M is free of rank r over ℚ[G]e.
#[derive(Clone, Debug)]
pub struct WedgeFrame {
    ga: Arc<GroupAlgebra>,
    ambient: usize,
    rank: usize,
    support: Vec<bool>,
    basis: Vec<Vec<Rational>>,
    relations: Matrix<Rational>,
    orbits: Vec<OrbitData>,
}

#[derive(Clone, Debug)]
struct OrbitData {
    idempotent: GroupRingElement,
    proj: Matrix<Rational>,
    /// e_O·(translates of the basis) stacked over e_O·(relations).
    system: Matrix<Rational>,
}

/// An element of the r-th reduced exterior power of a frame's module, as the coordinate of
/// the wedge of the frame basis.
#[derive(Clone, Debug)]
pub struct WedgeElement {
    pub frame: Arc<WedgeFrame>,
    pub coords: CentralElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

fn check_support(ga: &GroupAlgebra, support: &[bool]) -> Result<()> {
    if support.len() != ga.num_chars() {
        return Err(Error::ShapeError("support mask length".into()));
    }
    for o in ga.orbits() {
        if o.iter().any(|&c| support[c] != support[o[0]]) {
            return Err(Error::InvalidRepresentation(
                "support is not a union of Galois orbits".into(),
            ));
        }
    }
    Ok(())
}

fn translates(ga: &GroupAlgebra, v: &[Rational]) -> Vec<Vec<Rational>> {
    (0..ga.order()).map(|h| ga.group().act(h, v)).collect()
}

fn expand_relations(
    ga: &GroupAlgebra,
    ambient: usize,
    relations: &[Vec<Rational>],
) -> Matrix<Rational> {
    let mut rows = Vec::new();
    for r in relations {
        rows.extend(translates(ga, r));
    }
    Matrix::from_rows(rows, ambient * ga.order())
}

impl WedgeFrame {
    /// Validates that the e_O-parts of `basis` form an e_O-basis of e_O·M on every supported
    /// orbit O. `relations` are flat vectors whose ℚ[G]-span is divided out.
    pub fn new(
        ga: &Arc<GroupAlgebra>,
        ambient: usize,
        support: Vec<bool>,
        basis: Vec<Vec<Rational>>,
        relations: &[Vec<Rational>],
    ) -> Result<Self> {
        Self::build(ga, ambient, support, basis, relations, None)
    }

    /// Like `new`, additionally requiring the basis to generate e·L for a lattice L spanned by
    /// `generators` together with the relations.
    fn build(
        ga: &Arc<GroupAlgebra>,
        ambient: usize,
        support: Vec<bool>,
        basis: Vec<Vec<Rational>>,
        relations: &[Vec<Rational>],
        generators: Option<&Matrix<Rational>>,
    ) -> Result<Self> {
        check_support(ga, &support)?;
        let n = ga.order();
        let dim = ambient * n;
        if basis.iter().any(|b| b.len() != dim) || relations.iter().any(|b| b.len() != dim) {
            return Err(Error::ShapeError(format!(
                "frame vectors must have length {dim}"
            )));
        }
        let rel = expand_relations(ga, ambient, relations);
        let r = basis.len();
        let mut orbits = Vec::new();
        for (oi, o) in ga.orbits().iter().enumerate() {
            if !support[o[0]] {
                continue;
            }
            let e = ga.orbit_idempotent(oi);
            let proj = idempotent_projection(ga, &e, ambient);
            let e_alg: usize = o.iter().map(|&c| ga.degree(c) * ga.degree(c)).sum();
            let mut rows = Vec::new();
            for b in &basis {
                rows.extend(translates(ga, b));
            }
            let tb = Matrix::from_rows(rows, dim);
            let rel_o = if rel.rows() == 0 {
                rel.clone()
            } else {
                rel.mul(&proj)
            };
            let base = rel_o.rank();
            let system = if tb.rows() == 0 {
                rel_o.clone()
            } else {
                tb.mul(&proj).vstack(&rel_o)
            };
            let span = system.rank() - base;
            if span != r * e_alg {
                return Err(Error::NotFree(format!(
                    "frame spans dimension {span} on {}, expected {}",
                    ga.label(o[0]),
                    r * e_alg
                )));
            }
            if let Some(g) = generators {
                let full = g.mul(&proj).vstack(&rel_o).rank() - base;
                if full != span {
                    return Err(Error::NotFree(format!(
                        "component at {} has dimension {full}, not {} = {r}·dim",
                        ga.label(o[0]),
                        r * e_alg
                    )));
                }
            }
            orbits.push(OrbitData {
                idempotent: ga.to_group_ring(&e),
                proj,
                system,
            });
        }
        Ok(WedgeFrame {
            ga: ga.clone(),
            ambient,
            rank: r,
            support,
            basis,
            relations: rel,
            orbits,
        })
    }

    /// A frame of e·M for M the ℚ[G]-span of `generators` modulo `relations`, found by random
    /// integral combinations of the generators.
    pub fn search(
        ga: &Arc<GroupAlgebra>,
        ambient: usize,
        support: Vec<bool>,
        r: usize,
        generators: &Matrix<Rational>,
        relations: &[Vec<Rational>],
        seed: u64,
    ) -> Result<Self> {
        Self::search_impl(ga, ambient, support, r, generators, relations, seed, true)
    }

    /// r integral combinations of the generators spanning a free ℚ[G]e-submodule of rank r.
    pub fn search_free(
        ga: &Arc<GroupAlgebra>,
        ambient: usize,
        support: Vec<bool>,
        r: usize,
        generators: &Matrix<Rational>,
        seed: u64,
    ) -> Result<Self> {
        Self::search_impl(ga, ambient, support, r, generators, &[], seed, false)
    }

    #[allow(clippy::too_many_arguments)]
    fn search_impl(
        ga: &Arc<GroupAlgebra>,
        ambient: usize,
        support: Vec<bool>,
        r: usize,
        generators: &Matrix<Rational>,
        relations: &[Vec<Rational>],
        seed: u64,
        full: bool,
    ) -> Result<Self> {
        let mut rg = rng(seed);
        let mut last = None;
        let dim = ambient * ga.order();
        for attempt in 0..12 {
            let bound = 2 + 2 * attempt as i64;
            let basis = if generators.rows() == 0 {
                vec![vec![Rational::from_integer(0.into()); dim]; r]
            } else {
                int_matrix(&mut rg, r, generators.rows(), bound)
                    .mul(generators)
                    .row_vecs()
            };
            let gens = full.then_some(generators);
            match Self::build(ga, ambient, support.clone(), basis, relations, gens) {
                Ok(f) => return Ok(f),
                Err(Error::NotFree(msg)) if msg.contains("frame spans") => last = Some(msg),
                Err(e) => return Err(e),
            }
        }
        Err(Error::NotFree(last.unwrap_or_default()))
    }

    pub fn algebra(&self) -> &Arc<GroupAlgebra> {
        &self.ga
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Flat rows spanning the relations (all translates).
    pub fn relations(&self) -> &Matrix<Rational> {
        &self.relations
    }

    pub fn idempotent(&self) -> CentralElement {
        CentralElement::indicator(self.ga.num_chars(), &self.support)
    }

    /// The matrix X over ℚ[G]e with x_i ≡ Σ_j X_ij·f_j on e·M.
    pub fn change_matrix(&self, tuple: &[Vec<Rational>]) -> Result<GrMatrix> {
        let ga = &self.ga;
        let n = ga.order();
        let r = self.rank;
        let group = ga.group();
        if tuple.len() != r {
            return Err(Error::ShapeError(format!(
                "tuple of length {} for a rank {r} frame",
                tuple.len()
            )));
        }
        let mut x = ga.gr_zeros(r, r);
        for o in &self.orbits {
            for (i, v) in tuple.iter().enumerate() {
                if v.len() != self.ambient * n {
                    return Err(Error::ShapeError("tuple element length".into()));
                }
                let target = o.proj.apply(v);
                let c = o.system.solve_left(&target).ok_or_else(|| {
                    Error::InvalidRepresentation("element outside the frame's module".into())
                })?;
                for j in 0..r {
                    let coeffs: Vec<Rational> = c[j * n..(j + 1) * n].to_vec();
                    let xij =
                        group.gr_mul(&GroupRingElement::from_rationals(coeffs), &o.idempotent);
                    x[(i, j)] = x[(i, j)].add(&xij);
                }
            }
        }
        Ok(x)
    }
}

/// nr of the change-of-coordinates matrix, restricted to the frame support.
pub fn wedge_coordinates(tuple: &[Vec<Rational>], frame: &Arc<WedgeFrame>) -> Result<WedgeElement> {
    let x = frame.change_matrix(tuple)?;
    let coords = frame.ga.reduced_norm(&x)?.restrict(&frame.support);
    Ok(WedgeElement {
        frame: frame.clone(),
        coords,
    })
}

/// (∧φ_i)(∧m_j) = nr of the matrix with (j, i) entry φ_i(m_j).
pub fn wedge_pairing(
    ga: &GroupAlgebra,
    tuple: &[Vec<Rational>],
    phis: &[EquivariantHom],
) -> Result<CentralElement> {
    if tuple.len() != phis.len() {
        return Err(Error::ShapeError(format!(
            "{} elements against {} homomorphisms",
            tuple.len(),
            phis.len()
        )));
    }
    let r = tuple.len();
    let gram = Matrix::from_fn(r, r, |j, i| phis[i].eval(&tuple[j]));
    ga.reduced_norm(&gram)
}

/// Multiplies (or divides) coordinates by nr of the matrix of an isomorphism, rows being the
/// images of the source frame in coordinates of `target`.
pub fn transport_wedge(
    w: &WedgeElement,
    iso: &GrMatrix,
    target: &Arc<WedgeFrame>,
    direction: Direction,
) -> Result<WedgeElement> {
    let ga = &w.frame.ga;
    if iso.rows() != w.frame.rank || iso.cols() != target.rank {
        return Err(Error::ShapeError(
            "isomorphism matrix must be r×r in the two frames".into(),
        ));
    }
    let nr = ga.reduced_norm(iso)?;
    let supp = &w.frame.support;
    if let Some(chi) = (0..supp.len()).find(|&c| supp[c] && nr.comp(c).is_zero()) {
        return Err(Error::SingularTransport(chi));
    }
    let mask: Vec<bool> = (0..supp.len())
        .map(|c| supp[c] && target.support[c])
        .collect();
    let coords = match direction {
        Direction::Forward => w.coords.mul(&nr),
        Direction::Inverse => w.coords.mul(&nr.pseudo_inv()),
    }
    .restrict(&mask);
    Ok(WedgeElement {
        frame: target.clone(),
        coords,
    })
}

impl WedgeElement {
    /// (∧φ)(w) = coords · (∧φ)(∧ frame basis).
    pub fn pair(&self, phis: &[EquivariantHom]) -> Result<CentralElement> {
        let v = wedge_pairing(&self.frame.ga, &self.frame.basis, phis)?;
        Ok(self.coords.mul(&v).restrict(&self.frame.support))
    }

    pub fn is_galois_stable(&self) -> bool {
        self.frame.ga.is_galois_stable(&self.coords)
    }
}

#[cfg(test)]
mod tests;
