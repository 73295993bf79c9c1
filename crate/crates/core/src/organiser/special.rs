use std::sync::Arc;

use crate::complexes::{
    rank_idempotents, surjection_idempotent, AdmissibleComplex, Surjection, Trivialisation,
};
use crate::error::{Error, Result};
use crate::exterior::{wedge_coordinates, WedgeElement, WedgeFrame};
use crate::group_algebra::{CentralElement, GroupAlgebra};
use crate::linalg::Matrix;
use crate::scalars::Rational;

/// η_𝒳 in coordinates of a rational frame of e_π·e_a·H¹(C).
#[derive(Clone, Debug)]
pub struct SpecialElement {
    pub eta: WedgeElement,
    pub e_pi: CentralElement,
    pub e_a: CentralElement,
    /// Coordinates of ∧𝒳 in the frame of Y_π.
    pub x_coords: CentralElement,
    /// nr of the matrix of t∘π⁻¹ between the two frames.
    pub transport: CentralElement,
    pub seed: u64,
}

pub(crate) fn flat_rows(
    ga: &GroupAlgebra,
    m: &crate::group_algebra::GrMatrix,
) -> Result<Vec<Vec<Rational>>> {
    (0..m.rows())
        .map(|i| {
            ga.group()
                .flatten(m.row(i))
                .ok_or_else(|| Error::InvalidRepresentation("matrix must be rational".into()))
        })
        .collect()
}

/// Frame of e·Y_π with basis vectors among integral combinations of the standard basis.
pub(crate) fn target_frame(
    ga: &Arc<GroupAlgebra>,
    pi: &Surjection,
    mask: &[bool],
    a: usize,
    seed: u64,
) -> Result<WedgeFrame> {
    let ry = pi.target_rank();
    let rel = flat_rows(ga, pi.relations())?;
    WedgeFrame::search(
        ga,
        ry,
        mask.to_vec(),
        a,
        &Matrix::identity(ry * ga.order()),
        &rel,
        seed,
    )
}

/// Frame of e·H¹(C) with basis vectors among integral combinations of cocycles.
pub(crate) fn cohomology_frame(
    c: &AdmissibleComplex,
    mask: &[bool],
    a: usize,
    seed: u64,
) -> Result<WedgeFrame> {
    let ga = c.algebra();
    let rel = match c.differential_from(0) {
        Some(d0) => flat_rows(ga, d0)?,
        None => vec![],
    };
    WedgeFrame::search(
        ga,
        c.rank_at(1),
        mask.to_vec(),
        a,
        &c.cocycle_basis(1)?,
        &rel,
        seed,
    )
}

/// η_𝒳 = (t_π^a)⁻¹(e_π·e_a·𝓛·∧𝒳) for 𝒳 given as flat vectors of ℚ[G]^{r_Y}.
pub fn special_element(
    c: &AdmissibleComplex,
    t: &Trivialisation,
    l: &CentralElement,
    pi: &Surjection,
    xs: &[Vec<Rational>],
    seed: u64,
) -> Result<SpecialElement> {
    let ga = c.algebra();
    let group = ga.group();
    let n = ga.order();
    let a = xs.len();
    let (r1, r2) = (c.rank_at(1), c.rank_at(2));
    if xs.iter().any(|x| x.len() != pi.target_rank() * n) {
        return Err(Error::ShapeError(
            "elements of 𝒳 must lie in the free module presenting Y".into(),
        ));
    }
    if t.matrix().rows() != r2 || t.matrix().cols() != r1 {
        return Err(Error::ShapeError(
            "trivialisation matrix must be F² → F¹".into(),
        ));
    }
    if !t.is_rational() {
        return Err(Error::InvalidRepresentation(
            "special elements need a rational trivialisation".into(),
        ));
    }
    let e_pi = surjection_idempotent(c, pi);
    let (e_a, _) = rank_idempotents(c, a)?;
    let e = e_pi.mul(&e_a);
    let mask = e.support();

    let yframe = Arc::new(target_frame(ga, pi, &mask, a, seed)?);
    let hframe = Arc::new(cohomology_frame(c, &mask, a, seed.wrapping_add(1))?);
    let x_coords = wedge_coordinates(xs, &yframe)?.coords;

    let pf: Matrix<Rational> = group.expand(pi.matrix()).expect("rational");
    let tf: Matrix<Rational> = group.expand(t.matrix()).expect("rational");
    let lift_system = pf.vstack(yframe.relations());
    let mut images = Vec::with_capacity(a);
    for y in yframe.basis() {
        let coeffs = lift_system
            .solve_left(y)
            .ok_or_else(|| Error::Critical("frame vector of Y outside the image of π".into()))?;
        images.push(tf.apply(&coeffs[..r2 * n]));
    }
    let m = hframe.change_matrix(&images)?;
    let transport = ga.reduced_norm(&m)?.restrict(&mask);
    let coords = l.mul(&x_coords).mul(&transport).restrict(&mask);
    let eta = WedgeElement {
        frame: hframe,
        coords,
    };
    if !eta.is_galois_stable() {
        return Err(Error::Critical(
            "coordinates of η are not Galois-stable".into(),
        ));
    }
    Ok(SpecialElement {
        eta,
        e_pi,
        e_a,
        x_coords,
        transport,
        seed,
    })
}
