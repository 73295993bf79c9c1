use serde::Serialize;

use super::split::{kernel_in, orthogonal_complement_in, projector};
use super::{annihilation_idempotent, idempotent_projection, AdmissibleComplex};
use crate::error::{Error, Result};
use crate::group_algebra::{
    unit_reduced_norm_test, CentralElement, GrMatrix, GroupAlgebra, UnitVerdict,
};
use crate::linalg::{Matrix, RowSolver};
use crate::plattice::left_action_matrix;
use crate::scalars::{CycloElement, Field, Rational};
use crate::synth::{random_matrix, rng};

/// An E-trivialisation t: H²(C)_E → H¹(C)_E, given at chain level by a group ring matrix
/// T: F² → F¹ (row convention) with im(∂)·T ⊆ im(δ⁰) and T·∂ = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Trivialisation {
    matrix: GrMatrix,
}

/// How complements are chosen when building λ_t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Splitting {
    /// Orthogonal complements for the standard form on the flat coordinates.
    Orthogonal,
    /// Orthogonal complements sheared by random equivariant maps.
    Random(u64),
}

#[derive(Clone, Debug)]
pub struct CharElement {
    pub value: CentralElement,
    pub splitting: Splitting,
}

impl Trivialisation {
    pub fn new(matrix: GrMatrix) -> Self {
        Trivialisation { matrix }
    }

    /// The zero map; valid exactly when H¹ and H² vanish rationally.
    pub fn zero(c: &AdmissibleComplex) -> Self {
        Trivialisation {
            matrix: c.algebra().gr_zeros(c.rank_at(2), c.rank_at(1)),
        }
    }

    pub fn identity(ga: &GroupAlgebra, d: usize) -> Self {
        Trivialisation {
            matrix: ga.gr_identity(d),
        }
    }

    pub fn matrix(&self) -> &GrMatrix {
        &self.matrix
    }

    pub fn is_rational(&self) -> bool {
        self.matrix.entries().iter().all(|x| x.is_rational())
    }

    /// A random rational trivialisation: projection onto a complement of im(∂), a random
    /// equivariant map, then projection onto a complement of im(δ⁰) in ker(∂).
    pub fn random(c: &AdmissibleComplex, seed: u64) -> Result<Self> {
        let mut r = rng(seed);
        let sp = Spaces::<Rational>::new(c)?;
        let ph = projector(&sp.h);
        let pq = projector(&sp.q);
        let group = c.algebra().group();
        for _ in 0..20 {
            let m = random_matrix(c.algebra(), &mut r, c.rank_at(2), c.rank_at(1), 2);
            let flat = pq
                .mul(&group.expand::<Rational>(&m).expect("rational"))
                .mul(&ph);
            let t = Trivialisation {
                matrix: group.contract(&flat),
            };
            if characteristic_element(c, &t).is_ok() {
                return Ok(t);
            }
        }
        Err(Error::InvalidTrivialisation(
            "no invertible random trivialisation found".into(),
        ))
    }
}

/// Flat subspaces of the terms used to split the complex over E.
struct Spaces<F> {
    e0: Matrix<F>,
    e2: Matrix<F>,
    d0: Matrix<F>,
    d1: Matrix<F>,
    /// im δ⁰ (basis rows).
    b: Matrix<F>,
    /// ker δ¹ ∩ (im δ⁰)^⊥.
    h: Matrix<F>,
    /// (ker δ¹)^⊥ in e·F¹.
    w: Matrix<F>,
    /// (im δ¹)^⊥ in e·F².
    q: Matrix<F>,
    /// (1 − e)·F¹.
    rest: Matrix<F>,
    k: Matrix<F>,
    im1: Matrix<F>,
}

fn to_field<F: Field>(m: &Matrix<Rational>) -> Matrix<F> {
    m.map(|x| F::from_rational(x))
}

fn check_shape(c: &AdmissibleComplex) -> Result<()> {
    if c.end() != 2 || !(c.start() == 0 || c.start() == 1) {
        return Err(Error::ShapeError(format!(
            "characteristic elements need terms in degrees ⊆ {{0,1,2}} ending in degree 2, got {}..{}",
            c.start(),
            c.end()
        )));
    }
    if c.rank_at(1) != c.rank_at(0) + c.rank_at(2) {
        return Err(Error::ShapeError(
            "term ranks must satisfy r¹ = r⁰ + r²".into(),
        ));
    }
    Ok(())
}

impl<F: Field> Spaces<F> {
    fn new(c: &AdmissibleComplex) -> Result<Self> {
        check_shape(c)?;
        let ga = c.algebra();
        let group = ga.group();
        let n = ga.order();
        let (r0, r1, r2) = (c.rank_at(0), c.rank_at(1), c.rank_at(2));
        let d1: Matrix<F> = group
            .expand(c.differential_from(1).expect("degree 1"))
            .expect("rational");
        let d0: Matrix<F> = match c.differential_from(0) {
            Some(d) => group.expand(d).expect("rational"),
            None => Matrix::zeros(0, r1 * n),
        };
        let span = |r: usize| -> (Matrix<F>, Matrix<F>) {
            match c.idempotent() {
                None => (Matrix::identity(r * n), Matrix::zeros(0, r * n)),
                Some(e) => {
                    let pe = idempotent_projection(ga, e, r);
                    let rest = Matrix::<Rational>::identity(r * n).sub(&pe);
                    (to_field(&pe.row_space()), to_field(&rest.row_space()))
                }
            }
        };
        let (e0, _) = span(r0);
        let (e1, rest) = span(r1);
        let (e2, _) = span(r2);
        let k = kernel_in(&e1, &d1);
        let img0 = if e0.rows() == 0 {
            Matrix::zeros(0, r1 * n)
        } else {
            e0.mul(&d0)
        };
        if img0.rank() != e0.rows() {
            return Err(Error::InvalidRepresentation(
                "δ⁰ is not injective on the rational component".into(),
            ));
        }
        let b = img0.row_space();
        let h = orthogonal_complement_in(&b, &k);
        let w = orthogonal_complement_in(&k, &e1);
        let im1 = e1.mul(&d1).row_space();
        let q = orthogonal_complement_in(&im1, &e2);
        Ok(Spaces {
            e0,
            e2,
            d0,
            d1,
            b,
            h,
            w,
            q,
            rest,
            k,
            im1,
        })
    }

    fn shear(&mut self, ga: &GroupAlgebra, r1: usize, r2: usize, seed: u64) {
        let mut r = rng(seed);
        let group = ga.group();
        let mut rand_map = |rows: usize| -> Matrix<F> {
            let m = random_matrix(ga, &mut r, rows, rows, 1);
            group.expand(&m).expect("rational")
        };
        let (a, b, c) = (rand_map(r1), rand_map(r1), rand_map(r2));
        if self.b.rows() > 0 && self.h.rows() > 0 {
            self.h = self.h.add(&self.h.mul(&a).mul(&projector(&self.b)));
        }
        if self.k.rows() > 0 && self.w.rows() > 0 {
            self.w = self.w.add(&self.w.mul(&b).mul(&projector(&self.k)));
        }
        if self.im1.rows() > 0 && self.q.rows() > 0 {
            self.q = self.q.add(&self.q.mul(&c).mul(&projector(&self.im1)));
        }
    }
}

fn lambda_flat<F: Field>(
    c: &AdmissibleComplex,
    t: &Trivialisation,
    split: Splitting,
) -> Result<Matrix<F>> {
    let ga = c.algebra();
    let group = ga.group();
    let n = ga.order();
    let (r0, r1, r2) = (c.rank_at(0), c.rank_at(1), c.rank_at(2));
    if t.matrix.rows() != r2 || t.matrix.cols() != r1 {
        return Err(Error::ShapeError(format!(
            "trivialisation is {}x{}, expected {r2}x{r1}",
            t.matrix.rows(),
            t.matrix.cols()
        )));
    }
    let mut sp = Spaces::<F>::new(c)?;
    if let Splitting::Random(seed) = split {
        sp.shear(ga, r1, r2, seed);
    }
    let tf: Matrix<F> = group
        .expand(&t.matrix)
        .ok_or_else(|| Error::InvalidTrivialisation("entries outside the working field".into()))?;
    // t must descend to cohomology
    let e1d1 = sp.im1.clone();
    let killed = if e1d1.rows() == 0 {
        e1d1.clone()
    } else {
        e1d1.mul(&tf)
    };
    if killed.rows() > 0 && sp.b.vstack(&killed).rank() != sp.b.rows() {
        return Err(Error::InvalidTrivialisation("t does not kill im(∂)".into()));
    }
    if sp.e2.rows() > 0 && !sp.e2.mul(&tf).mul(&sp.d1).is_zero() {
        return Err(Error::InvalidTrivialisation(
            "t does not land in ker(∂)".into(),
        ));
    }
    let nt = (r0 + r2) * n;
    let mut basis: Vec<Vec<F>> = Vec::with_capacity(r1 * n);
    let mut images: Vec<Vec<F>> = Vec::with_capacity(r1 * n);
    let img0 = if sp.e0.rows() == 0 {
        Matrix::zeros(0, r1 * n)
    } else {
        sp.e0.mul(&sp.d0)
    };
    let pre0 = RowSolver::new(&img0);
    for b in sp.b.row_vecs() {
        let cf = pre0.coords(&b).expect("in the image of δ⁰");
        let x0 = sp.e0.apply(&cf);
        let mut img = x0;
        img.resize(nt, F::zero());
        basis.push(b);
        images.push(img);
    }
    if sp.h.rows() > 0 {
        let qt = if sp.q.rows() == 0 {
            Matrix::zeros(0, r1 * n)
        } else {
            sp.q.mul(&tf)
        };
        let sys = qt.vstack(&img0);
        for h in sp.h.row_vecs() {
            let cf = sys.solve_left(&h).ok_or_else(|| {
                Error::InvalidTrivialisation("t is not surjective onto H¹".into())
            })?;
            let y = sp.q.apply(&cf[..sp.q.rows()]);
            let mut img = vec![F::zero(); r0 * n];
            img.extend(y);
            basis.push(h);
            images.push(img);
        }
    }
    for w in sp.w.row_vecs() {
        let mut img = vec![F::zero(); r0 * n];
        img.extend(sp.d1.apply(&w));
        basis.push(w);
        images.push(img);
    }
    for v in sp.rest.row_vecs() {
        basis.push(v.clone());
        images.push(v);
    }
    if basis.len() != r1 * n {
        return Err(Error::Critical(format!(
            "splitting has {} vectors for dimension {}",
            basis.len(),
            r1 * n
        )));
    }
    let pm = Matrix::from_rows(basis, r1 * n);
    let im = Matrix::from_rows(images, nt);
    let inv = pm
        .inverse()
        .ok_or_else(|| Error::Critical("splitting vectors are dependent".into()))?;
    let lam = inv.mul(&im);
    for g in 0..n {
        let a1: Matrix<F> = to_field(&left_action_matrix(group, g, r1));
        let at: Matrix<F> = to_field(&left_action_matrix(group, g, r0 + r2));
        if a1.mul(&lam) != lam.mul(&at) {
            return Err(Error::Critical("λ_t is not G-equivariant".into()));
        }
    }
    Ok(lam)
}

/// 𝓛 = nr(λ_t) with orthogonal splittings.
pub fn characteristic_element(c: &AdmissibleComplex, t: &Trivialisation) -> Result<CharElement> {
    characteristic_element_with(c, t, Splitting::Orthogonal)
}

pub fn characteristic_element_with(
    c: &AdmissibleComplex,
    t: &Trivialisation,
    split: Splitting,
) -> Result<CharElement> {
    let ga = c.algebra();
    let group = ga.group();
    let lam = if t.is_rational() {
        group.contract(&lambda_flat::<Rational>(c, t, split)?)
    } else {
        group.contract(&lambda_flat::<CycloElement>(c, t, split)?)
    };
    let nr = ga.reduced_norm(&lam)?;
    let supp = c.support();
    let value = nr.restrict(&supp);
    if let Some(chi) = (0..supp.len()).find(|&chi| supp[chi] && value.comp(chi).is_zero()) {
        return Err(Error::InvalidTrivialisation(format!(
            "λ_t is singular at {}",
            ga.label(chi)
        )));
    }
    Ok(CharElement {
        value,
        splitting: split,
    })
}

/// e₀-parts of a characteristic element of C and of the component complex e₀C.
#[derive(Clone, Debug)]
pub struct CompatReport {
    pub e0: CentralElement,
    pub l: CentralElement,
    /// Characteristic element of R[G]e₀ ⊗ C.
    pub l0: CentralElement,
    /// Per-character recomputation det(ρ_χ(δ⁰); s)⁻¹ with s a section of ρ_χ(δ¹).
    pub l0_direct: CentralElement,
    /// 𝓛₀ / e₀𝓛 on e₀, 1 elsewhere.
    pub ratio: CentralElement,
    pub verdict: UnitVerdict,
}

impl CompatReport {
    pub fn exact_match(&self) -> bool {
        self.ratio.is_one() && self.l0 == self.l0_direct
    }
}

pub fn char_component_compat(c: &AdmissibleComplex, t: &Trivialisation) -> Result<CompatReport> {
    let ga = c.algebra();
    let e0 = annihilation_idempotent(c);
    let l = characteristic_element(c, t)?.value;
    let l0 = if e0.is_zero() {
        ga.central_zero()
    } else {
        let c0 = c.component(&e0)?;
        characteristic_element(&c0, &Trivialisation::zero(&c0))?.value
    };
    let l0_direct = direct_component_element(c, &e0)?;
    let supp = e0.support();
    let ratio = CentralElement::new(
        (0..supp.len())
            .map(|chi| {
                if supp[chi] {
                    l0.comp(chi).div(l.comp(chi))
                } else {
                    Ok(CycloElement::one())
                }
            })
            .collect::<Result<_>>()?,
    );
    let verdict = unit_reduced_norm_test(ga, &ratio, c.p())?;
    Ok(CompatReport {
        e0,
        l,
        l0,
        l0_direct,
        ratio,
        verdict,
    })
}

/// On components where the complex is rationally acyclic, nr(λ) computed character by
/// character from the representation matrices of the differentials.
pub fn direct_component_element(
    c: &AdmissibleComplex,
    e: &CentralElement,
) -> Result<CentralElement> {
    check_shape(c)?;
    let ga = c.algebra();
    let supp = e.support();
    let mut comps = vec![CycloElement::zero(); ga.num_chars()];
    for chi in 0..ga.num_chars() {
        if !supp[chi] {
            continue;
        }
        let d1 = c.differential_from(1).expect("degree 1");
        let d0 = c.differential_from(0);
        let v = match (
            ga.rho_matrix_rational(chi, d1),
            d0.map(|d| ga.rho_matrix_rational(chi, d)),
        ) {
            (Some(a), None) => inverse_split_det(None, &a).map(CycloElement::from),
            (Some(a), Some(Some(b))) => inverse_split_det(Some(&b), &a).map(CycloElement::from),
            _ => {
                let a = ga.rho_matrix(chi, d1);
                let b = d0.map(|d| ga.rho_matrix(chi, d));
                inverse_split_det(b.as_ref(), &a)
            }
        };
        comps[chi] = v.ok_or_else(|| {
            Error::InvalidTrivialisation(format!(
                "complex is not rationally acyclic at {}",
                ga.label(chi)
            ))
        })?;
    }
    Ok(CentralElement::new(comps))
}

fn inverse_split_det<F: Field>(d0: Option<&Matrix<F>>, d1: &Matrix<F>) -> Option<F> {
    let m = d1.cols();
    let mut rows = Vec::new();
    for j in 0..m {
        let mut unit = vec![F::zero(); m];
        unit[j] = F::one();
        rows.push(d1.solve_left(&unit)?);
    }
    let s = Matrix::from_rows(rows, d1.rows());
    let iota = match d0 {
        Some(a) => a.vstack(&s),
        None => s,
    };
    if !iota.is_square() {
        return None;
    }
    iota.det().finv()
}
