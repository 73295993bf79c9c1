use crate::linalg::Matrix;
use crate::scalars::Field;

/// Rows spanning {v ∈ span(space) : v·sᵀ = 0 for every row s of `sub`}.
pub fn orthogonal_complement_in<F: Field>(sub: &Matrix<F>, space: &Matrix<F>) -> Matrix<F> {
    if space.rows() == 0 {
        return space.clone();
    }
    if sub.rows() == 0 {
        return space.row_space();
    }
    let gram = space.mul(&sub.transpose());
    let c = gram.left_kernel();
    if c.rows() == 0 {
        return Matrix::zeros(0, space.cols());
    }
    c.mul(space)
}

/// Orthogonal projector x ↦ x·P onto the row space of `s` (rows independent).
pub fn projector<F: Field>(s: &Matrix<F>) -> Matrix<F> {
    let n = s.cols();
    if s.rows() == 0 {
        return Matrix::zeros(n, n);
    }
    let g = s
        .mul(&s.transpose())
        .inverse()
        .expect("independent rows over an ordered field");
    s.transpose().mul(&g).mul(s)
}

/// Rows spanning the kernel {x ∈ span(space) : x·m = 0}.
pub fn kernel_in<F: Field>(space: &Matrix<F>, m: &Matrix<F>) -> Matrix<F> {
    if space.rows() == 0 {
        return space.clone();
    }
    let c = space.mul(m).left_kernel();
    if c.rows() == 0 {
        return Matrix::zeros(0, space.cols());
    }
    c.mul(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat_int, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
            rows[0].len(),
        )
    }

    #[test]
    fn complement_and_projector() {
        let space = m(&[&[1, 0, 0], &[0, 1, 0]]);
        let sub = m(&[&[1, 1, 0]]);
        let c = orthogonal_complement_in(&sub, &space);
        assert_eq!(c.rows(), 1);
        assert!(c.mul(&sub.transpose()).is_zero());
        let p = projector(&sub);
        assert_eq!(p.mul(&p), p);
        assert_eq!(
            p.apply(&[rat_int(1), rat_int(1), rat_int(0)]),
            vec![rat_int(1), rat_int(1), rat_int(0)]
        );
        let k = kernel_in(&space, &m(&[&[1], &[1], &[5]]));
        assert_eq!(k.rows(), 1);
    }
}
