//! Dense matrices over exact fields. Vectors are rows; a matrix acts on the right.

use std::ops::{Index, IndexMut};

use crate::scalars::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    /// Builds from row vectors; `cols` is used when there are no rows.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(cols);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Clone, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack width");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack height");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn push_row(&mut self, row: Vec<T>) {
        if self.rows == 0 && self.data.is_empty() {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols, "row width");
        self.data.extend(row);
        self.rows += 1;
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-reduced echelon form data.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, F::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].fadd(&a.fmul(b));
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.rows, "vector length");
        let mut out = vec![F::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = &self[(k, j)];
                if !b.is_zero() {
                    *o = o.fadd(&a.fmul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.fadd(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().fneg()))
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.fmul(c))
    }

    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = m[(r, c)].finv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m[(r, j)].fmul(&inv);
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let v = m[(i, j)].fsub(&f.fmul(&m[(r, j)]));
                            m[(i, j)] = v;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis (as rows, in reduced echelon form) of the row space.
    pub fn row_space(&self) -> Matrix<F> {
        let r = self.rref();
        let k = r.pivots.len();
        let idx: Vec<usize> = (0..k).collect();
        r.matrix.select_rows(&idx)
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if piv != c {
                m.swap_rows(c, piv);
                det = det.fneg();
            }
            let p = m[(c, c)].clone();
            det = det.fmul(&p);
            let inv = p.finv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].fmul(&inv);
                for j in c..n {
                    if !m[(c, j)].is_zero() {
                        let v = m[(i, j)].fsub(&f.fmul(&m[(c, j)]));
                        m[(i, j)] = v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Matrix::identity(n));
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.matrix.submatrix(&rows, &cols))
    }

    /// Basis of {x : x·M = 0}.
    pub fn left_kernel(&self) -> Matrix<F> {
        self.transpose().right_kernel()
    }

    /// Basis vectors (as rows) of {v : M·vᵀ = 0}.
    pub fn right_kernel(&self) -> Matrix<F> {
        let r = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !r.pivots.contains(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out[(k, f)] = F::one();
            for (i, &p) in r.pivots.iter().enumerate() {
                out[(k, p)] = r.matrix[(i, f)].fneg();
            }
        }
        out
    }

    /// Some x with x·M = b.
    pub fn solve_left(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.cols, "right-hand side length");
        // (x | 1)·[M ; -b] = 0 ⇔ Mᵀxᵀ = bᵀ
        let t = self.transpose();
        let aug = t.hstack(&Matrix::from_fn(self.cols, 1, |i, _| b[i].clone()));
        let r = aug.rref();
        if r.pivots.last() == Some(&self.rows) {
            return None;
        }
        let mut x = vec![F::zero(); self.rows];
        for (i, &p) in r.pivots.iter().enumerate() {
            x[p] = r.matrix[(i, self.rows)].clone();
        }
        Some(x)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }
}

/// Incremental solver for x·B = v against a fixed basis B with independent rows.
#[derive(Clone, Debug)]
pub struct RowSolver<F> {
    basis_rows: usize,
    pivots: Vec<usize>,
    /// coordinates = v[pivots] · coord_map
    coord_map: Matrix<F>,
    basis: Matrix<F>,
}

impl<F: Field> RowSolver<F> {
    /// `basis` must have linearly independent rows.
    pub fn new(basis: &Matrix<F>) -> Self {
        let k = basis.rows();
        if k == 0 {
            return RowSolver {
                basis_rows: 0,
                pivots: vec![],
                coord_map: Matrix::zeros(0, 0),
                basis: basis.clone(),
            };
        }
        let r = basis.rref();
        assert_eq!(r.pivots.len(), k, "basis rows are dependent");
        let rows: Vec<usize> = (0..k).collect();
        let sq = basis.submatrix(&rows, &r.pivots);
        let coord_map = sq.inverse().expect("pivot minor invertible");
        RowSolver {
            basis_rows: k,
            pivots: r.pivots,
            coord_map,
            basis: basis.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_rows
    }

    /// Coordinates of v assuming v lies in the span.
    pub fn coords_unchecked(&self, v: &[F]) -> Vec<F> {
        if self.basis_rows == 0 {
            return vec![];
        }
        let w: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        self.coord_map.apply(&w)
    }

    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        let c = self.coords_unchecked(v);
        let back = if self.basis_rows == 0 {
            vec![F::zero(); v.len()]
        } else {
            self.basis.apply(&c)
        };
        if back == v {
            Some(c)
        } else {
            None
        }
    }
}
