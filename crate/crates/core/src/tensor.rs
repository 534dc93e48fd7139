//! Dense vectors, matrices, and order-3 tensors over a [`Scalar`].
//!
//! The central object is the matrix multiplication tensor
//! `T[(i1,j1),(i2,j2),(i3,j3)] = [j1 = i2][j2 = i3][j3 = i1]`
//! on n-by-n matrices, stored densely with one axis per matrix slot (each of
//! length n^2). Pairing it with three matrices gives the trace `tr(ABC)`,
//! which is what every decomposition in this crate is checked against.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_traits::Zero;

use crate::error::Error;
use crate::scalar::Scalar;

/// Dense column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<S> {
    data: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn from_vec(data: Vec<S>) -> Self {
        Vector { data }
    }

    pub fn zeros(n: usize) -> Self {
        Vector {
            data: vec![S::zero(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, S> {
        self.data.iter()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        Vector {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        Vector {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(x, y)| x.clone() - y.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Vector {
            data: self.data.iter().map(|x| c.clone() * x.clone()).collect(),
        }
    }

    /// Hermitian inner product `sum_i conj(u_i) v_i`.
    pub fn dot(&self, rhs: &Self) -> S {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(S::zero(), |acc, (x, y)| acc + x.conj() * y.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Vector<T> {
        Vector {
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.data[i]
    }
}

impl<S: fmt::Display> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, x) in self.data.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Dense row-major matrix; rectangular shapes are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience for integer-entried test matrices.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| S::from_ratio(x, 1)).collect())
                .collect(),
        )
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

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape differs");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape differs");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(x, y)| x.clone() - y.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c.clone() * x.clone()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                }
            }
        }
        out
    }

    /// Copies the `rows x cols` submatrix starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    /// Writes `src` into the submatrix starting at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Self) {
        assert!(
            r0 + src.rows <= self.rows && c0 + src.cols <= self.cols,
            "block out of range"
        );
        for i in 0..src.rows {
            for j in 0..src.cols {
                self[(r0 + i, c0 + j)] = src[(i, j)].clone();
            }
        }
    }

    pub fn mul_vec(&self, v: &Vector<S>) -> Vector<S> {
        assert_eq!(self.cols, v.dim(), "inner dimensions differ");
        let mut out = Vector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = S::zero();
            for j in 0..self.cols {
                acc = acc + self[(i, j)].clone() * v[j].clone();
            }
            out.data[i] = acc;
        }
        out
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Entrywise conjugate transpose.
    pub fn conj_transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Largest entry magnitude; zero for an empty matrix.
    pub fn max_mag(&self) -> f64 {
        self.data.iter().map(Scalar::mag).fold(0.0, f64::max)
    }

    /// Inverse by Gauss-Jordan elimination with pivot-magnitude selection.
    ///
    /// Errors with [`Error::InvalidParameter`] when the matrix is singular.
    /// With exact scalars the elimination is exact, so singularity detection
    /// is too.
    pub fn inverse(&self) -> Result<Self, Error> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&r1, &r2| {
                    a[(r1, col)]
                        .mag()
                        .partial_cmp(&a[(r2, col)].mag())
                        .unwrap_or(core::cmp::Ordering::Equal)
                })
                .ok_or_else(|| Error::InvalidParameter("matrix is singular".into()))?;
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot_row * n + j);
                    inv.data.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pivot_inv = a[(col, col)].inv().map_err(Error::Scalar)?;
            for j in 0..n {
                a[(col, j)] = pivot_inv.clone() * a[(col, j)].clone();
                inv[(col, j)] = pivot_inv.clone() * inv[(col, j)].clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].clone() - factor.clone() * a[(col, j)].clone();
                    inv[(r, j)] = inv[(r, j)].clone() - factor.clone() * inv[(col, j)].clone();
                }
            }
        }
        Ok(inv)
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Outer product `|u><v|` with entries `u_i * conj(v_j)`.
pub fn outer<S: Scalar>(u: &Vector<S>, v: &Vector<S>) -> Matrix<S> {
    let mut m = Matrix::zeros(u.dim(), v.dim());
    for i in 0..u.dim() {
        for j in 0..v.dim() {
            m[(i, j)] = u[i].clone() * v[j].conj();
        }
    }
    m
}

/// Dense order-3 tensor with independent axis lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<S> {
    dims: [usize; 3],
    data: Vec<S>,
}

impl<S: Scalar> Tensor3<S> {
    pub fn zeros(dims: [usize; 3]) -> Self {
        Tensor3 {
            dims,
            data: vec![S::zero(); dims[0] * dims[1] * dims[2]],
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn get(&self, p: usize, q: usize, r: usize) -> &S {
        &self.data[(p * self.dims[1] + q) * self.dims[2] + r]
    }

    pub fn set(&mut self, p: usize, q: usize, r: usize, value: S) {
        self.data[(p * self.dims[1] + q) * self.dims[2] + r] = value;
    }

    /// Accumulates `coeff * vec(X) (x) vec(Y) (x) vec(Z)` into `self`, where
    /// `vec` is row-major flattening. Cheaper than building each rank-one
    /// tensor separately when summing many terms.
    pub fn add_scaled_rank_one(
        &mut self,
        coeff: &S,
        x: &Matrix<S>,
        y: &Matrix<S>,
        z: &Matrix<S>,
    ) {
        assert_eq!(
            self.dims,
            [
                x.rows() * x.cols(),
                y.rows() * y.cols(),
                z.rows() * z.cols()
            ],
            "factor shapes do not match tensor axes"
        );
        let mut idx = 0;
        for xv in &x.data {
            let cx = coeff.clone() * xv.clone();
            if cx.is_zero() && S::EXACT {
                idx += self.dims[1] * self.dims[2];
                continue;
            }
            for yv in &y.data {
                let cxy = cx.clone() * yv.clone();
                if cxy.is_zero() && S::EXACT {
                    idx += self.dims[2];
                    continue;
                }
                for zv in &z.data {
                    self.data[idx] = self.data[idx].clone() + cxy.clone() * zv.clone();
                    idx += 1;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dims, rhs.dims, "tensor dimensions differ");
        Tensor3 {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dims, rhs.dims, "tensor dimensions differ");
        Tensor3 {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(x, y)| x.clone() - y.clone())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Largest entry magnitude.
    pub fn max_mag(&self) -> f64 {
        self.data.iter().map(Scalar::mag).fold(0.0, f64::max)
    }

    /// Largest entrywise difference `|self - rhs|` in magnitude.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dims, rhs.dims, "tensor dimensions differ");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(x, y)| (x.clone() - y.clone()).mag())
            .fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor3<T> {
        Tensor3 {
            dims: self.dims,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Rank-one tensor `vec(X) (x) vec(Y) (x) vec(Z)` (row-major flattening).
pub fn rank_one_tensor<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>, z: &Matrix<S>) -> Tensor3<S> {
    let mut t = Tensor3::zeros([
        x.rows() * x.cols(),
        y.rows() * y.cols(),
        z.rows() * z.cols(),
    ]);
    t.add_scaled_rank_one(&S::one(), x, y, z);
    t
}

/// The matrix multiplication tensor on n-by-n matrices:
/// `T[(i1,j1),(i2,j2),(i3,j3)] = [j1 = i2][j2 = i3][j3 = i1]`,
/// with each index pair flattened as `i*n + j`. It has exactly `n^3` unit
/// entries, and pairing it with `(A, B, C)` yields `tr(ABC)`.
pub fn mm_tensor<S: Scalar>(n: usize) -> Tensor3<S> {
    let mut t = Tensor3::zeros([n * n; 3]);
    for i1 in 0..n {
        for j1 in 0..n {
            for j2 in 0..n {
                t.set(i1 * n + j1, j1 * n + j2, j2 * n + i1, S::one());
            }
        }
    }
    t
}

/// The matrix multiplication tensor with each Kronecker delta replaced by a
/// square matrix `P`: entries `P[j1,i2] * P[j2,i3] * P[j3,i1]`.
///
/// With `P` the identity this is [`mm_tensor`]. With `P` an orthogonal
/// projection it is the multiplication tensor of the compressed algebra
/// `P . P` embedded in the ambient coordinates, which is how decompositions
/// over sum-zero coordinate representations are verified exactly.
pub fn mm_tensor_twisted<S: Scalar>(p: &Matrix<S>) -> Tensor3<S> {
    assert!(p.is_square(), "twist matrix must be square");
    let m = p.rows();
    let mut t: Tensor3<S> = Tensor3::zeros([m * m; 3]);
    for i1 in 0..m {
        for j1 in 0..m {
            let p31_row = i1; // second factor of the (j3, i1) twist
            for i2 in 0..m {
                let p12 = p[(j1, i2)].clone();
                if p12.is_zero() && S::EXACT {
                    continue;
                }
                for j2 in 0..m {
                    for i3 in 0..m {
                        let p23 = p[(j2, i3)].clone();
                        if p23.is_zero() && S::EXACT {
                            continue;
                        }
                        let p12p23 = p12.clone() * p23;
                        for j3 in 0..m {
                            let val = p12p23.clone() * p[(j3, p31_row)].clone();
                            if !val.is_zero() {
                                let cur = t.get(i1 * m + j1, i2 * m + j2, i3 * m + j3).clone();
                                t.set(i1 * m + j1, i2 * m + j2, i3 * m + j3, cur + val);
                            }
                        }
                    }
                }
            }
        }
    }
    t
}

/// The rank-one tensor `vec(I) (x) vec(I) (x) vec(I)` whose pairing with
/// `(A, B, C)` is `tr(A) tr(B) tr(C)`.
pub fn identity_tensor<S: Scalar>(n: usize) -> Tensor3<S> {
    let id = Matrix::identity(n);
    rank_one_tensor(&id, &id, &id)
}

/// Trilinear pairing `sum T[a,b,c] A[a] B[b] C[c]` over flattened indices.
///
/// For [`mm_tensor`] this equals `tr(ABC)`; for [`identity_tensor`] it equals
/// `tr(A) tr(B) tr(C)`.
pub fn pairing<S: Scalar>(t: &Tensor3<S>, a: &Matrix<S>, b: &Matrix<S>, c: &Matrix<S>) -> S {
    assert_eq!(
        t.dims,
        [
            a.rows() * a.cols(),
            b.rows() * b.cols(),
            c.rows() * c.cols()
        ],
        "matrix shapes do not match tensor axes"
    );
    let mut acc = S::zero();
    let mut idx = 0;
    for av in &a.data {
        if av.is_zero() && S::EXACT {
            idx += t.dims[1] * t.dims[2];
            continue;
        }
        for bv in &b.data {
            let ab = av.clone() * bv.clone();
            if ab.is_zero() && S::EXACT {
                idx += t.dims[2];
                continue;
            }
            for cv in &c.data {
                let tv = &t.data[idx];
                idx += 1;
                if !tv.is_zero() {
                    acc = acc + tv.clone() * ab.clone() * cv.clone();
                }
            }
        }
    }
    acc
}

/// Compares two tensors: literal equality for exact scalars, largest
/// entrywise difference at most `tol` otherwise.
pub fn tensor_eq<S: Scalar>(lhs: &Tensor3<S>, rhs: &Tensor3<S>, tol: f64) -> bool {
    if lhs.dims != rhs.dims {
        return false;
    }
    if S::EXACT {
        lhs == rhs
    } else {
        lhs.max_abs_diff(rhs) <= tol
    }
}
