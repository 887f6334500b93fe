//! Dense complex matrices and the Hermitian positive-definite kernels used by
//! the estimators.
//!
//! Matrices here are small (a few hundred rows at most), stored row-major in
//! a flat `Vec<Complex64>`. Every routine that produces a Hermitian result
//! symmetrizes it as `(A + A^H) / 2` so that rounding asymmetry cannot build
//! up across successive estimator stages.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pivots at or below this fraction of the largest diagonal entry are treated
/// as a loss of positive definiteness.
pub const PD_PIVOT_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::SizeMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::SizeMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Real-valued convenience constructor, mostly for tests and examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm distance between the matrix and its adjoint.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Copies the `rows x cols` sub-block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// A square matrix that is exactly Hermitian: `a[i][j] == conj(a[j][i])`
/// bit for bit, with a zero imaginary diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Symmetrizes a square matrix as `(A + A^H) / 2`.
    pub fn symmetrize(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::SizeMismatch {
                expected: m.rows,
                found: m.cols,
            });
        }
        let n = m.rows;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        Ok(Self(out))
    }

    /// Accepts a square matrix whose Hermitian defect is within `tol`
    /// (absolute, max-norm) and symmetrizes it.
    pub fn from_matrix(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::SizeMismatch {
                expected: m.rows,
                found: m.cols,
            });
        }
        if m.hermitian_defect() > tol {
            return Err(Error::InvalidSpec(format!(
                "matrix is not Hermitian (defect {:e})",
                m.hermitian_defect()
            )));
        }
        Self::symmetrize(&m)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn n(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self(self.0.scale(alpha))
    }

    fn max_diagonal(&self) -> f64 {
        (0..self.n()).map(|i| self.0[(i, i)].re).fold(f64::NEG_INFINITY, f64::max)
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

/// Lower-triangular Cholesky factor `L` with `L L^H = H` and a real positive
/// diagonal.
pub fn cholesky(h: &HermitianMatrix) -> Result<ComplexMatrix> {
    cholesky_with_floor(h, PD_PIVOT_RATIO * h.max_diagonal().max(0.0))
}

/// Cholesky factorization that rejects any pivot at or below `floor`.
pub fn cholesky_with_floor(h: &HermitianMatrix, floor: f64) -> Result<ComplexMatrix> {
    let n = h.n();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = h[(j, j)].re;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if !(pivot > floor) {
            return Err(Error::not_pd(j));
        }
        let ljj = pivot.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut acc = h[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / ljj;
        }
    }
    Ok(l)
}

/// Inverse of a lower-triangular matrix with nonzero real diagonal.
fn invert_lower(l: &ComplexMatrix) -> ComplexMatrix {
    let n = l.rows();
    let mut inv = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        inv[(col, col)] = Complex64::new(1.0, 0.0) / l[(col, col)];
        for i in (col + 1)..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in col..i {
                acc += l[(i, k)] * inv[(k, col)];
            }
            inv[(i, col)] = -acc / l[(i, i)];
        }
    }
    inv
}

/// Inverse of a Hermitian positive-definite matrix via Cholesky:
/// `H^{-1} = L^{-H} L^{-1}`.
pub fn invert_pd(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let l = cholesky(h)?;
    let linv = invert_lower(&l);
    let n = h.n();
    // (L^{-H} L^{-1})[i][j] = sum_k conj(linv[k][i]) linv[k][j], k >= max(i, j)
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in j..n {
                acc += linv[(k, i)].conj() * linv[(k, j)];
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
        out[(i, i)].im = 0.0;
    }
    Ok(HermitianMatrix(out))
}

/// Raw congruence product `M · H · M^H` without symmetrization.
pub fn congruence(m: &ComplexMatrix, h: &HermitianMatrix) -> Result<ComplexMatrix> {
    if m.cols() != h.n() {
        return Err(Error::SizeMismatch {
            expected: h.n(),
            found: m.cols(),
        });
    }
    m.matmul(h.matrix())?.matmul(&m.adjoint())
}

/// Congruence product `M · Hinv · M^H`, symmetrized to an exact Hermitian.
pub fn sandwich(m: &ComplexMatrix, hinv: &HermitianMatrix) -> Result<HermitianMatrix> {
    if m.rows() != hinv.n() {
        return Err(Error::SizeMismatch {
            expected: hinv.n(),
            found: m.rows(),
        });
    }
    HermitianMatrix::symmetrize(&congruence(m, hinv)?)
}
