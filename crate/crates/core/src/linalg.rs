//! Dense row-major matrices and the small set of vector/matrix routines the
//! rest of the crate is built on: products, norms, power iteration for the
//! spectral norm, and a cyclic-Jacobi symmetric eigensolver.

use crate::error::{Error, Result};

/// Dense matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = 1.0;
        }
        m
    }

    /// Build from nested rows, rejecting ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Validation("matrix must have at least one row".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::Validation("matrix rows must be non-empty".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: format!("matrix row {i}"),
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix::new(rows.len(), cols, data))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// y = A x
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows).map(|r| dot(self.row(r), x)).collect()
    }

    /// y = A^T x
    pub fn matvec_t(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "matvec_t dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            let row = self.row(r);
            for (o, &a) in out.iter_mut().zip(row) {
                *o += a * xr;
            }
        }
        out
    }

    /// Gram matrix A^T A (cols x cols).
    pub fn gram(&self) -> Matrix {
        let k = self.cols;
        let mut g = Matrix::zeros(k, k);
        for r in 0..self.rows {
            let row = self.row(r);
            for (i, &ri) in row.iter().enumerate() {
                if ri == 0.0 {
                    continue;
                }
                for (j, &rj) in row.iter().enumerate().skip(i) {
                    *g.at_mut(i, j) += ri * rj;
                }
            }
        }
        for i in 0..k {
            for j in 0..i {
                *g.at_mut(i, j) = g.at(j, i);
            }
        }
        g
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(v: &[f64], alpha: f64) -> Vec<f64> {
    v.iter().map(|x| x * alpha).collect()
}

/// x += alpha * y
pub fn axpy(x: &mut [f64], alpha: f64, y: &[f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (xi, yi) in x.iter_mut().zip(y) {
        *xi += alpha * yi;
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest singular value via power iteration on A^T A.
///
/// Deterministic all-ones start vector; if that start lands in the null
/// space, falls back to a ramp vector and then to basis vectors, so the
/// result does not depend on any external randomness. Converges when the
/// eigenvalue estimate changes by less than `rel_tol` relatively, with an
/// iteration cap.
pub fn spectral_norm(a: &Matrix, rel_tol: f64, max_iter: usize) -> f64 {
    let n = a.cols();
    if a.frobenius_norm() == 0.0 {
        return 0.0;
    }
    let starts: Vec<Vec<f64>> = vec![
        vec![1.0 / (n as f64).sqrt(); n],
        (1..=n).map(|i| i as f64).collect(),
    ];
    for start in starts {
        if let Some(sigma) = power_iterate(a, start, rel_tol, max_iter) {
            return sigma;
        }
    }
    // Contrived null-space starts: probe basis vectors deterministically.
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        if let Some(sigma) = power_iterate(a, e, rel_tol, max_iter) {
            return sigma;
        }
    }
    0.0
}

fn power_iterate(a: &Matrix, mut v: Vec<f64>, rel_tol: f64, max_iter: usize) -> Option<f64> {
    let nv = norm2(&v);
    if nv == 0.0 {
        return None;
    }
    for x in v.iter_mut() {
        *x /= nv;
    }
    let mut lambda_prev = 0.0;
    for _ in 0..max_iter {
        let u = a.matvec(&v);
        let w = a.matvec_t(&u);
        let lambda = norm2(&w);
        if lambda == 0.0 {
            return None;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / lambda;
        }
        if (lambda - lambda_prev).abs() <= rel_tol * lambda {
            return Some(lambda.sqrt());
        }
        lambda_prev = lambda;
    }
    Some(lambda_prev.max(0.0).sqrt())
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matrix whose columns are
/// the corresponding orthonormal eigenvectors.
pub fn sym_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    assert_eq!(m.rows(), m.cols(), "sym_eigen requires a square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let frob = a.frobenius_norm();
    if frob == 0.0 || n == 1 {
        let evals = (0..n).map(|i| a.at(i, i)).collect();
        return (evals, v);
    }
    let tol = 1e-15 * frob;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a.at(i, j) * a.at(i, j);
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.at(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.at(k, p);
                    let akq = a.at(k, q);
                    *a.at_mut(k, p) = c * akp - s * akq;
                    *a.at_mut(k, q) = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a.at(p, k);
                    let aqk = a.at(q, k);
                    *a.at_mut(p, k) = c * apk - s * aqk;
                    *a.at_mut(q, k) = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    *v.at_mut(k, p) = c * vkp - s * vkq;
                    *v.at_mut(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let evals_raw: Vec<f64> = (0..n).map(|i| a.at(i, i)).collect();
    order.sort_by(|&i, &j| evals_raw[i].partial_cmp(&evals_raw[j]).unwrap());
    let evals: Vec<f64> = order.iter().map(|&i| evals_raw[i]).collect();
    let mut vecs = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            *vecs.at_mut(r, new_col) = v.at(r, old_col);
        }
    }
    (evals, vecs)
}
