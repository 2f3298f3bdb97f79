//! Small dense matrices and vectors in row-major storage.
//!
//! Every formula in the crate is a handful of rank-one updates on matrices
//! no larger than a few dozen rows, so there is no blocking or sparse path.
//! Constructors reject non-finite input; arithmetic on finite input is
//! assumed to stay finite at the scales used here.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{len_err, shape_err, Error, Result};

/// Default relative accuracy for [`DenseMatrix::spectral_norm`].
pub const SPECTRAL_TOL: f64 = 1e-10;
/// Iteration cap for each power-iteration start.
pub const SPECTRAL_MAX_ITERS: usize = 10_000;

fn check_finite(data: &[f64]) -> Result<()> {
    match data.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_finite(&entries)?;
        Ok(Self(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn ones(dim: usize) -> Self {
        Self(vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(len_err("dot", self.dim(), other.dim()));
        }
        Ok(dot(&self.0, &other.0))
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.0, &self.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// True when every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self(self.0.iter().map(|x| alpha * x).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    /// `self + alpha * other`
    pub fn axpy(&self, alpha: f64, other: &Self) -> Result<Self> {
        self.zip_with(other, "axpy", |a, b| a + alpha * b)
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(len_err(op, self.dim(), other.dim()));
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect()))
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for DenseVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DenseVector> for Vec<f64> {
    fn from(v: DenseVector) -> Self {
        v.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An `rows x cols` real matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(len_err("from_vec", rows * cols, data.len()));
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(m * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(len_err("from_rows", n, row.len()));
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(m, n, data)
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(shape_err(op, self.shape(), other.shape()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.same_shape(other, op)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// `self + alpha * other`
    pub fn axpy(&self, alpha: f64, other: &Self) -> Result<Self> {
        self.zip_with(other, "axpy", |a, b| a + alpha * b)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        self.map(|x| alpha * x)
    }

    /// Adds `alpha * v u^T` in place. Caller guarantees conformable sizes.
    pub(crate) fn add_outer_in_place(&mut self, alpha: f64, v: &[f64], u: &[f64]) {
        debug_assert_eq!(v.len(), self.rows);
        debug_assert_eq!(u.len(), self.cols);
        for (i, &vi) in v.iter().enumerate() {
            let coef = alpha * vi;
            if coef == 0.0 {
                continue;
            }
            for (x, &uj) in self.data[i * self.cols..(i + 1) * self.cols].iter_mut().zip(u) {
                *x += coef * uj;
            }
        }
    }

    /// `T x` for `x` of length `cols`.
    pub fn mul_vec(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.dim() != self.cols {
            return Err(len_err("mul_vec", self.cols, x.dim()));
        }
        Ok(DenseVector(self.mul_slice(x.as_slice())))
    }

    /// `T^T y` for `y` of length `rows`.
    pub fn tr_mul_vec(&self, y: &DenseVector) -> Result<DenseVector> {
        if y.dim() != self.rows {
            return Err(len_err("tr_mul_vec", self.rows, y.dim()));
        }
        Ok(DenseVector(self.tr_mul_slice(y.as_slice())))
    }

    pub(crate) fn mul_slice(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub(crate) fn tr_mul_slice(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            for (o, &t) in out.iter_mut().zip(self.row(i)) {
                *o += yi * t;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Frobenius (Hilbert-Schmidt) inner product `sum_ij A_ij B_ij`.
    pub fn frobenius_inner(&self, other: &Self) -> Result<f64> {
        self.same_shape(other, "frobenius_inner")?;
        Ok(dot(&self.data, &other.data))
    }

    pub fn frobenius_norm(&self) -> f64 {
        dot(&self.data, &self.data).sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Largest singular value by power iteration on `T^T T`.
    ///
    /// The first start is the normalized all-ones vector. The coordinate
    /// vectors are tried as well and the largest Rayleigh quotient wins, so a
    /// start that happens to be orthogonal to the dominant right singular
    /// vector cannot under-report the norm.
    pub fn spectral_norm(&self, tol: f64) -> f64 {
        let n = self.cols;
        let ones = vec![1.0 / (n as f64).sqrt(); n];
        let mut best = self.power_iteration(ones, tol);
        for j in 0..n {
            let mut start = vec![0.0; n];
            start[j] = 1.0;
            best = best.max(self.power_iteration(start, tol));
        }
        best.sqrt()
    }

    /// Returns the converged Rayleigh quotient `||T v||^2` for unit `v`.
    fn power_iteration(&self, mut v: Vec<f64>, tol: f64) -> f64 {
        let mut lambda = {
            let tv = self.mul_slice(&v);
            dot(&tv, &tv)
        };
        for _ in 0..SPECTRAL_MAX_ITERS {
            let w = self.tr_mul_slice(&self.mul_slice(&v));
            let norm = dot(&w, &w).sqrt();
            if norm == 0.0 {
                return lambda;
            }
            v = w.into_iter().map(|x| x / norm).collect();
            let tv = self.mul_slice(&v);
            let next = dot(&tv, &tv);
            let done = (next - lambda).abs() <= tol * next;
            lambda = next;
            if done {
                break;
            }
        }
        lambda
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Rank-one matrix `v u^T`.
pub fn outer(v: &DenseVector, u: &DenseVector) -> DenseMatrix {
    DenseMatrix::from_fn(v.dim(), u.dim(), |i, j| v[i] * u[j])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(DenseMatrix::from_vec(2, 2, vec![1.0, 2.0, 3.0]), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(DenseMatrix::from_vec(1, 2, vec![1.0, f64::NAN]), Err(Error::NonFinite { index: 1 })));
        assert!(matches!(DenseMatrix::from_vec(0, 2, vec![]), Err(Error::EmptyShape { .. })));
        assert!(DenseVector::new(vec![f64::INFINITY]).is_err());
        assert!(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn frobenius_inner_examples() {
        let id = DenseMatrix::identity(2);
        assert_eq!(id.frobenius_inner(&id).unwrap(), 2.0);
        let t = m(&[&[1.0, -2.0], &[3.5, 4.0]]);
        assert_eq!(t.frobenius_inner(&DenseMatrix::zeros(2, 2)).unwrap(), 0.0);
        assert!(t.frobenius_inner(&DenseMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn outer_examples() {
        assert_eq!(outer(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])), m(&[&[0.0, 1.0], &[0.0, 0.0]]));
        assert_eq!(outer(&DenseVector::zeros(3), &v(&[1.0, 2.0])), DenseMatrix::zeros(3, 2));
        assert_eq!(outer(&v(&[2.0, 3.0]), &v(&[1.0, 4.0])), m(&[&[2.0, 8.0], &[3.0, 12.0]]));
    }

    #[test]
    fn spectral_norm_examples() {
        let d = m(&[&[3.0, 0.0], &[0.0, 1.0]]);
        assert!((d.spectral_norm(SPECTRAL_TOL) - 3.0).abs() < 1e-9);
        assert_eq!(DenseMatrix::zeros(3, 4).spectral_norm(SPECTRAL_TOL), 0.0);
        // rank one: the only singular value is the Frobenius norm
        let r = m(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((r.spectral_norm(SPECTRAL_TOL) - r.frobenius_norm()).abs() < 1e-9);
    }

    #[test]
    fn spectral_norm_start_orthogonal_to_top_vector() {
        // T^T T has eigenvalues 2, 1, 0; the all-ones start only sees the 1.
        let t = m(&[&[1.0, -1.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert!((t.spectral_norm(SPECTRAL_TOL) - 2f64.sqrt()).abs() < 1e-9);
        let t = m(&[&[1.0, -1.0]]);
        assert!((t.spectral_norm(SPECTRAL_TOL) - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn products() {
        let t = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        assert_eq!(t.mul_vec(&v(&[1.0, 0.0, -1.0])).unwrap(), v(&[-2.0, -2.0]));
        assert_eq!(t.tr_mul_vec(&v(&[1.0, 1.0])).unwrap(), v(&[5.0, 7.0, 9.0]));
        assert!(t.mul_vec(&v(&[1.0])).is_err());
        let p = t.matmul(&t.transpose()).unwrap();
        assert_eq!(p, m(&[&[14.0, 32.0], &[32.0, 77.0]]));
        assert!(t.matmul(&t).is_err());
    }
}
