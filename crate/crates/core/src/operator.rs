//! The marginal operator `A(T) = (T e, T^T f)` on `m x n` matrices.
//!
//! `e` weights the columns (length `n`) and `f` weights the rows (length
//! `m`). With `e` and `f` all ones, `A` returns the row sums and column sums.
//! Every map here (adjoint, Moore-Penrose inverse, range projections) has a
//! closed form built from rank-one updates; the four branches correspond to
//! which of `e`, `f` is exactly zero.

use serde::{Deserialize, Serialize};

use crate::error::{len_err, shape_err, Result};
use crate::matrix::{dot, DenseMatrix, DenseVector};

/// An element `(y, x)` of `R^m x R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalPair {
    /// The `R^m` component (row-indexed).
    pub row_part: DenseVector,
    /// The `R^n` component (column-indexed).
    pub col_part: DenseVector,
}

impl MarginalPair {
    pub fn new(row_part: DenseVector, col_part: DenseVector) -> Self {
        Self { row_part, col_part }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self::new(DenseVector::zeros(m), DenseVector::zeros(n))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.row_part.dim(), self.col_part.dim())
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        Ok(self.row_part.dot(&other.row_part)? + self.col_part.dot(&other.col_part)?)
    }

    pub fn norm(&self) -> f64 {
        (self.row_part.norm_sq() + self.col_part.norm_sq()).sqrt()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.row_part.sub(&other.row_part)?, self.col_part.sub(&other.col_part)?))
    }

    /// Flattened `[y; x]`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.row_part.iter().chain(self.col_part.iter()).copied().collect()
    }
}

/// Which of the weight vectors vanish identically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    None,
    ZeroE,
    ZeroF,
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMarginalOperator {
    e: DenseVector,
    f: DenseVector,
    e_norm_sq: f64,
    f_norm_sq: f64,
    degeneracy: Degeneracy,
}

impl ScaledMarginalOperator {
    /// `e` has length `n` (columns), `f` has length `m` (rows).
    ///
    /// Degeneracy is decided by exact zero entries. Nonzero weights of tiny
    /// norm go through the generic formula and are ill-conditioned.
    pub fn new(e: DenseVector, f: DenseVector) -> Self {
        let degeneracy = match (e.is_zero(), f.is_zero()) {
            (false, false) => Degeneracy::None,
            (true, false) => Degeneracy::ZeroE,
            (false, true) => Degeneracy::ZeroF,
            (true, true) => Degeneracy::Both,
        };
        Self { e_norm_sq: e.norm_sq(), f_norm_sq: f.norm_sq(), e, f, degeneracy }
    }

    /// Row and column sums of an `m x n` matrix.
    pub fn unit(m: usize, n: usize) -> Self {
        Self::new(DenseVector::ones(n), DenseVector::ones(m))
    }

    pub fn e(&self) -> &DenseVector {
        &self.e
    }

    pub fn f(&self) -> &DenseVector {
        &self.f
    }

    pub fn e_norm_sq(&self) -> f64 {
        self.e_norm_sq
    }

    pub fn f_norm_sq(&self) -> f64 {
        self.f_norm_sq
    }

    pub fn degeneracy(&self) -> Degeneracy {
        self.degeneracy
    }

    pub fn rows(&self) -> usize {
        self.f.dim()
    }

    pub fn cols(&self) -> usize {
        self.e.dim()
    }

    pub(crate) fn check_matrix(&self, op: &'static str, t: &DenseMatrix) -> Result<()> {
        if t.shape() != (self.rows(), self.cols()) {
            return Err(shape_err(op, (self.rows(), self.cols()), t.shape()));
        }
        Ok(())
    }

    pub(crate) fn check_pair(&self, op: &'static str, p: &MarginalPair) -> Result<()> {
        if p.row_part.dim() != self.rows() {
            return Err(len_err(op, self.rows(), p.row_part.dim()));
        }
        if p.col_part.dim() != self.cols() {
            return Err(len_err(op, self.cols(), p.col_part.dim()));
        }
        Ok(())
    }

    /// `(T e, T^T f)`
    pub fn apply(&self, t: &DenseMatrix) -> Result<MarginalPair> {
        self.check_matrix("apply", t)?;
        Ok(MarginalPair::new(t.mul_vec(&self.e)?, t.tr_mul_vec(&self.f)?))
    }

    /// `A^*(y, x) = y e^T + f x^T`
    pub fn adjoint_apply(&self, p: &MarginalPair) -> Result<DenseMatrix> {
        self.check_pair("adjoint_apply", p)?;
        let mut out = DenseMatrix::zeros(self.rows(), self.cols());
        out.add_outer_in_place(1.0, p.row_part.as_slice(), self.e.as_slice());
        out.add_outer_in_place(1.0, self.f.as_slice(), p.col_part.as_slice());
        Ok(out)
    }

    /// Moore-Penrose inverse `A^+(y, x)`.
    pub fn pseudo_inverse_apply(&self, p: &MarginalPair) -> Result<DenseMatrix> {
        self.check_pair("pseudo_inverse_apply", p)?;
        let (e, f) = (self.e.as_slice(), self.f.as_slice());
        let (y, x) = (p.row_part.as_slice(), p.col_part.as_slice());
        let mut out = DenseMatrix::zeros(self.rows(), self.cols());
        match self.degeneracy {
            Degeneracy::None => {
                let (ee, ff) = (self.e_norm_sq, self.f_norm_sq);
                let total = ee + ff;
                out.add_outer_in_place(1.0 / ee, y, e);
                out.add_outer_in_place(1.0 / ff, f, x);
                // both cross terms are multiples of f e^T
                let cross = dot(f, y) / (ee * total) + dot(e, x) / (ff * total);
                out.add_outer_in_place(-cross, f, e);
            }
            Degeneracy::ZeroE => out.add_outer_in_place(1.0 / self.f_norm_sq, f, x),
            Degeneracy::ZeroF => out.add_outer_in_place(1.0 / self.e_norm_sq, y, e),
            Degeneracy::Both => {}
        }
        Ok(out)
    }

    /// Orthogonal projection of `(y, x)` onto `ran A`.
    ///
    /// When both weights are nonzero the range is the hyperplane orthogonal
    /// to `(f, -e)`.
    pub fn project_range(&self, p: &MarginalPair) -> Result<MarginalPair> {
        self.check_pair("project_range", p)?;
        Ok(match self.degeneracy {
            Degeneracy::None => {
                let gap = (self.f.dot(&p.row_part)? - self.e.dot(&p.col_part)?) / (self.e_norm_sq + self.f_norm_sq);
                MarginalPair::new(p.row_part.axpy(-gap, &self.f)?, p.col_part.axpy(gap, &self.e)?)
            }
            Degeneracy::ZeroE => MarginalPair::new(DenseVector::zeros(self.rows()), p.col_part.clone()),
            Degeneracy::ZeroF => MarginalPair::new(p.row_part.clone(), DenseVector::zeros(self.cols())),
            Degeneracy::Both => MarginalPair::zeros(self.rows(), self.cols()),
        })
    }

    /// Orthogonal projection of `T` onto `ran A^* = {y e^T + f x^T}`.
    pub fn project_range_adjoint(&self, t: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_matrix("project_range_adjoint", t)?;
        let (e, f) = (self.e.as_slice(), self.f.as_slice());
        let mut out = DenseMatrix::zeros(self.rows(), self.cols());
        let te = t.mul_slice(e);
        let ftt = t.tr_mul_slice(f);
        match self.degeneracy {
            Degeneracy::None => {
                let (ee, ff) = (self.e_norm_sq, self.f_norm_sq);
                out.add_outer_in_place(1.0 / ee, &te, e);
                out.add_outer_in_place(1.0 / ff, f, &ftt);
                out.add_outer_in_place(-dot(f, &te) / (ee * ff), f, e);
            }
            Degeneracy::ZeroE => out.add_outer_in_place(1.0 / self.f_norm_sq, f, &ftt),
            Degeneracy::ZeroF => out.add_outer_in_place(1.0 / self.e_norm_sq, &te, e),
            Degeneracy::Both => {}
        }
        Ok(out)
    }

    /// `||A|| = sqrt(||e||^2 + ||f||^2)`
    pub fn operator_norm(&self) -> f64 {
        (self.e_norm_sq + self.f_norm_sq).sqrt()
    }
}
