//! Projection onto `C = {T : T e = s_bar, T^T f = r_bar}`.
//!
//! `(s_bar, r_bar)` is the projection of the requested `(s, r)` onto the range
//! of the marginal operator, so `C` is never empty: inconsistent targets are
//! replaced by the nearest consistent ones. The general projector is
//! `T - A^+(A(T) - (s, r))`. Closed forms for unit weights (entrywise), for
//! square matrices with `T e = gamma e, T^T f = gamma f`, and for generalized
//! bistochastic matrices are provided alongside.

use crate::error::{len_err, Error, Result};
use crate::matrix::{DenseMatrix, DenseVector};
use crate::operator::{MarginalPair, ScaledMarginalOperator};

/// Relative tolerance under which unit-weight targets count as consistent
/// (`sum s == sum r`) and take the entrywise fast path.
pub const CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct AffineMarginalSet {
    op: ScaledMarginalOperator,
    target: MarginalPair,
    projected_target: MarginalPair,
    consistency_residual: f64,
}

impl AffineMarginalSet {
    pub fn new(op: ScaledMarginalOperator, s: DenseVector, r: DenseVector) -> Result<Self> {
        let target = MarginalPair::new(s, r);
        op.check_pair("make_affine_set", &target)?;
        let projected_target = op.project_range(&target)?;
        let consistency_residual = target.sub(&projected_target)?.norm();
        Ok(Self { op, target, projected_target, consistency_residual })
    }

    /// Unit weights: prescribed row sums `s` and column sums `r`.
    pub fn with_unit_sums(s: DenseVector, r: DenseVector) -> Result<Self> {
        let op = ScaledMarginalOperator::unit(s.dim(), r.dim());
        Self::new(op, s, r)
    }

    pub fn operator(&self) -> &ScaledMarginalOperator {
        &self.op
    }

    pub fn target(&self) -> &MarginalPair {
        &self.target
    }

    /// `(s_bar, r_bar)`, the targets actually attained by members of the set.
    pub fn projected_target(&self) -> &MarginalPair {
        &self.projected_target
    }

    pub fn consistency_residual(&self) -> f64 {
        self.consistency_residual
    }

    pub fn rows(&self) -> usize {
        self.op.rows()
    }

    pub fn cols(&self) -> usize {
        self.op.cols()
    }

    pub fn project(&self, t: &DenseMatrix) -> Result<DenseMatrix> {
        let gap = self.op.apply(t)?.sub(&self.target)?;
        t.sub(&self.op.pseudo_inverse_apply(&gap)?)
    }

    /// `||A(T) - (s_bar, r_bar)||`
    pub fn residual(&self, t: &DenseMatrix) -> Result<f64> {
        Ok(self.op.apply(t)?.sub(&self.projected_target)?.norm())
    }
}

fn check_targets(op: &'static str, s: &DenseVector, r: &DenseVector, t: &DenseMatrix) -> Result<()> {
    if s.dim() != t.rows() {
        return Err(len_err(op, t.rows(), s.dim()));
    }
    if r.dim() != t.cols() {
        return Err(len_err(op, t.cols(), r.dim()));
    }
    Ok(())
}

/// Projection onto matrices with row sums `s` and column sums `r`.
///
/// Consistent targets use the entrywise formula
/// `T_ij + (s_i - rowsum_i)/n + (r_j - colsum_j)/m + (total - sum r)/(m n)`;
/// otherwise the targets are range-projected and the general path runs.
pub fn project_unit_sums(s: &DenseVector, r: &DenseVector, t: &DenseMatrix) -> Result<DenseMatrix> {
    check_targets("project_unit_sums", s, r, t)?;
    let (m, n) = t.shape();
    let (sum_s, sum_r) = (s.sum(), r.sum());
    if (sum_s - sum_r).abs() > CONSISTENCY_TOL * (1.0 + sum_s.abs() + sum_r.abs()) {
        return AffineMarginalSet::with_unit_sums(s.clone(), r.clone())?.project(t);
    }

    let row_sums: Vec<f64> = (0..m).map(|i| t.row(i).iter().sum()).collect();
    let col_sums = t.tr_mul_slice(&vec![1.0; m]);
    let total: f64 = row_sums.iter().sum();
    let (mf, nf) = (m as f64, n as f64);
    let shift = (total - sum_r) / (mf * nf);
    Ok(DenseMatrix::from_fn(m, n, |i, j| t.get(i, j) + (s[i] - row_sums[i]) / nf + (r[j] - col_sums[j]) / mf + shift))
}

/// Projection onto `{T : T e = gamma e, T^T f = gamma f}` for square `T`:
/// `gamma I + (I - F)(T - gamma I)(I - E)` with `E = e e^T/||e||^2`,
/// `F = f f^T/||f||^2`.
pub fn project_ghr(e: &DenseVector, f: &DenseVector, gamma: f64, t: &DenseMatrix) -> Result<DenseMatrix> {
    let (rows, cols) = t.shape();
    if rows != cols {
        return Err(Error::NotSquare { op: "project_ghr", rows, cols });
    }
    if e.dim() != cols {
        return Err(len_err("project_ghr", cols, e.dim()));
    }
    if f.dim() != rows {
        return Err(len_err("project_ghr", rows, f.dim()));
    }
    if e.is_zero() {
        return Err(Error::ZeroWeight { op: "project_ghr", which: "e" });
    }
    if f.is_zero() {
        return Err(Error::ZeroWeight { op: "project_ghr", which: "f" });
    }

    let shifted = t.axpy(-gamma, &DenseMatrix::identity(cols))?;
    // (T - gamma I)(I - E)
    let mut right = shifted.clone();
    let me = shifted.mul_slice(e.as_slice());
    right.add_outer_in_place(-1.0 / e.norm_sq(), &me, e.as_slice());
    // (I - F) * that
    let ft = right.tr_mul_slice(f.as_slice());
    right.add_outer_in_place(-1.0 / f.norm_sq(), f.as_slice(), &ft);
    right.axpy(gamma, &DenseMatrix::identity(cols))
}

/// Nearest matrix whose rows and columns all sum to one:
/// `J + (I - J) T (I - J)` with `J = (1/n) u u^T`.
pub fn project_bistochastic(t: &DenseMatrix) -> Result<DenseMatrix> {
    let (rows, cols) = t.shape();
    if rows != cols {
        return Err(Error::NotSquare { op: "project_bistochastic", rows, cols });
    }
    let j = DenseMatrix::filled(cols, cols, 1.0 / cols as f64);
    let centering = DenseMatrix::identity(cols).sub(&j)?;
    centering.matmul(t)?.matmul(&centering)?.add(&j)
}
