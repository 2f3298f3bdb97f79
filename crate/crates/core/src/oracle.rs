//! Brute-force reference projector for tests.
//!
//! The marginal operator is materialized as an `(m+n) x (m n)` matrix acting
//! on row-major `vec(T)`, and the projection onto `{X : A(X) = P_ran(s, r)}`
//! is found by solving the KKT system of the equality-constrained least
//! squares problem with Gaussian elimination. Nothing here reuses the closed
//! forms in [`crate::operator`] or [`crate::affine`]; the range projection of
//! the target is computed from an explicit null-space basis of `M^T`.

use crate::error::{Error, Result};
use crate::matrix::{dot, DenseMatrix, DenseVector};
use crate::operator::{Degeneracy, MarginalPair, ScaledMarginalOperator};

/// Largest `m * n` the oracle accepts.
pub const ORACLE_MAX_ENTRIES: usize = 64;

const PIVOT_TOL: f64 = 1e-12;

/// The matrix `M` with `M vec(T) = [T e; T^T f]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitOperatorMatrix {
    rows: usize,
    cols: usize,
    matrix: DenseMatrix,
}

impl ExplicitOperatorMatrix {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    /// `M vec(T)`, split into `(T e, T^T f)`.
    pub fn apply(&self, t: &DenseMatrix) -> MarginalPair {
        let out = self.matrix.mul_slice(t.as_slice());
        let (y, x) = out.split_at(self.rows);
        MarginalPair::new(DenseVector::new(y.to_vec()).expect("finite"), DenseVector::new(x.to_vec()).expect("finite"))
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix, PIVOT_TOL)
    }
}

pub fn build_explicit(op: &ScaledMarginalOperator) -> ExplicitOperatorMatrix {
    let (m, n) = (op.rows(), op.cols());
    let mut mat = DenseMatrix::zeros(m + n, m * n);
    for i in 0..m {
        for j in 0..n {
            mat.set(i, i * n + j, op.e()[j]);
            mat.set(m + j, i * n + j, op.f()[i]);
        }
    }
    ExplicitOperatorMatrix { rows: m, cols: n, matrix: mat }
}

/// Numerical rank by Gaussian elimination with partial pivoting.
pub fn rank(a: &DenseMatrix, tol: f64) -> usize {
    rref(a, tol).1.len()
}

/// Reduced row echelon form and the pivot columns.
fn rref(a: &DenseMatrix, tol: f64) -> (DenseMatrix, Vec<usize>) {
    let (rows, cols) = a.shape();
    let mut r = a.clone();
    let scale = a.max_abs().max(1.0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let (best, val) =
            (row..rows).map(|i| (i, r.get(i, col).abs())).fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol * scale {
            continue;
        }
        swap_rows(&mut r, row, best);
        let p = r.get(row, col);
        for j in 0..cols {
            r.set(row, j, r.get(row, j) / p);
        }
        for i in 0..rows {
            if i == row {
                continue;
            }
            let factor = r.get(i, col);
            if factor != 0.0 {
                for j in 0..cols {
                    r.set(i, j, r.get(i, j) - factor * r.get(row, j));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (r, pivots)
}

fn swap_rows(a: &mut DenseMatrix, i: usize, k: usize) {
    if i == k {
        return;
    }
    for j in 0..a.cols() {
        let tmp = a.get(i, j);
        a.set(i, j, a.get(k, j));
        a.set(k, j, tmp);
    }
}

/// Solves the square system `a x = b` with partial pivoting.
pub fn solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    assert!(a.is_square() && b.len() == n);
    let mut aug = DenseMatrix::from_fn(n, n + 1, |i, j| if j < n { a.get(i, j) } else { b[i] });
    let scale = a.max_abs().max(1.0);
    for col in 0..n {
        let (best, val) =
            (col..n).map(|i| (i, aug.get(i, col).abs())).fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= PIVOT_TOL * scale {
            return Err(Error::SingularSystem { column: col, pivot: val });
        }
        swap_rows(&mut aug, col, best);
        let p = aug.get(col, col);
        for i in col + 1..n {
            let factor = aug.get(i, col) / p;
            if factor != 0.0 {
                for j in col..=n {
                    aug.set(i, j, aug.get(i, j) - factor * aug.get(col, j));
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let tail: f64 = (i + 1..n).map(|j| aug.get(i, j) * x[j]).sum();
        x[i] = (aug.get(i, n) - tail) / aug.get(i, i);
    }
    Ok(x)
}

/// Orthogonal projection of `b` onto the column space of `m`, computed by
/// removing the components along an orthonormal basis of `null(m^T)`.
pub fn project_onto_column_space(m: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let mt = m.transpose();
    let (r, pivots) = rref(&mt, PIVOT_TOL);
    let k = mt.cols();
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for &fc in &free {
        let mut z = vec![0.0; k];
        z[fc] = 1.0;
        for (row, &pc) in pivots.iter().enumerate() {
            z[pc] = -r.get(row, fc);
        }
        // Gram-Schmidt, twice for stability
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &z);
                z.iter_mut().zip(q).for_each(|(zi, qi)| *zi -= c * qi);
            }
        }
        let norm = dot(&z, &z).sqrt();
        basis.push(z.into_iter().map(|x| x / norm).collect());
    }
    let mut out = b.to_vec();
    for q in &basis {
        let c = dot(q, &out);
        out.iter_mut().zip(q).for_each(|(o, qi)| *o -= c * qi);
    }
    out
}

/// Nearest matrix to `t` in Frobenius norm with `A(X) = P_ran(s, r)`.
pub fn oracle_project(
    op: &ScaledMarginalOperator,
    s: &DenseVector,
    r: &DenseVector,
    t: &DenseMatrix,
) -> Result<DenseMatrix> {
    let (m, n) = (op.rows(), op.cols());
    let size = m * n;
    if size > ORACLE_MAX_ENTRIES {
        return Err(Error::TooLarge { size, limit: ORACLE_MAX_ENTRIES });
    }
    op.check_matrix("oracle_project", t)?;
    op.check_pair("oracle_project", &MarginalPair::new(s.clone(), r.clone()))?;

    let explicit = build_explicit(op);
    let mmat = explicit.matrix();
    let target: Vec<f64> = s.iter().chain(r.iter()).copied().collect();
    let target = project_onto_column_space(mmat, &target);

    // Zero rows carry no constraint; with both weights nonzero the rows are
    // dependent through (f, -e), so the last one is dropped.
    let mut keep: Vec<usize> = (0..m + n).filter(|&i| mmat.row(i).iter().any(|&x| x != 0.0)).collect();
    if op.degeneracy() == Degeneracy::None {
        keep.pop();
    }
    let k = keep.len();

    // [ I  M_k^T ] [x]   [vec T]
    // [ M_k  0   ] [l] = [ b_k ]
    let dim = size + k;
    let mut kkt = DenseMatrix::zeros(dim, dim);
    let mut rhs = t.as_slice().to_vec();
    rhs.resize(dim, 0.0);
    for i in 0..size {
        kkt.set(i, i, 1.0);
    }
    for (c, &row) in keep.iter().enumerate() {
        for j in 0..size {
            let v = mmat.get(row, j);
            kkt.set(size + c, j, v);
            kkt.set(j, size + c, v);
        }
        rhs[size + c] = target[row];
    }
    let sol = solve(&kkt, &rhs)?;
    DenseMatrix::from_vec(m, n, sol[..size].to_vec())
}

/// Explicit `(m n) x (m+n)` matrix of `A^+`, column by column from basis pairs.
pub fn explicit_pseudo_inverse(op: &ScaledMarginalOperator) -> DenseMatrix {
    let (m, n) = (op.rows(), op.cols());
    let mut d = DenseMatrix::zeros(m * n, m + n);
    for c in 0..m + n {
        let mut p = vec![0.0; m + n];
        p[c] = 1.0;
        let pair = MarginalPair::new(
            DenseVector::new(p[..m].to_vec()).expect("finite"),
            DenseVector::new(p[m..].to_vec()).expect("finite"),
        );
        let col = op.pseudo_inverse_apply(&pair).expect("shape checked");
        for (i, &v) in col.as_slice().iter().enumerate() {
            d.set(i, c, v);
        }
    }
    d
}

/// Largest entrywise violation of each Penrose condition:
/// `MDM = M`, `DMD = D`, `(MD)^T = MD`, `(DM)^T = DM`.
pub fn penrose_residuals(m: &DenseMatrix, d: &DenseMatrix) -> [f64; 4] {
    let md = m.matmul(d).expect("conformable");
    let dm = d.matmul(m).expect("conformable");
    let mdm = md.matmul(m).expect("conformable");
    let dmd = dm.matmul(d).expect("conformable");
    [
        mdm.sub(m).expect("same shape").max_abs(),
        dmd.sub(d).expect("same shape").max_abs(),
        md.sub(&md.transpose()).expect("same shape").max_abs(),
        dm.sub(&dm.transpose()).expect("same shape").max_abs(),
    ]
}

#[cfg(test)]
pub(crate) fn assert_penrose(m: &DenseMatrix, d: &DenseMatrix, tol: f64) {
    let res = penrose_residuals(m, d);
    assert!(res.iter().all(|&x| x <= tol), "penrose residuals {res:?}");
}
