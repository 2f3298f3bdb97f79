#![allow(dead_code)]

use marginal_proj::{DenseMatrix, DenseVector, ScaledMarginalOperator};
use rand::Rng;

pub fn vector(rng: &mut impl Rng, dim: usize) -> DenseVector {
    DenseVector::new((0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect()).unwrap()
}

pub fn matrix(rng: &mut impl Rng, m: usize, n: usize) -> DenseMatrix {
    DenseMatrix::from_vec(m, n, (0..m * n).map(|_| rng.gen_range(-5.0..5.0)).collect()).unwrap()
}

/// `case` picks the degeneracy: 0 none, 1 e = 0, 2 f = 0, 3 both zero.
pub fn operator(rng: &mut impl Rng, m: usize, n: usize, case: usize) -> ScaledMarginalOperator {
    let e = if case == 1 || case == 3 { DenseVector::zeros(n) } else { vector(rng, n) };
    let f = if case == 2 || case == 3 { DenseVector::zeros(m) } else { vector(rng, m) };
    ScaledMarginalOperator::new(e, f)
}

pub fn frob_dist(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.sub(b).unwrap().frobenius_norm()
}
