use rand::Rng;

use crate::matrix::{DenseMatrix, DenseVector};
use crate::operator::{MarginalPair, ScaledMarginalOperator};

pub(crate) fn random_vector(rng: &mut impl Rng, dim: usize) -> DenseVector {
    DenseVector::new((0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect()).unwrap()
}

pub(crate) fn random_matrix(rng: &mut impl Rng, m: usize, n: usize) -> DenseMatrix {
    DenseMatrix::from_vec(m, n, (0..m * n).map(|_| rng.gen_range(-5.0..5.0)).collect()).unwrap()
}

pub(crate) fn random_pair(rng: &mut impl Rng, m: usize, n: usize) -> MarginalPair {
    MarginalPair::new(random_vector(rng, m), random_vector(rng, n))
}

/// Each weight vector is zeroed independently with probability `p_zero`.
pub(crate) fn random_operator(rng: &mut impl Rng, m: usize, n: usize, p_zero: f64) -> ScaledMarginalOperator {
    let e = if rng.gen_bool(p_zero) { DenseVector::zeros(n) } else { random_vector(rng, n) };
    let f = if rng.gen_bool(p_zero) { DenseVector::zeros(m) } else { random_vector(rng, m) };
    ScaledMarginalOperator::new(e, f)
}

pub(crate) fn reference_solution() -> DenseMatrix {
    crate::instance::known_solution()
}
