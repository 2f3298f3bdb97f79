//! The 4x5 reference instance: prescribed row sums, column sums, and one
//! nonnegative integer matrix attaining them.

use crate::matrix::{DenseMatrix, DenseVector};

pub const ROW_SUMS: [f64; 4] = [32.0, 43.0, 33.0, 23.0];
pub const COL_SUMS: [f64; 5] = [24.0, 18.0, 37.0, 27.0, 25.0];

pub const KNOWN_SOLUTION: [[f64; 5]; 4] =
    [[9.0, 4.0, 8.0, 4.0, 7.0], [7.0, 9.0, 15.0, 7.0, 5.0], [3.0, 2.0, 9.0, 10.0, 9.0], [5.0, 3.0, 5.0, 6.0, 4.0]];

pub fn row_sums() -> DenseVector {
    DenseVector::new(ROW_SUMS.to_vec()).expect("finite")
}

pub fn col_sums() -> DenseVector {
    DenseVector::new(COL_SUMS.to_vec()).expect("finite")
}

pub fn known_solution() -> DenseMatrix {
    DenseMatrix::from_rows(&KNOWN_SOLUTION).expect("finite")
}
