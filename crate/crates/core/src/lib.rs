//! Exact projections onto matrices with prescribed scaled row and column
//! sums, and Douglas-Rachford / alternating-projection / Dykstra solvers that
//! use them to find matrices in a box (optionally integer) with those sums.
//!
//! The central object is the marginal operator `A(T) = (T e, T^T f)` on
//! `m x n` matrices ([`ScaledMarginalOperator`]). Its Moore-Penrose inverse
//! has a closed form, which gives the projection onto
//! `{T : T e = s, T^T f = r}` even when `(s, r)` is inconsistent
//! ([`AffineMarginalSet`]).

pub mod affine;
pub mod error;
pub mod harness;
pub mod hyperbox;
pub mod instance;
pub mod io;
pub mod matrix;
pub mod operator;
pub mod oracle;
pub mod solvers;

#[cfg(test)]
mod testutil;

pub use affine::{project_bistochastic, project_ghr, project_unit_sums, AffineMarginalSet};
pub use error::{Error, Result};
pub use hyperbox::{HyperBox, TieRule};
pub use matrix::{outer, DenseMatrix, DenseVector};
pub use operator::{Degeneracy, MarginalPair, ScaledMarginalOperator};
pub use solvers::{run_dr, run_dykstra, run_map, solve, Algorithm, SolverConfig, SolverTrace};
