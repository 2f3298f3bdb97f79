//! Douglas-Rachford, alternating projections and Dykstra for finding a matrix
//! in `A ∩ B`, where `A` is a [`HyperBox`] and `B` an [`AffineMarginalSet`].
//!
//! All three methods are monitored on the shadow sequence `P_A(T_k)`, which
//! lies in the box by construction. The feasibility gap is
//! `delta_k = ||P_A(T_k) - P_B(P_A(T_k))||_F`, evaluated before every update
//! (so a feasible start reports iteration 0).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affine::AffineMarginalSet;
use crate::error::{shape_err, Error, Result};
use crate::hyperbox::HyperBox;
use crate::matrix::DenseMatrix;

pub const DEFAULT_MAX_ITERATIONS: usize = 250;
pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "DR")]
    DouglasRachford,
    #[serde(rename = "MAP")]
    AlternatingProjections,
    #[serde(rename = "Dyk")]
    Dykstra,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::DouglasRachford, Algorithm::AlternatingProjections, Algorithm::Dykstra];

    pub fn short_name(self) -> &'static str {
        match self {
            Algorithm::DouglasRachford => "DR",
            Algorithm::AlternatingProjections => "MAP",
            Algorithm::Dykstra => "Dyk",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub max_iterations: usize,
    pub feasibility_tol: f64,
    pub record_trace: bool,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            feasibility_tol: DEFAULT_FEASIBILITY_TOL,
            record_trace: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !self.feasibility_tol.is_finite() || self.feasibility_tol < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "feasibility_tol must be finite and nonnegative, got {}",
                self.feasibility_tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SolverTrace {
    /// `delta_k` for `k = 0..=last evaluated iteration`.
    pub deltas: Vec<f64>,
    pub first_feasible_iteration: Option<usize>,
    /// `P_A(T_k)` at the first feasible iteration.
    pub first_feasible_matrix: Option<DenseMatrix>,
    pub converged: bool,
    /// `T_k`, only with `record_trace`.
    pub iterates: Vec<DenseMatrix>,
    /// `P_A(T_k)`, only with `record_trace`.
    pub shadows: Vec<DenseMatrix>,
    /// Dykstra's box iterates `A_{k+1}`, only with `record_trace`.
    pub box_iterates: Vec<DenseMatrix>,
}

/// Decides whether a box point is feasible.
///
/// For an integer box with integral weights and integral projected targets,
/// feasibility additionally requires the weighted sums of the (integral)
/// point to match the targets exactly in integer arithmetic.
struct FeasibilityMonitor<'a> {
    set: &'a AffineMarginalSet,
    tol: f64,
    exact: Option<ExactTargets>,
    integer_box: bool,
}

struct ExactTargets {
    e: Vec<i64>,
    f: Vec<i64>,
    s: Vec<i64>,
    r: Vec<i64>,
}

/// Largest magnitude below which every integer is exactly representable.
const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

fn as_integers(xs: &[f64]) -> Option<Vec<i64>> {
    xs.iter().map(|&x| (x.fract() == 0.0 && x.abs() < EXACT_INT_LIMIT).then_some(x as i64)).collect()
}

impl<'a> FeasibilityMonitor<'a> {
    fn new(set: &'a AffineMarginalSet, hbox: &HyperBox, tol: f64) -> Self {
        let exact = if hbox.is_integer_restricted() {
            let op = set.operator();
            let target = set.projected_target();
            match (as_integers(op.e().as_slice()), as_integers(op.f().as_slice())) {
                (Some(e), Some(f)) => Some(ExactTargets {
                    e,
                    f,
                    // non-integral targets can never be met by an integer point
                    s: as_integers(target.row_part.as_slice()).unwrap_or_default(),
                    r: as_integers(target.col_part.as_slice()).unwrap_or_default(),
                }),
                _ => None,
            }
        } else {
            None
        };
        Self { set, tol, exact, integer_box: hbox.is_integer_restricted() }
    }

    fn exact_match(&self, x: &DenseMatrix) -> bool {
        let Some(exact) = &self.exact else {
            return true;
        };
        let (m, n) = x.shape();
        if exact.s.len() != m || exact.r.len() != n {
            return false;
        }
        let Some(ints) = as_integers(x.as_slice()) else {
            return false;
        };
        let ints: Vec<i128> = ints.into_iter().map(i128::from).collect();
        let rows_ok = (0..m).all(|i| {
            let sum: i128 = (0..n).map(|j| ints[i * n + j] * exact.e[j] as i128).sum();
            sum == exact.s[i] as i128
        });
        rows_ok
            && (0..n).all(|j| {
                let sum: i128 = (0..m).map(|i| ints[i * n + j] * exact.f[i] as i128).sum();
                sum == exact.r[j] as i128
            })
    }

    /// Returns `(delta, P_B(shadow), feasible)`.
    fn check(&self, shadow: &DenseMatrix) -> Result<(f64, DenseMatrix, bool)> {
        let pb = self.set.project(shadow)?;
        let delta = shadow.sub(&pb)?.frobenius_norm();
        let feasible = delta <= self.tol && (!self.integer_box || self.exact_match(shadow));
        Ok((delta, pb, feasible))
    }
}

fn check_shapes(set: &AffineMarginalSet, hbox: &HyperBox, t0: &DenseMatrix) -> Result<()> {
    let shape = (set.rows(), set.cols());
    if hbox.shape() != shape {
        return Err(shape_err("solver box", shape, hbox.shape()));
    }
    if t0.shape() != shape {
        return Err(shape_err("solver start", shape, t0.shape()));
    }
    Ok(())
}

/// Runs the algorithm selected in `cfg`.
pub fn solve(set: &AffineMarginalSet, hbox: &HyperBox, t0: &DenseMatrix, cfg: &SolverConfig) -> Result<SolverTrace> {
    cfg.validate()?;
    check_shapes(set, hbox, t0)?;
    let monitor = FeasibilityMonitor::new(set, hbox, cfg.feasibility_tol);
    let mut trace = SolverTrace::default();
    let mut t = t0.clone();
    // Dykstra's correction term
    let mut correction = DenseMatrix::zeros(t0.rows(), t0.cols());

    for k in 0..=cfg.max_iterations {
        let shadow = hbox.project(&t)?;
        let (delta, pb, feasible) = monitor.check(&shadow)?;
        trace.deltas.push(delta);
        if cfg.record_trace {
            trace.iterates.push(t.clone());
            trace.shadows.push(shadow.clone());
        }
        if feasible {
            trace.converged = true;
            trace.first_feasible_iteration = Some(k);
            trace.first_feasible_matrix = Some(shadow);
            break;
        }
        if k == cfg.max_iterations {
            break;
        }
        t = match cfg.algorithm {
            Algorithm::DouglasRachford => {
                let reflected = shadow.scale(2.0).sub(&t)?;
                t.sub(&shadow)?.add(&set.project(&reflected)?)?
            }
            Algorithm::AlternatingProjections => pb,
            Algorithm::Dykstra => {
                let shifted = t.add(&correction)?;
                let a_next = hbox.project(&shifted)?;
                correction = shifted.sub(&a_next)?;
                let next = set.project(&a_next)?;
                if cfg.record_trace {
                    trace.box_iterates.push(a_next);
                }
                next
            }
        };
    }
    Ok(trace)
}

fn run_checked(
    requested: Algorithm,
    set: &AffineMarginalSet,
    hbox: &HyperBox,
    t0: &DenseMatrix,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    if cfg.algorithm != requested {
        return Err(Error::AlgorithmMismatch { requested, configured: cfg.algorithm });
    }
    solve(set, hbox, t0, cfg)
}

/// `T_{k+1} = T_k - P_A(T_k) + P_B(2 P_A(T_k) - T_k)`
pub fn run_dr(set: &AffineMarginalSet, hbox: &HyperBox, t0: &DenseMatrix, cfg: &SolverConfig) -> Result<SolverTrace> {
    run_checked(Algorithm::DouglasRachford, set, hbox, t0, cfg)
}

/// `T_{k+1} = P_B(P_A(T_k))`
pub fn run_map(set: &AffineMarginalSet, hbox: &HyperBox, t0: &DenseMatrix, cfg: &SolverConfig) -> Result<SolverTrace> {
    run_checked(Algorithm::AlternatingProjections, set, hbox, t0, cfg)
}

/// `A_{k+1} = P_A(T_k + R_k)`, `R_{k+1} = T_k + R_k - A_{k+1}`,
/// `T_{k+1} = P_B(A_{k+1})`, starting from `R_0 = 0`.
pub fn run_dykstra(
    set: &AffineMarginalSet,
    hbox: &HyperBox,
    t0: &DenseMatrix,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    run_checked(Algorithm::Dykstra, set, hbox, t0, cfg)
}
