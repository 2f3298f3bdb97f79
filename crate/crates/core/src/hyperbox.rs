//! Entrywise interval constraints, optionally restricted to integers.

use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Error, Result};
use crate::matrix::{DenseMatrix, DenseVector};

/// How a value exactly halfway between two integers is rounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    #[default]
    HalfAwayFromZero,
    HalfToEven,
}

impl TieRule {
    pub fn round(self, x: f64) -> f64 {
        match self {
            TieRule::HalfAwayFromZero => x.round(),
            TieRule::HalfToEven => x.round_ties_even(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TieRule::HalfAwayFromZero => "half-away-from-zero",
            TieRule::HalfToEven => "half-to-even",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperBox {
    lower: DenseMatrix,
    upper: DenseMatrix,
    integer_restricted: bool,
    tie_rule: TieRule,
}

impl HyperBox {
    pub fn new(lower: DenseMatrix, upper: DenseMatrix, integer_restricted: bool, tie_rule: TieRule) -> Result<Self> {
        if lower.shape() != upper.shape() {
            return Err(shape_err("HyperBox::new", lower.shape(), upper.shape()));
        }
        for i in 0..lower.rows() {
            for j in 0..lower.cols() {
                let (lo, hi) = (lower.get(i, j), upper.get(i, j));
                let empty = if integer_restricted { lo.ceil() > hi.floor() } else { lo > hi };
                if empty {
                    return Err(Error::EmptyInterval { row: i, col: j, lower: lo, upper: hi });
                }
            }
        }
        Ok(Self { lower, upper, integer_restricted, tie_rule })
    }

    /// The box `[0, min(s_i, r_j)]` for nonnegative targets.
    pub fn from_targets(s: &DenseVector, r: &DenseVector, integer_restricted: bool, tie_rule: TieRule) -> Result<Self> {
        for (name, v) in [("s", s), ("r", r)] {
            if let Some(index) = v.iter().position(|&x| x < 0.0) {
                return Err(Error::NegativeTarget { name, index, value: v[index] });
            }
        }
        let upper = DenseMatrix::from_fn(s.dim(), r.dim(), |i, j| s[i].min(r[j]));
        let lower = DenseMatrix::zeros(s.dim(), r.dim());
        Self::new(lower, upper, integer_restricted, tie_rule)
    }

    pub fn lower(&self) -> &DenseMatrix {
        &self.lower
    }

    pub fn upper(&self) -> &DenseMatrix {
        &self.upper
    }

    pub fn is_integer_restricted(&self) -> bool {
        self.integer_restricted
    }

    pub fn tie_rule(&self) -> TieRule {
        self.tie_rule
    }

    pub fn shape(&self) -> (usize, usize) {
        self.lower.shape()
    }

    /// Clamp to the box; in the integer case, then round and clamp to the
    /// integer endpoints `ceil(lower)`, `floor(upper)`.
    pub fn project(&self, t: &DenseMatrix) -> Result<DenseMatrix> {
        if t.shape() != self.shape() {
            return Err(shape_err("project_box", self.shape(), t.shape()));
        }
        let (lo, hi) = (self.lower.as_slice(), self.upper.as_slice());
        let data = t
            .as_slice()
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let clamped = x.max(lo[k]).min(hi[k]);
                if self.integer_restricted {
                    self.tie_rule.round(clamped).max(lo[k].ceil()).min(hi[k].floor())
                } else {
                    clamped
                }
            })
            .collect();
        DenseMatrix::from_vec(t.rows(), t.cols(), data)
    }

    /// Entrywise membership, including integrality when restricted.
    pub fn contains(&self, t: &DenseMatrix) -> bool {
        t.shape() == self.shape()
            && t.as_slice()
                .iter()
                .zip(self.lower.as_slice().iter().zip(self.upper.as_slice()))
                .all(|(&x, (&lo, &hi))| lo <= x && x <= hi && (!self.integer_restricted || x.fract() == 0.0))
    }
}
