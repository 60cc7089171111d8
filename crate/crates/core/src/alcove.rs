//! Points of the fundamental alcove of `SU(n)`.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance for the alcove constraints.
pub const ALCOVE_TOL: f64 = 1e-12;

/// A conjugacy class of `SU(n)`, given by `α ∈ ℝⁿ` with `Σ α_j = 0` and
/// `α_1 ≥ … ≥ α_n ≥ α_1 − 1`. The class consists of the matrices with
/// eigenvalues `e^{2πiα_j}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct AlcovePoint {
    alpha: Vec<f64>,
}

impl AlcovePoint {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(alpha, ALCOVE_TOL)
    }

    pub(crate) fn with_tolerance(alpha: Vec<f64>, tol: f64) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(Error::validation("an alcove point needs n ≥ 2 coordinates"));
        }
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::validation(format!("non-finite alcove coordinates {alpha:?}")));
        }
        let sum: f64 = alpha.iter().sum();
        if sum.abs() > tol {
            return Err(Error::validation(format!(
                "alcove coordinates {alpha:?} sum to {sum:e}, not zero"
            )));
        }
        if alpha.windows(2).any(|w| w[0] < w[1] - tol) {
            return Err(Error::validation(format!(
                "alcove coordinates {alpha:?} are not non-increasing"
            )));
        }
        if alpha[alpha.len() - 1] < alpha[0] - 1.0 - tol {
            return Err(Error::validation(format!(
                "alcove coordinates {alpha:?} violate α_n ≥ α_1 − 1"
            )));
        }
        Ok(AlcovePoint { alpha })
    }

    pub fn zero(n: usize) -> Self {
        AlcovePoint { alpha: vec![0.0; n] }
    }

    /// The `SU(2)` class with eigenvalues `e^{±2πiζ}`, `ζ ∈ [0, 1/2]`.
    pub fn su2(zeta: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&zeta) {
            return Err(Error::validation(format!(
                "SU(2) class parameter {zeta} outside [0, 1/2]"
            )));
        }
        Ok(AlcovePoint {
            alpha: vec![zeta, -zeta],
        })
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.alpha
    }

    /// 1-based coordinate access, matching the index sets of Schubert classes.
    pub fn at(&self, i: usize) -> f64 {
        self.alpha[i - 1]
    }

    /// Alcove point of the inverse class, `(−α_n, …, −α_1)`.
    pub fn inverse(&self) -> AlcovePoint {
        AlcovePoint {
            alpha: self.alpha.iter().rev().map(|a| -a).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.alpha.iter().fold(0.0f64, |m, a| m.max(a.abs()))
    }
}

impl fmt::Display for AlcovePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.alpha.iter().join(", "))
    }
}

/// Alcove representative of a multiset of eigenangles (in turns).
///
/// The angles are reduced to `[0, 1)` and sorted; with `m = Σ t_j` (an
/// integer up to rounding) the `m` largest are lowered by one. The result
/// satisfies the alcove constraints, and it is the unique such lift.
pub fn alcove_from_angles(angles: &[f64]) -> Result<AlcovePoint> {
    let n = angles.len();
    let mut t: Vec<f64> = angles.iter().map(|a| a.rem_euclid(1.0)).collect();
    for x in t.iter_mut() {
        if *x >= 1.0 {
            *x = 0.0;
        }
    }
    t.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = t.iter().sum();
    let m = total.round();
    if (total - m).abs() > 1e-6 {
        return Err(Error::numeric(
            "eigenangles do not sum to an integer (determinant is not 1)",
            (total - m).abs(),
        ));
    }
    let m = (m as usize).min(n);
    let mut alpha: Vec<f64> = t[m..].iter().copied().chain(t[..m].iter().map(|x| x - 1.0)).collect();
    let drift = alpha.iter().sum::<f64>() / n as f64;
    for a in alpha.iter_mut() {
        *a -= drift;
    }
    // Boundary rounding can leave the tail a hair above the head − 1 or
    // swap near-equal neighbours; clean both before validating.
    for i in 1..n {
        if alpha[i] > alpha[i - 1] {
            alpha[i] = alpha[i - 1];
        }
    }
    if alpha[n - 1] < alpha[0] - 1.0 {
        alpha[n - 1] = alpha[0] - 1.0;
    }
    AlcovePoint::with_tolerance(alpha, 1e-9)
}
