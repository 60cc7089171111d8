//! The bi-invariant Finsler distance induced by the operator norm.
//!
//! In alcove units the norm of `X = diag(θ)` in the Lie algebra is
//! `max_j |θ_j|`. The distance from the identity to `U` is the smallest such
//! norm over all lifts `θ + k` (`k ∈ ℤⁿ`, `Σ(θ_j + k_j) = 0`) of its
//! eigenangles.

use itertools::Itertools;

use super::{alcove_of, UnitaryMatrix};
use crate::alcove::AlcovePoint;
use crate::error::{Error, Result};

const SLACK: f64 = 1e-12;

fn integer_window(t: f64, a: f64) -> (i64, i64) {
    ((-t - a - SLACK).ceil() as i64, (t - a + SLACK).floor() as i64)
}

/// Integer shifts `k` with `Σ k = target` and `max |a_j + k_j| ≤ t`, if any.
fn shifts_within(angles: &[f64], t: f64, target: i64) -> Option<Vec<i64>> {
    let windows: Vec<(i64, i64)> = angles.iter().map(|&a| integer_window(t, a)).collect();
    if windows.iter().any(|(lo, hi)| lo > hi) {
        return None;
    }
    let lo_sum: i64 = windows.iter().map(|w| w.0).sum();
    let hi_sum: i64 = windows.iter().map(|w| w.1).sum();
    if target < lo_sum || target > hi_sum {
        return None;
    }
    let mut k: Vec<i64> = windows.iter().map(|w| w.0).collect();
    let mut missing = target - lo_sum;
    for (kj, (lo, hi)) in k.iter_mut().zip(&windows) {
        let add = missing.min(hi - lo);
        *kj += add;
        missing -= add;
    }
    Some(k)
}

/// Lift of the angles (in turns) with zero sum and the smallest max-norm.
///
/// The optimum is one of the values `|a_j + m|`; candidates are scanned in
/// increasing order and the first feasible one wins.
pub fn minimal_lift(angles: &[f64]) -> Vec<f64> {
    let target = -angles.iter().sum::<f64>().round() as i64;
    let mut candidates: Vec<f64> = angles
        .iter()
        .flat_map(|&a| (-3..=3).map(move |m| (a + m as f64).abs()))
        .collect();
    candidates.sort_by(|a, b| a.total_cmp(b));
    candidates.dedup();
    for t in candidates {
        if let Some(k) = shifts_within(angles, t, target) {
            return angles.iter().zip(k).map(|(a, k)| a + k as f64).collect();
        }
    }
    unreachable!("the alcove representative is always a feasible lift")
}

/// `min_k max_j |θ_j + k_j|` over zero-sum lifts.
pub fn lift_norm(angles: &[f64]) -> f64 {
    minimal_lift(angles).iter().fold(0.0f64, |m, a| m.max(a.abs()))
}

/// Bi-invariant Finsler distance from the identity, in turns.
pub fn finsler_distance_to_id(u: &UnitaryMatrix) -> Result<f64> {
    Ok(lift_norm(alcove_of(u)?.coords()))
}

/// `ρ(C_a, C_b)`: distance between two conjugacy classes, minimized over
/// alignments of the two maximal tori (permutations of eigenvalues).
pub fn class_distance(a: &AlcovePoint, b: &AlcovePoint) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::mismatch(format!("SU({}) vs SU({})", a.n(), b.n())));
    }
    let n = a.n();
    let best = (0..n)
        .permutations(n)
        .map(|perm| {
            let diff: Vec<f64> = (0..n).map(|j| b.coords()[j] - a.coords()[perm[j]]).collect();
            lift_norm(&diff)
        })
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}
