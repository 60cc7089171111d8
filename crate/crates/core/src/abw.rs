//! Eigenvalue inequalities for products in `SU(n)` from non-vanishing
//! Gromov–Witten numbers of Grassmannians.
//!
//! A tuple `(I_1, …, I_l)` of `r`-subsets with `(σ_{I_1}, …, σ_{I_l})_d ≠ 0`
//! in `Gr(r, n)` gives `Σ_j Σ_{i ∈ I_j} ζ^j_i ≤ d` on every tuple of classes
//! whose representatives can multiply to the identity, and more generally
//! `Υ_l(C_ζ) ≥ Σ_j Σ_{i ∈ I_j} ζ^j_i − d`.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::alcove::AlcovePoint;
use crate::error::{Error, Result};
use crate::quantum::{QuantumClass, QuantumRing};
use crate::schubert::SchubertIndex;
use crate::unitary::{alcove_of, haar_sample_with, product_class_with};

/// Tolerance for membership decisions.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbwInequality {
    pub n: usize,
    pub r: usize,
    pub subsets: Vec<SchubertIndex>,
    pub d: usize,
    pub gw_value: i64,
}

impl AbwInequality {
    pub fn l(&self) -> usize {
        self.subsets.len()
    }

    /// `L(ζ) = Σ_j Σ_{i ∈ I_j} ζ^j_i − d`; the inequality holds when `L ≤ 0`.
    pub fn evaluate(&self, zeta: &[AlcovePoint]) -> Result<f64> {
        if zeta.len() != self.subsets.len() {
            return Err(Error::mismatch(format!(
                "{} classes for an inequality with l = {}",
                zeta.len(),
                self.subsets.len()
            )));
        }
        let mut total = 0.0;
        for (point, index) in zeta.iter().zip(&self.subsets) {
            if point.n() != self.n {
                return Err(Error::mismatch(format!(
                    "alcove point of SU({}) against an SU({}) inequality",
                    point.n(),
                    self.n
                )));
            }
            total += index.indices().iter().map(|&i| point.at(i)).sum::<f64>();
        }
        Ok(total - self.d as f64)
    }

    pub fn record(&self) -> AbwRecord {
        AbwRecord {
            n: self.n,
            l: self.l(),
            r: self.r,
            d: self.d,
            subsets: self.subsets.iter().map(|s| s.indices().to_vec()).collect(),
            partitions: self.subsets.iter().map(|s| s.to_partition().parts().to_vec()).collect(),
            gw: self.gw_value,
        }
    }

    fn sort_key_cmp(&self, other: &Self) -> Ordering {
        (self.r, self.d, &self.subsets).cmp(&(other.r, other.d, &other.subsets))
    }
}

/// JSON export form; field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbwRecord {
    pub n: usize,
    pub l: usize,
    pub r: usize,
    pub d: usize,
    pub subsets: Vec<Vec<usize>>,
    pub partitions: Vec<Vec<usize>>,
    pub gw: i64,
}

/// Largest degree allowed by the dimension condition: `⌊l·r(n − r)/n⌋`.
pub fn default_max_degree(n: usize, l: usize, r: usize) -> usize {
    l * r * (n - r) / n
}

/// Largest [`default_max_degree`] over `r = 1, …, n − 1`.
pub fn default_max_degree_all(n: usize, l: usize) -> usize {
    (1..n).map(|r| default_max_degree(n, l, r)).max().unwrap_or(0)
}

/// Every inequality with `1 ≤ r ≤ n − 1` and `d ≤ d_max`, sorted by
/// `(r, d, subsets)`.
pub fn enumerate_inequalities(n: usize, l: usize, d_max: usize) -> Result<Vec<AbwInequality>> {
    enumerate_degree_range(n, l, 0, d_max)
}

/// As [`enumerate_inequalities`], keeping only degrees `d_min ≤ d ≤ d_max`.
pub fn enumerate_degree_range(n: usize, l: usize, d_min: usize, d_max: usize) -> Result<Vec<AbwInequality>> {
    if !(2..=6).contains(&n) {
        return Err(Error::validation(format!("n = {n} outside 2..=6")));
    }
    if !(2..=5).contains(&l) {
        return Err(Error::validation(format!("l = {l} outside 2..=5")));
    }
    let mut all = Vec::new();
    for r in 1..n {
        all.extend(enumerate_for_rank(n, r, l, d_max)?.into_iter().filter(|i| i.d >= d_min));
    }
    all.sort_by(|a, b| a.sort_key_cmp(b));
    all.dedup();
    Ok(all)
}

/// Inequalities coming from `Gr(r, n)` alone.
pub fn enumerate_for_rank(n: usize, r: usize, l: usize, d_max: usize) -> Result<Vec<AbwInequality>> {
    let ring = QuantumRing::new(n, r)?;
    let basis = SchubertIndex::all(n, r);
    let dim = r * (n - r);

    // Parallel over the first class; within a branch, the running product of
    // the first l − 1 classes is shared by all completions.
    let chunks: Vec<Result<Vec<AbwInequality>>> = basis
        .par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut prefix = vec![first.clone()];
            let acc = QuantumClass::schubert(first);
            extend(&ring, &basis, &mut prefix, acc, l, d_max, dim, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for chunk in chunks {
        out.extend(chunk?);
    }
    out.sort_by(|a, b| a.sort_key_cmp(b));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    ring: &QuantumRing,
    basis: &[SchubertIndex],
    prefix: &mut Vec<SchubertIndex>,
    acc: QuantumClass,
    l: usize,
    d_max: usize,
    dim: usize,
    out: &mut Vec<AbwInequality>,
) -> Result<()> {
    let n = ring.n();
    if prefix.len() == l - 1 {
        let codim: usize = prefix.iter().map(|i| i.to_partition().size()).sum();
        for last in basis {
            let total = codim + last.to_partition().size();
            if total < dim || !(total - dim).is_multiple_of(n) {
                continue;
            }
            let d = (total - dim) / n;
            if d > d_max {
                continue;
            }
            let gw = acc.coefficient(d, &last.to_partition().complement());
            if gw < 0 {
                return Err(Error::Consistency(format!(
                    "negative Gromov–Witten number {gw} for {:?} in degree {d}",
                    prefix
                )));
            }
            if gw > 0 {
                let mut subsets = prefix.clone();
                subsets.push(last.clone());
                out.push(AbwInequality {
                    n,
                    r: ring.r(),
                    subsets,
                    d,
                    gw_value: gw,
                });
            }
        }
        return Ok(());
    }
    for next in basis {
        let product = ring.product(&acc, &QuantumClass::schubert(next))?;
        prefix.push(next.clone());
        extend(ring, basis, prefix, product, l, d_max, dim, out)?;
        prefix.pop();
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Position in the inequality list.
    pub index: usize,
    /// `L(ζ)`, positive when violated.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub inside: bool,
    pub max_margin: f64,
    pub violations: Vec<Violation>,
}

fn check_tuple(zeta: &[AlcovePoint]) -> Result<()> {
    if let Some(first) = zeta.first() {
        if zeta.iter().any(|z| z.n() != first.n()) {
            return Err(Error::mismatch("alcove points of different SU(n)"));
        }
    }
    Ok(())
}

/// Evaluate every inequality at `ζ`; `inside` iff all margins are at most
/// [`MEMBERSHIP_TOL`].
pub fn check_membership(zeta: &[AlcovePoint], ineqs: &[AbwInequality]) -> Result<MembershipReport> {
    check_tuple(zeta)?;
    let mut max_margin = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for (index, ineq) in ineqs.iter().enumerate() {
        let margin = ineq.evaluate(zeta)?;
        max_margin = max_margin.max(margin);
        if margin > MEMBERSHIP_TOL {
            violations.push(Violation { index, margin });
        }
    }
    Ok(MembershipReport {
        inside: violations.is_empty(),
        max_margin,
        violations,
    })
}

/// `max(0, max_k L_k(ζ))`, a lower bound for `Υ_l(C_ζ)`.
pub fn upsilon_lower_bound(zeta: &[AlcovePoint], ineqs: &[AbwInequality]) -> Result<f64> {
    check_tuple(zeta)?;
    let mut best = 0.0f64;
    for ineq in ineqs {
        best = best.max(ineq.evaluate(zeta)?);
    }
    Ok(best)
}

/// One Monte-Carlo draw from `Δ_l`: the classes and the largest margin over
/// the inequality list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaSample {
    pub zeta: Vec<AlcovePoint>,
    pub max_margin: f64,
    pub violations: usize,
}

const SAMPLE_CHUNK: usize = 256;

/// A tuple of classes whose representatives multiply to the identity: the
/// first `l − 1` classes are Haar-random, the last closes the product.
pub fn sample_delta_tuple<R: rand::Rng + ?Sized>(n: usize, l: usize, rng: &mut R) -> Result<Vec<AlcovePoint>> {
    if l < 2 {
        return Err(Error::validation(format!("Δ_l needs l ≥ 2, got {l}")));
    }
    let mut zeta = Vec::with_capacity(l);
    for _ in 0..l - 1 {
        zeta.push(alcove_of(&haar_sample_with(n, rng))?);
    }
    let conjugators: Vec<_> = (0..l - 1).map(|_| haar_sample_with(n, rng)).collect();
    zeta.push(product_class_with(&zeta, &conjugators)?);
    Ok(zeta)
}

/// Draw `samples` tuples from `Δ_l` and evaluate `ineqs` on each. Draws are
/// seeded per chunk, so the output does not depend on the thread count.
pub fn sample_delta_margins(
    n: usize,
    l: usize,
    samples: usize,
    ineqs: &[AbwInequality],
    seed: u64,
) -> Result<Vec<DeltaSample>> {
    let chunks: Vec<Result<Vec<DeltaSample>>> = (0..samples.div_ceil(SAMPLE_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            (0..SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK))
                .map(|_| {
                    let zeta = sample_delta_tuple(n, l, &mut rng)?;
                    let report = check_membership(&zeta, ineqs)?;
                    Ok(DeltaSample {
                        zeta,
                        max_margin: report.max_margin,
                        violations: report.violations.len(),
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(samples);
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}
