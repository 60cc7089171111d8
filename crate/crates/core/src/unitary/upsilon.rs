use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    alcove_of, class_representative, complex_gaussian, finsler_distance_to_id, haar_sample_with, CMatrix, UnitaryMatrix,
};
use crate::alcove::AlcovePoint;
use crate::error::{Error, Result};

/// `Υ_3` on `SU(2)` in closed form, symmetrized over the three arguments:
/// the largest class sits in the last slot of
/// `max{0, ζ³ − min(ζ¹ + ζ², 1 − ζ¹ − ζ²)}`.
pub fn su2_upsilon3_closed_form(z1: f64, z2: f64, z3: f64) -> Result<f64> {
    let z = [z1, z2, z3];
    if z.iter().any(|x| !(0.0..=0.5).contains(x)) {
        return Err(Error::validation(format!(
            "SU(2) class parameters {z:?} must lie in [0, 1/2]"
        )));
    }
    let mut best = 0.0f64;
    for k in 0..3 {
        let rest: f64 = (0..3).filter(|&j| j != k).map(|j| z[j]).sum();
        best = best.max(z[k] - rest.min(1.0 - rest));
    }
    Ok(best)
}

/// Optimizer settings for [`upsilon_estimate`].
#[derive(Debug, Clone, Copy)]
pub struct UpsilonOptions {
    /// Objective evaluations over all starts.
    pub budget: usize,
    pub starts: usize,
    pub initial_step: f64,
}

impl UpsilonOptions {
    pub fn with_budget(budget: usize) -> Self {
        UpsilonOptions {
            budget,
            starts: 32,
            initial_step: 0.1,
        }
    }
}

/// Best value found and the representatives `φ_j ∈ C_j` realizing it.
#[derive(Debug, Clone)]
pub struct UpsilonEstimate {
    pub value: f64,
    pub witness: Vec<UnitaryMatrix>,
    pub evaluations: usize,
}

fn check_classes(classes: &[AlcovePoint]) -> Result<usize> {
    let n = classes
        .first()
        .ok_or_else(|| Error::validation("no conjugacy classes given"))?
        .n();
    if classes.iter().any(|c| c.n() != n) {
        return Err(Error::mismatch("conjugacy classes of different SU(n)"));
    }
    Ok(n)
}

fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = complex_gaussian(n, n, rng);
    let mut h = (&g + g.adjoint()).scale(0.5);
    let shift = h.trace() / n as f64;
    for j in 0..n {
        h[(j, j)] -= shift;
    }
    h
}

fn representatives(diagonals: &[UnitaryMatrix], conjugators: &[UnitaryMatrix]) -> Vec<UnitaryMatrix> {
    diagonals
        .iter()
        .zip(conjugators)
        .map(|(d, v)| d.conjugate_by(v))
        .collect()
}

fn objective(reps: &[UnitaryMatrix]) -> f64 {
    let mut product = reps[0].clone();
    for r in &reps[1..] {
        product = product * r;
    }
    finsler_distance_to_id(&product).unwrap_or(f64::INFINITY)
}

/// Upper bound for `Υ_l(C_1, …, C_l)`:
/// `inf_{φ_j ∈ C_j} ρ(Id, φ_1 ⋯ φ_l)` by multistart random-step descent on
/// the conjugators (the first one is fixed to the identity).
///
/// Deterministic given `seed`; starts run in parallel with per-start streams
/// and the reduction keeps the lowest value, ties broken by start index.
pub fn upsilon_estimate(classes: &[AlcovePoint], budget: usize, seed: u64) -> Result<UpsilonEstimate> {
    upsilon_estimate_with(classes, UpsilonOptions::with_budget(budget), seed)
}

pub fn upsilon_estimate_with(classes: &[AlcovePoint], options: UpsilonOptions, seed: u64) -> Result<UpsilonEstimate> {
    let n = check_classes(classes)?;
    if classes.len() < 2 {
        return Err(Error::validation("Υ_l needs l ≥ 2 classes"));
    }
    if options.budget == 0 {
        return Err(Error::validation("optimizer budget must be positive"));
    }
    let starts = options.starts.clamp(1, options.budget);
    let per_start = options.budget / starts;
    let diagonals: Vec<UnitaryMatrix> = classes.iter().map(UnitaryMatrix::diagonal).collect();

    let runs: Vec<(f64, usize, Vec<UnitaryMatrix>, usize)> = (0..starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(start as u64);
            let mut conj: Vec<UnitaryMatrix> = (0..classes.len())
                .map(|j| {
                    if j == 0 {
                        UnitaryMatrix::identity(n)
                    } else {
                        haar_sample_with(n, &mut rng)
                    }
                })
                .collect();
            let mut best = objective(&representatives(&diagonals, &conj));
            let mut evals = 1;
            let mut step = options.initial_step;
            while evals < per_start && best > 1e-14 {
                let trial: Vec<UnitaryMatrix> = conj
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        if j == 0 {
                            v.clone()
                        } else {
                            let h = random_hermitian(n, &mut rng).scale(step);
                            UnitaryMatrix::exp_hermitian(&h) * v
                        }
                    })
                    .collect();
                let value = objective(&representatives(&diagonals, &trial));
                evals += 1;
                if value < best {
                    best = value;
                    conj = trial;
                    step = (step * 1.5).min(0.5);
                } else {
                    step = (step * 0.85).max(1e-9);
                }
            }
            (best, start, representatives(&diagonals, &conj), evals)
        })
        .collect();

    let evaluations = runs.iter().map(|r| r.3).sum();
    let (value, _, witness, _) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one start");
    Ok(UpsilonEstimate {
        value,
        witness,
        evaluations,
    })
}

/// Class of `(φ_1 ⋯ φ_k)⁻¹` for the given representatives' conjugators.
///
/// Together with the inputs it closes a tuple lying in `Δ_{k+1}`.
pub fn product_class_with(classes: &[AlcovePoint], conjugators: &[UnitaryMatrix]) -> Result<AlcovePoint> {
    let n = check_classes(classes)?;
    if conjugators.len() != classes.len() || conjugators.iter().any(|v| v.n() != n) {
        return Err(Error::mismatch("one conjugator of matching size per class"));
    }
    let mut product = UnitaryMatrix::identity(n);
    for (alpha, v) in classes.iter().zip(conjugators) {
        product = product * class_representative(alpha, Some(v));
    }
    alcove_of(&product.inverse())
}

/// [`product_class_with`] using Haar-random conjugators drawn from `seed`.
pub fn product_class(classes: &[AlcovePoint], seed: u64) -> Result<AlcovePoint> {
    let n = check_classes(classes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conj: Vec<UnitaryMatrix> = classes.iter().map(|_| haar_sample_with(n, &mut rng)).collect();
    product_class_with(classes, &conj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn closed_form_examples() {
        assert!(close(su2_upsilon3_closed_form(0.1, 0.1, 0.3).unwrap(), 0.1, 1e-15));
        assert!(close(su2_upsilon3_closed_form(0.45, 0.45, 0.5).unwrap(), 0.4, 1e-15));
        assert!(close(su2_upsilon3_closed_form(0.4, 0.05, 0.2).unwrap(), 0.15, 1e-15));
        assert!(su2_upsilon3_closed_form(0.6, 0.0, 0.0).is_err());
        assert!(su2_upsilon3_closed_form(-0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_is_symmetric_and_satisfies_triangle_bound() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.025).collect();
        for &a in &grid {
            for &b in &grid {
                for &c in &grid {
                    let v = su2_upsilon3_closed_form(a, b, c).unwrap();
                    for p in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        assert_eq!(v, su2_upsilon3_closed_form(p.0, p.1, p.2).unwrap());
                    }
                    if c >= a && c >= b {
                        assert!(v >= c - (a + b));
                        // Unsymmetrized formula agrees when ζ³ is largest.
                        let raw = (c - (a + b).min(1.0 - a - b)).max(0.0);
                        assert!(close(v, raw, 1e-15));
                    }
                }
            }
        }
    }

    #[test]
    fn product_class_examples() {
        let zeta = AlcovePoint::su2(0.2).unwrap();
        let id = UnitaryMatrix::identity(2);
        let p = product_class_with(&[zeta.clone(), zeta.clone()], &[id.clone(), id.clone()]).unwrap();
        assert!(close(p.at(1), 0.4, 1e-12));

        let single = product_class(std::slice::from_ref(&zeta), 3).unwrap();
        assert!(close(single.at(1), 0.2, 1e-12));

        let a = AlcovePoint::new(vec![0.4, 0.1, -0.5]).unwrap();
        let inv = product_class(std::slice::from_ref(&a), 8).unwrap();
        for (x, y) in inv.coords().iter().zip(a.inverse().coords()) {
            assert!(close(*x, *y, 1e-10));
        }

        let zero = product_class(&[AlcovePoint::zero(3), AlcovePoint::zero(3)], 1).unwrap();
        assert!(zero.max_abs() < 1e-12);
    }

    #[test]
    fn estimate_of_trivial_classes_is_zero() {
        let est = upsilon_estimate(&vec![AlcovePoint::zero(2); 3], 100, 1).unwrap();
        assert_eq!(est.value, 0.0);
        for w in &est.witness {
            assert!((w.matrix() - CMatrix::identity(2, 2)).norm() < 1e-12);
        }
        assert!(upsilon_estimate(&vec![AlcovePoint::zero(2); 3], 0, 1).is_err());
    }

    #[test]
    fn estimate_is_deterministic() {
        let classes = [
            AlcovePoint::su2(0.1).unwrap(),
            AlcovePoint::su2(0.2).unwrap(),
            AlcovePoint::su2(0.45).unwrap(),
        ];
        let a = upsilon_estimate(&classes, 2000, 9).unwrap();
        let b = upsilon_estimate(&classes, 2000, 9).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn estimate_examples() {
        let classes = |z: [f64; 3]| -> Vec<AlcovePoint> { z.iter().map(|&x| AlcovePoint::su2(x).unwrap()).collect() };
        let est = upsilon_estimate(&classes([0.1, 0.1, 0.3]), 20_000, 1).unwrap();
        assert!(close(est.value, 0.1, 5e-3), "{}", est.value);
        let est = upsilon_estimate(&classes([0.25, 0.25, 0.5]), 20_000, 1).unwrap();
        assert!(close(est.value, 0.0, 5e-3), "{}", est.value);
        let est = upsilon_estimate(&classes([0.4, 0.05, 0.2]), 20_000, 1).unwrap();
        assert!(close(est.value, 0.15, 5e-3), "{}", est.value);
        // The witness realizes the reported value.
        let mut p = est.witness[0].clone();
        for w in &est.witness[1..] {
            p = p * w;
        }
        assert!(close(finsler_distance_to_id(&p).unwrap(), est.value, 1e-12));
    }
}
