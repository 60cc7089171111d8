//! Eigenvalues of unitary matrices.
//!
//! The primary route forms the characteristic polynomial (Faddeev–LeVerrier)
//! and finds all roots simultaneously with the Aberth–Ehrlich iteration.
//! Roots are projected onto the unit circle. When the forward-error estimate
//! of any root exceeds `RESIDUAL_TOL` (clustered or repeated eigenvalues),
//! the matrix is handed to a Schur decomposition instead, whose QR sweeps
//! deflate converged eigenvalues one at a time.

use std::f64::consts::PI;

use nalgebra::Schur;
use num_complex::Complex64;

use super::{CMatrix, UnitaryMatrix};
use crate::error::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-9;
const MAX_ABERTH_ITERS: usize = 200;
const MAX_SCHUR_ITERS: usize = 10_000;
const SCHUR_EPS: f64 = 1e-14;

/// Coefficients `c_0, …, c_n` of `det(z·Id − A) = Σ c_k z^k`, with `c_n = 1`.
pub fn characteristic_polynomial(a: &CMatrix) -> Vec<Complex64> {
    let n = a.nrows();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let id = CMatrix::identity(n, n);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m + &id * coeffs[n - k + 1];
        let am = a * &m;
        coeffs[n - k] = -am.trace() / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    // Value, derivative and the running bound Σ|c_k||z|^k for the rounding estimate.
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let az = z.norm();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        bound = bound * az + c.norm();
    }
    (p, dp, bound)
}

/// All roots of a monic polynomial by the Aberth–Ehrlich iteration.
///
/// Returns the roots and, for each, an estimate of its forward error.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.1, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..MAX_ABERTH_ITERS {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp, _) = horner(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    let errors: Vec<f64> = z
        .iter()
        .map(|&root| {
            let (p, dp, bound) = horner(coeffs, root);
            let est = (p.norm() + 4.0 * f64::EPSILON * bound) / dp.norm();
            if est.is_finite() {
                est
            } else {
                f64::INFINITY
            }
        })
        .collect();
    if !converged && errors.iter().all(|e| *e > RESIDUAL_TOL) {
        let worst = errors.iter().cloned().fold(0.0, f64::max);
        return Err(Error::numeric("Aberth iteration did not converge", worst));
    }
    Ok((z, errors))
}

pub(crate) fn schur(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    Schur::try_new(m.clone(), SCHUR_EPS, MAX_SCHUR_ITERS)
        .map(|s| s.unpack())
        .ok_or_else(|| Error::numeric("Schur iteration did not converge", f64::NAN))
}

/// Eigenvalues of a unitary matrix, each of modulus one.
pub fn eigenvalues(u: &UnitaryMatrix) -> Result<Vec<Complex64>> {
    let m = u.matrix();
    let n = m.nrows();
    if n == 1 {
        return Ok(vec![m[(0, 0)] / m[(0, 0)].norm()]);
    }
    let coeffs = characteristic_polynomial(m);
    let via_roots = polynomial_roots(&coeffs)
        .ok()
        .filter(|(_, errors)| errors.iter().all(|&e| e <= RESIDUAL_TOL));
    let raw = match via_roots {
        Some((roots, _)) => roots,
        None => {
            let (_, t) = schur(m)?;
            let vals: Vec<Complex64> = (0..n).map(|j| t[(j, j)]).collect();
            // Off-diagonal mass left in T means the Schur form is not triangular.
            let below: f64 = (0..n)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .map(|(i, j)| t[(i, j)].norm())
                .fold(0.0, f64::max);
            if below > RESIDUAL_TOL {
                return Err(Error::numeric("Schur form is not triangular", below));
            }
            vals
        }
    };
    Ok(raw.into_iter().map(|z| z / z.norm()).collect())
}

/// Principal eigenangles in turns, each in `(−1/2, 1/2]`.
pub fn eigenangles(u: &UnitaryMatrix) -> Result<Vec<f64>> {
    Ok(eigenvalues(u)?
        .into_iter()
        .map(|z| {
            let a = z.arg() / (2.0 * PI);
            if a <= -0.5 {
                a + 1.0
            } else {
                a
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::haar_sample;
    use super::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    #[test]
    fn char_poly_of_diagonal() {
        let d = UnitaryMatrix::diagonal_angles(&[0.1, 0.2, -0.3]);
        let c = characteristic_polynomial(d.matrix());
        // Evaluate at each diagonal entry: should vanish.
        for j in 0..3 {
            let (p, _, _) = horner(&c, d.matrix()[(j, j)]);
            assert!(p.norm() < 1e-14);
        }
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (z − 1)(z − i)(z + 2)
        let r = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-2.0, 0.0),
        ];
        let coeffs = vec![
            -r[0] * r[1] * r[2],
            r[0] * r[1] + r[0] * r[2] + r[1] * r[2],
            -(r[0] + r[1] + r[2]),
            Complex64::new(1.0, 0.0),
        ];
        let (roots, errors) = polynomial_roots(&coeffs).unwrap();
        for target in r {
            assert!(roots.iter().any(|z| (z - target).norm() < 1e-12));
        }
        assert!(errors.iter().all(|e| *e < 1e-12));
    }

    #[test]
    fn eigenangles_of_conjugated_diagonal() {
        let angles = [0.37, 0.05, -0.11, -0.31];
        let d = UnitaryMatrix::diagonal_angles(&angles);
        let u = d.conjugate_by(&haar_sample(4, 9));
        let got = sorted(eigenangles(&u).unwrap());
        for (a, b) in got.iter().zip(sorted(angles.to_vec())) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn repeated_eigenvalues_use_the_fallback() {
        let d = UnitaryMatrix::diagonal_angles(&[0.2, 0.2, -0.4]);
        let u = d.conjugate_by(&haar_sample(3, 4));
        let got = sorted(eigenangles(&u).unwrap());
        for (a, b) in got.iter().zip([-0.4, 0.2, 0.2]) {
            assert!((a - b).abs() < 1e-11, "{got:?}");
        }
        let id = UnitaryMatrix::identity(4);
        assert!(eigenangles(&id).unwrap().iter().all(|a| a.abs() < 1e-15));
    }

    #[test]
    fn eigenvalue_residuals_are_small() {
        for seed in 0..50 {
            let n = 2 + (seed as usize % 5);
            let u = haar_sample(n, seed);
            for lambda in eigenvalues(&u).unwrap() {
                let shifted = u.matrix() - CMatrix::identity(n, n) * lambda;
                let smin = shifted.singular_values().min();
                assert!(smin < 1e-9, "residual {smin}");
            }
        }
    }
}
