//! `SU(n)` numerics: matrices, conjugacy classes, the bi-invariant Finsler
//! distance and stochastic estimation of `Υ_l`.

mod eigen;
mod finsler;
mod path;
mod upsilon;

use std::f64::consts::PI;
use std::ops::Mul;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::alcove::{alcove_from_angles, AlcovePoint};
use crate::error::{Error, Result};

pub use eigen::{characteristic_polynomial, eigenangles, eigenvalues, polynomial_roots};
pub use finsler::{class_distance, finsler_distance_to_id, lift_norm, minimal_lift};
pub use path::GroupPath;
pub use upsilon::{
    product_class, product_class_with, su2_upsilon3_closed_form, upsilon_estimate, upsilon_estimate_with,
    UpsilonEstimate, UpsilonOptions,
};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance on `‖U†U − Id‖_max`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance on `|det U − 1|`.
pub const DET_TOL: f64 = 1e-8;

/// An element of `SU(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() < 1 {
            return Err(Error::validation("unitary matrices must be square"));
        }
        let defect = unitarity_defect(&m);
        if defect > UNITARY_TOL {
            return Err(Error::validation(format!(
                "matrix is not unitary: ‖U†U − Id‖_max = {defect:e}"
            )));
        }
        let det = m.determinant();
        if (det - Complex64::new(1.0, 0.0)).norm() > DET_TOL {
            return Err(Error::validation(format!("determinant {det} is not 1")));
        }
        Ok(UnitaryMatrix { m })
    }

    pub fn identity(n: usize) -> Self {
        UnitaryMatrix {
            m: CMatrix::identity(n, n),
        }
    }

    /// `diag(e^{2πiα_1}, …, e^{2πiα_n})`.
    pub fn diagonal(alpha: &AlcovePoint) -> Self {
        Self::diagonal_angles(alpha.coords())
    }

    pub(crate) fn diagonal_angles(angles: &[f64]) -> Self {
        let n = angles.len();
        let mut m = CMatrix::zeros(n, n);
        for (j, &a) in angles.iter().enumerate() {
            m[(j, j)] = Complex64::from_polar(1.0, 2.0 * PI * a);
        }
        UnitaryMatrix { m }
    }

    /// `exp(2πi·H)` for a Hermitian `H`; traceless `H` lands in `SU(n)`.
    pub fn exp_hermitian(h: &CMatrix) -> Self {
        let n = h.nrows();
        let herm = (h + h.adjoint()).scale(0.5);
        let eig = SymmetricEigen::new(herm);
        let q = eig.eigenvectors;
        let mut d = CMatrix::zeros(n, n);
        for j in 0..n {
            d[(j, j)] = Complex64::from_polar(1.0, 2.0 * PI * eig.eigenvalues[j]);
        }
        UnitaryMatrix {
            m: &q * d * q.adjoint(),
        }
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        UnitaryMatrix { m: self.m.adjoint() }
    }

    /// `V · U · V†`.
    pub fn conjugate_by(&self, v: &UnitaryMatrix) -> Self {
        UnitaryMatrix {
            m: &v.m * &self.m * v.m.adjoint(),
        }
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.m)
    }

    pub fn determinant(&self) -> Complex64 {
        self.m.determinant()
    }

    /// Operator norm of `U − V`, from the eigenangles of `V⁻¹U`.
    pub fn operator_distance(&self, other: &UnitaryMatrix) -> Result<f64> {
        let angles = eigenangles(&(other.inverse() * self))?;
        let max = angles.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        Ok(2.0 * (PI * max).sin())
    }

    /// Hermitian generator `H` with `U = exp(2πi·H)`, using the minimal
    /// sum-zero lift of the eigenangles so that `exp(2πi·τH)` stays in `SU(n)`.
    pub fn log_hermitian(&self) -> Result<CMatrix> {
        let n = self.n();
        let (q, t) = eigen::schur(&self.m)?;
        let angles: Vec<f64> = (0..n).map(|j| t[(j, j)].arg() / (2.0 * PI)).collect();
        let lifted = minimal_lift(&angles);
        let mut d = CMatrix::zeros(n, n);
        for j in 0..n {
            d[(j, j)] = Complex64::new(lifted[j], 0.0);
        }
        let h = &q * d * q.adjoint();
        Ok((&h + h.adjoint()).scale(0.5))
    }

    /// Point at fraction `tau` along the one-parameter subgroup from `self`
    /// to `other`: `exp(τ·log(other·self⁻¹))·self`.
    pub fn geodesic_to(&self, other: &UnitaryMatrix, tau: f64) -> Result<UnitaryMatrix> {
        let h = (other * &self.inverse()).log_hermitian()?;
        Ok(&UnitaryMatrix::exp_hermitian(&h.scale(tau)) * self)
    }
}

impl Mul for &UnitaryMatrix {
    type Output = UnitaryMatrix;
    fn mul(self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix { m: &self.m * &rhs.m }
    }
}

impl Mul for UnitaryMatrix {
    type Output = UnitaryMatrix;
    fn mul(self, rhs: UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix { m: self.m * rhs.m }
    }
}

impl Mul<&UnitaryMatrix> for UnitaryMatrix {
    type Output = UnitaryMatrix;
    fn mul(self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix { m: self.m * &rhs.m }
    }
}

fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let g = m.adjoint() * m - CMatrix::identity(n, n);
    g.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    })
}

/// Orthonormal columns from a Gaussian matrix, with the phases of `R`'s
/// diagonal pushed into `Q` so the result is Haar distributed.
pub(crate) fn haar_columns<R: Rng + ?Sized>(n: usize, cols: usize, rng: &mut R) -> CMatrix {
    let g = complex_gaussian(n, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random element of `SU(n)` drawn from `rng`.
pub fn haar_sample_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    let mut q = haar_columns(n, n, rng);
    let det = q.determinant();
    let correction = Complex64::from_polar(1.0, -det.arg() / n as f64);
    for z in q.iter_mut() {
        *z *= correction;
    }
    UnitaryMatrix { m: q }
}

/// Haar-random element of `SU(n)`, reproducible from `seed`.
pub fn haar_sample(n: usize, seed: u64) -> UnitaryMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_sample_with(n, &mut rng)
}

/// Alcove point of the conjugacy class of `u`.
pub fn alcove_of(u: &UnitaryMatrix) -> Result<AlcovePoint> {
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::validation(format!(
            "matrix is not unitary: ‖U†U − Id‖_max = {defect:e}"
        )));
    }
    alcove_from_angles(&eigenangles(u)?)
}

/// `V·diag(e^{2πiα})·V†`; without a conjugator the diagonal representative.
pub fn class_representative(alpha: &AlcovePoint, conjugator: Option<&UnitaryMatrix>) -> UnitaryMatrix {
    let d = UnitaryMatrix::diagonal(alpha);
    match conjugator {
        Some(v) => d.conjugate_by(v),
        None => d,
    }
}

/// Representative of `C_α` conjugated by a Haar-random element.
pub fn random_class_representative<R: Rng + ?Sized>(alpha: &AlcovePoint, rng: &mut R) -> UnitaryMatrix {
    let v = haar_sample_with(alpha.n(), rng);
    class_representative(alpha, Some(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_special_unitary_and_reproducible() {
        for n in 2..=6 {
            let a = haar_sample(n, 42);
            let b = haar_sample(n, 42);
            assert_eq!(a, b);
            assert!(UnitaryMatrix::new(a.matrix().clone()).is_ok());
            for j in 0..n {
                let norm: f64 = a.matrix().column(j).iter().map(|z| z.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
        assert_ne!(haar_sample(3, 1), haar_sample(3, 2));
    }

    #[test]
    fn rejects_non_unitary() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(UnitaryMatrix::new(m).is_err());
        let mut m = CMatrix::identity(2, 2);
        m[(0, 0)] = Complex64::new(0.0, 1.0);
        assert!(UnitaryMatrix::new(m).is_err(), "determinant i");
    }

    #[test]
    fn alcove_examples() {
        assert_eq!(alcove_of(&UnitaryMatrix::identity(3)).unwrap(), AlcovePoint::zero(3));
        let u = UnitaryMatrix::diagonal_angles(&[0.3, -0.3]);
        let a = alcove_of(&u).unwrap();
        assert!((a.at(1) - 0.3).abs() < 1e-12 && (a.at(2) + 0.3).abs() < 1e-12);
        let u = UnitaryMatrix::diagonal_angles(&[0.6, 0.3, 0.1]);
        let a = alcove_of(&u).unwrap();
        for (x, y) in a.coords().iter().zip([0.3, 0.1, -0.4]) {
            assert!((x - y).abs() < 1e-12, "{a}");
        }
    }

    #[test]
    fn representative_examples() {
        let v = haar_sample(3, 5);
        let id = class_representative(&AlcovePoint::zero(3), Some(&v));
        assert!((id.matrix() - CMatrix::identity(3, 3)).norm() < 1e-12);
        let d = class_representative(&AlcovePoint::su2(0.25).unwrap(), None);
        assert!((d.matrix()[(0, 0)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((d.matrix()[(1, 1)] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn log_and_exp_are_inverse() {
        for seed in 0..20 {
            let u = haar_sample(3, seed);
            let h = u.log_hermitian().unwrap();
            let back = UnitaryMatrix::exp_hermitian(&h);
            assert!((back.matrix() - u.matrix()).norm() < 1e-10);
            assert!(h.trace().norm() < 1e-10);
        }
        let id = UnitaryMatrix::identity(2);
        assert!(id.log_hermitian().unwrap().norm() < 1e-14);
    }

    #[test]
    fn geodesic_endpoints() {
        let a = haar_sample(2, 1);
        let b = haar_sample(2, 2);
        let start = a.geodesic_to(&b, 0.0).unwrap();
        let end = a.geodesic_to(&b, 1.0).unwrap();
        assert!((start.matrix() - a.matrix()).norm() < 1e-10);
        assert!((end.matrix() - b.matrix()).norm() < 1e-10);
    }
}
