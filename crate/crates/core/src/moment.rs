//! The Hamiltonian `H_α` on `Gr(r, n)` generated by the circle action
//! `diag(e^{2πiα_j t})`, evaluated on orthonormal frames.
//!
//! At the coordinate plane `z_I` the value is `−Σ_{j ∈ I} α_j`; the action of
//! the capped orbit `[z_I, f_d]` is `Σ_{j ∈ I} α_j − d`. These are the two
//! sides that the eigenvalue inequalities compare.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::abw::AbwInequality;
use crate::alcove::AlcovePoint;
use crate::error::{Error, Result};
use crate::schubert::SchubertIndex;
use crate::unitary::{haar_columns, CMatrix};

/// Tolerance on `‖B†B − Id_r‖_max`.
pub const FRAME_TOL: f64 = 1e-10;
/// Agreement required between the two routes of [`action_inequality_bridge`].
pub const BRIDGE_TOL: f64 = 1e-12;

const CHUNK: usize = 1024;

/// An `n × r` matrix with orthonormal columns; its column span is a point of
/// `Gr(r, n)`, and right multiplication by `U(r)` does not move that point.
#[derive(Debug, Clone)]
pub struct Frame {
    b: CMatrix,
}

impl Frame {
    pub fn new(b: CMatrix) -> Result<Self> {
        let (n, r) = b.shape();
        if r == 0 || r > n {
            return Err(Error::validation(format!("frame of shape {n}×{r}")));
        }
        let gram = b.adjoint() * &b - CMatrix::identity(r, r);
        let defect = gram.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if defect > FRAME_TOL {
            return Err(Error::validation(format!(
                "frame columns are not orthonormal: defect {defect:e}"
            )));
        }
        Ok(Frame { b })
    }

    /// The frame of `span{e_j : j ∈ I}`.
    pub fn coordinate(index: &SchubertIndex) -> Self {
        let (n, r) = (index.n(), index.r());
        let mut b = CMatrix::zeros(n, r);
        for (col, &j) in index.indices().iter().enumerate() {
            b[(j - 1, col)] = 1.0.into();
        }
        Frame { b }
    }

    /// A frame whose span is Haar-distributed on `Gr(r, n)`.
    pub fn haar<R: rand::Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> Self {
        Frame {
            b: haar_columns(n, r, rng),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.b.nrows()
    }

    pub fn r(&self) -> usize {
        self.b.ncols()
    }

    /// `B·Q` for `Q` of size `r × r`.
    pub fn gauge(&self, q: &CMatrix) -> Result<Frame> {
        Frame::new(&self.b * q)
    }
}

/// `H_α(span B) = −Σ_j α_j ‖row_j(B)‖²`.
pub fn hamiltonian_value(frame: &Frame, alpha: &AlcovePoint) -> Result<f64> {
    if frame.n() != alpha.n() {
        return Err(Error::mismatch(format!(
            "frame in C^{} against SU({})",
            frame.n(),
            alpha.n()
        )));
    }
    let b = frame.matrix();
    Ok(-(0..frame.n())
        .map(|j| alpha.coords()[j] * b.row(j).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum::<f64>())
}

/// `A_α([z_I, f_d]) = Σ_{j ∈ I} α_j − d`.
pub fn action_value(index: &SchubertIndex, d: usize, alpha: &AlcovePoint) -> Result<f64> {
    if index.n() != alpha.n() {
        return Err(Error::mismatch(format!(
            "index set in Gr(·, {}) against SU({})",
            index.n(),
            alpha.n()
        )));
    }
    Ok(index.indices().iter().map(|&i| alpha.at(i)).sum::<f64>() - d as f64)
}

/// Monte-Carlo mean and standard error of `H_α` over Haar-random points of
/// `Gr(r, n)`. The exact mean is zero because `E‖row_j‖² = r/n` and `Σα = 0`.
pub fn haar_mean_check(alpha: &AlcovePoint, r: usize, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let n = alpha.n();
    if r == 0 || r >= n {
        return Err(Error::validation(format!("Gr({r}, {n}) needs 0 < r < n")));
    }
    if samples < 100 {
        return Err(Error::validation(format!("{samples} samples; at least 100 required")));
    }
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<Result<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..count {
                let h = hamiltonian_value(&Frame::haar(n, r, &mut rng), alpha)?;
                sum += h;
                sum_sq += h * h;
            }
            Ok((sum, sum_sq))
        })
        .collect();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for p in partial {
        let (s, q) = p?;
        sum += s;
        sum_sq += q;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = ((sum_sq / m) - mean * mean).max(0.0) * m / (m - 1.0);
    Ok((mean, (var / m).sqrt()))
}

/// The action bound of an inequality evaluated two ways: through the
/// critical values `−H_{ζ^j}(z_{I_j})` at coordinate frames minus `d`, and
/// through the linear form `Σ_j Σ_{i ∈ I_j} ζ^j_i − d`. Returns the common value.
pub fn action_inequality_bridge(ineq: &AbwInequality, zeta: &[AlcovePoint]) -> Result<f64> {
    let linear = ineq.evaluate(zeta)?;
    let mut via_hamiltonian = -(ineq.d as f64);
    let mut via_action = 0.0;
    for (j, (index, point)) in ineq.subsets.iter().zip(zeta).enumerate() {
        via_hamiltonian -= hamiltonian_value(&Frame::coordinate(index), point)?;
        // The sphere class is attached to the first orbit only.
        let d = if j == 0 { ineq.d } else { 0 };
        via_action += action_value(index, d, point)?;
    }
    for (name, value) in [("critical values", via_hamiltonian), ("action values", via_action)] {
        if (value - linear).abs() > BRIDGE_TOL {
            return Err(Error::Consistency(format!(
                "{name} give {value}, the linear form gives {linear}"
            )));
        }
    }
    Ok(linear)
}
