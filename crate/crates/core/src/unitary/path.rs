use super::{finsler_distance_to_id, UnitaryMatrix};
use crate::error::{Error, Result};

/// Default bound on the operator-norm jump between consecutive samples.
pub const DEFAULT_STEP_BOUND: f64 = 0.5;

/// A sampled path `s ↦ a(s)` in `SU(n)` with `0 = s_0 < … < s_K = 1`.
#[derive(Debug, Clone)]
pub struct GroupPath {
    samples: Vec<UnitaryMatrix>,
    params: Vec<f64>,
}

impl GroupPath {
    /// Uniformly parameterized path through the given samples.
    pub fn uniform(samples: Vec<UnitaryMatrix>) -> Result<Self> {
        let k = samples.len();
        if k < 2 {
            return Err(Error::validation("a path needs at least two samples"));
        }
        let params = (0..k).map(|i| i as f64 / (k - 1) as f64).collect();
        Self::new(samples, params)
    }

    pub fn new(samples: Vec<UnitaryMatrix>, params: Vec<f64>) -> Result<Self> {
        Self::with_step_bound(samples, params, DEFAULT_STEP_BOUND)
    }

    pub fn with_step_bound(samples: Vec<UnitaryMatrix>, params: Vec<f64>, step_bound: f64) -> Result<Self> {
        if samples.len() < 2 || samples.len() != params.len() {
            return Err(Error::validation(format!(
                "degenerate sampling: {} samples, {} parameters",
                samples.len(),
                params.len()
            )));
        }
        let n = samples[0].n();
        if samples.iter().any(|s| s.n() != n) {
            return Err(Error::mismatch("path samples have different sizes"));
        }
        if params[0] != 0.0 || params[params.len() - 1] != 1.0 {
            return Err(Error::validation("path parameters must run from 0 to 1"));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation("path parameters must increase strictly"));
        }
        for (i, w) in samples.windows(2).enumerate() {
            let jump = w[1].operator_distance(&w[0])?;
            if jump > step_bound {
                return Err(Error::validation(format!(
                    "samples {i} and {} are {jump:.3} apart, above the step bound {step_bound}",
                    i + 1
                )));
            }
        }
        Ok(GroupPath { samples, params })
    }

    /// Samples the map `f` at `k + 1` uniform parameters.
    pub fn from_fn<F>(k: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> UnitaryMatrix,
    {
        let samples = (0..=k).map(|i| f(i as f64 / k as f64)).collect();
        Self::uniform(samples)
    }

    pub fn samples(&self) -> &[UnitaryMatrix] {
        &self.samples
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn n(&self) -> usize {
        self.samples[0].n()
    }

    pub fn start(&self) -> &UnitaryMatrix {
        &self.samples[0]
    }

    pub fn end(&self) -> &UnitaryMatrix {
        &self.samples[self.samples.len() - 1]
    }

    /// Finsler norms of the right-translated increments `a_{k+1}·a_k⁻¹`.
    pub fn increments(&self) -> Result<Vec<f64>> {
        self.samples
            .windows(2)
            .map(|w| finsler_distance_to_id(&(&w[1] * &w[0].inverse())))
            .collect()
    }

    /// Sum of increment norms.
    pub fn length(&self) -> Result<f64> {
        Ok(self.increments()?.iter().sum())
    }

    /// Point at parameter `s`, interpolating along one-parameter subgroups.
    pub fn at(&self, s: f64) -> Result<UnitaryMatrix> {
        let s = s.clamp(0.0, 1.0);
        let k = match self.params.binary_search_by(|p| p.total_cmp(&s)) {
            Ok(k) => return Ok(self.samples[k].clone()),
            Err(k) => k - 1,
        };
        let tau = (s - self.params[k]) / (self.params[k + 1] - self.params[k]);
        self.samples[k].geodesic_to(&self.samples[k + 1], tau)
    }
}
