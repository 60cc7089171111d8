//! Lattice connections on the cylinder `[0, 1] × S¹` with structure group
//! `SU(n)`, and the two constructions relating curvature to path length:
//!
//! * a path `a(s)` from `C_1⁻¹` to `C_2` gives a connection whose curvature
//!   norm is at most `(1 + ε)·coarse_length(a)` ([`connection_from_path`]);
//! * a connection gives the path of its holonomies around the circles
//!   `{s} × S¹`, whose coarse length is at most the curvature norm
//!   ([`holonomy_path_extract`]).
//!
//! Lattice layout: vertices `(i, k)` with `0 ≤ i ≤ S`, `k ∈ ℤ/T`. The s-edge
//! `(i, k)` runs `(i, k) → (i + 1, k)`; the t-edge `(i, k)` runs
//! `(i, k) → (i, k + 1)`. Transport along a path multiplies on the left.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::alcove::AlcovePoint;
use crate::error::{Error, Result};
use crate::unitary::{
    class_distance, complex_gaussian, eigenangles, finsler_distance_to_id, minimal_lift, CMatrix, GroupPath,
    UnitaryMatrix,
};

/// Plaquettes whose holonomy has an eigenangle at or beyond this many turns
/// are rejected; the principal logarithm is unreliable near ½.
pub const BRANCH_CUT: f64 = 0.45;
pub const MIN_MESH: usize = 16;
pub const MAX_MESH: usize = 4096;

/// Monotone cut-off `ψ` on `[0, 1]`: `1` on `[0, δ]`, `0` on `[1 − δ, 1]`,
/// linear in between, with `δ` chosen so that `max|ψ′| = 1 + ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    epsilon: f64,
    flat: f64,
}

impl CutoffProfile {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::validation(format!("cut-off epsilon {epsilon} outside (0, 1)")));
        }
        Ok(CutoffProfile {
            epsilon,
            flat: epsilon / (2.0 * (1.0 + epsilon)),
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn slope_bound(&self) -> f64 {
        1.0 / (1.0 - 2.0 * self.flat)
    }

    pub fn value(&self, t: f64) -> f64 {
        ramp(t, self.flat)
    }

    /// `ψ(k/T)` for `k = 0, …, T − 1`. The flat ends are widened to at least
    /// one cell so the last row sees `ψ = 0` exactly.
    pub fn grid(&self, t_steps: usize) -> Vec<f64> {
        let flat = self.flat.max(1.0 / t_steps as f64);
        (0..t_steps).map(|k| ramp(k as f64 / t_steps as f64, flat)).collect()
    }
}

fn ramp(t: f64, flat: f64) -> f64 {
    ((1.0 - flat - t) / (1.0 - 2.0 * flat)).clamp(0.0, 1.0)
}

/// Group elements on the edges of an `S × T` grid over the cylinder.
#[derive(Debug, Clone)]
pub struct LatticeConnection {
    s_steps: usize,
    t_steps: usize,
    s_edges: Vec<UnitaryMatrix>,
    t_edges: Vec<UnitaryMatrix>,
    cell_area: f64,
}

impl LatticeConnection {
    /// `s_edges[i·T + k]` for `i < S`, `t_edges[i·T + k]` for `i ≤ S`.
    pub fn new(
        s_steps: usize,
        t_steps: usize,
        s_edges: Vec<UnitaryMatrix>,
        t_edges: Vec<UnitaryMatrix>,
    ) -> Result<Self> {
        check_mesh(s_steps, t_steps)?;
        if s_edges.len() != s_steps * t_steps || t_edges.len() != (s_steps + 1) * t_steps {
            return Err(Error::validation(format!(
                "expected {} s-edges and {} t-edges, got {} and {}",
                s_steps * t_steps,
                (s_steps + 1) * t_steps,
                s_edges.len(),
                t_edges.len()
            )));
        }
        let n = s_edges[0].n();
        for e in s_edges.iter().chain(&t_edges) {
            if e.n() != n {
                return Err(Error::mismatch("edge matrices of different sizes"));
            }
            let defect = e.unitarity_defect();
            if defect > crate::unitary::UNITARY_TOL {
                return Err(Error::validation(format!("edge matrix is not unitary ({defect:e})")));
            }
        }
        Ok(LatticeConnection {
            s_steps,
            t_steps,
            s_edges,
            t_edges,
            cell_area: 1.0 / (s_steps * t_steps) as f64,
        })
    }

    /// The trivial connection.
    pub fn flat(n: usize, s_steps: usize, t_steps: usize) -> Result<Self> {
        check_mesh(s_steps, t_steps)?;
        let id = UnitaryMatrix::identity(n);
        Self::new(
            s_steps,
            t_steps,
            vec![id.clone(); s_steps * t_steps],
            vec![id; (s_steps + 1) * t_steps],
        )
    }

    /// Same edges with total surface area `area` instead of 1.
    pub fn with_area(mut self, area: f64) -> Result<Self> {
        if !(area > 0.0 && area.is_finite()) {
            return Err(Error::validation(format!("area {area} must be positive")));
        }
        self.cell_area = area / (self.s_steps * self.t_steps) as f64;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.s_edges[0].n()
    }

    pub fn mesh(&self) -> (usize, usize) {
        (self.s_steps, self.t_steps)
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_area
    }

    pub fn s_edge(&self, i: usize, k: usize) -> &UnitaryMatrix {
        &self.s_edges[i * self.t_steps + k % self.t_steps]
    }

    pub fn t_edge(&self, i: usize, k: usize) -> &UnitaryMatrix {
        &self.t_edges[i * self.t_steps + k % self.t_steps]
    }

    pub fn set_s_edge(&mut self, i: usize, k: usize, u: UnitaryMatrix) {
        let t = self.t_steps;
        self.s_edges[i * t + k % t] = u;
    }

    pub fn set_t_edge(&mut self, i: usize, k: usize, u: UnitaryMatrix) {
        let t = self.t_steps;
        self.t_edges[i * t + k % t] = u;
    }

    /// Holonomy around the cell with lower-left corner `(i, k)`, based there.
    pub fn plaquette(&self, i: usize, k: usize) -> UnitaryMatrix {
        self.t_edge(i, k).inverse() * self.s_edge(i, k + 1).inverse() * self.t_edge(i + 1, k) * self.s_edge(i, k)
    }

    /// Holonomy around the circle `{s_i} × S¹`, based at `(i, 0)`.
    pub fn circle_holonomy(&self, i: usize) -> UnitaryMatrix {
        let mut h = UnitaryMatrix::identity(self.n());
        for k in 0..self.t_steps {
            h = self.t_edge(i, k) * &h;
        }
        h
    }

    /// Holonomies of the two boundary circles.
    pub fn boundary_holonomies(&self) -> (UnitaryMatrix, UnitaryMatrix) {
        (self.circle_holonomy(0), self.circle_holonomy(self.s_steps))
    }

    /// Apply a vertex gauge transformation `g[i·T + k]`:
    /// an edge `u → v` carrying `U` becomes `g_v U g_u⁻¹`.
    pub fn gauge_transform(&self, g: &[UnitaryMatrix]) -> Result<LatticeConnection> {
        let (s, t) = (self.s_steps, self.t_steps);
        if g.len() != (s + 1) * t {
            return Err(Error::validation(format!(
                "gauge needs {} vertex elements, got {}",
                (s + 1) * t,
                g.len()
            )));
        }
        let at = |i: usize, k: usize| &g[i * t + k % t];
        let mut out = self.clone();
        for i in 0..s {
            for k in 0..t {
                out.set_s_edge(i, k, at(i + 1, k) * self.s_edge(i, k) * at(i, k).inverse());
            }
        }
        for i in 0..=s {
            for k in 0..t {
                out.set_t_edge(i, k, at(i, k + 1) * self.t_edge(i, k) * at(i, k).inverse());
            }
        }
        Ok(out)
    }
}

fn check_mesh(s_steps: usize, t_steps: usize) -> Result<()> {
    for (name, m) in [("S", s_steps), ("T", t_steps)] {
        if !(MIN_MESH..=MAX_MESH).contains(&m) {
            return Err(Error::validation(format!(
                "mesh {name} = {m} outside {MIN_MESH}..={MAX_MESH}"
            )));
        }
    }
    Ok(())
}

/// Largest principal eigenangle magnitude of `u`, in turns.
fn principal_norm(u: &UnitaryMatrix) -> Result<f64> {
    Ok(eigenangles(u)?.iter().fold(0.0f64, |m, a| m.max(a.abs())))
}

/// `max_{v,w} ‖L(v, w)‖ / |Ω(v, w)|` on the lattice: the largest plaquette
/// eigenangle divided by the cell area.
pub fn curvature_norm(c: &LatticeConnection) -> Result<f64> {
    let (s, t) = c.mesh();
    let worst = (0..s * t)
        .into_par_iter()
        .map(|p| {
            let (i, k) = (p / t, p % t);
            let angle = principal_norm(&c.plaquette(i, k))?;
            if angle >= BRANCH_CUT {
                return Err(Error::BranchCut { s: i, t: k, angle });
            }
            Ok((angle, p))
        })
        .try_reduce(|| (0.0, 0), |a, b| Ok(if b.0 > a.0 { b } else { a }))?;
    Ok(worst.0 / c.cell_area())
}

/// `max_k N(a_{k+1} a_k⁻¹) / (s_{k+1} − s_k)`.
pub fn coarse_length(a: &GroupPath) -> Result<f64> {
    let inc = a.increments()?;
    Ok(inc
        .iter()
        .zip(a.params().windows(2))
        .map(|(d, w)| d / (w[1] - w[0]))
        .fold(0.0, f64::max))
}

/// Resample `a` at equal increments of length, keeping the sample count.
/// A constant path is returned unchanged.
pub fn reparameterize_arc(a: &GroupPath) -> Result<GroupPath> {
    let inc = a.increments()?;
    let total: f64 = inc.iter().sum();
    if total == 0.0 {
        return Ok(a.clone());
    }
    let mut cumulative = Vec::with_capacity(inc.len() + 1);
    cumulative.push(0.0);
    for d in &inc {
        cumulative.push(cumulative.last().unwrap() + d);
    }
    let k = a.len() - 1;
    let samples = a.samples();
    let mut out = Vec::with_capacity(k + 1);
    let mut seg = 0;
    for j in 0..=k {
        let target = total * j as f64 / k as f64;
        while seg + 1 < inc.len() && cumulative[seg + 1] < target {
            seg += 1;
        }
        let point = if j == 0 {
            samples[0].clone()
        } else if j == k {
            samples[k].clone()
        } else if inc[seg] == 0.0 {
            samples[seg].clone()
        } else {
            let tau = ((target - cumulative[seg]) / inc[seg]).clamp(0.0, 1.0);
            samples[seg].geodesic_to(&samples[seg + 1], tau)?
        };
        out.push(point);
    }
    GroupPath::uniform(out)
}

/// Connection on the `S × T` lattice realizing the path `a`: s-edges carry
/// `exp(ψ(t_k)·log(a(s_{i+1}) a(s_i)⁻¹))`, t-edges are trivial except the
/// gluing edge from row `T − 1` to row `0`, which carries `a(s_i)`. The
/// circle holonomy at `s_i` is then `a(s_i)`.
pub fn connection_from_path(
    a: &GroupPath,
    profile: &CutoffProfile,
    s_steps: usize,
    t_steps: usize,
) -> Result<LatticeConnection> {
    check_mesh(s_steps, t_steps)?;
    let n = a.n();
    let psi = profile.grid(t_steps);
    let points: Vec<UnitaryMatrix> = (0..=s_steps)
        .into_par_iter()
        .map(|i| a.at(i as f64 / s_steps as f64))
        .collect::<Result<_>>()?;
    let generators: Vec<CMatrix> = points
        .par_windows(2)
        .map(|w| (&w[1] * &w[0].inverse()).log_hermitian())
        .collect::<Result<_>>()?;
    let s_edges: Vec<UnitaryMatrix> = (0..s_steps * t_steps)
        .into_par_iter()
        .map(|p| {
            let (i, k) = (p / t_steps, p % t_steps);
            match psi[k] {
                0.0 => UnitaryMatrix::identity(n),
                1.0 => &points[i + 1] * &points[i].inverse(),
                x => UnitaryMatrix::exp_hermitian(&generators[i].scale(x)),
            }
        })
        .collect();
    let mut t_edges = vec![UnitaryMatrix::identity(n); (s_steps + 1) * t_steps];
    for (i, p) in points.into_iter().enumerate() {
        t_edges[i * t_steps + t_steps - 1] = p;
    }
    LatticeConnection::new(s_steps, t_steps, s_edges, t_edges)
}

/// Path of circle holonomies, each transported back to the fiber over
/// `(0, 0)` along the row `t = 0`.
pub fn holonomy_path_extract(c: &LatticeConnection) -> Result<GroupPath> {
    let (s, _) = c.mesh();
    let mut transport = UnitaryMatrix::identity(c.n());
    let mut samples = Vec::with_capacity(s + 1);
    for i in 0..=s {
        samples.push(c.circle_holonomy(i).conjugate_by(&transport.inverse()));
        if i < s {
            transport = c.s_edge(i, 0) * &transport;
        }
    }
    let params = (0..=s).map(|i| i as f64 / s as f64).collect();
    // Any unitary jump is allowed; continuity is what the curvature bounds.
    GroupPath::with_step_bound(samples, params, 2.0 + 1e-9)
}

/// Inputs of [`karea_duality_check`].
#[derive(Debug, Clone, Copy)]
pub struct DualityOptions {
    pub mesh: (usize, usize),
    pub epsilon: f64,
    /// Number of candidate connections to evaluate.
    pub budget: usize,
    pub seed: u64,
}

impl Default for DualityOptions {
    fn default() -> Self {
        DualityOptions {
            mesh: (200, 200),
            epsilon: 0.05,
            budget: 8,
            seed: 0,
        }
    }
}

/// Outcome of [`karea_duality_check`]. Serializes to
/// `{mesh, epsilon, curvature_min, distance, ratio}`.
#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub mesh: [usize; 2],
    pub epsilon: f64,
    pub curvature_min: f64,
    pub distance: f64,
    pub ratio: f64,
    #[serde(skip)]
    pub candidates: usize,
}

impl DualityReport {
    /// Whether the ratio lies in `[1/1.2, 1.2]`.
    pub fn within(&self, factor: f64) -> bool {
        self.ratio >= 1.0 / factor && self.ratio <= factor
    }
}

/// Below this both sides count as zero and the ratio is defined as 1.
pub const ZERO_THRESHOLD: f64 = 1e-6;

/// Minimize the curvature norm over connections built from paths joining
/// `C_1⁻¹` to `C_2` (the torus geodesic and conjugation perturbations of
/// it), and compare with `ρ(C_1⁻¹, C_2)`.
pub fn karea_duality_check(
    zeta1: &AlcovePoint,
    zeta2: &AlcovePoint,
    options: &DualityOptions,
) -> Result<DualityReport> {
    if zeta1.n() != zeta2.n() {
        return Err(Error::mismatch(format!("SU({}) vs SU({})", zeta1.n(), zeta2.n())));
    }
    let n = zeta1.n();
    if n > 4 {
        return Err(Error::validation(format!("duality check supports n ≤ 4, got {n}")));
    }
    if options.budget == 0 {
        return Err(Error::validation("candidate budget must be positive"));
    }
    let (s_steps, t_steps) = options.mesh;
    check_mesh(s_steps, t_steps)?;
    let profile = CutoffProfile::new(options.epsilon)?;
    let start = zeta1.inverse();
    let distance = class_distance(&start, zeta2)?;

    // Torus geodesic: align eigenvalues by the permutation realizing the distance.
    let (perm, velocity) = best_alignment(&start, zeta2);
    let base: Vec<f64> = perm.iter().map(|&p| start.coords()[p]).collect();
    let geodesic = |s: f64| -> UnitaryMatrix {
        let angles: Vec<f64> = base.iter().zip(&velocity).map(|(b, w)| b + s * w).collect();
        UnitaryMatrix::diagonal_angles(&angles)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut best = f64::INFINITY;
    for candidate in 0..options.budget {
        let bump = if candidate == 0 {
            CMatrix::zeros(n, n)
        } else {
            let g = complex_gaussian(n, n, &mut rng);
            let mut h = (&g + g.adjoint()).scale(0.5);
            let tr = h.trace() / n as f64;
            for j in 0..n {
                h[(j, j)] -= tr;
            }
            h.scale(rng.random_range(0.0..0.05) / h.norm().max(1e-12))
        };
        let path = GroupPath::from_fn(s_steps, |s| {
            let g = UnitaryMatrix::exp_hermitian(&bump.scale((std::f64::consts::PI * s).sin()));
            geodesic(s).conjugate_by(&g)
        })?;
        let conn = connection_from_path(&path, &profile, s_steps, t_steps)?;
        best = best.min(curvature_norm(&conn)?);
    }

    let ratio = if distance < ZERO_THRESHOLD && best < ZERO_THRESHOLD {
        1.0
    } else {
        best / distance
    };
    Ok(DualityReport {
        mesh: [s_steps, t_steps],
        epsilon: options.epsilon,
        curvature_min: best,
        distance,
        ratio,
        candidates: options.budget,
    })
}

fn best_alignment(a: &AlcovePoint, b: &AlcovePoint) -> (Vec<usize>, Vec<f64>) {
    use itertools::Itertools;
    let n = a.n();
    (0..n)
        .permutations(n)
        .map(|perm| {
            let diff: Vec<f64> = (0..n).map(|j| b.coords()[j] - a.coords()[perm[j]]).collect();
            let lift = minimal_lift(&diff);
            (perm, lift)
        })
        .min_by(|x, y| {
            let nx = x.1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let ny = y.1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            nx.total_cmp(&ny)
        })
        .expect("n ≥ 1")
}

/// A connection built from smooth random Lie-algebra fields
/// `X(s, t)`, `Y(s, t)` with `max ‖·‖ ≈ amplitude`; useful for exercising the
/// holonomy bounds away from the path construction.
pub fn smooth_random_connection(
    n: usize,
    s_steps: usize,
    t_steps: usize,
    amplitude: f64,
    seed: u64,
) -> Result<LatticeConnection> {
    check_mesh(s_steps, t_steps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hermitian = || {
        let g = complex_gaussian(n, n, &mut rng);
        let mut h = (&g + g.adjoint()).scale(0.5);
        let tr = h.trace() / n as f64;
        for j in 0..n {
            h[(j, j)] -= tr;
        }
        let norm = h.norm().max(1e-12);
        h.scale(amplitude / norm)
    };
    let xs: Vec<CMatrix> = (0..2).map(|_| hermitian()).collect();
    let ys: Vec<CMatrix> = (0..2).map(|_| hermitian()).collect();
    let phases: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..1.0)).collect();
    let tau = std::f64::consts::TAU;
    let field_x = |s: f64, t: f64| -> CMatrix {
        xs[0].scale((tau * t + tau * phases[0]).cos() * (1.0 + s))
            + xs[1].scale((2.0 * tau * t + tau * phases[1]).sin() * (1.0 - 0.5 * s))
    };
    let field_y = |s: f64, t: f64| -> CMatrix {
        ys[0].scale((tau * t + tau * phases[2]).sin() * (1.0 + s * s)) + ys[1].scale((tau * s + tau * phases[3]).cos())
    };
    let (ds, dt) = (1.0 / s_steps as f64, 1.0 / t_steps as f64);
    let s_edges = (0..s_steps * t_steps)
        .into_par_iter()
        .map(|p| {
            let (i, k) = (p / t_steps, p % t_steps);
            UnitaryMatrix::exp_hermitian(&field_x((i as f64 + 0.5) * ds, k as f64 * dt).scale(ds))
        })
        .collect();
    let t_edges = (0..(s_steps + 1) * t_steps)
        .into_par_iter()
        .map(|p| {
            let (i, k) = (p / t_steps, p % t_steps);
            UnitaryMatrix::exp_hermitian(&field_y(i as f64 * ds, (k as f64 + 0.5) * dt).scale(dt))
        })
        .collect();
    LatticeConnection::new(s_steps, t_steps, s_edges, t_edges)
}

/// Distance between the classes of the two boundary holonomies and the
/// given alcove points (`0` when they match).
pub fn boundary_class_error(c: &LatticeConnection, zeta1_inv: &AlcovePoint, zeta2: &AlcovePoint) -> Result<f64> {
    let (h0, h1) = c.boundary_holonomies();
    let a0 = crate::unitary::alcove_of(&h0)?;
    let a1 = crate::unitary::alcove_of(&h1)?;
    let e0 = a0
        .coords()
        .iter()
        .zip(zeta1_inv.coords())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let e1 = a1
        .coords()
        .iter()
        .zip(zeta2.coords())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(e0.max(e1))
}

/// Distance from the identity, exposed for callers that measure path increments.
pub fn increment_norm(u: &UnitaryMatrix) -> Result<f64> {
    finsler_distance_to_id(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::{alcove_of, haar_sample};

    fn su2_torus_path(z0: f64, z1: f64, k: usize) -> GroupPath {
        GroupPath::from_fn(k, |s| {
            let z = z0 + s * (z1 - z0);
            UnitaryMatrix::diagonal_angles(&[z, -z])
        })
        .unwrap()
    }

    #[test]
    fn cutoff_profile_invariants() {
        for eps in [0.01, 0.05, 0.1, 0.5] {
            let p = CutoffProfile::new(eps).unwrap();
            assert!((p.slope_bound() - (1.0 + eps)).abs() < 1e-12);
            let xs: Vec<f64> = (0..=1000).map(|i| p.value(i as f64 / 1000.0)).collect();
            assert!(xs.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(xs[0], 1.0);
            assert_eq!(xs[1000], 0.0);
            let slope = xs.windows(2).map(|w| (w[0] - w[1]) * 1000.0).fold(0.0, f64::max);
            assert!(slope <= 1.0 + eps + 1e-9);
            for t in [16, 64, 200] {
                let g = p.grid(t);
                assert_eq!(g[0], 1.0);
                assert_eq!(g[t - 1], 0.0);
            }
        }
        assert!(CutoffProfile::new(0.0).is_err());
    }

    #[test]
    fn flat_connection_has_zero_curvature() {
        let c = LatticeConnection::flat(2, 16, 16).unwrap();
        assert_eq!(curvature_norm(&c).unwrap(), 0.0);
        let path = holonomy_path_extract(&c).unwrap();
        assert_eq!(coarse_length(&path).unwrap(), 0.0);
        assert!(LatticeConnection::flat(2, 8, 16).is_err());
    }

    #[test]
    fn single_excited_plaquette() {
        let mut c = LatticeConnection::flat(2, 16, 16).unwrap();
        let theta = 0.01;
        c.set_t_edge(16, 3, UnitaryMatrix::diagonal_angles(&[theta, -theta]));
        let expected = theta / c.cell_area();
        assert!((curvature_norm(&c).unwrap() - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn branch_cut_is_flagged() {
        let mut c = LatticeConnection::flat(2, 16, 16).unwrap();
        c.set_t_edge(16, 3, UnitaryMatrix::diagonal_angles(&[0.47, -0.47]));
        assert!(matches!(curvature_norm(&c), Err(Error::BranchCut { .. })));
    }

    #[test]
    fn coarse_length_examples() {
        let constant = GroupPath::from_fn(60, |_| haar_sample(2, 1)).unwrap();
        assert!(coarse_length(&constant).unwrap() < 1e-12);
        let uniform = su2_torus_path(0.0, 0.3, 60);
        assert!((coarse_length(&uniform).unwrap() - 0.3).abs() < 1e-9);
        assert!((uniform.length().unwrap() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn reparameterization_levels_speed() {
        // Slow–fast: angle s², speed 2s·0.3.
        let path = GroupPath::from_fn(100, |s| UnitaryMatrix::diagonal_angles(&[0.3 * s * s, -0.3 * s * s])).unwrap();
        let length = path.length().unwrap();
        let coarse = coarse_length(&path).unwrap();
        assert!(coarse > length * 1.5);
        let arc = reparameterize_arc(&path).unwrap();
        let arc_length = arc.length().unwrap();
        assert!((arc_length - length).abs() <= 0.005 * length);
        assert!(coarse_length(&arc).unwrap() <= arc_length * 1.02);
        assert!((coarse_length(&arc).unwrap() - arc_length).abs() <= 0.01 * arc_length);

        let constant = GroupPath::from_fn(10, |_| UnitaryMatrix::identity(2)).unwrap();
        let same = reparameterize_arc(&constant).unwrap();
        assert_eq!(same.samples(), constant.samples());
    }

    #[test]
    fn path_connection_round_trip() {
        let v = haar_sample(2, 3);
        let path = GroupPath::from_fn(64, |s| {
            let z = 0.1 + 0.2 * s;
            UnitaryMatrix::diagonal_angles(&[z, -z])
                .conjugate_by(&UnitaryMatrix::exp_hermitian(&crate::unitary::CMatrix::from_fn(
                    2,
                    2,
                    |i, j| {
                        if i == j {
                            0.0.into()
                        } else {
                            (0.05 * s).into()
                        }
                    },
                )))
                .conjugate_by(&v)
        })
        .unwrap();
        let profile = CutoffProfile::new(0.1).unwrap();
        let c = connection_from_path(&path, &profile, 32, 32).unwrap();
        let (h0, h1) = c.boundary_holonomies();
        assert!((h0.matrix() - path.start().matrix()).norm() < 1e-10);
        assert!((h1.matrix() - path.end().matrix()).norm() < 1e-10);
        let back = holonomy_path_extract(&c).unwrap();
        let a0 = alcove_of(back.end()).unwrap();
        let a1 = alcove_of(path.end()).unwrap();
        assert!((a0.at(1) - a1.at(1)).abs() < 1e-6);
        // Recovered up to the global conjugation by a(0).
        let g = path.start();
        for (x, y) in back.samples().iter().zip(c_points(&path, 32)) {
            assert!((x.matrix() - y.conjugate_by(g).matrix()).norm() < 1e-9);
        }
    }

    fn c_points(path: &GroupPath, s: usize) -> Vec<UnitaryMatrix> {
        (0..=s).map(|i| path.at(i as f64 / s as f64).unwrap()).collect()
    }

    #[test]
    fn gauge_invariance_of_curvature() {
        let c = smooth_random_connection(2, 16, 16, 0.3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g: Vec<UnitaryMatrix> = (0..17 * 16)
            .map(|_| crate::unitary::haar_sample_with(2, &mut rng))
            .collect();
        let moved = c.gauge_transform(&g).unwrap();
        let a = curvature_norm(&c).unwrap();
        let b = curvature_norm(&moved).unwrap();
        assert!((a - b).abs() < 1e-8 * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn extraction_respects_curvature_bound() {
        for seed in 0..5 {
            let c = smooth_random_connection(2, 24, 24, 0.4, seed).unwrap();
            let path = holonomy_path_extract(&c).unwrap();
            let lhs = coarse_length(&path).unwrap();
            let rhs = curvature_norm(&c).unwrap();
            assert!(lhs <= rhs * 1.1, "{lhs} > {rhs}");
            assert!(path.length().unwrap() <= lhs + 1e-12);
            // Extracted endpoints are in the boundary holonomy classes.
            let (h0, h1) = c.boundary_holonomies();
            for (x, y) in [(path.start(), h0), (path.end(), h1)] {
                let ax = alcove_of(x).unwrap();
                let ay = alcove_of(&y).unwrap();
                assert!((ax.at(1) - ay.at(1)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn area_rescaling() {
        let c = smooth_random_connection(2, 16, 16, 0.3, 2).unwrap();
        let k1 = curvature_norm(&c).unwrap();
        let c2 = c.clone().with_area(2.0).unwrap();
        let k2 = curvature_norm(&c2).unwrap();
        assert!((k2 - k1 / 2.0).abs() < 1e-12 * k1);
        let length = holonomy_path_extract(&c2).unwrap().length().unwrap();
        assert!(2.0 * k2 >= length);
    }

    #[test]
    fn duality_identical_classes() {
        let z = AlcovePoint::su2(0.2).unwrap();
        let opts = DualityOptions {
            mesh: (32, 32),
            epsilon: 0.05,
            budget: 2,
            seed: 1,
        };
        let r = karea_duality_check(&z, &z, &opts).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert!(r.curvature_min < 1e-6 && r.distance < 1e-12);
    }

    #[test]
    fn duality_report_json_fields() {
        let z1 = AlcovePoint::su2(0.1).unwrap();
        let z2 = AlcovePoint::su2(0.3).unwrap();
        let opts = DualityOptions {
            mesh: (64, 64),
            epsilon: 0.05,
            budget: 2,
            seed: 1,
        };
        let r = karea_duality_check(&z1, &z2, &opts).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 5);
        for k in ["mesh", "epsilon", "curvature_min", "distance", "ratio"] {
            assert!(json.get(k).is_some());
        }
        assert!(r.within(1.2), "{r:?}");
    }
}
