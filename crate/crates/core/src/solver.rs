//! Finite-difference discretization and long-horizon time integration.
//!
//! The semi-discretization is the exact gradient flow of the discrete
//! renormalized energy
//!
//! ```text
//!     E_h[u] = Σ_cells h·ε^{p-1}|Δu/h|^p/p  +  Σ_nodes w_i·F(u_i)/ε,
//! ```
//!
//! with trapezoidal node weights w_i (h/2 at the boundary), so that along
//! accepted steps dE_h/dt = -ε^{-1}‖u_t‖² holds up to time-discretization
//! error and the discrete energy can only decrease. Zero-flux faces realize
//! the Neumann conditions in conservation form.
//!
//! Two schemes share this spatial operator: forward Euler, and the default
//! semi-implicit method that freezes the diffusion coefficient
//! (u_x²+δ²)^{(p-2)/2} at the current state, solves the resulting linear
//! tridiagonal system, and treats the reaction explicitly. Every step is
//! accepted only if the discrete energy does not increase beyond
//! `energy_tolerance`; rejected steps halve dt.

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::layers::{interfaces_of_field, InterfaceSet};
use crate::potential::PotentialParams;
use serde::{Deserialize, Serialize};

/// Time discretization of the gradient flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Explicit,
    SemiImplicitLagged,
}

/// Solver knobs. `reg_delta = None` picks the regime default: 1e-10 for
/// p < 2 (where |g|^{p-2} is singular at g = 0) and 0 for p ≥ 2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub scheme: Scheme,
    pub dt_init: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub energy_tolerance: f64,
    pub reg_delta: Option<f64>,
    pub cfl_safety: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::SemiImplicitLagged,
            dt_init: 1e-3,
            dt_min: 1e-14,
            dt_max: 1e3,
            energy_tolerance: 1e-12,
            reg_delta: None,
            cfl_safety: 0.9,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_min <= self.dt_init && self.dt_init <= self.dt_max) {
            return Err(Error::invalid(
                "dt",
                format!(
                    "need dt_min ≤ dt_init ≤ dt_max, got {} / {} / {}",
                    self.dt_min, self.dt_init, self.dt_max
                ),
            ));
        }
        if let Some(d) = self.reg_delta {
            if d < 0.0 {
                return Err(Error::invalid("reg_delta", format!("must be ≥ 0, got {d}")));
            }
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::invalid("cfl_safety", format!("must be in (0, 1], got {}", self.cfl_safety)));
        }
        if self.energy_tolerance < 0.0 {
            return Err(Error::invalid("energy_tolerance", "must be ≥ 0".to_string()));
        }
        Ok(())
    }

    pub fn delta_for(&self, params: &PotentialParams) -> f64 {
        self.reg_delta.unwrap_or(if params.p < 2.0 { 1e-10 } else { 0.0 })
    }
}

/// Outcome of a single trial step.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StepResult {
    pub accepted: bool,
    pub dt_used: f64,
    pub energy_before: f64,
    pub energy_after: f64,
    /// Discrete ‖u_t‖²_{L²} = Σ w_i ((u'_i - u_i)/dt)².
    pub ut_norm_sq: f64,
}

/// Regularized p-Laplacian flux φ(g) = (g² + δ²)^{(p-2)/2} g; exactly
/// |g|^{p-2} g when δ = 0 and the identity when p = 2.
#[inline]
pub fn flux(g: f64, params: &PotentialParams, config: &SolverConfig) -> f64 {
    face_coefficient(g, params, config.delta_for(params)) * g
}

#[inline]
fn face_coefficient(g: f64, params: &PotentialParams, delta: f64) -> f64 {
    let p = params.p;
    if p == 2.0 {
        return 1.0;
    }
    let s = g * g + delta * delta;
    if p == 4.0 {
        s
    } else if p == 3.0 {
        s.sqrt()
    } else {
        s.powf(0.5 * (p - 2.0))
    }
}

/// |g|^p with fast paths for the common integer exponents.
#[inline]
fn abs_pow(g: f64, p: f64) -> f64 {
    if p == 2.0 {
        g * g
    } else if p == 4.0 {
        let s = g * g;
        s * s
    } else if p == 3.0 {
        g * g * g.abs()
    } else {
        g.abs().powf(p)
    }
}

/// Neumaier compensated accumulator; the energy acceptance test works at
/// the 1e-12 level, below naive summation noise on fine meshes.
#[derive(Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        self.comp += if self.sum.abs() >= v.abs() { (self.sum - t) + v } else { (v - t) + self.sum };
        self.sum = t;
    }

    #[inline]
    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// Discrete renormalized energy E_h (the Lyapunov functional of the scheme).
pub fn energy(u: &Field, params: &PotentialParams) -> f64 {
    let h = u.grid.h();
    let (p, n, eps) = (params.p, params.n, params.eps);
    let grad_coef = h * eps.powf(p - 1.0) / p;
    let vals = &u.values;
    let m = vals.len();

    let mut acc = Accumulator::default();
    for i in 0..m - 1 {
        let grad = (vals[i + 1] - vals[i]) / h;
        acc.add(grad_coef * abs_pow(grad, p));
    }
    let f_coef = h / eps;
    if n == 2.0 {
        for (i, &ui) in vals.iter().enumerate() {
            let w = 1.0 - ui * ui;
            let scale = if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
            acc.add(scale * f_coef * (w * w / 4.0));
        }
    } else {
        for (i, &ui) in vals.iter().enumerate() {
            let scale = if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
            acc.add(scale * f_coef * params.f(ui));
        }
    }
    acc.value()
}

/// Spatial operator in conservation form with zero-flux boundary faces:
/// du_i/dt = ε^p (Φ_{i+1/2} - Φ_{i-1/2}) / w_i - F'(u_i).
pub fn rhs(u: &Field, params: &PotentialParams, config: &SolverConfig) -> Field {
    let g = &u.grid;
    let h = g.h();
    let m = g.m;
    let delta = config.delta_for(params);
    let epsp = params.eps.powf(params.p);
    let vals = &u.values;

    let mut fluxes = vec![0.0; m + 1]; // fluxes[i] = Φ_{i-1/2}; both ends stay 0
    for i in 0..m - 1 {
        let grad = (vals[i + 1] - vals[i]) / h;
        fluxes[i + 1] = face_coefficient(grad, params, delta) * grad;
    }

    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let div = (fluxes[i + 1] - fluxes[i]) / g.weight(i);
        out.push(epsp * div - params.df(vals[i]));
    }
    Field { grid: *g, values: out }
}

/// Solve the tridiagonal system in place: diag/sub/sup describe the matrix,
/// rhs enters with the data and leaves with the solution. The assembled
/// systems are strictly diagonally dominant, so no pivoting is needed.
fn thomas_solve(sub: &[f64], diag: &mut [f64], sup: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
    }
}

fn explicit_candidate(u: &Field, dt: f64, params: &PotentialParams, config: &SolverConfig) -> Vec<f64> {
    let r = rhs(u, params, config);
    u.values.iter().zip(&r.values).map(|(ui, ri)| ui + dt * ri).collect()
}

/// φ'(g) for the regularized flux; the Newton weights.
#[inline]
fn flux_derivative(g: f64, params: &PotentialParams, delta: f64) -> f64 {
    let p = params.p;
    if p == 2.0 {
        return 1.0;
    }
    let s = g * g + delta * delta;
    if p == 4.0 {
        3.0 * g * g + delta * delta
    } else {
        s.powf(0.5 * (p - 4.0)) * ((p - 1.0) * g * g + delta * delta)
    }
}

/// Semi-implicit step: diffusion implicit, reaction explicit. The diffusion
/// system u' = y + dt·ε^p·L(u')u', y = u - dt·F'(u), is solved by Newton
/// with tridiagonal Jacobian solves, warm-started from the frozen-coefficient
/// (lagged-diffusivity) predictor. Solving the diffusion to a tight residual
/// makes discrete steady states exact fixed points of the step map, so the
/// energy-acceptance test does not throttle dt near stationary profiles.
fn semi_implicit_candidate(
    u: &Field,
    dt: f64,
    params: &PotentialParams,
    config: &SolverConfig,
) -> Vec<f64> {
    const NEWTON_MAX_ITERS: usize = 12;
    const NEWTON_TOL: f64 = 1e-13;

    let g = &u.grid;
    let h = g.h();
    let m = g.m;
    let delta = config.delta_for(params);
    let epsp = params.eps.powf(params.p);
    let vals = &u.values;
    let linear_diffusion = params.p == 2.0 && delta == 0.0;

    // Reaction explicit.
    let y: Vec<f64> = vals.iter().map(|&v| v - dt * params.df(v)).collect();

    let mut face = vec![0.0; m - 1];
    let mut sub = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut rhs_vec = vec![0.0; m];

    // Frozen-coefficient predictor (exact for linear diffusion).
    for i in 0..m - 1 {
        let grad = (vals[i + 1] - vals[i]) / h;
        face[i] = face_coefficient(grad, params, delta);
    }
    for i in 0..m {
        let w = g.weight(i);
        let left = if i > 0 { face[i - 1] } else { 0.0 };
        let right = if i < m - 1 { face[i] } else { 0.0 };
        let scale = dt * epsp / (w * h);
        diag[i] = 1.0 + scale * (left + right);
        sub[i] = -scale * left;
        sup[i] = -scale * right;
    }
    rhs_vec.copy_from_slice(&y);
    thomas_solve(&sub, &mut diag, &sup, &mut rhs_vec);
    let mut iterate = rhs_vec.clone();
    if linear_diffusion {
        return iterate;
    }

    // Newton corrector on G(u') = u' - y - dt·ε^p·(flux divergence)(u').
    // Stops on a small residual or on stagnation: the attainable floor is
    // set by flux roundoff (∝ |φ(g)|·ulp/h) and grows under refinement, so
    // an absolute target alone would spin.
    let mut prev_residual = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITERS {
        let mut residual_norm = 0.0f64;
        for i in 0..m - 1 {
            let grad = (iterate[i + 1] - iterate[i]) / h;
            face[i] = face_coefficient(grad, params, delta) * grad; // Φ at the face
        }
        for i in 0..m {
            let w = g.weight(i);
            let left = if i > 0 { face[i - 1] } else { 0.0 };
            let right = if i < m - 1 { face[i] } else { 0.0 };
            let residual = iterate[i] - y[i] - dt * epsp * (right - left) / w;
            rhs_vec[i] = -residual;
            residual_norm = residual_norm.max(residual.abs());
        }
        if residual_norm <= NEWTON_TOL || residual_norm >= 0.5 * prev_residual {
            break;
        }
        prev_residual = residual_norm;
        for i in 0..m - 1 {
            let grad = (iterate[i + 1] - iterate[i]) / h;
            face[i] = flux_derivative(grad, params, delta);
        }
        for i in 0..m {
            let w = g.weight(i);
            let left = if i > 0 { face[i - 1] } else { 0.0 };
            let right = if i < m - 1 { face[i] } else { 0.0 };
            let scale = dt * epsp / (w * h);
            diag[i] = 1.0 + scale * (left + right);
            sub[i] = -scale * left;
            sup[i] = -scale * right;
        }
        thomas_solve(&sub, &mut diag, &sup, &mut rhs_vec);
        for i in 0..m {
            iterate[i] += rhs_vec[i];
        }
    }
    iterate
}

/// One trial step of size dt. The candidate state is returned together with
/// the acceptance verdict: a step is accepted iff the discrete energy does
/// not increase by more than `energy_tolerance`. The caller decides how to
/// react to rejection (the run loop halves dt).
pub fn step(
    u: &Field,
    dt: f64,
    params: &PotentialParams,
    config: &SolverConfig,
) -> (Field, StepResult) {
    step_from(u, energy(u, params), dt, params, config)
}

/// `step` with the current energy already known (it is the previous step's
/// `energy_after` inside the run loop).
pub fn step_from(
    u: &Field,
    energy_before: f64,
    dt: f64,
    params: &PotentialParams,
    config: &SolverConfig,
) -> (Field, StepResult) {
    assert!(dt > 0.0, "step size must be positive");
    let values = match config.scheme {
        Scheme::Explicit => explicit_candidate(u, dt, params, config),
        Scheme::SemiImplicitLagged => semi_implicit_candidate(u, dt, params, config),
    };
    let candidate = Field { grid: u.grid, values };
    let energy_after = energy(&candidate, params);
    let finite = candidate.values.iter().all(|v| v.is_finite());
    let accepted = finite && energy_after <= energy_before + config.energy_tolerance;

    let ut_norm_sq = {
        let mut acc = Accumulator::default();
        for (i, (a, b)) in candidate.values.iter().zip(&u.values).enumerate() {
            let r = (a - b) / dt;
            acc.add(u.grid.weight(i) * r * r);
        }
        acc.value()
    };
    (
        candidate,
        StepResult { accepted, dt_used: dt, energy_before, energy_after, ut_norm_sq },
    )
}

/// Upper bound on a stable explicit step from the frozen-coefficient
/// linearization (Gershgorin on the diffusion plus the reaction rate).
pub fn explicit_stable_dt(u: &Field, params: &PotentialParams, config: &SolverConfig) -> f64 {
    let h = u.grid.h();
    let delta = config.delta_for(params);
    let epsp = params.eps.powf(params.p);
    let mut a_max = 0.0f64;
    for w in u.values.windows(2) {
        let grad = (w[1] - w[0]) / h;
        let phi_prime = {
            let s = grad * grad + delta * delta;
            if params.p == 2.0 {
                1.0
            } else {
                s.powf(0.5 * (params.p - 4.0)) * ((params.p - 1.0) * grad * grad + delta * delta)
            }
        };
        a_max = a_max.max(phi_prime);
    }
    let mut f2_max = 0.0f64;
    for &v in &u.values {
        let d2 = params.d2f(v);
        if d2.is_finite() {
            f2_max = f2_max.max(d2.abs());
        }
    }
    let lambda = 4.0 * epsp * a_max / (h * h) + f2_max;
    if lambda <= 0.0 {
        f64::INFINITY
    } else {
        config.cfl_safety * 2.0 / lambda
    }
}

/// Why a run returned.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum StopReason {
    ReachedTEnd,
    /// An observer stop rule fired at time t.
    ObserverAbort { t: f64 },
}

/// Early-stop rules evaluated at observer snapshots against the initial
/// interface configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum StopRule {
    None,
    /// Stop once the interface count falls below its initial value.
    FirstCountDrop,
    /// Stop once the Hausdorff distance from the initial interface set
    /// exceeds the given δ (an emptied set counts as exceeded).
    DistanceExceeds(f64),
}

/// Observer schedule and instrumentation. Snapshots are taken at t = 0, at
/// the first accepted step crossing each point of the log-spaced schedule
/// t_k = t_first·10^{k/points_per_decade}, and at the final time.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ObserverConfig {
    pub points_per_decade: u32,
    pub t_first: f64,
    pub band: (f64, f64),
    pub stop_rule: StopRule,
    pub store_fields: bool,
}

impl Default for ObserverConfig {
    fn default() -> Self {
        Self {
            points_per_decade: 64,
            t_first: 1e-2,
            band: (-0.5, 0.5),
            stop_rule: StopRule::None,
            store_fields: false,
        }
    }
}

/// State recorded at one observer time.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub dt: f64,
    pub energy: f64,
    pub ut_norm_sq: f64,
    pub interfaces: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<Vec<f64>>,
}

/// Assembled history of a run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub snapshots: Vec<Snapshot>,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub t_final: f64,
    /// ∫₀ᵀ ‖u_t‖²_{L²} dt accumulated over accepted steps.
    pub dissipation_integral: f64,
    pub steps_accepted: u64,
    pub steps_rejected: u64,
    /// Largest single-step energy increase ever accepted (bounded by the
    /// energy tolerance).
    pub max_energy_increase: f64,
    pub stop: StopReason,
    pub band: (f64, f64),
    pub initial_interfaces: Vec<f64>,
    #[serde(skip)]
    pub final_field: Option<Field>,
}

impl RunRecord {
    pub fn initial_interface_set(&self) -> InterfaceSet {
        InterfaceSet::new(self.initial_interfaces.clone())
    }
}

/// Advance u0 to t_end with adaptive step control: dt grows by 1.5 after 10
/// consecutive acceptances (capped by dt_max, the explicit stability bound
/// when applicable, and the reaction monotonicity bound 1/sup|F''| for the
/// semi-implicit scheme), halves on rejection, and errors below dt_min.
pub fn run(
    u0: &Field,
    t_end: f64,
    params: &PotentialParams,
    config: &SolverConfig,
    observers: &ObserverConfig,
) -> Result<RunRecord> {
    config.validate()?;
    if t_end < 0.0 {
        return Err(Error::invalid("t_end", format!("must be ≥ 0, got {t_end}")));
    }

    let reaction_cap = {
        let sup = params.d2f_sup();
        if sup.is_finite() && sup > 0.0 {
            1.0 / sup
        } else {
            f64::INFINITY
        }
    };
    let cap_for = |u: &Field, dt: f64| -> f64 {
        let mut capped = dt.min(reaction_cap);
        if matches!(config.scheme, Scheme::Explicit) {
            capped = capped.min(explicit_stable_dt(u, params, config));
        }
        capped.min(config.dt_max)
    };

    let mut u = u0.clone();
    let mut e = energy(&u, params);
    let initial_energy = e;
    let mut t = 0.0f64;
    let mut dt = config.dt_init;
    let mut streak = 0u32;
    let mut accepted = 0u64;
    let mut rejected = 0u64;
    let mut dissipation = 0.0f64;
    let mut max_increase = 0.0f64;

    let ratio = 10f64.powf(1.0 / observers.points_per_decade as f64);
    let mut next_obs = observers.t_first;

    let initial_ifs = interfaces_of_field(&u, observers.band);
    let take = |t: f64, dt: f64, e: f64, ut2: f64, u: &Field| -> Snapshot {
        Snapshot {
            t,
            dt,
            energy: e,
            ut_norm_sq: ut2,
            interfaces: interfaces_of_field(u, observers.band).positions().to_vec(),
            field: observers.store_fields.then(|| u.values.clone()),
        }
    };
    let mut snapshots = vec![take(0.0, dt, e, 0.0, &u)];
    let initial_count = initial_ifs.len();
    let mut stop = StopReason::ReachedTEnd;

    'time: while t < t_end {
        let dt_capped = cap_for(&u, dt).max(config.dt_min);
        let dt_eff = dt_capped.min(t_end - t);
        if t + dt_eff == t {
            return Err(Error::DtUnderflow { t, dt: dt_eff, dt_min: config.dt_min });
        }
        let (candidate, res) = step_from(&u, e, dt_eff, params, config);
        if res.accepted {
            u = candidate;
            t += dt_eff;
            max_increase = max_increase.max(res.energy_after - res.energy_before);
            e = res.energy_after;
            dissipation += res.ut_norm_sq * dt_eff;
            accepted += 1;
            streak += 1;
            if streak >= 10 {
                dt = (dt * 1.5).min(config.dt_max);
                streak = 0;
            }

            if t >= next_obs || t >= t_end {
                let snap = take(t, dt_eff, e, res.ut_norm_sq, &u);
                let count = snap.interfaces.len();
                let abort = match observers.stop_rule {
                    StopRule::None => false,
                    StopRule::FirstCountDrop => count < initial_count,
                    StopRule::DistanceExceeds(delta) => {
                        if initial_ifs.is_empty() {
                            false
                        } else if snap.interfaces.is_empty() {
                            true
                        } else {
                            let current = InterfaceSet::new(snap.interfaces.clone());
                            crate::layers::hausdorff_distance(&current, &initial_ifs)? > delta
                        }
                    }
                };
                snapshots.push(snap);
                while next_obs <= t {
                    next_obs *= ratio;
                }
                if abort {
                    stop = StopReason::ObserverAbort { t };
                    break 'time;
                }
            }
        } else {
            rejected += 1;
            streak = 0;
            dt = dt_eff * 0.5;
            if dt < config.dt_min {
                return Err(Error::DtUnderflow { t, dt, dt_min: config.dt_min });
            }
        }
    }

    if snapshots.last().map(|s| s.t) != Some(t) {
        snapshots.push(take(t, dt, e, 0.0, &u));
    }

    Ok(RunRecord {
        snapshots,
        initial_energy,
        final_energy: e,
        t_final: t,
        dissipation_integral: dissipation,
        steps_accepted: accepted,
        steps_rejected: rejected,
        max_energy_increase: max_increase,
        stop,
        band: observers.band,
        initial_interfaces: initial_ifs.positions().to_vec(),
        final_field: Some(u),
    })
}
