//! Experiment orchestration: validated run configs, scenario execution,
//! regime sweeps, and result emission.
//!
//! A run is described by one human-readable TOML file (see
//! [`RunConfig::from_toml`]); command-line flags override file values. The
//! same config always reproduces the same outputs byte for byte: nothing
//! here depends on wall-clock time or worker scheduling.

mod output;
mod scenarios;

pub use output::write_profile_csv;
pub use scenarios::{builtin_scenarios, scenario_by_name, Scenario};

use crate::diagnostics::{
    detect_collapse, lower_bound_check, scaling_fit, CollapseScan, EnergyReport, FitKind,
    FitResult,
};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::layers::{
    build_layer_datum, build_stationary_periodic, build_stationary_subcritical,
    max_separation_radius, Sign, StepFunction,
};
use crate::potential::PotentialParams;
use crate::solver::{run, ObserverConfig, RunRecord, SolverConfig, StopRule};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Current config schema version; bumped on incompatible grammar changes.
pub const CONFIG_SCHEMA: u32 = 1;

/// Initial datum selection.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialData {
    /// Standing-wave layers glued at the given jumps.
    Layers { jumps: Vec<f64>, first_sign: i8 },
    /// Exactly stationary compacton pattern (requires n < p).
    StationarySubcritical { jumps: Vec<f64>, first_sign: i8 },
    /// Stationary periodic pattern with equidistant zeros.
    StationaryPeriodic { n_layers: usize },
    /// Spatially constant state.
    Constant { value: f64 },
}

/// Mesh selection: cells per interface width, with an optional hard node
/// count override.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct MeshSpec {
    pub cells_per_eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
}

impl Default for MeshSpec {
    fn default() -> Self {
        Self { cells_per_eps: 8.0, nodes: None }
    }
}

/// When a run should stop before t_end.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum StopSpec {
    None,
    FirstCollapse,
    /// Stop once interfaces drift beyond δ; None uses r/2.
    DistanceExceeds { delta: Option<f64> },
}

impl Default for StopSpec {
    fn default() -> Self {
        StopSpec::None
    }
}

/// Observer schedule section.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ObserverSpec {
    pub points_per_decade: u32,
    pub t_first: f64,
    pub band: (f64, f64),
    pub store_fields: bool,
}

impl Default for ObserverSpec {
    fn default() -> Self {
        Self { points_per_decade: 64, t_first: 1e-2, band: (-0.5, 0.5), store_fields: false }
    }
}

/// Which artifacts a run writes.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct OutputConfig {
    /// Output directory; nothing is written when None.
    pub dir: Option<PathBuf>,
    /// Snapshot fields as CSV rows t,x,u (forces field storage).
    pub snapshots_csv: bool,
    /// Run log as JSON lines (t, dt, energy, ut_norm_sq, interfaces).
    pub log_jsonl: bool,
    pub energy_report_json: bool,
    pub collapse_json: bool,
    pub final_field_csv: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            snapshots_csv: false,
            log_jsonl: true,
            energy_report_json: true,
            collapse_json: true,
            final_field_csv: true,
        }
    }
}

/// A complete, serializable description of one simulation run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub schema: u32,
    pub params: PotentialParams,
    pub domain: (f64, f64),
    pub initial: InitialData,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub mesh: MeshSpec,
    pub t_end: f64,
    #[serde(default)]
    pub stop: StopSpec,
    #[serde(default)]
    pub observers: ObserverSpec,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        Ok(cfg)
    }

    pub fn from_toml_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Check every field and collect all problems; `Err(Validation)` carries
    /// one message per offending field.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.schema != CONFIG_SCHEMA {
            problems.push(format!(
                "schema: expected version {CONFIG_SCHEMA}, got {}",
                self.schema
            ));
        }
        if let Err(e) = PotentialParams::new(self.params.p, self.params.n, self.params.eps) {
            problems.push(format!("params: {e}"));
        }
        let (a, b) = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            problems.push(format!("domain: need finite a < b, got [{a}, {b}]"));
        }
        match &self.initial {
            InitialData::Layers { jumps, first_sign }
            | InitialData::StationarySubcritical { jumps, first_sign } => {
                if Sign::try_from(*first_sign).is_err() {
                    problems.push(format!("initial.first_sign: must be ±1, got {first_sign}"));
                }
                if a < b {
                    if let Err(e) = StepFunction::new(a, b, jumps.clone(), Sign::Minus) {
                        problems.push(format!("initial.jumps: {e}"));
                    }
                }
            }
            InitialData::StationaryPeriodic { n_layers } => {
                if *n_layers == 0 {
                    problems.push("initial.n_layers: must be at least 1".to_string());
                }
            }
            InitialData::Constant { value } => {
                if !value.is_finite() {
                    problems.push("initial.value: must be finite".to_string());
                }
            }
        }
        if let Err(e) = self.solver.validate() {
            problems.push(format!("solver: {e}"));
        }
        if !(self.mesh.cells_per_eps >= 4.0) {
            problems.push(format!(
                "mesh.cells_per_eps: interface needs at least 4 cells, got {}",
                self.mesh.cells_per_eps
            ));
        }
        if let Some(nodes) = self.mesh.nodes {
            if nodes < 3 {
                problems.push(format!("mesh.nodes: need at least 3, got {nodes}"));
            } else if self.params.eps > 0.0 && a < b {
                let h = (b - a) / (nodes - 1) as f64;
                if h > self.params.eps / 4.0 {
                    problems.push(format!(
                        "mesh.nodes: spacing {h:.3e} does not resolve ε = {} (need h ≤ ε/4)",
                        self.params.eps
                    ));
                }
            }
        }
        if !(self.t_end >= 0.0) {
            problems.push(format!("t_end: must be ≥ 0, got {}", self.t_end));
        }
        if let StopSpec::DistanceExceeds { delta: Some(d) } = self.stop {
            if !(d > 0.0) {
                problems.push(format!("stop.delta: must be positive, got {d}"));
            }
        }
        let (k_lo, k_hi) = self.observers.band;
        if !(k_lo <= k_hi && k_lo > -1.0 && k_hi < 1.0) {
            problems.push(format!(
                "observers.band: need -1 < lo ≤ hi < 1, got [{k_lo}, {k_hi}]"
            ));
        }
        if self.observers.points_per_decade == 0 {
            problems.push("observers.points_per_decade: must be ≥ 1".to_string());
        }
        if !(self.observers.t_first > 0.0) {
            problems.push(format!(
                "observers.t_first: must be positive, got {}",
                self.observers.t_first
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        let (a, b) = self.domain;
        match self.mesh.nodes {
            Some(nodes) => Grid::new(a, b, nodes),
            None => Grid::resolving(a, b, self.params.eps, self.mesh.cells_per_eps),
        }
    }

    /// The step-function target of the run, when one is defined by the
    /// initial datum (the periodic construction gets its equidistant jump
    /// set; constants have none).
    pub fn target(&self) -> Result<Option<StepFunction>> {
        let (a, b) = self.domain;
        match &self.initial {
            InitialData::Layers { jumps, first_sign }
            | InitialData::StationarySubcritical { jumps, first_sign } => {
                Ok(Some(StepFunction::new(a, b, jumps.clone(), Sign::try_from(*first_sign)?)?))
            }
            InitialData::StationaryPeriodic { n_layers } => {
                let n = *n_layers;
                let spacing = (b - a) / n as f64;
                let jumps = (0..n).map(|i| a + (0.5 + i as f64) * spacing).collect();
                Ok(Some(StepFunction::new(a, b, jumps, Sign::Minus)?))
            }
            InitialData::Constant { .. } => Ok(None),
        }
    }

    pub fn build_initial(&self, grid: &Grid) -> Result<Field> {
        match &self.initial {
            InitialData::Layers { .. } => {
                let v = self.target()?.expect("layers have a target");
                build_layer_datum(&v, &self.params, grid)
            }
            InitialData::StationarySubcritical { .. } => {
                let v = self.target()?.expect("layers have a target");
                build_stationary_subcritical(&v, &self.params, grid)
            }
            InitialData::StationaryPeriodic { n_layers } => {
                build_stationary_periodic(*n_layers, &self.params, grid)
            }
            InitialData::Constant { value } => Ok(Field::constant(*grid, *value)),
        }
    }

    fn observer_config(&self) -> Result<ObserverConfig> {
        let stop_rule = match self.stop {
            StopSpec::None => StopRule::None,
            StopSpec::FirstCollapse => StopRule::FirstCountDrop,
            StopSpec::DistanceExceeds { delta } => {
                let d = match (delta, self.target()?) {
                    (Some(d), _) => d,
                    (None, Some(v)) => 0.5 * max_separation_radius(&v),
                    (None, None) => {
                        return Err(Error::invalid(
                            "stop",
                            "distance-exceeds without delta needs a layered initial datum"
                                .to_string(),
                        ))
                    }
                };
                StopRule::DistanceExceeds(d)
            }
        };
        Ok(ObserverConfig {
            points_per_decade: self.observers.points_per_decade,
            t_first: self.observers.t_first,
            band: self.observers.band,
            stop_rule,
            store_fields: self.observers.store_fields || self.output.snapshots_csv,
        })
    }
}

/// Everything a scenario run produces.
#[derive(Debug)]
pub struct ScenarioResult {
    pub record: RunRecord,
    pub energy_report: Option<EnergyReport>,
    pub collapse: Option<CollapseScan>,
    /// Files written, in a fixed order.
    pub written: Vec<PathBuf>,
}

/// Execute construction → simulation → diagnostics → artifact emission.
pub fn run_scenario(config: &RunConfig) -> Result<ScenarioResult> {
    config.validate()?;
    let grid = config.grid()?;
    let u0 = config.build_initial(&grid)?;
    let observers = config.observer_config()?;
    let record = run(&u0, config.t_end, &config.params, &config.solver, &observers)?;

    let target = config.target()?;
    let (energy_report, collapse) = match &target {
        Some(v) => {
            let r = max_separation_radius(v);
            let constants = config.params.constants()?;
            // Midpoint of the admissible interval (0, r√2·λ_p); the bound
            // constant is reported as a shape, not fitted.
            let a_constant = 0.5 * r * 2f64.sqrt() * constants.lambda_p;
            let report = lower_bound_check(&u0, v, &config.params, a_constant)?;
            let delta = 0.5 * r;
            let scan = detect_collapse(&record, v, delta)?;
            (Some(report), Some(scan))
        }
        None => (None, None),
    };

    let written = match &config.output.dir {
        Some(dir) => output::write_run_artifacts(
            dir,
            config,
            &record,
            energy_report.as_ref(),
            collapse.as_ref(),
        )?,
        None => Vec::new(),
    };

    Ok(ScenarioResult { record, energy_report, collapse, written })
}

/// Sweep axis.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Eps,
    P,
    N,
}

/// A family of runs varying one parameter.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Fit law; None picks by the regime of each run's (p, n).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitKind>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.values.is_empty() {
            problems.push("values: must be nonempty".to_string());
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) && self.values.len() > 1 {
            problems.push("values: must be strictly increasing".to_string());
        }
        if let Err(Error::Validation(mut inner)) = self.base.validate() {
            problems.append(&mut inner);
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    fn config_for(&self, value: f64) -> RunConfig {
        let mut cfg = self.base.clone();
        match self.axis {
            SweepAxis::Eps => cfg.params.eps = value,
            SweepAxis::P => cfg.params.p = value,
            SweepAxis::N => cfg.params.n = value,
        }
        // Per-run artifacts are suppressed; the sweep emits its own table.
        cfg.output.dir = None;
        cfg
    }
}

/// One row of a sweep table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    /// Geometric-mean time of the first interface-count drop.
    pub collapse_time: Option<f64>,
    /// First time the interface set moved beyond δ = r/2.
    pub distance_exceed_time: Option<f64>,
    pub final_energy: Option<f64>,
    pub error: Option<String>,
}

/// Sweep outcome: per-value rows in input order, the scaling fit over the
/// collapsed rows, and the failures that did not abort the sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    pub fit: Option<FitResult>,
    pub fit_error: Option<String>,
}

/// Run the sweep; rows execute concurrently, results collate in input
/// order so the output is independent of worker scheduling.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;

    let rows: Vec<SweepRow> = config
        .values
        .par_iter()
        .map(|&value| {
            let run_cfg = config.config_for(value);
            match execute_sweep_point(&run_cfg) {
                Ok((collapse_time, distance_exceed_time, final_energy)) => SweepRow {
                    value,
                    collapse_time,
                    distance_exceed_time,
                    final_energy: Some(final_energy),
                    error: None,
                },
                Err(e) => SweepRow {
                    value,
                    collapse_time: None,
                    distance_exceed_time: None,
                    final_energy: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let fit_kind = config.fit.unwrap_or_else(|| {
        if config.base.params.n > config.base.params.p && config.axis == SweepAxis::Eps {
            FitKind::AlgebraicInEps
        } else {
            FitKind::ExponentialInInverseEps
        }
    });
    let samples: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.collapse_time.map(|t| (r.value, t)))
        .collect();
    let (fit, fit_error) = if config.axis == SweepAxis::Eps {
        match scaling_fit(&samples, fit_kind) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some("scaling fits apply to ε sweeps only".to_string()))
    };

    let result = SweepResult { axis: config.axis, rows, fit, fit_error };
    if let Some(dir) = &config.base.output.dir {
        output::write_sweep_artifacts(dir, &result)?;
    }
    Ok(result)
}

fn execute_sweep_point(cfg: &RunConfig) -> Result<(Option<f64>, Option<f64>, f64)> {
    let scenario = run_scenario(cfg)?;
    let collapse_time = scenario
        .collapse
        .as_ref()
        .and_then(|scan| scan.events.first().map(|e| e.t_collapse));
    let exceed_time = scenario
        .collapse
        .as_ref()
        .and_then(|scan| scan.first_distance_exceed.as_ref().map(|e| e.t_collapse));
    Ok((collapse_time, exceed_time, scenario.record.final_energy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_config() -> RunConfig {
        RunConfig {
            schema: CONFIG_SCHEMA,
            params: PotentialParams { p: 2.0, n: 2.0, eps: 0.1 },
            domain: (-1.0, 1.0),
            initial: InitialData::Layers { jumps: vec![-0.45, 0.45], first_sign: -1 },
            solver: SolverConfig::default(),
            mesh: MeshSpec::default(),
            t_end: 1.0,
            stop: StopSpec::None,
            observers: ObserverSpec::default(),
            output: OutputConfig { dir: None, ..OutputConfig::default() },
        }
    }

    #[test]
    fn toml_round_trip() {
        let cfg = minimal_config();
        let text = cfg.to_toml();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn example_toml_parses() {
        let text = r#"
schema = 1
domain = [-4.0, 4.0]
t_end = 1e5
stop = "first-collapse"

[params]
p = 2.0
n = 4.0
eps = 0.1

[initial]
kind = "layers"
jumps = [-3.4, -2.0, -0.5, 0.8, 2.2, 3.2]
first_sign = -1
"#;
        let cfg = RunConfig::from_toml(text).unwrap();
        assert_eq!(cfg.params.n, 4.0);
        assert_eq!(cfg.stop, StopSpec::FirstCollapse);
        cfg.validate().unwrap();
    }

    #[test]
    fn validation_collects_field_messages() {
        let mut cfg = minimal_config();
        cfg.params.p = 0.5;
        cfg.t_end = -3.0;
        cfg.observers.band = (-2.0, 0.5);
        match cfg.validate() {
            Err(Error::Validation(msgs)) => {
                assert!(msgs.iter().any(|m| m.starts_with("params:")), "{msgs:?}");
                assert!(msgs.iter().any(|m| m.starts_with("t_end:")), "{msgs:?}");
                assert!(msgs.iter().any(|m| m.starts_with("observers.band:")), "{msgs:?}");
            }
            other => panic!("expected Validation, got {other:?}"),
        }
    }

    #[test]
    fn jumps_outside_domain_rejected() {
        let mut cfg = minimal_config();
        cfg.initial = InitialData::Layers { jumps: vec![-2.0, 0.0], first_sign: -1 };
        assert!(matches!(cfg.validate(), Err(Error::Validation(_))));
    }

    #[test]
    fn scenario_runs_and_reports() {
        let mut cfg = minimal_config();
        cfg.t_end = 2.0;
        let result = run_scenario(&cfg).unwrap();
        assert!(result.energy_report.is_some());
        assert!(result.collapse.is_some());
        assert!(result.written.is_empty());
        assert_eq!(result.record.initial_interfaces.len(), 2);
    }

    #[test]
    fn scenario_reruns_bit_identically() {
        let mut cfg = minimal_config();
        cfg.t_end = 3.0;
        let a = run_scenario(&cfg).unwrap();
        let b = run_scenario(&cfg).unwrap();
        assert_eq!(a.record.final_energy.to_bits(), b.record.final_energy.to_bits());
        let fa = a.record.final_field.unwrap();
        let fb = b.record.final_field.unwrap();
        assert_eq!(fa.values, fb.values);
        assert_eq!(a.record.snapshots.len(), b.record.snapshots.len());
    }

    #[test]
    fn sweep_runs_concurrently_with_deterministic_order() {
        let mut base = minimal_config();
        base.params.n = 4.0;
        base.t_end = 1e5;
        base.stop = StopSpec::FirstCollapse;
        let sweep = SweepConfig {
            base,
            axis: SweepAxis::Eps,
            values: vec![0.10, 0.12, 0.14],
            fit: Some(FitKind::AlgebraicInEps),
        };
        let a = run_sweep(&sweep).unwrap();
        let b = run_sweep(&sweep).unwrap();
        assert_eq!(a.rows.len(), 3);
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.value, rb.value);
            assert_eq!(ra.collapse_time, rb.collapse_time);
            assert!(ra.collapse_time.is_some());
        }
        let fit = a.fit.expect("three collapses fit");
        assert!(fit.slope > 0.0);
        assert!(fit.r_squared > 0.9);
    }

    #[test]
    fn sweep_single_value_reports_insufficient_samples() {
        let mut base = minimal_config();
        base.t_end = 0.5;
        base.stop = StopSpec::FirstCollapse;
        let sweep =
            SweepConfig { base, axis: SweepAxis::Eps, values: vec![0.1], fit: None };
        let result = run_sweep(&sweep).unwrap();
        assert_eq!(result.rows.len(), 1);
        assert!(result.fit.is_none());
        assert!(result.fit_error.unwrap().contains("insufficient"));
    }

    #[test]
    fn sweep_partial_failure_does_not_abort() {
        // ε = 0.4 cannot satisfy the subcritical separation condition, the
        // others can; the sweep reports the failure in its row.
        let mut base = minimal_config();
        base.params = PotentialParams { p: 4.0, n: 2.0, eps: 0.05 };
        base.initial = InitialData::StationarySubcritical { jumps: vec![-0.45, 0.45], first_sign: -1 };
        base.t_end = 0.5;
        let sweep = SweepConfig {
            base,
            axis: SweepAxis::Eps,
            values: vec![0.05, 0.1, 0.4],
            fit: None,
        };
        let result = run_sweep(&sweep).unwrap();
        assert!(result.rows[0].error.is_none());
        assert!(result.rows[1].error.is_none());
        let msg = result.rows[2].error.as_ref().expect("ε too large fails");
        assert!(msg.contains("epsilon too large"), "{msg}");
    }
}
