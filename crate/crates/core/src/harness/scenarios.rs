//! Built-in scenario registry mirroring the slow-motion experiments: the
//! six-transition layout evolved under different (p, n) pairings until the
//! first interfaces collapse.
//!
//! The underlying simulations did not publish domain or mesh; the registry
//! uses [-4, 4] with 8 cells per ε, so expected collapse times are
//! order-of-magnitude anchors, not bitwise targets.

use crate::harness::{
    InitialData, MeshSpec, ObserverSpec, OutputConfig, RunConfig, StopSpec, CONFIG_SCHEMA,
};
use crate::potential::PotentialParams;
use crate::solver::SolverConfig;

/// A named, ready-to-run experiment.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub config: RunConfig,
    /// Scenarios projected beyond desk scale (minutes to days at default
    /// settings) require an explicit opt-in from the CLI.
    pub long_running: bool,
    /// Order-of-magnitude anchor for the first collapse time, when known.
    pub expected_first_collapse: Option<f64>,
}

/// The six transition points shared by all figure scenarios.
pub const FIGURE_JUMPS: [f64; 6] = [-3.4, -2.0, -0.5, 0.8, 2.2, 3.2];

fn figure_config(p: f64, n: f64, t_end: f64) -> RunConfig {
    RunConfig {
        schema: CONFIG_SCHEMA,
        params: PotentialParams { p, n, eps: 0.1 },
        domain: (-4.0, 4.0),
        initial: InitialData::Layers { jumps: FIGURE_JUMPS.to_vec(), first_sign: -1 },
        solver: SolverConfig::default(),
        mesh: MeshSpec::default(),
        t_end,
        stop: StopSpec::FirstCollapse,
        observers: ObserverSpec::default(),
        output: OutputConfig::default(),
    }
}

/// All built-in scenarios, in a fixed order.
pub fn builtin_scenarios() -> Vec<Scenario> {
    vec![
        Scenario {
            name: "fig-critical",
            description: "critical case p = n = 2 (classical Allen-Cahn), ε = 0.1: \
                          metastable plateau with first collapse around t ≈ 3·10^4",
            config: figure_config(2.0, 2.0, 1e6),
            long_running: true,
            expected_first_collapse: Some(3e4),
        },
        Scenario {
            name: "fig-critical-p4",
            description: "critical case p = n = 4, ε = 0.1: layers survive to \
                          t ≈ 7·10^8; far beyond desk scale",
            config: figure_config(4.0, 4.0, 1e10),
            long_running: true,
            expected_first_collapse: Some(7e8),
        },
        Scenario {
            name: "fig-degenerate",
            description: "degenerate case p = 2, n = 4, ε = 0.1: algebraic slow \
                          motion with first collapse around t ≈ 800",
            config: figure_config(2.0, 4.0, 1e5),
            long_running: false,
            expected_first_collapse: Some(8e2),
        },
        Scenario {
            name: "fig-degenerate-p3",
            description: "degenerate case p = 3, n = 4, ε = 0.1: slower than p = 2 \
                          but still algebraic",
            config: figure_config(3.0, 4.0, 1e9),
            long_running: true,
            expected_first_collapse: None,
        },
        Scenario {
            name: "fig-real-exponent-pi",
            description: "degenerate case p = π, n = 8, ε = 0.1: first interfaces \
                          vanish around t ≈ 2·10^4",
            config: figure_config(std::f64::consts::PI, 8.0, 1e6),
            long_running: false,
            expected_first_collapse: Some(2e4),
        },
        Scenario {
            name: "fig-real-exponent",
            description: "degenerate case p = 5.5, n = 8, ε = 0.1: first interfaces \
                          vanish around t ≈ 5·10^9; far beyond desk scale",
            config: figure_config(5.5, 8.0, 1e11),
            long_running: true,
            expected_first_collapse: Some(5e9),
        },
    ]
}

pub fn scenario_by_name(name: &str) -> Option<Scenario> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_configs_validate() {
        let all = builtin_scenarios();
        assert!(all.len() >= 3);
        for s in &all {
            s.config.validate().unwrap_or_else(|e| panic!("{}: {e}", s.name));
        }
    }

    #[test]
    fn lookup_by_name() {
        assert!(scenario_by_name("fig-degenerate").is_some());
        assert!(scenario_by_name("fig-critical").unwrap().long_running);
        assert!(!scenario_by_name("fig-degenerate").unwrap().long_running);
        assert!(scenario_by_name("nope").is_none());
    }
}
