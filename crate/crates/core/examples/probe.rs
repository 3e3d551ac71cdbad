use plaplab::layers::{build_layer_datum, build_stationary_subcritical, Sign, StepFunction};
use plaplab::potential::PotentialParams;
use plaplab::solver::*;
use plaplab::grid::{Field, Grid};
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    match args.get(1).map(|s| s.as_str()) {
        Some("drift") => drift_probe(),
        Some("collapse") => collapse_probe(),
        Some("fig") => fig_probe(),
        _ => println!("usage: probe [drift|collapse|fig]"),
    }
}

fn drift_probe() {
    // criterion 5: p=4, n=2, eps=0.05, N=2 compacton on [-0.6,0.6], t=1e4
    let pars = PotentialParams::new(4.0, 2.0, 0.05).unwrap();
    let v = StepFunction::new(-0.6, 0.6, vec![-0.22, 0.22], Sign::Minus).unwrap();
    for cells_per_eps in [240.0] {
        let grid = Grid::resolving(-0.6, 0.6, 0.05, cells_per_eps).unwrap();
        let u0 = build_stationary_subcritical(&v, &pars, &grid).unwrap();
        let t0 = Instant::now();
        let rec = run(&u0, 1e4, &pars, &SolverConfig::default(), &ObserverConfig::default()).unwrap();
        let drift = rec.final_field.unwrap().sup_distance(&u0);
        println!("cpe={cells_per_eps} m={} drift={drift:.3e} steps={} rej={} wall={:?}",
            grid.m, rec.steps_accepted, rec.steps_rejected, t0.elapsed());
    }
}

fn collapse_probe() {
    for half_gap in [0.4, 0.45] {
    println!("--- jumps at ±{half_gap}");
    for (p, n) in [(2.0, 2.0), (2.0, 4.0)] {
        for eps in [0.14, 0.12, 0.11, 0.10] {
            let pars = PotentialParams::new(p, n, eps).unwrap();
            let v = StepFunction::new(-1.0, 1.0, vec![-half_gap, half_gap], Sign::Minus).unwrap();
            let grid = Grid::resolving(-1.0, 1.0, eps, 8.0).unwrap();
            let u0 = build_layer_datum(&v, &pars, &grid).unwrap();
            let obs = ObserverConfig { stop_rule: StopRule::FirstCountDrop, ..ObserverConfig::default() };
            let t0 = Instant::now();
            let rec = run(&u0, 1e8, &pars, &SolverConfig::default(), &obs).unwrap();
            println!("p={p} n={n} eps={eps}: stop={:?} steps={} wall={:?}",
                rec.stop, rec.steps_accepted, t0.elapsed());
        }
    }
    }
}

fn fig_probe() {
    // fig-degenerate: p=2, n=4, eps=0.1, figure layout on [-4,4]
    let pars = PotentialParams::new(2.0, 4.0, 0.1).unwrap();
    let v = StepFunction::new(-4.0, 4.0, vec![-3.4, -2.0, -0.5, 0.8, 2.2, 3.2], Sign::Minus).unwrap();
    let grid = Grid::resolving(-4.0, 4.0, 0.1, 8.0).unwrap();
    let u0 = build_layer_datum(&v, &pars, &grid).unwrap();
    let obs = ObserverConfig { stop_rule: StopRule::FirstCountDrop, ..ObserverConfig::default() };
    let t0 = Instant::now();
    let rec = run(&u0, 1e7, &pars, &SolverConfig::default(), &obs).unwrap();
    println!("fig-degenerate: stop={:?} steps={} rej={} wall={:?}", rec.stop, rec.steps_accepted, rec.steps_rejected, t0.elapsed());
    // and critical for comparison (may take longer)
    let pars = PotentialParams::new(2.0, 2.0, 0.1).unwrap();
    let u0 = build_layer_datum(&v, &pars, &grid).unwrap();
    let t0 = Instant::now();
    let rec = run(&u0, 1e7, &pars, &SolverConfig::default(), &obs).unwrap();
    println!("fig-critical:   stop={:?} steps={} rej={} wall={:?}", rec.stop, rec.steps_accepted, rec.steps_rejected, t0.elapsed());
}
