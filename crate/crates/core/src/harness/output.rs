//! Artifact writers: CSV for fields and series, JSON for reports and
//! events. Outputs carry no timestamps so identical configs produce
//! identical bytes.

use crate::diagnostics::{CollapseScan, EnergyReport};
use crate::error::Result;
use crate::harness::{RunConfig, SweepResult};
use crate::solver::RunRecord;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Write all requested artifacts of a run; returns the paths in a fixed
/// order.
pub fn write_run_artifacts(
    dir: &Path,
    config: &RunConfig,
    record: &RunRecord,
    energy_report: Option<&EnergyReport>,
    collapse: Option<&CollapseScan>,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    // The resolved config is always echoed for reproducibility.
    let config_path = dir.join("config.toml");
    fs::write(&config_path, config.to_toml())?;
    written.push(config_path);

    if config.output.log_jsonl {
        let path = dir.join("run_log.jsonl");
        let mut text = String::new();
        for s in &record.snapshots {
            let line = serde_json::json!({
                "t": s.t,
                "dt": s.dt,
                "energy": s.energy,
                "ut_norm_sq": s.ut_norm_sq,
                "interfaces": s.interfaces,
            });
            text.push_str(&line.to_string());
            text.push('\n');
        }
        fs::write(&path, text)?;
        written.push(path);
    }

    if config.output.snapshots_csv {
        let path = dir.join("snapshots.csv");
        let grid = record.final_field.as_ref().map(|f| f.grid);
        let mut text = String::from("t,x,u\n");
        if let Some(grid) = grid {
            for s in &record.snapshots {
                if let Some(values) = &s.field {
                    for (i, v) in values.iter().enumerate() {
                        writeln!(text, "{},{},{}", s.t, grid.x(i), v).expect("string write");
                    }
                }
            }
        }
        fs::write(&path, text)?;
        written.push(path);
    }

    if config.output.energy_report_json {
        if let Some(report) = energy_report {
            let path = dir.join("energy_report.json");
            fs::write(&path, serde_json::to_string_pretty(report)? + "\n")?;
            written.push(path);
        }
    }

    if config.output.collapse_json {
        if let Some(scan) = collapse {
            let path = dir.join("collapse_events.json");
            fs::write(&path, serde_json::to_string_pretty(scan)? + "\n")?;
            written.push(path);
        }
    }

    if config.output.final_field_csv {
        if let Some(field) = &record.final_field {
            let path = dir.join("final_field.csv");
            let mut text = String::from("x,u\n");
            for (i, v) in field.values.iter().enumerate() {
                writeln!(text, "{},{}", field.grid.x(i), v).expect("string write");
            }
            fs::write(&path, text)?;
            written.push(path);
        }
    }

    // Summary with the scalar outcomes.
    let summary_path = dir.join("summary.json");
    let summary = serde_json::json!({
        "t_final": record.t_final,
        "initial_energy": record.initial_energy,
        "final_energy": record.final_energy,
        "dissipation_integral": record.dissipation_integral,
        "steps_accepted": record.steps_accepted,
        "steps_rejected": record.steps_rejected,
        "max_energy_increase": record.max_energy_increase,
        "stop": record.stop,
        "initial_interfaces": record.initial_interfaces,
    });
    fs::write(&summary_path, serde_json::to_string_pretty(&summary)? + "\n")?;
    written.push(summary_path);

    Ok(written)
}

/// Sweep table as CSV plus a JSON summary with the fit attached.
pub fn write_sweep_artifacts(dir: &Path, result: &SweepResult) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let csv_path = dir.join("sweep.csv");
    let mut text = String::from("value,collapse_time,distance_exceed_time,fit_residual,error\n");
    for (i, row) in result.rows.iter().enumerate() {
        let residual = result
            .fit
            .as_ref()
            .and_then(|f| {
                // Residuals are stored in fit-sample order (collapsed rows).
                let idx = result.rows[..i].iter().filter(|r| r.collapse_time.is_some()).count();
                if row.collapse_time.is_some() {
                    f.residuals.get(idx).copied()
                } else {
                    None
                }
            });
        writeln!(
            text,
            "{},{},{},{},{}",
            row.value,
            row.collapse_time.map(|v| v.to_string()).unwrap_or_default(),
            row.distance_exceed_time.map(|v| v.to_string()).unwrap_or_default(),
            residual.map(|v| v.to_string()).unwrap_or_default(),
            row.error.clone().unwrap_or_default().replace(',', ";"),
        )
        .expect("string write");
    }
    fs::write(&csv_path, text)?;
    written.push(csv_path);

    let json_path = dir.join("sweep_summary.json");
    fs::write(&json_path, serde_json::to_string_pretty(result)? + "\n")?;
    written.push(json_path);

    Ok(written)
}

/// Sample a profile to CSV with columns x,u at the requested resolution.
pub fn write_profile_csv(
    path: &Path,
    sampler: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    samples: usize,
) -> Result<()> {
    let mut text = String::from("x,u\n");
    let n = samples.max(2);
    for i in 0..n {
        let x = a + (b - a) * i as f64 / (n - 1) as f64;
        writeln!(text, "{},{}", x, sampler(x)).expect("string write");
    }
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}
