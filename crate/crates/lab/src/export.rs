//! Writing outcomes: JSON (full record), CSV (one row per check) and
//! two-column plot data.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{LabError, LabResult};
use crate::outcome::ExperimentOutcome;

pub const CSV_HEADER: [&str; 8] = ["experiment", "N", "replicas", "statistic", "target", "tolerance", "pass", "seed"];

/// Name of the environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "ANISOWALK_OUT";

fn write_err(path: &Path) -> impl FnOnce(std::io::Error) -> LabError + '_ {
    move |source| LabError::Write {
        path: path.to_path_buf(),
        source,
    }
}

fn ensure_dir(dir: &Path) -> LabResult<()> {
    fs::create_dir_all(dir).map_err(write_err(dir))
}

pub fn to_json(outcome: &ExperimentOutcome) -> LabResult<String> {
    Ok(serde_json::to_string_pretty(outcome)?)
}

pub fn from_json(text: &str) -> LabResult<ExperimentOutcome> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_json(outcome: &ExperimentOutcome, dir: &Path) -> LabResult<PathBuf> {
    ensure_dir(dir)?;
    let path = dir.join(format!("{}.json", outcome.spec.name));
    fs::write(&path, to_json(outcome)? + "\n").map_err(write_err(&path))?;
    Ok(path)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    #[serde(rename = "N")]
    n: u64,
    replicas: u64,
    statistic: f64,
    target: f64,
    tolerance: f64,
    pass: bool,
    seed: u64,
}

/// Appends one row per check of each outcome.
pub fn write_csv<W: Write>(outcomes: &[ExperimentOutcome], out: W) -> LabResult<()> {
    let mut writer = csv::Writer::from_writer(out);
    if outcomes.iter().all(|o| o.checks.is_empty()) {
        writer.write_record(CSV_HEADER)?;
    }
    for o in outcomes {
        for c in &o.checks {
            writer.serialize(CsvRow {
                experiment: &o.spec.name,
                n: c.n,
                replicas: c.replicas,
                statistic: c.statistic,
                target: c.target,
                tolerance: c.tolerance,
                pass: c.pass,
                seed: o.spec.seed,
            })?;
        }
    }
    writer.flush().map_err(|e| LabError::Csv(e.into()))?;
    Ok(())
}

pub fn write_csv_file(outcomes: &[ExperimentOutcome], path: &Path) -> LabResult<()> {
    if let Some(parent) = path.parent() {
        ensure_dir(parent)?;
    }
    let file = fs::File::create(path).map_err(write_err(path))?;
    write_csv(outcomes, file)
}

/// One whitespace-separated two-column file per series.
pub fn write_plot_data(outcome: &ExperimentOutcome, dir: &Path) -> LabResult<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut paths = Vec::new();
    for series in &outcome.series {
        let stem = format!("{}.{}", outcome.spec.name, series.name).replace(['/', ','], "_");
        let path = dir.join(format!("{stem}.dat"));
        let mut text = format!("# {} {}\n", series.x_label, series.y_label);
        for (x, y) in &series.points {
            text.push_str(&format!("{x} {y}\n"));
        }
        fs::write(&path, text).map_err(write_err(&path))?;
        paths.push(path);
    }
    Ok(paths)
}
