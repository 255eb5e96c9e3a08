use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;

pub const SCHEMA: &str = "hyperharm/1";
pub const CSV_HEADER: [&str; 8] = ["experiment", "case", "quantity", "value", "reference", "error", "tolerance", "pass"];

/// One gated or reported quantity. `tolerance = None` marks a row that is
/// reported without a gate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub case: String,
    pub quantity: String,
    pub value: f64,
    pub reference: Option<f64>,
    pub error: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

/// Two-column data for one figure-like output.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

/// Everything an experiment produces; written out by a single writer.
#[derive(Debug, Default)]
pub struct Outcome {
    pub experiment: String,
    pub rows: Vec<ResultRow>,
    pub plots: Vec<Plot>,
    pub extras: serde_json::Map<String, Value>,
}

impl Outcome {
    pub fn new(experiment: &str) -> Self {
        Outcome { experiment: experiment.to_string(), ..Default::default() }
    }

    /// A row passing when `error <= tolerance`.
    pub fn gate(&mut self, case: impl Into<String>, quantity: &str, value: f64, reference: Option<f64>, error: f64, tolerance: f64) {
        self.rows.push(ResultRow {
            experiment: self.experiment.clone(),
            case: case.into(),
            quantity: quantity.to_string(),
            value,
            reference,
            error: Some(error),
            tolerance: Some(tolerance),
            pass: error <= tolerance,
        });
    }

    /// A row gated by a boolean condition.
    pub fn check(&mut self, case: impl Into<String>, quantity: &str, value: f64, pass: bool) {
        self.rows.push(ResultRow {
            experiment: self.experiment.clone(),
            case: case.into(),
            quantity: quantity.to_string(),
            value,
            reference: None,
            error: None,
            tolerance: None,
            pass,
        });
    }

    pub fn report(&mut self, case: impl Into<String>, quantity: &str, value: f64) {
        self.check(case, quantity, value, true);
    }

    pub fn plot(&mut self, name: &str, x_label: &str, y_label: &str, points: Vec<(f64, f64)>) {
        self.plots.push(Plot { name: name.into(), x_label: x_label.into(), y_label: y_label.into(), points });
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(path.display().to_string(), e)
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.case.clone(),
            r.quantity.clone(),
            num(r.value),
            opt(r.reference),
            opt(r.error),
            opt(r.tolerance),
            r.pass.to_string(),
        ])?;
    }
    w.flush().map_err(io(path))?;
    Ok(())
}

/// Writes `results.csv`, `report.json` and `plotdata/*.dat` under `dir`.
pub fn write_all(dir: &Path, cfg: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    fs::create_dir_all(dir.join("plotdata")).map_err(io(dir))?;
    write_csv(&dir.join("results.csv"), &outcome.rows)?;
    let failures: Vec<&ResultRow> = outcome.rows.iter().filter(|r| !r.pass).collect();
    let report = json!({
        "schema": SCHEMA,
        "experiment": outcome.experiment,
        "config": cfg,
        "passed": outcome.passed(),
        "rows": outcome.rows.len(),
        "failures": failures,
        "plots": outcome.plots.iter().map(|p| format!("plotdata/{}.dat", p.name)).collect::<Vec<_>>(),
        "extras": outcome.extras,
    });
    let path = dir.join("report.json");
    fs::write(&path, serde_json::to_string_pretty(&report)? + "\n").map_err(io(&path))?;
    for plot in &outcome.plots {
        let path = dir.join("plotdata").join(format!("{}.dat", plot.name));
        let mut text = format!("# {} {}\n", plot.x_label, plot.y_label);
        for (x, y) in &plot.points {
            text.push_str(&format!("{} {}\n", num(*x), num(*y)));
        }
        fs::write(&path, text).map_err(io(&path))?;
    }
    Ok(())
}

/// Machine-readable record of a failed run.
pub fn error_record(experiment: Option<&str>, err: &CliError) -> Value {
    json!({
        "schema": SCHEMA,
        "experiment": experiment,
        "error": { "kind": err.kind(), "message": err.to_string() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_stable() {
        let mut o = Outcome::new("demo");
        o.gate("p=3", "phi", 0.5, Some(0.5), 1e-17, 1e-8);
        o.report("p=3", "time-free", 2.0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_csv(&path, &o.rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "experiment,case,quantity,value,reference,error,tolerance,pass\n\
             demo,p=3,phi,5e-1,5e-1,1e-17,1e-8,true\n\
             demo,p=3,time-free,2e0,,,,true\n"
        );
        assert!(o.passed());
        o.check("x", "flag", 0.0, false);
        assert!(!o.passed());
    }
}
