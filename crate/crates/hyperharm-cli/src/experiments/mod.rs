//! Experiment drivers, one per command.

mod spectral;
mod support;
mod transforms;

use hyperharm::geometry::ModelParams;
use hyperharm::ktypes::{Harmonic, KTypeIndex};
use hyperharm::numerics::Complex;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Outcome;

pub fn run(name: &str, cfg: &RunConfig, verbose: bool) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(name);
    match name {
        "spherical-table" => spectral::spherical_table(cfg, &mut out)?,
        "c-function" => spectral::c_function(cfg, &mut out)?,
        "diagram" => transforms::diagram(cfg, &mut out)?,
        "roundtrip" => transforms::roundtrip(cfg, &mut out, verbose)?,
        "plancherel" => transforms::plancherel(cfg, &mut out)?,
        "calibrate" => transforms::calibrate(cfg, &mut out)?,
        "paley-wiener" => support::paley_wiener(cfg, &mut out)?,
        "symmetry-check" => support::symmetry_check(cfg, &mut out)?,
        "seminorm-report" => support::seminorm_report(cfg, &mut out)?,
        "cutoff" => support::cutoff(cfg, &mut out)?,
        other => return Err(CliError::Config(format!("unknown experiment {other}"))),
    }
    Ok(out)
}

fn model(p: usize) -> Result<ModelParams, CliError> {
    Ok(ModelParams::new(p)?)
}

/// A representative harmonic of the K-type with this label, as carried by
/// functions of that type.
fn source_harmonic(p: usize, label: i64) -> Result<(KTypeIndex, Harmonic), CliError> {
    let delta = KTypeIndex::new(p, label)?;
    let h = delta.source_harmonics()[0];
    Ok((delta, h))
}

fn harmonic_name(h: &Harmonic) -> String {
    format!("Y({},{})", h.degree, h.order)
}

/// Relative Euclidean distance between two sample vectors.
fn relative_l2(a: &[Complex], b: &[Complex]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    (num / den.max(1e-300)).sqrt()
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}
