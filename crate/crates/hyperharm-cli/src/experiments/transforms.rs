use hyperharm::ktypes::{basis, Harmonic, KTypeIndex};
use hyperharm::numerics::{c, Complex};
use hyperharm::transforms::{
    bump_family, calibrate_plancherel, delta_spherical, euclid_fourier, generalized_abel, helgason_fourier,
    inverse_delta_spherical, inverse_helgason, radon, spectral_energy, Bump, CalibrationRecord, GridSpec, RadialGrid,
    SpatialFunction, SpectralGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{harmonic_name, model, relative_l2, source_harmonic};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Outcome;

const HELGASON_DIAGRAM_TOLERANCE: f64 = 1e-6;
const DELTA_DIAGRAM_TOLERANCE: f64 = 1e-7;
const ROUNDTRIP_TOLERANCE: f64 = 1e-3;
const PLANCHEREL_TOLERANCE: f64 = 1e-3;
const DELTA_SUM_TOLERANCE: f64 = 1e-6;
const CONSTANT_AGREEMENT_TOLERANCE: f64 = 1e-6;

fn diagram_harmonics(p: usize) -> Vec<Harmonic> {
    match p {
        2 => vec![Harmonic::mode(0), Harmonic::mode(1), Harmonic::mode(-1), Harmonic::mode(2), Harmonic::mode(-2)],
        _ => vec![Harmonic::new(0, 0), Harmonic::new(1, 0), Harmonic::new(1, 1), Harmonic::new(2, -1), Harmonic::new(2, 2)],
    }
}

/// `H = F o R` and `H^delta = F o T` on bumps.
pub fn diagram(cfg: &RunConfig, out: &mut Outcome) -> Result<(), CliError> {
    let spec = cfg.grids(RadialGrid::new(4.0, 1024), SpectralGrid::symmetric(12.0, 48, vec![0.0, 0.3]));
    for p in cfg.ktype_dimensions() {
        let mp = model(p)?;
        for radius in cfg.radii_or(&[2.0]) {
            for h in diagram_harmonics(p) {
                let f = Bump::Smooth { radius }.spatial(mp, spec.radial, h)?;
                let direct = helgason_fourier(&f, &spec.spectral)?;
                let via = euclid_fourier(&radon(&f)?, &spec.spectral)?;
                let err = relative_l2(direct.values(h).unwrap_or(&[]), via.values(h).unwrap_or(&[]));
                out.gate(format!("p={p} R={radius} {}", harmonic_name(&h)), "|Hf - F(Rf)| / |Hf|", err, None, err, HELGASON_DIAGRAM_TOLERANCE);
            }
            for label in cfg.ktype_labels(p, if p == 2 { &[0, 1, -2] } else { &[0, 1, 2] }) {
                let (delta, h) = source_harmonic(p, label)?;
                let f = Bump::Smooth { radius }.spatial(mp, spec.radial, h)?;
                let hd = delta_spherical(&f, &delta, &spec.spectral)?;
                let ft = euclid_fourier(&generalized_abel(&f, &delta)?, &spec.spectral)?;
                let a: Vec<Complex> = hd.rows.iter().flatten().cloned().collect();
                let b: Vec<Complex> = delta
                    .matrix_basis()
                    .iter()
                    .flat_map(|hm| ft.values(*hm).map(|v| v.to_vec()).unwrap_or_else(|| vec![c(0.0, 0.0); hd.nus.len()]))
                    .collect();
                let err = relative_l2(&a, &b);
                out.gate(format!("p={p} R={radius} delta={delta}"), "|H^d f - F(Tf)| / |H^d f|", err, None, err, DELTA_DIAGRAM_TOLERANCE);
            }
        }
    }
    Ok(())
}

fn default_spec(cfg: &RunConfig) -> GridSpec {
    cfg.grids(RadialGrid::default(), SpectralGrid::default())
}

fn roundtrip_error(f: &SpatialFunction, spec: &GridSpec, cal: &CalibrationRecord) -> Result<f64, CliError> {
    let back = inverse_helgason(&helgason_fourier(f, &spec.spectral)?, &spec.radial, cal)?;
    Ok(back.relative_l2_error(f)?)
}

/// Inversion round trips at the default grids and their convergence in
/// `Lambda_max` at fixed spectral step.
pub fn roundtrip(cfg: &RunConfig, out: &mut Outcome, verbose: bool) -> Result<(), CliError> {
    let spec = default_spec(cfg);
    for p in cfg.ktype_dimensions() {
        let mp = model(p)?;
        let cal = calibrate_plancherel(&mp, &spec)?.record;
        for radius in cfg.radii_or(&[1.0, 2.0, 4.0]) {
            let f = Bump::Smooth { radius }.spatial(mp, spec.radial, Harmonic::constant())?;
            let err = roundtrip_error(&f, &spec, &cal)?;
            out.gate(format!("p={p} R={radius} Y(0,0)"), "relative L2 error", err, None, err, ROUNDTRIP_TOLERANCE);
        }
        for label in cfg.ktype_labels(p, if p == 2 { &[1, -2] } else { &[1, 2] }) {
            let (delta, h) = source_harmonic(p, label)?;
            let f = Bump::Smooth { radius: 2.0 }.spatial(mp, spec.radial, h)?;
            let back = inverse_delta_spherical(&delta_spherical(&f, &delta, &spec.spectral)?, &spec.radial, &cal)?;
            let err = back.relative_l2_error(&f)?;
            out.gate(format!("p={p} R=2 delta={delta}"), "relative L2 error", err, None, err, ROUNDTRIP_TOLERANCE);
        }
        let step = spec.spectral.step();
        let lambdas = [16.0, 32.0, 64.0, 128.0];
        let mut table: Vec<Vec<f64>> = Vec::new();
        let radii = [1.0, 2.0];
        for lam in lambdas {
            let trial = GridSpec {
                radial: spec.radial,
                spectral: SpectralGrid { lambda_max: lam, intervals: (lam / step).round() as usize, ..spec.spectral.clone() },
            };
            let cal = calibrate_plancherel(&mp, &trial)?.record;
            let mut row = Vec::new();
            for radius in radii {
                let f = Bump::Smooth { radius }.spatial(mp, trial.radial, Harmonic::constant())?;
                let err = roundtrip_error(&f, &trial, &cal)?;
                out.report(format!("p={p} R={radius} lambda_max={lam}"), "relative L2 error", err);
                row.push(err);
            }
            if verbose {
                eprintln!("p={p} lambda_max={lam}: {row:?}");
            }
            table.push(row);
        }
        for (j, radius) in radii.iter().enumerate() {
            let monotone = table.windows(2).all(|w| w[1][j] < w[0][j]);
            out.check(format!("p={p} R={radius}"), "error decreases as lambda_max doubles", table.len() as f64, monotone);
        }
        out.plot(
            &format!("roundtrip-convergence-p{p}"),
            "lambda_max",
            "relative_l2_error_R2",
            lambdas.iter().zip(&table).map(|(l, r)| (*l, r[1])).collect(),
        );
    }
    Ok(())
}

fn delta_ratio(f: &SpatialFunction, delta: &KTypeIndex, spec: &GridSpec, cal: &CalibrationRecord) -> Result<f64, CliError> {
    let hd = delta_spherical(f, delta, &spec.spectral)?;
    // sum_delta (C / d) int ||H^delta f||_HS^2 |c|^-2 per type.
    Ok(cal.constant_plancherel * spectral_energy(&hd.to_spectral())? / f.norm_sq()?)
}

/// Held-out Plancherel ratios per `(p, delta)` and the sum over K-types.
pub fn plancherel(cfg: &RunConfig, out: &mut Outcome) -> Result<(), CliError> {
    let spec = default_spec(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for p in cfg.ktype_dimensions() {
        let mp = model(p)?;
        let outcome = calibrate_plancherel(&mp, &spec)?;
        let cal = outcome.record.clone();
        out.report(format!("p={p}"), "plancherel constant", cal.constant_plancherel);
        for (id, r) in &outcome.held_out {
            out.gate(format!("p={p} delta=0 {id}"), "plancherel ratio", *r, Some(1.0), (r - 1.0).abs(), PLANCHEREL_TOLERANCE);
        }
        for label in cfg.ktype_labels(p, if p == 2 { &[1, -1, 2] } else { &[1, 2] }) {
            let (delta, h) = source_harmonic(p, label)?;
            if delta.is_trivial() {
                continue;
            }
            for bump in bump_family() {
                let f = bump.spatial(mp, spec.radial, h)?;
                let r = delta_ratio(&f, &delta, &spec, &cal)?;
                out.gate(format!("p={p} delta={delta} {}", bump.id()), "plancherel ratio", r, Some(1.0), (r - 1.0).abs(), PLANCHEREL_TOLERANCE);
            }
        }
        // A function spread over every K-type of degree <= 4.
        let family = bump_family();
        let mut f = SpatialFunction::zero(mp, spec.radial);
        for (k, hm) in basis(p, 4).into_iter().enumerate() {
            let g = family[k % family.len()].spatial(mp, spec.radial, hm)?;
            f = f.add_scaled(&g, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))?;
        }
        let full = spectral_energy(&helgason_fourier(&f, &spec.spectral)?)?;
        let labels: Vec<i64> = if p == 2 { (-4..=4).collect() } else { (0..=4).collect() };
        let mut sum = 0.0;
        for label in labels {
            let delta = KTypeIndex::new(p, label)?;
            sum += spectral_energy(&delta_spherical(&f, &delta, &spec.spectral)?.to_spectral())?;
        }
        let err = (sum / full - 1.0).abs();
        out.gate(format!("p={p} l<=4"), "delta-sum / full Plancherel", sum / full, Some(1.0), err, DELTA_SUM_TOLERANCE);
    }
    Ok(())
}

/// Calibration records per dimension, with their held-out spread.
pub fn calibrate(cfg: &RunConfig, out: &mut Outcome) -> Result<(), CliError> {
    let spec = default_spec(cfg);
    let mut records = Vec::new();
    for p in cfg.dimensions(&[2, 3, 4, 5, 6, 7]) {
        let mp = model(p)?;
        let outcome = calibrate_plancherel(&mp, &spec)?;
        let rec = &outcome.record;
        out.report(format!("p={p}"), "inversion constant", rec.constant_inversion);
        out.report(format!("p={p}"), "plancherel constant", rec.constant_plancherel);
        let agreement = (rec.constant_inversion / rec.constant_plancherel - 1.0).abs();
        out.gate(format!("p={p}"), "inversion / plancherel constant", rec.constant_inversion / rec.constant_plancherel, Some(1.0), agreement, CONSTANT_AGREEMENT_TOLERANCE);
        out.gate(format!("p={p}"), "held-out ratio spread", outcome.spread(), None, outcome.spread(), PLANCHEREL_TOLERANCE);
        if p == 3 {
            let want = 1.0 / (2.0 * std::f64::consts::PI.powi(2));
            out.gate("p=3", "inversion constant vs 1/(2 pi^2)", rec.constant_inversion, Some(want), (rec.constant_inversion / want - 1.0).abs(), CONSTANT_AGREEMENT_TOLERANCE);
        }
        records.push(json!({ "record": rec, "held-out": outcome.held_out }));
    }
    out.extras.insert("calibration".into(), json!(records));
    Ok(())
}
