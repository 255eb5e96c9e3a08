use hyperharm::numerics::{c, real, Complex};
use hyperharm::spherical::{eisenstein_radial_quadrature, harish_chandra_c, plancherel_density, spherical_fn};
use rayon::prelude::*;

use super::{least_squares_slope, model};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Outcome;

const ORACLE_TOLERANCE: f64 = 1e-8;
const ENVELOPE_CONSTANT_MAX: f64 = 10.0;
/// The constant grows with `rho`; the bound of 10 is gated through `p = 4`.
const ENVELOPE_GATED_DIMENSION: usize = 4;
const C_SLOPE_TOLERANCE: f64 = 0.1;

/// Hypergeometric spherical functions against boundary quadrature, and the
/// closed form on `H^3`.
pub fn spherical_table(cfg: &RunConfig, out: &mut Outcome) -> Result<(), CliError> {
    let nus = [
        real(0.0),
        c(0.0, 0.5),
        c(0.0, 2.0),
        c(0.0, 7.5),
        c(0.0, 20.0),
        c(0.5, 3.0),
        c(-0.8, 10.0),
        real(1.2),
        c(0.3, -19.9),
    ];
    let ts = [0.1, 0.5, 1.0, 2.5, 5.0, 10.0];
    for p in cfg.dimensions(&[2, 3, 4]) {
        let mp = model(p)?;
        let cases: Vec<(Complex, f64)> = nus.iter().flat_map(|nu| ts.iter().map(move |t| (*nu, *t))).collect();
        // Error measured against the envelope phi_{Re nu}(t) >= |phi_nu(t)|.
        let errors: Vec<f64> = cases
            .par_iter()
            .map(|(nu, t)| -> Result<f64, CliError> {
                let a = spherical_fn(*nu, *t, &mp)?;
                let b = eisenstein_radial_quadrature(*nu, 0, *t, &mp)?;
                let scale = spherical_fn(real(nu.re), *t, &mp)?.re;
                Ok((a - b).norm() / scale)
            })
            .collect::<Result<_, _>>()?;
        let worst = errors.iter().cloned().fold(0.0, f64::max);
        out.gate(format!("p={p} |nu|<=20 t<=10"), "max relative oracle error", worst, None, worst, ORACLE_TOLERANCE);
    }
    if cfg.p.is_none_or(|p| p == 3) {
        let mp = model(3)?;
        let lambdas = cfg.lambdas.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
        for lam in lambdas {
            for k in 1..=10 {
                let t = 0.5 * k as f64;
                let v = spherical_fn(c(0.0, lam), t, &mp)?;
                let want = (lam * t).sin() / (lam * t.sinh());
                out.gate(format!("p=3 lambda={lam} t={t}"), "phi", v.re, Some(want), (v - want).norm(), ORACLE_TOLERANCE);
            }
        }
    }
    Ok(())
}

/// Envelopes of the spherical functions and the growth of the c-function.
pub fn c_function(cfg: &RunConfig, out: &mut Outcome) -> Result<(), CliError> {
    for p in cfg.dimensions(&[2, 3, 4, 5]) {
        let mp = model(p)?;
        let ts: Vec<f64> = (1..=200).map(|k| 0.1 * k as f64).collect();
        let phi0: Vec<f64> = ts.iter().map(|t| Ok(spherical_fn(real(0.0), *t, &mp)?.re)).collect::<Result<_, CliError>>()?;
        let below = ts.iter().zip(&phi0).filter(|(t, v)| !(**v > (-mp.rho * **t).exp())).count();
        out.check(format!("p={p}"), "lower envelope violations", below as f64, below == 0);
        let constant = ts.iter().zip(&phi0).map(|(t, v)| v * (mp.rho * t).exp() / (1.0 + t)).fold(0.0, f64::max);
        if p <= ENVELOPE_GATED_DIMENSION {
            out.gate(format!("p={p}"), "fitted envelope constant", constant, None, constant, ENVELOPE_CONSTANT_MAX);
        } else {
            out.report(format!("p={p}"), "fitted envelope constant", constant);
        }
        if p == 3 {
            out.plot("phi0-envelope-p3", "t", "phi_0(t)*exp(rho*t)", ts.iter().zip(&phi0).map(|(t, v)| (*t, v * (mp.rho * t).exp())).collect());
        }
        for epsilon in [0.0, 0.5, 1.0] {
            let sigma = epsilon * mp.rho;
            let mut violations = 0;
            for lam in [0.5, 3.0, 12.0] {
                for t in ts.iter().step_by(5) {
                    let v = spherical_fn(c(sigma, lam), *t, &mp)?.norm();
                    let bound = spherical_fn(real(sigma), *t, &mp)?.re;
                    if v > bound * (1.0 + 1e-12) {
                        violations += 1;
                    }
                }
            }
            out.check(format!("p={p} epsilon={epsilon}"), "|phi_nu| <= phi_Re(nu) violations", violations as f64, violations == 0);
        }
        let points: Vec<(f64, f64)> = (0..50)
            .map(|k| {
                let lam = 10.0 * 10f64.powf(k as f64 / 49.0);
                Ok((lam.ln(), -harish_chandra_c(c(0.0, lam), &mp)?.norm().ln()))
            })
            .collect::<Result<_, CliError>>()?;
        let slope = least_squares_slope(&points);
        let want = mp.n as f64 / 2.0;
        out.gate(format!("p={p} lambda in [10,100]"), "log-log slope of 1/|c|", slope, Some(want), (slope - want).abs(), C_SLOPE_TOLERANCE);
        if p == 3 {
            let density = (1..=400)
                .map(|k| {
                    let lam = 0.05 * k as f64;
                    Ok((lam, plancherel_density(lam, &mp)?))
                })
                .collect::<Result<_, CliError>>()?;
            out.plot("c-density-p3", "lambda", "|c(i*lambda)|^-2", density);
        }
    }
    Ok(())
}
