//! Schwartz seminorms on both sides, Paley-Wiener type and support
//! certification, and the cutoff decomposition of the K-type Paley-Wiener
//! theorem.
//!
//! The Laplace-Beltrami operator and the Casimir of K act spectrally:
//! `Delta` multiplies `H f(nu)` by `nu^2 - rho^2` and the Casimir multiplies
//! a degree-`l` harmonic by `-l(l + p - 2)`.

mod cutoff;
mod paley_wiener;

pub use cutoff::{
    cutoff_decompose, cutoff_omega, cutoff_omega_derivatives, guard_report, CutoffOutcome, CutoffSpec, GuardReport,
    EVENNESS_TOLERANCE, INPUT_SYMMETRY_TOLERANCE, JET_ORDER,
};
pub use paley_wiener::{
    exponential_type, fourier_type, helgason_type, ray_grid, spectral_rays, support_estimate, PWReport, RaySamples,
    RAY_OFFSETS, WEIGHT_ORDERS,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::ktypes::{boundary_laplacian_eigenvalue, eval_harmonic, BoundaryGrid, Harmonic};
use crate::numerics::{real, Complex};
use crate::spherical::spherical_profile;
use crate::transforms::{
    euclid_fourier, euclid_inverse, helgason_fourier, inverse_helgason, CalibrationRecord, GridSpec, SpatialFunction,
    SpectralFunction, SpectralGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Spatial,
    Spectral,
}

/// One seminorm: `sigma^p_{D,E,N}` on the spatial side or `tau^eps_{P,E,N}`
/// on the spectral side, with `D, E` powers of `Delta` and of the Casimir.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormSpec {
    pub side: Side,
    /// `L^p` exponent in `(0, 2]` (spatial side).
    pub lp: f64,
    /// Tube parameter (spectral side).
    pub epsilon: f64,
    pub n: i32,
    pub laplace_power: u32,
    pub casimir_power: u32,
    /// Coefficients of `P` in powers of `d/dnu` (spectral side).
    pub poly: Vec<f64>,
}

impl SeminormSpec {
    pub fn spatial(lp: f64, n: i32, laplace_power: u32, casimir_power: u32) -> Self {
        SeminormSpec { side: Side::Spatial, lp, epsilon: 2.0 / lp - 1.0, n, laplace_power, casimir_power, poly: vec![1.0] }
    }

    pub fn spectral(epsilon: f64, n: i32, poly: Vec<f64>, casimir_power: u32) -> Self {
        SeminormSpec {
            side: Side::Spectral,
            lp: 2.0 / (1.0 + epsilon),
            epsilon,
            n,
            laplace_power: 0,
            casimir_power,
            poly,
        }
    }

    /// `d^k / dnu^k`.
    pub fn derivative(epsilon: f64, n: i32, k: usize) -> Self {
        let mut poly = vec![0.0; k + 1];
        poly[k] = 1.0;
        Self::spectral(epsilon, n, poly, 0)
    }
}

/// A grid supremum and the bound reported for the part of the domain the
/// grid does not reach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Grids and constants needed to move `Delta` to the spectral side.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralContext {
    pub grids: GridSpec,
    pub calibration: CalibrationRecord,
}

fn sample_directions(p: usize, lmax: usize) -> Result<Vec<Vec<f64>>> {
    let mut pts = BoundaryGrid::new(p, (2 * lmax).max(4))?.points;
    pts.push(crate::geometry::north(p));
    Ok(pts)
}

// Casimir eigenvalue of a harmonic raised to `power`.
fn casimir_factor(p: usize, h: &Harmonic, power: u32) -> f64 {
    boundary_laplacian_eigenvalue(p, h.degree).powi(power as i32)
}

/// `sup (1 + t)^N phi_0(a_t)^{-2/p} |Delta^a Omega^b f|` over the radial grid
/// and a set of boundary directions.
pub fn spatial_seminorm(f: &SpatialFunction, spec: &SeminormSpec, ctx: Option<&SpectralContext>) -> Result<SeminormValue> {
    if spec.side != Side::Spatial {
        return Err(HyperError::SpecMismatch("spatial seminorm needs a spatial spec".into()));
    }
    if !(spec.lp > 0.0 && spec.lp <= 2.0) {
        return Err(HyperError::SpecMismatch(format!("L^p exponent {} outside (0, 2]", spec.lp)));
    }
    let p = f.mp.p;
    let mut g = f.clone();
    if spec.laplace_power > 0 {
        let ctx = ctx.ok_or_else(|| HyperError::SpecMismatch("powers of Delta need the spectral grids".into()))?;
        let mut psi = helgason_fourier(f, &ctx.grids.spectral)?;
        let rho2 = f.mp.rho * f.mp.rho;
        let factors: Vec<Complex> =
            psi.nus.iter().map(|nu| (nu * nu - rho2).powi(spec.laplace_power as i32)).collect();
        for vals in psi.coeffs.values_mut() {
            for (v, m) in vals.iter_mut().zip(&factors) {
                *v *= m;
            }
        }
        g = inverse_helgason(&psi, &ctx.grids.radial, &ctx.calibration)?;
    }
    for (h, vals) in g.coeffs.iter_mut() {
        let m = casimir_factor(p, h, spec.casimir_power);
        for v in vals.iter_mut() {
            *v *= m;
        }
    }
    let nodes = g.grid.nodes();
    let phi0 = spherical_profile(real(0.0), &nodes, &f.mp)?;
    let dirs = sample_directions(p, g.max_degree())?;
    let weight = |k: usize| (1.0 + nodes[k]).powi(spec.n) * phi0[k].re.powf(-2.0 / spec.lp);
    let mut value: f64 = 0.0;
    let mut end: f64 = 0.0;
    let tail_start = nodes.len() - nodes.len() / 20;
    let coeffs: Vec<(&Vec<Complex>, Vec<Complex>)> =
        g.coeffs.iter().map(|(h, vals)| (vals, dirs.iter().map(|omega| eval_harmonic(*h, omega)).collect())).collect();
    for k in 0..nodes.len() {
        let mut m: f64 = 0.0;
        for d in 0..dirs.len() {
            let v: Complex = coeffs.iter().map(|(vals, ys)| vals[k] * ys[d]).sum();
            m = m.max(v.norm());
        }
        let w = weight(k) * m;
        value = value.max(w);
        if k >= tail_start {
            end = end.max(w);
        }
    }
    let tail_bound = match f.support {
        Some(r) if r < g.grid.t_max && spec.laplace_power == 0 => 0.0,
        _ => end,
    };
    Ok(SeminormValue { value, tail_bound })
}

// d/dnu = -i d/dlambda along a line, by fourth-order central differences
// (second order at the two ends).
fn nu_derivative(vals: &[Complex], step: f64) -> Vec<Complex> {
    let n = vals.len();
    let mut out = vec![real(0.0); n];
    for k in 0..n {
        let d = if k >= 2 && k + 2 < n {
            (vals[k - 2] - vals[k - 1] * 8.0 + vals[k + 1] * 8.0 - vals[k + 2]) / (12.0 * step)
        } else if k == 0 {
            (vals[0] * -3.0 + vals[1] * 4.0 - vals[2]) / (2.0 * step)
        } else if k + 1 == n {
            (vals[n - 1] * 3.0 - vals[n - 2] * 4.0 + vals[n - 3]) / (2.0 * step)
        } else {
            (vals[k + 1] - vals[k - 1]) / (2.0 * step)
        };
        out[k] = d * Complex::new(0.0, -1.0);
    }
    out
}

/// `sup (1 + |nu|)^N |P(d/dnu) E psi(nu, b)|` over the sampled tube lines and
/// a set of boundary directions.
pub fn spectral_seminorm(psi: &SpectralFunction, spec: &SeminormSpec) -> Result<SeminormValue> {
    if spec.side != Side::Spectral {
        return Err(HyperError::SpecMismatch("spectral seminorm needs a spectral spec".into()));
    }
    let sigma = spec.epsilon * psi.mp.rho;
    let wanted: Vec<f64> = if sigma > 0.0 { vec![-sigma, 0.0, sigma] } else { vec![0.0] };
    let mut lines = Vec::new();
    for s in &wanted {
        lines.push(psi.grid.line(*s).ok_or(HyperError::InsufficientTube(spec.epsilon))?);
    }
    let p = psi.mp.p;
    let step = psi.grid.step();
    let lmax = psi.coeffs.keys().map(|h| h.degree).max().unwrap_or(0);
    let dirs = sample_directions(p, lmax)?;
    let (mut value, mut end): (f64, f64) = (0.0, 0.0);
    for range in lines {
        let nus = &psi.nus[range.clone()];
        let mut applied: BTreeMap<Harmonic, Vec<Complex>> = BTreeMap::new();
        for (h, vals) in &psi.coeffs {
            let m = casimir_factor(p, h, spec.casimir_power);
            let mut deriv: Vec<Complex> = vals[range.clone()].iter().map(|v| v * m).collect();
            let mut total = vec![real(0.0); deriv.len()];
            for (k, a) in spec.poly.iter().enumerate() {
                if k > 0 {
                    deriv = nu_derivative(&deriv, step);
                }
                for (t, d) in total.iter_mut().zip(&deriv) {
                    *t += d * *a;
                }
            }
            applied.insert(*h, total);
        }
        let tail_start = nus.len() - nus.len() / 20;
        for (k, nu) in nus.iter().enumerate() {
            let mut m: f64 = 0.0;
            for omega in &dirs {
                let v: Complex = applied.iter().map(|(h, vals)| vals[k] * eval_harmonic(*h, omega)).sum();
                m = m.max(v.norm());
            }
            let w = (1.0 + nu.norm()).powi(spec.n) * m;
            value = value.max(w);
            if k >= tail_start {
                end = end.max(w);
            }
        }
    }
    Ok(SeminormValue { value, tail_bound: end })
}

/// A spatial seminorm and the spectral expression dominating it:
/// `sum_{k <= derivatives} tau(d^k/dnu^k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuitySpec {
    pub spatial: SeminormSpec,
    pub spectral_n: i32,
    pub derivatives: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub function: String,
    pub spatial: f64,
    pub spectral: f64,
    pub ratio: f64,
}

/// Ratios `sigma(f) / dominating(H f)` across a family of functions.
pub fn continuity_report(
    family: &[(String, SpatialFunction)],
    spec: &ContinuitySpec,
    grid: &SpectralGrid,
) -> Result<Vec<ContinuityRow>> {
    use rayon::prelude::*;
    family
        .par_iter()
        .map(|(name, f)| {
            let spatial = spatial_seminorm(f, &spec.spatial, None)?.value;
            let tube = grid.clone().with_tube(spec.spatial.epsilon * f.mp.rho);
            let psi = helgason_fourier(f, &tube)?;
            let mut spectral = 0.0;
            for k in 0..=spec.derivatives {
                spectral += spectral_seminorm(&psi, &SeminormSpec::derivative(spec.spatial.epsilon, spec.spectral_n, k))?.value;
            }
            Ok(ContinuityRow { function: name.clone(), spatial, spectral, ratio: spatial / spectral })
        })
        .collect()
}

/// Relative difference between `H f` on the line `Re nu = sigma` and the
/// contour shift `F(e^{-sigma t} F^{-1} H f(i .))` computed from the real line.
pub fn tube_residual(f: &SpatialFunction, sigma: f64, grid: &SpectralGrid) -> Result<f64> {
    let real_line = SpectralGrid::symmetric(grid.lambda_max, grid.intervals, vec![0.0]);
    let shifted_line = SpectralGrid::symmetric(grid.lambda_max, grid.intervals, vec![sigma]);
    let direct = helgason_fourier(f, &shifted_line)?;
    let abel = euclid_inverse(&helgason_fourier(f, &real_line)?, 0.0, &f.grid)?;
    let shifted = euclid_fourier(&abel, &shifted_line)?;
    let scale = direct.max_abs().max(1e-300);
    let mut worst: f64 = 0.0;
    for (h, vals) in &direct.coeffs {
        let other = shifted.values(*h).ok_or_else(|| HyperError::NonFinite(format!("{h:?} missing")))?;
        for (a, b) in vals.iter().zip(other) {
            worst = worst.max((a - b).norm() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;
