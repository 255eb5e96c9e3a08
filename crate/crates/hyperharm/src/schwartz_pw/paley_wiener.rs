use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::geometry::ModelParams;
use crate::numerics::Complex;
use crate::transforms::{
    euclid_fourier, helgason_fourier, RadonFunction, SpatialFunction, SpectralFunction, SpectralGrid,
};

/// Ray offsets, in units of `rho`, used by the exponential-type fit.
pub const RAY_OFFSETS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
/// Polynomial weights `(1 + |lambda|)^N` reported by [`exponential_type`]; the
/// fit uses the largest.
pub const WEIGHT_ORDERS: [i32; 3] = [0, 4, 8];

/// `|psi(sigma + i lambda, .)|` along one line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySamples {
    pub sigma: f64,
    pub nus: Vec<Complex>,
    /// `L^2(B)` norm of `psi(nu, .)` at each sample.
    pub magnitude: Vec<f64>,
}

/// Outcome of the exponential-type fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PWReport {
    /// Least-squares slope of `log S_N(sigma)` in `sigma`.
    pub fitted_type: f64,
    /// `(N, sigma, S_N(sigma))` with `S_N(sigma) = sup_lambda (1 + |lambda|)^N |psi(sigma + i lambda)|`.
    /// The weight uses `|lambda|` rather than `|z|` so that it is the same on
    /// every ray.
    pub sup_values: Vec<(i32, f64, f64)>,
    /// Largest radius where an inverse transform exceeds the reporting threshold, if computed.
    pub support_estimate: Option<f64>,
    /// Symmetry residuals recorded alongside, if computed.
    pub symmetry_residuals: Vec<(String, f64)>,
}

/// Splits a spectral function into rays, one per line offset.
pub fn spectral_rays(psi: &SpectralFunction) -> Vec<RaySamples> {
    let mut out = Vec::new();
    for s in &psi.grid.offsets {
        let range = psi.grid.line(*s).expect("offset from the grid");
        let nus = psi.nus[range.clone()].to_vec();
        let magnitude = range
            .map(|k| psi.coeffs.values().map(|v| v[k].norm_sqr()).sum::<f64>().sqrt())
            .collect();
        out.push(RaySamples { sigma: *s, nus, magnitude });
    }
    out
}

/// Fits `R` in `S_N(sigma) ~ C cosh(R sigma)` by least squares on
/// `log S_N`. The transform carries both exponentials `e^{+-R nu}` from the
/// two ends of the support, so on rays close to the imaginary axis the
/// reflected one is not negligible. With a large weight order the supremum
/// sits at the end of the sampled `lambda` range, where the polynomial
/// factor from the edge of the support is the same on every ray.
pub fn exponential_type(rays: &[RaySamples]) -> Result<PWReport> {
    if rays.len() < 2 {
        return Err(HyperError::InvalidParameter("need at least two rays".into()));
    }
    let mut sup_values = Vec::new();
    for n in WEIGHT_ORDERS {
        for ray in rays {
            let s = ray
                .nus
                .iter()
                .zip(&ray.magnitude)
                .map(|(z, m)| (1.0 + z.im.abs()).powi(n) * m)
                .fold(0.0, f64::max);
            if !s.is_finite() || s <= 0.0 {
                return Err(HyperError::NonFinite(format!("sup at sigma = {} is {s}", ray.sigma)));
            }
            sup_values.push((n, ray.sigma, s));
        }
    }
    let top = *WEIGHT_ORDERS.last().expect("non-empty");
    let points: Vec<(f64, f64)> = sup_values.iter().filter(|(n, _, _)| *n == top).map(|(_, s, v)| (*s, v.ln())).collect();
    Ok(PWReport { fitted_type: fit_cosh_type(&points), sup_values, support_estimate: None, symmetry_residuals: Vec::new() })
}

// Residual of the best constant shift of `log cosh(r sigma)`.
fn cosh_misfit(points: &[(f64, f64)], r: f64) -> f64 {
    let model = |s: f64| (r * s).cosh().ln();
    let shift = points.iter().map(|(s, y)| y - model(*s)).sum::<f64>() / points.len() as f64;
    points.iter().map(|(s, y)| (y - shift - model(*s)).powi(2)).sum()
}

fn fit_cosh_type(points: &[(f64, f64)]) -> f64 {
    // The large-sigma slope bounds the search; scan, then golden section.
    let sigma_max = points.iter().map(|p| p.0).fold(0.0, f64::max);
    let upper = (2.0 * slope(points).abs() + 1.0).max(1.0 / sigma_max);
    let scan = 400;
    let best = (0..=scan)
        .map(|k| upper * k as f64 / scan as f64)
        .min_by(|a, b| cosh_misfit(points, *a).total_cmp(&cosh_misfit(points, *b)))
        .expect("non-empty scan");
    let h = upper / scan as f64;
    let (mut a, mut b) = ((best - h).max(0.0), best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if cosh_misfit(points, x1) < cosh_misfit(points, x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    0.5 * (a + b)
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Rays of the Helgason transform at offsets `RAY_OFFSETS * rho`.
pub fn ray_grid(mp: &ModelParams, lambda_max: f64, intervals: usize) -> SpectralGrid {
    SpectralGrid {
        lambda_max,
        intervals,
        offsets: RAY_OFFSETS.iter().map(|k| k * mp.rho).collect(),
        symmetric: false,
    }
}

/// Exponential type of `H f`.
pub fn helgason_type(f: &SpatialFunction, lambda_max: f64, intervals: usize) -> Result<PWReport> {
    let psi = helgason_fourier(f, &ray_grid(&f.mp, lambda_max, intervals))?;
    exponential_type(&spectral_rays(&psi))
}

/// Exponential type of `F phi`.
pub fn fourier_type(phi: &RadonFunction, lambda_max: f64, intervals: usize) -> Result<PWReport> {
    let psi = euclid_fourier(phi, &ray_grid(&phi.mp, lambda_max, intervals))?;
    exponential_type(&spectral_rays(&psi))
}

/// Largest grid radius where `|f|` exceeds `threshold * max |f|`.
pub fn support_estimate(f: &SpatialFunction, threshold: f64) -> f64 {
    let nodes = f.grid.nodes();
    let peak = f.coeffs.values().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let mut radius: f64 = 0.0;
    for vals in f.coeffs.values() {
        for (t, v) in nodes.iter().zip(vals) {
            if v.norm() > threshold * peak {
                radius = radius.max(*t);
            }
        }
    }
    radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktypes::Harmonic;
    use crate::transforms::{radon, Bump, RadialGrid};

    #[test]
    fn constant_has_type_zero() {
        let rays: Vec<RaySamples> = RAY_OFFSETS
            .iter()
            .map(|s| {
                let nus: Vec<Complex> = (0..=64).map(|k| Complex::new(*s, k as f64)).collect();
                RaySamples { sigma: *s, magnitude: vec![1.0; nus.len()], nus }
            })
            .collect();
        assert!(exponential_type(&rays).unwrap().fitted_type.abs() < 1e-2);
    }

    #[test]
    fn bump_types_match_support() {
        let mp = ModelParams::new(3).unwrap();
        let grid = RadialGrid::new(6.0, 1536);
        for radius in [1.0, 2.0, 4.0] {
            let f = Bump::Poly { radius, power: 3 }.spatial(mp, grid, Harmonic::constant()).unwrap();
            let r = helgason_type(&f, 64.0, 64).unwrap().fitted_type;
            assert!((r / radius - 1.0).abs() < 0.05, "R = {radius}: {r}");
            let rf = radon(&f).unwrap();
            let r = fourier_type(&rf, 64.0, 64).unwrap().fitted_type;
            assert!((r / radius - 1.0).abs() < 0.05, "Radon R = {radius}: {r}");
        }
    }
}
