use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{CalibrationRecord, GridSpec, RadialGrid, RadonFunction, SpatialFunction, SpectralFunction, SpectralGrid};
use crate::error::{HyperError, Result};
use crate::ktypes::Harmonic;
use crate::numerics::{c, integrate, real, Complex, QuadratureRule};
use crate::spherical::{eisenstein_radial_profile, plancherel_density};

/// Spectral samples summed per block before the blocks are combined in
/// order, so results do not depend on the worker count.
const BLOCK: usize = 32;

/// Relative size of the weighted integrand allowed at the end of the grid.
const DECAY_TOLERANCE: f64 = 1e-10;

// Number of radial intervals carrying the function, padded so that the end
// corrections of the rule only touch zeros and the transform stays linear.
fn active_intervals(f: &SpatialFunction) -> usize {
    match f.support {
        Some(r) => (f.grid.intervals_to(r) + 32).min(f.grid.intervals),
        None => f.grid.intervals,
    }
}

fn check_decay(f: &SpatialFunction, sigma: f64) -> Result<()> {
    if f.support.is_some() {
        return Ok(());
    }
    let nodes = f.grid.nodes();
    let growth = |t: f64| (t * (sigma.abs() + f.mp.rho)).exp();
    for (h, vals) in &f.coeffs {
        let weighted: Vec<f64> = nodes.iter().zip(vals).map(|(t, v)| v.norm() * growth(*t)).collect();
        let peak = weighted.iter().cloned().fold(0.0, f64::max);
        let tail = weighted[weighted.len() - 4..].iter().cloned().fold(0.0, f64::max);
        if tail > DECAY_TOLERANCE * peak.max(1e-300) {
            return Err(HyperError::DivergentWeight(format!(
                "{h:?}: weighted tail {tail:.3e} against peak {peak:.3e} at Re nu = {sigma}"
            )));
        }
    }
    Ok(())
}

fn group_by_degree<'a, V>(coeffs: &'a BTreeMap<Harmonic, V>) -> BTreeMap<usize, Vec<(&'a Harmonic, &'a V)>> {
    let mut out: BTreeMap<usize, Vec<(&Harmonic, &V)>> = BTreeMap::new();
    for (h, v) in coeffs {
        out.entry(h.degree).or_default().push((h, v));
    }
    out
}

/// `f^(nu, b) = int_X f(x) e^{(-nu + rho) A(x, b)} dx` on every sample of
/// `grid`; per harmonic this is `|S^{p-1}| int f_h(t) phi_{-nu,l}(t) sinh^n t dt`.
pub fn helgason_fourier(f: &SpatialFunction, grid: &SpectralGrid) -> Result<SpectralFunction> {
    for s in &grid.offsets {
        check_decay(f, *s)?;
    }
    let mp = f.mp;
    let m = active_intervals(f);
    let rule = f.grid.partial_rule(m);
    let nodes: Vec<f64> = f.grid.nodes()[..=m].to_vec();
    let weights: Vec<f64> = nodes.iter().map(|t| mp.sphere_area() * t.sinh().powi(mp.n as i32)).collect();
    let nus = grid.nus();
    let mut out = SpectralFunction::zero(mp, grid.clone());
    for (degree, members) in group_by_degree(&f.coeffs) {
        let per_nu: Vec<Vec<Complex>> = nus
            .par_iter()
            .map(|nu| -> Result<Vec<Complex>> {
                let kernel = eisenstein_radial_profile(-nu, degree, &nodes, &mp)?;
                members
                    .iter()
                    .map(|(_, vals)| {
                        let samples: Vec<Complex> =
                            (0..=m).map(|k| vals[k] * kernel[k] * weights[k]).collect();
                        integrate(&rule, &samples)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (j, (h, _)) in members.iter().enumerate() {
            out.coeffs.insert(**h, per_nu.iter().map(|row| row[j]).collect());
        }
    }
    Ok(out)
}

// Samples with `Re nu = 0, lambda >= 0`, and the rule integrating an even
// integrand over `[0, lambda_max]` through them.
pub(crate) fn half_line(grid: &SpectralGrid) -> Result<(Vec<usize>, Vec<f64>, QuadratureRule)> {
    let range = grid
        .line(0.0)
        .ok_or_else(|| HyperError::InvalidParameter("inversion needs the line Re nu = 0".into()))?;
    let lams = grid.lambdas();
    let idx: Vec<usize> = range.filter(|i| lams[i % lams.len()] >= 0.0).collect();
    let lam: Vec<f64> = idx.iter().map(|i| lams[i % lams.len()]).collect();
    Ok((idx, lam, QuadratureRule::trapezoid(grid.intervals, 0.0, grid.lambda_max)))
}

/// `sum_k w_k g_k(t)` over spectral samples with a fixed summation order.
pub(crate) fn spectral_sum(
    count: usize,
    len: usize,
    term: impl Fn(usize) -> Result<Vec<Complex>> + Sync,
) -> Result<Vec<Complex>> {
    let blocks: Vec<Vec<Complex>> = (0..count.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| -> Result<Vec<Complex>> {
            let mut acc = vec![real(0.0); len];
            for k in b * BLOCK..((b + 1) * BLOCK).min(count) {
                for (a, v) in acc.iter_mut().zip(term(k)?) {
                    *a += v;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![real(0.0); len];
    for block in blocks {
        for (a, v) in total.iter_mut().zip(block) {
            *a += v;
        }
    }
    Ok(total)
}

/// `f_h(t) = int_0^Lambda phi_{i lambda,l}(t) psi_h(i lambda) |c(i lambda)|^{-2} d lambda`,
/// without the inversion constant.
pub fn inverse_helgason_unscaled(psi: &SpectralFunction, radial: &RadialGrid) -> Result<SpatialFunction> {
    let mp = psi.mp;
    let (idx, lam, rule) = half_line(&psi.grid)?;
    let nodes = radial.nodes();
    let density: Vec<f64> = lam.iter().map(|l| plancherel_density(*l, &mp)).collect::<Result<_>>()?;
    let mut out = SpatialFunction::zero(mp, *radial);
    for (degree, members) in group_by_degree(&psi.coeffs) {
        let width = members.len() * nodes.len();
        let flat = spectral_sum(idx.len(), width, |k| {
            let kernel = eisenstein_radial_profile(c(0.0, lam[k]), degree, &nodes, &mp)?;
            let w = rule.weights[k] * density[k];
            let mut row = Vec::with_capacity(width);
            for (_, vals) in &members {
                let coef = vals[idx[k]] * w;
                row.extend(kernel.iter().map(|phi| phi * coef));
            }
            Ok(row)
        })?;
        for (j, (h, _)) in members.iter().enumerate() {
            out.coeffs.insert(**h, flat[j * nodes.len()..(j + 1) * nodes.len()].to_vec());
        }
    }
    Ok(out)
}

/// Inverse Helgason-Fourier transform on the line `Re nu = 0`, scaled by the
/// calibrated inversion constant.
pub fn inverse_helgason(psi: &SpectralFunction, radial: &RadialGrid, cal: &CalibrationRecord) -> Result<SpatialFunction> {
    let spec = GridSpec { radial: *radial, spectral: psi.grid.clone() };
    cal.check(psi.mp.p, &spec)?;
    Ok(inverse_helgason_unscaled(psi, radial)?.scale(real(cal.constant_inversion)))
}

/// `F phi(nu, b) = int_R phi(t, b) e^{-nu t} dt`.
pub fn euclid_fourier(phi: &RadonFunction, grid: &SpectralGrid) -> Result<SpectralFunction> {
    let ts = phi.grid.two_sided_nodes();
    for s in &grid.offsets {
        for (h, vals) in &phi.coeffs {
            let weighted: Vec<f64> = ts.iter().zip(vals).map(|(t, v)| v.norm() * (s.abs() * t.abs()).exp()).collect();
            let peak = weighted.iter().cloned().fold(0.0, f64::max);
            let tail = weighted[..4].iter().chain(&weighted[weighted.len() - 4..]).cloned().fold(0.0, f64::max);
            if tail > DECAY_TOLERANCE * peak.max(1e-300) {
                return Err(HyperError::DivergentWeight(format!("{h:?}: cosh-weighted tail at Re nu = {s}")));
            }
        }
    }
    euclid_fourier_unchecked(phi, grid)
}

// `F phi` on a finite grid without the decay check, for inputs whose tails
// are numerical noise of the size of the data itself (on `Re nu = 0` the
// integral is always finite).
pub(crate) fn euclid_fourier_unchecked(phi: &RadonFunction, grid: &SpectralGrid) -> Result<SpectralFunction> {
    let ts = phi.grid.two_sided_nodes();
    let rule = phi.grid.two_sided_rule();
    let nus = grid.nus();
    let mut out = SpectralFunction::zero(phi.mp, grid.clone());
    for (h, vals) in &phi.coeffs {
        let values: Vec<Complex> = nus
            .par_iter()
            .map(|nu| {
                let samples: Vec<Complex> = ts.iter().zip(vals).map(|(t, v)| v * (-nu * t).exp()).collect();
                integrate(&rule, &samples)
            })
            .collect::<Result<_>>()?;
        out.coeffs.insert(*h, values);
    }
    Ok(out)
}

/// `F^{-1} psi(t, b) = (1/2 pi) int psi(sigma + i lambda, b) e^{(sigma + i lambda) t} d lambda`
/// along the line with offset `sigma` of a symmetric grid.
pub fn euclid_inverse(psi: &SpectralFunction, sigma: f64, radial: &RadialGrid) -> Result<RadonFunction> {
    if !psi.grid.symmetric {
        return Err(HyperError::AsymmetricGrid("the inverse Fourier transform needs lambda on both sides".into()));
    }
    let range = psi
        .grid
        .line(sigma)
        .ok_or_else(|| HyperError::InvalidParameter(format!("no sample line at Re nu = {sigma}")))?;
    let rule = psi.grid.lambda_rule();
    let ts = radial.two_sided_nodes();
    let nus: Vec<Complex> = psi.nus[range.clone()].to_vec();
    let mut out = RadonFunction::zero(psi.mp, *radial);
    for (h, vals) in &psi.coeffs {
        let line = &vals[range.clone()];
        let values = spectral_sum(nus.len(), ts.len(), |k| {
            let w = line[k] * rule.weights[k] / (2.0 * std::f64::consts::PI);
            Ok(ts.iter().map(|t| (nus[k] * t).exp() * w).collect())
        })?;
        out.coeffs.insert(*h, values);
    }
    Ok(out)
}
