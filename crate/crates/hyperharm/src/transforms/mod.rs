//! Helgason-Fourier, Radon, classical Fourier, delta-spherical and
//! generalized Abel transforms with their inverses.
//!
//! Functions are stored per boundary harmonic: a spatial function is
//! `f(a_t-polar point (t, omega)) = sum_h f_h(t) Y_h(omega)` and a spectral
//! function is `psi(nu, b) = sum_h psi_h(nu) Y_h(b)`. Funk-Hecke reduces
//! every boundary integral against the bracket kernel to the radial
//! Eisenstein functions `phi_{nu,l}`, so each transform is a family of
//! one-dimensional quadratures.
//!
//! Measures: `dx` is the Riemannian volume `|S^{p-1}| sinh^n t dt db`,
//! `dn` is Lebesgue measure on the horocycle coordinates `R^n`, and `db` the
//! invariant probability measure. With these `H = F o R` holds with unit
//! constant.

mod calibration;
mod delta;
mod fourier;
mod grids;
mod radon;
mod symmetry;

pub use calibration::{
    bump_family, calibrate_plancherel, calibrate_reference, inner, plancherel_ratio, spectral_energy, Bump, CalibrationOutcome,
    CalibrationRecord,
};
pub use delta::{
    delta_spherical, generalized_abel, inverse_delta_spherical, inverse_generalized_abel, project_source,
    DeltaSpectralFunction,
};
pub(crate) use fourier::euclid_fourier_unchecked;
pub use fourier::{euclid_fourier, euclid_inverse, helgason_fourier, inverse_helgason, inverse_helgason_unscaled};
pub use grids::{interpolate_profile, GridSpec, RadialGrid, SpectralGrid};
pub use radon::{radon, radon_geometric, RadonFunction};
pub use symmetry::{check_symmetry, check_symmetry_delta, SymmetryMode, SymmetryReport};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::geometry::{HyperbolicPoint, ModelParams};
use crate::ktypes::{eval_harmonic, Harmonic};
use crate::numerics::{integrate_real, real, Complex};

/// A function on `H^p` sampled on a uniform radial grid, one profile per
/// boundary harmonic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialFunction {
    pub mp: ModelParams,
    pub grid: RadialGrid,
    pub coeffs: BTreeMap<Harmonic, Vec<Complex>>,
    /// Radius beyond which the function vanishes, when known.
    pub support: Option<f64>,
}

impl SpatialFunction {
    pub fn zero(mp: ModelParams, grid: RadialGrid) -> Self {
        SpatialFunction { mp, grid, coeffs: BTreeMap::new(), support: None }
    }

    /// `profile(t) Y_h(omega)`. A profile that vanishes beyond `support` is
    /// cut off exactly there.
    pub fn from_profile(
        mp: ModelParams,
        grid: RadialGrid,
        h: Harmonic,
        profile: impl Fn(f64) -> f64,
        support: Option<f64>,
    ) -> Result<Self> {
        if !h.is_valid(mp.p) {
            return Err(HyperError::InvalidParameter(format!("{h:?} is not a harmonic for p = {}", mp.p)));
        }
        let values = grid
            .nodes()
            .iter()
            .map(|t| if support.is_some_and(|r| *t >= r) { real(0.0) } else { real(profile(*t)) })
            .collect();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(h, values);
        Ok(SpatialFunction { mp, grid, coeffs, support })
    }

    pub fn profile(&self, h: Harmonic) -> Option<&[Complex]> {
        self.coeffs.get(&h).map(|v| v.as_slice())
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.keys().map(|h| h.degree).max().unwrap_or(0)
    }

    /// Value at a point, interpolating each profile.
    pub fn eval(&self, x: &HyperbolicPoint) -> Result<Complex> {
        let (t, omega) = x.to_polar()?;
        Ok(self
            .coeffs
            .iter()
            .map(|(h, vals)| interpolate_profile(vals, self.grid.step(), t, h.degree) * eval_harmonic(*h, &omega))
            .sum())
    }

    /// `int |f|^2 dx`.
    pub fn norm_sq(&self) -> Result<f64> {
        let rule = self.grid.rule();
        let area = self.mp.sphere_area();
        let mut total = 0.0;
        for vals in self.coeffs.values() {
            let samples: Vec<f64> = self
                .grid
                .nodes()
                .iter()
                .zip(vals)
                .map(|(t, v)| v.norm_sqr() * t.sinh().powi(self.mp.n as i32))
                .collect();
            total += integrate_real(&rule, &samples)?;
        }
        Ok(area * total)
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut out = self.clone();
        for vals in out.coeffs.values_mut() {
            for v in vals.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    /// `self + s other` on a common grid.
    pub fn add_scaled(&self, other: &Self, s: Complex) -> Result<Self> {
        if self.grid != other.grid || self.mp != other.mp {
            return Err(HyperError::InvalidParameter("spatial functions on different grids".into()));
        }
        let mut out = self.clone();
        for (h, vals) in &other.coeffs {
            let entry = out.coeffs.entry(*h).or_insert_with(|| vec![real(0.0); vals.len()]);
            for (a, b) in entry.iter_mut().zip(vals) {
                *a += s * b;
            }
        }
        out.support = match (self.support, other.support) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(out)
    }

    /// `||self - reference|| / ||reference||` in `L^2(dx)`.
    pub fn relative_l2_error(&self, reference: &Self) -> Result<f64> {
        let diff = self.add_scaled(reference, real(-1.0))?;
        Ok((diff.norm_sq()? / reference.norm_sq()?).sqrt())
    }

    /// `max |f_h(t)|` over `t > radius`, relative to the overall maximum.
    pub fn relative_max_beyond(&self, radius: f64) -> f64 {
        let nodes = self.grid.nodes();
        let mut outside: f64 = 0.0;
        let mut overall: f64 = 0.0;
        for vals in self.coeffs.values() {
            for (t, v) in nodes.iter().zip(vals) {
                overall = overall.max(v.norm());
                if *t > radius {
                    outside = outside.max(v.norm());
                }
            }
        }
        if overall == 0.0 {
            0.0
        } else {
            outside / overall
        }
    }
}

/// `psi(nu, b)` on an explicit list of spectral parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFunction {
    pub mp: ModelParams,
    pub grid: SpectralGrid,
    pub nus: Vec<Complex>,
    pub coeffs: BTreeMap<Harmonic, Vec<Complex>>,
}

impl SpectralFunction {
    pub fn zero(mp: ModelParams, grid: SpectralGrid) -> Self {
        let nus = grid.nus();
        SpectralFunction { mp, grid, nus, coeffs: BTreeMap::new() }
    }

    pub fn values(&self, h: Harmonic) -> Option<&[Complex]> {
        self.coeffs.get(&h).map(|v| v.as_slice())
    }

    /// `psi(nus[k], b)`.
    pub fn eval(&self, k: usize, b: &[f64]) -> Complex {
        self.coeffs.iter().map(|(h, vals)| vals[k] * eval_harmonic(*h, b)).sum()
    }

    /// Largest coefficient magnitude over all samples.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests;
