use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{interpolate_profile, RadialGrid, SpatialFunction};
use crate::error::{HyperError, Result};
use crate::geometry::{horocyclic_compose, horocyclic_radial, ModelParams};
use crate::ktypes::{zonal, Harmonic, KTypeIndex};
use crate::numerics::{integrate, real, Complex, QuadratureRule};

const PANELS: usize = 16;
const PANEL_NODES: usize = 16;

/// A function of `(t, b)` on `[-t_max, t_max] x B`, one profile per boundary
/// harmonic on the two-sided radial grid. For a delta-row-valued function
/// (`row_of` set) the profile under the `a`-th matrix-basis harmonic holds
/// row entry `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadonFunction {
    pub mp: ModelParams,
    pub grid: RadialGrid,
    pub coeffs: BTreeMap<Harmonic, Vec<Complex>>,
    pub row_of: Option<KTypeIndex>,
}

impl RadonFunction {
    pub fn zero(mp: ModelParams, grid: RadialGrid) -> Self {
        RadonFunction { mp, grid, coeffs: BTreeMap::new(), row_of: None }
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.grid.two_sided_nodes()
    }

    /// `max |phi(t)|` over `|t| > radius`, relative to the overall maximum.
    pub fn relative_max_beyond(&self, radius: f64) -> f64 {
        let nodes = self.nodes();
        let (mut outside, mut overall): (f64, f64) = (0.0, 0.0);
        for vals in self.coeffs.values() {
            for (t, v) in nodes.iter().zip(vals) {
                overall = overall.max(v.norm());
                if t.abs() > radius {
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

/// `Rf(t, kM) = e^{rho t} int_N f(k a_t n o) dn`.
///
/// Averaging over M turns the horocycle integral of a degree-`l` component
/// into `e^{rho t} |S^{n-1}| int_0^{r_max} f_h(d) Z_l(cos gamma) r^{n-1} dr`,
/// where `(d, gamma)` are the polar coordinates of `a_t n_xi o`, `|xi| = r`.
/// The support radius `R` truncates the integral at
/// `cosh d = cosh R`, and `Rf(t) = 0` for `|t| > R`.
pub fn radon(f: &SpatialFunction) -> Result<RadonFunction> {
    let support = f.support.ok_or(HyperError::MissingSupport)?;
    let mp = f.mp;
    let ts = f.grid.two_sided_nodes();
    let step = f.grid.step();
    let area = mp.horocycle_sphere_area();
    let mut out = RadonFunction::zero(mp, f.grid);
    for (h, vals) in &f.coeffs {
        let values: Vec<Complex> = ts
            .par_iter()
            .map(|t| -> Result<Complex> {
                if t.abs() >= support {
                    return Ok(real(0.0));
                }
                let r_max = (2.0 * (support.cosh() - t.cosh()) * (-t).exp()).sqrt();
                let rule = QuadratureRule::composite_gauss_legendre(PANELS, PANEL_NODES, 0.0, r_max);
                let samples: Vec<Complex> = rule
                    .nodes
                    .iter()
                    .map(|r| {
                        let (d, cos_angle) = horocyclic_radial(*t, *r);
                        interpolate_profile(vals, step, d, h.degree)
                            * zonal(mp.p, h.degree, cos_angle)
                            * r.powi(mp.n as i32 - 1)
                    })
                    .collect();
                Ok(integrate(&rule, &samples)? * area * (mp.rho * t).exp())
            })
            .collect::<Result<_>>()?;
        out.coeffs.insert(*h, values);
    }
    Ok(out)
}

/// `Rf(t, eM)` by direct quadrature over the horocycle coordinates, for
/// `p in {2, 3}`.
pub fn radon_geometric(f: &SpatialFunction, t: f64) -> Result<Complex> {
    let support = f.support.ok_or(HyperError::MissingSupport)?;
    if t.abs() >= support {
        return Ok(real(0.0));
    }
    let r_max = (2.0 * (support.cosh() - t.cosh()) * (-t).exp()).sqrt();
    let rule = QuadratureRule::composite_gauss_legendre(PANELS, PANEL_NODES, -r_max, r_max);
    let value = |xi: &[f64]| -> Result<Complex> { f.eval(&horocyclic_compose(t, xi)) };
    let mut acc = real(0.0);
    match f.mp.p {
        2 => {
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                acc += value(&[*x])? * *w;
            }
        }
        3 => {
            for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
                for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
                    if x * x + y * y < r_max * r_max {
                        acc += value(&[*x, *y])? * (wx * wy);
                    }
                }
            }
        }
        p => return Err(HyperError::UnsupportedDimension(p)),
    }
    Ok(acc * (f.mp.rho * t).exp())
}
