use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fourier::half_line;
use super::{helgason_fourier, inverse_helgason_unscaled, GridSpec, SpatialFunction, SpectralFunction};
use crate::error::{HyperError, Result};
use crate::geometry::ModelParams;
use crate::ktypes::Harmonic;
use crate::numerics::{integrate_real, Complex};
use crate::spherical::plancherel_density;

/// Spread of held-out Plancherel ratios beyond which calibration fails.
pub const INSTABILITY_SPREAD: f64 = 1e-2;

/// Test profiles on `[0, support)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Bump {
    /// `exp(1 - 1 / (1 - (t/R)^2))`.
    Smooth { radius: f64 },
    /// `(1 - (t/R)^2)^power`.
    Poly { radius: f64, power: i32 },
    /// A smooth bump of half-width `width` centred at `center > width`.
    Ring { center: f64, width: f64 },
}

impl Bump {
    pub fn support(&self) -> f64 {
        match self {
            Bump::Smooth { radius } | Bump::Poly { radius, .. } => *radius,
            Bump::Ring { center, width } => center + width,
        }
    }

    pub fn id(&self) -> String {
        match self {
            Bump::Smooth { radius } => format!("smooth-R{radius}"),
            Bump::Poly { radius, power } => format!("poly{power}-R{radius}"),
            Bump::Ring { center, width } => format!("ring-c{center}-w{width}"),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let smooth = |u: f64| if u.abs() < 1.0 { (1.0 - 1.0 / (1.0 - u * u)).exp() } else { 0.0 };
        match self {
            Bump::Smooth { radius } => smooth(t / radius),
            Bump::Poly { radius, power } => {
                let u = t / radius;
                if u.abs() < 1.0 {
                    (1.0 - u * u).powi(*power)
                } else {
                    0.0
                }
            }
            Bump::Ring { center, width } => smooth((t - center) / width),
        }
    }

    /// `sinh^l(t) bump(t) Y_h(omega)` for a harmonic `h` of degree `l`; the
    /// `sinh^l` factor keeps the function smooth at the origin.
    pub fn spatial(&self, mp: ModelParams, grid: super::RadialGrid, h: Harmonic) -> Result<SpatialFunction> {
        let b = *self;
        let degree = h.degree as i32;
        SpatialFunction::from_profile(mp, grid, h, move |t| t.sinh().powi(degree) * b.value(t), Some(self.support()))
    }
}

/// The reference bump followed by five held-out bumps.
pub fn bump_family() -> Vec<Bump> {
    vec![
        Bump::Smooth { radius: 2.0 },
        Bump::Smooth { radius: 1.5 },
        Bump::Smooth { radius: 3.0 },
        Bump::Poly { radius: 2.0, power: 6 },
        Bump::Poly { radius: 2.5, power: 8 },
        Bump::Ring { center: 2.0, width: 1.0 },
    ]
}

/// Inversion and Plancherel constants for one `(p, grids)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CalibrationRecord {
    pub p: usize,
    pub grid_hash: String,
    pub constant_inversion: f64,
    pub constant_plancherel: f64,
    pub reference_bump_id: String,
}

impl CalibrationRecord {
    pub fn check(&self, p: usize, spec: &GridSpec) -> Result<()> {
        if self.p != p || self.grid_hash != spec.hash(p) {
            return Err(HyperError::Uncalibrated(p));
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// `int_0^Lambda sum_h |psi_h(i lambda)|^2 |c(i lambda)|^{-2} d lambda`.
pub fn spectral_energy(psi: &SpectralFunction) -> Result<f64> {
    let (idx, lam, rule) = half_line(&psi.grid)?;
    let density: Vec<f64> = lam.iter().map(|l| plancherel_density(*l, &psi.mp)).collect::<Result<_>>()?;
    let mut total = 0.0;
    for vals in psi.coeffs.values() {
        let samples: Vec<f64> = idx.iter().zip(&density).map(|(i, d)| vals[*i].norm_sqr() * d).collect();
        total += integrate_real(&rule, &samples)?;
    }
    Ok(total)
}

/// `C int |f^|^2 |c|^{-2} / int |f|^2`, which is 1 for a correct constant.
pub fn plancherel_ratio(f: &SpatialFunction, cal: &CalibrationRecord, spec: &GridSpec) -> Result<f64> {
    cal.check(f.mp.p, spec)?;
    let psi = helgason_fourier(f, &spec.spectral)?;
    Ok(cal.constant_plancherel * spectral_energy(&psi)? / f.norm_sq()?)
}

/// Result of [`calibrate_plancherel`]: the record and the held-out ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationOutcome {
    pub record: CalibrationRecord,
    pub held_out: Vec<(String, f64)>,
}

impl CalibrationOutcome {
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .held_out
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, r)| (lo.min(*r), hi.max(*r)));
        hi - lo
    }
}

/// Fixes the constants on the first bump of [`bump_family`] (K-invariant),
/// without held-out checks.
pub fn calibrate_reference(mp: &ModelParams, spec: &GridSpec) -> Result<CalibrationRecord> {
    let family = bump_family();
    let reference = family[0].spatial(*mp, spec.radial, Harmonic::constant())?;
    let psi = helgason_fourier(&reference, &spec.spectral)?;
    let norm = reference.norm_sq()?;
    let constant_plancherel = norm / spectral_energy(&psi)?;
    let back = inverse_helgason_unscaled(&psi, &spec.radial)?;
    let pairing = inner(&back, &reference)?;
    Ok(CalibrationRecord {
        p: mp.p,
        grid_hash: spec.hash(mp.p),
        constant_inversion: norm / pairing.re,
        constant_plancherel,
        reference_bump_id: family[0].id(),
    })
}

/// [`calibrate_reference`] plus the Plancherel ratio of the other five bumps.
pub fn calibrate_plancherel(mp: &ModelParams, spec: &GridSpec) -> Result<CalibrationOutcome> {
    let family = bump_family();
    let record = calibrate_reference(mp, spec)?;
    let mut held_out = Vec::new();
    for bump in &family[1..] {
        let f = bump.spatial(*mp, spec.radial, Harmonic::constant())?;
        held_out.push((bump.id(), plancherel_ratio(&f, &record, spec)?));
    }
    let outcome = CalibrationOutcome { record, held_out };
    if !(outcome.spread() <= INSTABILITY_SPREAD) {
        return Err(HyperError::Instability(outcome.spread()));
    }
    Ok(outcome)
}

/// `int f conj(g) dx`.
pub fn inner(f: &SpatialFunction, g: &SpatialFunction) -> Result<Complex> {
    let rule = f.grid.rule();
    let nodes = f.grid.nodes();
    let mut total = Complex::new(0.0, 0.0);
    for (h, a) in &f.coeffs {
        if let Some(b) = g.coeffs.get(h) {
            let samples: Vec<Complex> = nodes
                .iter()
                .zip(a.iter().zip(b))
                .map(|(t, (x, y))| x * y.conj() * t.sinh().powi(f.mp.n as i32))
                .collect();
            total += crate::numerics::integrate(&rule, &samples)?;
        }
    }
    Ok(total * f.mp.sphere_area())
}
