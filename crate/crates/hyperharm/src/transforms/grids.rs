use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::numerics::{c, real, Complex, QuadratureRule};

/// End-correction order of the radial and horocyclic quadratures.
const GREGORY_ORDER: usize = 8;
/// Points used by [`interpolate_profile`].
const INTERPOLATION_POINTS: usize = 8;

/// Uniform radial grid `t_k = k * t_max / intervals`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub t_max: f64,
    pub intervals: usize,
}

impl Default for RadialGrid {
    fn default() -> Self {
        RadialGrid { t_max: 12.0, intervals: 3072 }
    }
}

impl RadialGrid {
    pub fn new(t_max: f64, intervals: usize) -> Self {
        RadialGrid { t_max, intervals }
    }

    pub fn step(&self) -> f64 {
        self.t_max / self.intervals as f64
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..=self.intervals).map(|k| k as f64 * h).collect()
    }

    /// Gregory-corrected trapezoid rule on the nodes.
    pub fn rule(&self) -> QuadratureRule {
        QuadratureRule::gregory(self.intervals, 0.0, self.t_max, GREGORY_ORDER)
    }

    /// Rule on the first `upto` intervals (the part of a support).
    pub fn partial_rule(&self, upto: usize) -> QuadratureRule {
        let upto = upto.clamp(2 * GREGORY_ORDER, self.intervals);
        QuadratureRule::gregory(upto, 0.0, upto as f64 * self.step(), GREGORY_ORDER)
    }

    /// Number of intervals covering `[0, radius]`.
    pub fn intervals_to(&self, radius: f64) -> usize {
        ((radius / self.step()).ceil() as usize).min(self.intervals)
    }

    /// Symmetric grid `[-t_max, t_max]` with the same step.
    pub fn two_sided_nodes(&self) -> Vec<f64> {
        let h = self.step();
        let n = self.intervals as i64;
        (-n..=n).map(|k| k as f64 * h).collect()
    }

    pub fn two_sided_rule(&self) -> QuadratureRule {
        QuadratureRule::gregory(2 * self.intervals, -self.t_max, self.t_max, GREGORY_ORDER)
    }
}

/// Spectral samples `nu = sigma + i lambda` on uniform `lambda` lines, one
/// line per real offset `sigma`. A half grid covers `lambda in [0, lambda_max]`,
/// a symmetric grid `[-lambda_max, lambda_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub lambda_max: f64,
    pub intervals: usize,
    pub offsets: Vec<f64>,
    pub symmetric: bool,
}

impl Default for SpectralGrid {
    fn default() -> Self {
        SpectralGrid { lambda_max: 64.0, intervals: 1024, offsets: vec![0.0], symmetric: false }
    }
}

impl SpectralGrid {
    pub fn half_line(lambda_max: f64, intervals: usize) -> Self {
        SpectralGrid { lambda_max, intervals, offsets: vec![0.0], symmetric: false }
    }

    pub fn symmetric(lambda_max: f64, intervals: usize, offsets: Vec<f64>) -> Self {
        SpectralGrid { lambda_max, intervals, offsets, symmetric: true }
    }

    /// Offsets `{-sigma, 0, sigma}` for a tube of half-width `sigma`.
    pub fn with_tube(mut self, sigma: f64) -> Self {
        self.offsets = if sigma > 0.0 { vec![-sigma, 0.0, sigma] } else { vec![0.0] };
        self
    }

    pub fn step(&self) -> f64 {
        self.lambda_max / self.intervals as f64
    }

    pub fn lambdas(&self) -> Vec<f64> {
        let h = self.step();
        let n = self.intervals as i64;
        let lo = if self.symmetric { -n } else { 0 };
        (lo..=n).map(|k| k as f64 * h).collect()
    }

    /// All samples, line by line in offset order.
    pub fn nus(&self) -> Vec<Complex> {
        let lams = self.lambdas();
        self.offsets.iter().flat_map(|s| lams.iter().map(move |l| c(*s, *l))).collect()
    }

    /// Index range of the line with the given offset within [`Self::nus`].
    pub fn line(&self, offset: f64) -> Option<std::ops::Range<usize>> {
        let per = self.lambdas().len();
        self.offsets.iter().position(|s| (s - offset).abs() < 1e-14).map(|i| i * per..(i + 1) * per)
    }

    /// Trapezoid rule in `lambda`; on a half grid it integrates even
    /// integrands over `[0, lambda_max]`.
    pub fn lambda_rule(&self) -> QuadratureRule {
        let lo = if self.symmetric { -self.lambda_max } else { 0.0 };
        let intervals = if self.symmetric { 2 * self.intervals } else { self.intervals };
        QuadratureRule::trapezoid(intervals, lo, self.lambda_max)
    }
}

/// The radial and spectral grids of one run; their hash keys calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct GridSpec {
    pub radial: RadialGrid,
    pub spectral: SpectralGrid,
}

impl GridSpec {
    pub fn hash(&self, p: usize) -> String {
        let doc = serde_json::json!({
            "p": p,
            "t_max": self.radial.t_max,
            "t_intervals": self.radial.intervals,
            "lambda_max": self.spectral.lambda_max,
            "lambda_intervals": self.spectral.intervals,
        });
        let digest = Sha256::digest(doc.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Local Lagrange interpolation of a radial profile sampled at `k * step`.
/// Samples at negative radii come from the parity `(-1)^degree` of a smooth
/// degree-`degree` component; beyond the grid the profile is zero.
pub fn interpolate_profile(values: &[Complex], step: f64, t: f64, degree: usize) -> Complex {
    let n = values.len() as i64 - 1;
    let x = t / step;
    if x > n as f64 + 1e-9 {
        return real(0.0);
    }
    let k = x.round() as i64;
    if (x - k as f64).abs() < 1e-12 {
        return values[k as usize];
    }
    let half = INTERPOLATION_POINTS as i64 / 2;
    let mut lo = x.floor() as i64 - half + 1;
    lo = lo.min(n - INTERPOLATION_POINTS as i64 + 1);
    let sign = if degree % 2 == 0 { 1.0 } else { -1.0 };
    let sample = |j: i64| if j >= 0 { values[j as usize] } else { values[(-j) as usize] * sign };
    let mut acc = real(0.0);
    for j in lo..lo + INTERPOLATION_POINTS as i64 {
        let mut w = 1.0;
        for m in lo..lo + INTERPOLATION_POINTS as i64 {
            if m != j {
                w *= (x - m as f64) / (j - m) as f64;
            }
        }
        acc += sample(j) * w;
    }
    acc
}
