use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::ktypes::{divide_pdelta, find_partner, pdelta};
use crate::numerics::{c, real, Complex};
use crate::transforms::{
    check_symmetry_delta, euclid_fourier_unchecked, inverse_delta_spherical, CalibrationRecord, DeltaSpectralFunction,
    RadialGrid, RadonFunction, SpatialFunction, SpectralGrid, SymmetryMode,
};

/// Derivative orders carried by the mollifier jets.
pub const JET_ORDER: usize = 8;
/// Relative p_delta parity residual required of the input of [`cutoff_decompose`].
pub const INPUT_SYMMETRY_TOLERANCE: f64 = 1e-6;
/// Relative odd part of `G` tolerated before division is rejected.
pub const EVENNESS_TOLERANCE: f64 = 1e-8;

/// `omega_j`: 1 on `[0, j-1]`, 0 on `[j, inf)`, even, with a transition
/// `S(j - |t|)` shaped by `sharpness`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub j: u32,
    pub sharpness: f64,
}

impl CutoffSpec {
    pub fn new(j: u32) -> Self {
        CutoffSpec { j, sharpness: 2.0 }
    }
}

/// Truncated Taylor series `sum_k c_k h^k / k!` stored as derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet([f64; JET_ORDER + 1]);

impl Jet {
    fn constant(v: f64) -> Self {
        let mut d = [0.0; JET_ORDER + 1];
        d[0] = v;
        Jet(d)
    }

    fn variable(x: f64, slope: f64) -> Self {
        let mut d = [0.0; JET_ORDER + 1];
        d[0] = x;
        d[1] = slope;
        Jet(d)
    }

    // Leibniz rule.
    #[cfg(test)]
    fn mul(&self, o: &Self) -> Self {
        let mut d = [0.0; JET_ORDER + 1];
        for (k, slot) in d.iter_mut().enumerate() {
            let mut binom = 1.0;
            for i in 0..=k {
                *slot += binom * self.0[i] * o.0[k - i];
                binom = binom * (k - i) as f64 / (i + 1) as f64;
            }
        }
        Jet(d)
    }

    // Faa di Bruno through the ODE y' = y u' solved order by order.
    fn exp(&self) -> Self {
        let mut y = [0.0; JET_ORDER + 1];
        y[0] = self.0[0].exp();
        for k in 0..JET_ORDER {
            let mut binom = 1.0;
            let mut acc = 0.0;
            for i in 0..=k {
                acc += binom * y[i] * self.0[k - i + 1];
                binom = binom * (k - i) as f64 / (i + 1) as f64;
            }
            y[k + 1] = acc;
        }
        Jet(y)
    }

    // y = 1 / u from y u = 1.
    fn recip(&self) -> Self {
        let mut y = [0.0; JET_ORDER + 1];
        y[0] = 1.0 / self.0[0];
        for k in 1..=JET_ORDER {
            let mut binom = 1.0;
            let mut acc = 0.0;
            for i in 0..k {
                acc += binom * y[i] * self.0[k - i];
                binom = binom * (k - i) as f64 / (i + 1) as f64;
            }
            y[k] = -acc * y[0];
        }
        Jet(y)
    }

    fn add(&self, o: &Self) -> Self {
        let mut d = self.0;
        for (a, b) in d.iter_mut().zip(o.0) {
            *a += b;
        }
        Jet(d)
    }

    fn scale(&self, s: f64) -> Self {
        Jet(self.0.map(|v| v * s))
    }
}

// Smooth step 0 -> 1 on [0, 1] with its derivatives at x, as a jet in the
// variable whose derivative with respect to t is `slope`.
fn step_jet(x: f64, slope: f64, sharpness: f64) -> Jet {
    if x <= 0.0 {
        return Jet::constant(0.0);
    }
    if x >= 1.0 {
        return Jet::constant(1.0);
    }
    // S = 1 / (1 + exp(a/x - a/(1-x))).
    let u = Jet::variable(x, slope).recip().scale(sharpness).add(
        &Jet::variable(1.0 - x, -slope).recip().scale(-sharpness),
    );
    if u.0[0] > 700.0 {
        return Jet::constant(0.0);
    }
    if u.0[0] < -700.0 {
        return Jet::constant(1.0);
    }
    u.exp().add(&Jet::constant(1.0)).recip()
}

/// `omega_j(t)` and its first [`JET_ORDER`] derivatives in `t`.
pub fn cutoff_omega_derivatives(spec: &CutoffSpec, t: f64) -> [f64; JET_ORDER + 1] {
    let slope = if t >= 0.0 { -1.0 } else { 1.0 };
    step_jet(spec.j as f64 - t.abs(), slope, spec.sharpness).0
}

/// `omega_j(t)`.
pub fn cutoff_omega(spec: &CutoffSpec, t: f64) -> f64 {
    cutoff_omega_derivatives(spec, t)[0]
}

/// Result of [`cutoff_decompose`] with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffOutcome {
    /// `h_j = F H_j` on the symmetric grid.
    pub h_j: DeltaSpectralFunction,
    /// `H_j = p_delta(-d/dt)[(1 - omega_j) G]`, one row entry per matrix-basis harmonic.
    pub big_h_j: RadonFunction,
    /// `f_j = (H^delta)^{-1} h_j`.
    pub f_j: SpatialFunction,
    /// `(H^delta)^{-1} (h - h_j)`, the part the cutoff removes.
    pub removed: SpatialFunction,
    /// `max |G(-t) - G(t)| / max |G|`.
    pub evenness_residual: f64,
    /// Relative p_delta parity residual of `h_j`.
    pub parity_residual: f64,
    /// Largest `|H_j|` relative to `max |G|`.
    pub max_h_j: f64,
}

/// `(1/2 pi) int (i lambda)^k g(i lambda) e^{i lambda t} d lambda` for
/// `k = 0..=order` on the two-sided radial grid.
fn spectral_derivatives(
    lambdas: &[f64],
    weights: &[f64],
    g: &[Complex],
    ts: &[f64],
    order: usize,
) -> Vec<Vec<Complex>> {
    use rayon::prelude::*;
    ts.par_iter()
        .map(|t| {
            let mut acc = vec![real(0.0); order + 1];
            for ((l, w), v) in lambdas.iter().zip(weights).zip(g) {
                let base = v * c(0.0, l * t).exp() * (*w / (2.0 * std::f64::consts::PI));
                let mut pw = real(1.0);
                for slot in acc.iter_mut() {
                    *slot += base * pw;
                    pw *= c(0.0, *l);
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(vec![Vec::with_capacity(ts.len()); order + 1], |mut cols, row| {
            for (col, v) in cols.iter_mut().zip(row) {
                col.push(v);
            }
            cols
        })
}

/// Step 2 of the cutoff construction: `G = F^{-1}(h / p_delta(-.))`,
/// `H_j = p_delta(-d/dt)[(1 - omega_j) G]`, `h_j = F H_j`,
/// `f_j = (H^delta)^{-1} h_j`. Derivatives of `G` are taken spectrally and
/// those of `omega_j` from its jets.
pub fn cutoff_decompose(
    h: &DeltaSpectralFunction,
    spec: &CutoffSpec,
    radial: &RadialGrid,
    cal: &CalibrationRecord,
) -> Result<CutoffOutcome> {
    let delta = h.delta;
    let mp = h.mp;
    if !h.grid.symmetric || h.grid.offsets != [0.0] {
        return Err(HyperError::AsymmetricGrid("cutoff needs a symmetric grid on Re nu = 0".into()));
    }
    let input = check_symmetry_delta(h, SymmetryMode::PdeltaParity, &[])?;
    if input.relative > INPUT_SYMMETRY_TOLERANCE {
        return Err(HyperError::SymmetryViolation { residual: input.relative, tolerance: INPUT_SYMMETRY_TOLERANCE });
    }
    let poly = pdelta(&delta, &mp)?;
    let s = delta.s();
    let lambdas = h.grid.lambdas();
    let rule = h.grid.lambda_rule();
    let ts = radial.two_sided_nodes();
    let mut rows_h = Vec::new();
    let mut evenness_residual: f64 = 0.0;
    let mut g_scale: f64 = 0.0;
    for row in &h.rows {
        let g = divide_pdelta(&h.nus, row, &delta, &mp)?;
        let peak = g.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        for i in 0..g.len() {
            let j = find_partner(&h.nus, i).expect("symmetric grid");
            if (g[i] - g[j]).norm() > EVENNESS_TOLERANCE * peak {
                return Err(HyperError::RootDivision(format!("h / p_delta(-.) is not even at {}", h.nus[i])));
            }
        }
        let derivs = spectral_derivatives(&lambdas, &rule.weights, &g, &ts, s);
        let n = ts.len();
        let gmax = derivs[0].iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        g_scale = g_scale.max(gmax);
        for k in 0..n {
            evenness_residual = evenness_residual.max((derivs[0][k] - derivs[0][n - 1 - k]).norm() / gmax);
        }
        // p(-D)[(1 - omega) G] = sum_k a_k (-1)^k sum_i C(k,i) D^i(1 - omega) D^{k-i} G.
        let coeffs = poly.coeffs();
        let big_h: Vec<Complex> = (0..n)
            .map(|idx| {
                let om = cutoff_omega_derivatives(spec, ts[idx]);
                let one_minus = |i: usize| if i == 0 { 1.0 - om[0] } else { -om[i] };
                let mut acc = real(0.0);
                for (k, a) in coeffs.iter().enumerate() {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let mut binom = 1.0;
                    let mut term = real(0.0);
                    for i in 0..=k {
                        term += derivs[k - i][idx] * (binom * one_minus(i));
                        binom = binom * (k - i) as f64 / (i + 1) as f64;
                    }
                    acc += a * term * sign;
                }
                acc
            })
            .collect();
        rows_h.push(big_h);
    }
    let mut big_h_j = RadonFunction::zero(mp, *radial);
    big_h_j.row_of = Some(delta);
    for (hm, vals) in delta.matrix_basis().into_iter().zip(rows_h) {
        big_h_j.coeffs.insert(hm, vals);
    }
    let max_h_j = big_h_j.coeffs.values().flatten().map(|v| v.norm()).fold(0.0, f64::max) / g_scale.max(1e-300);
    let spectral = euclid_fourier_unchecked(&big_h_j, &SpectralGrid::symmetric(h.grid.lambda_max, h.grid.intervals, vec![0.0]))?;
    let rows = delta
        .matrix_basis()
        .iter()
        .map(|hm| spectral.values(*hm).expect("row present").to_vec())
        .collect();
    let h_j = DeltaSpectralFunction { mp, delta, grid: spectral.grid.clone(), nus: spectral.nus.clone(), rows };
    let parity_residual = check_symmetry_delta(&h_j, SymmetryMode::PdeltaParity, &[])?.relative;
    let f_j = inverse_delta_spherical(&h_j, radial, cal)?;
    let mut diff = h.clone();
    for (r, rj) in diff.rows.iter_mut().zip(&h_j.rows) {
        for (a, b) in r.iter_mut().zip(rj) {
            *a -= b;
        }
    }
    let removed = inverse_delta_spherical(&diff, radial, cal)?;
    Ok(CutoffOutcome { h_j, big_h_j, f_j, removed, evenness_residual, parity_residual, max_h_j })
}

/// Guarded division `G = h / p_delta(-.)` along the line `Re nu = sigma`
/// through a root of `p_delta(-.)`, compared with the value forced by
/// evenness, `G(nu_0) = h(-nu_0) / p_delta(nu_0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuardReport {
    pub root: f64,
    pub guarded_value: Complex,
    pub evenness_value: Complex,
    /// Largest off-root mismatch against the quotient on a refined grid.
    pub off_root_mismatch: f64,
    pub all_finite: bool,
}

/// Exercises the divided-difference guard of [`divide_pdelta`] at the root
/// `nu_0 = rho + j` of `p_delta(-.)`; `line` holds the transform on
/// `Re nu = nu_0`, `refined` the same on a grid with half the step and
/// `mirror` the transform on `Re nu = -nu_0`. The row with the largest
/// entries is used.
pub fn guard_report(
    line: &DeltaSpectralFunction,
    refined: &DeltaSpectralFunction,
    mirror: &DeltaSpectralFunction,
    root: f64,
) -> Result<GuardReport> {
    let delta = line.delta;
    let mp = line.mp;
    let size = |r: &Vec<Complex>| r.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let a = (0..line.rows.len())
        .max_by(|i, j| size(&line.rows[*i]).total_cmp(&size(&line.rows[*j])))
        .ok_or_else(|| HyperError::InvalidParameter("empty transform".into()))?;
    let row = &line.rows[a];
    let g = divide_pdelta(&line.nus, row, &delta, &mp)?;
    let reflected = pdelta(&delta, &mp)?.reflect();
    let at = |nus: &[Complex], target: f64| {
        nus.iter()
            .position(|nu| (nu - real(target)).norm() < 1e-9)
            .ok_or_else(|| HyperError::InvalidParameter(format!("{target} is not on the grid")))
    };
    let k0 = at(&line.nus, root)?;
    let mirror_value = mirror.rows[a][at(&mirror.nus, -root)?];
    let mut mismatch: f64 = 0.0;
    for (k, nu) in line.nus.iter().enumerate() {
        if k == k0 {
            continue;
        }
        let j = refined
            .nus
            .iter()
            .position(|m| (m - nu).norm() < 1e-12)
            .ok_or_else(|| HyperError::InvalidParameter("refined grid does not contain the coarse one".into()))?;
        let direct = refined.rows[a][j] / reflected.eval(*nu);
        mismatch = mismatch.max((direct - g[k]).norm() / direct.norm().max(1e-300));
    }
    let evenness_value = mirror_value / pdelta(&delta, &mp)?.eval(real(root));
    Ok(GuardReport {
        root,
        guarded_value: g[k0],
        evenness_value,
        off_root_mismatch: mismatch,
        all_finite: g.iter().all(|v| v.re.is_finite() && v.im.is_finite()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_plateaus_and_translation() {
        let s3 = CutoffSpec::new(3);
        let s4 = CutoffSpec::new(4);
        assert_eq!(cutoff_omega(&s3, 1.5), 1.0);
        assert_eq!(cutoff_omega(&s3, 3.5), 0.0);
        assert_eq!(cutoff_omega(&s3, -1.5), 1.0);
        for k in 0..=800 {
            let t = k as f64 / 100.0;
            assert_eq!(cutoff_omega(&s4, t), cutoff_omega(&s3, t - 1.0), "t = {t}");
        }
    }

    #[test]
    fn omega_jets_match_finite_differences() {
        let spec = CutoffSpec::new(2);
        let h = 1e-3;
        for t in [1.2, 1.5, 1.83] {
            let d = cutoff_omega_derivatives(&spec, t);
            let at = |s: f64| cutoff_omega_derivatives(&spec, t + s);
            let (p1, p2, m1, m2) = (at(h), at(2.0 * h), at(-h), at(-2.0 * h));
            let scale = d.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            for k in 0..JET_ORDER {
                let fd = (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h);
                assert!((fd - d[k + 1]).abs() < 1e-5 * scale, "t={t} k={k}: {fd} {}", d[k + 1]);
            }
        }
    }

    #[test]
    fn jets_compose() {
        // exp(x) * exp(-x) = 1, 1 / (1 / x) = x.
        let x = Jet::variable(0.7, 1.0);
        let one = x.exp().mul(&x.scale(-1.0).exp());
        assert!((one.0[0] - 1.0).abs() < 1e-15 && one.0[1..].iter().all(|v| v.abs() < 1e-13));
        let back = x.recip().recip();
        assert!((back.0[0] - 0.7).abs() < 1e-15 && (back.0[1] - 1.0).abs() < 1e-13);
        assert!(back.0[2..].iter().all(|v| v.abs() < 1e-10));
    }
}
