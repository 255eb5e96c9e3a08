//! Spherical functions, Eisenstein integrals, the c-function and the
//! Plancherel density.
//!
//! Sign convention: `phi_nu(x) = int_B e^{(nu + rho) A(x, b)} db`, so the
//! Fourier kernel `e^{(-nu + rho) A}` integrates to `phi_{-nu}`. The
//! measure `db` is the rotation-invariant probability measure.

use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::geometry::{axis_bracket, horocycle_bracket, BoundaryPoint, HyperbolicPoint, ModelParams};
use crate::ktypes::{delta_matrix, eval_harmonic, zonal, BoundaryFunction, BoundaryGrid, KTypeIndex};
use crate::numerics::{c, gamma_ln, hyp2f1, hyp2f1_profile, pochhammer, real, Complex, QuadratureRule};

/// A spectral parameter, optionally constrained to the tube
/// `|Re nu| <= epsilon rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParam {
    pub nu: Complex,
    pub epsilon: f64,
}

impl SpectralParam {
    pub fn imaginary(lambda: f64) -> Self {
        SpectralParam { nu: c(0.0, lambda), epsilon: 0.0 }
    }

    pub fn in_tube(nu: Complex, epsilon: f64, mp: &ModelParams) -> Result<Self> {
        if epsilon < 0.0 || nu.re.abs() > epsilon * mp.rho * (1.0 + 1e-12) {
            return Err(HyperError::InsufficientTube(nu.re));
        }
        Ok(SpectralParam { nu, epsilon })
    }
}

/// `phi_nu(a_t o) = 2F1((rho + nu)/2, (rho - nu)/2; p/2; -sinh^2 t)`.
pub fn spherical_fn(nu: Complex, t: f64, mp: &ModelParams) -> Result<Complex> {
    eisenstein_radial(nu, 0, t, mp)
}

/// `phi_nu` on a grid of radii, sharing one continuation sweep.
pub fn spherical_profile(nu: Complex, ts: &[f64], mp: &ModelParams) -> Result<Vec<Complex>> {
    eisenstein_radial_profile(nu, 0, ts, mp)
}

fn radial_params(nu: Complex, degree: usize, mp: &ModelParams) -> (Complex, Complex, Complex, Complex) {
    let l = degree as f64;
    let half_p = mp.p as f64 / 2.0;
    let a = (nu + mp.rho + l) / 2.0;
    let b = (-nu + mp.rho + l) / 2.0;
    let prefactor = pochhammer(nu + mp.rho, degree) / (2f64.powi(degree as i32) * pochhammer(real(half_p), degree).re);
    (a, b, real(half_p + l), prefactor)
}

/// `phi_{nu,l}(t) = int_B e^{(nu + rho) A(a_t o, b)} Z_l(b . eM) db`, the
/// radial part of the Eisenstein integral of the degree-`l` type, with `Z_l`
/// the zonal harmonic equal to 1 at the pole:
///
/// `phi_{nu,l}(t) = (nu + rho)_l / (2^l (p/2)_l) sinh^l t
///   2F1((rho + nu + l)/2, (rho - nu + l)/2; l + p/2; -sinh^2 t)`.
///
/// The hypergeometric factor is even in `nu`, so
/// `phi_{nu,l} / phi_{-nu,l} = (nu + rho)_l / (-nu + rho)_l`.
pub fn eisenstein_radial(nu: Complex, degree: usize, t: f64, mp: &ModelParams) -> Result<Complex> {
    if !(t >= 0.0) {
        return Err(HyperError::InvalidParameter(format!("radius {t} must be non-negative")));
    }
    let (a, b, cc, pre) = radial_params(nu, degree, mp);
    let s = t.sinh();
    Ok(pre * s.powi(degree as i32) * hyp2f1(a, b, cc, -s * s)?)
}

/// Degree `s` of the polynomial whose ratio `p_s(nu) / p_s(-nu)`, with
/// `p_s(nu) = (nu + rho)_s`, best matches `phi_{nu,l} / phi_{-nu,l}` over the
/// sampled `nu` and radii `t`; returns `s` and its worst relative residual.
pub fn fit_ratio_degree(degree: usize, nus: &[Complex], ts: &[f64], max_s: usize, mp: &ModelParams) -> Result<(usize, f64)> {
    let mut ratios = Vec::new();
    for nu in nus {
        for t in ts {
            ratios.push((*nu, eisenstein_radial(*nu, degree, *t, mp)? / eisenstein_radial(-nu, degree, *t, mp)?));
        }
    }
    let residual = |s: usize| {
        ratios
            .iter()
            .map(|(nu, r)| {
                let want = (0..s).map(|j| (nu + mp.rho + j as f64) / (-nu + mp.rho + j as f64)).product::<Complex>();
                (r - want).norm() / r.norm().max(1e-300)
            })
            .fold(0.0, f64::max)
    };
    let best = (0..=max_s)
        .map(|s| (s, residual(s)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty range");
    Ok(best)
}

/// [`eisenstein_radial`] on a grid of radii.
pub fn eisenstein_radial_profile(nu: Complex, degree: usize, ts: &[f64], mp: &ModelParams) -> Result<Vec<Complex>> {
    if ts.iter().any(|t| !(*t >= 0.0)) {
        return Err(HyperError::InvalidParameter("radii must be non-negative".into()));
    }
    let (a, b, cc, pre) = radial_params(nu, degree, mp);
    let xs: Vec<f64> = ts.iter().map(|t| -t.sinh().powi(2)).collect();
    let f = hyp2f1_profile(a, b, cc, &xs)?;
    Ok(ts.iter().zip(f).map(|(t, v)| pre * t.sinh().powi(degree as i32) * v).collect())
}

/// Independent evaluation of [`eisenstein_radial`] by quadrature of the
/// zonal boundary integral. The polar angle is traded for the bracket value
/// `A = -t cos(s)`, `s in [0, pi]`, which removes the endpoint singularity of
/// the zonal density and spreads the peak of `e^{rho A}`.
pub fn eisenstein_radial_quadrature(nu: Complex, degree: usize, t: f64, mp: &ModelParams) -> Result<Complex> {
    if t == 0.0 {
        return Ok(if degree == 0 { real(1.0) } else { real(0.0) });
    }
    let p = mp.p as f64;
    let log_norm = gamma_ln(real(p / 2.0))?.re - 0.5 * std::f64::consts::PI.ln() - gamma_ln(real((p - 1.0) / 2.0))?.re;
    let nodes = 64 + 2 * (nu.norm() * t).ceil() as usize;
    let rule = QuadratureRule::composite_gauss_legendre(4, nodes.div_ceil(4), 0.0, std::f64::consts::PI);
    let sinh_t = t.sinh();
    let samples: Vec<Complex> = rule
        .nodes
        .iter()
        .map(|s| {
            let half_cos2 = (s / 2.0).cos().powi(2);
            let half_sin2 = (s / 2.0).sin().powi(2);
            // 1 - cos(theta) and 1 + cos(theta) without cancellation.
            let one_minus = (-t).exp() * (2.0 * t * half_cos2).exp_m1() / sinh_t;
            let a = -t * s.cos();
            let one_plus = (-a).exp() * (2.0 * t * half_sin2).exp_m1() / sinh_t;
            debug_assert!((axis_bracket(t, one_minus) - a).abs() < 1e-9 * (1.0 + t));
            let density = ((p - 3.0) / 2.0 * (one_minus * one_plus).ln() + log_norm).exp();
            let jac = t * s.sin() * (-a).exp() / sinh_t;
            ((nu + mp.rho) * a).exp() * zonal(mp.p, degree, 1.0 - one_minus) * density * jac
        })
        .collect();
    crate::numerics::integrate(&rule, &samples)
}

/// `Phi_{nu,delta}(x) = int_K e^{(nu + rho) A(x, kM)} delta(k) dk`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EisensteinValue {
    pub dim: usize,
    /// Row-major `d x d` entries.
    pub matrix: Vec<Complex>,
}

impl EisensteinValue {
    pub fn entry(&self, row: usize, col: usize) -> Complex {
        self.matrix[row * self.dim + col]
    }
}

/// The Eisenstein integral at a point. Averaging over M projects onto the
/// M-fixed column, and the Funk-Hecke formula reduces that column to
/// `phi_{nu,l}(t) v_a(omega) / sqrt(d)` for `x` at polar coordinates
/// `(t, omega)`.
pub fn eisenstein(nu: Complex, x: &HyperbolicPoint, delta: &KTypeIndex, mp: &ModelParams) -> Result<EisensteinValue> {
    if !(mp.p == 2 || mp.p == 3) && !delta.is_trivial() {
        return Err(HyperError::UnsupportedDimension(mp.p));
    }
    if delta.p != mp.p {
        return Err(HyperError::UnsupportedKType(delta.label, mp.p));
    }
    let (t, omega) = x.to_polar()?;
    let radial = eisenstein_radial(nu, delta.degree(), t, mp)?;
    let basis = delta.matrix_basis();
    let d = basis.len();
    let norm = (d as f64).sqrt();
    let mut matrix = vec![real(0.0); d * d];
    for (a, h) in basis.iter().enumerate() {
        matrix[a * d] = radial * eval_harmonic(*h, &omega) / norm;
    }
    Ok(EisensteinValue { dim: d, matrix })
}

/// Direct K-quadrature of the Eisenstein integral over the boundary grid,
/// lifting each node `b` to `k = k_b` and using `delta(k_b)`; the average
/// over M is replaced by its projection onto the M-fixed column.
pub fn eisenstein_quadrature(
    nu: Complex,
    x: &HyperbolicPoint,
    delta: &KTypeIndex,
    mp: &ModelParams,
    lmax: usize,
) -> Result<EisensteinValue> {
    let grid = BoundaryGrid::new(mp.p, lmax)?;
    let d = delta.dim();
    let mut matrix = vec![real(0.0); d * d];
    for (b, w) in grid.points.iter().zip(&grid.weights) {
        let k = rotation_to(b);
        let dm = delta_matrix(delta, &k)?;
        let kernel = ((nu + mp.rho) * horocycle_bracket(x, &BoundaryPoint(b.clone()), mp)).exp() * *w;
        for a in 0..d {
            matrix[a * d] += kernel * dm[a * d];
        }
    }
    Ok(EisensteinValue { dim: d, matrix })
}

// A rotation taking the north pole to `b`, for p in {2, 3}.
fn rotation_to(b: &[f64]) -> crate::geometry::Rotation {
    use crate::geometry::Rotation;
    let (theta, phi) = crate::ktypes::angles(b);
    match b.len() {
        2 => Rotation::givens(2, 1, 0, theta),
        _ => Rotation::givens(3, 0, 1, phi).compose(&Rotation::givens(3, 2, 0, theta)),
    }
}

/// `c(nu) = 2^{n-1} Gamma(p/2) Gamma(nu) / (sqrt(pi) Gamma(nu + rho))`,
/// normalized by `c(rho) = 1`.
pub fn harish_chandra_c(nu: Complex, mp: &ModelParams) -> Result<Complex> {
    let lg = gamma_ln(nu)? - gamma_ln(nu + mp.rho)?;
    let log_const = (mp.n as f64 - 1.0) * 2f64.ln() + gamma_ln(real(mp.p as f64 / 2.0))?.re
        - 0.5 * std::f64::consts::PI.ln();
    Ok((lg + log_const).exp())
}

/// `|c(i lambda)|^{-2}`; zero at `lambda = 0`.
pub fn plancherel_density(lambda: f64, mp: &ModelParams) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(0.0);
    }
    Ok(harish_chandra_c(c(0.0, lambda), mp)?.norm_sqr().recip())
}

/// Fits `phi_{i lambda}(a_t) e^{rho t} = c e^{i lambda t} + conj(c) e^{-i lambda t}`
/// by least squares over `t` in `[15, 25]`, returning the fitted `c`.
pub fn fit_c_asymptotic(lambda: f64, mp: &ModelParams) -> Result<Complex> {
    let ts: Vec<f64> = (0..=200).map(|k| 15.0 + k as f64 * 0.05).collect();
    let vals = spherical_profile(c(0.0, lambda), &ts, mp)?;
    // Real least squares in (Re c, Im c): y = 2 Re c cos - 2 Im c sin.
    let (mut scc, mut sss, mut scs, mut syc, mut sys) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (t, v) in ts.iter().zip(&vals) {
        let y = v.re * (mp.rho * t).exp();
        let (co, si) = (2.0 * (lambda * t).cos(), -2.0 * (lambda * t).sin());
        scc += co * co;
        sss += si * si;
        scs += co * si;
        syc += y * co;
        sys += y * si;
    }
    let det = scc * sss - scs * scs;
    Ok(c((syc * sss - sys * scs) / det, (sys * scc - syc * scs) / det))
}

/// `psi_nu(x) = int_B phi(b) e^{(nu + rho) A(x, b)} db`, evaluated through the
/// Funk-Hecke formula: each harmonic of degree `l` picks up `phi_{nu,l}(t)`.
pub fn poisson_integral(phi: &BoundaryFunction, nu: Complex, x: &HyperbolicPoint, mp: &ModelParams) -> Result<Complex> {
    let (t, omega) = x.to_polar()?;
    let mut radial: std::collections::BTreeMap<usize, Complex> = Default::default();
    let mut acc = real(0.0);
    for (h, v) in &phi.coeffs {
        let r = match radial.get(&h.degree) {
            Some(r) => *r,
            None => {
                let r = eisenstein_radial(nu, h.degree, t, mp)?;
                radial.insert(h.degree, r);
                r
            }
        };
        acc += v * r * eval_harmonic(*h, &omega);
    }
    Ok(acc)
}

/// [`poisson_integral`] by direct quadrature on a boundary grid.
pub fn poisson_integral_quadrature(
    phi: &BoundaryFunction,
    nu: Complex,
    x: &HyperbolicPoint,
    mp: &ModelParams,
    grid: &BoundaryGrid,
) -> Complex {
    grid.points
        .iter()
        .zip(&grid.weights)
        .map(|(b, w)| phi.eval(b) * ((nu + mp.rho) * horocycle_bracket(x, &BoundaryPoint(b.clone()), mp)).exp() * *w)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rotation;
    use crate::ktypes::Harmonic;

    fn mp(p: usize) -> ModelParams {
        ModelParams::new(p).unwrap()
    }

    #[test]
    fn value_at_origin_is_one() {
        for p in [2, 3, 5] {
            for nu in [c(0.0, 3.0), c(0.4, -1.0), real(2.0)] {
                assert!((spherical_fn(nu, 0.0, &mp(p)).unwrap() - real(1.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn closed_form_in_three_dimensions() {
        let v = spherical_fn(c(0.0, 1.0), 1.0, &mp(3)).unwrap();
        let want = 1f64.sin() / 1f64.sinh();
        assert!((v - real(want)).norm() < 1e-12, "{v}");
        assert!((want - 0.71602).abs() < 1e-5);
        for (lam, t) in [(0.3, 4.0), (7.0, 2.5), (20.0, 9.0)] {
            let v = spherical_fn(c(0.0, lam), t, &mp(3)).unwrap();
            let want = (lam * t).sin() / (lam * t.sinh());
            assert!((v - real(want)).norm() < 1e-10 * (1.0 + want.abs()), "{lam} {t} {v} {want}");
        }
    }

    #[test]
    fn two_path_agreement() {
        for p in [2, 3, 4] {
            for degree in 0..3 {
                if p == 4 && degree > 0 {
                    continue;
                }
                for (nu, t) in [(c(0.0, 1.5), 0.7), (c(0.3, -4.0), 3.0), (c(0.0, 20.0), 10.0), (real(0.8), 6.0)] {
                    let a = eisenstein_radial(nu, degree, t, &mp(p)).unwrap();
                    let b = eisenstein_radial_quadrature(nu, degree, t, &mp(p)).unwrap();
                    assert!((a - b).norm() < 1e-10, "p={p} l={degree} nu={nu} t={t}: {a} {b}");
                }
            }
        }
    }

    #[test]
    fn ratio_fit_recovers_degree() {
        let nus = [c(0.3, 0.7), c(-0.45, 2.0), c(0.1, -3.5)];
        for (p, degree) in [(3usize, 0usize), (3, 1), (3, 2), (3, 4), (2, 3)] {
            let (s, r) = fit_ratio_degree(degree, &nus, &[0.5, 1.0, 2.0], 8, &mp(p)).unwrap();
            assert_eq!(s, degree);
            assert!(r < 1e-10, "{r}");
        }
    }

    #[test]
    fn ratio_law_for_degree_one() {
        let nu = real(0.3);
        let r = eisenstein_radial(nu, 1, 1.0, &mp(3)).unwrap() / eisenstein_radial(-nu, 1, 1.0, &mp(3)).unwrap();
        assert!((r - (nu + 1.0) / (-nu + 1.0)).norm() < 1e-12);
    }

    #[test]
    fn c_function_normalization_and_oracle() {
        for p in [2, 3, 4, 7] {
            let m = mp(p);
            assert!((harish_chandra_c(real(m.rho), &m).unwrap() - real(1.0)).norm() < 1e-13);
        }
        let m = mp(3);
        for lam in [0.5, 2.0, 11.0] {
            assert!((plancherel_density(lam, &m).unwrap() / (lam * lam) - 1.0).abs() < 1e-12);
            let fit = fit_c_asymptotic(lam, &m).unwrap();
            let want = harish_chandra_c(c(0.0, lam), &m).unwrap();
            assert!((fit - want).norm() < 1e-8 * want.norm(), "{lam}: {fit} {want}");
        }
    }

    #[test]
    fn eisenstein_structure() {
        let m = mp(3);
        let d = KTypeIndex::new(3, 2).unwrap();
        let nu = c(0.2, 1.3);
        let on_axis = eisenstein(nu, &HyperbolicPoint::on_axis(3, 0.9), &d, &m).unwrap();
        let radial = eisenstein_radial(nu, 2, 0.9, &m).unwrap();
        assert!((on_axis.entry(0, 0) - radial).norm() < 1e-14);
        for a in 1..5 {
            assert!(on_axis.entry(a, 0).norm() < 1e-14);
        }
        let triv = eisenstein(nu, &HyperbolicPoint::on_axis(3, 0.9), &KTypeIndex::trivial(3), &m).unwrap();
        assert!((triv.matrix[0] - spherical_fn(nu, 0.9, &m).unwrap()).norm() < 1e-14);

        let x = HyperbolicPoint::polar(0.8, vec![0.48, 0.6, 0.64]).unwrap();
        let k = Rotation::from_angles(3, &[0.4, 1.0, -0.3]);
        let lhs = eisenstein(nu, &k.apply_point(&x).unwrap(), &d, &m).unwrap();
        let rhs = eisenstein(nu, &x, &d, &m).unwrap();
        let dm = delta_matrix(&d, &k).unwrap();
        for a in 0..5 {
            let want: Complex = (0..5).map(|b| dm[a * 5 + b] * rhs.entry(b, 0)).sum();
            assert!((lhs.entry(a, 0) - want).norm() < 1e-9);
        }
        let quad = eisenstein_quadrature(nu, &x, &d, &m, 40).unwrap();
        for a in 0..5 {
            assert!((quad.entry(a, 0) - rhs.entry(a, 0)).norm() < 1e-9, "{a}");
        }
    }

    #[test]
    fn eisenstein_quadrature_for_the_circle() {
        let m = mp(2);
        let d = KTypeIndex::new(2, -2).unwrap();
        let x = HyperbolicPoint::polar(0.7, vec![0.6, 0.8]).unwrap();
        let nu = c(0.1, 2.0);
        let a = eisenstein(nu, &x, &d, &m).unwrap();
        let b = eisenstein_quadrature(nu, &x, &d, &m, 64).unwrap();
        assert!((a.matrix[0] - b.matrix[0]).norm() < 1e-12);
    }

    #[test]
    fn poisson_integral_paths_agree() {
        let m = mp(3);
        let phi = BoundaryFunction::from_coeffs(
            3,
            3,
            &[(Harmonic::constant(), real(1.0)), (Harmonic::new(1, -1), c(0.3, 0.2)), (Harmonic::new(3, 2), real(-0.5))],
        )
        .unwrap();
        let x = HyperbolicPoint::polar(0.6, vec![0.0, 0.6, 0.8]).unwrap();
        let grid = BoundaryGrid::new(3, 48).unwrap();
        let nu = c(0.25, 1.5);
        let a = poisson_integral(&phi, nu, &x, &m).unwrap();
        let b = poisson_integral_quadrature(&phi, nu, &x, &m, &grid);
        assert!((a - b).norm() < 1e-10, "{a} {b}");
        let one = BoundaryFunction::from_coeffs(3, 0, &[(Harmonic::constant(), real(1.0))]).unwrap();
        let v = poisson_integral(&one, nu, &x, &m).unwrap();
        assert!((v - spherical_fn(-nu, 0.6, &m).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn tube_membership() {
        let m = mp(3);
        assert!(SpectralParam::in_tube(c(0.5, 1.0), 0.5, &m).is_ok());
        assert!(SpectralParam::in_tube(c(0.6, 1.0), 0.5, &m).is_err());
    }
}
