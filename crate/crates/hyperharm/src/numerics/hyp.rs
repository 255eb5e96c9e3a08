//! Gauss hypergeometric function on the closed negative half-line.
//!
//! Near the origin the Pfaff transformation
//! `2F1(a,b;c;x) = (1-x)^{-a} 2F1(a,c-b;c;x/(x-1))` turns the problem into a
//! positive-argument power series, which is summed directly. That series
//! suffers catastrophic cancellation once `|a (c-b)| x/(x-1)` is large and
//! converges arbitrarily slowly as `x -> -inf`, so beyond a well-conditioned
//! start point the function is continued along the real axis by local Taylor
//! expansions of the hypergeometric differential equation
//! `x(1-x) F'' + (c - (a+b+1) x) F' - ab F = 0`.
//! Each step stays well inside the local disc of convergence and is short
//! enough that the oscillation of `|x|^{-a}`, `|x|^{-b}` is resolved, so no
//! step cancels more than a few digits.

use super::{real, Complex};
use crate::error::{HyperError, Result};

const TERM_CAP: usize = 10_000;
const PFAFF_MAX_W: f64 = 0.75;
const PFAFF_MAX_CANCELLATION: f64 = 1e4;

#[derive(Clone, Copy)]
struct Params {
    a: Complex,
    b: Complex,
    c: Complex,
}

impl Params {
    // Orders (a, b) so that the result is exactly symmetric in them.
    fn canonical(a: Complex, b: Complex, c: Complex) -> Self {
        let swap = (b.re, b.im) < (a.re, a.im);
        if swap {
            Params { a: b, b: a, c }
        } else {
            Params { a, b, c }
        }
    }
}

struct SeriesValue {
    value: Complex,
    derivative: Complex,
    cancellation: f64,
}

fn validate(c: Complex, x: f64) -> Result<()> {
    if !(x <= 0.0) {
        return Err(HyperError::InvalidParameter(format!(
            "hyp2f1 needs x <= 0, got {x}"
        )));
    }
    if c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round() {
        return Err(HyperError::InvalidParameter(format!(
            "hyp2f1 lower parameter is a pole: {c}"
        )));
    }
    Ok(())
}

// Pfaff-transformed series at x <= 0, with the x-derivative.
fn pfaff_series(p: Params, x: f64) -> Result<SeriesValue> {
    let w = x / (x - 1.0);
    let b2 = p.c - p.b;
    let mut term = real(1.0);
    let mut sum = real(1.0);
    let mut dsum = real(0.0);
    let mut biggest: f64 = 1.0;
    let mut quiet = 0;
    let mut converged = false;
    for k in 0..TERM_CAP {
        let kf = k as f64;
        term *= (p.a + kf) * (b2 + kf) / ((p.c + kf) * (kf + 1.0)) * w;
        sum += term;
        // d/dw of term_{k+1} w^{k+1} is (k+1) term / w; track it without dividing by w.
        dsum += term * (kf + 1.0);
        biggest = biggest.max(term.norm());
        if term.norm() <= 1e-17 * sum.norm() {
            quiet += 1;
            if quiet >= 2 {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
        if term.norm() == 0.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(HyperError::NonConvergence(format!(
            "Pfaff series at x = {x} did not settle in {TERM_CAP} terms"
        )));
    }
    let one_minus_x = 1.0 - x;
    let pref = real(one_minus_x).powc(-p.a);
    let value = pref * sum;
    // dS/dw = dsum / w; dw/dx = -1/(x-1)^2.
    let ds_dx = if w == 0.0 {
        p.a * (p.c - p.b) / p.c * (-1.0)
    } else {
        dsum / w * (-1.0 / ((x - 1.0) * (x - 1.0)))
    };
    let derivative = p.a / one_minus_x * value + pref * ds_dx;
    Ok(SeriesValue {
        value,
        derivative,
        cancellation: biggest / sum.norm().max(1e-300),
    })
}

// One Taylor step of the hypergeometric ODE from x0 to x0 + u.
fn taylor_step(p: Params, x0: f64, f0: Complex, df0: Complex, u: f64) -> Result<(Complex, Complex)> {
    let p0 = x0 * (1.0 - x0);
    let p1 = 1.0 - 2.0 * x0;
    let q0 = p.c - (p.a + p.b + 1.0) * x0;
    let q1 = -(p.a + p.b + 1.0);
    let ab = p.a * p.b;
    // d_k = c_k u^k
    let mut dk = f0;
    let mut dk1 = df0 * u;
    let mut value = dk + dk1;
    let mut deriv_u = dk1; // sum k d_k
    let mut quiet = 0;
    for k in 0..TERM_CAP {
        let kf = k as f64;
        let num = (q0 * (kf + 1.0) + p1 * kf * (kf + 1.0)) * dk1 * u
            + (ab * (-1.0) - kf * (kf - 1.0) + q1 * kf) * dk * (u * u);
        let dk2 = -num / (p0 * (kf + 1.0) * (kf + 2.0));
        value += dk2;
        deriv_u += dk2 * (kf + 2.0);
        dk = dk1;
        dk1 = dk2;
        let scale = value.norm() + deriv_u.norm();
        if dk.norm() + dk1.norm() <= 1e-18 * scale {
            quiet += 1;
            if quiet >= 3 {
                return Ok((value, deriv_u / u));
            }
        } else {
            quiet = 0;
        }
    }
    Err(HyperError::NonConvergence(format!(
        "Taylor continuation step at x = {x0} did not settle"
    )))
}

fn start_point(p: Params) -> f64 {
    let size = p.a.norm() * (p.c - p.b).norm() + 1.0;
    let w = (2.25 / size).min(0.5);
    -w / (1.0 - w)
}

fn step_length(p: Params, x0: f64) -> f64 {
    let scale = p.a.norm().max(p.b.norm()) + 1.0;
    let radius = x0.abs().min((1.0 - x0).abs());
    radius * (1.5 / scale).min(0.5)
}

/// `2F1(a, b; c; x)` for `x <= 0`.
pub fn hyp2f1(a: Complex, b: Complex, c: Complex, x: f64) -> Result<Complex> {
    validate(c, x)?;
    if x == 0.0 {
        return Ok(real(1.0));
    }
    let p = Params::canonical(a, b, c);
    let w = x / (x - 1.0);
    if w <= PFAFF_MAX_W {
        if let Ok(s) = pfaff_series(p, x) {
            if s.cancellation <= PFAFF_MAX_CANCELLATION {
                return Ok(s.value);
            }
        }
    }
    Ok(continue_to(p, &[x])?[0])
}

/// `2F1(a, b; c; x)` on many arguments at once, sharing one continuation
/// sweep. Arguments may come in any order.
pub fn hyp2f1_profile(a: Complex, b: Complex, c: Complex, xs: &[f64]) -> Result<Vec<Complex>> {
    for &x in xs {
        validate(c, x)?;
    }
    let p = Params::canonical(a, b, c);
    continue_to(p, xs)
}

fn continue_to(p: Params, xs: &[f64]) -> Result<Vec<Complex>> {
    let xs_start = start_point(p);
    let mut order: Vec<usize> = (0..xs.len()).collect();
    // Sweep from the origin outwards.
    order.sort_by(|&i, &j| xs[j].partial_cmp(&xs[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = vec![real(0.0); xs.len()];
    let start = pfaff_series(p, xs_start)?;
    let (mut x0, mut f0, mut df0) = (xs_start, start.value, start.derivative);
    for idx in order {
        let target = xs[idx];
        if target == 0.0 {
            out[idx] = real(1.0);
            continue;
        }
        if target >= xs_start {
            out[idx] = pfaff_series(p, target)?.value;
            continue;
        }
        while x0 > target {
            let u = -step_length(p, x0).min(x0 - target);
            let (f1, df1) = taylor_step(p, x0, f0, df0, u)?;
            x0 = if x0 + u < target { target } else { x0 + u };
            f0 = f1;
            df0 = df1;
        }
        if !(f0.re.is_finite() && f0.im.is_finite()) {
            return Err(HyperError::NonConvergence(format!(
                "continuation overflowed before x = {target}"
            )));
        }
        out[idx] = f0;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn zero_argument_is_one() {
        assert_eq!(hyp2f1(c(3.0, 1.0), c(-2.0, 5.0), real(1.5), 0.0).unwrap(), real(1.0));
    }

    #[test]
    fn log_identity() {
        let v = hyp2f1(real(1.0), real(1.0), real(2.0), -1.0).unwrap();
        assert!((v.re - 2f64.ln()).abs() < 1e-14 && v.im.abs() < 1e-15);
    }

    #[test]
    fn rejects_positive_argument_and_pole() {
        assert!(hyp2f1(real(1.0), real(1.0), real(2.0), 0.5).is_err());
        assert!(hyp2f1(real(1.0), real(1.0), real(-2.0), -0.5).is_err());
    }

    // Frozen 30-digit reference values.
    #[test]
    fn reference_values() {
        let v = hyp2f1(c(0.5, 2.0), c(0.5, -2.0), real(1.5), -1.2).unwrap();
        assert!(rel(v, real(-0.137_664_255_153_671_81)) < 1e-13, "{v}");
        let v = hyp2f1(c(1.3, 20.0), c(1.3, -20.0), real(1.5), -5000.0).unwrap();
        assert!(rel(v, real(-6.316_724_679_013_740_5e-8)) < 1e-10, "{v}");
    }

    #[test]
    fn symmetric_in_upper_parameters() {
        let (a, b, cc) = (c(0.7, 3.0), c(-1.1, 0.4), c(2.5, 0.0));
        for x in [-0.3, -4.0, -1e6] {
            assert_eq!(hyp2f1(a, b, cc, x).unwrap(), hyp2f1(b, a, cc, x).unwrap());
        }
    }

    #[test]
    fn profile_matches_pointwise() {
        let (a, b, cc) = (c(1.0, 7.0), c(1.0, -7.0), real(1.5));
        let xs = [-0.01, -20.0, -3.0, -1e8];
        let prof = hyp2f1_profile(a, b, cc, &xs).unwrap();
        for (x, v) in xs.iter().zip(prof) {
            let single = hyp2f1(a, b, cc, *x).unwrap();
            assert!((v - single).norm() <= 1e-12 * single.norm().max(1e-30), "{x}");
        }
    }

    // Terminating series: 2F1(-2, b; c; x) is a quadratic polynomial.
    #[test]
    fn polynomial_case_far_out() {
        let (b, cc) = (real(3.0), real(2.5));
        let x = -1e4;
        let exact = 1.0 + (-2.0 * 3.0 / 2.5) * x + (-2.0 * -1.0 * 3.0 * 4.0 / (2.5 * 3.5 * 2.0)) * x * x;
        let v = hyp2f1(real(-2.0), b, cc, x).unwrap();
        assert!(rel(v, real(exact)) < 1e-12, "{v} vs {exact}");
    }
}
