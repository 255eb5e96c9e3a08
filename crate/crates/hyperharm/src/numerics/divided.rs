use super::Complex;
use crate::error::{HyperError, Result};

/// Samples whose root at `nu0` vanishes within this tolerance.
pub const ROOT_TOLERANCE: f64 = 1e-8;
/// Grid points this close to the root take the derivative branch.
pub const ROOT_NEIGHBOURHOOD: f64 = 1e-6;

// Central-difference weights for the first derivative, half-widths 1..=4.
const CENTRAL: [&[f64]; 4] = [
    &[1.0 / 2.0],
    &[2.0 / 3.0, -1.0 / 12.0],
    &[3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0],
    &[4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0],
];

/// Output of [`divided_difference`].
#[derive(Debug, Clone, PartialEq)]
pub struct DividedDifference {
    pub values: Vec<Complex>,
    /// Indices where the derivative branch replaced the quotient.
    pub guarded: Vec<usize>,
}

/// `h#(nu) = (h(nu) - h(nu0)) / (nu - nu0)` on samples along a uniform line.
///
/// At grid points within [`ROOT_NEIGHBOURHOOD`] of `nu0` the quotient is
/// replaced by `h'(nu0)`, which is what `int_0^1 h'(nu0 + s (nu - nu0)) ds`
/// tends to; it is estimated by the widest central difference the grid
/// supports (up to eighth order).
pub fn divided_difference(nus: &[Complex], h: &[Complex], nu0: Complex) -> Result<DividedDifference> {
    if nus.len() != h.len() {
        return Err(HyperError::LengthMismatch {
            expected: nus.len(),
            got: h.len(),
        });
    }
    if nus.len() < 2 {
        return Err(HyperError::InvalidParameter("need at least two samples".into()));
    }
    let (nearest, dist) = nus
        .iter()
        .enumerate()
        .map(|(i, nu)| (i, (nu - nu0).norm()))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    let spacing = (nus[1] - nus[0]).norm();
    if dist > spacing * (1.0 + 1e-9) {
        return Err(HyperError::InvalidParameter(format!(
            "nu0 = {nu0} lies more than one grid cell from the samples"
        )));
    }
    let h0 = if dist <= ROOT_NEIGHBOURHOOD {
        if h[nearest].norm() > ROOT_TOLERANCE {
            return Err(HyperError::NonvanishingAtRoot(h[nearest].norm()));
        }
        h[nearest]
    } else {
        // Off the grid the root value is only known to interpolation accuracy.
        let wide = interpolate_root(nus, h, nearest, nu0, 6);
        let narrow = interpolate_root(nus, h, nearest, nu0, 4);
        let slack = 10.0 * (wide - narrow).norm();
        if wide.norm() > ROOT_TOLERANCE + slack {
            return Err(HyperError::NonvanishingAtRoot(wide.norm()));
        }
        Complex::new(0.0, 0.0)
    };
    let mut values = Vec::with_capacity(h.len());
    let mut guarded = Vec::new();
    for (i, (nu, hv)) in nus.iter().zip(h).enumerate() {
        if (nu - nu0).norm() <= ROOT_NEIGHBOURHOOD {
            values.push(central_derivative(nus, h, i)?);
            guarded.push(i);
        } else {
            values.push((hv - h0) / (nu - nu0));
        }
    }
    Ok(DividedDifference { values, guarded })
}

fn central_derivative(nus: &[Complex], h: &[Complex], i: usize) -> Result<Complex> {
    let n = nus.len();
    let half = i.min(n - 1 - i).min(CENTRAL.len());
    if half == 0 {
        // One-sided second-order difference at an end of the grid.
        if n < 3 {
            return Err(HyperError::InvalidParameter("too few samples for a derivative".into()));
        }
        let (a, b, c, step) = if i == 0 {
            (h[0], h[1], h[2], nus[1] - nus[0])
        } else {
            (h[n - 1], h[n - 2], h[n - 3], nus[n - 2] - nus[n - 1])
        };
        return Ok((a * -1.5 + b * 2.0 - c * 0.5) / step);
    }
    let step = (nus[i + 1] - nus[i - 1]) / 2.0;
    let weights = CENTRAL[half - 1];
    let mut acc = Complex::new(0.0, 0.0);
    for (k, w) in weights.iter().enumerate() {
        acc += (h[i + k + 1] - h[i - k - 1]) * *w;
    }
    Ok(acc / step)
}

// Lagrange estimate of h(nu0) from `points` samples around the nearest one.
fn interpolate_root(nus: &[Complex], h: &[Complex], nearest: usize, nu0: Complex, points: usize) -> Complex {
    let n = nus.len();
    let lo = nearest.saturating_sub(points / 2).min(n.saturating_sub(points));
    let hi = (lo + points).min(n);
    let mut acc = Complex::new(0.0, 0.0);
    for j in lo..hi {
        let mut basis = Complex::new(1.0, 0.0);
        for m in lo..hi {
            if m != j {
                basis *= (nu0 - nus[m]) / (nus[j] - nus[m]);
            }
        }
        acc += h[j] * basis;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, real};

    fn line(n: usize, step: f64, sigma: f64) -> Vec<Complex> {
        (0..n).map(|k| c(sigma, (k as f64 - (n / 2) as f64) * step)).collect()
    }

    #[test]
    fn linear_gives_one() {
        let nus = line(33, 1.0 / 16.0, 1.0);
        let nu0 = c(1.0, 0.0);
        let h: Vec<_> = nus.iter().map(|nu| nu - nu0).collect();
        let out = divided_difference(&nus, &h, nu0).unwrap();
        assert_eq!(out.guarded, vec![16]);
        for v in out.values {
            assert!((v - real(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn quadratic_gives_shift() {
        let nus = line(33, 1.0 / 16.0, 1.0);
        let nu0 = c(1.0, 0.0);
        let h: Vec<_> = nus.iter().map(|nu| (nu - nu0) * (nu - nu0)).collect();
        let out = divided_difference(&nus, &h, nu0).unwrap();
        for (nu, v) in nus.iter().zip(out.values) {
            assert!((v - (nu - nu0)).norm() < 1e-12);
        }
    }

    #[test]
    fn nonvanishing_root_rejected() {
        let nus = line(9, 0.1, 0.0);
        let h = vec![real(1.0); 9];
        assert!(matches!(
            divided_difference(&nus, &h, real(0.0)),
            Err(HyperError::NonvanishingAtRoot(_))
        ));
    }

    #[test]
    fn off_grid_root_within_a_cell() {
        let nus = line(17, 0.1, 0.0);
        let nu0 = c(0.0, 0.05);
        let h: Vec<_> = nus.iter().map(|nu| (nu - nu0) * nu.exp()).collect();
        let out = divided_difference(&nus, &h, nu0).unwrap();
        assert!(out.guarded.is_empty());
        for (nu, v) in nus.iter().zip(out.values) {
            assert!((v - nu.exp()).norm() < 1e-8);
        }
    }
}
