//! Boundary harmonics on `S^{p-1}`.
//!
//! * `p = 2`: Fourier modes `e^{i m theta}`, where `b = (sin theta, cos theta)`
//!   so that `theta` is the angle from the north pole `eM`.
//! * `p = 3`: real spherical harmonics `Y_{l,mu}` in polar angle `theta` from
//!   the north pole and azimuth `phi`; `mu > 0` carries `cos(mu phi)` and
//!   `mu < 0` carries `sin(|mu| phi)`.
//! * `p >= 4`: constants only.
//!
//! Every basis is orthonormal for the rotation-invariant probability measure.

use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::geometry::BoundaryPoint;
use crate::numerics::{c, gamma_ln, real, Complex, QuadratureRule};

/// One basis harmonic: its degree and its index within the degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Harmonic {
    pub degree: usize,
    pub order: i64,
}

impl Harmonic {
    pub fn new(degree: usize, order: i64) -> Self {
        Harmonic { degree, order }
    }

    pub fn constant() -> Self {
        Harmonic { degree: 0, order: 0 }
    }

    /// Fourier mode `e^{i m theta}` on the circle.
    pub fn mode(m: i64) -> Self {
        Harmonic { degree: m.unsigned_abs() as usize, order: m }
    }

    pub fn is_valid(&self, p: usize) -> bool {
        match p {
            2 => self.order.unsigned_abs() as usize == self.degree,
            3 => self.order.unsigned_abs() as usize <= self.degree,
            _ => self.degree == 0 && self.order == 0,
        }
    }
}

/// All basis harmonics of degree `<= lmax`, sorted.
pub fn basis(p: usize, lmax: usize) -> Vec<Harmonic> {
    match p {
        2 => {
            let mut out = vec![Harmonic::mode(0)];
            for l in 1..=lmax as i64 {
                out.push(Harmonic::mode(-l));
                out.push(Harmonic::mode(l));
            }
            out.sort();
            out
        }
        3 => (0..=lmax)
            .flat_map(|l| (-(l as i64)..=l as i64).map(move |mu| Harmonic::new(l, mu)))
            .collect(),
        _ => vec![Harmonic::constant()],
    }
}

/// Harmonics of one degree, in basis order.
pub fn degree_block(p: usize, degree: usize) -> Vec<Harmonic> {
    match p {
        2 => {
            if degree == 0 {
                vec![Harmonic::mode(0)]
            } else {
                vec![Harmonic::mode(-(degree as i64)), Harmonic::mode(degree as i64)]
            }
        }
        3 => (-(degree as i64)..=degree as i64).map(|mu| Harmonic::new(degree, mu)).collect(),
        _ => {
            if degree == 0 {
                vec![Harmonic::constant()]
            } else {
                vec![]
            }
        }
    }
}

/// Polar angle from the north pole, and azimuth for `p = 3`.
pub fn angles(b: &[f64]) -> (f64, f64) {
    let p = b.len();
    match p {
        2 => (b[0].atan2(b[1]), 0.0),
        _ => {
            let last = b[p - 1];
            let rest: f64 = b[..p - 1].iter().map(|x| x * x).sum::<f64>().sqrt();
            let phi = if p == 3 { b[1].atan2(b[0]) } else { 0.0 };
            (rest.atan2(last), phi)
        }
    }
}

/// Value of a basis harmonic at a boundary point.
pub fn eval_harmonic(h: Harmonic, b: &[f64]) -> Complex {
    let p = b.len();
    let (theta, phi) = angles(b);
    match p {
        2 => c(0.0, h.order as f64 * theta).exp(),
        3 => real(real_sph(h.degree, h.order, theta.cos(), theta.sin(), phi)),
        _ => real(1.0),
    }
}

// Associated Legendre P_l^m(x) without the Condon-Shortley phase, sin = sqrt(1 - x^2).
fn assoc_legendre(l: usize, m: usize, x: f64, sin: f64) -> f64 {
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= (2 * k + 1) as f64 * sin;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pm0) / (ll - m) as f64;
        pm0 = pm1;
        pm1 = next;
    }
    pm1
}

fn real_sph(l: usize, mu: i64, x: f64, sin: f64, phi: f64) -> f64 {
    let m = mu.unsigned_abs() as usize;
    let lf = l as f64;
    if m == 0 {
        return (2.0 * lf + 1.0).sqrt() * assoc_legendre(l, 0, x, sin);
    }
    let log_ratio = gamma_ln(real((l - m + 1) as f64)).unwrap().re - gamma_ln(real((l + m + 1) as f64)).unwrap().re;
    let norm = (2.0 * (2.0 * lf + 1.0)).sqrt() * (0.5 * log_ratio).exp();
    let ang = if mu > 0 { (m as f64 * phi).cos() } else { (m as f64 * phi).sin() };
    norm * assoc_legendre(l, m, x, sin) * ang
}

/// Zonal harmonic of degree `l` on `S^{p-1}` normalized to 1 at the pole,
/// as a function of the cosine of the polar angle.
pub fn zonal(p: usize, l: usize, x: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    if p == 2 {
        // Chebyshev T_l.
        let (mut t0, mut t1) = (1.0, x);
        for _ in 1..l {
            let t2 = 2.0 * x * t1 - t0;
            t0 = t1;
            t1 = t2;
        }
        return t1;
    }
    // Gegenbauer C_l^{lambda}(x) / C_l^{lambda}(1), lambda = (p-2)/2.
    let lam = (p as f64 - 2.0) / 2.0;
    let gegen = |x: f64| {
        let (mut c0, mut c1) = (1.0, 2.0 * lam * x);
        for k in 1..l {
            let kf = k as f64;
            let c2 = (2.0 * (kf + lam) * x * c1 - (kf + 2.0 * lam - 1.0) * c0) / (kf + 1.0);
            c0 = c1;
            c1 = c2;
        }
        c1
    };
    gegen(x) / gegen(1.0)
}

/// Dimension of the degree-`l` harmonics on `S^{p-1}`.
pub fn harmonic_dimension(p: usize, l: usize) -> usize {
    match p {
        2 => {
            if l == 0 {
                1
            } else {
                2
            }
        }
        3 => 2 * l + 1,
        _ => {
            if l == 0 {
                1
            } else {
                0
            }
        }
    }
}

/// Eigenvalue of the boundary Laplace-Beltrami operator on degree `l`.
pub fn boundary_laplacian_eigenvalue(p: usize, l: usize) -> f64 {
    -((l * (l + p - 2)) as f64)
}

/// Quadrature on the boundary sphere with weights summing to 1, exact for
/// products of two harmonics of degree `<= lmax`.
#[derive(Debug, Clone)]
pub struct BoundaryGrid {
    pub p: usize,
    pub lmax: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl BoundaryGrid {
    pub fn new(p: usize, lmax: usize) -> Result<Self> {
        match p {
            2 => {
                let n = 2 * lmax + 2;
                let rule = QuadratureRule::periodic(n, 0.0, 2.0 * std::f64::consts::PI);
                Ok(BoundaryGrid {
                    p,
                    lmax,
                    points: rule.nodes.iter().map(|th| vec![th.sin(), th.cos()]).collect(),
                    weights: rule.weights.iter().map(|w| w / (2.0 * std::f64::consts::PI)).collect(),
                })
            }
            3 => {
                let ct = QuadratureRule::gauss_legendre(lmax + 2, -1.0, 1.0);
                let nphi = 2 * lmax + 2;
                let ph = QuadratureRule::periodic(nphi, 0.0, 2.0 * std::f64::consts::PI);
                let mut points = Vec::with_capacity(ct.len() * nphi);
                let mut weights = Vec::with_capacity(ct.len() * nphi);
                for (x, wx) in ct.nodes.iter().zip(&ct.weights) {
                    let s = (1.0 - x * x).sqrt();
                    for (phi, wp) in ph.nodes.iter().zip(&ph.weights) {
                        points.push(vec![s * phi.cos(), s * phi.sin(), *x]);
                        weights.push(wx * wp / (4.0 * std::f64::consts::PI));
                    }
                }
                Ok(BoundaryGrid { p, lmax, points, weights })
            }
            _ if p >= 4 => {
                // Meridian nodes carrying the zonal density; exact for constants.
                let rule = QuadratureRule::gauss_legendre(8, 0.0, std::f64::consts::PI);
                let dens: Vec<f64> = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(th, w)| w * th.sin().powi(p as i32 - 2))
                    .collect();
                let total: f64 = dens.iter().sum();
                let points = rule
                    .nodes
                    .iter()
                    .map(|th| {
                        let mut v = vec![0.0; p];
                        v[0] = th.sin();
                        v[p - 1] = th.cos();
                        v
                    })
                    .collect();
                Ok(BoundaryGrid { p, lmax: 0, points, weights: dens.iter().map(|d| d / total).collect() })
            }
            _ => Err(HyperError::UnsupportedDimension(p)),
        }
    }

    pub fn boundary_point(&self, i: usize) -> BoundaryPoint {
        BoundaryPoint(self.points[i].clone())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bases_are_orthonormal() {
        for p in [2usize, 3] {
            let lmax = 5;
            let grid = BoundaryGrid::new(p, lmax).unwrap();
            let hs = basis(p, lmax);
            for a in &hs {
                for b in &hs {
                    let mut acc = real(0.0);
                    for (pt, w) in grid.points.iter().zip(&grid.weights) {
                        acc += eval_harmonic(*a, pt) * eval_harmonic(*b, pt).conj() * *w;
                    }
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((acc - real(want)).norm() < 1e-12, "p={p} {a:?} {b:?} {acc}");
                }
            }
        }
    }

    #[test]
    fn zonal_matches_basis_at_pole() {
        for l in 0..6 {
            let y = eval_harmonic(Harmonic::new(l, 0), &[0.0, 0.0, 1.0]);
            assert!((y.re - ((2 * l + 1) as f64).sqrt()).abs() < 1e-12);
            let b = [0.6, 0.0, 0.8];
            let y = eval_harmonic(Harmonic::new(l, 0), &b);
            assert!((y.re - ((2 * l + 1) as f64).sqrt() * zonal(3, l, 0.8)).abs() < 1e-12);
            let th = 0.7f64;
            assert!((zonal(2, l, th.cos()) - (l as f64 * th).cos()).abs() < 1e-12);
        }
        assert!((zonal(5, 2, 1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dimensions() {
        assert_eq!(basis(3, 4).len(), 25);
        assert_eq!(basis(2, 4).len(), 9);
        assert_eq!(degree_block(3, 2).len(), harmonic_dimension(3, 2));
        assert_eq!(boundary_laplacian_eigenvalue(3, 2), -6.0);
    }
}
