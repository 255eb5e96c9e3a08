//! Models of `H^p`, the horocycle bracket and the invariant measure.
//!
//! Conventions: the base point `o` is the origin of the ball and `(y, x) =
//! (1, 0)` in the upper half-space. The distinguished boundary point `eM` is
//! the north pole `e_p` of the ball, which is `y = infinity` in the
//! half-space, and `a_t o` is the point at distance `t` towards it. With these
//! choices `A(a_t n o, eM) = t` for every horocyclic translate `n`.

use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::numerics::gamma_ln;
use crate::numerics::real;

/// Dimension data of `H^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub p: usize,
    pub n: usize,
    pub rho: f64,
}

impl ModelParams {
    pub fn new(p: usize) -> Result<Self> {
        if p < 2 {
            return Err(HyperError::UnsupportedDimension(p));
        }
        Ok(ModelParams {
            p,
            n: p - 1,
            rho: (p - 1) as f64 / 2.0,
        })
    }

    /// Area of the unit sphere `S^{p-1}`.
    pub fn sphere_area(&self) -> f64 {
        sphere_area(self.p)
    }

    /// Area of the unit sphere `S^{n-1}` inside the horocycle `R^n`.
    pub fn horocycle_sphere_area(&self) -> f64 {
        sphere_area(self.n)
    }
}

/// `2 pi^{d/2} / Gamma(d/2)`, the area of `S^{d-1}`; `d = 1` gives 2.
pub fn sphere_area(d: usize) -> f64 {
    let half = d as f64 / 2.0;
    let lg = gamma_ln(real(half)).expect("positive argument").re;
    2.0 * (half * std::f64::consts::PI.ln() - lg).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    Polar,
    Ball,
    HalfSpace,
}

/// A point of `H^p` in one of three coordinate models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HyperbolicPoint {
    /// Cartan radial coordinate `t >= 0` and a unit direction in `R^p`.
    Polar { t: f64, omega: Vec<f64> },
    /// Point of the open unit ball.
    Ball(Vec<f64>),
    /// Height `y > 0` and horizontal coordinates in `R^{p-1}`.
    HalfSpace { y: f64, x: Vec<f64> },
}

/// A point of the sphere at infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint(pub Vec<f64>);

impl BoundaryPoint {
    pub fn new(v: Vec<f64>) -> Result<Self> {
        let norm = dot(&v, &v).sqrt();
        if !(norm > 0.0) {
            return Err(HyperError::InvalidParameter("zero boundary vector".into()));
        }
        Ok(BoundaryPoint(v.iter().map(|c| c / norm).collect()))
    }

    pub fn north(p: usize) -> Self {
        BoundaryPoint(north(p))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

pub fn north(p: usize) -> Vec<f64> {
    let mut v = vec![0.0; p];
    v[p - 1] = 1.0;
    v
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

fn normalized_or_north(v: &[f64]) -> Vec<f64> {
    let n = norm_sq(v).sqrt();
    if n > 0.0 {
        v.iter().map(|c| c / n).collect()
    } else {
        north(v.len())
    }
}

impl HyperbolicPoint {
    pub fn origin(p: usize) -> Self {
        HyperbolicPoint::Polar { t: 0.0, omega: north(p) }
    }

    /// `a_t o`, the point at signed distance `t` along the axis.
    pub fn on_axis(p: usize, t: f64) -> Self {
        let mut omega = north(p);
        if t < 0.0 {
            omega[p - 1] = -1.0;
        }
        HyperbolicPoint::Polar { t: t.abs(), omega }
    }

    pub fn polar(t: f64, omega: Vec<f64>) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(HyperError::InvalidParameter(format!("polar radius {t} < 0")));
        }
        Ok(HyperbolicPoint::Polar { t, omega: normalized_or_north(&omega) })
    }

    pub fn dim(&self) -> usize {
        match self {
            HyperbolicPoint::Polar { omega, .. } => omega.len(),
            HyperbolicPoint::Ball(v) => v.len(),
            HyperbolicPoint::HalfSpace { x, .. } => x.len() + 1,
        }
    }

    pub fn model(&self) -> Model {
        match self {
            HyperbolicPoint::Polar { .. } => Model::Polar,
            HyperbolicPoint::Ball(_) => Model::Ball,
            HyperbolicPoint::HalfSpace { .. } => Model::HalfSpace,
        }
    }

    /// `(t, omega)` of this point.
    pub fn to_polar(&self) -> Result<(f64, Vec<f64>)> {
        match convert(self, Model::Polar)? {
            HyperbolicPoint::Polar { t, omega } => Ok((t, omega)),
            _ => unreachable!(),
        }
    }
}

/// Conversion between models. Mutually inverse to rounding.
pub fn convert(x: &HyperbolicPoint, target: Model) -> Result<HyperbolicPoint> {
    check_valid(x)?;
    if x.model() == target {
        return Ok(x.clone());
    }
    let out = match (x, target) {
        (HyperbolicPoint::Polar { t, omega }, Model::Ball) => {
            let r = (t / 2.0).tanh();
            HyperbolicPoint::Ball(omega.iter().map(|c| r * c).collect())
        }
        (HyperbolicPoint::Ball(v), Model::Polar) => {
            let r = norm_sq(v).sqrt();
            HyperbolicPoint::Polar { t: 2.0 * r.atanh(), omega: normalized_or_north(v) }
        }
        (HyperbolicPoint::Ball(v), Model::HalfSpace) => ball_to_halfspace(v),
        (HyperbolicPoint::HalfSpace { y, x }, Model::Ball) => {
            let dir = halfspace_direction(*y, x);
            let r = (halfspace_distance(*y, x) / 2.0).tanh();
            HyperbolicPoint::Ball(dir.iter().map(|c| r * c).collect())
        }
        (HyperbolicPoint::HalfSpace { y, x }, Model::Polar) => {
            let dir = halfspace_direction(*y, x);
            HyperbolicPoint::Polar { t: halfspace_distance(*y, x), omega: dir }
        }
        (HyperbolicPoint::Polar { .. }, Model::HalfSpace) => {
            let ball = convert(x, Model::Ball)?;
            convert(&ball, Model::HalfSpace)?
        }
        _ => unreachable!(),
    };
    Ok(out)
}

fn check_valid(x: &HyperbolicPoint) -> Result<()> {
    match x {
        HyperbolicPoint::Ball(v) => {
            if norm_sq(v).sqrt() >= 1.0 - 1e-14 {
                return Err(HyperError::BoundaryDegeneracy(format!(
                    "ball point of norm {}",
                    norm_sq(v).sqrt()
                )));
            }
        }
        HyperbolicPoint::HalfSpace { y, .. } => {
            if !(*y > 1e-300) {
                return Err(HyperError::BoundaryDegeneracy(format!("half-space height {y}")));
            }
        }
        HyperbolicPoint::Polar { t, .. } => {
            if !(t.is_finite() && *t >= 0.0) {
                return Err(HyperError::InvalidParameter(format!("polar radius {t}")));
            }
        }
    }
    Ok(())
}

fn ball_to_halfspace(v: &[f64]) -> HyperbolicPoint {
    let p = v.len();
    let s = v[p - 1];
    let u = &v[..p - 1];
    let denom = norm_sq(u) + (1.0 - s) * (1.0 - s);
    let y = (1.0 - norm_sq(v)) / denom;
    HyperbolicPoint::HalfSpace { y, x: u.iter().map(|c| 2.0 * c / denom).collect() }
}

// Unit direction of the ball image of (y, x): proportional to (2x, |x|^2 + y^2 - 1).
fn halfspace_direction(y: f64, x: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = x.iter().map(|c| 2.0 * c).collect();
    v.push(norm_sq(x) + (y - 1.0) * (y + 1.0));
    normalized_or_north(&v)
}

// Distance from (1, 0): sinh(d/2) = sqrt(|x|^2 + (y-1)^2) / (2 sqrt y).
fn halfspace_distance(y: f64, x: &[f64]) -> f64 {
    let num = (norm_sq(x) + (y - 1.0) * (y - 1.0)).sqrt();
    2.0 * (num / (2.0 * y.sqrt())).asinh()
}

/// `A(x, b)`; in the ball model `log((1 - |x|^2) / |x - b|^2)`.
///
/// Polar and half-space points use the equivalent form
/// `-log(e^{-t} + sinh t (1 - omega.b))`, which keeps full relative accuracy
/// at large `t`.
pub fn horocycle_bracket(x: &HyperbolicPoint, b: &BoundaryPoint, mp: &ModelParams) -> f64 {
    debug_assert_eq!(b.dim(), mp.p);
    match x {
        HyperbolicPoint::Ball(v) => {
            let diff: Vec<f64> = v.iter().zip(&b.0).map(|(a, c)| a - c).collect();
            ((1.0 - norm_sq(v)) / norm_sq(&diff)).ln()
        }
        HyperbolicPoint::Polar { t, omega } => polar_bracket(*t, omega, &b.0),
        HyperbolicPoint::HalfSpace { .. } => {
            let (t, omega) = x.to_polar().expect("validated point");
            polar_bracket(t, &omega, &b.0)
        }
    }
}

fn polar_bracket(t: f64, omega: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = omega.iter().zip(b).map(|(a, c)| a - c).collect();
    let one_minus_cos = 0.5 * norm_sq(&diff);
    -((-t).exp() + t.sinh() * one_minus_cos).ln()
}

/// `A(a_t o, b)` for a boundary point at polar angle `theta` from `eM`,
/// given through `1 - cos(theta)`.
pub fn axis_bracket(t: f64, one_minus_cos: f64) -> f64 {
    -((-t).exp() + t.sinh() * one_minus_cos).ln()
}

/// Cartan radial coordinate.
pub fn polar_distance(x: &HyperbolicPoint) -> Result<f64> {
    check_valid(x)?;
    Ok(match x {
        HyperbolicPoint::Polar { t, .. } => *t,
        HyperbolicPoint::Ball(v) => 2.0 * norm_sq(v).sqrt().atanh(),
        HyperbolicPoint::HalfSpace { y, x } => halfspace_distance(*y, x),
    })
}

/// Density `sinh^n t` of the polar measure.
pub fn volume_weight(t: f64, mp: &ModelParams) -> f64 {
    t.sinh().powi(mp.n as i32)
}

/// The point `a_t n_xi o`, i.e. the half-space point `(e^t, e^t xi)`, in
/// polar form. Its distance `d` from `o` satisfies
/// `cosh d = cosh t + e^t |xi|^2 / 2`.
pub fn horocyclic_compose(t: f64, xi: &[f64]) -> HyperbolicPoint {
    let (d, _) = horocyclic_radial(t, norm_sq(xi).sqrt());
    let et = t.exp();
    let mut v: Vec<f64> = xi.iter().map(|c| 2.0 * et * c).collect();
    v.push(et * et * (norm_sq(xi) + 1.0) - 1.0);
    let omega = if d == 0.0 { north(xi.len() + 1) } else { normalized_or_north(&v) };
    HyperbolicPoint::Polar { t: d, omega }
}

/// Polar distance `d` of `a_t n_xi o` and the cosine of the angle between
/// its direction and `eM`, given only `r = |xi|`.
pub fn horocyclic_radial(t: f64, r: f64) -> (f64, f64) {
    // cosh d - 1 = (cosh t - 1) + e^t r^2 / 2, both terms >= 0.
    let et = t.exp();
    let half_sinh_sq = (t / 2.0).sinh().powi(2);
    let cosh_minus_one = 2.0 * half_sinh_sq + 0.5 * et * r * r;
    let d = 2.0 * (0.5 * cosh_minus_one).sqrt().asinh();
    // Ball direction is proportional to (2 e^t r, e^{2t}(r^2+1) - 1).
    let a = 2.0 * et * r;
    let b = et * et * r * r + (et - 1.0) * (et + 1.0);
    let len = a.hypot(b);
    let cos_angle = if len > 0.0 { b / len } else { 1.0 };
    (d, cos_angle)
}

/// An orthogonal map of `R^p`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    pub p: usize,
    pub m: Vec<f64>,
}

impl Rotation {
    pub fn identity(p: usize) -> Self {
        let mut m = vec![0.0; p * p];
        for i in 0..p {
            m[i * p + i] = 1.0;
        }
        Rotation { p, m }
    }

    /// Rotation by `angle` in the `(i, j)` coordinate plane.
    pub fn givens(p: usize, i: usize, j: usize, angle: f64) -> Self {
        let mut r = Self::identity(p);
        let (s, c) = angle.sin_cos();
        r.m[i * p + i] = c;
        r.m[j * p + j] = c;
        r.m[i * p + j] = -s;
        r.m[j * p + i] = s;
        r
    }

    /// Product of Givens rotations through all coordinate planes, one angle
    /// each, in lexicographic plane order.
    pub fn from_angles(p: usize, angles: &[f64]) -> Self {
        let mut r = Self::identity(p);
        let mut k = 0;
        for i in 0..p {
            for j in (i + 1)..p {
                let a = angles.get(k).copied().unwrap_or(0.0);
                r = r.compose(&Self::givens(p, i, j, a));
                k += 1;
            }
        }
        r
    }

    /// `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let p = self.p;
        let mut m = vec![0.0; p * p];
        for i in 0..p {
            for j in 0..p {
                m[i * p + j] = (0..p).map(|k| self.m[i * p + k] * other.m[k * p + j]).sum();
            }
        }
        Rotation { p, m }
    }

    pub fn inverse(&self) -> Self {
        let p = self.p;
        let mut m = vec![0.0; p * p];
        for i in 0..p {
            for j in 0..p {
                m[i * p + j] = self.m[j * p + i];
            }
        }
        Rotation { p, m }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let p = self.p;
        (0..p).map(|i| (0..p).map(|k| self.m[i * p + k] * v[k]).sum()).collect()
    }

    pub fn apply_boundary(&self, b: &BoundaryPoint) -> BoundaryPoint {
        BoundaryPoint(self.apply(&b.0))
    }

    /// Rotations act linearly in the ball and polar models.
    pub fn apply_point(&self, x: &HyperbolicPoint) -> Result<HyperbolicPoint> {
        Ok(match x {
            HyperbolicPoint::Polar { t, omega } => HyperbolicPoint::Polar { t: *t, omega: self.apply(omega) },
            HyperbolicPoint::Ball(v) => HyperbolicPoint::Ball(self.apply(v)),
            HyperbolicPoint::HalfSpace { .. } => {
                let ball = convert(x, Model::Ball)?;
                convert(&self.apply_point(&ball)?, Model::HalfSpace)?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(p: usize) -> ModelParams {
        ModelParams::new(p).unwrap()
    }

    #[test]
    fn params() {
        let m = mp(3);
        assert_eq!((m.n, m.rho), (2, 1.0));
        assert!(ModelParams::new(1).is_err());
        assert!((sphere_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
        assert!((sphere_area(1) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bracket_at_origin_is_zero() {
        let b = BoundaryPoint::new(vec![0.3, -0.4, 0.2]).unwrap();
        for x in [HyperbolicPoint::origin(3), HyperbolicPoint::Ball(vec![0.0; 3])] {
            assert!(horocycle_bracket(&x, &b, &mp(3)).abs() < 1e-15);
        }
    }

    #[test]
    fn bracket_towards_endpoint_is_distance() {
        let m = mp(3);
        for t in [0.1, 1.0, 4.0, 9.0] {
            let omega = vec![0.6, 0.0, 0.8];
            let b = BoundaryPoint(omega.clone());
            let x = HyperbolicPoint::polar(t, omega).unwrap();
            assert!((horocycle_bracket(&x, &b, &m) - t).abs() < 1e-12 * t.max(1.0));
            let ball = convert(&x, Model::Ball).unwrap();
            assert!((horocycle_bracket(&ball, &b, &m) - t).abs() < 1e-9);
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(polar_distance(&HyperbolicPoint::origin(2)).unwrap(), 0.0);
        let t = 1.7f64;
        let ball = HyperbolicPoint::Ball(vec![0.0, (t / 2.0).tanh()]);
        assert!((polar_distance(&ball).unwrap() - t).abs() < 1e-13);
        let hs = HyperbolicPoint::HalfSpace { y: (-t).exp(), x: vec![0.0] };
        assert!((polar_distance(&hs).unwrap() - t).abs() < 1e-13);
    }

    #[test]
    fn volume_weight_examples() {
        assert_eq!(volume_weight(0.0, &mp(3)), 0.0);
        assert!((volume_weight(1.0, &mp(3)) - 1.381_097_845_541_816_4).abs() < 1e-14);
        for k in 0..200 {
            let t = k as f64 * 0.1;
            for p in 2..8 {
                let m = mp(p);
                assert!(volume_weight(t, &m) <= (2.0 * m.rho * t).exp());
            }
        }
    }

    #[test]
    fn horocyclic_examples() {
        let (t, omega) = horocyclic_compose(1.3, &[0.0, 0.0]).to_polar().unwrap();
        assert!((t - 1.3).abs() < 1e-14 && omega == vec![0.0, 0.0, 1.0]);
        let (t, omega) = horocyclic_compose(-0.5, &[0.0]).to_polar().unwrap();
        assert!((t - 0.5).abs() < 1e-14 && omega == vec![0.0, -1.0]);
        let x = horocyclic_compose(0.0, &[1e-4, 0.0]);
        assert!((polar_distance(&x).unwrap() - 1e-4).abs() < 1e-12);
        let x = horocyclic_compose(1.0, &[1.0, 0.0]);
        let want = (1f64.cosh() + std::f64::consts::E / 2.0).acosh();
        assert!((polar_distance(&x).unwrap() - want).abs() < 1e-13);
        assert!((want - 1.727_526_617_499_614_7).abs() < 1e-15);
        let hs = HyperbolicPoint::HalfSpace { y: 1f64.exp(), x: vec![1f64.exp(), 0.0] };
        assert!((polar_distance(&hs).unwrap() - want).abs() < 1e-13);
        let back = convert(&x, Model::HalfSpace).unwrap();
        if let HyperbolicPoint::HalfSpace { y, x } = back {
            assert!((y - 1f64.exp()).abs() < 1e-12 && (x[0] - 1f64.exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn bracket_on_horocycle_is_t() {
        let m = mp(3);
        let north = BoundaryPoint::north(3);
        for (t, xi) in [(0.7, [0.3, -1.2]), (-1.1, [2.0, 0.5]), (2.5, [0.0, 0.1])] {
            let x = horocyclic_compose(t, &xi);
            assert!((horocycle_bracket(&x, &north, &m) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn conversions_round_trip() {
        let x = HyperbolicPoint::Ball(vec![0.2, -0.5, 0.3]);
        for target in [Model::Polar, Model::HalfSpace] {
            let y = convert(&x, target).unwrap();
            let z = convert(&y, Model::Ball).unwrap();
            if let HyperbolicPoint::Ball(v) = z {
                for (a, b) in v.iter().zip([0.2, -0.5, 0.3]) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
            assert!((polar_distance(&y).unwrap() - polar_distance(&x).unwrap()).abs() < 1e-12);
        }
        let o = convert(&HyperbolicPoint::origin(3), Model::HalfSpace).unwrap();
        assert_eq!(o, HyperbolicPoint::HalfSpace { y: 1.0, x: vec![0.0, 0.0] });
    }

    #[test]
    fn degenerate_points_rejected() {
        assert!(convert(&HyperbolicPoint::Ball(vec![1.0, 0.0]), Model::Polar).is_err());
        assert!(convert(&HyperbolicPoint::HalfSpace { y: 0.0, x: vec![0.0] }, Model::Polar).is_err());
    }
}
