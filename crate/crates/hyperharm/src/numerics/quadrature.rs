use super::{Complex, NeumaierSum};
use crate::error::{HyperError, Result};

/// Gregory end-correction coefficients, first nine.
const GREGORY: [f64; 9] = [
    1.0 / 12.0,
    1.0 / 24.0,
    19.0 / 720.0,
    3.0 / 160.0,
    863.0 / 60480.0,
    275.0 / 24192.0,
    33953.0 / 3628800.0,
    8183.0 / 1036800.0,
    3250433.0 / 479001600.0,
];

/// Nodes and weights fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: (f64, f64),
}

impl QuadratureRule {
    /// Gauss-Legendre rule with `n` nodes on `[a, b]`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 1);
        let (xs, ws) = legendre_nodes(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        QuadratureRule {
            nodes: xs.iter().map(|x| mid + half * x).collect(),
            weights: ws.iter().map(|w| w * half).collect(),
            domain: (a, b),
        }
    }

    /// Composite Gauss-Legendre with `panels` equal panels of `n` nodes.
    pub fn composite_gauss_legendre(panels: usize, n: usize, a: f64, b: f64) -> Self {
        let mut nodes = Vec::with_capacity(panels * n);
        let mut weights = Vec::with_capacity(panels * n);
        let h = (b - a) / panels as f64;
        for k in 0..panels {
            let r = Self::gauss_legendre(n, a + k as f64 * h, a + (k + 1) as f64 * h);
            nodes.extend(r.nodes);
            weights.extend(r.weights);
        }
        QuadratureRule { nodes, weights, domain: (a, b) }
    }

    /// Plain trapezoid rule with `intervals` equal intervals.
    pub fn trapezoid(intervals: usize, a: f64, b: f64) -> Self {
        assert!(intervals >= 1);
        let h = (b - a) / intervals as f64;
        let nodes = (0..=intervals).map(|k| a + k as f64 * h).collect();
        let mut weights = vec![h; intervals + 1];
        weights[0] = 0.5 * h;
        weights[intervals] = 0.5 * h;
        QuadratureRule { nodes, weights, domain: (a, b) }
    }

    /// Trapezoid rule on the periodic interval `[a, b)`; `n` equispaced nodes.
    pub fn periodic(n: usize, a: f64, b: f64) -> Self {
        let h = (b - a) / n as f64;
        QuadratureRule {
            nodes: (0..n).map(|k| a + k as f64 * h).collect(),
            weights: vec![h; n],
            domain: (a, b),
        }
    }

    /// Trapezoid rule with Gregory end corrections through differences of
    /// order `order` (at most 9). Exact for polynomials of degree `order`.
    pub fn gregory(intervals: usize, a: f64, b: f64, order: usize) -> Self {
        let order = order.min(GREGORY.len()).min(intervals / 2);
        let mut rule = Self::trapezoid(intervals, a, b);
        let h = (b - a) / intervals as f64;
        let last = intervals;
        for k in 1..=order {
            let g = GREGORY[k - 1];
            let sign_left = if k % 2 == 0 { 1.0 } else { -1.0 };
            for j in 0..=k {
                let binom = binomial(k, j);
                // forward difference at the left end
                let fwd = if (k - j) % 2 == 0 { binom } else { -binom };
                rule.weights[j] -= h * g * sign_left * fwd;
                // backward difference at the right end
                let bwd = if j % 2 == 0 { binom } else { -binom };
                rule.weights[last - j] -= h * g * bwd;
            }
        }
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut out = 1.0;
    for i in 0..k {
        out *= (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// Weighted sum of the samples in node order with compensated summation.
pub fn integrate(rule: &QuadratureRule, samples: &[Complex]) -> Result<Complex> {
    if samples.len() != rule.weights.len() {
        return Err(HyperError::LengthMismatch {
            expected: rule.weights.len(),
            got: samples.len(),
        });
    }
    let mut acc = NeumaierSum::new();
    for (w, s) in rule.weights.iter().zip(samples) {
        acc.add(s * *w);
    }
    Ok(acc.value())
}

/// Real-valued counterpart of [`integrate`].
pub fn integrate_real(rule: &QuadratureRule, samples: &[f64]) -> Result<f64> {
    if samples.len() != rule.weights.len() {
        return Err(HyperError::LengthMismatch {
            expected: rule.weights.len(),
            got: samples.len(),
        });
    }
    let mut acc = NeumaierSum::new();
    for (w, s) in rule.weights.iter().zip(samples) {
        acc.add_real(s * w);
    }
    Ok(acc.value().re)
}

// Newton iteration on P_n from Tricomi's initial guesses.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    (xs, ws)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::real;

    fn sample(rule: &QuadratureRule, f: impl Fn(f64) -> f64) -> Vec<Complex> {
        rule.nodes.iter().map(|&x| real(f(x))).collect()
    }

    #[test]
    fn gauss_legendre_quadratic() {
        let r = QuadratureRule::gauss_legendre(8, 0.0, 1.0);
        let v = integrate(&r, &sample(&r, |x| x * x)).unwrap();
        assert!((v.re - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_exact_to_degree_2n_minus_1() {
        for n in [1usize, 5, 16, 64] {
            let r = QuadratureRule::gauss_legendre(n, -1.0, 2.0);
            let deg = 2 * n - 1;
            let v = integrate(&r, &sample(&r, |x| x.powi(deg as i32))).unwrap().re;
            let exact = (2f64.powi(deg as i32 + 1) - (-1f64).powi(deg as i32 + 1)) / (deg as f64 + 1.0);
            assert!((v - exact).abs() <= 1e-12 * exact.abs().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn zero_integrand() {
        let r = QuadratureRule::trapezoid(16, 0.0, 1.0);
        assert_eq!(integrate(&r, &vec![real(0.0); 17]).unwrap(), real(0.0));
    }

    #[test]
    fn trapezoid_exponential() {
        let r = QuadratureRule::trapezoid(4096, 0.0, 1.0);
        let v = integrate(&r, &sample(&r, f64::exp)).unwrap().re;
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-7);
    }

    #[test]
    fn weights_sum_to_length() {
        for r in [
            QuadratureRule::trapezoid(256, 0.0, 3.0),
            QuadratureRule::gregory(256, 0.0, 3.0, 8),
            QuadratureRule::periodic(64, 0.0, 3.0),
        ] {
            let s: f64 = crate::numerics::rsum(r.weights.iter().copied());
            assert!((s - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gregory_is_high_order() {
        let r = QuadratureRule::gregory(64, 0.0, 2.0, 8);
        let v = integrate(&r, &sample(&r, |x| x.powi(7) - 3.0 * x.powi(4))).unwrap().re;
        let exact = 2f64.powi(8) / 8.0 - 3.0 * 2f64.powi(5) / 5.0;
        assert!((v - exact).abs() < 1e-11, "{v} vs {exact}");
        let v = integrate(&r, &sample(&r, f64::sin)).unwrap().re;
        assert!((v - (1.0 - 2f64.cos())).abs() < 1e-14);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let r = QuadratureRule::trapezoid(4, 0.0, 1.0);
        assert!(matches!(
            integrate(&r, &[real(1.0)]),
            Err(HyperError::LengthMismatch { expected: 5, got: 1 })
        ));
    }
}
