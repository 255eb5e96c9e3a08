use super::{real, Complex};

/// Complex polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(real(0.0));
        }
        Polynomial { coeffs }
    }

    pub fn constant(v: Complex) -> Self {
        Self::new(vec![v])
    }

    pub fn one() -> Self {
        Self::constant(real(1.0))
    }

    /// `prod_j (x - r_j)`.
    pub fn from_roots(roots: &[Complex]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| acc.mul(&Self::new(vec![-r, real(1.0)])))
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex) -> Complex {
        self.coeffs.iter().rev().fold(real(0.0), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![real(0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `q(x) = p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { *c } else { -c })
                .collect(),
        )
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(real(0.0));
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    #[test]
    fn roots_and_evaluation() {
        let p = Polynomial::from_roots(&[real(-1.0), real(-2.0)]);
        assert_eq!(p.coeffs(), &[real(2.0), real(3.0), real(1.0)]);
        assert_eq!(p.eval(real(1.0)), real(6.0));
        assert_eq!(p.reflect().eval(real(1.0)), real(0.0));
        assert_eq!(p.derivative().coeffs(), &[real(3.0), real(2.0)]);
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new(vec![c(1.0, 0.0), real(0.0), real(0.0)]);
        assert_eq!(p.degree(), 0);
    }
}
