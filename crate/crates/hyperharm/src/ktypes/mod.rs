//! K-types with an M-fixed vector, boundary projections, the trace and
//! evaluation maps, and the symmetry polynomials `p_delta`.
//!
//! Boundary functions are kept as harmonic coefficients, so the K-integrals
//! in `P_delta` and `P^delta` reduce to exact finite sums (Schur
//! orthogonality) instead of quadrature over K.
//!
//! Representation conventions:
//! * `p = 3`, degree `l`: `delta(k)` is the matrix of the translation action
//!   `(delta(k) Y)(b) = Y(k^{-1} b)` in the real harmonic basis. The M-fixed
//!   vector is the zonal harmonic `Y_{l,0}` and is listed first. `delta` is
//!   self-contragredient.
//! * `p = 2`, mode `m`: `delta_m(k_beta) = e^{i m beta}` for the rotation
//!   `theta -> theta + beta`, with M trivial. The contragredient is `-m`.
//! * other `p`: only the trivial type.

mod harmonics;

pub use harmonics::{
    angles, basis, boundary_laplacian_eigenvalue, degree_block, eval_harmonic, harmonic_dimension, zonal,
    BoundaryGrid, Harmonic,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::geometry::{north, ModelParams, Rotation};
use crate::numerics::{divided_difference, real, Complex, Polynomial};

/// Default harmonic truncation degree.
pub const DEFAULT_LMAX: usize = 16;

/// A K-type: the mode `m` for `p = 2`, the degree `l` for `p = 3`, and the
/// trivial type (label 0) in any dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KTypeIndex {
    pub p: usize,
    pub label: i64,
}

impl KTypeIndex {
    pub fn new(p: usize, label: i64) -> Result<Self> {
        let ok = match p {
            2 => true,
            3 => label >= 0,
            _ => p >= 2 && label == 0,
        };
        if ok {
            Ok(KTypeIndex { p, label })
        } else {
            Err(HyperError::UnsupportedKType(label, p))
        }
    }

    pub fn trivial(p: usize) -> Self {
        KTypeIndex { p, label: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.label == 0
    }

    /// Harmonic degree carried by the type.
    pub fn degree(&self) -> usize {
        self.label.unsigned_abs() as usize
    }

    /// `d(delta)`.
    pub fn dim(&self) -> usize {
        match self.p {
            3 => 2 * self.degree() + 1,
            _ => 1,
        }
    }

    /// Degree `s` of `p_delta`.
    pub fn s(&self) -> usize {
        self.degree()
    }

    pub fn contragredient(&self) -> Self {
        match self.p {
            2 => KTypeIndex { p: 2, label: -self.label },
            _ => *self,
        }
    }

    /// Basis `v_1 = v, v_2, ..., v_d` of `V_delta` realized as harmonics.
    pub fn matrix_basis(&self) -> Vec<Harmonic> {
        match self.p {
            2 => vec![Harmonic::mode(self.label)],
            3 => {
                let l = self.degree();
                let mut out = vec![Harmonic::new(l, 0)];
                out.extend(degree_block(3, l).into_iter().filter(|h| h.order != 0));
                out
            }
            _ => vec![Harmonic::constant()],
        }
    }

    /// Harmonics retained by `P_delta`: the `delta`-check isotypic part of
    /// the translation action.
    pub fn projection_harmonics(&self) -> Vec<Harmonic> {
        match self.p {
            2 => vec![Harmonic::mode(-self.label)],
            3 => degree_block(3, self.degree()),
            _ => vec![Harmonic::constant()],
        }
    }

    /// Harmonics that make up a function of type `delta-check`, i.e. the
    /// inputs of the `delta`-spherical transform.
    pub fn source_harmonics(&self) -> Vec<Harmonic> {
        self.contragredient().projection_harmonics()
    }
}

impl std::fmt::Display for KTypeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.p {
            2 => write!(f, "m={}", self.label),
            3 => write!(f, "l={}", self.label),
            _ => write!(f, "trivial"),
        }
    }
}

/// A function on the boundary sphere, held as harmonic coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFunction {
    pub p: usize,
    pub lmax: usize,
    pub coeffs: BTreeMap<Harmonic, Complex>,
}

impl BoundaryFunction {
    pub fn zero(p: usize, lmax: usize) -> Self {
        BoundaryFunction { p, lmax, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(p: usize, lmax: usize, items: &[(Harmonic, Complex)]) -> Result<Self> {
        let mut f = Self::zero(p, lmax);
        for (h, v) in items {
            f.set(*h, *v)?;
        }
        Ok(f)
    }

    pub fn set(&mut self, h: Harmonic, v: Complex) -> Result<()> {
        if !h.is_valid(self.p) {
            return Err(HyperError::InvalidParameter(format!("{h:?} is not a harmonic for p = {}", self.p)));
        }
        if h.degree > self.lmax {
            return Err(HyperError::Truncation { degree: h.degree, lmax: self.lmax });
        }
        self.coeffs.insert(h, v);
        Ok(())
    }

    pub fn coeff(&self, h: Harmonic) -> Complex {
        self.coeffs.get(&h).copied().unwrap_or(real(0.0))
    }

    pub fn eval(&self, b: &[f64]) -> Complex {
        self.coeffs.iter().map(|(h, v)| v * eval_harmonic(*h, b)).sum()
    }

    /// Values on the nodes of a boundary grid.
    pub fn synthesize(&self, grid: &BoundaryGrid) -> Vec<Complex> {
        grid.points.iter().map(|b| self.eval(b)).collect()
    }

    /// Coefficients of grid samples up to degree `lmax`.
    pub fn analyze(grid: &BoundaryGrid, samples: &[Complex], lmax: usize) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(HyperError::LengthMismatch { expected: grid.len(), got: samples.len() });
        }
        if lmax > grid.lmax {
            return Err(HyperError::Truncation { degree: lmax, lmax: grid.lmax });
        }
        let mut f = Self::zero(grid.p, lmax);
        for h in basis(grid.p, lmax) {
            let v: Complex = grid
                .points
                .iter()
                .zip(&grid.weights)
                .zip(samples)
                .map(|((b, w), s)| s * eval_harmonic(h, b).conj() * *w)
                .sum();
            f.coeffs.insert(h, v);
        }
        Ok(f)
    }

    /// Boundary inner product `int f conj(g) db`.
    pub fn inner(&self, other: &Self) -> Complex {
        self.coeffs.iter().map(|(h, v)| v * other.coeff(*h).conj()).sum()
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.lmax = out.lmax.max(other.lmax);
        for (h, v) in &other.coeffs {
            *out.coeffs.entry(*h).or_insert(real(0.0)) += v;
        }
        out
    }

    /// `max |coefficient|` of `self - other`.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<Harmonic> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.iter().map(|h| (self.coeff(*h) - other.coeff(*h)).norm()).fold(0.0, f64::max)
    }
}

/// `Hom(V_delta, V_delta)`-valued boundary function, entry by entry.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixBoundaryFunction {
    pub delta: KTypeIndex,
    /// Row-major `d x d` entries.
    pub entries: Vec<BoundaryFunction>,
}

impl MatrixBoundaryFunction {
    pub fn dim(&self) -> usize {
        self.delta.dim()
    }

    pub fn eval(&self, b: &[f64]) -> Vec<Complex> {
        self.entries.iter().map(|e| e.eval(b)).collect()
    }
}

/// Matrix of `delta(k)`, row-major.
pub fn delta_matrix(delta: &KTypeIndex, k: &Rotation) -> Result<Vec<Complex>> {
    match delta.p {
        2 => {
            // k maps theta to theta + beta; read beta off the image of the pole.
            let img = k.apply(&[0.0, 1.0]);
            let beta = img[0].atan2(img[1]);
            Ok(vec![Complex::new(0.0, delta.label as f64 * beta).exp()])
        }
        3 => {
            let hs = delta.matrix_basis();
            let d = hs.len();
            let grid = BoundaryGrid::new(3, delta.degree())?;
            let kinv = k.inverse();
            let mut m = vec![real(0.0); d * d];
            for (pt, w) in grid.points.iter().zip(&grid.weights) {
                let back = kinv.apply(pt);
                for (a, ha) in hs.iter().enumerate() {
                    let ya = eval_harmonic(*ha, pt);
                    for (b, hb) in hs.iter().enumerate() {
                        m[a * d + b] += ya * eval_harmonic(*hb, &back) * *w;
                    }
                }
            }
            Ok(m)
        }
        _ => Ok(vec![real(1.0)]),
    }
}

fn check_truncation(f: &BoundaryFunction, delta: &KTypeIndex) -> Result<()> {
    if delta.degree() > f.lmax {
        return Err(HyperError::Truncation { degree: delta.degree(), lmax: f.lmax });
    }
    if delta.p != f.p {
        return Err(HyperError::InvalidParameter(format!("K-type for p = {} applied to p = {}", delta.p, f.p)));
    }
    Ok(())
}

/// `P_delta f = d(delta) int_K chi_delta(k^{-1}) f(k^{-1} b) dk`.
pub fn project_ktype(f: &BoundaryFunction, delta: &KTypeIndex) -> Result<BoundaryFunction> {
    check_truncation(f, delta)?;
    let mut out = BoundaryFunction::zero(f.p, f.lmax);
    for h in delta.projection_harmonics() {
        if let Some(v) = f.coeffs.get(&h) {
            out.coeffs.insert(h, *v);
        }
    }
    Ok(out)
}

/// `P^delta f = d(delta) int_K delta(k) f(k^{-1} b) dk`; by Schur
/// orthogonality its `(a, b)` entry is `<f, v_b> v_a(b)`.
pub fn project_matrix(f: &BoundaryFunction, delta: &KTypeIndex) -> Result<MatrixBoundaryFunction> {
    check_truncation(f, delta)?;
    let hs = delta.matrix_basis();
    let d = hs.len();
    let mut entries = Vec::with_capacity(d * d);
    for ha in &hs {
        for hb in &hs {
            let mut e = BoundaryFunction::zero(f.p, f.lmax);
            e.coeffs.insert(*ha, f.coeff(*hb));
            entries.push(e);
        }
    }
    Ok(MatrixBoundaryFunction { delta: *delta, entries })
}

/// Pointwise trace.
pub fn trace_map(f: &MatrixBoundaryFunction) -> BoundaryFunction {
    let d = f.dim();
    let mut out = BoundaryFunction::zero(f.delta.p, f.entries.iter().map(|e| e.lmax).max().unwrap_or(0));
    for a in 0..d {
        out = out.add(&f.entries[a * d + a]);
    }
    out
}

/// `F(eM)` restricted to the row of the M-fixed vector (the other rows of an
/// equivariant `F` vanish at the base point).
pub fn evaluate_at_base(f: &MatrixBoundaryFunction) -> Vec<Complex> {
    let d = f.dim();
    let full = f.eval(&north(f.delta.p));
    full[..d].to_vec()
}

/// The equivariant extension `F(k eM) = delta(k) F(eM)` of a row placed at
/// the M-fixed vector.
pub fn extend_from_base(delta: &KTypeIndex, row: &[Complex], lmax: usize) -> Result<MatrixBoundaryFunction> {
    let hs = delta.matrix_basis();
    let d = hs.len();
    if row.len() != d {
        return Err(HyperError::LengthMismatch { expected: d, got: row.len() });
    }
    let norm = (d as f64).sqrt();
    let mut entries = Vec::with_capacity(d * d);
    for ha in &hs {
        for r in row {
            let mut e = BoundaryFunction::zero(delta.p, lmax.max(delta.degree()));
            e.coeffs.insert(*ha, r / norm);
            entries.push(e);
        }
    }
    Ok(MatrixBoundaryFunction { delta: *delta, entries })
}

/// Index of the sample at `-nus[i]`, if the grid has one.
pub fn find_partner(nus: &[Complex], i: usize) -> Option<usize> {
    let target = -nus[i];
    let tol = 1e-12 * (1.0 + target.norm());
    nus.iter().position(|nu| (nu - target).norm() <= tol)
}

/// `p_delta(nu) = (nu + rho)(nu + rho + 1) ... (nu + rho + s - 1)`.
pub fn pdelta(delta: &KTypeIndex, mp: &ModelParams) -> Result<Polynomial> {
    if !(mp.p == 2 || mp.p == 3) || delta.p != mp.p {
        return Err(HyperError::UnsupportedDimension(mp.p));
    }
    let roots: Vec<Complex> = (0..delta.s()).map(|j| real(-mp.rho - j as f64)).collect();
    Ok(Polynomial::from_roots(&roots))
}

/// `F(nu) = p_delta(-nu) G(nu)` for even `G` on a symmetric grid.
pub fn mul_pdelta(nus: &[Complex], g: &[Complex], delta: &KTypeIndex, mp: &ModelParams) -> Result<Vec<Complex>> {
    if nus.len() != g.len() {
        return Err(HyperError::LengthMismatch { expected: nus.len(), got: g.len() });
    }
    let scale = g.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    for i in 0..nus.len() {
        let j = find_partner(nus, i).ok_or_else(|| HyperError::AsymmetricGrid(format!("no partner for {}", nus[i])))?;
        if (g[i] - g[j]).norm() > 1e-10 * scale {
            return Err(HyperError::RootDivision(format!("G is not even at nu = {}", nus[i])));
        }
    }
    let reflected = pdelta(delta, mp)?.reflect();
    Ok(nus.iter().zip(g).map(|(nu, v)| reflected.eval(*nu) * v).collect())
}

/// Inverse of [`mul_pdelta`] along a uniformly sampled line: `G = F /
/// p_delta(-nu)`, with the divided-difference guard at roots of
/// `p_delta(-.)` that fall on the grid.
pub fn divide_pdelta(nus: &[Complex], f: &[Complex], delta: &KTypeIndex, mp: &ModelParams) -> Result<Vec<Complex>> {
    if nus.len() != f.len() {
        return Err(HyperError::LengthMismatch { expected: nus.len(), got: f.len() });
    }
    let reflected = pdelta(delta, mp)?.reflect();
    let roots: Vec<f64> = (0..delta.s()).map(|j| mp.rho + j as f64).collect();
    let mut out: Vec<Complex> = nus.iter().zip(f).map(|(nu, v)| v / reflected.eval(*nu)).collect();
    for (j, r) in roots.iter().enumerate() {
        let root = real(*r);
        let hits: Vec<usize> = (0..nus.len()).filter(|&i| (nus[i] - root).norm() <= 1e-6).collect();
        if hits.is_empty() {
            continue;
        }
        let dd = divided_difference(nus, f, root).map_err(|e| HyperError::RootDivision(e.to_string()))?;
        for i in hits {
            // p(-nu) = -(nu - r) * prod_{k != j} (r_k - nu)
            let rest: Complex = roots
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, rk)| real(*rk) - nus[i])
                .product();
            out[i] = -dd.values[i] / rest;
        }
    }
    Ok(out)
}
