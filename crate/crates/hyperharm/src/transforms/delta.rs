use serde::{Deserialize, Serialize};

use super::fourier::half_line;
use super::{
    check_symmetry_delta, euclid_fourier, helgason_fourier, inverse_helgason_unscaled, radon, CalibrationRecord,
    GridSpec, RadialGrid, RadonFunction, SpatialFunction, SpectralFunction, SpectralGrid, SymmetryMode,
};
use crate::error::{HyperError, Result};
use crate::geometry::ModelParams;
use crate::ktypes::KTypeIndex;
use crate::numerics::{real, Complex};

/// Tolerance on the relative symmetry residual of `F phi` accepted by
/// [`inverse_generalized_abel`].
pub const ABEL_SYMMETRY_TOLERANCE: f64 = 1e-6;

/// `H^delta f(nu)`: for each spectral sample, the row of length `d(delta)`
/// through the M-fixed vector (the remaining rows vanish).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaSpectralFunction {
    pub mp: ModelParams,
    pub delta: KTypeIndex,
    pub grid: SpectralGrid,
    pub nus: Vec<Complex>,
    /// `rows[a][k]` is entry `a` of the row at `nus[k]`.
    pub rows: Vec<Vec<Complex>>,
}

impl DeltaSpectralFunction {
    /// `||h(nu_k)||_HS`.
    pub fn hs_norm(&self, k: usize) -> f64 {
        self.rows.iter().map(|r| r[k].norm_sqr()).sum::<f64>().sqrt()
    }

    /// The spectral function whose trace pairing with `delta(k)` this is:
    /// the `a`-th matrix-basis harmonic carries `rows[a] / sqrt(d)`.
    pub fn to_spectral(&self) -> SpectralFunction {
        let basis = self.delta.matrix_basis();
        let norm = (basis.len() as f64).sqrt();
        let mut out = SpectralFunction::zero(self.mp, self.grid.clone());
        for (h, row) in basis.iter().zip(&self.rows) {
            out.coeffs.insert(*h, row.iter().map(|v| v / norm).collect());
        }
        out
    }

    fn from_spectral(psi: &SpectralFunction, delta: &KTypeIndex) -> Self {
        let basis = delta.matrix_basis();
        let norm = (basis.len() as f64).sqrt();
        let rows = basis
            .iter()
            .map(|h| match psi.values(*h) {
                Some(v) => v.iter().map(|x| x * norm).collect(),
                None => vec![real(0.0); psi.nus.len()],
            })
            .collect();
        DeltaSpectralFunction { mp: psi.mp, delta: *delta, grid: psi.grid.clone(), nus: psi.nus.clone(), rows }
    }
}

fn check_delta(mp: &ModelParams, delta: &KTypeIndex) -> Result<()> {
    if delta.p != mp.p {
        return Err(HyperError::UnsupportedKType(delta.label, mp.p));
    }
    if !(mp.p == 2 || mp.p == 3) && !delta.is_trivial() {
        return Err(HyperError::UnsupportedKType(delta.label, mp.p));
    }
    Ok(())
}

/// The part of `f` of type `delta`-check.
pub fn project_source(f: &SpatialFunction, delta: &KTypeIndex) -> SpatialFunction {
    let mut out = f.clone();
    let keep = delta.source_harmonics();
    out.coeffs.retain(|h, _| keep.contains(h));
    out
}

/// `H^delta f(nu) = d(delta) int_X f(x) Phi_{-conj(nu),delta}(x)^* dx`. The
/// adjoint Eisenstein entries are `phi_{-nu,l}(t) conj(v_a(omega)) / sqrt(d)`,
/// so the row entry `a` is `sqrt(d)` times the Helgason coefficient of `v_a`.
pub fn delta_spherical(f: &SpatialFunction, delta: &KTypeIndex, grid: &SpectralGrid) -> Result<DeltaSpectralFunction> {
    check_delta(&f.mp, delta)?;
    let psi = helgason_fourier(&project_source(f, delta), grid)?;
    Ok(DeltaSpectralFunction::from_spectral(&psi, delta))
}

/// `f(x) = C Tr int_0^inf Phi_{i lambda,delta}(x) h(i lambda) |c(i lambda)|^{-2} d lambda`.
pub fn inverse_delta_spherical(
    h: &DeltaSpectralFunction,
    radial: &RadialGrid,
    cal: &CalibrationRecord,
) -> Result<SpatialFunction> {
    check_delta(&h.mp, &h.delta)?;
    cal.check(h.mp.p, &GridSpec { radial: *radial, spectral: h.grid.clone() })?;
    half_line(&h.grid)?;
    Ok(inverse_helgason_unscaled(&h.to_spectral(), radial)?.scale(real(cal.constant_inversion)))
}

/// `T f(t) = e^{rho t} int_{K x N} f(k a_t n) delta(k^{-1}) dk dn`, realized as
/// `ev o P^delta o R`: entry `a` is `sqrt(d)` times the Radon coefficient of
/// the matrix-basis harmonic `v_a`.
pub fn generalized_abel(f: &SpatialFunction, delta: &KTypeIndex) -> Result<RadonFunction> {
    check_delta(&f.mp, delta)?;
    let rf = radon(&project_source(f, delta))?;
    let norm = (delta.dim() as f64).sqrt();
    let len = rf.nodes().len();
    let mut out = RadonFunction::zero(f.mp, f.grid);
    out.row_of = Some(*delta);
    for h in delta.matrix_basis() {
        let vals = match rf.coeffs.get(&h) {
            Some(v) => v.iter().map(|x| x * norm).collect(),
            None => vec![real(0.0); len],
        };
        out.coeffs.insert(h, vals);
    }
    Ok(out)
}

/// `T^{-1} = (H^delta)^{-1} o F`, after checking that `F phi` satisfies the
/// `p_delta` symmetry on a symmetric copy of the spectral grid.
pub fn inverse_generalized_abel(
    phi: &RadonFunction,
    delta: &KTypeIndex,
    grid: &SpectralGrid,
    cal: &CalibrationRecord,
) -> Result<SpatialFunction> {
    check_delta(&phi.mp, delta)?;
    let mut row = phi.clone();
    row.row_of = Some(*delta);
    let symmetric = SpectralGrid::symmetric(grid.lambda_max, grid.intervals, vec![0.0]);
    let spec = euclid_fourier(&row, &symmetric)?;
    let h = DeltaSpectralFunction::from_rows(&spec, delta);
    let report = check_symmetry_delta(&h, SymmetryMode::PdeltaParity, &[])?;
    if report.relative > ABEL_SYMMETRY_TOLERANCE {
        return Err(HyperError::SymmetryViolation { residual: report.relative, tolerance: ABEL_SYMMETRY_TOLERANCE });
    }
    inverse_delta_spherical(&h, &phi.grid, cal)
}

impl DeltaSpectralFunction {
    // Rows stored directly under the matrix-basis harmonics.
    fn from_rows(psi: &SpectralFunction, delta: &KTypeIndex) -> Self {
        let rows = delta
            .matrix_basis()
            .iter()
            .map(|h| psi.values(*h).map(|v| v.to_vec()).unwrap_or_else(|| vec![real(0.0); psi.nus.len()]))
            .collect();
        DeltaSpectralFunction { mp: psi.mp, delta: *delta, grid: psi.grid.clone(), nus: psi.nus.clone(), rows }
    }
}
