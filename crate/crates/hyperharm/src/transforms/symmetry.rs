use serde::{Deserialize, Serialize};

use super::{DeltaSpectralFunction, SpectralFunction};
use crate::error::{HyperError, Result};
use crate::geometry::{north, ModelParams};
use crate::ktypes::{eval_harmonic, find_partner, pdelta, Harmonic, KTypeIndex};
use crate::numerics::{real, Complex};
use crate::spherical::eisenstein_radial;

/// Which form of the `nu -> -nu` symmetry to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryMode {
    /// `int_B e^{(-nu+rho)A(x,b)} psi(-nu,b) db = int_B e^{(nu+rho)A(x,b)} psi(nu,b) db`.
    ScFull,
    /// `p_delta(-nu) h(-nu) = p_delta(nu) h(nu)` entrywise.
    PdeltaParity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub mode: SymmetryMode,
    /// Largest absolute residual.
    pub absolute: f64,
    /// `absolute` divided by the largest compared magnitude.
    pub relative: f64,
    pub pairs: usize,
}

fn partners(nus: &[Complex]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for i in 0..nus.len() {
        let j = find_partner(nus, i).ok_or_else(|| HyperError::AsymmetricGrid(format!("no sample at {}", -nus[i])))?;
        if i <= j {
            out.push((i, j));
        }
    }
    Ok(out)
}

// Sample directions for the SC-full check.
fn directions(p: usize) -> Vec<Vec<f64>> {
    let mut generic = vec![0.0; p];
    generic[0] = 0.6;
    generic[p - 1] = 0.8;
    vec![north(p), generic]
}

// The K-type whose delta-spherical transform carries harmonic `h`.
fn ktype_of(h: &Harmonic, p: usize) -> Result<KTypeIndex> {
    KTypeIndex::new(p, if p == 2 { h.order } else { h.degree as i64 })
}

fn sc_full(mp: &ModelParams, nus: &[Complex], coeffs: &[(Harmonic, Vec<Complex>)], radii: &[f64]) -> Result<SymmetryReport> {
    let pairs = partners(nus)?;
    let radii = if radii.is_empty() { &[0.5, 1.0, 2.0][..] } else { radii };
    let dirs = directions(mp.p);
    let (mut absolute, mut scale): (f64, f64) = (0.0, 0.0);
    for (i, j) in &pairs {
        for t in radii {
            let mut lhs = vec![real(0.0); dirs.len()];
            let mut rhs = vec![real(0.0); dirs.len()];
            for (h, vals) in coeffs {
                let plus = eisenstein_radial(nus[*i], h.degree, *t, mp)?;
                let minus = eisenstein_radial(nus[*j], h.degree, *t, mp)?;
                for (d, omega) in dirs.iter().enumerate() {
                    let y = eval_harmonic(*h, omega);
                    lhs[d] += vals[*j] * minus * y;
                    rhs[d] += vals[*i] * plus * y;
                }
            }
            for (a, b) in lhs.iter().zip(&rhs) {
                absolute = absolute.max((a - b).norm());
                scale = scale.max(a.norm()).max(b.norm());
            }
        }
    }
    Ok(SymmetryReport { mode: SymmetryMode::ScFull, absolute, relative: relative(absolute, scale), pairs: pairs.len() })
}

fn relative(absolute: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        absolute
    } else {
        absolute / scale
    }
}

fn pdelta_parity(mp: &ModelParams, nus: &[Complex], entries: &[(KTypeIndex, &[Complex])]) -> Result<SymmetryReport> {
    let pairs = partners(nus)?;
    let (mut absolute, mut scale): (f64, f64) = (0.0, 0.0);
    for (delta, vals) in entries {
        let poly = pdelta(delta, mp)?;
        for (i, j) in &pairs {
            let a = poly.eval(nus[*j]) * vals[*j];
            let b = poly.eval(nus[*i]) * vals[*i];
            absolute = absolute.max((a - b).norm());
            scale = scale.max(a.norm()).max(b.norm());
        }
    }
    Ok(SymmetryReport { mode: SymmetryMode::PdeltaParity, absolute, relative: relative(absolute, scale), pairs: pairs.len() })
}

/// Residual of the symmetry condition for a spectral function. SC-full is
/// sampled at polar radii `radii` (defaults when empty) along two
/// directions; the parity check pairs each harmonic with the K-type whose transform it
/// carries. Only the `nu` of the form `-nu_k` present on the grid are used.
pub fn check_symmetry(psi: &SpectralFunction, mode: SymmetryMode, radii: &[f64]) -> Result<SymmetryReport> {
    match mode {
        SymmetryMode::ScFull => {
            let coeffs: Vec<(Harmonic, Vec<Complex>)> = psi.coeffs.iter().map(|(h, v)| (*h, v.clone())).collect();
            sc_full(&psi.mp, &psi.nus, &coeffs, radii)
        }
        SymmetryMode::PdeltaParity => {
            let entries: Vec<(KTypeIndex, &[Complex])> = psi
                .coeffs
                .iter()
                .map(|(h, v)| Ok((ktype_of(h, psi.mp.p)?, v.as_slice())))
                .collect::<Result<_>>()?;
            pdelta_parity(&psi.mp, &psi.nus, &entries)
        }
    }
}

/// [`check_symmetry`] for a delta-spherical transform.
pub fn check_symmetry_delta(h: &DeltaSpectralFunction, mode: SymmetryMode, radii: &[f64]) -> Result<SymmetryReport> {
    match mode {
        SymmetryMode::ScFull => check_symmetry(&h.to_spectral(), mode, radii),
        SymmetryMode::PdeltaParity => {
            let entries: Vec<(KTypeIndex, &[Complex])> = h.rows.iter().map(|r| (h.delta, r.as_slice())).collect();
            pdelta_parity(&h.mp, &h.nus, &entries)
        }
    }
}
