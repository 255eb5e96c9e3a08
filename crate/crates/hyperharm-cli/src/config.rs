use std::path::{Path, PathBuf};

use hyperharm::geometry::ModelParams;
use hyperharm::ktypes::KTypeIndex;
use hyperharm::transforms::{GridSpec, RadialGrid, SpectralGrid};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const EXPERIMENTS: [&str; 10] = [
    "spherical-table",
    "c-function",
    "diagram",
    "roundtrip",
    "plancherel",
    "paley-wiener",
    "symmetry-check",
    "seminorm-report",
    "cutoff",
    "calibrate",
];

/// Largest dimension handled by the K-invariant pipeline.
pub const MAX_DIMENSION: usize = 7;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct GridOverrides {
    pub t_max: Option<f64>,
    pub t_intervals: Option<usize>,
    pub lambda_max: Option<f64>,
    pub lambda_intervals: Option<usize>,
}

/// One batch run, read from a single JSON document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub experiment: Option<String>,
    /// Restricts the run to one dimension; each experiment has its own default set.
    pub p: Option<usize>,
    #[serde(default)]
    pub grid: GridOverrides,
    /// K-type labels (`m` for `p = 2`, `l` for `p = 3`).
    pub ktypes: Option<Vec<i64>>,
    /// Support radii of the bump family.
    pub radii: Option<Vec<f64>>,
    /// Cutoff indices `j`.
    pub cutoffs: Option<Vec<u32>>,
    /// Spectral parameters `lambda` for tables.
    pub lambdas: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Resolves the experiment name against the one given on the command line.
    pub fn resolve(&mut self, command: Option<&str>) -> Result<String, CliError> {
        let name = match (command, self.experiment.as_deref()) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Config(format!("command {a} does not match experiment {b} in the config")))
            }
            (Some(a), _) => a.to_string(),
            (None, Some(b)) => b.to_string(),
            (None, None) => return Err(CliError::Config("no experiment given".into())),
        };
        if !EXPERIMENTS.contains(&name.as_str()) {
            return Err(CliError::Config(format!("unknown experiment {name}")));
        }
        self.experiment = Some(name.clone());
        Ok(name)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(p) = self.p {
            if !(2..=MAX_DIMENSION).contains(&p) {
                return Err(CliError::Validation(format!("dimension p = {p} outside 2..={MAX_DIMENSION}")));
            }
            ModelParams::new(p).map_err(|e| CliError::Validation(e.to_string()))?;
            for label in self.ktypes.iter().flatten() {
                KTypeIndex::new(p, *label)
                    .map_err(|e| CliError::Validation(format!("K-type {label} at p = {p}: {e}")))?;
            }
        }
        let g = &self.grid;
        let positive = |v: Option<f64>| v.is_none_or(|x| x.is_finite() && x > 0.0);
        if !positive(g.t_max) || !positive(g.lambda_max) {
            return Err(CliError::Validation("grid extents must be positive".into()));
        }
        if g.t_intervals == Some(0) || g.lambda_intervals == Some(0) {
            return Err(CliError::Validation("grid interval counts must be positive".into()));
        }
        for r in self.radii.iter().flatten() {
            if !(r.is_finite() && *r > 0.0) {
                return Err(CliError::Validation(format!("bump radius {r} must be positive")));
            }
        }
        Ok(())
    }

    /// Dimensions to run: the configured one, or `default`.
    pub fn dimensions(&self, default: &[usize]) -> Vec<usize> {
        match self.p {
            Some(p) => vec![p],
            None => default.to_vec(),
        }
    }

    /// Dimensions restricted to those with K-type support.
    pub fn ktype_dimensions(&self) -> Vec<usize> {
        self.dimensions(&[2, 3]).into_iter().filter(|p| *p <= 3).collect()
    }

    pub fn ktype_labels(&self, p: usize, default: &[i64]) -> Vec<i64> {
        self.ktypes.clone().unwrap_or_else(|| default.to_vec()).into_iter().filter(|l| p == 2 || *l >= 0).collect()
    }

    pub fn radii_or(&self, default: &[f64]) -> Vec<f64> {
        self.radii.clone().unwrap_or_else(|| default.to_vec())
    }

    /// Default grids with the configured overrides applied.
    pub fn grids(&self, radial: RadialGrid, spectral: SpectralGrid) -> GridSpec {
        let g = &self.grid;
        let radial = RadialGrid::new(g.t_max.unwrap_or(radial.t_max), g.t_intervals.unwrap_or(radial.intervals));
        let spectral = SpectralGrid {
            lambda_max: g.lambda_max.unwrap_or(spectral.lambda_max),
            intervals: g.lambda_intervals.unwrap_or(spectral.intervals),
            ..spectral
        };
        GridSpec { radial, spectral }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsupported_combination_is_rejected() {
        let cfg = RunConfig { p: Some(9), ktypes: Some(vec![3]), ..Default::default() };
        assert!(matches!(cfg.validate(), Err(CliError::Validation(_))));
        let cfg = RunConfig { p: Some(4), ktypes: Some(vec![1]), ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { p: Some(3), ktypes: Some(vec![2]), ..Default::default() };
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn experiment_resolution() {
        let mut cfg = RunConfig { experiment: Some("cutoff".into()), ..Default::default() };
        assert_eq!(cfg.resolve(None).unwrap(), "cutoff");
        assert!(cfg.resolve(Some("diagram")).is_err());
        assert!(RunConfig::default().resolve(Some("nope")).is_err());
        let parsed: RunConfig = serde_json::from_str(r#"{"p": 3, "grid": {"lambda-max": 32.0}, "seed": 7}"#).unwrap();
        assert_eq!(parsed.grid.lambda_max, Some(32.0));
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
