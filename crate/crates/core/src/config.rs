//! Runtime configuration: the tunable constants and resolutions, with
//! range validation. Unknown keys are rejected on deserialization.

use crate::bounds::BoundConstants;
use crate::covering::{CoverThresholds, PrimedConstants, UncertaintyConstants};
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToolkitConfig {
    pub uncertainty: UncertaintyConstants,
    /// derived from the uncertainty constants when absent
    pub primed: Option<PrimedConstants>,
    pub bound: BoundConstants,
    /// expert mode: the (2, 8) covering thresholds
    pub thresholds: CoverThresholds,
    pub tolerances: Tolerances,
    pub grids: GridConfig,
    pub output_dir: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// root-finding residual tolerance
    pub root: f64,
    /// relative allowance of the few-particle checks
    pub exclusion_allowance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { root: crate::constants::DEFAULT_TOL, exclusion_allowance: 0.05 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// grid sizes for the extrapolated 1D oracles, doubling twice
    pub oracle_npoints: [usize; 3],
    /// points per axis for the two-particle checks
    pub few_body_npoints: usize,
    /// points per axis for the three-particle check
    pub three_body_npoints: usize,
    /// side cells of generated density grids (power of two)
    pub density_n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            oracle_npoints: [200, 400, 800],
            few_body_npoints: 48,
            three_body_npoints: 36,
            density_n: 32,
        }
    }
}

impl Default for ToolkitConfig {
    fn default() -> Self {
        Self {
            uncertainty: UncertaintyConstants::default(),
            primed: None,
            bound: BoundConstants::default(),
            thresholds: CoverThresholds::default(),
            tolerances: Tolerances::default(),
            grids: GridConfig::default(),
            output_dir: None,
        }
    }
}

impl ToolkitConfig {
    pub fn validate(&self) -> Result<()> {
        UncertaintyConstants::new(self.uncertainty.c1, self.uncertainty.c2)?;
        self.bound.validate()?;
        if let Some(p) = &self.primed {
            if !(p.c1p > 0.0 && p.c2p > 0.0 && p.c3p > 0.0) {
                return Err(CoreError::Config(
                    "primed constants must all be positive".into(),
                ));
            }
        }
        if !(self.thresholds.b_min > 0.0 && self.thresholds.split > self.thresholds.b_min) {
            return Err(CoreError::Config(format!(
                "covering thresholds need 0 < b_min < split, got {} and {}",
                self.thresholds.b_min, self.thresholds.split
            )));
        }
        if !(self.tolerances.root > 0.0 && self.tolerances.root <= 1e-6) {
            return Err(CoreError::Config(format!(
                "root tolerance must lie in (0, 1e-6], got {}",
                self.tolerances.root
            )));
        }
        if !(self.tolerances.exclusion_allowance > 0.0
            && self.tolerances.exclusion_allowance < 0.5)
        {
            return Err(CoreError::Config(format!(
                "exclusion allowance must lie in (0, 0.5), got {}",
                self.tolerances.exclusion_allowance
            )));
        }
        let g = &self.grids;
        if g.oracle_npoints[1] != 2 * g.oracle_npoints[0]
            || g.oracle_npoints[2] != 2 * g.oracle_npoints[1]
            || g.oracle_npoints[0] < 16
        {
            return Err(CoreError::Config(format!(
                "oracle grids must start at >= 16 points and double twice, got {:?}",
                g.oracle_npoints
            )));
        }
        if g.few_body_npoints < 16 || g.three_body_npoints < 16 || g.three_body_npoints > 60 {
            return Err(CoreError::Config(format!(
                "few-body grids need 16..=60 points per axis, got {} and {}",
                g.few_body_npoints, g.three_body_npoints
            )));
        }
        if !g.density_n.is_power_of_two() {
            return Err(CoreError::Config(format!(
                "density grid size must be a power of two, got {}",
                g.density_n
            )));
        }
        Ok(())
    }

    /// The primed covering constants: explicit if configured, otherwise
    /// derived from the uncertainty constants.
    pub fn primed(&self) -> PrimedConstants {
        self.primed
            .unwrap_or_else(|| PrimedConstants::from_uncertainty(&self.uncertainty))
    }
}
