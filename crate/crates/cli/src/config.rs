use std::path::{Path, PathBuf};

use poincare_core::dynamics::TheoryId;
use poincare_core::kinematics::{GridSpec, MomentumGrid, PacketSpec};
use poincare_core::representation::{GroupElement, RepClass};
use serde::{Deserialize, Serialize};

/// Env var naming the output directory when neither the flag nor the config
/// sets one.
pub const OUTPUT_DIR_ENV: &str = "POINCARE_OUTPUT_DIR";
pub const FALLBACK_OUTPUT_DIR: &str = "poincare-out";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub t_start: f64,
    pub t_end: f64,
    pub snapshots: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { t_start: 0.0, t_end: 1.0, snapshots: 5 }
    }
}

impl Schedule {
    /// Evenly spaced times, both ends included.
    pub fn times(&self) -> Vec<f64> {
        match self.snapshots {
            0 => Vec::new(),
            1 => vec![self.t_start],
            k => (0..k).map(|i| self.t_start + (self.t_end - self.t_start) * i as f64 / (k - 1) as f64).collect(),
        }
    }
}

/// One JSON document; every field is optional and command-line flags win.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<TheoryId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<RepClass>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub packets: Vec<PacketSpec>,
    /// Applied to the initial state before evolving.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boost: Option<GroupElement>,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    #[serde(default = "default_probe_count")]
    pub probe_count: usize,
}

fn default_grid() -> GridSpec {
    GridSpec::new(32, 10.0, 1.0)
}

fn default_probe_count() -> usize {
    12
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: default_grid(),
            seed: None,
            theory: None,
            classes: None,
            packets: Vec::new(),
            boost: None,
            schedule: Schedule::default(),
            output_dir: None,
            checks: None,
            probe_count: default_probe_count(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    /// Checks everything that can be checked without computing.
    pub fn validate(&self) -> Result<MomentumGrid, String> {
        let grid = MomentumGrid::new(self.grid).map_err(|e| e.to_string())?;
        let s = &self.schedule;
        if !s.t_start.is_finite() || !s.t_end.is_finite() || s.t_end < s.t_start {
            return Err(format!("schedule needs finite t_start <= t_end, got {} .. {}", s.t_start, s.t_end));
        }
        if self.probe_count < 2 {
            return Err(format!("probe_count must be at least 2, got {}", self.probe_count));
        }
        for p in &self.packets {
            p.validate(&grid).map_err(|e| e.to_string())?;
        }
        Ok(grid)
    }

    /// Flag, then config, then the environment, then a fixed fallback.
    pub fn resolve_output_dir(&self, flag: Option<&Path>) -> PathBuf {
        flag.map(Path::to_path_buf)
            .or_else(|| self.output_dir.clone())
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(FALLBACK_OUTPUT_DIR))
    }
}
