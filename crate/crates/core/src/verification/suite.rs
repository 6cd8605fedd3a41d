use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{run_check, CHECK_NAMES};
use super::probes::ProbeSet;
use super::report::SuiteReport;
use crate::error::{Error, Result};
use crate::kinematics::{GridSpec, MomentumGrid, StateVector};
use crate::representation::{RepClass, Representation};

/// What to run. `checks: None` runs every registered check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub grid: GridSpec,
    pub seed: u64,
    #[serde(default = "default_probe_count")]
    pub probe_count: usize,
    #[serde(default)]
    pub checks: Option<Vec<String>>,
}

fn default_probe_count() -> usize {
    12
}

impl SuiteConfig {
    pub fn new(grid: GridSpec, seed: u64) -> SuiteConfig {
        SuiteConfig { grid, seed, probe_count: default_probe_count(), checks: None }
    }
}

/// Shared inputs built once per suite run.
pub(crate) struct Context {
    pub grid: MomentumGrid,
    pub probes: ProbeSet,
    pub reps: Vec<Representation>,
    pub one_sector: Vec<StateVector>,
    pub two_sector: Vec<StateVector>,
}

impl Context {
    fn new(config: &SuiteConfig) -> Result<Context> {
        let grid = MomentumGrid::new(config.grid)?;
        let probes = ProbeSet::generate(config.seed, config.probe_count, Default::default());
        let reps = RepClass::ALL.iter().map(|c| Representation::of_class(*c, &grid)).collect();
        let one_sector = probes.states(&grid, 1)?;
        let two_sector = probes.states(&grid, 2)?;
        Ok(Context { grid, probes, reps, one_sector, two_sector })
    }

    pub fn states(&self, rep: &Representation) -> &[StateVector] {
        if rep.sector_count() == 1 {
            &self.one_sector
        } else {
            &self.two_sector
        }
    }

    pub fn rep(&self, class: RepClass) -> &Representation {
        &self.reps[RepClass::ALL.iter().position(|c| *c == class).expect("all classes are built")]
    }

    pub fn probe_id(&self, k: usize) -> String {
        self.probes.probes[k].id.clone()
    }
}

pub fn check_names() -> &'static [&'static str] {
    &CHECK_NAMES
}

/// Runs the selected checks in parallel. Reports come back sorted by name,
/// so the serialized report depends only on the config.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let mut names: Vec<String> = match &config.checks {
        None => CHECK_NAMES.iter().map(|s| s.to_string()).collect(),
        Some(list) => list.clone(),
    };
    if let Some(bad) = names.iter().find(|n| !CHECK_NAMES.contains(&n.as_str())) {
        return Err(Error::UnknownCheck(bad.clone()));
    }
    names.sort();
    names.dedup();
    let ctx = Context::new(config)?;
    let checks = names.par_iter().map(|name| run_check(name, &ctx)).collect::<Result<Vec<_>>>()?;
    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport { seed: config.seed, grid: config.grid, pass, checks })
}
