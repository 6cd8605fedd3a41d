//! Command-line driver: classification table, position determination,
//! evolution runs, the negative-density demo and the verification suite.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use poincare_core::dynamics::TheoryId;
use poincare_core::kinematics::{PacketSpec, Placement};
use poincare_core::representation::{GroupElement, RepClass};

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "poincare", version, about = "Spin-0 Poincare representations on a momentum lattice")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the eight classes, or say why a label combination is forbidden.
    Classify {
        /// `spectrum/theta/pi/sign`, e.g. `up/unitary/unitary/+`.
        #[arg(long, value_name = "SPEC")]
        forbidden: Option<String>,
    },
    /// Solve the symmetry conditions on the position operator.
    Determine {
        #[command(flatten)]
        common: CommonArgs,
        /// Restrict to these classes (repeatable).
        #[arg(long = "class", value_parser = parse_class)]
        classes: Vec<RepClass>,
    },
    /// Evolve packets in one of the four theories and write density slices.
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        evolve: EvolveArgs,
    },
    /// Mixed-frequency state with a negative Klein-Gordon density.
    DemoNegativeDensity {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the verification suite.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Only these checks (repeatable or comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Number of probe packets.
        #[arg(long)]
        probes: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON run config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Recorded in every output.
    #[arg(long)]
    pub seed: u64,
    /// Output directory; falls back to the config, then `$POINCARE_OUTPUT_DIR`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Points per lattice axis.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p_max: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[arg(long)]
    pub theory: Option<TheoryId>,
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub snapshots: Option<usize>,
    /// Packet centre in momentum space, `p1,p2,p3`. Any packet flag replaces
    /// the config's packets with a single packet.
    #[arg(long, value_parser = parse_triple)]
    pub center: Option<[f64; 3]>,
    #[arg(long)]
    pub width: Option<f64>,
    /// Position-space centre `x1,x2,x3`.
    #[arg(long, value_parser = parse_triple)]
    pub offset: Option<[f64; 3]>,
    /// `plus` or `minus` for two-sector theories.
    #[arg(long, value_parser = parse_placement)]
    pub sector: Option<Placement>,
    /// Boost the initial state by this rapidity along `--boost-axis`.
    #[arg(long)]
    pub boost_rapidity: Option<f64>,
    #[arg(long, value_parser = parse_triple, default_value = "0,0,1")]
    pub boost_axis: [f64; 3],
    /// Also write every snapshot as a binary state file.
    #[arg(long)]
    pub full: bool,
}

fn parse_class(s: &str) -> Result<RepClass, String> {
    RepClass::from_name(s).ok_or_else(|| format!("unknown class `{s}`"))
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| format!("expected three comma-separated numbers, got `{s}`"))
}

fn parse_placement(s: &str) -> Result<Placement, String> {
    match s.to_ascii_lowercase().as_str() {
        "single" => Ok(Placement::Single),
        "plus" | "+" => Ok(Placement::Plus),
        "minus" | "-" => Ok(Placement::Minus),
        _ => Err(format!("unknown sector `{s}` (single, plus, minus)")),
    }
}

impl CommonArgs {
    /// Config file (or defaults) with the shared flags applied.
    pub fn base_config(&self) -> Result<RunConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.seed = Some(self.seed);
        if let Some(n) = self.n {
            cfg.grid.n = n;
        }
        if let Some(p) = self.p_max {
            cfg.grid.p_max = p;
        }
        if let Some(mu) = self.mu {
            cfg.grid.mu = mu;
        }
        Ok(cfg)
    }
}

impl EvolveArgs {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(t) = self.theory {
            cfg.theory = Some(t);
        }
        if let Some(t) = self.t_start {
            cfg.schedule.t_start = t;
        }
        if let Some(t) = self.t_end {
            cfg.schedule.t_end = t;
        }
        if let Some(k) = self.snapshots {
            cfg.schedule.snapshots = k;
        }
        if self.center.is_some() || self.width.is_some() || self.offset.is_some() || self.sector.is_some() {
            let sector = self.sector.unwrap_or_else(|| default_placement(cfg.theory));
            let mut packet = PacketSpec::new(self.center.unwrap_or([0.0; 3]), self.width.unwrap_or(1.0), sector);
            packet.phase_x0 = self.offset;
            cfg.packets = vec![packet];
        }
        if let Some(rapidity) = self.boost_rapidity {
            cfg.boost = Some(GroupElement::Boost { axis: self.boost_axis, rapidity });
        }
    }
}

pub fn default_placement(theory: Option<TheoryId>) -> Placement {
    match theory {
        Some(TheoryId::T3 | TheoryId::T4) => Placement::Plus,
        _ => Placement::Single,
    }
}
