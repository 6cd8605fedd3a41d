use thiserror::Error;

use crate::kinematics::{GridSpec, RepKind};
use crate::representation::Forbidden;

#[derive(Debug, Error)]
pub enum Error {
    #[error("points per axis must be even and at least 8, got {0}")]
    BadAxisCount(usize),

    #[error("momentum cutoff must be positive, got {0}")]
    NonPositiveCutoff(f64),

    #[error("mass parameter must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("grid mismatch: {0:?} vs {1:?}")]
    GridMismatch(GridSpec, GridSpec),

    #[error("expected a {expected:?}-representation state, got {got:?}")]
    RepKindMismatch { expected: RepKind, got: RepKind },

    #[error("expected {expected} sector field(s), got {got}")]
    SectorMismatch { expected: usize, got: usize },

    #[error("field length {got} does not match lattice size {expected}")]
    FieldLength { expected: usize, got: usize },

    #[error("invalid packet: {0}")]
    InvalidPacket(String),

    #[error("packet leaks past the cutoff: tail mass {leakage:.3e} exceeds {limit:.1e}")]
    TailLeak { leakage: f64, limit: f64 },

    #[error("forbidden representation: {0}")]
    Forbidden(Forbidden),

    #[error("operation needs a two-sector (symmetric spectrum) representation")]
    NotTwoSector,

    #[error("transformed state escaped the lattice (tail mass {tail:.3e}, norm loss {lost:.3e})")]
    SupportEscape { tail: f64, lost: f64 },

    #[error("time step too large: max p0*dt = {0:.3} (must be < 0.5)")]
    TimeStepTooLarge(f64),

    #[error("need at least 3 snapshots, got {0}")]
    TooFewSnapshots(usize),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("position operator is not uniquely determined for {0}")]
    NotUnique(String),

    #[error("state file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
