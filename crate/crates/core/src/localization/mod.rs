//! The Newton–Wigner operator and the engine deciding whether the position
//! operator `Q = F + D` is fixed by the discrete symmetries.

mod constraints;
mod newton_wigner;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use constraints::{
    build_constraint_system, exact_rank, expected_nullspace_dim, lattice_shells, reference_satisfies, Condition,
    ConstraintRow, ConstraintSystem,
};
pub use newton_wigner::{newton_wigner_apply, newton_wigner_differential};

use crate::error::{Error, Result};
use crate::kinematics::{gaussian_packet, PacketSpec, Placement, StateVector};
use crate::representation::{apply_pi, apply_theta, RepClass, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Unique,
    Undetermined,
}

/// Known outcome of the position determination for each class.
pub fn expected_verdict(class: RepClass) -> Verdict {
    if expected_nullspace_dim(class) == 0 {
        Verdict::Unique
    } else {
        Verdict::Undetermined
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellResult {
    pub p0: f64,
    pub nullspace_dim: usize,
}

/// Largest relative residuals of `ΘF_j - F_jΘ` and `ΠF_j + F_jΠ` over probes
/// and axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceResiduals {
    pub theta_commutator: Vec<f64>,
    pub pi_anticommutator: Vec<f64>,
}

impl ReferenceResiduals {
    pub fn max(&self) -> f64 {
        self.theta_commutator.iter().chain(&self.pi_anticommutator).copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterminationReport {
    pub class: String,
    pub case: String,
    pub shells: Vec<ShellResult>,
    pub verdict: Verdict,
    /// Whether `F` satisfies every row of the system exactly.
    pub reference_exact: bool,
    pub residuals: Option<ReferenceResiduals>,
}

impl DeterminationReport {
    pub fn max_nullspace_dim(&self) -> usize {
        self.shells.iter().map(|s| s.nullspace_dim).max().unwrap_or(0)
    }
}

/// Solves the constraint system at every lattice shell and reports whether
/// the position operator is forced to be `F`.
pub fn determine_position(rep: &Representation) -> DeterminationReport {
    let mut solved: HashMap<Vec<(Condition, Vec<i64>)>, usize> = HashMap::new();
    let shells: Vec<ShellResult> = lattice_shells(rep)
        .into_iter()
        .map(|p0| {
            let system = build_constraint_system(rep, p0);
            let dim = *solved.entry(system.rows_key()).or_insert_with(|| system.nullspace_dim());
            ShellResult { p0, nullspace_dim: dim }
        })
        .collect();
    let verdict = if shells.iter().all(|s| s.nullspace_dim == 0) { Verdict::Unique } else { Verdict::Undetermined };
    let reference_exact = reference_satisfies(rep.theta(), Condition::ThetaCommutes)
        && reference_satisfies(rep.pi(), Condition::PiAnticommutes);
    let residuals = default_probes(rep).ok().and_then(|probes| reference_residuals(rep, &probes).ok());
    DeterminationReport {
        class: rep.class().name().to_string(),
        case: rep.class().case_label().to_string(),
        shells,
        verdict,
        reference_exact,
        residuals,
    }
}

/// Two packets scaled to the lattice, one per populated sector layout.
fn default_probes(rep: &Representation) -> Result<Vec<StateVector>> {
    let grid = rep.grid();
    let w = 0.1 * grid.p_max();
    let c = 0.03 * grid.p_max();
    let x = 0.5 / w;
    let placements: &[Placement] = if rep.sector_count() == 1 {
        &[Placement::Single, Placement::Single]
    } else {
        &[Placement::Plus, Placement::Minus]
    };
    let specs = [
        PacketSpec::new([c, -c, 0.5 * c], w, placements[0]).with_offset([0.5 * x, 0.0, -0.5 * x]),
        PacketSpec::new([-c, 0.0, c], w, placements[1]).with_offset([0.0, -0.5 * x, 0.5 * x]),
    ];
    specs.iter().map(|s| gaussian_packet(grid, s)).collect()
}

fn reference_residuals(rep: &Representation, probes: &[StateVector]) -> Result<ReferenceResiduals> {
    let grid = rep.grid();
    let mut theta = Vec::new();
    let mut pi = Vec::new();
    for psi in probes {
        let norm = psi.norm(grid);
        let mut worst_t: f64 = 0.0;
        let mut worst_p: f64 = 0.0;
        for axis in 0..3 {
            let f_psi = newton_wigner_apply(rep, axis, psi)?;
            let t_f = apply_theta(rep, &f_psi)?;
            let f_t = newton_wigner_apply(rep, axis, &apply_theta(rep, psi)?)?;
            worst_t = worst_t.max(t_f.sub(&f_t)?.norm(grid) / norm);
            let p_f = apply_pi(rep, &f_psi)?;
            let f_p = newton_wigner_apply(rep, axis, &apply_pi(rep, psi)?)?;
            worst_p = worst_p.max(p_f.add(&f_p)?.norm(grid) / norm);
        }
        theta.push(worst_t);
        pi.push(worst_p);
    }
    Ok(ReferenceResiduals { theta_commutator: theta, pi_anticommutator: pi })
}

/// Residuals of the symmetry conditions for `F` itself; only meaningful
/// when the determination is unique.
pub fn verify_reference_symmetries(rep: &Representation, probes: &[StateVector]) -> Result<ReferenceResiduals> {
    if determine_position(rep).verdict != Verdict::Unique {
        return Err(Error::NotUnique(rep.class().name().to_string()));
    }
    reference_residuals(rep, probes)
}
