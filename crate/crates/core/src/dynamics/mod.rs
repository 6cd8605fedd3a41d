//! The four completed single-particle theories: exact spectral evolution,
//! the Klein–Gordon check, position densities and the Klein–Gordon charge.

mod density;
mod fv;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use density::{
    continuity_residual, kg_density_current, kg_field, position_density, ContinuityResidual, DensityField, DensityKind,
};
pub use fv::{feshbach_villars, FvPair, FvVariant};

use crate::error::{Error, Result};
use crate::kinematics::{position_laplacian, z_field_to_position, Field, MomentumGrid, RepKind, StateVector};
use crate::representation::{time_evolution, RepClass, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoryId {
    T1,
    T2,
    T3,
    T4,
}

impl TheoryId {
    pub const ALL: [TheoryId; 4] = [TheoryId::T1, TheoryId::T2, TheoryId::T3, TheoryId::T4];

    pub fn class(self) -> RepClass {
        match self {
            TheoryId::T1 => RepClass::Up,
            TheoryId::T2 => RepClass::Down,
            TheoryId::T3 => RepClass::U3,
            TheoryId::T4 => RepClass::U5,
        }
    }
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for TheoryId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        TheoryId::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown theory `{s}` (expected T1..T4)"))
    }
}

/// A theory realized on a lattice.
#[derive(Debug, Clone)]
pub struct Theory {
    id: TheoryId,
    rep: Representation,
}

impl Theory {
    pub fn new(id: TheoryId, grid: &MomentumGrid) -> Theory {
        Theory { id, rep: Representation::of_class(id.class(), grid) }
    }

    pub fn id(&self) -> TheoryId {
        self.id
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn grid(&self) -> &MomentumGrid {
        self.rep.grid()
    }
}

/// `ψ_t = e^{-iP₀t} ψ`, in whichever representation `state` is given.
pub fn evolve(theory: &Theory, state: &StateVector, t: f64) -> Result<StateVector> {
    time_evolution(theory.rep(), state, t)
}

/// Largest `p₀ · dt` over lattice points where the state is not negligible.
fn max_phase_step(grid: &MomentumGrid, state: &StateVector, dt: f64) -> f64 {
    let peak = state.sectors().iter().flat_map(|v| v.iter().map(|z| z.norm())).fold(0.0, f64::max);
    let mut top: f64 = 0.0;
    for v in state.sectors() {
        for (z, e) in v.iter().zip(grid.p0()) {
            if z.norm() > 1e-8 * peak {
                top = top.max(e * dt.abs());
            }
        }
    }
    top
}

/// Relative residual of `∂²_tψ - ∇²ψ + μ²ψ = 0` at time `t`, with the time
/// derivative replaced by a centred second difference of exactly evolved
/// snapshots and the Laplacian applied spectrally.
pub fn kg_residual(theory: &Theory, state: &StateVector, t: f64, dt: f64) -> Result<f64> {
    let grid = theory.grid();
    theory.rep().check_state(state)?;
    let step = max_phase_step(grid, state, dt);
    if !(step < 0.5) {
        return Err(Error::TimeStepTooLarge(step));
    }
    let snap = |s: f64| -> Result<Vec<Field>> {
        let psi = evolve(theory, state, s)?;
        Ok(psi.sectors().iter().map(|v| z_field_to_position(grid, v)).collect())
    };
    let (prev, now, next) = (snap(t - dt)?, snap(t)?, snap(t + dt)?);
    let mu2 = grid.mu() * grid.mu();
    let mut num = 0.0;
    let mut den = 0.0;
    for s in 0..now.len() {
        let lap = position_laplacian(grid, &now[s]);
        for k in 0..now[s].len() {
            let dtt = (next[s][k] - now[s][k] * 2.0 + prev[s][k]) / (dt * dt);
            num += (dtt - lap[k] + now[s][k] * mu2).norm_sqr();
            den += now[s][k].norm_sqr();
        }
    }
    Ok((num / den).sqrt())
}

/// `⟨P₀⟩` with the theory's sector signs.
pub fn energy_expectation(theory: &Theory, state: &StateVector) -> f64 {
    crate::kinematics::momentum_expectation(theory.grid(), state, theory.grid().p0(), Some(theory.rep().sector_signs()))
}

/// `⟨sign · p_axis / p₀⟩`, the velocity predicted by the exact evolution.
pub fn velocity_expectation(theory: &Theory, state: &StateVector, axis: usize) -> f64 {
    let grid = theory.grid();
    let v: Vec<f64> = (0..grid.len()).map(|i| grid.momentum(i)[axis] / grid.p0()[i]).collect();
    crate::kinematics::momentum_expectation(grid, state, &v, Some(theory.rep().sector_signs()))
}

/// A single lattice plane wave in the momentum representation, normalized.
pub fn lattice_mode(theory: &Theory, index: usize, sector: usize) -> Result<StateVector> {
    let grid = theory.grid();
    let sectors = theory.rep().sector_count();
    let mut state = StateVector::zeros(grid, RepKind::Momentum, sectors);
    state.sectors_mut()[sector][index] = Complex64::new(1.0, 0.0);
    Ok(state.normalized(grid))
}

/// The mixed-frequency state used to exhibit a negative Klein–Gordon
/// density: an upper-sector packet at `x = -1.5` and a lower-sector packet at
/// `x = +1.5`, equal weights, on a two-sector theory.
pub fn negative_density_demo(grid: &MomentumGrid) -> Result<StateVector> {
    use crate::kinematics::{gaussian_packet, PacketSpec, Placement};
    let plus = gaussian_packet(grid, &PacketSpec::new([0.0; 3], 1.0, Placement::Plus).with_offset([-1.5, 0.0, 0.0]))?;
    let minus = gaussian_packet(grid, &PacketSpec::new([0.0; 3], 1.0, Placement::Minus).with_offset([1.5, 0.0, 0.0]))?;
    Ok(plus.add(&minus)?.normalized(grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{build_grid, gaussian_packet, PacketSpec, Placement};

    #[test]
    fn single_mode_picks_up_exact_phase() {
        let g = build_grid(16, 8.0, 1.0).unwrap();
        let th = Theory::new(TheoryId::T1, &g);
        let idx = g.index([9, 7, 11]);
        let psi = lattice_mode(&th, idx, 0).unwrap();
        let t = 0.73;
        let out = evolve(&th, &psi, t).unwrap();
        let want = psi.sectors()[0][idx] * Complex64::from_polar(1.0, -g.p0()[idx] * t);
        assert!((out.sectors()[0][idx] - want).norm() < 1e-15);
    }

    #[test]
    fn position_input_stays_in_position() {
        let g = build_grid(16, 8.0, 1.0).unwrap();
        let th = Theory::new(TheoryId::T2, &g);
        let psi = gaussian_packet(&g, &PacketSpec::new([0.5, 0.0, 0.0], 0.8, Placement::Single)).unwrap();
        let x = crate::kinematics::to_position(&g, &psi).unwrap();
        let ex = evolve(&th, &x, 0.4).unwrap();
        assert_eq!(ex.kind(), RepKind::Position);
        let back = crate::kinematics::to_momentum(&g, &ex).unwrap();
        let direct = evolve(&th, &psi, 0.4).unwrap();
        assert!(back.sub(&direct).unwrap().norm(&g) < 1e-12);
    }

    #[test]
    fn kg_residual_rejects_large_steps() {
        let g = build_grid(16, 8.0, 1.0).unwrap();
        let th = Theory::new(TheoryId::T1, &g);
        let psi = gaussian_packet(&g, &PacketSpec::new([0.0; 3], 0.8, Placement::Single)).unwrap();
        assert!(matches!(kg_residual(&th, &psi, 0.0, 1.0), Err(Error::TimeStepTooLarge(_))));
    }
}
