//! The eight spin-0 representation classes: generators, the discrete
//! symmetries `Θ` (time reversal) and `Π` (space inversion), sector
//! projections and finite group actions.

mod actions;
mod generators;
mod spec;
mod symmetry;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use actions::{
    boost_momentum, finite_action, interpolate, rotate, time_evolution, GroupElement, ESCAPE_NORM_LOSS,
    ESCAPE_TAIL_LIMIT,
};
pub use generators::{p_derivative, DerivativeScheme, Generator};
pub use spec::{Character, Forbidden, RepClass, RepSpec, SignVariant, Spectrum};
pub use symmetry::{AntiLinearAction, Gauss, SectorMatrix};

use crate::error::{Error, Result};
use crate::kinematics::{MomentumGrid, RepKind, StateVector};

/// Sign of `P₀` on a sector of a two-sector representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Plus,
    Minus,
}

#[derive(Debug, Clone)]
pub struct Representation {
    class: RepClass,
    grid: MomentumGrid,
    scheme: DerivativeScheme,
    theta: AntiLinearAction,
    pi: AntiLinearAction,
}

/// Builds the realization of a legal spec on `grid`.
pub fn make_rep(spec: RepSpec, grid: &MomentumGrid) -> Result<Representation> {
    let class = spec.classify().map_err(Error::Forbidden)?;
    Ok(Representation::of_class(class, grid))
}

impl Representation {
    pub fn of_class(class: RepClass, grid: &MomentumGrid) -> Representation {
        let (theta, pi) = symmetries(class);
        Representation { class, grid: grid.clone(), scheme: DerivativeScheme::default(), theta, pi }
    }

    pub fn with_scheme(mut self, scheme: DerivativeScheme) -> Representation {
        self.scheme = scheme;
        self
    }

    pub fn class(&self) -> RepClass {
        self.class
    }

    pub fn spec(&self) -> RepSpec {
        self.class.spec()
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn scheme(&self) -> DerivativeScheme {
        self.scheme
    }

    pub fn theta(&self) -> &AntiLinearAction {
        &self.theta
    }

    pub fn pi(&self) -> &AntiLinearAction {
        &self.pi
    }

    pub fn sector_count(&self) -> usize {
        if self.class.is_single_sector() {
            1
        } else {
            2
        }
    }

    /// Sign of `P₀` on each sector.
    pub fn sector_signs(&self) -> &'static [f64] {
        match self.class {
            RepClass::Up => &[1.0],
            RepClass::Down => &[-1.0],
            _ => &[1.0, -1.0],
        }
    }

    /// Checks that `state` is a momentum-representation state with this
    /// representation's layout.
    pub fn check_state(&self, state: &StateVector) -> Result<()> {
        state.expect_kind(RepKind::Momentum)?;
        state.expect_grid(&self.grid)?;
        if state.sector_count() != self.sector_count() {
            return Err(Error::SectorMismatch { expected: self.sector_count(), got: state.sector_count() });
        }
        Ok(())
    }
}

fn symmetries(class: RepClass) -> (AntiLinearAction, AntiLinearAction) {
    use SectorMatrix as M;
    let a = AntiLinearAction::new;
    match class {
        RepClass::Up | RepClass::Down => (a(M::SCALAR_ONE, true, true), a(M::SCALAR_ONE, true, false)),
        RepClass::U1 => (a(M::SWAP, false, false), a(M::IDENTITY, true, false)),
        RepClass::U2 => (a(M::SWAP, false, false), a(M::DIAG_PLUS_MINUS, true, false)),
        RepClass::U3 => (a(M::SWAP, false, false), a(M::SWAP, false, true)),
        RepClass::U4 => (a(M::SWAP, false, false), a(M::SKEW_SWAP, false, true)),
        RepClass::U5 => (a(M::IDENTITY, true, true), a(M::SWAP, false, true)),
        RepClass::U6 => (a(M::IDENTITY, true, true), a(M::SKEW_SWAP, false, true)),
    }
}

/// Applies one of the ten generators to a momentum-representation state.
pub fn apply_generator(rep: &Representation, which: Generator, state: &StateVector) -> Result<StateVector> {
    rep.check_state(state)?;
    let grid = rep.grid();
    let signs = rep.sector_signs();
    let scheme = rep.scheme();
    let p0 = grid.p0();
    let i = Complex64::new(0.0, 1.0);
    let out = match which {
        Generator::P1 | Generator::P2 | Generator::P3 => {
            let axis = which as usize;
            state.multiply(&grid.momentum_component(axis))
        }
        Generator::P0 => state.multiply_signed(p0, signs),
        Generator::J1 | Generator::J2 | Generator::J3 => {
            let l = which as usize - Generator::J1 as usize;
            // J_l = i (p_b ∂_a - p_a ∂_b) with (l, a, b) cyclic
            let (a, b) = ((l + 1) % 3, (l + 2) % 3);
            let pa = grid.momentum_component(a);
            let pb = grid.momentum_component(b);
            state.map_sectors(|_, v| {
                let da = p_derivative(grid, v, a, scheme);
                let db = p_derivative(grid, v, b, scheme);
                (0..v.len()).map(|k| i * (pb[k] * da[k] - pa[k] * db[k])).collect()
            })
        }
        Generator::K1 | Generator::K2 | Generator::K3 => {
            let axis = which as usize - Generator::K1 as usize;
            state.map_sectors(|s, v| {
                let d = p_derivative(grid, v, axis, scheme);
                d.iter().zip(p0).map(|(dz, e)| -i * signs[s] * e * dz).collect()
            })
        }
    };
    Ok(out)
}

pub fn apply_theta(rep: &Representation, state: &StateVector) -> Result<StateVector> {
    rep.check_state(state)?;
    Ok(rep.theta.apply(rep.grid(), state))
}

pub fn apply_pi(rep: &Representation, state: &StateVector) -> Result<StateVector> {
    rep.check_state(state)?;
    Ok(rep.pi.apply(rep.grid(), state))
}

/// `E±`: keeps one sector of a two-sector state and zeroes the other.
pub fn sector_project(rep: &Representation, state: &StateVector, sector: Sector) -> Result<StateVector> {
    if rep.sector_count() != 2 {
        return Err(Error::NotTwoSector);
    }
    rep.check_state(state)?;
    let keep = match sector {
        Sector::Plus => 0,
        Sector::Minus => 1,
    };
    Ok(state.map_sectors(|s, v| if s == keep { v.to_vec() } else { vec![Complex64::new(0.0, 0.0); v.len()] }))
}
