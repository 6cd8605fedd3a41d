use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kinematics::StateVector;
use crate::representation::{apply_generator, finite_action, time_evolution, Generator, GroupElement, Representation};

/// A one-parameter subgroup together with its generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subgroup {
    Translation(usize),
    Time,
    Rotation(usize),
    Boost(usize),
}

impl Subgroup {
    pub const ALL: [Subgroup; 10] = [
        Subgroup::Translation(0),
        Subgroup::Translation(1),
        Subgroup::Translation(2),
        Subgroup::Time,
        Subgroup::Rotation(0),
        Subgroup::Rotation(1),
        Subgroup::Rotation(2),
        Subgroup::Boost(0),
        Subgroup::Boost(1),
        Subgroup::Boost(2),
    ];

    pub fn generator(self) -> Generator {
        match self {
            Subgroup::Translation(a) => Generator::momentum(a),
            Subgroup::Time => Generator::P0,
            Subgroup::Rotation(a) => Generator::rotation(a),
            Subgroup::Boost(a) => Generator::boost(a),
        }
    }

    /// Whether the finite action is an exact phase rather than an
    /// interpolated substitution.
    pub fn is_exact(self) -> bool {
        matches!(self, Subgroup::Translation(_) | Subgroup::Time)
    }

    /// `e^{-iGs}ψ`.
    pub fn act(self, rep: &Representation, psi: &StateVector, s: f64) -> Result<StateVector> {
        let axis = |a: usize| std::array::from_fn(|i| if i == a { 1.0 } else { 0.0 });
        let element = match self {
            Subgroup::Time => return time_evolution(rep, psi, s),
            Subgroup::Translation(a) => GroupElement::Translation { time: 0.0, space: axis(a).map(|v: f64| v * s) },
            Subgroup::Rotation(a) => GroupElement::Rotation { axis: axis(a), angle: s },
            Subgroup::Boost(a) => GroupElement::Boost { axis: axis(a), rapidity: s },
        };
        finite_action(rep, &element, psi)
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subgroup::Translation(a) => write!(f, "translation-{}", a + 1),
            Subgroup::Time => write!(f, "time"),
            Subgroup::Rotation(a) => write!(f, "rotation-{}", a + 1),
            Subgroup::Boost(a) => write!(f, "boost-{}", a + 1),
        }
    }
}

/// Difference quotients at `eps`, `eps/2`, `eps/4` against `-iG`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Consistency {
    /// `‖(U(s)ψ - ψ)/s + iGψ‖ / ‖ψ‖` for each of the three parameters.
    pub residuals: [f64; 3],
    /// `log₂(‖v(ε) - v(ε/2)‖ / ‖v(ε/2) - v(ε/4)‖)`.
    pub order: f64,
}

pub fn generator_quotients(rep: &Representation, sub: Subgroup, psi: &StateVector, eps: f64) -> Result<Consistency> {
    let grid = rep.grid();
    let norm = psi.norm(grid);
    let target = apply_generator(rep, sub.generator(), psi)?.scale(Complex64::new(0.0, -1.0));
    let mut quotients = Vec::with_capacity(3);
    for k in 0..3 {
        let s = eps / f64::from(1 << k);
        let moved = sub.act(rep, psi, s)?;
        quotients.push(moved.sub(psi)?.scale(Complex64::new(1.0 / s, 0.0)));
    }
    let mut residuals = [0.0; 3];
    for (r, q) in residuals.iter_mut().zip(&quotients) {
        *r = q.sub(&target)?.norm(grid) / norm;
    }
    let d1 = quotients[0].sub(&quotients[1])?.norm(grid);
    let d2 = quotients[1].sub(&quotients[2])?.norm(grid);
    Ok(Consistency { residuals, order: (d1 / d2).log2() })
}
