use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::kinematics::{fourier_to_momentum, fourier_to_position, Field, MomentumGrid};

/// The ten Poincaré generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    P1,
    P2,
    P3,
    P0,
    J1,
    J2,
    J3,
    K1,
    K2,
    K3,
}

impl Generator {
    pub const ALL: [Generator; 10] = [
        Generator::P1,
        Generator::P2,
        Generator::P3,
        Generator::P0,
        Generator::J1,
        Generator::J2,
        Generator::J3,
        Generator::K1,
        Generator::K2,
        Generator::K3,
    ];

    pub fn momentum(axis: usize) -> Generator {
        [Generator::P1, Generator::P2, Generator::P3][axis]
    }

    pub fn rotation(axis: usize) -> Generator {
        [Generator::J1, Generator::J2, Generator::J3][axis]
    }

    pub fn boost(axis: usize) -> Generator {
        [Generator::K1, Generator::K2, Generator::K3][axis]
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Generator::ALL
            .into_iter()
            .find(|g| g.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown generator `{s}`"))
    }
}

/// How `∂/∂p_j` is evaluated inside `J` and `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeScheme {
    /// Spectral derivative of `ψ/√p₀` on the conjugate lattice, plus the
    /// analytic derivative of `√p₀`.
    #[default]
    Spectral,
    /// Fourth-order centred differences, zero outside the lattice.
    FiniteDifference4,
}

/// `∂ψ/∂p_axis` for one momentum-lattice field.
pub fn p_derivative(grid: &MomentumGrid, field: &[Complex64], axis: usize, scheme: DerivativeScheme) -> Field {
    match scheme {
        DerivativeScheme::Spectral => spectral_derivative(grid, field, axis),
        DerivativeScheme::FiniteDifference4 => fd4_derivative(grid, field, axis),
    }
}

fn spectral_derivative(grid: &MomentumGrid, field: &[Complex64], axis: usize) -> Field {
    let p0 = grid.p0();
    let reduced: Field = field.iter().zip(p0).map(|(z, e)| z / e.sqrt()).collect();
    let mut x_side = fourier_to_position(grid, &reduced);
    let x = grid.axis_positions();
    for (i, z) in x_side.iter_mut().enumerate() {
        // ∂_p ↔ multiplication by -i x
        *z *= Complex64::new(0.0, -x[grid.unravel(i)[axis]]);
    }
    let d_reduced = fourier_to_momentum(grid, &x_side);
    let pa = grid.axis_momenta();
    d_reduced
        .iter()
        .zip(field)
        .enumerate()
        .map(|(i, (dz, z))| {
            let e = p0[i];
            dz * e.sqrt() + z * (pa[grid.unravel(i)[axis]] / (2.0 * e * e))
        })
        .collect()
}

fn fd4_derivative(grid: &MomentumGrid, field: &[Complex64], axis: usize) -> Field {
    let n = grid.n() as isize;
    let h = grid.delta();
    let at = |i: usize, shift: isize| -> Complex64 {
        let mut k = grid.unravel(i);
        let moved = k[axis] as isize + shift;
        if moved < 0 || moved >= n {
            return Complex64::new(0.0, 0.0);
        }
        k[axis] = moved as usize;
        field[grid.index(k)]
    };
    (0..field.len())
        .map(|i| (-at(i, 2) + at(i, 1) * 8.0 - at(i, -1) * 8.0 + at(i, -2)) / (12.0 * h))
        .collect()
}
