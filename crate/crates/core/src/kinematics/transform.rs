//! The unitary `Z = Z₁Z₂` between the momentum representation on
//! `L²(d³p/p₀)` and the position representation on `L²(d³x)`.
//!
//! `Z₂` divides by `√p₀`; `Z₁` is the discrete inverse Fourier–Plancherel
//! transform `ψ̂(x) = (2π)^{-3/2} Σ Δ³ e^{ip·x} φ(p)` on the conjugate lattice,
//! which is exactly unitary there.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::MomentumGrid;
use super::state::{Field, RepKind, StateVector};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToPosition,
    ToMomentum,
}

fn global_sign(grid: &MomentumGrid) -> f64 {
    // (-1)^(3n/2) from centring both lattices on the origin
    if (grid.n() / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Z₁`: plain inverse Fourier–Plancherel transform of a momentum-lattice field.
pub fn fourier_to_position(grid: &MomentumGrid, field: &[Complex64]) -> Field {
    let s = grid.checker();
    let mut buf: Field = field.iter().zip(s).map(|(z, s)| z * s).collect();
    grid.fft().inverse(&mut buf);
    let c = (grid.delta() / (2.0 * PI).sqrt()).powi(3) * global_sign(grid);
    for (z, s) in buf.iter_mut().zip(s) {
        *z *= c * s;
    }
    buf
}

/// `Z₁⁻¹`.
pub fn fourier_to_momentum(grid: &MomentumGrid, field: &[Complex64]) -> Field {
    let s = grid.checker();
    let mut buf: Field = field.iter().zip(s).map(|(z, s)| z * s).collect();
    grid.fft().forward(&mut buf);
    let c = (grid.dx() / (2.0 * PI).sqrt()).powi(3) * global_sign(grid);
    for (z, s) in buf.iter_mut().zip(s) {
        *z *= c * s;
    }
    buf
}

/// `Z` on a single momentum-representation field.
pub fn z_field_to_position(grid: &MomentumGrid, field: &[Complex64]) -> Field {
    let scaled: Field = field.iter().zip(grid.p0()).map(|(z, e)| z / e.sqrt()).collect();
    fourier_to_position(grid, &scaled)
}

/// `Z⁻¹` on a single position-representation field.
pub fn z_field_to_momentum(grid: &MomentumGrid, field: &[Complex64]) -> Field {
    let mut out = fourier_to_momentum(grid, field);
    for (z, e) in out.iter_mut().zip(grid.p0()) {
        *z *= e.sqrt();
    }
    out
}

/// Applies `Z` (to position) or `Z⁻¹` (to momentum) sector-wise.
pub fn z_transform(grid: &MomentumGrid, state: &StateVector, direction: Direction) -> Result<StateVector> {
    state.expect_grid(grid)?;
    let (from, to) = match direction {
        Direction::ToPosition => (RepKind::Momentum, RepKind::Position),
        Direction::ToMomentum => (RepKind::Position, RepKind::Momentum),
    };
    state.expect_kind(from)?;
    let sectors = state
        .sectors()
        .iter()
        .map(|f| match direction {
            Direction::ToPosition => z_field_to_position(grid, f),
            Direction::ToMomentum => z_field_to_momentum(grid, f),
        })
        .collect();
    Ok(StateVector::from_parts(grid.spec(), to, sectors))
}

pub fn to_position(grid: &MomentumGrid, state: &StateVector) -> Result<StateVector> {
    z_transform(grid, state, Direction::ToPosition)
}

pub fn to_momentum(grid: &MomentumGrid, state: &StateVector) -> Result<StateVector> {
    z_transform(grid, state, Direction::ToMomentum)
}

/// Spectral `∂/∂x_axis` of a position-lattice field.
///
/// The unpaired Nyquist mode at `-p_max` is dropped so real fields have
/// real derivatives.
pub fn position_derivative(grid: &MomentumGrid, field: &[Complex64], axis: usize) -> Field {
    let mut spec = fourier_to_momentum(grid, field);
    for (i, z) in spec.iter_mut().enumerate() {
        let k = grid.unravel(i)[axis];
        *z *= if k == 0 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, grid.axis_momenta()[k]) };
    }
    fourier_to_position(grid, &spec)
}

/// Spectral Laplacian of a position-lattice field (multiplication by `-|p|²`).
pub fn position_laplacian(grid: &MomentumGrid, field: &[Complex64]) -> Field {
    let mut spec = fourier_to_momentum(grid, field);
    for (i, z) in spec.iter_mut().enumerate() {
        let p = grid.momentum(i);
        *z *= -(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    }
    fourier_to_position(grid, &spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{build_grid, inner_product};

    fn sample(grid: &MomentumGrid) -> StateVector {
        let f: Field = (0..grid.len())
            .map(|i| {
                let p = grid.momentum(i);
                let r2 = (p[0] - 0.4).powi(2) + (p[1] + 0.2).powi(2) + p[2] * p[2];
                Complex64::from_polar((-r2 / 2.0).exp(), 0.7 * p[1] - 1.1 * p[2])
            })
            .collect();
        StateVector::single(grid, RepKind::Momentum, f).unwrap()
    }

    #[test]
    fn direct_sum_matches_fft_route() {
        let g = build_grid(8, 4.0, 1.0).unwrap();
        let psi = sample(&g);
        let fast = to_position(&g, &psi).unwrap();
        let c = (g.delta() / (2.0 * PI).sqrt()).powi(3);
        for m in [0usize, 7, 100, 300, 511] {
            let x = g.position(m);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..g.len() {
                let p = g.momentum(k);
                let ph = p[0] * x[0] + p[1] * x[1] + p[2] * x[2];
                acc += Complex64::from_polar(1.0, ph) * psi.sectors()[0][k] / g.p0()[k].sqrt();
            }
            assert!((acc * c - fast.sectors()[0][m]).norm() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        let g = build_grid(10, 3.0, 1.3).unwrap();
        let a = sample(&g);
        let b = a.map_sectors(|_, v| v.iter().enumerate().map(|(i, z)| z * (i as f64 * 0.01).cos()).collect());
        let ax = to_position(&g, &a).unwrap();
        let bx = to_position(&g, &b).unwrap();
        assert!((ax.norm(&g) - a.norm(&g)).abs() < 1e-10 * a.norm(&g));
        let ip_p = inner_product(&a, &b, &g).unwrap();
        let ip_x = inner_product(&ax, &bx, &g).unwrap();
        assert!((ip_p - ip_x).norm() < 1e-10);
        let back = to_momentum(&g, &ax).unwrap();
        for (u, v) in back.sectors()[0].iter().zip(&a.sectors()[0]) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn transform_requires_opposite_kind() {
        let g = build_grid(8, 4.0, 1.0).unwrap();
        let psi = sample(&g);
        assert!(to_momentum(&g, &psi).is_err());
    }
}
