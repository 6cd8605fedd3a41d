use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Representation;
use crate::error::{Error, Result};
use crate::kinematics::{tail_mass, Field, MomentumGrid, RepKind, StateVector};

/// Outer-layer mass above which a rotated or boosted state is rejected.
pub const ESCAPE_TAIL_LIMIT: f64 = 1e-6;
/// Relative norm loss above which a rotated or boosted state is rejected.
pub const ESCAPE_NORM_LOSS: f64 = 0.1;

/// An element of one of the one-parameter subgroups (or a joint spacetime
/// translation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupElement {
    Translation { time: f64, space: [f64; 3] },
    Rotation { axis: [f64; 3], angle: f64 },
    Boost { axis: [f64; 3], rapidity: f64 },
}

impl GroupElement {
    /// Boost parameterized by a velocity `|u| < 1`.
    pub fn boost_from_velocity(axis: [f64; 3], u: f64) -> GroupElement {
        GroupElement::Boost { axis, rapidity: u.atanh() }
    }
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    assert!(r > 0.0, "axis must be non-zero");
    [v[0] / r, v[1] / r, v[2] / r]
}

/// Rodrigues rotation of `p` by `angle` about the unit vector `n`.
pub fn rotate(n: [f64; 3], angle: f64, p: [f64; 3]) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let dot = n[0] * p[0] + n[1] * p[1] + n[2] * p[2];
    let cross = [n[1] * p[2] - n[2] * p[1], n[2] * p[0] - n[0] * p[2], n[0] * p[1] - n[1] * p[0]];
    std::array::from_fn(|i| p[i] * c + cross[i] * s + n[i] * dot * (1.0 - c))
}

/// Spatial part of the pure boost with rapidity `phi` along the unit vector
/// `n`, applied to the on-shell momentum `(p0, p)`.
pub fn boost_momentum(n: [f64; 3], phi: f64, p0: f64, p: [f64; 3]) -> [f64; 3] {
    let dot = n[0] * p[0] + n[1] * p[1] + n[2] * p[2];
    let k = (phi.cosh() - 1.0) * dot + phi.sinh() * p0;
    std::array::from_fn(|i| p[i] + k * n[i])
}

/// Trilinear interpolation of a lattice field at an arbitrary momentum,
/// treating everything outside the lattice as zero.
pub fn interpolate(grid: &MomentumGrid, field: &[Complex64], q: [f64; 3]) -> Complex64 {
    let n = grid.n();
    let half = (n / 2) as f64;
    let mut base = [0usize; 3];
    let mut frac = [0.0; 3];
    for a in 0..3 {
        let u = q[a] / grid.delta() + half;
        let f = u.floor();
        if f < -1.0 || f > (n - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        frac[a] = u - f;
        // -1 marks the lower corner as outside; shift by one to stay unsigned
        base[a] = (f + 1.0) as usize;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for corner in 0..8 {
        let mut w = 1.0;
        let mut idx = [0usize; 3];
        let mut inside = true;
        for a in 0..3 {
            let hi = (corner >> a) & 1;
            w *= if hi == 1 { frac[a] } else { 1.0 - frac[a] };
            let k = base[a] + hi;
            if k == 0 || k > n {
                inside = false;
                break;
            }
            idx[a] = k - 1;
        }
        if inside && w != 0.0 {
            acc += field[grid.index(idx)] * w;
        }
    }
    acc
}

fn pull_back<F>(grid: &MomentumGrid, field: &[Complex64], source: F) -> Field
where
    F: Fn(usize) -> [f64; 3] + Sync,
{
    (0..grid.len()).into_par_iter().map(|i| interpolate(grid, field, source(i))).collect()
}

/// Applies a group element to a momentum-representation state.
///
/// Translations are exact phases. Rotations and boosts substitute
/// `ψ'(p) = ψ(Λ⁻¹p)` with trilinear interpolation; the invariant measure needs
/// no Jacobian. In the lower sector the boost runs backwards, matching the
/// sector sign carried by `K`.
pub fn finite_action(rep: &Representation, element: &GroupElement, state: &StateVector) -> Result<StateVector> {
    rep.check_state(state)?;
    let grid = rep.grid();
    let signs = rep.sector_signs();
    let out = match *element {
        GroupElement::Translation { time, space } => state.map_sectors(|s, v| {
            v.iter()
                .enumerate()
                .map(|(i, z)| {
                    let p = grid.momentum(i);
                    let phase = -(p[0] * space[0] + p[1] * space[1] + p[2] * space[2]) + signs[s] * grid.p0()[i] * time;
                    z * Complex64::from_polar(1.0, phase)
                })
                .collect()
        }),
        GroupElement::Rotation { axis, angle } => {
            let n = unit(axis);
            state.map_sectors(|_, v| pull_back(grid, v, |i| rotate(n, -angle, grid.momentum(i))))
        }
        GroupElement::Boost { axis, rapidity } => {
            let n = unit(axis);
            state.map_sectors(|s, v| {
                let phi = -signs[s] * rapidity;
                pull_back(grid, v, |i| boost_momentum(n, phi, grid.p0()[i], grid.momentum(i)))
            })
        }
    };
    if !matches!(element, GroupElement::Translation { .. }) {
        check_support(grid, state, &out)?;
    }
    Ok(out)
}

fn check_support(grid: &MomentumGrid, before: &StateVector, after: &StateVector) -> Result<()> {
    let n0 = before.norm_sqr(grid);
    if n0 == 0.0 {
        return Ok(());
    }
    let n1 = after.norm_sqr(grid);
    let tail = tail_mass(after, grid);
    let lost = (1.0 - n1 / n0).max(0.0);
    if tail > ESCAPE_TAIL_LIMIT || lost > ESCAPE_NORM_LOSS {
        return Err(Error::SupportEscape { tail, lost });
    }
    Ok(())
}

/// Exact propagation `e^{-iP₀t}`; position-representation input is carried
/// through the transform and returned in the same representation.
pub fn time_evolution(rep: &Representation, state: &StateVector, t: f64) -> Result<StateVector> {
    let grid = rep.grid();
    let signs = rep.sector_signs();
    let step = |psi: &StateVector| {
        psi.map_sectors(|s, v| {
            v.iter()
                .zip(grid.p0())
                .map(|(z, e)| z * Complex64::from_polar(1.0, -signs[s] * e * t))
                .collect()
        })
    };
    match state.kind() {
        RepKind::Momentum => {
            rep.check_state(state)?;
            Ok(step(state))
        }
        RepKind::Position => {
            let p = crate::kinematics::to_momentum(grid, state)?;
            rep.check_state(&p)?;
            crate::kinematics::to_position(grid, &step(&p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::build_grid;

    #[test]
    fn rodrigues_quarter_turn() {
        let r = rotate([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2, [1.0, 0.0, 0.0]);
        assert!((r[0]).abs() < 1e-15 && (r[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn boost_keeps_mass_shell() {
        let mu: f64 = 1.3;
        let p = [0.4, -0.2, 0.7];
        let p0 = (mu * mu + p.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let q = boost_momentum(unit([1.0, 2.0, -1.0]), 0.7, p0, p);
        let q0 = (mu * mu + q.iter().map(|x| x * x).sum::<f64>()).sqrt();
        // the time component of the boosted vector
        let n = unit([1.0, 2.0, -1.0]);
        let dot: f64 = (0..3).map(|i| n[i] * p[i]).sum();
        let expected_q0 = 0.7f64.cosh() * p0 + 0.7f64.sinh() * dot;
        assert!((q0 - expected_q0).abs() < 1e-12);
        let back = boost_momentum(n, -0.7, q0, q);
        for i in 0..3 {
            assert!((back[i] - p[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_for_linear_fields() {
        let g = build_grid(8, 4.0, 1.0).unwrap();
        let f: Field = (0..g.len())
            .map(|i| {
                let p = g.momentum(i);
                Complex64::new(1.0 + p[0] - 2.0 * p[1] + 0.5 * p[2], p[2])
            })
            .collect();
        let i = g.index([3, 5, 2]);
        assert_eq!(interpolate(&g, &f, g.momentum(i)), f[i]);
        let q = [0.3, -0.7, 1.1];
        let got = interpolate(&g, &f, q);
        let want = Complex64::new(1.0 + q[0] - 2.0 * q[1] + 0.5 * q[2], q[2]);
        assert!((got - want).norm() < 1e-12);
        assert_eq!(interpolate(&g, &f, [100.0, 0.0, 0.0]), Complex64::new(0.0, 0.0));
    }
}
