use num_complex::Complex64;

use crate::error::Result;
use crate::kinematics::{z_field_to_momentum, z_field_to_position, StateVector};
use crate::representation::Representation;

/// `F_j ψ = Z⁻¹ x_j Z ψ`, sector-wise.
pub fn newton_wigner_apply(rep: &Representation, axis: usize, state: &StateVector) -> Result<StateVector> {
    rep.check_state(state)?;
    let grid = rep.grid();
    let x = grid.axis_positions();
    Ok(state.map_sectors(|_, v| {
        let mut pos = z_field_to_position(grid, v);
        for (i, z) in pos.iter_mut().enumerate() {
            *z *= x[grid.unravel(i)[axis]];
        }
        z_field_to_momentum(grid, &pos)
    }))
}

/// The same operator written as a differential operator in momentum space,
/// `i ∂_j - i p_j / (2p₀²)`, using the representation's derivative scheme.
pub fn newton_wigner_differential(rep: &Representation, axis: usize, state: &StateVector) -> Result<StateVector> {
    rep.check_state(state)?;
    let grid = rep.grid();
    let pa = grid.axis_momenta();
    let p0 = grid.p0();
    let i = Complex64::new(0.0, 1.0);
    Ok(state.map_sectors(|_, v| {
        let d = crate::representation::p_derivative(grid, v, axis, rep.scheme());
        (0..v.len())
            .map(|k| {
                let pj = pa[grid.unravel(k)[axis]];
                i * d[k] - i * v[k] * (pj / (2.0 * p0[k] * p0[k]))
            })
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{build_grid, gaussian_packet, inner_product, PacketSpec, Placement};
    use crate::representation::RepClass;

    #[test]
    fn expectation_tracks_phase_offset() {
        let g = build_grid(32, 10.0, 1.0).unwrap();
        let rep = Representation::of_class(RepClass::Up, &g);
        let x0 = [0.4, -0.3, 0.2];
        let psi = gaussian_packet(&g, &PacketSpec::new([0.3, 0.0, -0.2], 1.0, Placement::Single).with_offset(x0)).unwrap();
        for axis in 0..3 {
            let f = newton_wigner_apply(&rep, axis, &psi).unwrap();
            let e = inner_product(&psi, &f, &g).unwrap();
            assert!((e.re - x0[axis]).abs() < 1e-6 && e.im.abs() < 1e-12, "{axis}: {e}");
        }
    }

    #[test]
    fn multiplication_and_differential_forms_agree() {
        let g = build_grid(32, 10.0, 1.0).unwrap();
        let rep = Representation::of_class(RepClass::U3, &g);
        let psi = gaussian_packet(&g, &PacketSpec::new([0.2, 0.1, 0.0], 1.0, Placement::Minus).with_offset([0.3, 0.0, -0.3]))
            .unwrap();
        for axis in 0..3 {
            let a = newton_wigner_apply(&rep, axis, &psi).unwrap();
            let b = newton_wigner_differential(&rep, axis, &psi).unwrap();
            let r = a.sub(&b).unwrap().norm(&g);
            assert!(r < 1e-8, "axis {axis}: {r}");
        }
    }
}
