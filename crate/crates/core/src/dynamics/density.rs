use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Theory;
use crate::error::{Error, Result};
use crate::kinematics::{position_derivative, z_field_to_position, Field, MomentumGrid, RepKind, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    /// `|ψ|²` summed over sectors.
    Rho,
    /// The Klein–Gordon charge density.
    RhoHat,
}

/// A real field on the position lattice; the Klein–Gordon density carries
/// its current.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityField {
    pub kind: DensityKind,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub current: Option<[Vec<f64>; 3]>,
}

impl DensityField {
    /// `∫ values d³x`.
    pub fn integral(&self, grid: &MomentumGrid) -> f64 {
        self.values.iter().sum::<f64>() * grid.dx3()
    }

    /// Smallest value and the lattice index where it occurs.
    pub fn min(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best })
    }
}

/// `ρ = Σ_s |ψ_s(x)|²` of a position-representation state.
pub fn position_density(theory: &Theory, state: &StateVector) -> Result<DensityField> {
    state.expect_kind(RepKind::Position)?;
    state.expect_grid(theory.grid())?;
    if state.sector_count() != theory.rep().sector_count() {
        return Err(Error::SectorMismatch { expected: theory.rep().sector_count(), got: state.sector_count() });
    }
    let mut values = vec![0.0; theory.grid().len()];
    for v in state.sectors() {
        for (r, z) in values.iter_mut().zip(v) {
            *r += z.norm_sqr();
        }
    }
    Ok(DensityField { kind: DensityKind::Rho, values, current: None })
}

/// The scalar field `ψ(x) = Σ_s (Zψ_s)(x)` and its exact time derivative
/// `Σ_s Z(-i·s·p₀ ψ_s)`, from a momentum-representation state.
///
/// For a two-sector state this is a solution of the Klein–Gordon equation
/// mixing both signs of frequency.
pub fn kg_field(theory: &Theory, state: &StateVector) -> Result<(Field, Field)> {
    theory.rep().check_state(state)?;
    let grid = theory.grid();
    let signs = theory.rep().sector_signs();
    let n = grid.len();
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    let mut dpsi = vec![Complex64::new(0.0, 0.0); n];
    for (s, v) in state.sectors().iter().enumerate() {
        let dt: Field = v.iter().zip(grid.p0()).map(|(z, e)| z * Complex64::new(0.0, -signs[s] * e)).collect();
        for (a, b) in psi.iter_mut().zip(z_field_to_position(grid, v)) {
            *a += b;
        }
        for (a, b) in dpsi.iter_mut().zip(z_field_to_position(grid, &dt)) {
            *a += b;
        }
    }
    Ok((psi, dpsi))
}

/// `ρ̂ = -Im(ψ̄ ∂_tψ)/m` and `ĵ = Im(ψ̄ ∇ψ)/m` of a position-lattice snapshot,
/// with the gradient taken spectrally.
pub fn kg_density_current(grid: &MomentumGrid, psi: &[Complex64], dpsi_dt: &[Complex64], m: f64) -> DensityField {
    let values = psi.iter().zip(dpsi_dt).map(|(p, d)| -(p.conj() * d).im / m).collect();
    let current = std::array::from_fn(|axis| {
        let grad = position_derivative(grid, psi, axis);
        psi.iter().zip(&grad).map(|(p, g)| (p.conj() * g).im / m).collect()
    });
    DensityField { kind: DensityKind::RhoHat, values, current: Some(current) }
}

/// Continuity residuals under both sign conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityResidual {
    /// `‖∂_tρ̂ + ∇·ĵ‖ / ‖ρ̂‖`, which vanishes for exact solutions.
    pub standard: f64,
    /// `‖∂_tρ̂ - ∇·ĵ‖ / ‖ρ̂‖`.
    pub reversed: f64,
}

/// Worst residual over the interior snapshots of an equally spaced series,
/// using centred time differences and the spectral divergence.
pub fn continuity_residual(grid: &MomentumGrid, series: &[DensityField], dt: f64) -> Result<ContinuityResidual> {
    if series.len() < 3 {
        return Err(Error::TooFewSnapshots(series.len()));
    }
    let mut worst = ContinuityResidual { standard: 0.0, reversed: 0.0 };
    for k in 1..series.len() - 1 {
        let current = series[k].current.as_ref().ok_or_else(|| {
            Error::InvalidPacket("continuity needs Klein–Gordon densities with currents".to_string())
        })?;
        let mut div = vec![0.0; grid.len()];
        for (axis, j) in current.iter().enumerate() {
            let jc: Field = j.iter().map(|v| Complex64::new(*v, 0.0)).collect();
            for (d, g) in div.iter_mut().zip(position_derivative(grid, &jc, axis)) {
                *d += g.re;
            }
        }
        let (mut plus, mut minus, mut norm) = (0.0, 0.0, 0.0);
        for i in 0..grid.len() {
            let rt = (series[k + 1].values[i] - series[k - 1].values[i]) / (2.0 * dt);
            plus += (rt + div[i]).powi(2);
            minus += (rt - div[i]).powi(2);
            norm += series[k].values[i].powi(2);
        }
        worst.standard = worst.standard.max((plus / norm).sqrt());
        worst.reversed = worst.reversed.max((minus / norm).sqrt());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, lattice_mode, TheoryId};
    use crate::kinematics::build_grid;

    #[test]
    fn plane_wave_density_oracle() {
        // ψ̄∂_tψ = ∓iE|ψ|² for a single mode of either frequency sign
        let g = build_grid(16, 8.0, 1.3).unwrap();
        let th = Theory::new(TheoryId::T3, &g);
        let idx = g.index([10, 6, 8]);
        let e = g.p0()[idx];
        for (sector, sign) in [(0usize, 1.0), (1, -1.0)] {
            let mode = lattice_mode(&th, idx, sector).unwrap();
            let (psi, dpsi) = kg_field(&th, &mode).unwrap();
            let rho = kg_density_current(&g, &psi, &dpsi, g.mu());
            for (r, z) in rho.values.iter().zip(&psi) {
                assert!((r - sign * e / g.mu() * z.norm_sqr()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn plane_wave_continuity_vanishes() {
        let g = build_grid(16, 8.0, 1.0).unwrap();
        let th = Theory::new(TheoryId::T1, &g);
        let mode = lattice_mode(&th, g.index([9, 8, 7]), 0).unwrap();
        let dt = 0.05;
        let series: Vec<DensityField> = (0..3)
            .map(|k| {
                let psi = evolve(&th, &mode, k as f64 * dt).unwrap();
                let (f, d) = kg_field(&th, &psi).unwrap();
                kg_density_current(&g, &f, &d, 1.0)
            })
            .collect();
        let r = continuity_residual(&g, &series, dt).unwrap();
        assert!(r.standard < 1e-9 && r.reversed < 1e-9, "{r:?}");
        assert!(matches!(continuity_residual(&g, &series[..2], dt), Err(Error::TooFewSnapshots(2))));
    }
}
