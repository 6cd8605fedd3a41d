use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::MomentumGrid;
use super::state::{tail_mass, Field, RepKind, StateVector};
use crate::error::{Error, Result};

/// Largest admissible fraction of the norm in the outer lattice layers.
pub const TAIL_LIMIT: f64 = 1e-8;

/// Where a packet lives: the only field of a single-sector state, or one
/// sector of a two-sector state (the other left at zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Single,
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub center_p: [f64; 3],
    pub width: f64,
    pub sector: Placement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_x0: Option<[f64; 3]>,
}

impl PacketSpec {
    pub fn new(center_p: [f64; 3], width: f64, sector: Placement) -> Self {
        PacketSpec { center_p, width, sector, phase_x0: None }
    }

    pub fn with_offset(mut self, x0: [f64; 3]) -> Self {
        self.phase_x0 = Some(x0);
        self
    }

    pub fn validate(&self, grid: &MomentumGrid) -> Result<()> {
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::InvalidPacket(format!("width must be positive, got {}", self.width)));
        }
        let r = self.center_p.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(r < grid.p_max()) {
            return Err(Error::InvalidPacket(format!(
                "centre |p| = {r} is not inside the cutoff {}",
                grid.p_max()
            )));
        }
        Ok(())
    }
}

/// Unnormalized profile `√p₀ · exp(-|p-c|²/(4w²)) · e^{-ip·x₀}`.
///
/// The `√p₀` factor makes the position-representation image a plain Gaussian
/// centred at `x₀` with density spread `1/(2w)`, so the packet is well
/// localized in both lattices.
pub fn packet_profile(grid: &MomentumGrid, spec: &PacketSpec) -> Field {
    let c = spec.center_p;
    let x0 = spec.phase_x0.unwrap_or([0.0; 3]);
    let inv = 1.0 / (4.0 * spec.width * spec.width);
    (0..grid.len())
        .map(|i| {
            let p = grid.momentum(i);
            let d2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) + (p[2] - c[2]).powi(2);
            let phase = -(p[0] * x0[0] + p[1] * x0[1] + p[2] * x0[2]);
            Complex64::from_polar(grid.p0()[i].sqrt() * (-d2 * inv).exp(), phase)
        })
        .collect()
}

/// Normalized Gaussian packet in the momentum representation.
pub fn gaussian_packet(grid: &MomentumGrid, spec: &PacketSpec) -> Result<StateVector> {
    spec.validate(grid)?;
    let field = packet_profile(grid, spec);
    let zero = || vec![Complex64::new(0.0, 0.0); grid.len()];
    let state = match spec.sector {
        Placement::Single => StateVector::single(grid, RepKind::Momentum, field)?,
        Placement::Plus => StateVector::pair(grid, RepKind::Momentum, field, zero())?,
        Placement::Minus => StateVector::pair(grid, RepKind::Momentum, zero(), field)?,
    };
    let leakage = tail_mass(&state, grid);
    if leakage > TAIL_LIMIT {
        return Err(Error::TailLeak { leakage, limit: TAIL_LIMIT });
    }
    Ok(state.normalized(grid))
}

/// Diagonal expectation `⟨ψ| f(p) |ψ⟩ / ⟨ψ|ψ⟩` in the momentum representation,
/// with an optional per-sector sign on `f`.
pub fn momentum_expectation(grid: &MomentumGrid, state: &StateVector, f: &[f64], signs: Option<&[f64]>) -> f64 {
    let w = grid.weights();
    let mut num = 0.0;
    for (s, v) in state.sectors().iter().enumerate() {
        let sign = signs.map_or(1.0, |g| g[s]);
        num += sign * v.iter().zip(w).zip(f).map(|((z, w), f)| w * f * z.norm_sqr()).sum::<f64>();
    }
    num / state.norm_sqr(grid)
}

/// `⟨x_axis⟩` of a position-representation state.
pub fn position_expectation(grid: &MomentumGrid, state: &StateVector, axis: usize) -> f64 {
    let x = grid.axis_positions();
    let mut num = 0.0;
    let mut den = 0.0;
    for v in state.sectors() {
        for (i, z) in v.iter().enumerate() {
            let m = z.norm_sqr();
            num += x[grid.unravel(i)[axis]] * m;
            den += m;
        }
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{build_grid, inner_product, to_position};

    #[test]
    fn packet_is_normalized() {
        let g = build_grid(24, 8.0, 1.0).unwrap();
        let spec = PacketSpec::new([0.5, -0.3, 0.2], 1.0, Placement::Single).with_offset([0.4, 0.0, -0.2]);
        let psi = gaussian_packet(&g, &spec).unwrap();
        assert!((psi.norm_sqr(&g) - 1.0).abs() < 1e-12);
        let ip = inner_product(&psi, &psi, &g).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-12 && ip.im.abs() < 1e-15);
    }

    #[test]
    fn narrow_packet_mean_momentum_near_centre() {
        let g = build_grid(32, 6.0, 1.0).unwrap();
        let c = [0.75, -0.375, 0.0];
        let psi = gaussian_packet(&g, &PacketSpec::new(c, 0.6, Placement::Single)).unwrap();
        for a in 0..3 {
            // direct weighted sum of p_a |ψ|²
            let pa = g.momentum_component(a);
            let mean = momentum_expectation(&g, &psi, &pa, None);
            // the √p₀ factor shifts the mean by O(w²/p₀)
            assert!((mean - c[a]).abs() < g.delta(), "axis {a}: {mean}");
        }
    }

    #[test]
    fn offset_packet_peaks_at_offset() {
        let g = build_grid(32, 8.0, 1.0).unwrap();
        let spec = PacketSpec::new([0.0; 3], 1.0, Placement::Single).with_offset([2.0, 0.0, 0.0]);
        let x = to_position(&g, &gaussian_packet(&g, &spec).unwrap()).unwrap();
        let (imax, _) = x.sectors()[0]
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        let peak = g.position(imax);
        assert!((peak[0] - 2.0).abs() <= g.dx() / 2.0 + 1e-12, "{peak:?}");
        assert!(peak[1].abs() < 1e-12 && peak[2].abs() < 1e-12);
        assert!((position_expectation(&g, &x, 0) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn placement_sets_layout() {
        let g = build_grid(16, 8.0, 1.0).unwrap();
        let plus = gaussian_packet(&g, &PacketSpec::new([0.0; 3], 0.8, Placement::Plus)).unwrap();
        assert!(plus.is_pair());
        assert!(plus.sectors()[1].iter().all(|z| z.norm() == 0.0));
        let minus = gaussian_packet(&g, &PacketSpec::new([0.0; 3], 0.8, Placement::Minus)).unwrap();
        assert!(minus.sectors()[0].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn rejects_invalid_and_leaky_packets() {
        let g = build_grid(16, 4.0, 1.0).unwrap();
        let bad_width = PacketSpec::new([0.0; 3], 0.0, Placement::Single);
        assert!(matches!(gaussian_packet(&g, &bad_width), Err(Error::InvalidPacket(_))));
        let outside = PacketSpec::new([4.0, 0.0, 0.0], 0.5, Placement::Single);
        assert!(matches!(gaussian_packet(&g, &outside), Err(Error::InvalidPacket(_))));
        let wide = PacketSpec::new([0.0; 3], 2.0, Placement::Single);
        match gaussian_packet(&g, &wide) {
            Err(Error::TailLeak { leakage, .. }) => assert!(leakage > TAIL_LIMIT),
            other => panic!("expected a tail leak, got {other:?}"),
        }
    }
}
