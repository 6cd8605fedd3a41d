use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fft::Fft3;
use crate::error::{Error, Result};

/// Serializable grid descriptor `{n, p_max, mu}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub p_max: f64,
    pub mu: f64,
}

impl GridSpec {
    pub fn new(n: usize, p_max: f64, mu: f64) -> Self {
        GridSpec { n, p_max, mu }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 8 || self.n % 2 != 0 {
            return Err(Error::BadAxisCount(self.n));
        }
        if !(self.p_max > 0.0) || !self.p_max.is_finite() {
            return Err(Error::NonPositiveCutoff(self.p_max));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::NonPositiveMass(self.mu));
        }
        Ok(())
    }
}

/// Cubic momentum lattice `p ∈ {-p_max + kΔ}³` carrying the invariant
/// measure `d³p / p₀` as per-point weights `Δ³/p₀`.
///
/// Index layout is row-major with the first axis fastest:
/// `idx = i₀ + n·(i₁ + n·i₂)`. The conjugate position lattice has spacing
/// `2π/(nΔ)` and the same index layout.
#[derive(Debug, Clone)]
pub struct MomentumGrid {
    spec: GridSpec,
    delta: f64,
    axis_p: Vec<f64>,
    axis_x: Vec<f64>,
    p0: Arc<[f64]>,
    weights: Arc<[f64]>,
    checker: Arc<[f64]>,
    fft: Fft3,
}

pub fn build_grid(n_per_axis: usize, p_max: f64, mu: f64) -> Result<MomentumGrid> {
    MomentumGrid::new(GridSpec::new(n_per_axis, p_max, mu))
}

impl MomentumGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.n;
        let half = (n / 2) as f64;
        let delta = 2.0 * spec.p_max / n as f64;
        let dx = PI / spec.p_max;
        let axis_p: Vec<f64> = (0..n).map(|k| (k as f64 - half) * delta).collect();
        let axis_x: Vec<f64> = (0..n).map(|m| (m as f64 - half) * dx).collect();

        let len = n * n * n;
        let mut p0 = Vec::with_capacity(len);
        let mut weights = Vec::with_capacity(len);
        let mut checker = Vec::with_capacity(len);
        let cell = delta.powi(3);
        let mu2 = spec.mu * spec.mu;
        for i2 in 0..n {
            for i1 in 0..n {
                for i0 in 0..n {
                    let r2 = axis_p[i0] * axis_p[i0] + axis_p[i1] * axis_p[i1] + axis_p[i2] * axis_p[i2];
                    let e = (mu2 + r2).sqrt();
                    p0.push(e);
                    weights.push(cell / e);
                    checker.push(if (i0 + i1 + i2) % 2 == 0 { 1.0 } else { -1.0 });
                }
            }
        }

        Ok(MomentumGrid {
            spec,
            delta,
            axis_p,
            axis_x,
            p0: p0.into(),
            weights: weights.into(),
            checker: checker.into(),
            fft: Fft3::new(n),
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn len(&self) -> usize {
        self.spec.n.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mu(&self) -> f64 {
        self.spec.mu
    }

    pub fn p_max(&self) -> f64 {
        self.spec.p_max
    }

    /// Momentum spacing Δ.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Position spacing `2π/(nΔ)`.
    pub fn dx(&self) -> f64 {
        PI / self.spec.p_max
    }

    /// Volume element of the position lattice.
    pub fn dx3(&self) -> f64 {
        self.dx().powi(3)
    }

    pub fn axis_momenta(&self) -> &[f64] {
        &self.axis_p
    }

    pub fn axis_positions(&self) -> &[f64] {
        &self.axis_x
    }

    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(-1)^(i₀+i₁+i₂)`, used to centre the discrete transforms.
    pub(crate) fn checker(&self) -> &[f64] {
        &self.checker
    }

    pub(crate) fn fft(&self) -> &Fft3 {
        &self.fft
    }

    #[inline]
    pub fn index(&self, i: [usize; 3]) -> usize {
        let n = self.spec.n;
        i[0] + n * (i[1] + n * i[2])
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let n = self.spec.n;
        [idx % n, (idx / n) % n, idx / (n * n)]
    }

    pub fn momentum(&self, idx: usize) -> [f64; 3] {
        let [a, b, c] = self.unravel(idx);
        [self.axis_p[a], self.axis_p[b], self.axis_p[c]]
    }

    pub fn position(&self, idx: usize) -> [f64; 3] {
        let [a, b, c] = self.unravel(idx);
        [self.axis_x[a], self.axis_x[b], self.axis_x[c]]
    }

    /// Component `axis` of the momentum at every lattice point.
    pub fn momentum_component(&self, axis: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.axis_p[self.unravel(i)[axis]]).collect()
    }

    pub fn position_component(&self, axis: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.axis_x[self.unravel(i)[axis]]).collect()
    }

    /// Lattice index of `-p`. The map `k → (n-k) mod n` is an involution; the
    /// face at `-p_max` is its own image.
    #[inline]
    pub fn negate_index(&self, idx: usize) -> usize {
        let n = self.spec.n;
        let [a, b, c] = self.unravel(idx);
        self.index([(n - a) % n, (n - b) % n, (n - c) % n])
    }

    /// Integer squared radius `Σ (kᵢ - n/2)²`; equal keys share a p₀ shell.
    pub fn shell_key(&self, idx: usize) -> u64 {
        let h = (self.spec.n / 2) as i64;
        self.unravel(idx)
            .iter()
            .map(|&k| {
                let c = k as i64 - h;
                (c * c) as u64
            })
            .sum()
    }

    /// Whether the point lies in the two outermost layers of the cube.
    pub fn in_boundary_layer(&self, idx: usize) -> bool {
        let n = self.spec.n;
        self.unravel(idx).iter().any(|&k| k < 2 || k >= n - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_weight_is_cell_over_mu() {
        let g = build_grid(16, 8.0, 1.0).unwrap();
        assert_eq!(g.delta(), 1.0);
        let origin = g.index([8, 8, 8]);
        assert_eq!(g.momentum(origin), [0.0, 0.0, 0.0]);
        assert_eq!(g.weights()[origin], 1.0);
    }

    #[test]
    fn weight_on_p_squared_three_shell() {
        let g = build_grid(16, 8.0, 1.0).unwrap();
        let idx = g.index([9, 9, 9]);
        assert_eq!(g.momentum(idx), [1.0, 1.0, 1.0]);
        assert_eq!(g.p0()[idx], 2.0);
        assert_eq!(g.weights()[idx], 0.5);
    }

    #[test]
    fn minimum_energy_is_mu_at_origin_only() {
        let g = build_grid(8, 4.0, 2.0).unwrap();
        let min = g.p0().iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(min, 2.0);
        let at_min: Vec<usize> = (0..g.len()).filter(|&i| g.p0()[i] == 2.0).collect();
        assert_eq!(at_min, vec![g.index([4, 4, 4])]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(build_grid(15, 8.0, 1.0), Err(Error::BadAxisCount(15))));
        assert!(matches!(build_grid(6, 8.0, 1.0), Err(Error::BadAxisCount(6))));
        assert!(matches!(build_grid(16, 8.0, 0.0), Err(Error::NonPositiveMass(_))));
        assert!(matches!(build_grid(16, 8.0, -1.0), Err(Error::NonPositiveMass(_))));
        assert!(matches!(build_grid(16, 0.0, 1.0), Err(Error::NonPositiveCutoff(_))));
    }

    #[test]
    fn weights_positive_and_bounded() {
        let g = build_grid(12, 3.0, 0.7).unwrap();
        let bound = g.delta().powi(3) / g.mu();
        for &w in g.weights() {
            assert!(w > 0.0 && w <= bound);
        }
    }

    #[test]
    fn negation_is_an_involution_preserving_energy() {
        let g = build_grid(10, 2.5, 1.0).unwrap();
        for i in 0..g.len() {
            let j = g.negate_index(i);
            assert_eq!(g.negate_index(j), i);
            assert_eq!(g.p0()[i], g.p0()[j]);
            let (p, q) = (g.momentum(i), g.momentum(j));
            for a in 0..3 {
                if g.unravel(i)[a] != 0 {
                    assert_eq!(p[a], -q[a]);
                }
            }
        }
    }
}
