use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{GridSpec, MomentumGrid};
use crate::error::{Error, Result};

pub type Field = Vec<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Momentum,
    Position,
}

/// One field (single-sector representations) or the ordered pair `(ψ⁺, ψ⁻)`
/// over the lattice, tagged with the representation it is expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    grid: GridSpec,
    kind: RepKind,
    sectors: Vec<Field>,
}

impl StateVector {
    pub fn new(grid: &MomentumGrid, kind: RepKind, sectors: Vec<Field>) -> Result<Self> {
        if sectors.is_empty() || sectors.len() > 2 {
            return Err(Error::SectorMismatch { expected: 2, got: sectors.len() });
        }
        for f in &sectors {
            if f.len() != grid.len() {
                return Err(Error::FieldLength { expected: grid.len(), got: f.len() });
            }
        }
        Ok(StateVector { grid: grid.spec(), kind, sectors })
    }

    pub fn single(grid: &MomentumGrid, kind: RepKind, field: Field) -> Result<Self> {
        Self::new(grid, kind, vec![field])
    }

    pub fn pair(grid: &MomentumGrid, kind: RepKind, plus: Field, minus: Field) -> Result<Self> {
        Self::new(grid, kind, vec![plus, minus])
    }

    pub fn zeros(grid: &MomentumGrid, kind: RepKind, sectors: usize) -> Self {
        StateVector {
            grid: grid.spec(),
            kind,
            sectors: vec![vec![Complex64::new(0.0, 0.0); grid.len()]; sectors],
        }
    }

    pub(crate) fn from_parts(grid: GridSpec, kind: RepKind, sectors: Vec<Field>) -> Self {
        StateVector { grid, kind, sectors }
    }

    pub fn grid_spec(&self) -> GridSpec {
        self.grid
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn sectors(&self) -> &[Field] {
        &self.sectors
    }

    pub fn sectors_mut(&mut self) -> &mut [Field] {
        &mut self.sectors
    }

    pub fn into_sectors(self) -> Vec<Field> {
        self.sectors
    }

    pub fn sector_count(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_pair(&self) -> bool {
        self.sectors.len() == 2
    }

    pub fn expect_kind(&self, kind: RepKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::RepKindMismatch { expected: kind, got: self.kind });
        }
        Ok(())
    }

    pub fn expect_grid(&self, grid: &MomentumGrid) -> Result<()> {
        if self.grid != grid.spec() {
            return Err(Error::GridMismatch(self.grid, grid.spec()));
        }
        Ok(())
    }

    fn expect_compatible(&self, other: &StateVector) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(self.grid, other.grid));
        }
        if self.kind != other.kind {
            return Err(Error::RepKindMismatch { expected: self.kind, got: other.kind });
        }
        if self.sectors.len() != other.sectors.len() {
            return Err(Error::SectorMismatch { expected: self.sectors.len(), got: other.sectors.len() });
        }
        Ok(())
    }

    /// Same layout with every sector replaced by `f(sector_index, field)`.
    pub fn map_sectors<F>(&self, mut f: F) -> StateVector
    where
        F: FnMut(usize, &[Complex64]) -> Field,
    {
        StateVector {
            grid: self.grid,
            kind: self.kind,
            sectors: self.sectors.iter().enumerate().map(|(s, v)| f(s, v)).collect(),
        }
    }

    pub fn scale(&self, alpha: Complex64) -> StateVector {
        self.map_sectors(|_, v| v.iter().map(|z| alpha * z).collect())
    }

    /// `self + alpha·other`.
    pub fn axpy(&self, alpha: Complex64, other: &StateVector) -> Result<StateVector> {
        self.expect_compatible(other)?;
        Ok(self.map_sectors(|s, v| v.iter().zip(&other.sectors[s]).map(|(a, b)| a + alpha * b).collect()))
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Pointwise product with a real lattice function, the same in every sector.
    pub fn multiply(&self, f: &[f64]) -> StateVector {
        self.map_sectors(|_, v| v.iter().zip(f).map(|(z, w)| z * w).collect())
    }

    /// Pointwise product with a per-sector real lattice function `sign_s · f`.
    pub fn multiply_signed(&self, f: &[f64], signs: &[f64]) -> StateVector {
        self.map_sectors(|s, v| v.iter().zip(f).map(|(z, w)| z * (w * signs[s])).collect())
    }

    pub fn norm_sqr(&self, grid: &MomentumGrid) -> f64 {
        match self.kind {
            RepKind::Momentum => {
                let w = grid.weights();
                self.sectors.iter().map(|v| v.iter().zip(w).map(|(z, w)| w * z.norm_sqr()).sum::<f64>()).sum()
            }
            RepKind::Position => {
                let dv = grid.dx3();
                self.sectors.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum::<f64>() * dv
            }
        }
    }

    pub fn norm(&self, grid: &MomentumGrid) -> f64 {
        self.norm_sqr(grid).sqrt()
    }

    /// `self / ‖self‖`.
    pub fn normalized(&self, grid: &MomentumGrid) -> StateVector {
        let n = self.norm(grid);
        self.scale(Complex64::new(1.0 / n, 0.0))
    }
}

/// `⟨a, b⟩`, conjugate-linear in `a`; sector-wise sum for two-sector states.
pub fn inner_product(a: &StateVector, b: &StateVector, grid: &MomentumGrid) -> Result<Complex64> {
    a.expect_grid(grid)?;
    a.expect_compatible(b)?;
    let mut acc = Complex64::new(0.0, 0.0);
    match a.kind {
        RepKind::Momentum => {
            let w = grid.weights();
            for (fa, fb) in a.sectors.iter().zip(&b.sectors) {
                for ((x, y), w) in fa.iter().zip(fb).zip(w) {
                    acc += x.conj() * y * w;
                }
            }
        }
        RepKind::Position => {
            for (fa, fb) in a.sectors.iter().zip(&b.sectors) {
                for (x, y) in fa.iter().zip(fb) {
                    acc += x.conj() * y;
                }
            }
            acc *= grid.dx3();
        }
    }
    Ok(acc)
}

/// Relative norm `‖a - b‖ / ‖reference‖`.
pub fn relative_distance(a: &StateVector, b: &StateVector, reference: &StateVector, grid: &MomentumGrid) -> Result<f64> {
    Ok(a.sub(b)?.norm(grid) / reference.norm(grid))
}

/// Fraction of the squared norm carried by the two outermost lattice layers.
pub fn tail_mass(state: &StateVector, grid: &MomentumGrid) -> f64 {
    let total = state.norm_sqr(grid);
    if total == 0.0 {
        return 0.0;
    }
    let w = grid.weights();
    let dv = grid.dx3();
    let mut tail = 0.0;
    for v in &state.sectors {
        for (i, z) in v.iter().enumerate() {
            if grid.in_boundary_layer(i) {
                tail += z.norm_sqr()
                    * match state.kind {
                        RepKind::Momentum => w[i],
                        RepKind::Position => dv,
                    };
            }
        }
    }
    tail / total
}
