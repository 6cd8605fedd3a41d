use std::fmt;

use num_complex::{Complex, Complex64};

use crate::kinematics::{MomentumGrid, StateVector};

pub type Gauss = Complex<i64>;

const ZERO: Gauss = Complex { re: 0, im: 0 };
const ONE: Gauss = Complex { re: 1, im: 0 };
const NEG: Gauss = Complex { re: -1, im: 0 };

/// Sector matrix with Gaussian-integer entries; `dim` is 1 for single-sector
/// representations (only entry `[0][0]` is used).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorMatrix {
    pub dim: usize,
    pub entries: [[Gauss; 2]; 2],
}

impl SectorMatrix {
    pub const SCALAR_ONE: SectorMatrix = SectorMatrix { dim: 1, entries: [[ONE, ZERO], [ZERO, ZERO]] };
    pub const IDENTITY: SectorMatrix = SectorMatrix { dim: 2, entries: [[ONE, ZERO], [ZERO, ONE]] };
    pub const SWAP: SectorMatrix = SectorMatrix { dim: 2, entries: [[ZERO, ONE], [ONE, ZERO]] };
    pub const DIAG_PLUS_MINUS: SectorMatrix = SectorMatrix { dim: 2, entries: [[ONE, ZERO], [ZERO, NEG]] };
    pub const SKEW_SWAP: SectorMatrix = SectorMatrix { dim: 2, entries: [[ZERO, ONE], [NEG, ZERO]] };

    pub fn get(&self, r: usize, c: usize) -> Gauss {
        self.entries[r][c]
    }

    pub fn mul(&self, other: &SectorMatrix) -> SectorMatrix {
        let mut out = [[ZERO; 2]; 2];
        for r in 0..self.dim {
            for c in 0..self.dim {
                for k in 0..self.dim {
                    out[r][c] += self.entries[r][k] * other.entries[k][c];
                }
            }
        }
        SectorMatrix { dim: self.dim, entries: out }
    }

    pub fn conj(&self) -> SectorMatrix {
        let mut out = self.entries;
        for row in out.iter_mut() {
            for e in row.iter_mut() {
                *e = e.conj();
            }
        }
        SectorMatrix { dim: self.dim, entries: out }
    }

    /// Conjugate transpose, which is the inverse for the unitary matrices used here.
    pub fn adjoint(&self) -> SectorMatrix {
        let mut out = [[ZERO; 2]; 2];
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[c][r] = self.entries[r][c].conj();
            }
        }
        SectorMatrix { dim: self.dim, entries: out }
    }

    pub fn is_unitary(&self) -> bool {
        let id = if self.dim == 1 { SectorMatrix::SCALAR_ONE } else { SectorMatrix::IDENTITY };
        self.mul(&self.adjoint()) == id
    }

    /// `Some(±1)` when the matrix is `±` the identity.
    pub fn scalar_sign(&self) -> Option<i64> {
        let d = self.entries[0][0];
        if d.im != 0 || d.re.abs() != 1 {
            return None;
        }
        for r in 0..self.dim {
            for c in 0..self.dim {
                let want = if r == c { d } else { ZERO };
                if self.entries[r][c] != want {
                    return None;
                }
            }
        }
        Some(d.re)
    }
}

impl fmt::Display for SectorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = |z: Gauss| match (z.re, z.im) {
            (r, 0) => format!("{r}"),
            (0, i) => format!("{i}i"),
            (r, i) => format!("{r}{i:+}i"),
        };
        if self.dim == 1 {
            return write!(f, "{}", e(self.entries[0][0]));
        }
        write!(
            f,
            "[[{},{}],[{},{}]]",
            e(self.entries[0][0]),
            e(self.entries[0][1]),
            e(self.entries[1][0]),
            e(self.entries[1][1])
        )
    }
}

/// `ψ ↦ M · 𝒦^conj · Υ^flip ψ`: optional momentum inversion `Υψ(p) = ψ(-p)`,
/// optional complex conjugation `𝒦`, then a sector matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntiLinearAction {
    pub matrix: SectorMatrix,
    pub parity_flip: bool,
    pub conjugate: bool,
}

impl AntiLinearAction {
    pub fn new(matrix: SectorMatrix, parity_flip: bool, conjugate: bool) -> Self {
        AntiLinearAction { matrix, parity_flip, conjugate }
    }

    pub fn is_antiunitary(&self) -> bool {
        self.conjugate
    }

    /// `S⁻¹ = Υ^flip 𝒦^conj M⁻¹ = c(M†) 𝒦^conj Υ^flip`.
    pub fn inverse(&self) -> AntiLinearAction {
        let adj = self.matrix.adjoint();
        AntiLinearAction {
            matrix: if self.conjugate { adj.conj() } else { adj },
            ..*self
        }
    }

    /// Sector matrix of `S²`; `Υ` and `𝒦` are involutions that commute with each other.
    pub fn square_matrix(&self) -> SectorMatrix {
        let second = if self.conjugate { self.matrix.conj() } else { self.matrix };
        self.matrix.mul(&second)
    }

    /// Exact lattice action: index permutation, conjugation and a sector
    /// matrix with entries in `{0, ±1, ±i}`.
    pub fn apply(&self, grid: &MomentumGrid, state: &StateVector) -> StateVector {
        let dim = state.sector_count();
        assert_eq!(dim, self.matrix.dim, "sector matrix does not match state layout");
        let moved: Vec<Vec<Complex64>> = state
            .sectors()
            .iter()
            .map(|v| {
                (0..v.len())
                    .map(|i| {
                        let src = if self.parity_flip { grid.negate_index(i) } else { i };
                        if self.conjugate {
                            v[src].conj()
                        } else {
                            v[src]
                        }
                    })
                    .collect()
            })
            .collect();
        state.map_sectors(|r, _| {
            let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
            let mut first = true;
            for (c, src) in moved.iter().enumerate() {
                let m = self.matrix.get(r, c);
                if m == ZERO {
                    continue;
                }
                for (o, z) in out.iter_mut().zip(src) {
                    let term = mul_unit(m, *z);
                    *o = if first { term } else { *o + term };
                }
                first = false;
            }
            out
        })
    }
}

/// Exact product with an entry from `{±1, ±i}`, general product otherwise.
fn mul_unit(m: Gauss, z: Complex64) -> Complex64 {
    match (m.re, m.im) {
        (1, 0) => z,
        (-1, 0) => -z,
        (0, 1) => Complex64::new(-z.im, z.re),
        (0, -1) => Complex64::new(z.im, -z.re),
        (r, i) => Complex64::new(r as f64, i as f64) * z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_algebra() {
        assert!(SectorMatrix::SWAP.is_unitary());
        assert!(SectorMatrix::SKEW_SWAP.is_unitary());
        assert_eq!(SectorMatrix::SKEW_SWAP.mul(&SectorMatrix::SKEW_SWAP).scalar_sign(), Some(-1));
        assert_eq!(SectorMatrix::SWAP.mul(&SectorMatrix::SWAP).scalar_sign(), Some(1));
        assert_eq!(SectorMatrix::SWAP.scalar_sign(), None);
        assert_eq!(SectorMatrix::SKEW_SWAP.to_string(), "[[0,1],[-1,0]]");
    }

    #[test]
    fn inverse_of_skew_swap_with_conjugation() {
        let s = AntiLinearAction::new(SectorMatrix::SKEW_SWAP, false, true);
        let inv = s.inverse();
        assert_eq!(inv.matrix, SectorMatrix { dim: 2, entries: [[ZERO, NEG], [ONE, ZERO]] });
        assert_eq!(s.square_matrix().scalar_sign(), Some(-1));
    }
}
