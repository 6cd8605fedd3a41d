use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::representation::{AntiLinearAction, Gauss, RepClass, Representation, SectorMatrix};

/// Which symmetry condition a row comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `Θ D = D Θ`
    ThetaCommutes,
    /// `Π D = -D Π`
    PiAnticommutes,
}

impl Condition {
    /// `+1` for commutation, `-1` for anticommutation.
    pub fn sign(self) -> i64 {
        match self {
            Condition::ThetaCommutes => 1,
            Condition::PiAnticommutes => -1,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::ThetaCommutes => "theta-commutes",
            Condition::PiAnticommutes => "pi-anticommutes",
        })
    }
}

/// One real linear equation `Σ coefficients[k] · x_k = 0` over the ansatz
/// coordinates: `f` for one sector, `(d₁₁, d₂₂, Re d₁₂, Im d₁₂)` for two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintRow {
    pub condition: Condition,
    pub coefficients: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub shell_p0: f64,
    pub dim: usize,
    pub rows: Vec<ConstraintRow>,
}

impl ConstraintSystem {
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows.len(), self.dim, |r, c| self.rows[r].coefficients[c] as f64)
    }

    /// Rank by singular values above `1e-10 · σ_max`.
    pub fn rank(&self) -> usize {
        if self.rows.is_empty() {
            return 0;
        }
        let sv = self.matrix().singular_values();
        let top = sv.max();
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|s| **s > 1e-10 * top).count()
    }

    pub fn nullspace_dim(&self) -> usize {
        self.dim - self.rank()
    }

    /// Orthonormal basis of the solution space.
    pub fn nullspace(&self) -> Vec<Vec<f64>> {
        let mut padded = self.matrix();
        if padded.nrows() < self.dim {
            padded = padded.resize_vertically(self.dim, 0.0);
        }
        let svd = padded.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let top = svd.singular_values.max();
        (0..self.dim)
            .filter(|&k| top == 0.0 || svd.singular_values[k] <= 1e-10 * top)
            .map(|k| v_t.row(k).iter().copied().collect())
            .collect()
    }

    /// The row set without its shell, for deduplication.
    pub fn rows_key(&self) -> Vec<(Condition, Vec<i64>)> {
        self.rows.iter().map(|r| (r.condition, r.coefficients.clone())).collect()
    }
}

/// Hermitian matrix with the given real coordinates.
fn hermitian(dim: usize, x: &[i64]) -> [[Gauss; 2]; 2] {
    let z = Complex::new(0, 0);
    if dim == 1 {
        return [[Complex::new(x[0], 0), z], [z, z]];
    }
    [[Complex::new(x[0], 0), Complex::new(x[2], x[3])], [Complex::new(x[2], -x[3]), Complex::new(x[1], 0)]]
}

/// `(-1)^flip · M c(d) M† - σ d` on the coordinates of a Hermitian `d`.
fn condition_image(action: &AntiLinearAction, sigma: i64, dim: usize, x: &[i64]) -> Vec<i64> {
    let d = SectorMatrix { dim, entries: hermitian(dim, x) };
    let cd = if action.conjugate { d.conj() } else { d };
    let m = action.matrix;
    let moved = m.mul(&cd).mul(&m.adjoint());
    let flip = if action.parity_flip { -1 } else { 1 };
    let r = |a: usize, b: usize| moved.get(a, b) * flip - d.get(a, b) * sigma;
    if dim == 1 {
        vec![r(0, 0).re]
    } else {
        vec![r(0, 0).re, r(1, 1).re, r(0, 1).re, r(0, 1).im]
    }
}

fn rows_for(action: &AntiLinearAction, condition: Condition, dim: usize) -> Vec<ConstraintRow> {
    // columns are the images of the coordinate basis vectors
    let cols: Vec<Vec<i64>> = (0..dim)
        .map(|k| {
            let mut e = vec![0; dim];
            e[k] = 1;
            condition_image(action, condition.sign(), dim, &e)
        })
        .collect();
    (0..dim)
        .map(|r| ConstraintRow { condition, coefficients: (0..dim).map(|c| cols[c][r]).collect() })
        .collect()
}

/// Constraints on `D_j = d(p₀) p_j` at one energy shell from `ΘQ = QΘ` and
/// `ΠQ = -QΠ`, given that `F` satisfies both.
///
/// `Υ` sends `p_j ↦ -p_j`, `𝒦` conjugates `d`, and the sector matrix
/// conjugates it; `p₀` is untouched by all three, so the rows do not depend on
/// the shell.
pub fn build_constraint_system(rep: &Representation, shell_p0: f64) -> ConstraintSystem {
    let dim = if rep.sector_count() == 1 { 1 } else { 4 };
    let mut rows = rows_for(rep.theta(), Condition::ThetaCommutes, dim);
    rows.extend(rows_for(rep.pi(), Condition::PiAnticommutes, dim));
    ConstraintSystem { shell_p0, dim, rows }
}

/// Whether `F` itself satisfies a condition: `Υ` flips its sign and `𝒦` flips
/// the `i` in front of the derivative, so `S F S⁻¹ = (-1)^(flip+conj) F`.
pub fn reference_satisfies(action: &AntiLinearAction, condition: Condition) -> bool {
    let flips = action.parity_flip as i64 + action.conjugate as i64;
    let sign = if flips % 2 == 0 { 1 } else { -1 };
    sign == condition.sign()
}

/// Exact rank of an integer matrix by fraction-free elimination over `ℚ`.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Ratio<i64>>> = rows.iter().map(|r| r.iter().map(|&v| Ratio::from_integer(v)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c] != Ratio::from_integer(0)) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && m[r][c] != Ratio::from_integer(0) {
                let factor = m[r][c] / m[rank][c];
                for k in c..cols {
                    let v = m[rank][k] * factor;
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Distinct energy shells of the lattice, keyed by `Σ(k - n/2)²`.
pub fn lattice_shells(rep: &Representation) -> Vec<f64> {
    let grid = rep.grid();
    let mut keys = BTreeMap::new();
    for i in 0..grid.len() {
        keys.entry(grid.shell_key(i)).or_insert(grid.p0()[i]);
    }
    keys.into_values().collect()
}

/// `(class, expected nullspace dimension)` as established for each case.
pub fn expected_nullspace_dim(class: RepClass) -> usize {
    match class {
        RepClass::Up | RepClass::Down | RepClass::U3 | RepClass::U5 => 0,
        RepClass::U1 => 2,
        RepClass::U2 | RepClass::U4 | RepClass::U6 => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::build_grid;

    fn rep(class: RepClass) -> Representation {
        Representation::of_class(class, &build_grid(8, 4.0, 1.0).unwrap())
    }

    #[test]
    fn scalar_rows() {
        let s = build_constraint_system(&rep(RepClass::Up), 1.0);
        assert_eq!(s.rows[0].coefficients, vec![-2]);
        assert_eq!(s.rows[1].coefficients, vec![0]);
        assert_eq!(s.nullspace_dim(), 0);
    }

    #[test]
    fn ua_ii_rows_pin_everything() {
        // Π = σx𝒦: d₂₂ = -d₁₁ and d₁₂ = 0; Θ = σx: d₁₁ = d₂₂
        let s = build_constraint_system(&rep(RepClass::U3), 2.0);
        let theta: Vec<_> = s.rows.iter().filter(|r| r.condition == Condition::ThetaCommutes).collect();
        assert_eq!(theta[0].coefficients, vec![-1, 1, 0, 0]);
        assert_eq!(s.nullspace_dim(), 0);
    }

    #[test]
    fn uu_plus_leaves_two_free_coordinates() {
        let s = build_constraint_system(&rep(RepClass::U1), 1.5);
        let basis = s.nullspace();
        assert_eq!(basis.len(), 2);
        // every solution has d₁₁ = d₂₂ and Im d₁₂ = 0
        for v in basis {
            assert!((v[0] - v[1]).abs() < 1e-12 && v[3].abs() < 1e-12);
        }
    }

    #[test]
    fn svd_rank_matches_exact_rank() {
        for class in RepClass::ALL {
            let s = build_constraint_system(&rep(class), 3.0);
            let rows: Vec<Vec<i64>> = s.rows.iter().map(|r| r.coefficients.clone()).collect();
            assert_eq!(s.rank(), exact_rank(&rows), "{class}");
            assert_eq!(s.nullspace_dim(), expected_nullspace_dim(class), "{class}");
        }
    }

    #[test]
    fn newton_wigner_satisfies_every_condition() {
        for class in RepClass::ALL {
            let r = rep(class);
            assert!(reference_satisfies(r.theta(), Condition::ThetaCommutes), "{class}");
            assert!(reference_satisfies(r.pi(), Condition::PiAnticommutes), "{class}");
        }
    }

    #[test]
    fn exact_rank_small_cases() {
        assert_eq!(exact_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(exact_rank(&[vec![0, 0]]), 0);
        assert_eq!(exact_rank(&[vec![3, 1], vec![1, 3]]), 2);
    }
}
