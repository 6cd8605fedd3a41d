//! Brute-force nullspace dimensions: a rotation-covariant correction to the
//! position operator has the form `p_j·d(p₀)`. Apply the symmetries to
//! `p₁·d·ψ` for every basis matrix `d` on random lattice states and take the
//! numerical rank.

use nalgebra::DMatrix;
use num_complex::Complex64;
use poincare_core::kinematics::{build_grid, MomentumGrid, RepKind, StateVector};
use poincare_core::localization::{determine_position, expected_nullspace_dim};
use poincare_core::representation::{apply_pi, apply_theta, RepClass, Representation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random amplitudes on the points whose negation is again a lattice point.
fn random_state(grid: &MomentumGrid, sectors: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let paired = |i: usize| grid.unravel(i).iter().all(|&k| k != 0);
    let fields = (0..sectors)
        .map(|_| {
            (0..grid.len())
                .map(|i| {
                    let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    if paired(i) {
                        z
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    StateVector::new(grid, RepKind::Momentum, fields).unwrap()
}

/// Hermitian basis `(d11, d22, Re d12, Im d12)`, or the scalar `1`.
fn basis(dim: usize) -> Vec<[[Complex64; 2]; 2]> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    if dim == 1 {
        return vec![[[one, z], [z, z]]];
    }
    vec![[[one, z], [z, z]], [[z, z], [z, one]], [[z, one], [one, z]], [[z, i], [-i, z]]]
}

fn apply_matrix(grid: &MomentumGrid, m: &[[Complex64; 2]; 2], s: &StateVector) -> StateVector {
    let src = s.sectors();
    let p1 = grid.momentum_component(0);
    s.map_sectors(|r, _| {
        (0..src[0].len()).map(|k| (0..src.len()).map(|c| m[r][c] * src[c][k]).sum::<Complex64>() * p1[k]).collect()
    })
}

fn flatten(s: &StateVector) -> Vec<f64> {
    s.sectors().iter().flat_map(|v| v.iter().flat_map(|z| [z.re, z.im])).collect()
}

fn oracle_nullspace(rep: &Representation, rng: &mut ChaCha8Rng) -> usize {
    let grid = rep.grid();
    let states: Vec<_> = (0..2).map(|_| random_state(grid, rep.sector_count(), rng)).collect();
    let columns: Vec<Vec<f64>> = basis(rep.sector_count())
        .iter()
        .map(|d| {
            let mut col = Vec::new();
            for psi in &states {
                let theta = apply_theta(rep, &apply_matrix(grid, d, psi)).unwrap().sub(&apply_matrix(grid, d, &apply_theta(rep, psi).unwrap())).unwrap();
                let pi = apply_pi(rep, &apply_matrix(grid, d, psi)).unwrap().add(&apply_matrix(grid, d, &apply_pi(rep, psi).unwrap())).unwrap();
                col.extend(flatten(&theta));
                col.extend(flatten(&pi));
            }
            col
        })
        .collect();
    let m = DMatrix::from_fn(columns[0].len(), columns.len(), |r, c| columns[c][r]);
    let sv = m.singular_values();
    let top = sv.max();
    let rank = sv.iter().filter(|s| **s > 1e-10 * top.max(1.0)).count();
    columns.len() - rank
}

#[test]
fn brute_force_matches_constraint_solver() {
    let grid = build_grid(8, 4.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for class in RepClass::ALL {
        let rep = Representation::of_class(class, &grid);
        let oracle = oracle_nullspace(&rep, &mut rng);
        assert_eq!(oracle, expected_nullspace_dim(class), "{class}");
        assert_eq!(oracle, determine_position(&rep).max_nullspace_dim(), "{class}");
    }
}

#[test]
fn undetermined_dims_are_two_one_one_one() {
    let grid = build_grid(8, 4.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dims: Vec<usize> = [RepClass::U1, RepClass::U2, RepClass::U4, RepClass::U6]
        .into_iter()
        .map(|c| oracle_nullspace(&Representation::of_class(c, &grid), &mut rng))
        .collect();
    assert_eq!(dims, [2, 1, 1, 1]);
}
