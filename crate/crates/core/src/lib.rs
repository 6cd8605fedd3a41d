//! Spin-0 representations of the full Poincaré group on a momentum lattice:
//! kinematics, symmetry actions, position determination, wave equations and
//! a verification suite.

pub mod dynamics;
pub mod error;
pub mod kinematics;
pub mod localization;
pub mod representation;
pub mod verification;

pub use error::{Error, Result};
