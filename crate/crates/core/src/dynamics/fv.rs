use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::kinematics::Field;

/// Which linear combination defines the two components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FvVariant {
    /// `φ, χ = (ψ ± (i/m)∂_tψ)/√2`, under which `|φ|² - |χ|² = 2ρ̂`.
    #[default]
    Corrected,
    /// `φ, χ = (ψ ± (1/m)∂_tψ)/√2`; `|φ|² - |χ|²` then vanishes on energy
    /// eigenmodes.
    RealCoefficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FvPair {
    pub phi: Field,
    pub chi: Field,
    pub m: f64,
    pub variant: FvVariant,
}

fn coefficient(variant: FvVariant, m: f64) -> Complex64 {
    match variant {
        FvVariant::Corrected => Complex64::new(0.0, 1.0 / m),
        FvVariant::RealCoefficient => Complex64::new(1.0 / m, 0.0),
    }
}

/// The two-component rewriting of a Klein–Gordon snapshot.
pub fn feshbach_villars(psi: &[Complex64], dpsi_dt: &[Complex64], m: f64, variant: FvVariant) -> FvPair {
    let c = coefficient(variant, m);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let phi = psi.iter().zip(dpsi_dt).map(|(p, d)| (p + c * d) * r).collect();
    let chi = psi.iter().zip(dpsi_dt).map(|(p, d)| (p - c * d) * r).collect();
    FvPair { phi, chi, m, variant }
}

impl FvPair {
    /// Recovers `(ψ, ∂_tψ)`.
    pub fn inverse(&self) -> (Field, Field) {
        let c = coefficient(self.variant, self.m);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = self.phi.iter().zip(&self.chi).map(|(a, b)| (a + b) * r).collect();
        let dpsi = self.phi.iter().zip(&self.chi).map(|(a, b)| (a - b) * r / c).collect();
        (psi, dpsi)
    }

    /// `|φ|² - |χ|²` pointwise.
    pub fn difference_density(&self) -> Vec<f64> {
        self.phi.iter().zip(&self.chi).map(|(a, b)| a.norm_sqr() - b.norm_sqr()).collect()
    }

    /// Half the component difference, which equals `ρ̂` for the corrected
    /// combination.
    pub fn charge_density(&self) -> Vec<f64> {
        self.difference_density().into_iter().map(|v| 0.5 * v).collect()
    }
}
