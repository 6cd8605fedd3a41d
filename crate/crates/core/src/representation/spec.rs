use std::fmt;

use serde::{Deserialize, Serialize};

/// Spectrum of `P₀`: `[μ,∞)`, `(-∞,-μ]` or their union.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spectrum {
    Up,
    Down,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Character {
    Unitary,
    Antiunitary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignVariant {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// Serialized as `{spectrum, theta, pi, sign_variant}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepSpec {
    pub spectrum: Spectrum,
    pub theta: Character,
    pub pi: Character,
    pub sign_variant: SignVariant,
}

/// Why a [`RepSpec`] does not name an irreducible representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Forbidden {
    /// A unitary time reversal forces the symmetric spectrum.
    UnitaryTimeReversal,
    /// An anti-unitary space inversion forces the symmetric spectrum.
    AntiunitarySpaceInversion,
    /// Anti-unitary time reversal with unitary space inversion forces a
    /// one-sided (up or down) spectrum.
    OneSidedSpectrumRequired,
    /// Single-sector classes are unique; only the canonical `+` label names them.
    RedundantSignVariant,
}

impl Forbidden {
    pub fn rule(self) -> &'static str {
        match self {
            Forbidden::UnitaryTimeReversal => "unitary time reversal requires a symmetric P0 spectrum",
            Forbidden::AntiunitarySpaceInversion => "anti-unitary space inversion requires a symmetric P0 spectrum",
            Forbidden::OneSidedSpectrumRequired => {
                "anti-unitary time reversal with unitary space inversion requires a one-sided P0 spectrum"
            }
            Forbidden::RedundantSignVariant => {
                "single-sector classes carry no sign variant; the canonical label is +"
            }
        }
    }

    /// Whether the rejection comes from the spectrum/character classification
    /// rather than from the labelling convention.
    pub fn is_spectral_rule(self) -> bool {
        !matches!(self, Forbidden::RedundantSignVariant)
    }
}

impl fmt::Display for Forbidden {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.rule())
    }
}

/// Spin-0 classes: two single-sector, six on the symmetric spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RepClass {
    Up,
    Down,
    U1,
    U2,
    U3,
    U4,
    U5,
    U6,
}

impl RepClass {
    pub const ALL: [RepClass; 8] = [
        RepClass::Up,
        RepClass::Down,
        RepClass::U1,
        RepClass::U2,
        RepClass::U3,
        RepClass::U4,
        RepClass::U5,
        RepClass::U6,
    ];

    pub fn spec(self) -> RepSpec {
        use Character::*;
        use SignVariant::*;
        let (spectrum, theta, pi, sign_variant) = match self {
            RepClass::Up => (Spectrum::Up, Antiunitary, Unitary, Plus),
            RepClass::Down => (Spectrum::Down, Antiunitary, Unitary, Plus),
            RepClass::U1 => (Spectrum::Symmetric, Unitary, Unitary, Plus),
            RepClass::U2 => (Spectrum::Symmetric, Unitary, Unitary, Minus),
            RepClass::U3 => (Spectrum::Symmetric, Unitary, Antiunitary, Plus),
            RepClass::U4 => (Spectrum::Symmetric, Unitary, Antiunitary, Minus),
            RepClass::U5 => (Spectrum::Symmetric, Antiunitary, Antiunitary, Plus),
            RepClass::U6 => (Spectrum::Symmetric, Antiunitary, Antiunitary, Minus),
        };
        RepSpec { spectrum, theta, pi, sign_variant }
    }

    pub fn name(self) -> &'static str {
        match self {
            RepClass::Up => "up",
            RepClass::Down => "down",
            RepClass::U1 => "U1",
            RepClass::U2 => "U2",
            RepClass::U3 => "U3",
            RepClass::U4 => "U4",
            RepClass::U5 => "U5",
            RepClass::U6 => "U6",
        }
    }

    /// Label of the position-determination case the class falls under.
    pub fn case_label(self) -> &'static str {
        match self {
            RepClass::Up | RepClass::Down => "single-sector",
            RepClass::U1 => "UU+",
            RepClass::U2 => "UU-",
            RepClass::U3 => "UA.ii",
            RepClass::U4 => "UA.i",
            RepClass::U5 => "AA.ii",
            RepClass::U6 => "AA.i",
        }
    }

    pub fn is_single_sector(self) -> bool {
        matches!(self, RepClass::Up | RepClass::Down)
    }

    pub fn from_name(name: &str) -> Option<RepClass> {
        RepClass::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(name) || c.case_label() == name)
    }
}

impl fmt::Display for RepClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl RepSpec {
    /// The class these labels name, or the rule they break.
    pub fn classify(&self) -> Result<RepClass, Forbidden> {
        use Character::*;
        match (self.spectrum, self.theta, self.pi) {
            (Spectrum::Up | Spectrum::Down, Unitary, _) => Err(Forbidden::UnitaryTimeReversal),
            (Spectrum::Up | Spectrum::Down, Antiunitary, Antiunitary) => Err(Forbidden::AntiunitarySpaceInversion),
            (Spectrum::Symmetric, Antiunitary, Unitary) => Err(Forbidden::OneSidedSpectrumRequired),
            (Spectrum::Up | Spectrum::Down, Antiunitary, Unitary) => {
                if self.sign_variant == SignVariant::Minus {
                    return Err(Forbidden::RedundantSignVariant);
                }
                Ok(if self.spectrum == Spectrum::Up { RepClass::Up } else { RepClass::Down })
            }
            (Spectrum::Symmetric, Unitary, Unitary) => {
                Ok(if self.sign_variant == SignVariant::Plus { RepClass::U1 } else { RepClass::U2 })
            }
            (Spectrum::Symmetric, Unitary, Antiunitary) => {
                Ok(if self.sign_variant == SignVariant::Plus { RepClass::U3 } else { RepClass::U4 })
            }
            (Spectrum::Symmetric, Antiunitary, Antiunitary) => {
                Ok(if self.sign_variant == SignVariant::Plus { RepClass::U5 } else { RepClass::U6 })
            }
        }
    }

    /// All 3·2·2·2 = 24 label combinations.
    pub fn enumerate_all() -> Vec<RepSpec> {
        let mut out = Vec::with_capacity(24);
        for spectrum in [Spectrum::Up, Spectrum::Down, Spectrum::Symmetric] {
            for theta in [Character::Unitary, Character::Antiunitary] {
                for pi in [Character::Unitary, Character::Antiunitary] {
                    for sign_variant in [SignVariant::Plus, SignVariant::Minus] {
                        out.push(RepSpec { spectrum, theta, pi, sign_variant });
                    }
                }
            }
        }
        out
    }
}
