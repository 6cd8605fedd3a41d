use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kinematics::{gaussian_packet, MomentumGrid, PacketSpec, Placement, StateVector};

/// Which sectors a probe populates in a two-sector representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Occupancy {
    Plus,
    Minus,
    Both,
}

/// One probe: a packet shape plus its sector occupancy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub id: String,
    pub center_p: [f64; 3],
    pub width: f64,
    pub phase_x0: Option<[f64; 3]>,
    pub occupancy: Occupancy,
}

/// Ranges the random probes are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRanges {
    pub width: [f64; 2],
    pub max_center: f64,
    pub max_offset: f64,
}

impl Default for ProbeRanges {
    fn default() -> Self {
        ProbeRanges { width: [0.95, 1.05], max_center: 0.25, max_offset: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSet {
    pub seed: u64,
    pub probes: Vec<Probe>,
}

impl ProbeSet {
    /// `count` probes: the first two are centred (narrowest and widest), the
    /// rest are drawn from `ranges`, every other one with a position offset.
    pub fn generate(seed: u64, count: usize, ranges: ProbeRanges) -> ProbeSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let occupancy = [Occupancy::Plus, Occupancy::Minus, Occupancy::Both];
        let probes = (0..count)
            .map(|i| {
                let (center_p, width, phase_x0) = match i {
                    0 => ([0.0; 3], ranges.width[0], None),
                    1 => ([0.0; 3], ranges.width[1], None),
                    _ => {
                        let c = std::array::from_fn(|_| rng.gen_range(-ranges.max_center..=ranges.max_center));
                        let w = rng.gen_range(ranges.width[0]..=ranges.width[1]);
                        let x0: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-ranges.max_offset..=ranges.max_offset));
                        (c, w, (i % 2 == 0).then_some(x0))
                    }
                };
                Probe { id: format!("probe-{i:02}"), center_p, width, phase_x0, occupancy: occupancy[i % 3] }
            })
            .collect();
        ProbeSet { seed, probes }
    }

    pub fn standard(seed: u64) -> ProbeSet {
        ProbeSet::generate(seed, 12, ProbeRanges::default())
    }

    /// Builds every probe for a representation with `sectors` fields.
    pub fn states(&self, grid: &MomentumGrid, sectors: usize) -> Result<Vec<StateVector>> {
        self.probes.iter().map(|p| p.state(grid, sectors)).collect()
    }
}

impl Probe {
    pub fn state(&self, grid: &MomentumGrid, sectors: usize) -> Result<StateVector> {
        let spec = |placement| PacketSpec { center_p: self.center_p, width: self.width, sector: placement, phase_x0: self.phase_x0 };
        if sectors == 1 {
            return gaussian_packet(grid, &spec(Placement::Single));
        }
        match self.occupancy {
            Occupancy::Plus => gaussian_packet(grid, &spec(Placement::Plus)),
            Occupancy::Minus => gaussian_packet(grid, &spec(Placement::Minus)),
            Occupancy::Both => {
                // the lower sector carries a mirrored, differently phased copy
                let plus = gaussian_packet(grid, &spec(Placement::Plus))?;
                let mirrored = PacketSpec {
                    center_p: self.center_p.map(|c| -0.5 * c),
                    phase_x0: self.phase_x0.map(|x| x.map(|v| -v)),
                    ..spec(Placement::Minus)
                };
                let minus = gaussian_packet(grid, &mirrored)?;
                Ok(plus.add(&minus)?.normalized(grid))
            }
        }
    }
}
