//! Discretized momentum-space Hilbert space with the invariant measure,
//! states, packets and the transform to the position representation.

mod fft;
mod grid;
pub mod io;
mod packet;
mod state;
mod transform;

pub use grid::{build_grid, GridSpec, MomentumGrid};
pub use packet::{
    gaussian_packet, momentum_expectation, packet_profile, position_expectation, PacketSpec, Placement, TAIL_LIMIT,
};
pub use state::{inner_product, relative_distance, tail_mass, Field, RepKind, StateVector};
pub use transform::{
    fourier_to_momentum, fourier_to_position, position_derivative, position_laplacian, to_momentum, to_position,
    z_field_to_momentum, z_field_to_position, z_transform, Direction,
};
