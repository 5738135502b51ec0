//! Covariant guidance law `dX_a^mu / ds = v_a^mu = -d_a^mu S` on
//! configuration spacetime, its integration in the scalar parameter `s`, and
//! numerical checks of the conservation law, equivariance, covariance and
//! (non)locality of the resulting flow.

mod checks;
mod equivariance;
mod trajectory;
mod velocity;

pub use checks::{continuity_residual, covariance_check, nonlocality_probe};
pub use equivariance::{
    comparison_region, equivariance_check, EquivarianceOptions, EquivarianceReport,
};
pub use trajectory::{
    flow_map, integrate_trajectory, IntegrationOptions, Trajectory, TrajectoryStatus,
};
pub use velocity::{
    phase_gradient, phase_gradient_with, velocity_field, velocity_field_with, VelocitySample,
};

use crate::wavepacket::WavePacket;

/// Relative node threshold: velocities are refused where
/// `|psi| <= NODE_FRACTION * sum_k |c_k|`.
pub const NODE_FRACTION: f64 = 1e-9;

/// Default step in `s`.
pub const DEFAULT_STEP: f64 = 1e-3;

pub fn default_node_threshold(packet: &WavePacket) -> f64 {
    NODE_FRACTION * packet.amplitude_sum()
}
