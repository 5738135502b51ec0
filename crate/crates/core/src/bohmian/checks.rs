use crate::bohmian::{integrate_trajectory, velocity_field_with, IntegrationOptions};
use crate::spacetime::{boost, Axis, FourVector};
use crate::wavepacket::{Configuration, WavePacket};
use crate::{Error, Result};

use super::default_node_threshold;

/// `|sum_a sum_mu d_{a mu}(|psi|^2 v_a^mu)|` by second-order central
/// differences of width `fd_step`, divided by `|psi(q)|^2 * E_max^2` with
/// `E_max` the largest mode energy, which makes it dimensionless.
pub fn continuity_residual(packet: &WavePacket, q: &Configuration, fd_step: f64) -> Result<f64> {
    if !(fd_step > 0.0) {
        return Err(Error::invalid("fd_step", "must be positive"));
    }
    let threshold = default_node_threshold(packet);
    let current = |q: &Configuration, a: usize, mu: usize| -> Result<f64> {
        let sample = velocity_field_with(packet, q, threshold)?;
        Ok(sample.psi_modulus * sample.psi_modulus * sample.velocities[a][mu])
    };
    let rho = packet.evaluate(q)?.norm_sqr();
    let mut divergence = 0.0;
    for a in 0..packet.n_particles() {
        for mu in 0..4 {
            let x = q.coordinate(a, mu);
            let plus = current(&q.with_coordinate(a, mu, x + fd_step), a, mu)?;
            let minus = current(&q.with_coordinate(a, mu, x - fd_step), a, mu)?;
            divergence += (plus - minus) / (2.0 * fd_step);
        }
    }
    let omega = packet.max_energy();
    Ok(libm::fabs(divergence) / (rho * omega * omega))
}

/// Change in the velocity of `observed` when `moved` is displaced by
/// `displacement`, as the Euclidean norm of the four-vector difference.
pub fn nonlocality_probe(
    packet: &WavePacket,
    q: &Configuration,
    moved: usize,
    displacement: FourVector,
    observed: usize,
) -> Result<f64> {
    let n = packet.n_particles();
    for &index in &[moved, observed] {
        if index >= n {
            return Err(Error::Dimension {
                expected: n,
                found: index + 1,
            });
        }
    }
    let threshold = default_node_threshold(packet);
    let before = velocity_field_with(packet, q, threshold)?.velocities[observed];
    let mut shifted = q.clone();
    shifted.0[moved] += displacement;
    let after = velocity_field_with(packet, &shifted, threshold)?.velocities[observed];
    Ok((after - before).euclidean_norm())
}

/// Integrates `(packet, initial)` and the boosted pair, then returns
/// `sup_s max_component |boost(X(s)) - X'(s)|`. States are compared at equal
/// `s`, which is frame independent. Trajectories of different length give
/// infinity.
pub fn covariance_check(
    packet: &WavePacket,
    initial: &Configuration,
    rapidity: f64,
    axis: Axis,
    s_span: (f64, f64),
    opts: &IntegrationOptions,
) -> Result<f64> {
    let original = integrate_trajectory(packet, initial, s_span, opts)?;
    let boosted_packet = packet.boosted(rapidity, axis)?;
    let boosted = integrate_trajectory(&boosted_packet, &initial.boosted(rapidity, axis), s_span, opts)?;
    if original.states.len() != boosted.states.len() {
        return Ok(f64::INFINITY);
    }
    Ok(original
        .states
        .iter()
        .zip(&boosted.states)
        .map(|(x, xb)| {
            x.points()
                .iter()
                .zip(xb.points())
                .fold(0.0, |m, (p, pb)| f64::max(m, boost(p, rapidity, axis).max_abs_diff(pb)))
        })
        .fold(0.0, f64::max))
}
