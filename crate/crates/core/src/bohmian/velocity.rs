use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::default_node_threshold;
use crate::spacetime::{raise_index, FourVector};
use crate::wavepacket::{Configuration, WavePacket};
use crate::{Error, Result};

/// Guidance velocities of all particles at one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocitySample {
    pub velocities: Vec<FourVector>,
    pub at: Configuration,
    pub psi_modulus: f64,
}

fn node_error(modulus: f64, q: &[FourVector]) -> Error {
    Error::Node {
        modulus,
        configuration: Configuration::new(q.to_vec()),
    }
}

/// Covariant phase gradient `d_{a mu} S = Im(d_{a mu} psi / psi)` with the
/// default node threshold.
pub fn phase_gradient(packet: &WavePacket, q: &Configuration, a: usize) -> Result<FourVector> {
    phase_gradient_with(packet, q, a, default_node_threshold(packet))
}

pub fn phase_gradient_with(
    packet: &WavePacket,
    q: &Configuration,
    a: usize,
    node_threshold: f64,
) -> Result<FourVector> {
    let psi = packet.evaluate(q)?;
    let modulus = psi.norm();
    if modulus <= node_threshold {
        return Err(node_error(modulus, q.points()));
    }
    let grad = packet.gradient(q, a)?;
    let c = grad.0.map(|g| (g / psi).im);
    Ok(FourVector {
        t: c[0],
        x: c[1],
        y: c[2],
        z: c[3],
    })
}

/// `v_a^mu = -d_a^mu S` for every particle, default node threshold. A single
/// plane wave gives `v = p`.
pub fn velocity_field(packet: &WavePacket, q: &Configuration) -> Result<VelocitySample> {
    velocity_field_with(packet, q, default_node_threshold(packet))
}

pub fn velocity_field_with(
    packet: &WavePacket,
    q: &Configuration,
    node_threshold: f64,
) -> Result<VelocitySample> {
    let psi_modulus = packet.evaluate(q)?.norm();
    let velocities = (0..packet.n_particles())
        .map(|a| phase_gradient_with(packet, q, a, node_threshold).map(|g| -raise_index(&g)))
        .collect::<Result<Vec<_>>>()?;
    Ok(VelocitySample {
        velocities,
        at: q.clone(),
        psi_modulus,
    })
}

/// Allocation-free velocity evaluation for the integrator: one pass over the
/// modes gives `psi` and `W_a^mu = sum_k term_k p_{k,a}^mu`, and
/// `v_a^mu = Re(W_a^mu / psi)`.
pub(crate) struct VelocityEvaluator {
    weighted: Vec<[Complex64; 4]>,
    points: Vec<FourVector>,
    pub node_threshold: f64,
}

impl VelocityEvaluator {
    pub fn new(packet: &WavePacket, node_threshold: f64) -> Self {
        let n = packet.n_particles();
        VelocityEvaluator {
            weighted: vec![[Complex64::new(0.0, 0.0); 4]; n],
            points: vec![FourVector::ZERO; n],
            node_threshold,
        }
    }

    /// Writes `dX/ds` for the flat state `y` into `dy`; returns `|psi|`.
    pub fn eval(&mut self, packet: &WavePacket, y: &[f64], dy: &mut [f64]) -> Result<f64> {
        for (p, c) in self.points.iter_mut().zip(y.chunks_exact(4)) {
            *p = FourVector {
                t: c[0],
                x: c[1],
                y: c[2],
                z: c[3],
            };
        }
        let psi = packet.weighted_sums(&self.points, &mut self.weighted);
        let modulus = psi.norm();
        if modulus <= self.node_threshold {
            return Err(node_error(modulus, &self.points));
        }
        let inv = psi.inv();
        for (w, out) in self.weighted.iter().zip(dy.chunks_exact_mut(4)) {
            for mu in 0..4 {
                out[mu] = (w[mu] * inv).re;
            }
        }
        Ok(modulus)
    }
}
