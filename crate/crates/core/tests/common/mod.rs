#![allow(dead_code)]

pub mod oracles;

use pilotwave_core::rng::StreamRng;
use pilotwave_core::spacetime::FourVector;
use pilotwave_core::{Configuration, WavePacket};

/// Random configuration with every coordinate uniform in `[-r, r]`; spatial
/// axes beyond `spatial_dims` stay at zero.
pub fn random_configuration(n: usize, r: f64, spatial_dims: usize, rng: &mut StreamRng) -> Configuration {
    Configuration::new(
        (0..n)
            .map(|_| {
                let mut c = [0.0; 4];
                for v in c.iter_mut().take(1 + spatial_dims) {
                    *v = rng.uniform(-r, r);
                }
                FourVector::from_components(c)
            })
            .collect(),
    )
}

/// Random configuration with `|psi| > fraction * sum |c_k|`.
pub fn non_node_configuration(
    packet: &WavePacket,
    r: f64,
    spatial_dims: usize,
    fraction: f64,
    rng: &mut StreamRng,
) -> Configuration {
    loop {
        let q = random_configuration(packet.n_particles(), r, spatial_dims, rng);
        if packet.evaluate(&q).unwrap().norm() > fraction * packet.amplitude_sum() {
            return q;
        }
    }
}
