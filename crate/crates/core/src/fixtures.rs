//! Reference packets used by the invariant suites and examples.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::probability::{ParticleBox, SpacetimeBox};
use crate::rng::StreamRng;
use crate::wavepacket::{PlaneWaveMode, WavePacket};

/// One particle of unit mass in 1+1D: a rest mode with amplitude 1 plus a
/// mode with `p_x = 1` and amplitude 1/2. `|psi| >= 1/2` everywhere, so the
/// guidance field has no nodes.
pub fn two_mode_1p1d() -> WavePacket {
    WavePacket::new(
        vec![1.0],
        vec![
            PlaneWaveMode::new(Complex64::new(1.0, 0.0), vec![[0.0; 3]]),
            PlaneWaveMode::new(Complex64::new(0.5, 0.0), vec![[1.0, 0.0, 0.0]]),
        ],
    )
    .expect("fixture is valid")
}

/// `[0, 6] x [-3, 3]` in `(t, x)`, large compared with the distance the
/// [`two_mode_1p1d`] flow covers in `s = 0.5`.
pub fn two_mode_box() -> SpacetimeBox {
    SpacetimeBox::replicated(
        1,
        ParticleBox::one_plus_one((0.0, 6.0), (-3.0, 3.0)).expect("fixture is valid"),
    )
    .expect("fixture is valid")
}

/// `[0, 1] x [0, 1]` in `(t, x)`.
pub fn unit_box_1p1d() -> SpacetimeBox {
    SpacetimeBox::replicated(
        1,
        ParticleBox::one_plus_one((0.0, 1.0), (0.0, 1.0)).expect("fixture is valid"),
    )
    .expect("fixture is valid")
}

/// Two particles in 1+1D, not a product state:
/// `psi = e^{-i(p1.x1 + p2.x2)} + 0.7 i e^{-i(p1'.x1 + p2'.x2)}` with spatial
/// momenta `(0, 0.5)` and `(0.8, -0.3)`, masses `(1, 1.5)`.
pub fn entangled_pair() -> WavePacket {
    WavePacket::new(
        vec![1.0, 1.5],
        vec![
            PlaneWaveMode::new(
                Complex64::new(1.0, 0.0),
                vec![[0.0, 0.0, 0.0], [0.5, 0.0, 0.0]],
            ),
            PlaneWaveMode::new(
                Complex64::new(0.0, 0.7),
                vec![[0.8, 0.0, 0.0], [-0.3, 0.0, 0.0]],
            ),
        ],
    )
    .expect("fixture is valid")
}

/// Shape of a randomly drawn packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomPacketSpec {
    pub max_modes: usize,
    pub max_particles: usize,
    /// Spatial dimensions carrying momentum (1 or 3).
    pub spatial_dims: usize,
    /// Momentum components are uniform in `[-max_momentum, max_momentum]`.
    pub max_momentum: f64,
    pub mass_range: (f64, f64),
}

impl Default for RandomPacketSpec {
    fn default() -> Self {
        RandomPacketSpec {
            max_modes: 8,
            max_particles: 2,
            spatial_dims: 3,
            max_momentum: 1.0,
            mass_range: (0.5, 1.5),
        }
    }
}

/// Random packet with `sum_k |c_k| = 1`, reproducible from `(seed, index)`.
pub fn random_packet(spec: &RandomPacketSpec, seed: u64, index: u64) -> WavePacket {
    let mut rng = StreamRng::new(seed, index);
    let n = 1 + (rng.next_u64() % spec.max_particles as u64) as usize;
    let modes = 1 + (rng.next_u64() % spec.max_modes as u64) as usize;
    let masses: Vec<f64> = (0..n)
        .map(|_| rng.uniform(spec.mass_range.0, spec.mass_range.1))
        .collect();
    let mut amplitudes: Vec<Complex64> = (0..modes)
        .map(|_| Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
        .collect();
    let total: f64 = amplitudes.iter().map(|c| c.norm()).sum();
    for c in amplitudes.iter_mut() {
        *c /= total;
    }
    let p = spec.max_momentum;
    let mode_list = amplitudes
        .into_iter()
        .map(|c| {
            let momenta = (0..n)
                .map(|_| {
                    let mut v = [0.0; 3];
                    for comp in v.iter_mut().take(spec.spatial_dims) {
                        *comp = rng.uniform(-p, p);
                    }
                    v
                })
                .collect();
            PlaneWaveMode::new(c, momenta)
        })
        .collect();
    WavePacket::new(masses, mode_list).expect("random packet is valid")
}
