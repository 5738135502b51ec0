//! Spacetime probability `dP = |psi|^2 d^4x_1 ... d^4x_n`, its fixed-time
//! conditional form, box normalization under a finite time window, and
//! ensemble sampling.
//!
//! All probabilities are relative to a user-chosen [`SpacetimeBox`]; the
//! temporal width of the box plays the role of the time cutoff.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::quadrature::{tensor_integrate, GaussLegendre};
use crate::rng::StreamRng;
use crate::spacetime::FourVector;
use crate::wavepacket::{Configuration, WavePacket};
use crate::{Error, Result};

/// Proposals after which a vanishing acceptance rate is reported as an error.
pub const MAX_PROPOSALS: u64 = 10_000_000;
/// Acceptance rate below which the envelope is considered pathological.
pub const MIN_ACCEPTANCE: f64 = 1e-6;
/// Monte Carlo samples drawn from one random stream.
const MC_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::invalid(
                "interval",
                format!("need finite lo < hi, got [{lo}, {hi}]"),
            ));
        }
        Ok(Interval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Bounds for one particle. The time window is mandatory; a spatial axis left
/// as `None` is inactive: its coordinate is pinned to zero and it is neither
/// integrated nor sampled (1+1D and 2+1D scenarios).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleBox {
    pub t: Interval,
    pub spatial: [Option<Interval>; 3],
}

impl ParticleBox {
    pub fn new(t: Interval, x: Option<Interval>, y: Option<Interval>, z: Option<Interval>) -> Self {
        ParticleBox {
            t,
            spatial: [x, y, z],
        }
    }

    /// `t` and `x` only.
    pub fn one_plus_one(t: (f64, f64), x: (f64, f64)) -> Result<Self> {
        Ok(ParticleBox::new(
            Interval::new(t.0, t.1)?,
            Some(Interval::new(x.0, x.1)?),
            None,
            None,
        ))
    }

    /// Interval of component `mu`, if active.
    pub fn axis(&self, mu: usize) -> Option<Interval> {
        if mu == 0 {
            Some(self.t)
        } else {
            self.spatial[mu - 1]
        }
    }
}

/// One integrated coordinate: particle index, component index and bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveAxis {
    pub particle: usize,
    pub component: usize,
    pub interval: Interval,
}

/// Per-particle bounded 4-volume.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeBox {
    particles: Vec<ParticleBox>,
}

impl SpacetimeBox {
    pub fn new(particles: Vec<ParticleBox>) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::invalid("box", "need at least one particle"));
        }
        Ok(SpacetimeBox { particles })
    }

    /// The same bounds for each of `n` particles.
    pub fn replicated(n: usize, bounds: ParticleBox) -> Result<Self> {
        Self::new(vec![bounds; n])
    }

    pub fn n_particles(&self) -> usize {
        self.particles.len()
    }

    pub fn particles(&self) -> &[ParticleBox] {
        &self.particles
    }

    pub fn active_axes(&self) -> Vec<ActiveAxis> {
        self.collect_axes(0..4)
    }

    pub fn active_spatial_axes(&self) -> Vec<ActiveAxis> {
        self.collect_axes(1..4)
    }

    fn collect_axes(&self, components: core::ops::Range<usize>) -> Vec<ActiveAxis> {
        let mut out = Vec::new();
        for (a, pb) in self.particles.iter().enumerate() {
            for mu in components.clone() {
                if let Some(interval) = pb.axis(mu) {
                    out.push(ActiveAxis {
                        particle: a,
                        component: mu,
                        interval,
                    });
                }
            }
        }
        out
    }

    /// Measure of the box over its active axes.
    pub fn volume(&self) -> f64 {
        self.active_axes().iter().map(|ax| ax.interval.width()).product()
    }

    pub fn contains(&self, q: &Configuration) -> bool {
        q.len() == self.n_particles()
            && self
                .active_axes()
                .iter()
                .all(|ax| ax.interval.contains(q.coordinate(ax.particle, ax.component)))
    }

    /// Configuration whose active coordinates are `values` (in
    /// [`active_axes`](Self::active_axes) order) and whose inactive ones are 0.
    pub fn configuration_from_active(&self, values: &[f64]) -> Configuration {
        let mut q = Configuration::origin(self.n_particles());
        for (ax, &v) in self.active_axes().iter().zip(values) {
            q.0[ax.particle][ax.component] = v;
        }
        q
    }

    pub fn active_coordinates(&self, q: &Configuration) -> Vec<f64> {
        self.active_axes()
            .iter()
            .map(|ax| q.coordinate(ax.particle, ax.component))
            .collect()
    }

    pub fn center(&self) -> Configuration {
        let c: Vec<f64> = self.active_axes().iter().map(|ax| ax.interval.center()).collect();
        self.configuration_from_active(&c)
    }

    fn check_packet(&self, packet: &WavePacket) -> Result<()> {
        if packet.n_particles() != self.n_particles() {
            return Err(Error::Dimension {
                expected: packet.n_particles(),
                found: self.n_particles(),
            });
        }
        Ok(())
    }
}

/// Integral estimate with bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub value: f64,
    pub estimated_error: f64,
    pub evaluation_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrationMethod {
    /// Tensor-product Gauss-Legendre with `points` nodes per axis.
    TensorQuadrature { points: usize },
    /// Uniform Monte Carlo with `samples` draws from streams keyed by `seed`.
    MonteCarlo { samples: usize, seed: u64 },
}

/// Default quadrature resolution: 64 points per axis for up to two active
/// axes (1+1D), 16 otherwise.
pub fn default_points(bx: &SpacetimeBox) -> usize {
    if bx.active_axes().len() <= 2 {
        64
    } else {
        16
    }
}

/// `|psi(q)|^2`.
pub fn density(packet: &WavePacket, q: &Configuration) -> Result<f64> {
    Ok(packet.evaluate(q)?.norm_sqr())
}

fn quadrature_over(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    axes: &[ActiveAxis],
    base: &Configuration,
    points: usize,
) -> f64 {
    let intervals: Vec<(f64, f64)> = axes.iter().map(|ax| (ax.interval.lo, ax.interval.hi)).collect();
    let mut q = base.clone();
    debug_assert_eq!(q.len(), bx.n_particles());
    tensor_integrate(&intervals, points, |x| {
        for (ax, &v) in axes.iter().zip(x) {
            q.0[ax.particle][ax.component] = v;
        }
        packet.evaluate_unchecked(q.points()).norm_sqr()
    })
}

fn quadrature_report(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    axes: &[ActiveAxis],
    base: &Configuration,
    points: usize,
) -> Result<DensityReport> {
    if points < 2 {
        return Err(Error::invalid("resolution", "need at least 2 points per axis"));
    }
    let coarse_points = (points / 2).max(2);
    let value = quadrature_over(packet, bx, axes, base, points);
    let coarse = quadrature_over(packet, bx, axes, base, coarse_points);
    let d = axes.len() as u32;
    Ok(DensityReport {
        value,
        estimated_error: libm::fabs(value - coarse),
        evaluation_count: (points as u64).pow(d) + (coarse_points as u64).pow(d),
    })
}

/// `int_box |psi|^2 d^4x_1 ... d^4x_n`.
pub fn box_integral(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    method: IntegrationMethod,
) -> Result<DensityReport> {
    bx.check_packet(packet)?;
    let axes = bx.active_axes();
    match method {
        IntegrationMethod::TensorQuadrature { points } => {
            quadrature_report(packet, bx, &axes, &Configuration::origin(bx.n_particles()), points)
        }
        IntegrationMethod::MonteCarlo { samples, seed } => {
            if samples < 10 {
                return Err(Error::invalid("resolution", "need at least 10 samples"));
            }
            let volume = bx.volume();
            let mut q = Configuration::origin(bx.n_particles());
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for (chunk, start) in (0..samples).step_by(MC_CHUNK).enumerate() {
                let mut rng = StreamRng::new(seed, chunk as u64);
                for _ in start..(start + MC_CHUNK).min(samples) {
                    for ax in &axes {
                        q.0[ax.particle][ax.component] = rng.uniform(ax.interval.lo, ax.interval.hi);
                    }
                    let rho = packet.evaluate_unchecked(q.points()).norm_sqr();
                    sum += rho;
                    sum_sq += rho * rho;
                }
            }
            let n = samples as f64;
            let mean = sum / n;
            let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
            Ok(DensityReport {
                value: volume * mean,
                estimated_error: volume * libm::sqrt(var / n),
                evaluation_count: samples as u64,
            })
        }
    }
}

/// Rescales all amplitudes so that the box integral (tensor quadrature at
/// `points` per axis) is one.
pub fn normalize(packet: &WavePacket, bx: &SpacetimeBox, points: usize) -> Result<WavePacket> {
    let report = box_integral(packet, bx, IntegrationMethod::TensorQuadrature { points })?;
    let scale = packet.amplitude_sum();
    if !(report.value > 1e-300) || report.value <= 1e-14 * scale * scale * bx.volume() {
        return Err(Error::DegeneratePacket);
    }
    Ok(packet.scaled(1.0 / libm::sqrt(report.value)))
}

/// `N_{t_1..t_n} = int |psi(x_1, t_1, ..., x_n, t_n)|^2 d^3x_1 ... d^3x_n` over
/// the spatial part of `bx`.
pub fn marginal_n(
    packet: &WavePacket,
    times: &[f64],
    bx: &SpacetimeBox,
    points: usize,
) -> Result<DensityReport> {
    bx.check_packet(packet)?;
    if times.len() != packet.n_particles() {
        return Err(Error::Dimension {
            expected: packet.n_particles(),
            found: times.len(),
        });
    }
    let mut base = Configuration::origin(bx.n_particles());
    for (p, &t) in base.0.iter_mut().zip(times) {
        p.t = t;
    }
    quadrature_report(packet, bx, &bx.active_spatial_axes(), &base, points)
}

/// `|psi(x_1, t_1, ...)|^2 / N`: density of positions given detection times.
pub fn conditional_density(
    packet: &WavePacket,
    times: &[f64],
    spatial: &[[f64; 3]],
    normalization: f64,
) -> Result<f64> {
    if !(normalization > 0.0) {
        return Err(Error::DegenerateCondition(normalization));
    }
    if times.len() != spatial.len() {
        return Err(Error::Dimension {
            expected: times.len(),
            found: spatial.len(),
        });
    }
    let q = Configuration::new(
        times
            .iter()
            .zip(spatial)
            .map(|(&t, x)| FourVector {
                t,
                x: x[0],
                y: x[1],
                z: x[2],
            })
            .collect(),
    );
    Ok(density(packet, &q)? / normalization)
}

/// Result of rejection sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub configurations: Vec<Configuration>,
    pub proposals: u64,
}

impl Ensemble {
    pub fn acceptance_rate(&self) -> f64 {
        self.configurations.len() as f64 / self.proposals as f64
    }
}

/// Draws sample `index` of the ensemble keyed by `seed` from its own stream,
/// returning the configuration and the number of proposals it took.
///
/// Uniform proposals over the active axes of `bx`, accepted with probability
/// `|psi|^2 / (sum_k |c_k|)^2`.
pub fn sample_one(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    seed: u64,
    index: u64,
) -> Result<(Configuration, u64)> {
    bx.check_packet(packet)?;
    let sum = packet.amplitude_sum();
    let envelope = sum * sum;
    if !(envelope > 0.0) {
        return Err(Error::DegeneratePacket);
    }
    let axes = bx.active_axes();
    let mut rng = StreamRng::new(seed, index);
    let mut q = Configuration::origin(bx.n_particles());
    let mut proposals = 0u64;
    while proposals < MAX_PROPOSALS {
        proposals += 1;
        for ax in &axes {
            q.0[ax.particle][ax.component] = rng.uniform(ax.interval.lo, ax.interval.hi);
        }
        let rho = packet.evaluate_unchecked(q.points()).norm_sqr();
        if rng.next_f64() * envelope < rho {
            return Ok((q, proposals));
        }
    }
    Err(Error::PathologicalEnvelope {
        rate: 0.0,
        proposals,
    })
}

/// `count` configurations distributed as `|psi|^2` restricted to `bx`.
/// Deterministic for fixed `seed`; sample `i` uses stream `i`.
pub fn sample_ensemble(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    count: usize,
    seed: u64,
) -> Result<Ensemble> {
    if count == 0 {
        return Err(Error::invalid("count", "need at least one sample"));
    }
    let mut configurations = Vec::with_capacity(count);
    let mut proposals = 0u64;
    for i in 0..count {
        let (q, used) = sample_one(packet, bx, seed, i as u64)?;
        proposals += used;
        configurations.push(q);
        check_acceptance(configurations.len(), proposals)?;
    }
    Ok(Ensemble {
        configurations,
        proposals,
    })
}

/// Fails once at least [`MAX_PROPOSALS`] have been made with acceptance
/// below [`MIN_ACCEPTANCE`].
pub fn check_acceptance(accepted: usize, proposals: u64) -> Result<()> {
    let rate = accepted as f64 / proposals as f64;
    if proposals >= MAX_PROPOSALS && rate < MIN_ACCEPTANCE {
        return Err(Error::PathologicalEnvelope { rate, proposals });
    }
    Ok(())
}

/// Probability mass of `|psi|^2` in each cell of a regular grid over
/// `region` (one interval per active axis of `bx`), `bins` cells per axis,
/// `points` Gauss-Legendre nodes per axis per cell. Cells are ordered with
/// the last axis fastest.
pub fn binned_integrals(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    region: &[Interval],
    bins: usize,
    points: usize,
) -> Vec<f64> {
    let axes = bx.active_axes();
    assert_eq!(axes.len(), region.len());
    let d = axes.len();
    let rule = GaussLegendre::new(points);
    let total = bins.pow(d as u32);
    let mut out = Vec::with_capacity(total);
    let mut q = Configuration::origin(bx.n_particles());
    for cell in 0..total {
        let mut rem = cell;
        let mut intervals = vec![(0.0, 0.0); d];
        for i in (0..d).rev() {
            let j = rem % bins;
            rem /= bins;
            let w = region[i].width() / bins as f64;
            intervals[i] = (region[i].lo + w * j as f64, region[i].lo + w * (j + 1) as f64);
        }
        let value = tensor_integrate(&intervals, rule.len(), |x| {
            for (ax, &v) in axes.iter().zip(x) {
                q.0[ax.particle][ax.component] = v;
            }
            packet.evaluate_unchecked(q.points()).norm_sqr()
        });
        out.push(value);
    }
    out
}

/// Cell index of active coordinates `x` in the grid of [`binned_integrals`],
/// or `None` outside `region`.
pub fn bin_index(x: &[f64], region: &[Interval], bins: usize) -> Option<usize> {
    let mut idx = 0;
    for (v, iv) in x.iter().zip(region) {
        if !iv.contains(*v) {
            return None;
        }
        let j = (((v - iv.lo) / iv.width()) * bins as f64) as usize;
        idx = idx * bins + j.min(bins - 1);
    }
    Some(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::PlaneWaveMode;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unit_box() -> SpacetimeBox {
        SpacetimeBox::replicated(1, ParticleBox::one_plus_one((0.0, 1.0), (0.0, 1.0)).unwrap())
            .unwrap()
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn plane_wave_integral_is_volume() {
        let w = WavePacket::plane_wave(1.0, [0.3, 0.0, 0.0], c(1.0)).unwrap();
        let bx = SpacetimeBox::replicated(
            1,
            ParticleBox::one_plus_one((-1.0, 1.0), (0.0, 2.0)).unwrap(),
        )
        .unwrap();
        let r = box_integral(&w, &bx, IntegrationMethod::TensorQuadrature { points: 8 }).unwrap();
        assert!((r.value - 4.0).abs() < 1e-13);
        assert_eq!(r.evaluation_count, 64 + 16);
        let mc = box_integral(&w, &bx, IntegrationMethod::MonteCarlo { samples: 100, seed: 1 })
            .unwrap();
        assert!((mc.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zero_packet() {
        let w = WavePacket::plane_wave(1.0, [0.0; 3], c(0.0)).unwrap();
        let r = box_integral(&w, &unit_box(), IntegrationMethod::TensorQuadrature { points: 4 })
            .unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(normalize(&w, &unit_box(), 4), Err(Error::DegeneratePacket));
        assert!(matches!(
            sample_ensemble(&w, &unit_box(), 1, 0),
            Err(Error::DegeneratePacket)
        ));
    }

    #[test]
    fn resolution_limits() {
        let w = WavePacket::plane_wave(1.0, [0.0; 3], c(1.0)).unwrap();
        assert!(box_integral(&w, &unit_box(), IntegrationMethod::TensorQuadrature { points: 1 })
            .is_err());
        assert!(box_integral(&w, &unit_box(), IntegrationMethod::MonteCarlo { samples: 9, seed: 0 })
            .is_err());
    }

    #[test]
    fn normalize_plane_wave() {
        let w = WavePacket::plane_wave(1.0, [0.0; 3], c(1.0)).unwrap();
        let bx = SpacetimeBox::replicated(
            1,
            ParticleBox::one_plus_one((0.0, 2.0), (0.0, 2.0)).unwrap(),
        )
        .unwrap();
        let n = normalize(&w, &bx, 8).unwrap();
        assert!((n.amplitude(0).re - 0.5).abs() < 1e-15);
        let again = normalize(&n, &bx, 8).unwrap();
        assert!((again.amplitude(0) - n.amplitude(0)).norm() < 1e-10);
    }

    #[test]
    fn marginal_and_conditional_uniform() {
        let w = WavePacket::plane_wave(1.0, [0.7, 0.0, 0.0], c(1.0)).unwrap();
        let bx = SpacetimeBox::replicated(
            1,
            ParticleBox::one_plus_one((0.0, 1.0), (-1.0, 2.0)).unwrap(),
        )
        .unwrap();
        let n = marginal_n(&w, &[0.3], &bx, 8).unwrap();
        assert!((n.value - 3.0).abs() < 1e-13);
        let cd = conditional_density(&w, &[0.3], &[[0.5, 0.0, 0.0]], n.value).unwrap();
        assert!((cd - 1.0 / 3.0).abs() < 1e-13);
        assert_eq!(
            conditional_density(&w, &[0.3], &[[0.5, 0.0, 0.0]], 0.0),
            Err(Error::DegenerateCondition(0.0))
        );
    }

    #[test]
    fn rest_superposition_has_constant_marginal() {
        // Two rest modes of the same mass: |psi|^2 constant in t and x.
        let w = WavePacket::new(
            vec![1.0],
            vec![
                PlaneWaveMode::new(c(1.0), vec![[0.0; 3]]),
                PlaneWaveMode::new(Complex64::new(0.0, 0.5), vec![[0.0; 3]]),
            ],
        )
        .unwrap();
        let bx = unit_box();
        let n0 = marginal_n(&w, &[0.0], &bx, 8).unwrap().value;
        for t in [0.1, 0.5, 3.0, -20.0] {
            let nt = marginal_n(&w, &[t], &bx, 8).unwrap().value;
            assert!((nt - n0).abs() < 1e-13);
        }
    }

    #[test]
    fn destructive_interference_node() {
        let w = WavePacket::new(
            vec![1.0],
            vec![
                PlaneWaveMode::new(c(1.0), vec![[0.0; 3]]),
                PlaneWaveMode::new(c(-1.0), vec![[1.0, 0.0, 0.0]]),
            ],
        )
        .unwrap();
        // both phases vanish at the origin: c_1 + c_2 = 0
        assert_eq!(density(&w, &Configuration::origin(1)).unwrap(), 0.0);
    }

    #[test]
    fn sampling_is_deterministic_and_inside() {
        let w = WavePacket::new(
            vec![1.0],
            vec![
                PlaneWaveMode::new(c(1.0), vec![[0.0; 3]]),
                PlaneWaveMode::new(c(0.5), vec![[1.0, 0.0, 0.0]]),
            ],
        )
        .unwrap();
        let bx = unit_box();
        let a = sample_ensemble(&w, &bx, 500, 42).unwrap();
        let b = sample_ensemble(&w, &bx, 500, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.configurations.iter().all(|q| bx.contains(q)));
        assert!(a.configurations.iter().all(|q| q.0[0].y == 0.0 && q.0[0].z == 0.0));
        assert!(a.acceptance_rate() > 0.0 && a.acceptance_rate() <= 1.0);
        assert!(sample_ensemble(&w, &bx, 0, 42).is_err());
    }

    #[test]
    fn bins_partition_the_integral() {
        let w = WavePacket::new(
            vec![1.0],
            vec![
                PlaneWaveMode::new(c(1.0), vec![[0.0; 3]]),
                PlaneWaveMode::new(c(0.5), vec![[1.0, 0.0, 0.0]]),
            ],
        )
        .unwrap();
        let bx = unit_box();
        let region = [Interval::new(0.0, 1.0).unwrap(), Interval::new(0.0, 1.0).unwrap()];
        let cells = binned_integrals(&w, &bx, &region, 5, 6);
        let total = box_integral(&w, &bx, IntegrationMethod::TensorQuadrature { points: 16 })
            .unwrap()
            .value;
        assert!((cells.iter().sum::<f64>() - total).abs() < 1e-12);
        assert_eq!(bin_index(&[0.0, 0.0], &region, 5), Some(0));
        assert_eq!(bin_index(&[0.0, 0.99], &region, 5), Some(4));
        assert_eq!(bin_index(&[0.21, 0.0], &region, 5), Some(5));
        assert_eq!(bin_index(&[1.0, 1.0], &region, 5), Some(24));
        assert_eq!(bin_index(&[1.1, 1.0], &region, 5), None);
    }
}
