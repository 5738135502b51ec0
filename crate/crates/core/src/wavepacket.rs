//! Positive-energy plane-wave superpositions over many particles, each with
//! its own time coordinate.
//!
//! `psi(x_1, ..., x_n) = sum_k c_k prod_a exp(-i p_{k,a} . x_a)` with every
//! `p_{k,a}` on the positive mass shell, so each single-particle Klein-Gordon
//! equation holds identically and derivatives are closed-form.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::spacetime::{boost, minkowski_dot, Axis, ComplexFourVector, FourVector};
use crate::{Error, Result};

/// `+sqrt(|p|^2 + m^2)`.
pub fn on_shell_energy(p: [f64; 3], m: f64) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::invalid("mass", format!("must be positive and finite, got {m}")));
    }
    if p.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("momentum", "components must be finite"));
    }
    Ok(libm::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m))
}

/// `exp(-i phase)`.
#[inline]
pub(crate) fn phasor(phase: f64) -> Complex64 {
    let (s, c) = libm::sincos(phase);
    Complex64::new(c, -s)
}

/// User-facing description of one mode: an amplitude and one spatial momentum
/// per particle. Energies are always derived on-shell.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveMode {
    pub amplitude: Complex64,
    pub momenta: Vec<[f64; 3]>,
}

impl PlaneWaveMode {
    pub fn new(amplitude: Complex64, momenta: Vec<[f64; 3]>) -> Self {
        PlaneWaveMode { amplitude, momenta }
    }
}

/// Ordered spacetime points `(x_1, ..., x_n)`, one per particle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Configuration(pub Vec<FourVector>);

impl Configuration {
    pub fn new(points: Vec<FourVector>) -> Self {
        Configuration(points)
    }

    pub fn origin(n: usize) -> Self {
        Configuration(alloc::vec![FourVector::ZERO; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> &[FourVector] {
        &self.0
    }

    /// Coordinates flattened as `t1, x1, y1, z1, t2, ...`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.0.iter().flat_map(|p| p.components()).collect()
    }

    pub fn from_flat(flat: &[f64]) -> Self {
        debug_assert_eq!(flat.len() % 4, 0);
        Configuration(
            flat.chunks_exact(4)
                .map(|c| FourVector {
                    t: c[0],
                    x: c[1],
                    y: c[2],
                    z: c[3],
                })
                .collect(),
        )
    }

    pub fn coordinate(&self, particle: usize, mu: usize) -> f64 {
        self.0[particle][mu]
    }

    pub fn with_coordinate(&self, particle: usize, mu: usize, value: f64) -> Self {
        let mut out = self.clone();
        out.0[particle][mu] = value;
        out
    }

    pub fn boosted(&self, rapidity: f64, axis: Axis) -> Self {
        Configuration(self.0.iter().map(|p| boost(p, rapidity, axis)).collect())
    }

    pub fn max_abs_diff(&self, other: &Configuration) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| f64::max(m, a.max_abs_diff(b)))
    }
}

/// Many-particle superposition of on-shell positive-energy plane waves.
///
/// Immutable after construction. Momenta are stored contravariantly with the
/// derived energy in the time slot, indexed `k * n_particles + a`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    masses: Vec<f64>,
    amplitudes: Vec<Complex64>,
    momenta: Vec<FourVector>,
}

impl WavePacket {
    pub fn new(masses: Vec<f64>, modes: Vec<PlaneWaveMode>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::invalid("particles", "need at least one particle"));
        }
        for (a, &m) in masses.iter().enumerate() {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::invalid(
                    format!("masses[{a}]"),
                    format!("mass must be positive and finite, got {m}"),
                ));
            }
        }
        if modes.is_empty() {
            return Err(Error::invalid("modes", "need at least one mode"));
        }
        let n = masses.len();
        let mut amplitudes = Vec::with_capacity(modes.len());
        let mut momenta = Vec::with_capacity(modes.len() * n);
        for (k, mode) in modes.into_iter().enumerate() {
            if !mode.amplitude.re.is_finite() || !mode.amplitude.im.is_finite() {
                return Err(Error::invalid(
                    format!("modes[{k}].amplitude"),
                    "amplitude must be finite",
                ));
            }
            if mode.momenta.len() != n {
                return Err(Error::invalid(
                    format!("modes[{k}].momenta"),
                    format!("expected {n} momenta, found {}", mode.momenta.len()),
                ));
            }
            for (a, p) in mode.momenta.iter().enumerate() {
                let e = on_shell_energy(*p, masses[a]).map_err(|_| {
                    Error::invalid(format!("modes[{k}].momenta[{a}]"), "components must be finite")
                })?;
                momenta.push(FourVector {
                    t: e,
                    x: p[0],
                    y: p[1],
                    z: p[2],
                });
            }
            amplitudes.push(mode.amplitude);
        }
        Ok(WavePacket {
            masses,
            amplitudes,
            momenta,
        })
    }

    /// One particle, one mode.
    pub fn plane_wave(mass: f64, momentum: [f64; 3], amplitude: Complex64) -> Result<Self> {
        Self::new(
            alloc::vec![mass],
            alloc::vec![PlaneWaveMode::new(amplitude, alloc::vec![momentum])],
        )
    }

    /// Builds a packet from raw four-momenta without the on-shell check.
    ///
    /// Only meant for negative-control fixtures that need an off-shell
    /// packet; nothing else in the crate produces one.
    #[doc(hidden)]
    pub fn from_raw_parts_unchecked(
        masses: Vec<f64>,
        amplitudes: Vec<Complex64>,
        momenta: Vec<FourVector>,
    ) -> Self {
        assert_eq!(momenta.len(), amplitudes.len() * masses.len());
        WavePacket {
            masses,
            amplitudes,
            momenta,
        }
    }

    pub fn n_particles(&self) -> usize {
        self.masses.len()
    }

    pub fn n_modes(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, a: usize) -> f64 {
        self.masses[a]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amplitudes[k]
    }

    /// Contravariant four-momentum of particle `a` in mode `k`.
    pub fn momentum(&self, k: usize, a: usize) -> FourVector {
        self.momenta[k * self.n_particles() + a]
    }

    /// Momenta of mode `k`, one per particle.
    pub fn mode_momenta(&self, k: usize) -> &[FourVector] {
        let n = self.n_particles();
        &self.momenta[k * n..(k + 1) * n]
    }

    /// `sum_k |c_k|`, an upper bound for `|psi|` everywhere.
    pub fn amplitude_sum(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm()).sum()
    }

    /// Largest energy over all modes and particles.
    pub fn max_energy(&self) -> f64 {
        self.momenta.iter().fold(0.0, |m, p| f64::max(m, p.t))
    }

    /// Same modes with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        WavePacket {
            masses: self.masses.clone(),
            amplitudes: self.amplitudes.iter().map(|c| c * factor).collect(),
            momenta: self.momenta.clone(),
        }
    }

    /// The packet seen from a frame boosted by `rapidity` along `axis`:
    /// every mode momentum is boosted and its energy re-derived on-shell, so
    /// `boosted.evaluate(q.boosted(..)) == evaluate(q)`.
    pub fn boosted(&self, rapidity: f64, axis: Axis) -> Result<Self> {
        let n = self.n_particles();
        let modes = (0..self.n_modes())
            .map(|k| {
                let momenta = (0..n)
                    .map(|a| boost(&self.momentum(k, a), rapidity, axis).spatial())
                    .collect();
                PlaneWaveMode::new(self.amplitudes[k], momenta)
            })
            .collect();
        Self::new(self.masses.clone(), modes)
    }

    fn check_configuration(&self, q: &Configuration) -> Result<()> {
        if q.len() != self.n_particles() {
            return Err(Error::Dimension {
                expected: self.n_particles(),
                found: q.len(),
            });
        }
        Ok(())
    }

    /// `c_k prod_a exp(-i p_{k,a} . x_a)`.
    #[inline]
    pub(crate) fn mode_term(&self, k: usize, q: &[FourVector]) -> Complex64 {
        let phase: f64 = self
            .mode_momenta(k)
            .iter()
            .zip(q)
            .map(|(p, x)| minkowski_dot(p, x))
            .sum();
        self.amplitudes[k] * phasor(phase)
    }

    pub fn evaluate(&self, q: &Configuration) -> Result<Complex64> {
        self.check_configuration(q)?;
        Ok(self.evaluate_unchecked(q.points()))
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, q: &[FourVector]) -> Complex64 {
        (0..self.n_modes()).map(|k| self.mode_term(k, q)).sum()
    }

    /// Exact covariant gradient `d_{a mu} psi` with respect to particle `a`.
    pub fn gradient(&self, q: &Configuration, a: usize) -> Result<ComplexFourVector> {
        self.check_configuration(q)?;
        if a >= self.n_particles() {
            return Err(Error::Dimension {
                expected: self.n_particles(),
                found: a + 1,
            });
        }
        let mut grad = [Complex64::new(0.0, 0.0); 4];
        for k in 0..self.n_modes() {
            let term = self.mode_term(k, q.points());
            let p = self.momentum(k, a);
            // d_mu exp(-i p.x) = -i p_mu exp(-i p.x), p_mu = (E, -p)
            let lowered = [p.t, -p.x, -p.y, -p.z];
            for mu in 0..4 {
                grad[mu] += term * Complex64::new(0.0, -lowered[mu]);
            }
        }
        Ok(ComplexFourVector(grad))
    }

    /// Value and all contravariant momentum-weighted sums in one pass:
    /// returns `psi` and fills `weighted[a] = sum_k term_k p^mu_{k,a}`
    /// (real and imaginary parts separately).
    pub(crate) fn weighted_sums(
        &self,
        q: &[FourVector],
        weighted: &mut [[Complex64; 4]],
    ) -> Complex64 {
        for w in weighted.iter_mut() {
            *w = [Complex64::new(0.0, 0.0); 4];
        }
        let mut psi = Complex64::new(0.0, 0.0);
        for k in 0..self.n_modes() {
            let term = self.mode_term(k, q);
            psi += term;
            for (w, p) in weighted.iter_mut().zip(self.mode_momenta(k)) {
                for (wm, pm) in w.iter_mut().zip(p.components()) {
                    *wm += term * pm;
                }
            }
        }
        psi
    }
}

/// Finite-difference magnitude of `(d^mu d_mu + m_a^2) psi` for particle `a`
/// using second-order central stencils of width `h` in all four coordinates.
pub fn kg_residual_fd(packet: &WavePacket, q: &Configuration, a: usize, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid("h", "step must be positive"));
    }
    let psi0 = packet.evaluate(q)?;
    if a >= packet.n_particles() {
        return Err(Error::Dimension {
            expected: packet.n_particles(),
            found: a + 1,
        });
    }
    let mut box_op = Complex64::new(0.0, 0.0);
    for mu in 0..4 {
        let x = q.coordinate(a, mu);
        let plus = packet.evaluate_unchecked(q.with_coordinate(a, mu, x + h).points());
        let minus = packet.evaluate_unchecked(q.with_coordinate(a, mu, x - h).points());
        let second = (plus - psi0 * 2.0 + minus) / (h * h);
        // d^mu d_mu = d_t^2 - laplacian
        if mu == 0 {
            box_op += second;
        } else {
            box_op -= second;
        }
    }
    let m = packet.mass(a);
    Ok((box_op + psi0 * (m * m)).norm())
}

/// One mode of a reduced packet: `c exp(-i (omega t - p.x))` with
/// `omega = E - m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonRelativisticMode {
    pub amplitude: Complex64,
    pub momentum: [f64; 3],
    pub frequency: f64,
}

/// Single-particle wave function with the rest-mass phase `exp(-i m t)`
/// stripped off.
#[derive(Debug, Clone, PartialEq)]
pub struct NonRelativisticPacket {
    pub mass: f64,
    pub modes: Vec<NonRelativisticMode>,
}

/// Splits `psi = exp(-i m t) psi_nr` for a one-particle packet.
pub fn nonrelativistic_reduce(packet: &WavePacket) -> Result<NonRelativisticPacket> {
    if packet.n_particles() != 1 {
        return Err(Error::Unsupported(
            "nonrelativistic reduction of multi-particle packets",
        ));
    }
    let m = packet.mass(0);
    let modes = (0..packet.n_modes())
        .map(|k| {
            let p = packet.momentum(k, 0);
            let p2 = p.x * p.x + p.y * p.y + p.z * p.z;
            NonRelativisticMode {
                amplitude: packet.amplitude(k),
                momentum: p.spatial(),
                // E - m without cancellation
                frequency: p2 / (p.t + m),
            }
        })
        .collect();
    Ok(NonRelativisticPacket { mass: m, modes })
}

impl NonRelativisticPacket {
    fn term(&self, mode: &NonRelativisticMode, t: f64, x: [f64; 3]) -> Complex64 {
        let px = mode.momentum[0] * x[0] + mode.momentum[1] * x[1] + mode.momentum[2] * x[2];
        mode.amplitude * phasor(mode.frequency * t - px)
    }

    pub fn evaluate(&self, t: f64, x: [f64; 3]) -> Complex64 {
        self.modes.iter().map(|m| self.term(m, t, x)).sum()
    }

    pub fn spatial_gradient(&self, t: f64, x: [f64; 3]) -> [Complex64; 3] {
        let mut g = [Complex64::new(0.0, 0.0); 3];
        for mode in &self.modes {
            let term = self.term(mode, t, x);
            for (gi, pi) in g.iter_mut().zip(mode.momentum) {
                *gi += term * Complex64::new(0.0, pi);
            }
        }
        g
    }

    /// Schrodinger guidance velocity `grad S / m = Im(grad psi / psi) / m`.
    pub fn bohmian_velocity(&self, t: f64, x: [f64; 3]) -> Result<[f64; 3]> {
        let psi = self.evaluate(t, x);
        if psi.norm() == 0.0 {
            return Err(Error::Node {
                modulus: 0.0,
                configuration: Configuration::new(alloc::vec![FourVector {
                    t,
                    x: x[0],
                    y: x[1],
                    z: x[2]
                }]),
            });
        }
        let g = self.spatial_gradient(t, x);
        Ok([0, 1, 2].map(|i| (g[i] / psi).im / self.mass))
    }

    /// `|p|^2 / 2m`, the Schrodinger frequency of mode `k`.
    pub fn schrodinger_frequency(&self, k: usize) -> f64 {
        let p = self.modes[k].momentum;
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / (2.0 * self.mass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Straight real-arithmetic mode sum for one particle, written
    /// independently of `mode_term`.
    fn oracle_1p(modes: &[(f64, f64, [f64; 3])], m: f64, x: [f64; 4]) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for &(cr, ci, p) in modes {
            let e = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt();
            let phase = e * x[0] - p[0] * x[1] - p[1] * x[2] - p[2] * x[3];
            // (cr + i ci)(cos phase - i sin phase)
            re += cr * phase.cos() + ci * phase.sin();
            im += ci * phase.cos() - cr * phase.sin();
        }
        (re, im)
    }

    #[test]
    fn on_shell_examples() {
        assert_eq!(on_shell_energy([0.0; 3], 1.0).unwrap(), 1.0);
        assert_eq!(on_shell_energy([3.0, 0.0, 0.0], 4.0).unwrap(), 5.0);
        assert_eq!(on_shell_energy([1.0, 1.0, 1.0], 1.0).unwrap(), 2.0);
        assert!(on_shell_energy([0.0; 3], 0.0).is_err());
        assert!(on_shell_energy([0.0; 3], -1.0).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        let err = WavePacket::new(vec![1.0, -2.0], vec![]).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { ref field, .. } if field == "masses[1]"));
        let err = WavePacket::new(vec![1.0], vec![]).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { ref field, .. } if field == "modes"));
        let err = WavePacket::new(
            vec![1.0, 1.0],
            vec![PlaneWaveMode::new(c(1.0, 0.0), vec![[0.0; 3]])],
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::InvalidParameter { ref field, .. } if field == "modes[0].momenta")
        );
    }

    #[test]
    fn single_plane_wave_is_unimodular() {
        let w = WavePacket::plane_wave(1.3, [0.4, -0.2, 0.9], c(1.0, 0.0)).unwrap();
        let q = Configuration::new(vec![FourVector::new(2.0, -1.0, 0.5, 3.0)]);
        let v = w.evaluate(&q).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        let p = w.momentum(0, 0);
        let expect = phasor(minkowski_dot(&p, &q.0[0]));
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn origin_gives_amplitude_sum() {
        let w = WavePacket::new(
            vec![1.0, 2.0],
            vec![
                PlaneWaveMode::new(c(0.5, 0.25), vec![[1.0, 0.0, 0.0], [0.0, 2.0, 0.0]]),
                PlaneWaveMode::new(c(-0.3, 1.0), vec![[0.0, 0.0, 3.0], [0.1, 0.2, 0.3]]),
            ],
        )
        .unwrap();
        let v = w.evaluate(&Configuration::origin(2)).unwrap();
        assert_eq!(v, c(0.2, 1.25));
    }

    #[test]
    fn two_mode_matches_independent_sum() {
        let w = WavePacket::new(
            vec![1.0],
            vec![
                PlaneWaveMode::new(c(1.0, 0.0), vec![[0.0; 3]]),
                PlaneWaveMode::new(c(1.0, 0.0), vec![[0.5, 0.0, 0.0]]),
            ],
        )
        .unwrap();
        let q = Configuration::new(vec![FourVector::new(0.3, 0.7, 0.0, 0.0)]);
        let v = w.evaluate(&q).unwrap();
        let (re, im) = oracle_1p(
            &[(1.0, 0.0, [0.0; 3]), (1.0, 0.0, [0.5, 0.0, 0.0])],
            1.0,
            [0.3, 0.7, 0.0, 0.0],
        );
        assert!((v.re - re).abs() < 1e-14 && (v.im - im).abs() < 1e-14);
        // Frozen from the oracle above.
        assert!((v.re - 1.955_230_059_832_264_3).abs() < 1e-12, "{}", v.re);
        assert!((v.im - -0.280_930_920_884_135).abs() < 1e-12, "{}", v.im);
    }

    #[test]
    fn dimension_errors() {
        let w = WavePacket::plane_wave(1.0, [0.0; 3], c(1.0, 0.0)).unwrap();
        assert!(matches!(
            w.evaluate(&Configuration::origin(2)),
            Err(Error::Dimension { expected: 1, found: 2 })
        ));
        assert!(w.gradient(&Configuration::origin(1), 1).is_err());
    }

    #[test]
    fn plane_wave_gradient() {
        let w = WavePacket::plane_wave(1.0, [0.3, 0.1, -0.7], c(0.2, 0.9)).unwrap();
        let q = Configuration::new(vec![FourVector::new(0.4, 1.1, -0.3, 0.8)]);
        let psi = w.evaluate(&q).unwrap();
        let g = w.gradient(&q, 0).unwrap();
        let p = w.momentum(0, 0);
        let lowered = [p.t, -p.x, -p.y, -p.z];
        for mu in 0..4 {
            let expect = psi * c(0.0, -lowered[mu]);
            assert!((g[mu] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn rest_modes_have_no_spatial_gradient() {
        let w = WavePacket::new(
            vec![1.0],
            vec![
                PlaneWaveMode::new(c(1.0, 0.0), vec![[0.0; 3]]),
                PlaneWaveMode::new(c(0.0, 0.5), vec![[0.0; 3]]),
            ],
        )
        .unwrap();
        let q = Configuration::new(vec![FourVector::new(0.4, 1.1, -0.3, 0.8)]);
        let g = w.gradient(&q, 0).unwrap();
        for mu in 1..4 {
            assert_eq!(g[mu], c(0.0, 0.0));
        }
    }

    #[test]
    fn plane_wave_kg_residual() {
        let p = [0.3, -0.4, 0.2];
        let m = 0.9;
        let w = WavePacket::plane_wave(m, p, c(1.0, 0.0)).unwrap();
        let e = w.momentum(0, 0).t;
        let q = Configuration::new(vec![FourVector::new(0.1, 0.2, 0.3, 0.4)]);
        let r = kg_residual_fd(&w, &q, 0, 1e-3).unwrap();
        let p2 = p.iter().map(|x| x * x).sum::<f64>();
        assert!(r < 1e-5 * (e * e + p2 + m * m), "{r}");

        let rest = WavePacket::plane_wave(1.0, [0.0; 3], c(1.0, 0.0)).unwrap();
        assert!(kg_residual_fd(&rest, &q, 0, 1e-3).unwrap() < 1e-5);
        assert!(kg_residual_fd(&rest, &q, 0, 0.0).is_err());
    }

    #[test]
    fn off_shell_packet_has_residual() {
        let w = WavePacket::from_raw_parts_unchecked(
            vec![1.0],
            vec![c(1.0, 0.0)],
            vec![FourVector::new(1.2, 0.0, 0.0, 0.0)],
        );
        let q = Configuration::origin(1);
        let r = kg_residual_fd(&w, &q, 0, 1e-3).unwrap();
        assert!((r - (1.0 - 1.44f64).abs()).abs() < 1e-5);
    }

    #[test]
    fn reduction() {
        let w = WavePacket::new(
            vec![1.0],
            vec![
                PlaneWaveMode::new(c(1.0, 0.0), vec![[0.0; 3]]),
                PlaneWaveMode::new(c(0.3, -0.2), vec![[0.01, 0.0, 0.0]]),
            ],
        )
        .unwrap();
        let nr = nonrelativistic_reduce(&w).unwrap();
        assert_eq!(nr.modes[0].frequency, 0.0);
        // E - m against p^2/2m: relative gap p^2/(4 m^2) at leading order
        let rel = (nr.modes[1].frequency - nr.schrodinger_frequency(1)).abs()
            / nr.schrodinger_frequency(1);
        assert!(rel <= 2.5e-5 * 1.0001, "{rel}");
        assert!(rel > 2.4e-5);
        for &(t, x) in &[(0.0, 0.0), (3.1, -2.0), (-7.5, 11.0)] {
            let q = Configuration::new(vec![FourVector::new(t, x, 0.0, 0.0)]);
            let full = w.evaluate(&q).unwrap();
            let red = nr.evaluate(t, [x, 0.0, 0.0]);
            assert!((red - full * phasor(-t)).norm() < 1e-13);
            assert!((red.norm() - full.norm()).abs() < 1e-13);
        }
        let two = WavePacket::new(
            vec![1.0, 1.0],
            vec![PlaneWaveMode::new(c(1.0, 0.0), vec![[0.0; 3]; 2])],
        )
        .unwrap();
        assert!(matches!(nonrelativistic_reduce(&two), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rest_mode_reduction_is_static() {
        let w = WavePacket::plane_wave(2.0, [0.0; 3], c(0.5, 0.5)).unwrap();
        let nr = nonrelativistic_reduce(&w).unwrap();
        assert_eq!(nr.evaluate(0.0, [0.0; 3]), nr.evaluate(123.4, [0.0; 3]));
    }
}
