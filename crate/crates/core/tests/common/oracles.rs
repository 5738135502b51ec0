//! Independent reference computations for the test suites. Nothing here
//! calls the analytic gradient or velocity code under test.

#![allow(dead_code)]

use pilotwave_core::spacetime::FourVector;
use pilotwave_core::{Complex64, Configuration, WavePacket};

/// Mode sum in plain real arithmetic.
pub fn evaluate(packet: &WavePacket, q: &Configuration) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..packet.n_modes() {
        let mut phase = 0.0;
        for a in 0..packet.n_particles() {
            let p = packet.momentum(k, a);
            let x = q.0[a];
            phase += p.t * x.t - p.x * x.x - p.y * x.y - p.z * x.z;
        }
        let c = packet.amplitude(k);
        re += c.re * phase.cos() + c.im * phase.sin();
        im += c.im * phase.cos() - c.re * phase.sin();
    }
    Complex64::new(re, im)
}

fn shifted(q: &Configuration, a: usize, mu: usize, delta: f64) -> Configuration {
    q.with_coordinate(a, mu, q.coordinate(a, mu) + delta)
}

/// Fourth-order central difference of `psi` along coordinate `(a, mu)`.
pub fn fd_gradient(packet: &WavePacket, q: &Configuration, a: usize, h: f64) -> [Complex64; 4] {
    let mut g = [Complex64::new(0.0, 0.0); 4];
    for (mu, gm) in g.iter_mut().enumerate() {
        let f = |d: f64| evaluate(packet, &shifted(q, a, mu, d));
        *gm = (f(-2.0 * h) - f(-h) * 8.0 + f(h) * 8.0 - f(2.0 * h)) / (12.0 * h);
    }
    g
}

/// Covariant phase gradient from finite differences of `arg psi`, unwrapped
/// locally by measuring every phase relative to `arg psi(q)`; fourth-order
/// stencil.
pub fn fd_phase_gradient(packet: &WavePacket, q: &Configuration, a: usize, h: f64) -> FourVector {
    let centre = evaluate(packet, q);
    let mut out = [0.0; 4];
    for (mu, o) in out.iter_mut().enumerate() {
        let phi = |d: f64| (evaluate(packet, &shifted(q, a, mu, d)) * centre.conj()).arg();
        *o = (phi(-2.0 * h) - 8.0 * phi(-h) + 8.0 * phi(h) - phi(2.0 * h)) / (12.0 * h);
    }
    FourVector::from_components(out)
}

/// `v^mu = -g^{mu nu} d_nu S` from the finite-difference phase gradient.
pub fn fd_velocity(packet: &WavePacket, q: &Configuration, a: usize, h: f64) -> FourVector {
    let g = fd_phase_gradient(packet, q, a, h);
    FourVector::new(-g.t, g.x, g.y, g.z)
}

/// `|psi|^2`.
pub fn density(packet: &WavePacket, q: &Configuration) -> f64 {
    evaluate(packet, q).norm_sqr()
}
