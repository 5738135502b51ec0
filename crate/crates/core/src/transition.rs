//! Finite-cutoff transition amplitude and the rate kernel `|A_T|^2 / T`.
//!
//! `A_T(dE) = int_{-T/2}^{T/2} exp(i dE t) dt` regularizes the
//! energy-conserving delta function. `|A_T|^2` grows like `T` at `dE = 0`
//! while `|A_T|^2 / T` is a Fejer kernel of total mass `2 pi` for every `T`:
//! the rate, not the probability, has a finite limit.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::quadrature::GaussLegendre;
use crate::{Error, Result};

/// Below this `|dE T|` the amplitude uses its Taylor series.
const SERIES_THRESHOLD: f64 = 1e-4;

fn check_cutoff(cutoff: f64) -> Result<()> {
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::invalid("T", format!("cutoff must be positive, got {cutoff}")));
    }
    Ok(())
}

fn check_args(delta_e: f64, cutoff: f64) -> Result<()> {
    check_cutoff(cutoff)?;
    if !delta_e.is_finite() {
        return Err(Error::invalid("delta_E", format!("must be finite, got {delta_e}")));
    }
    Ok(())
}

/// `2 sin(dE T / 2) / dE`, equal to `T` at `dE = 0`. Always real.
pub fn finite_time_amplitude(delta_e: f64, cutoff: f64) -> Result<Complex64> {
    check_args(delta_e, cutoff)?;
    Ok(Complex64::new(amplitude_re(delta_e, cutoff), 0.0))
}

fn amplitude_re(delta_e: f64, cutoff: f64) -> f64 {
    let y = delta_e * cutoff;
    if libm::fabs(y) < SERIES_THRESHOLD {
        cutoff * (1.0 - y * y / 24.0)
    } else {
        2.0 * libm::sin(0.5 * y) / delta_e
    }
}

/// `|A_T|^2 / T`.
pub fn rate(delta_e: f64, cutoff: f64) -> Result<f64> {
    check_args(delta_e, cutoff)?;
    let a = amplitude_re(delta_e, cutoff);
    Ok(a * a / cutoff)
}

/// `int_{-h}^{h} rate(dE, T) d dE` by composite 8-point Gauss-Legendre with
/// `panels_per_lobe` panels per kernel period `2 pi / T`. Tends to `2 pi` as
/// `h` grows; the neglected tails carry about `4 / (T h)`.
pub fn rate_integral(cutoff: f64, halfwidth: f64, panels_per_lobe: usize) -> Result<f64> {
    check_cutoff(cutoff)?;
    let lobe = 2.0 * PI / cutoff;
    if !(halfwidth >= lobe) || !halfwidth.is_finite() {
        return Err(Error::invalid(
            "halfwidth",
            format!("must be at least 2 pi / T = {lobe}, got {halfwidth}"),
        ));
    }
    if panels_per_lobe == 0 {
        return Err(Error::invalid("resolution", "need at least one panel per lobe"));
    }
    let panels = libm::ceil(2.0 * halfwidth / lobe) as usize * panels_per_lobe;
    let rule = GaussLegendre::new(8);
    Ok(rule.integrate_composite(-halfwidth, halfwidth, panels, |e| {
        let a = amplitude_re(e, cutoff);
        a * a / cutoff
    }))
}

/// Rate sampled on a symmetric grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    pub delta_e: Vec<f64>,
    pub rate: Vec<f64>,
    pub cutoff: f64,
}

/// `points` equally spaced values of `dE` over `[-h, h]`; an odd count puts
/// `dE = 0` exactly on the grid.
pub fn rate_profile(cutoff: f64, halfwidth: f64, points: usize) -> Result<RateProfile> {
    check_cutoff(cutoff)?;
    if points < 2 {
        return Err(Error::invalid("points", "need at least 2 grid points"));
    }
    if !(halfwidth > 0.0) {
        return Err(Error::invalid("halfwidth", "must be positive"));
    }
    let mid = (points - 1) as f64 / 2.0;
    let spacing = halfwidth / mid;
    let delta_e: Vec<f64> = (0..points).map(|i| (i as f64 - mid) * spacing).collect();
    let rate = delta_e
        .iter()
        .map(|&e| {
            let a = amplitude_re(e, cutoff);
            a * a / cutoff
        })
        .collect();
    Ok(RateProfile {
        delta_e,
        rate,
        cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Defining integral `int cos(dE t) dt` by composite quadrature; the
    /// imaginary part integrates to zero by symmetry.
    fn amplitude_oracle(delta_e: f64, cutoff: f64) -> (f64, f64) {
        let rule = GaussLegendre::new(16);
        let panels = 4 + (libm::fabs(delta_e) * cutoff) as usize;
        let re = rule.integrate_composite(-cutoff / 2.0, cutoff / 2.0, panels, |t| (delta_e * t).cos());
        let im = rule.integrate_composite(-cutoff / 2.0, cutoff / 2.0, panels, |t| (delta_e * t).sin());
        (re, im)
    }

    #[test]
    fn amplitude_examples() {
        assert_eq!(finite_time_amplitude(0.0, 7.0).unwrap().re, 7.0);
        let t = 10.0;
        assert!(finite_time_amplitude(2.0 * PI / t, t).unwrap().re.abs() < 1e-14);
        let a = finite_time_amplitude(1.0, 10.0).unwrap();
        assert!((a.re - -1.917_848_549_326_277).abs() < 1e-12);
        assert_eq!(a.im, 0.0);
        let (re, im) = amplitude_oracle(1.0, 10.0);
        assert!((a.re - re).abs() < 1e-12 && im.abs() < 1e-12);
    }

    #[test]
    fn series_branch_is_continuous() {
        let t = 3.0;
        for y in [0.5e-4, 0.999e-4, 1.001e-4] {
            let (re, _) = amplitude_oracle(y / t, t);
            assert!((amplitude_re(y / t, t) - re).abs() < 1e-13, "{y}");
        }
    }

    #[test]
    fn rate_examples() {
        assert_eq!(rate(0.0, 100.0).unwrap(), 100.0);
        assert!(rate(2.0 * PI / 100.0, 100.0).unwrap() < 1e-12);
        assert!((rate(1.0, 10.0).unwrap() - 0.367_814_305_815_290_45).abs() < 1e-12);
        assert!(rate(1.0, 0.0).is_err());
        assert!(rate(1.0, -1.0).is_err());
    }

    #[test]
    fn rate_integral_examples() {
        let i = rate_integral(100.0, 50.0, 4).unwrap();
        assert!((i / (2.0 * PI) - 1.0).abs() < 0.01, "{i}");
        let i2 = rate_integral(200.0, 50.0, 4).unwrap();
        assert!((i / i2 - 1.0).abs() < 0.01);
        assert!(rate_integral(100.0, 0.01, 4).is_err());
        assert!(rate_integral(100.0, 50.0, 0).is_err());
        // peak times lobe width
        let peak_share = rate(0.0, 50.0).unwrap() * (2.0 * PI / 50.0);
        assert!((peak_share - 2.0 * PI).abs() <= 2.0 * PI * f64::EPSILON);
    }

    #[test]
    fn profile_grid_contains_zero() {
        let p = rate_profile(10.0, 5.0, 101).unwrap();
        assert_eq!(p.delta_e[50], 0.0);
        assert_eq!(p.rate[50], 10.0);
        assert_eq!(p.delta_e[0], -5.0);
        assert_eq!(p.delta_e[100], 5.0);
        assert!(rate_profile(10.0, 5.0, 1).is_err());
    }
}
