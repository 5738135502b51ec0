//! Distribution preservation by the guidance flow.
//!
//! Two tests: the pointwise Liouville identity
//! `rho(Phi(q)) det DPhi(q) = rho(q)` on sampled points, and a chi-square
//! comparison of a flowed `|psi|^2` ensemble against `|psi|^2` itself on an
//! interior comparison region.

use alloc::vec;
use alloc::vec::Vec;

use super::{flow_map, IntegrationOptions};
use crate::probability::{bin_index, binned_integrals, sample_ensemble, Interval, SpacetimeBox};
use crate::stats::chi_square_test;
use crate::wavepacket::{Configuration, WavePacket};
use crate::{Error, Result};

/// Fraction of each active axis width trimmed from both ends of the box
/// (10% of the width per axis in total).
pub const INTERIOR_MARGIN: f64 = 0.05;
/// Safety factor on the largest observed displacement when sizing the
/// comparison region.
pub const DISPLACEMENT_SAFETY: f64 = 1.25;

#[derive(Debug, Clone, PartialEq)]
pub struct EquivarianceOptions {
    pub count: usize,
    pub delta_s: f64,
    pub integration: IntegrationOptions,
    pub seed: u64,
    /// Interior samples used for the pointwise Liouville test.
    pub liouville_samples: usize,
    /// Central-difference width for the flow Jacobian.
    pub jacobian_step: f64,
    /// Histogram cells per active axis; `None` picks about 50 expected
    /// survivors per cell, clamped to `2..=20`.
    pub bins_per_axis: Option<usize>,
    pub min_survivors: usize,
}

impl Default for EquivarianceOptions {
    fn default() -> Self {
        EquivarianceOptions {
            count: 100_000,
            delta_s: 0.5,
            integration: IntegrationOptions {
                monitor_interval: 0,
                ..IntegrationOptions::default()
            },
            seed: 0,
            liouville_samples: 200,
            jacobian_step: 1e-5,
            bins_per_axis: None,
            min_survivors: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivarianceReport {
    pub pointwise_max_violation: f64,
    pub liouville_evaluated: usize,
    pub chi_square_p: f64,
    pub chi_square_statistic: f64,
    pub chi_square_dof: usize,
    /// Among samples starting in the comparison region, the fraction whose
    /// flowed image is outside it (or hit a node).
    pub exited_fraction: f64,
    pub survivors: usize,
    pub region: Vec<Interval>,
}

/// Interior region used for the statistical comparison: each active axis is
/// trimmed by the larger of [`INTERIOR_MARGIN`] of its width and
/// [`DISPLACEMENT_SAFETY`] times the largest displacement seen along it, so
/// that every point of the region has its preimage inside the sampled box.
pub fn comparison_region(bx: &SpacetimeBox, max_displacement: &[f64]) -> Option<Vec<Interval>> {
    bx.active_axes()
        .iter()
        .zip(max_displacement)
        .map(|(ax, &disp)| {
            let margin = f64::max(INTERIOR_MARGIN * ax.interval.width(), DISPLACEMENT_SAFETY * disp);
            Interval::new(ax.interval.lo + margin, ax.interval.hi - margin).ok()
        })
        .collect()
}

fn inside(x: &[f64], region: &[Interval]) -> bool {
    x.iter().zip(region).all(|(v, iv)| iv.contains(*v))
}

/// Determinant by Gaussian elimination with partial pivoting; `m` is
/// row-major `d x d` and is consumed.
fn determinant(mut m: Vec<f64>, d: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&i, &j| libm::fabs(m[i * d + col]).total_cmp(&libm::fabs(m[j * d + col])))
            .unwrap();
        if m[pivot * d + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..d {
                m.swap(pivot * d + k, col * d + k);
            }
            det = -det;
        }
        let p = m[col * d + col];
        det *= p;
        for row in col + 1..d {
            let f = m[row * d + col] / p;
            for k in col..d {
                m[row * d + k] -= f * m[col * d + k];
            }
        }
    }
    det
}

/// `rho(Phi(q)) det DPhi(q) / rho(q) - 1` with the Jacobian over the active
/// axes of `bx` by central differences of flowed neighbours. `None` if any
/// neighbour hits a node.
fn liouville_violation(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    q: &Configuration,
    opts: &EquivarianceOptions,
) -> Result<Option<f64>> {
    let axes = bx.active_axes();
    let d = axes.len();
    let Some(image) = flow_map(packet, q, opts.delta_s, &opts.integration)? else {
        return Ok(None);
    };
    let mut jac = vec![0.0; d * d];
    let h = opts.jacobian_step;
    for (j, ax) in axes.iter().enumerate() {
        let x = q.coordinate(ax.particle, ax.component);
        let plus = flow_map(packet, &q.with_coordinate(ax.particle, ax.component, x + h), opts.delta_s, &opts.integration)?;
        let minus = flow_map(packet, &q.with_coordinate(ax.particle, ax.component, x - h), opts.delta_s, &opts.integration)?;
        let (Some(plus), Some(minus)) = (plus, minus) else {
            return Ok(None);
        };
        for (i, row) in axes.iter().enumerate() {
            let dp = plus.coordinate(row.particle, row.component);
            let dm = minus.coordinate(row.particle, row.component);
            jac[i * d + j] = (dp - dm) / (2.0 * h);
        }
    }
    let rho_start = packet.evaluate(q)?.norm_sqr();
    let rho_end = packet.evaluate(&image)?.norm_sqr();
    Ok(Some(rho_end * determinant(jac, d) / rho_start - 1.0))
}

/// Runs both equivariance tests on `count` samples of `|psi|^2` over `bx`
/// flowed by `delta_s`.
pub fn equivariance_check(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    opts: &EquivarianceOptions,
) -> Result<EquivarianceReport> {
    let ensemble = sample_ensemble(packet, bx, opts.count, opts.seed)?;
    let axes = bx.active_axes();
    let d = axes.len();

    let mut starts = Vec::with_capacity(opts.count);
    let mut images = Vec::with_capacity(opts.count);
    let mut max_disp = vec![0.0f64; d];
    for q in &ensemble.configurations {
        let start = bx.active_coordinates(q);
        let image = flow_map(packet, q, opts.delta_s, &opts.integration)?
            .map(|img| bx.active_coordinates(&img));
        if let Some(img) = &image {
            for i in 0..d {
                max_disp[i] = max_disp[i].max(libm::fabs(img[i] - start[i]));
            }
        }
        starts.push(start);
        images.push(image);
    }

    let Some(region) = comparison_region(bx, &max_disp) else {
        return Err(Error::Inconclusive {
            survivors: 0,
            required: opts.min_survivors,
        });
    };

    let survivors: Vec<&Vec<f64>> = images
        .iter()
        .flatten()
        .filter(|img| inside(img, &region))
        .collect();
    if survivors.len() < opts.min_survivors {
        return Err(Error::Inconclusive {
            survivors: survivors.len(),
            required: opts.min_survivors,
        });
    }

    let (mut started_inside, mut exited) = (0usize, 0usize);
    for (start, image) in starts.iter().zip(&images) {
        if inside(start, &region) {
            started_inside += 1;
            if !image.as_ref().is_some_and(|img| inside(img, &region)) {
                exited += 1;
            }
        }
    }
    let exited_fraction = if started_inside == 0 {
        1.0
    } else {
        exited as f64 / started_inside as f64
    };

    let bins = opts.bins_per_axis.unwrap_or_else(|| {
        let per_axis = libm::pow(survivors.len() as f64 / 50.0, 1.0 / d as f64);
        (per_axis as usize).clamp(2, 20)
    });
    let cells = binned_integrals(packet, bx, &region, bins, 4);
    let mass: f64 = cells.iter().sum();
    let expected: Vec<f64> = cells
        .iter()
        .map(|c| c / mass * survivors.len() as f64)
        .collect();
    let mut observed = vec![0.0; cells.len()];
    for img in &survivors {
        if let Some(i) = bin_index(img, &region, bins) {
            observed[i] += 1.0;
        }
    }
    let chi = chi_square_test(&observed, &expected, 5.0);

    let mut max_violation = 0.0f64;
    let mut evaluated = 0;
    for (q, start) in ensemble.configurations.iter().zip(&starts) {
        if evaluated == opts.liouville_samples {
            break;
        }
        if !inside(start, &region) {
            continue;
        }
        if let Some(v) = liouville_violation(packet, bx, q, opts)? {
            max_violation = max_violation.max(libm::fabs(v));
            evaluated += 1;
        }
    }

    Ok(EquivarianceReport {
        pointwise_max_violation: max_violation,
        liouville_evaluated: evaluated,
        chi_square_p: chi.p_value,
        chi_square_statistic: chi.statistic,
        chi_square_dof: chi.dof,
        exited_fraction,
        survivors: survivors.len(),
        region,
    })
}
