use alloc::vec;
use alloc::vec::Vec;

use super::velocity::VelocityEvaluator;
use super::{default_node_threshold, DEFAULT_STEP};
use crate::probability::SpacetimeBox;
use crate::wavepacket::{Configuration, WavePacket};
use crate::{Error, Result};

/// Fixed-step integration settings.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationOptions {
    /// Upper bound on the step in `s`; the span is divided into equal steps
    /// no longer than this.
    pub step: f64,
    /// Absolute `|psi|` threshold; `None` means `1e-9 * sum_k |c_k|`.
    pub node_threshold: Option<f64>,
    /// Halt once an active coordinate leaves this box.
    pub domain: Option<SpacetimeBox>,
    /// Every this many steps, compare one step with two half steps. Zero
    /// disables the monitor.
    pub monitor_interval: usize,
    /// Local error estimate above which the monitor logs a warning.
    pub monitor_tolerance: f64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions {
            step: DEFAULT_STEP,
            node_threshold: None,
            domain: None,
            monitor_interval: 100,
            monitor_tolerance: 1e-9,
        }
    }
}

impl IntegrationOptions {
    pub fn with_step(step: f64) -> Self {
        IntegrationOptions {
            step,
            ..Default::default()
        }
    }

    fn threshold(&self, packet: &WavePacket) -> f64 {
        self.node_threshold
            .unwrap_or_else(|| default_node_threshold(packet))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryStatus {
    Completed,
    HaltedAtNode,
    HaltedOutOfDomain,
}

impl TrajectoryStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TrajectoryStatus::Completed => "completed",
            TrajectoryStatus::HaltedAtNode => "halted-at-node",
            TrajectoryStatus::HaltedOutOfDomain => "halted-out-of-domain",
        }
    }
}

/// Sampled solution `X_a^mu(s)`; one state per recorded `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub s_values: Vec<f64>,
    pub states: Vec<Configuration>,
    pub status: TrajectoryStatus,
    /// Largest step-halving error estimate seen by the monitor.
    pub max_error_estimate: f64,
}

impl Trajectory {
    pub fn last(&self) -> &Configuration {
        self.states.last().expect("trajectory has at least the initial state")
    }
}

enum StepError {
    Node,
    Other(Error),
}

impl From<Error> for StepError {
    fn from(e: Error) -> Self {
        match e {
            Error::Node { .. } => StepError::Node,
            other => StepError::Other(other),
        }
    }
}

/// Classical fourth-order Runge-Kutta on the flat `4n`-dimensional state.
///
/// The state is advanced with compensated (Kahan) summation so that rounding
/// does not accumulate linearly over long fixed-step runs.
struct Rk4<'a> {
    packet: &'a WavePacket,
    velocity: VelocityEvaluator,
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
    compensation: Vec<f64>,
}

impl<'a> Rk4<'a> {
    fn new(packet: &'a WavePacket, node_threshold: f64) -> Self {
        let dim = 4 * packet.n_particles();
        Rk4 {
            packet,
            velocity: VelocityEvaluator::new(packet, node_threshold),
            k: [vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]],
            tmp: vec![0.0; dim],
            compensation: vec![0.0; dim],
        }
    }

    /// One step from the running state `y` into `out`, carrying the
    /// compensation term between calls.
    fn advance(&mut self, y: &[f64], h: f64, out: &mut [f64]) -> core::result::Result<(), StepError> {
        self.increment(y, h, out)?;
        for i in 0..y.len() {
            let increment = out[i] - self.compensation[i];
            let sum = y[i] + increment;
            self.compensation[i] = (sum - y[i]) - increment;
            out[i] = sum;
        }
        Ok(())
    }

    /// Plain step `out = y + increment`, used by the error monitor.
    fn step(&mut self, y: &[f64], h: f64, out: &mut [f64]) -> core::result::Result<(), StepError> {
        self.increment(y, h, out)?;
        for i in 0..y.len() {
            out[i] += y[i];
        }
        Ok(())
    }

    /// Writes the RK4 increment `h/6 (k1 + 2 k2 + 2 k3 + k4)` into `out`.
    fn increment(&mut self, y: &[f64], h: f64, out: &mut [f64]) -> core::result::Result<(), StepError> {
        let [k1, k2, k3, k4] = &mut self.k;
        self.velocity.eval(self.packet, y, k1)?;
        for i in 0..y.len() {
            self.tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        self.velocity.eval(self.packet, &self.tmp, k2)?;
        for i in 0..y.len() {
            self.tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        self.velocity.eval(self.packet, &self.tmp, k3)?;
        for i in 0..y.len() {
            self.tmp[i] = y[i] + h * k3[i];
        }
        self.velocity.eval(self.packet, &self.tmp, k4)?;
        for i in 0..y.len() {
            out[i] = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(())
    }
}

fn step_count(span: f64, step: f64) -> usize {
    let n = libm::ceil(libm::fabs(span) / step * (1.0 - 1e-12));
    (n as usize).max(1)
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::invalid("step", "must be positive and finite"));
    }
    Ok(())
}

fn check_initial(packet: &WavePacket, initial: &Configuration, threshold: f64) -> Result<()> {
    let modulus = packet.evaluate(initial)?.norm();
    if modulus <= threshold {
        return Err(Error::Node {
            modulus,
            configuration: initial.clone(),
        });
    }
    if initial.points().iter().any(|p| !p.is_finite()) {
        return Err(Error::invalid("initial", "coordinates must be finite"));
    }
    Ok(())
}

/// Integrates `dX/ds = v(X)` over `s_span = (s0, s1)` with `s1 >= s0`,
/// recording every step.
pub fn integrate_trajectory(
    packet: &WavePacket,
    initial: &Configuration,
    s_span: (f64, f64),
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    check_step(opts.step)?;
    let (s0, s1) = s_span;
    if !(s1 >= s0) || !s0.is_finite() || !s1.is_finite() {
        return Err(Error::invalid("s_span", "need finite s0 <= s1"));
    }
    let threshold = opts.threshold(packet);
    check_initial(packet, initial, threshold)?;

    let mut trajectory = Trajectory {
        s_values: vec![s0],
        states: vec![initial.clone()],
        status: TrajectoryStatus::Completed,
        max_error_estimate: 0.0,
    };
    if s1 == s0 {
        return Ok(trajectory);
    }
    let n = step_count(s1 - s0, opts.step);
    let h = (s1 - s0) / n as f64;
    trajectory.s_values.reserve(n);
    trajectory.states.reserve(n);

    let mut rk = Rk4::new(packet, threshold);
    let mut y = initial.to_flat();
    let mut next = vec![0.0; y.len()];
    let mut half = vec![0.0; y.len()];
    let mut halved = vec![0.0; y.len()];
    for i in 1..=n {
        let s = if i == n { s1 } else { s0 + h * i as f64 };
        match rk.advance(&y, h, &mut next) {
            Ok(()) => {}
            Err(StepError::Node) => {
                trajectory.status = TrajectoryStatus::HaltedAtNode;
                return Ok(trajectory);
            }
            Err(StepError::Other(e)) => return Err(e),
        }
        if next.iter().any(|c| !c.is_finite()) {
            return Err(Error::NumericalBlowup { s });
        }
        if opts.monitor_interval > 0 && i % opts.monitor_interval == 0 {
            let halving = rk
                .step(&y, 0.5 * h, &mut half)
                .and_then(|_| rk.step(&half, 0.5 * h, &mut halved));
            if halving.is_ok() {
                let err = next
                    .iter()
                    .zip(&halved)
                    .fold(0.0, |m, (a, b)| f64::max(m, libm::fabs(a - b)))
                    / 15.0;
                if err > opts.monitor_tolerance {
                    log::warn!("step-halving error estimate {err:e} at s = {s} exceeds tolerance");
                }
                trajectory.max_error_estimate = trajectory.max_error_estimate.max(err);
            }
        }
        core::mem::swap(&mut y, &mut next);
        let state = Configuration::from_flat(&y);
        let outside = opts.domain.as_ref().is_some_and(|d| !d.contains(&state));
        trajectory.s_values.push(s);
        trajectory.states.push(state);
        if outside {
            trajectory.status = TrajectoryStatus::HaltedOutOfDomain;
            return Ok(trajectory);
        }
    }
    Ok(trajectory)
}

/// Flow map `Phi_{delta_s}(q)` without recording intermediate states.
/// Negative `delta_s` integrates backwards. Returns `Ok(None)` when the path
/// runs into a node.
pub fn flow_map(
    packet: &WavePacket,
    q: &Configuration,
    delta_s: f64,
    opts: &IntegrationOptions,
) -> Result<Option<Configuration>> {
    check_step(opts.step)?;
    let threshold = opts.threshold(packet);
    check_initial(packet, q, threshold)?;
    if delta_s == 0.0 {
        return Ok(Some(q.clone()));
    }
    let n = step_count(delta_s, opts.step);
    let h = delta_s / n as f64;
    let mut rk = Rk4::new(packet, threshold);
    let mut y = q.to_flat();
    let mut next = vec![0.0; y.len()];
    for _ in 0..n {
        match rk.advance(&y, h, &mut next) {
            Ok(()) => {}
            Err(StepError::Node) => return Ok(None),
            Err(StepError::Other(e)) => return Err(e),
        }
        core::mem::swap(&mut y, &mut next);
    }
    if y.iter().any(|c| !c.is_finite()) {
        return Err(Error::NumericalBlowup { s: delta_s });
    }
    Ok(Some(Configuration::from_flat(&y)))
}
