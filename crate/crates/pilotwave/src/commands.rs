//! Subcommand implementations. Each returns the exit status on success so
//! that `check` can report failures without an error value.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use pilotwave_core::bohmian::{integrate_trajectory, IntegrationOptions, Trajectory};
use pilotwave_core::probability::{check_acceptance, sample_one, SpacetimeBox};
use pilotwave_core::transition::{rate_integral, rate_profile};
use pilotwave_core::{Configuration, Error as CoreError, WavePacket};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{CliError, CliResult, Exit};
use crate::files::{configuration_columns, parse_box, parse_configurations, parse_packet, InputFile};
use crate::output::{write_table, Cell, Format, Meta, Sink, Table};
use crate::suite::{run_suite, CheckResult, CheckSettings, Suite};

/// Options shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub step: f64,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            step: 1e-3,
            format: None,
            output: None,
        }
    }
}

impl RunConfig {
    fn check_step(&self) -> CliResult<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(CliError::parse(format!("--step must be positive, got {}", self.step)));
        }
        Ok(())
    }
}

/// A packet file, parsed, with its raw input kept for digests.
pub struct Loaded {
    pub file: InputFile,
    pub packet: WavePacket,
}

pub fn load_packet(path: &Path) -> CliResult<Loaded> {
    let file = InputFile::read(path)?;
    let packet = parse_packet(&file)?;
    Ok(Loaded { file, packet })
}

pub fn load_box(path: &Path, n_particles: usize) -> CliResult<(InputFile, SpacetimeBox)> {
    let file = InputFile::read(path)?;
    let bx = parse_box(&file, n_particles)?;
    Ok((file, bx))
}

fn inputs<'a>(packet: &'a Loaded, others: &[&'a InputFile]) -> Vec<&'a InputFile> {
    let mut v = vec![&packet.file];
    v.extend_from_slice(others);
    v
}

pub fn validate(cfg: &RunConfig, packet_path: &Path, box_path: Option<&Path>) -> CliResult<Exit> {
    let loaded = load_packet(packet_path)?;
    let w = &loaded.packet;
    let boxed = box_path.map(|p| load_box(p, w.n_particles())).transpose()?;
    let energies: Vec<Vec<f64>> = (0..w.n_modes())
        .map(|k| (0..w.n_particles()).map(|a| w.momentum(k, a).t).collect())
        .collect();
    let mut sink = Sink::open(cfg.output.as_deref())?;
    let result = match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let mut inputs = vec![&loaded.file];
            if let Some((f, _)) = &boxed {
                inputs.push(f);
            }
            let doc = json!({
                "meta": Meta::new(cfg.seed, &inputs).to_json(),
                "particles": w.n_particles(),
                "modes": w.n_modes(),
                "masses": w.masses(),
                "energies": energies,
                "amplitude_sum": w.amplitude_sum(),
                "box_volume": boxed.as_ref().map(|(_, b)| b.volume()),
            });
            serde_json::to_writer_pretty(sink.writer(), &doc)
                .map_err(std::io::Error::from)
                .and_then(|_| writeln!(sink.writer()))
        }
        Format::Csv => (|| {
            let out = sink.writer();
            writeln!(out, "particles: {}", w.n_particles())?;
            writeln!(out, "modes: {}", w.n_modes())?;
            writeln!(out, "masses: {:?}", w.masses())?;
            for (k, e) in energies.iter().enumerate() {
                writeln!(out, "mode {k}: amplitude {} E_k = {:?}", w.amplitude(k), e)?;
            }
            writeln!(out, "amplitude sum: {}", w.amplitude_sum())?;
            if let Some((_, b)) = &boxed {
                writeln!(out, "box volume: {}", b.volume())?;
            }
            Ok(())
        })(),
    };
    sink.finish(result)?;
    Ok(Exit::Success)
}

/// Samples `count` configurations in parallel; sample `i` uses stream `i`,
/// so the result does not depend on the thread count.
pub fn sample_parallel(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    count: usize,
    seed: u64,
) -> CliResult<(Vec<Configuration>, u64)> {
    let draws: Vec<(Configuration, u64)> = (0..count as u64)
        .into_par_iter()
        .map(|i| sample_one(packet, bx, seed, i))
        .collect::<Result<_, _>>()?;
    let proposals = draws.iter().map(|d| d.1).sum();
    check_acceptance(count, proposals)?;
    Ok((draws.into_iter().map(|d| d.0).collect(), proposals))
}

pub fn ensemble(cfg: &RunConfig, packet_path: &Path, box_path: &Path, count: usize) -> CliResult<Exit> {
    let loaded = load_packet(packet_path)?;
    let (box_file, bx) = load_box(box_path, loaded.packet.n_particles())?;
    let (configs, proposals) = if count == 0 {
        (Vec::new(), 0)
    } else {
        sample_parallel(&loaded.packet, &bx, count, cfg.seed)?
    };
    let mut table = Table::new(configuration_columns(bx.n_particles()));
    for q in &configs {
        table.push(q.to_flat().into_iter().map(Cell::Real).collect());
    }
    let meta = Meta::new(cfg.seed, &inputs(&loaded, &[&box_file]))
        .with("proposals", proposals)
        .with("accepted", count);
    let mut sink = Sink::open(cfg.output.as_deref())?;
    let result = write_table(sink.writer(), &meta, &table, cfg.format.unwrap_or(Format::Csv));
    sink.finish(result)?;
    if proposals > 0 {
        eprintln!("sampled {count} configurations from {proposals} proposals (acceptance {})", count as f64 / proposals as f64);
    }
    Ok(Exit::Success)
}

/// Where trajectory initial conditions come from.
pub enum Initial<'a> {
    File(&'a Path),
    Sampled { box_path: &'a Path },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Layout {
    /// One file with a leading `trajectory_id` column.
    Long,
    /// One file per trajectory inside the `--output` directory.
    PerFile,
}

pub struct TrajectoryRequest<'a> {
    pub packet_path: &'a Path,
    pub initial: Initial<'a>,
    pub count: usize,
    pub s_span: (f64, f64),
    pub layout: Layout,
    /// Keep every `every`-th step; the final state is always kept.
    pub every: usize,
    /// Halt trajectories leaving the box (requires a box).
    pub confine: Option<&'a Path>,
}

enum Outcome {
    Ran(Trajectory),
    InitialNode,
}

fn trajectory_table(n: usize, long: bool) -> Table {
    let mut cols = Vec::new();
    if long {
        cols.push("trajectory_id".to_string());
    }
    cols.push("s".to_string());
    cols.extend(configuration_columns(n));
    cols.push("status".to_string());
    Table::new(cols)
}

fn push_trajectory(table: &mut Table, id: Option<usize>, traj: &Trajectory, every: usize) {
    let last = traj.states.len() - 1;
    for (i, (s, q)) in traj.s_values.iter().zip(&traj.states).enumerate() {
        if i % every != 0 && i != last {
            continue;
        }
        let mut row = Vec::with_capacity(table.columns.len());
        if let Some(id) = id {
            row.push(Cell::Int(id as u64));
        }
        row.push(Cell::Real(*s));
        row.extend(q.to_flat().into_iter().map(Cell::Real));
        let status = if i == last { traj.status.as_str() } else { "running" };
        row.push(Cell::Text(status.to_string()));
        table.push(row);
    }
}

pub fn trajectories(cfg: &RunConfig, req: &TrajectoryRequest) -> CliResult<Exit> {
    cfg.check_step()?;
    if req.every == 0 {
        return Err(CliError::parse("--every must be at least 1"));
    }
    let (s0, s1) = req.s_span;
    if !(s1 >= s0) || !s0.is_finite() || !s1.is_finite() {
        return Err(CliError::parse(format!("--s-span must be ordered, got [{s0}, {s1}]")));
    }
    let loaded = load_packet(req.packet_path)?;
    let w = &loaded.packet;
    let n = w.n_particles();
    let mut extra_inputs = Vec::new();
    let initials: Vec<Configuration> = match req.initial {
        Initial::File(path) => {
            let f = InputFile::read(path)?;
            let mut qs = parse_configurations(&f, n)?;
            extra_inputs.push(f);
            if qs.len() < req.count {
                return Err(CliError::parse(format!(
                    "{}: {} configurations requested, file has {}",
                    path.display(),
                    req.count,
                    qs.len()
                )));
            }
            qs.truncate(req.count);
            qs
        }
        Initial::Sampled { box_path } => {
            let (f, bx) = load_box(box_path, n)?;
            extra_inputs.push(f);
            if req.count == 0 {
                Vec::new()
            } else {
                sample_parallel(w, &bx, req.count, cfg.seed)?.0
            }
        }
    };
    let domain = match req.confine {
        Some(p) => {
            let (f, bx) = load_box(p, n)?;
            if !extra_inputs.iter().any(|e| e.sha256 == f.sha256 && e.path == f.path) {
                extra_inputs.push(f);
            }
            Some(bx)
        }
        None => None,
    };
    let opts = IntegrationOptions {
        step: cfg.step,
        domain,
        ..Default::default()
    };
    let outcomes: Vec<Outcome> = initials
        .par_iter()
        .map(|q| match integrate_trajectory(w, q, req.s_span, &opts) {
            Ok(t) => Ok(Outcome::Ran(t)),
            Err(CoreError::Node { .. }) => Ok(Outcome::InitialNode),
            Err(e) => Err(CliError::from(e)),
        })
        .collect::<CliResult<_>>()?;

    let refs: Vec<&InputFile> = extra_inputs.iter().collect();
    let meta = Meta::new(cfg.seed, &inputs(&loaded, &refs))
        .with("step", cfg.step)
        .with("s_span", format!("{s0},{s1}"));
    let format = cfg.format.unwrap_or(Format::Csv);
    match req.layout {
        Layout::Long => {
            let mut table = trajectory_table(n, true);
            for (id, o) in outcomes.iter().enumerate() {
                if let Outcome::Ran(t) = o {
                    push_trajectory(&mut table, Some(id), t, req.every);
                }
            }
            let mut sink = Sink::open(cfg.output.as_deref())?;
            let result = write_table(sink.writer(), &meta, &table, format);
            sink.finish(result)?;
        }
        Layout::PerFile => {
            let dir = cfg
                .output
                .as_deref()
                .ok_or_else(|| CliError::parse("--layout per-file needs --output DIR"))?;
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            let ext = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            for (id, o) in outcomes.iter().enumerate() {
                if let Outcome::Ran(t) = o {
                    let mut table = trajectory_table(n, false);
                    push_trajectory(&mut table, None, t, req.every);
                    let path = dir.join(format!("trajectory_{id:06}.{ext}"));
                    let mut sink = Sink::open(Some(&path))?;
                    let result = write_table(sink.writer(), &meta.clone().with("trajectory_id", id), &table, format);
                    sink.finish(result)?;
                }
            }
        }
    }

    let count = |f: &dyn Fn(&Outcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
    let at_node = count(&|o| matches!(o, Outcome::InitialNode));
    let by_status = |s: &str| count(&|o| matches!(o, Outcome::Ran(t) if t.status.as_str() == s));
    eprintln!(
        "trajectories: {} completed, {} halted-at-node, {} halted-out-of-domain, {} skipped (initial node)",
        by_status("completed"),
        by_status("halted-at-node"),
        by_status("halted-out-of-domain"),
        at_node
    );
    if !outcomes.is_empty() && at_node == outcomes.len() {
        return Err(CliError::degenerate("every initial configuration lies on a node"));
    }
    Ok(Exit::Success)
}

/// Builds the check report document.
pub fn check_report(meta: &Meta, suite: Suite, results: &[CheckResult]) -> serde_json::Value {
    let suite = format!("{suite:?}").to_lowercase();
    json!({
        "meta": meta.to_json(),
        "suite": suite,
        "passed": results.iter().all(|r| r.passed),
        "checks": results,
    })
}

/// Runs a suite on an already built packet; the exit status is
/// [`Exit::CheckFailed`] when any check fails.
pub fn check_packet(
    packet: &WavePacket,
    bx: &SpacetimeBox,
    suite: Suite,
    settings: &CheckSettings,
    meta: &Meta,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<Exit> {
    let results = run_suite(packet, bx, suite, settings)?;
    let written = match format {
        Format::Json => serde_json::to_writer_pretty(&mut *out, &check_report(meta, suite, &results))
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(out)),
        Format::Csv => {
            let mut table = Table::new(["name", "measured", "tolerance", "passed"].map(String::from).to_vec());
            for r in &results {
                table.push(vec![
                    Cell::Text(r.name.clone()),
                    Cell::Real(r.measured),
                    r.tolerance.map_or(Cell::Text(String::new()), Cell::Real),
                    Cell::Text(r.passed.to_string()),
                ]);
            }
            write_table(out, meta, &table, Format::Csv)
        }
    };
    written.map_err(|e| CliError::parse(format!("writing report: {e}")))?;
    for r in results.iter().filter(|r| !r.passed) {
        eprintln!("FAIL {}: measured {} tolerance {:?}", r.name, r.measured, r.tolerance);
    }
    Ok(if results.iter().all(|r| r.passed) {
        Exit::Success
    } else {
        Exit::CheckFailed
    })
}

pub fn check(
    cfg: &RunConfig,
    packet_path: &Path,
    box_path: &Path,
    suite: Suite,
    settings: CheckSettings,
) -> CliResult<Exit> {
    cfg.check_step()?;
    let loaded = load_packet(packet_path)?;
    let (box_file, bx) = load_box(box_path, loaded.packet.n_particles())?;
    let settings = CheckSettings {
        seed: cfg.seed,
        step: cfg.step,
        ..settings
    };
    let meta = Meta::new(cfg.seed, &inputs(&loaded, &[&box_file]));
    let mut sink = Sink::open(cfg.output.as_deref())?;
    let format = cfg.format.unwrap_or(Format::Json);
    let exit = check_packet(&loaded.packet, &bx, suite, &settings, &meta, format, sink.writer());
    sink.finish(Ok(()))?;
    exit
}

pub fn rate(cfg: &RunConfig, cutoff: f64, halfwidth: f64, points: usize) -> CliResult<Exit> {
    let profile = rate_profile(cutoff, halfwidth, points)?;
    let integral = rate_integral(cutoff, halfwidth, 8)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut table = Table::new(vec!["delta_E".into(), "rate".into()]);
    for (de, r) in profile.delta_e.iter().zip(&profile.rate) {
        table.push(vec![Cell::Real(*de), Cell::Real(*r)]);
    }
    let meta = Meta::new(cfg.seed, &[])
        .with("T", cutoff)
        .with("halfwidth", halfwidth)
        .with("integral", integral);
    let mut sink = Sink::open(cfg.output.as_deref())?;
    let result = write_table(sink.writer(), &meta, &table, cfg.format.unwrap_or(Format::Csv));
    sink.finish(result)?;
    eprintln!(
        "integral of rate over [-{halfwidth}, {halfwidth}]: {integral} (2 pi = {two_pi}, relative deviation {})",
        (integral - two_pi) / two_pi
    );
    Ok(Exit::Success)
}
