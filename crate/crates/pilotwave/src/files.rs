//! Packet and box definition files (TOML) and the configuration CSV used for
//! trajectory initial conditions.
//!
//! Packet file:
//!
//! ```toml
//! particles = 1
//! masses = [1.0]
//!
//! [[modes]]
//! amplitude_re = 1.0
//! amplitude_im = 0.0
//! momenta = [[0.0, 0.0, 0.0]]   # one 3-vector per particle
//! ```
//!
//! Energies are never stored; they are derived on shell when the packet is
//! built. Box file:
//!
//! ```toml
//! [[particle]]
//! t_range = [0.0, 6.0]
//! x_range = [-3.0, 3.0]   # y_range, z_range optional; missing axes are pinned to 0
//! ```
//!
//! A box with a single `[[particle]]` entry is replicated for every particle.

use std::fs;
use std::path::{Path, PathBuf};

use pilotwave_core::probability::{Interval, ParticleBox, SpacetimeBox};
use pilotwave_core::spacetime::FourVector;
use pilotwave_core::{Complex64, Configuration, Error as CoreError, PlaneWaveMode, WavePacket};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use toml::Spanned;

use crate::error::{CliError, CliResult};

/// Raw bytes of an input file plus its digest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputFile {
    pub path: PathBuf,
    pub text: String,
    pub sha256: String,
}

impl InputFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        let sha256 = hex::encode(Sha256::digest(&bytes));
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::parse(format!("{}: not valid UTF-8", path.display())))?;
        Ok(InputFile {
            path: path.to_path_buf(),
            text,
            sha256,
        })
    }

    fn line_of(&self, offset: usize) -> usize {
        1 + self.text[..offset.min(self.text.len())]
            .bytes()
            .filter(|&b| b == b'\n')
            .count()
    }

    fn at(&self, offset: usize, message: impl std::fmt::Display) -> String {
        format!("{}:{}: {message}", self.path.display(), self.line_of(offset))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PacketDoc {
    particles: Spanned<usize>,
    masses: Spanned<Vec<f64>>,
    modes: Spanned<Vec<Spanned<ModeDoc>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeDoc {
    amplitude_re: f64,
    #[serde(default)]
    amplitude_im: f64,
    momenta: Vec<[f64; 3]>,
}

/// Parses a packet file. Malformed or inconsistently shaped documents are
/// parse errors; physically invalid values (non-positive mass, non-finite
/// numbers) are invariant errors.
pub fn parse_packet(file: &InputFile) -> CliResult<WavePacket> {
    let doc: PacketDoc = toml::from_str(&file.text)
        .map_err(|e| CliError::parse(format!("{}: {e}", file.path.display())))?;
    let n = *doc.particles.get_ref();
    if doc.masses.get_ref().len() != n {
        return Err(CliError::parse(file.at(
            doc.masses.span().start,
            format!("masses: expected {n} entries, found {}", doc.masses.get_ref().len()),
        )));
    }
    for (k, mode) in doc.modes.get_ref().iter().enumerate() {
        let found = mode.get_ref().momenta.len();
        if found != n {
            return Err(CliError::parse(file.at(
                mode.span().start,
                format!("modes[{k}].momenta: expected {n} vectors, found {found}"),
            )));
        }
    }
    let modes = doc
        .modes
        .get_ref()
        .iter()
        .map(|m| {
            let m = m.get_ref();
            PlaneWaveMode::new(Complex64::new(m.amplitude_re, m.amplitude_im), m.momenta.clone())
        })
        .collect();
    WavePacket::new(doc.masses.get_ref().clone(), modes).map_err(|e| {
        let offset = match &e {
            CoreError::InvalidParameter { field, .. } => field_offset(&doc, field),
            _ => 0,
        };
        CliError::invariant(file.at(offset, e))
    })
}

fn field_offset(doc: &PacketDoc, field: &str) -> usize {
    if field.starts_with("masses") {
        return doc.masses.span().start;
    }
    if field.starts_with("particles") {
        return doc.particles.span().start;
    }
    if let Some(rest) = field.strip_prefix("modes[") {
        if let Some(k) = rest.split(']').next().and_then(|k| k.parse::<usize>().ok()) {
            if let Some(mode) = doc.modes.get_ref().get(k) {
                return mode.span().start;
            }
        }
    }
    doc.modes.span().start
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxDoc {
    particle: Vec<Spanned<ParticleDoc>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParticleDoc {
    t_range: [f64; 2],
    x_range: Option<[f64; 2]>,
    y_range: Option<[f64; 2]>,
    z_range: Option<[f64; 2]>,
}

/// Parses a box file for a packet with `n_particles` particles.
pub fn parse_box(file: &InputFile, n_particles: usize) -> CliResult<SpacetimeBox> {
    let doc: BoxDoc = toml::from_str(&file.text)
        .map_err(|e| CliError::parse(format!("{}: {e}", file.path.display())))?;
    let mut particles = Vec::with_capacity(doc.particle.len());
    for (a, entry) in doc.particle.iter().enumerate() {
        let p = entry.get_ref();
        let interval = |name: &str, r: [f64; 2]| {
            Interval::new(r[0], r[1]).map_err(|e| {
                CliError::invariant(file.at(entry.span().start, format!("particle[{a}].{name}: {e}")))
            })
        };
        let opt = |name: &str, r: Option<[f64; 2]>| r.map(|r| interval(name, r)).transpose();
        particles.push(ParticleBox::new(
            interval("t_range", p.t_range)?,
            opt("x_range", p.x_range)?,
            opt("y_range", p.y_range)?,
            opt("z_range", p.z_range)?,
        ));
    }
    let bx = match particles.len() {
        0 => return Err(CliError::parse(format!("{}: no [[particle]] entries", file.path.display()))),
        1 => SpacetimeBox::replicated(n_particles, particles[0]),
        m if m == n_particles => SpacetimeBox::new(particles),
        m => {
            return Err(CliError::invariant(format!(
                "{}: box has {m} particles, packet has {n_particles}",
                file.path.display()
            )))
        }
    };
    bx.map_err(|e| CliError::invariant(format!("{}: {e}", file.path.display())))
}

/// Column names of the wide configuration layout: `t1,x1,y1,z1,...`.
pub fn configuration_columns(n: usize) -> Vec<String> {
    (1..=n)
        .flat_map(|a| ["t", "x", "y", "z"].map(|c| format!("{c}{a}")))
        .collect()
}

/// Reads configurations in the wide layout written by `ensemble`. Lines
/// starting with `#` are ignored; the header row must match
/// [`configuration_columns`].
pub fn parse_configurations(file: &InputFile, n_particles: usize) -> CliResult<Vec<Configuration>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file.text.as_bytes());
    let err = |line: u64, msg: String| CliError::parse(format!("{}:{line}: {msg}", file.path.display()));
    let expected = configuration_columns(n_particles);
    let header = reader.headers().map_err(|e| err(1, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(err(
            header.position().map_or(1, |p| p.line()),
            format!("expected header {}", expected.join(",")),
        ));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let values = record
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| err(line, format!("{}: not a finite number: {v:?}", expected[i])))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        out.push(Configuration::new(
            values
                .chunks(4)
                .map(|c| FourVector::from_components([c[0], c[1], c[2], c[3]]))
                .collect(),
        ));
    }
    Ok(out)
}
