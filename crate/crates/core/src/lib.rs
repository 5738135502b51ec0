//! Relativistic pilot-wave engine.
//!
//! Wave functions are finite superpositions of positive-energy Klein-Gordon
//! plane waves with one spacetime argument per particle (many-time form), so
//! every derivative used by the guidance law is exact. On top of that sit the
//! spacetime probability law `dP = |psi|^2 d^4x_1 ... d^4x_n` with its
//! fixed-time conditional reductions, covariant Bohmian trajectories in a
//! scalar parameter `s`, and the finite-cutoff transition-rate kernel.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, reports and
//! the command-line tool live in the `pilotwave` crate.

#![no_std]
// `!(x > 0.0)` guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bohmian;
mod error;
pub mod fixtures;
pub mod probability;
pub mod quadrature;
pub mod rng;
pub mod spacetime;
pub mod stats;
pub mod transition;
pub mod wavepacket;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spacetime::{Axis, FourVector};
pub use wavepacket::{Configuration, PlaneWaveMode, WavePacket};
