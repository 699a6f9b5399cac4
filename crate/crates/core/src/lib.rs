//! Kuramoto phase-oscillator models and series arrays of Josephson
//! junctions reduced to generalized Kuramoto form.

pub mod analysis;
pub mod config;
pub mod distribution;
mod error;
pub mod integrator;
pub mod jj;
pub mod kuramoto;
pub mod presets;
pub mod rng;
pub mod runner;

pub use error::{Error, Result};
