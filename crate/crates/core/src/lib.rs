//! Wigner quasi-probability functions of one-dimensional quantum states and
//! their evolution under position decoherence.
//!
//! The crate builds states on a periodic position grid ([`states`]), maps
//! density matrices to phase space ([`wigner`]), coarse-grains phase-space
//! fields with Gaussian kernels ([`smoothing`]) and evolves them with several
//! independent engines ([`evolution`]). [`export`] writes CSV tables and PGM
//! heatmaps.

pub mod error;
pub mod evolution;
pub mod export;
pub mod grid;
pub mod numeric;
pub mod params;
pub mod smoothing;
pub mod states;
pub mod wigner;

pub use error::{Error, Result};
pub use grid::PositionGrid;
pub use params::PhysicalParams;
pub use smoothing::CovarianceMatrix2;
pub use states::{DensityMatrix, WaveFunction};
pub use wigner::{PositivityReport, WignerField};
