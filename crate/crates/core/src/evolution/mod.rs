//! Free-particle evolution under position decoherence,
//! `dρ/dt = −(i/ħ)[p̂²/2m, ρ] − (D/2ħ²)[x̂, [x̂, ρ]]`.
//!
//! Three engines: the closed-form phase-space propagator ([`evolve_exact`]),
//! an explicit Fokker–Planck grid solver ([`evolve_fd`]) and a split-operator
//! density-matrix integrator ([`evolve_density_trotter`]). A stochastic
//! wavefunction engine ([`evolve_montecarlo`]) unravels the same dynamics as an
//! average over random linear potentials.

mod exact;
mod fd;
mod montecarlo;
mod scan;
mod trotter;

pub use exact::{evolve_exact, propagator_covariance, PropagatorCovariance};
pub use fd::{evolve_fd, evolve_fd_refined, fd_stability_limit, fd_stability_limit_refined};
pub use montecarlo::{evolve_montecarlo, simulate_trajectory, trajectory_ensemble};
pub use scan::{decoherence_scan, ScanPoint, ScanResult};
pub use trotter::{evolve_density_trotter, evolve_density_trotter_with, Splitting};

use crate::params::PhysicalParams;

/// Characteristic scales of the decoherence dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceScales {
    /// Stationary coherence width `(ħ³/(D·m))^{1/4}`.
    pub sigma0: f64,
    /// Characteristic decoherence time `√(ħ·m/D)`.
    pub t0: f64,
    /// Time after which every Wigner function is non-negative, `3^{1/4}·t₀`.
    pub t_d: f64,
}

pub fn scales(params: &PhysicalParams) -> DecoherenceScales {
    let (hbar, m, d) = (params.hbar(), params.mass(), params.diffusion());
    let t0 = (hbar * m / d).sqrt();
    DecoherenceScales { sigma0: (hbar.powi(3) / (d * m)).powf(0.25), t0, t_d: 3f64.powf(0.25) * t0 }
}
