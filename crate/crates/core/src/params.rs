use crate::error::{Error, Result};

/// Reduced Planck constant, particle mass and decoherence strength `D`.
///
/// `D` has units of momentum² per time: the environment acts like a white-noise
/// force of intensity `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    hbar: f64,
    mass: f64,
    diffusion: f64,
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, diffusion: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("D", diffusion)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} = {v} must be finite and > 0")));
            }
        }
        Ok(Self { hbar, mass, diffusion })
    }

    /// ħ = m = D = 1, where t₀ = σ₀ = 1.
    pub fn natural() -> Self {
        Self { hbar: 1.0, mass: 1.0, diffusion: 1.0 }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::natural()
    }
}
