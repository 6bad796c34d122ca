//! Experiment configuration. Every object rejects unknown keys.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use wigner_deco::states::{cat_state, density_from_pure, gaussian_packet, mix, oscillator_eigenstate};
use wigner_deco::{DensityMatrix, PhysicalParams, PositionGrid, WaveFunction};

use crate::CliError;

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Gaussian {
        x0: f64,
        #[serde(default)]
        p0: f64,
        sigma: f64,
    },
    Cat {
        x0: f64,
        sigma: f64,
        #[serde(default)]
        phase: f64,
    },
    Eigenstate {
        n: usize,
        sigma: f64,
    },
    Mixture {
        components: Vec<Component>,
    },
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub weight: f64,
    pub state: StateSpec,
}

impl Default for StateSpec {
    fn default() -> Self {
        StateSpec::Cat { x0: 4.0, sigma: FRAC_1_SQRT_2, phase: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub m: f64,
    #[serde(default = "one", rename = "D")]
    pub d: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ParamsSpec {
    fn default() -> Self {
        Self { hbar: 1.0, m: 1.0, d: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { x_min: -16.0, x_max: 16.0, n_points: 256 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Exact,
    Fd,
    Trotter,
    Mc,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SmoothingSpec {
    #[serde(default)]
    pub cxx: f64,
    #[serde(default)]
    pub cxp: f64,
    #[serde(default)]
    pub cpp: f64,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub state: StateSpec,
    #[serde(default)]
    pub params: ParamsSpec,
    #[serde(default)]
    pub grid: GridSpec,
    pub t: Option<f64>,
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
    pub engine: Option<Engine>,
    pub dt: Option<f64>,
    pub refine: Option<usize>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub smoothing: Option<SmoothingSpec>,
    pub husimi_scale: Option<f64>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn physical(&self) -> Result<PhysicalParams, CliError> {
        Ok(PhysicalParams::new(self.params.hbar, self.params.m, self.params.d)?)
    }

    pub fn position_grid(&self) -> Result<PositionGrid, CliError> {
        Ok(PositionGrid::new(self.grid.x_min, self.grid.x_max, self.grid.n_points)?)
    }

    pub fn density(&self) -> Result<DensityMatrix, CliError> {
        build_density(&self.state, &self.position_grid()?, &self.physical()?)
    }

    /// `None` for mixtures.
    pub fn wavefunction(&self) -> Result<Option<WaveFunction>, CliError> {
        build_pure(&self.state, &self.position_grid()?, &self.physical()?)
    }
}

fn build_pure(spec: &StateSpec, grid: &PositionGrid, params: &PhysicalParams) -> Result<Option<WaveFunction>, CliError> {
    let psi = match *spec {
        StateSpec::Gaussian { x0, p0, sigma } => gaussian_packet(grid, x0, p0, sigma, params)?,
        StateSpec::Cat { x0, sigma, phase } => cat_state(grid, x0, sigma, phase)?,
        StateSpec::Eigenstate { n, sigma } => oscillator_eigenstate(grid, n, sigma)?,
        StateSpec::Mixture { .. } => return Ok(None),
    };
    Ok(Some(psi))
}

fn build_density(spec: &StateSpec, grid: &PositionGrid, params: &PhysicalParams) -> Result<DensityMatrix, CliError> {
    if let StateSpec::Mixture { components } = spec {
        let parts = components
            .iter()
            .map(|c| Ok((c.weight, build_density(&c.state, grid, params)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        return Ok(mix(&parts)?);
    }
    let psi = build_pure(spec, grid, params)?.expect("pure spec");
    Ok(density_from_pure(&psi))
}
