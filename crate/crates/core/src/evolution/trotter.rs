use ndarray::{Array2, Axis};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::scales;
use crate::grid::PositionGrid;
use crate::numeric::{for_each_lane, plan};
use crate::params::PhysicalParams;
use crate::states::DensityMatrix;

/// Which generators take part in [`evolve_density_trotter_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Splitting {
    pub kinetic: bool,
    pub decoherence: bool,
}

impl Default for Splitting {
    fn default() -> Self {
        Self { kinetic: true, decoherence: true }
    }
}

pub(crate) fn check_step(dt: f64, params: &PhysicalParams) -> Result<()> {
    let limit = scales(params).t0 / 200.0;
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::StepSize { dt, limit });
    }
    Ok(())
}

/// Strang-split integration of the master equation on ρ(x, x').
///
/// The kinetic factor `exp(−i(p² − p'²)h/2mħ)` is applied exactly in the
/// momentum representation and the decoherence factor
/// `exp(−D(x − x')²h/2ħ²)` exactly in position, so the only error is the
/// splitting error of the pair.
pub fn evolve_density_trotter(rho0: &DensityMatrix, t: f64, dt: f64, params: &PhysicalParams) -> Result<DensityMatrix> {
    evolve_density_trotter_with(rho0, t, dt, params, Splitting::default())
}

pub fn evolve_density_trotter_with(
    rho0: &DensityMatrix,
    t: f64,
    dt: f64,
    params: &PhysicalParams,
    splitting: Splitting,
) -> Result<DensityMatrix> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    check_step(dt, params)?;
    let steps = (t / dt).ceil() as usize;
    if steps == 0 {
        return Ok(rho0.clone());
    }
    let h = t / steps as f64;
    let grid = *rho0.grid();
    let kinetic = KineticPropagator::new(&grid, params, h);
    let half = decoherence_factors(&grid, params, 0.5 * h);
    let full = decoherence_factors(&grid, params, h);

    let mut rho = rho0.entries().clone();
    for s in 0..steps {
        if splitting.decoherence {
            apply_decoherence(&mut rho, if s == 0 { &half } else { &full });
        }
        if splitting.kinetic {
            rho = kinetic.conjugate(&rho);
        }
    }
    if splitting.decoherence {
        apply_decoherence(&mut rho, &half);
    }
    DensityMatrix::from_entries(grid, rho)
}

/// `exp(−D·(j·dx)²·h/2ħ²)` indexed by `j = |i − i'|`.
fn decoherence_factors(grid: &PositionGrid, params: &PhysicalParams, h: f64) -> Vec<f64> {
    let rate = params.diffusion() * h / (2.0 * params.hbar() * params.hbar());
    (0..grid.len()).map(|j| (-(rate * (j as f64 * grid.dx()).powi(2))).exp()).collect()
}

fn apply_decoherence(rho: &mut Array2<Complex64>, factors: &[f64]) {
    for ((i, j), z) in rho.indexed_iter_mut() {
        *z *= factors[i.abs_diff(j)];
    }
}

/// Free propagator `U = exp(−i p̂² h / 2mħ)` on the periodic grid.
pub(crate) struct KineticPropagator {
    phases: Vec<Complex64>,
    n: usize,
}

impl KineticPropagator {
    pub(crate) fn new(grid: &PositionGrid, params: &PhysicalParams, h: f64) -> Self {
        let (hbar, m) = (params.hbar(), params.mass());
        let phases = grid
            .fft_momenta(hbar)
            .into_iter()
            .map(|p| Complex64::from_polar(1.0, -p * p * h / (2.0 * m * hbar)))
            .collect();
        Self { phases, n: grid.len() }
    }

    /// ψ ← Uψ in place.
    pub(crate) fn apply(&self, psi: &mut [Complex64], fwd: &dyn rustfft::Fft<f64>, inv: &dyn rustfft::Fft<f64>) {
        fwd.process(psi);
        let scale = 1.0 / self.n as f64;
        for (z, ph) in psi.iter_mut().zip(&self.phases) {
            *z *= ph * scale;
        }
        inv.process(psi);
    }

    /// `ρ U†` applied row by row: each row r becomes `conj(U·conj(r))`.
    fn right_multiply_adjoint(&self, rho: &mut Array2<Complex64>) {
        let fwd = plan(self.n, false);
        let inv = plan(self.n, true);
        for_each_lane(rho, Axis(1), |_, row| {
            row.iter_mut().for_each(|z| *z = z.conj());
            self.apply(row, fwd.as_ref(), inv.as_ref());
            row.iter_mut().for_each(|z| *z = z.conj());
        });
    }

    /// `U ρ U†` for Hermitian ρ, using `U ρ = (ρ U†)†`.
    fn conjugate(&self, rho: &Array2<Complex64>) -> Array2<Complex64> {
        let mut a = rho.clone();
        self.right_multiply_adjoint(&mut a);
        let mut b = a.t().mapv(|z| z.conj());
        self.right_multiply_adjoint(&mut b);
        b
    }
}
