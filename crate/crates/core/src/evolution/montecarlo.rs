use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::evolution::trotter::{check_step, KineticPropagator};
use crate::numeric::{par_map, plan};
use crate::params::PhysicalParams;
use crate::states::{DensityMatrix, WaveFunction};

const MIN_SAMPLES: usize = 100;
/// Trajectories summed sequentially per block; blocks are then summed in order,
/// so the result does not depend on the thread count.
const BLOCK: usize = 256;

/// One realization of Schrödinger evolution under the random potential `F(t)·x`,
/// with `F` constant over each step and of variance `D/h`.
///
/// Trajectory `index` draws from stream `index` of a ChaCha8 generator keyed by
/// `seed`, so any trajectory can be regenerated on its own.
pub fn simulate_trajectory(
    psi0: &WaveFunction,
    t: f64,
    dt: f64,
    params: &PhysicalParams,
    seed: u64,
    index: u64,
) -> Result<WaveFunction> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    check_step(dt, params)?;
    let steps = (t / dt).ceil() as usize;
    let grid = *psi0.grid();
    let mut psi = psi0.amplitudes().to_vec();
    if steps == 0 {
        return Ok(WaveFunction::from_evolution(grid, psi));
    }
    let h = t / steps as f64;
    let kinetic = KineticPropagator::new(&grid, params, h);
    let (fwd, inv) = (plan(grid.len(), false), plan(grid.len(), true));
    let kick_scale = (params.diffusion() * h).sqrt() / params.hbar();
    let xs = grid.points();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    for _ in 0..steps {
        let xi: f64 = StandardNormal.sample(&mut rng);
        let k = kick_scale * xi;
        for (z, &x) in psi.iter_mut().zip(&xs) {
            *z *= Complex64::from_polar(1.0, -k * x);
        }
        kinetic.apply(&mut psi, fwd.as_ref(), inv.as_ref());
    }
    Ok(WaveFunction::from_evolution(grid, psi))
}

/// Trajectories `0..n_samples` of [`simulate_trajectory`], in index order.
pub fn trajectory_ensemble(
    psi0: &WaveFunction,
    t: f64,
    dt: f64,
    params: &PhysicalParams,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<WaveFunction>> {
    par_map(n_samples, |k| simulate_trajectory(psi0, t, dt, params, seed, k as u64)).into_iter().collect()
}

/// Ensemble average `(1/N) Σ |ψ_k(t)⟩⟨ψ_k(t)|`.
pub fn evolve_montecarlo(
    psi0: &WaveFunction,
    t: f64,
    dt: f64,
    params: &PhysicalParams,
    n_samples: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::InvalidParams(format!("n_samples = {n_samples} < {MIN_SAMPLES}")));
    }
    check_step(dt, params)?;
    let grid = *psi0.grid();
    let n = grid.len();
    let blocks = n_samples.div_ceil(BLOCK);
    let partial: Vec<Result<Array2<Complex64>>> = par_map(blocks, |b| {
        let mut acc = Array2::<Complex64>::zeros((n, n));
        for k in b * BLOCK..((b + 1) * BLOCK).min(n_samples) {
            let psi = simulate_trajectory(psi0, t, dt, params, seed, k as u64)?;
            let a = psi.amplitudes();
            for ((i, j), z) in acc.indexed_iter_mut() {
                *z += a[i] * a[j].conj();
            }
        }
        Ok(acc)
    });
    let mut total = Array2::<Complex64>::zeros((n, n));
    for block in partial {
        total += &block?;
    }
    total.mapv_inplace(|z| z / n_samples as f64);
    DensityMatrix::from_entries(grid, total)
}
