use ndarray::{Array2, Axis};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{fft_axis, par_map};
use crate::wigner::WignerField;

/// Largest stable explicit step on the field's own grid:
/// `min(0.5·dx·m/max|p|, 0.25·dp²/D)`.
pub fn fd_stability_limit(w: &WignerField) -> f64 {
    fd_stability_limit_refined(w, 1)
}

/// Stability limit when x is resolved `refine` times more finely than the field.
pub fn fd_stability_limit_refined(w: &WignerField, refine: usize) -> f64 {
    let n = w.x_grid().len();
    let params = w.params();
    let p_max = w.p(0).abs().max(w.p(n - 1).abs());
    let advect = 0.5 * w.dx() / refine.max(1) as f64 * params.mass() / p_max;
    let diffuse = 0.25 * w.dp() * w.dp() / params.diffusion();
    advect.min(diffuse)
}

/// Explicit finite-volume solution of `∂W/∂t = −(p/m)∂W/∂x + (D/2)∂²W/∂p²`.
///
/// First-order upwind fluxes in x (periodic), second-order central diffusion in
/// p with zero-flux walls, forward Euler in time. The step is shrunk to
/// `t / ceil(t/dt)` so the final time is hit exactly.
pub fn evolve_fd(w0: &WignerField, t: f64, dt: f64) -> Result<WignerField> {
    evolve_fd_refined(w0, t, dt, 1)
}

/// [`evolve_fd`] on an x grid `refine` times finer than the field's.
///
/// The initial field is band-limited interpolated onto the fine grid (spectral
/// zero padding), stepped with the same scheme, and sampled back at the
/// original points. The momentum grid is unchanged.
pub fn evolve_fd_refined(w0: &WignerField, t: f64, dt: f64, refine: usize) -> Result<WignerField> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if refine == 0 || !refine.is_power_of_two() {
        return Err(Error::InvalidGrid(format!("refinement {refine} must be a power of two")));
    }
    let limit = fd_stability_limit_refined(w0, refine);
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::Stability { dt, limit });
    }
    let steps = (t / dt).ceil() as usize;
    if steps == 0 {
        return Ok(w0.clone());
    }
    let h = t / steps as f64;
    let np = w0.x_grid().len();
    let nx = np * refine;
    let dx = w0.dx() / refine as f64;
    let m = w0.params().mass();
    let courant: Vec<f64> = (0..np).map(|k| w0.p(k) / m * h / dx).collect();
    let nu = 0.5 * w0.params().diffusion() * h / (w0.dp() * w0.dp());

    let mut cur = upsample_x(w0.values(), refine);
    for _ in 0..steps {
        let rows = par_map(nx, |i| {
            let im = (i + nx - 1) % nx;
            let ip = (i + 1) % nx;
            (0..np)
                .map(|k| {
                    let c = courant[k];
                    let w = cur[(i, k)];
                    let advect = if c > 0.0 { c * (w - cur[(im, k)]) } else { c * (cur[(ip, k)] - w) };
                    let below = if k > 0 { cur[(i, k - 1)] } else { w };
                    let above = if k + 1 < np { cur[(i, k + 1)] } else { w };
                    w - advect + nu * (above - 2.0 * w + below)
                })
                .collect::<Vec<f64>>()
        });
        cur = Array2::from_shape_vec((nx, np), rows.into_iter().flatten().collect())
            .expect("row lengths match the grid");
    }
    let coarse = Array2::from_shape_fn((np, np), |(i, k)| cur[(i * refine, k)]);
    Ok(w0.with_values(coarse))
}

/// Trigonometric interpolation along x onto a grid `refine` times finer.
fn upsample_x(values: &Array2<f64>, refine: usize) -> Array2<f64> {
    if refine == 1 {
        return values.clone();
    }
    let (n, np) = values.dim();
    let nx = n * refine;
    let mut spec = values.mapv(|v| Complex64::new(v, 0.0));
    fft_axis(&mut spec, Axis(0), false);
    let mut padded = Array2::<Complex64>::zeros((nx, np));
    for k in 0..np {
        for j in 0..n / 2 {
            padded[(j, k)] = spec[(j, k)];
            padded[(nx - n / 2 + j, k)] = spec[(n / 2 + j, k)];
        }
        // split the Nyquist bin between ±n/2 to keep the interpolant real
        let nyq = spec[(n / 2, k)] * 0.5;
        padded[(n / 2, k)] = nyq;
        padded[(nx - n / 2, k)] = nyq;
    }
    fft_axis(&mut padded, Axis(0), true);
    let scale = 1.0 / n as f64;
    padded.mapv(|z| z.re * scale)
}
