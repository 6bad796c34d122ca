use std::f64::consts::PI;

use ndarray::Axis;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::signed_index;
use crate::numeric::{fft2, fft_axis};
use crate::params::PhysicalParams;
use crate::smoothing::{apply_multiplier, check_kernel_width, CovarianceMatrix2, GaussianKernel};
use crate::wigner::WignerField;

/// Covariance of the Gaussian that coarse-grains the free-streamed field at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorCovariance {
    pub time: f64,
    pub matrix: CovarianceMatrix2,
}

impl PropagatorCovariance {
    pub fn det(&self) -> f64 {
        self.matrix.det()
    }
}

/// `C_W(t) = D·t·[[t²/3m², t/2m], [t/2m, 1]]`, with determinant `D²t⁴/12m²`.
pub fn propagator_covariance(t: f64, params: &PhysicalParams) -> Result<PropagatorCovariance> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let (d, m) = (params.diffusion(), params.mass());
    let matrix = CovarianceMatrix2 { c_xx: d * t * t * t / (3.0 * m * m), c_xp: d * t * t / (2.0 * m), c_pp: d * t };
    Ok(PropagatorCovariance { time: t, matrix })
}

/// Cells at or above this fraction of max|W| count as occupied for the wrap-around check.
const SUPPORT_LEVEL: f64 = 1e-3;

/// `W(x, p; t) = g(·; C_W(t)) ⋆ W(x − pt/m, p; 0)`, evaluated in one shot from `w0`.
///
/// The shear is a per-row spectral phase ramp; the coarse-graining uses the
/// analytic Fourier multiplier. Both are periodic on the grid, so the occupied
/// support, transported and widened by three kernel standard deviations, must
/// stay inside the window.
pub fn evolve_exact(w0: &WignerField, t: f64) -> Result<WignerField> {
    let params = *w0.params();
    let cov = propagator_covariance(t, &params)?;
    if t == 0.0 {
        return Ok(w0.clone());
    }
    check_kernel_width(w0, &cov.matrix)?;
    check_transport(w0, t, &cov.matrix)?;

    let n = w0.x_grid().len();
    let m = params.mass();
    let dkx = 2.0 * PI / (n as f64 * w0.dx());
    let mut spec = w0.values().mapv(|v| Complex64::new(v, 0.0));
    fft_axis(&mut spec, Axis(0), false);
    for ((jx, k), z) in spec.indexed_iter_mut() {
        let kx = dkx * signed_index(jx, n) as f64;
        *z *= Complex64::from_polar(1.0, -kx * w0.p(k) * t / m);
    }
    fft_axis(&mut spec, Axis(1), false);
    apply_multiplier(&mut spec, w0, &GaussianKernel::new(cov.matrix)?);
    fft2(&mut spec, true);
    let scale = 1.0 / (n * n) as f64;
    Ok(w0.with_values(spec.mapv(|z| z.re * scale)))
}

fn check_transport(w: &WignerField, t: f64, c: &CovarianceMatrix2) -> Result<()> {
    let g = w.x_grid();
    let n = g.len();
    let m = w.params().mass();
    let level = SUPPORT_LEVEL * w.max_abs();
    let (x_lo, x_hi) = (g.x_min(), g.x(n - 1));
    let (p_lo, p_hi) = (w.p(0), w.p(n - 1));
    let (sx, sp) = (3.0 * c.c_xx.sqrt(), 3.0 * c.c_pp.sqrt());
    for ((i, k), &v) in w.values().indexed_iter() {
        if v.abs() < level {
            continue;
        }
        let p = w.p(k);
        let x = g.x(i) + p * t / m;
        if x - sx < x_lo || x + sx > x_hi || p - sp < p_lo || p + sp > p_hi {
            return Err(Error::Support(format!(
                "sample at (x = {:.3}, p = {p:.3}) reaches x = {x:.3} ± {sx:.3} by t = {t}",
                g.x(i)
            )));
        }
    }
    Ok(())
}
