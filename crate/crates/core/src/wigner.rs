//! The ρ → W(x, p) map, its marginals and diagnostics.
//!
//! Discretization: for every grid point `x_i` the correlation slice
//! `c_i(r) = ρ(x_i − r/2, x_i + r/2)` is read off the even antidiagonal of the
//! matrix through `(i, i)`, so `r = 2m·dx` for `m ∈ [−n/2, n/2)`. A length-`n`
//! DFT over `m` then yields `W(x_i, p_k)` on `p_k = k·πħ/(n·dx)`, `k ∈ [−n/2, n/2)`.
//! The momentum window is `±πħ/(2·dx)`, half the wavefunction's FFT window.

use std::f64::consts::PI;

use ndarray::{Array2, Axis};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::PositionGrid;
use crate::numeric::{compensated_sum, for_each_lane, plan};
use crate::params::PhysicalParams;
use crate::states::DensityMatrix;

/// Samples `W(x_i, p_k)`; `values[(i, k)]`, `x` along rows and `p` along columns.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    x_grid: PositionGrid,
    params: PhysicalParams,
    values: Array2<f64>,
}

/// Location and depth of the most negative sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    pub min_value: f64,
    pub min_index: (usize, usize),
    pub min_location: (f64, f64),
    /// `min_value / max|W|`.
    pub relative_floor: f64,
}

/// "Non-negative" means a relative floor at or above this value.
pub const NONNEG_FLOOR: f64 = -1e-9;

impl PositivityReport {
    pub fn is_nonnegative(&self) -> bool {
        self.relative_floor >= NONNEG_FLOOR
    }
}

impl WignerField {
    /// Wraps raw samples; the shape must be `(n, n)` for an `n`-point grid.
    pub fn from_values(x_grid: PositionGrid, params: PhysicalParams, values: Array2<f64>) -> Result<Self> {
        let n = x_grid.len();
        if values.dim() != (n, n) {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format("non-finite Wigner sample".into()));
        }
        Ok(Self { x_grid, params, values })
    }

    pub(crate) fn with_values(&self, values: Array2<f64>) -> Self {
        Self { x_grid: self.x_grid, params: self.params, values }
    }

    pub fn x_grid(&self) -> &PositionGrid {
        &self.x_grid
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn dx(&self) -> f64 {
        self.x_grid.dx()
    }

    /// Momentum step `πħ/(n·dx)`.
    pub fn dp(&self) -> f64 {
        momentum_step(&self.x_grid, self.params.hbar())
    }

    pub fn p(&self, k: usize) -> f64 {
        (k as f64 - (self.x_grid.len() / 2) as f64) * self.dp()
    }

    pub fn p_values(&self) -> Vec<f64> {
        (0..self.x_grid.len()).map(|k| self.p(k)).collect()
    }

    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.values[(i, k)]
    }

    /// ∫∫W dx dp.
    pub fn normalization(&self) -> f64 {
        compensated_sum(self.values.iter().copied()) * self.dx() * self.dp()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn momentum_step(grid: &PositionGrid, hbar: f64) -> f64 {
    PI * hbar / (grid.len() as f64 * grid.dx())
}

/// W(x, p) = 1/(2πħ) ∫ ⟨x − r/2|ρ|x + r/2⟩ e^{ipr/ħ} dr.
pub fn wigner_transform(rho: &DensityMatrix, params: &PhysicalParams) -> Result<WignerField> {
    let grid = *rho.grid();
    let n = grid.len();
    let half = (n / 2) as i64;
    let entries = rho.entries();
    let fft = plan(n, true);
    let mut slices = Array2::<Complex64>::zeros((n, n));
    for_each_lane(&mut slices, Axis(1), |i, buf| {
        let i = i as i64;
        for m in -half..half {
            let (a, b) = (i - m, i + m);
            if a >= 0 && b >= 0 && a < n as i64 && b < n as i64 {
                buf[m.rem_euclid(n as i64) as usize] = entries[(a as usize, b as usize)];
            }
        }
        fft.process(buf);
    });

    let scale = 2.0 * grid.dx() / (2.0 * PI * params.hbar());
    let mut values = Array2::<f64>::zeros((n, n));
    let mut residue = 0.0f64;
    let mut peak = 0.0f64;
    for i in 0..n {
        for k in 0..n {
            // centred index k ↔ FFT bin (k − n/2) mod n
            let bin = (k + n / 2) % n;
            let z = slices[(i, bin)] * scale;
            values[(i, k)] = z.re;
            residue = residue.max(z.im.abs());
            peak = peak.max(z.re.abs());
        }
    }
    if residue > 1e-8 * peak {
        return Err(Error::Reality { residue, limit: 1e-8 * peak });
    }
    let field = WignerField { x_grid: grid, params: *params, values };
    let norm = field.normalization();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Normalization { value: norm, tolerance: 1e-6 });
    }
    Ok(field)
}

/// Position density Σ_k W·dp and momentum density Σ_i W·dx.
pub fn marginals(w: &WignerField) -> (Vec<f64>, Vec<f64>) {
    let dp = w.dp();
    let dx = w.dx();
    let position = w.values.axis_iter(Axis(0)).map(|row| compensated_sum(row.iter().copied()) * dp).collect();
    let momentum = w.values.axis_iter(Axis(1)).map(|col| compensated_sum(col.iter().copied()) * dx).collect();
    (position, momentum)
}

/// 2πħ·∫∫W² dx dp, which equals tr ρ².
pub fn purity(w: &WignerField) -> f64 {
    2.0 * PI * w.params.hbar() * compensated_sum(w.values.iter().map(|v| v * v)) * w.dx() * w.dp()
}

/// Exhaustive argmin; ties go to the lowest x index, then the lowest p index.
pub fn min_value(w: &WignerField) -> PositivityReport {
    let mut best = (f64::INFINITY, (0, 0));
    for ((i, k), &v) in w.values.indexed_iter() {
        if v < best.0 {
            best = (v, (i, k));
        }
    }
    let (min_value, (i, k)) = best;
    let peak = w.max_abs();
    PositivityReport {
        min_value,
        min_index: (i, k),
        min_location: (w.x_grid.x(i), w.p(k)),
        relative_floor: if peak > 0.0 { min_value / peak } else { 0.0 },
    }
}

/// Linear canonical squeeze `(x, p) → (λx, p/λ)`: returns `W'(x, p) = W(x/λ, λp)`.
///
/// Off-grid evaluation uses trigonometric interpolation along each axis; points
/// that fall outside the sampled window read as zero.
pub fn apply_squeeze(w: &WignerField, lambda: f64) -> Result<WignerField> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Support(format!("squeeze factor {lambda} must be > 0")));
    }
    if lambda == 1.0 {
        return Ok(w.clone());
    }
    let n = w.x_grid.len();
    let (x0, dx) = (w.x_grid.x_min(), w.dx());
    let (p0, dp) = (w.p(0), w.dp());

    // Source samples that the squeezed grid never reads must be negligible.
    let x_lo = x0 / lambda;
    let x_hi = w.x_grid.x(n - 1) / lambda;
    let p_lo = p0 * lambda;
    let p_hi = w.p(n - 1) * lambda;
    let peak = w.max_abs();
    let mut lost = 0.0f64;
    for ((i, k), &v) in w.values.indexed_iter() {
        let (x, p) = (w.x_grid.x(i), w.p(k));
        if x < x_lo - dx || x > x_hi + dx || p < p_lo - dp || p > p_hi + dp {
            lost = lost.max(v.abs());
        }
    }
    if lost > 1e-8 * peak {
        return Err(Error::Support(format!(
            "squeeze by {lambda} drops samples up to {:.3e} of the peak",
            lost / peak
        )));
    }

    let xq: Vec<f64> = (0..n).map(|i| w.x_grid.x(i) / lambda).collect();
    let pq: Vec<f64> = (0..n).map(|k| w.p(k) * lambda).collect();

    let mut stage = w.values.clone();
    interpolate_lanes(&mut stage, Axis(0), x0, dx, &xq);
    interpolate_lanes(&mut stage, Axis(1), p0, dp, &pq);
    Ok(w.with_values(stage))
}

fn interpolate_lanes(data: &mut Array2<f64>, axis: Axis, origin: f64, step: f64, query: &[f64]) {
    let n = data.len_of(axis);
    let fft = plan(n, false);
    let mut work = data.mapv(|v| Complex64::new(v, 0.0));
    for_each_lane(&mut work, axis, |_, buf| {
        fft.process(buf);
        let coeffs = buf.to_vec();
        for (out, &q) in buf.iter_mut().zip(query) {
            *out = Complex64::new(trig_eval(&coeffs, origin, step, q), 0.0);
        }
    });
    data.zip_mut_with(&work, |d, z| *d = z.re);
}

/// Evaluates the real trigonometric interpolant defined by DFT coefficients at `q`.
fn trig_eval(coeffs: &[Complex64], origin: f64, step: f64, q: f64) -> f64 {
    let n = coeffs.len();
    let u = (q - origin) / step;
    if u < -0.5 || u > n as f64 - 0.5 {
        return 0.0;
    }
    let theta = 2.0 * PI * u / n as f64;
    let rot = Complex64::from_polar(1.0, theta);
    let mut phase = rot;
    let mut acc = coeffs[0].re;
    for c in &coeffs[1..n / 2] {
        acc += 2.0 * (c * phase).re;
        phase *= rot;
    }
    acc += coeffs[n / 2].re * (theta * (n / 2) as f64).cos();
    acc / n as f64
}
