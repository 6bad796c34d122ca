//! Gaussian coarse-graining of phase-space fields.
//!
//! The convolution `g(·; C) ⋆ W` is applied in the Fourier domain by the exact
//! multiplier `exp(−½ kᵀ C k)`, so degenerate (rank-deficient) covariances need
//! no special treatment.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::signed_index;
use crate::numeric::fft2;
use crate::wigner::{min_value, PositivityReport, WignerField, NONNEG_FLOOR};

/// Symmetric 2×2 phase-space covariance `[[c_xx, c_xp], [c_xp, c_pp]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix2 {
    pub c_xx: f64,
    pub c_xp: f64,
    pub c_pp: f64,
}

impl CovarianceMatrix2 {
    pub fn new(c_xx: f64, c_xp: f64, c_pp: f64) -> Result<Self> {
        let c = Self { c_xx, c_xp, c_pp };
        c.validate()?;
        Ok(c)
    }

    pub const fn zero() -> Self {
        Self { c_xx: 0.0, c_xp: 0.0, c_pp: 0.0 }
    }

    pub fn isotropic(c: f64) -> Result<Self> {
        Self::new(c, 0.0, c)
    }

    pub fn det(&self) -> f64 {
        self.c_xx * self.c_pp - self.c_xp * self.c_xp
    }

    pub fn is_zero(&self) -> bool {
        self.c_xx == 0.0 && self.c_xp == 0.0 && self.c_pp == 0.0
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            c_xx: self.c_xx - other.c_xx,
            c_xp: self.c_xp - other.c_xp,
            c_pp: self.c_pp - other.c_pp,
        }
    }

    fn validate(&self) -> Result<()> {
        let Self { c_xx, c_xp, c_pp } = *self;
        if ![c_xx, c_xp, c_pp].iter().all(|v| v.is_finite()) {
            return Err(Error::Psd("non-finite entry".into()));
        }
        if c_xx < 0.0 || c_pp < 0.0 {
            return Err(Error::Psd(format!("negative diagonal ({c_xx}, {c_pp})")));
        }
        // rounding slack for exactly singular matrices
        if self.det() < -1e-12 * (c_xx * c_pp).max(c_xp * c_xp) {
            return Err(Error::Psd(format!("det = {} < 0", self.det())));
        }
        Ok(())
    }

    /// `½ kᵀ C k`.
    fn quad(&self, kx: f64, kp: f64) -> f64 {
        0.5 * (self.c_xx * kx * kx + 2.0 * self.c_xp * kx * kp + self.c_pp * kp * kp)
    }
}

/// Normalized Gaussian profile `g(x, p; C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernel {
    covariance: CovarianceMatrix2,
}

impl GaussianKernel {
    pub fn new(covariance: CovarianceMatrix2) -> Result<Self> {
        covariance.validate()?;
        Ok(Self { covariance })
    }

    pub fn covariance(&self) -> &CovarianceMatrix2 {
        &self.covariance
    }

    /// Pointwise density; requires `det C > 0`.
    pub fn density(&self, x: f64, p: f64) -> f64 {
        let c = &self.covariance;
        let det = c.det();
        let q = (c.c_pp * x * x - 2.0 * c.c_xp * x * p + c.c_xx * p * p) / det;
        (-0.5 * q).exp() / (2.0 * PI * det.sqrt())
    }

    /// Fourier transform `exp(−½ kᵀ C k)`.
    pub fn transform(&self, kx: f64, kp: f64) -> f64 {
        (-self.covariance.quad(kx, kp)).exp()
    }
}

/// `g(·; C) ⋆ W`. A zero covariance returns the input untouched.
pub fn coarse_grain(w: &WignerField, c: &CovarianceMatrix2) -> Result<WignerField> {
    let kernel = GaussianKernel::new(*c)?;
    if c.is_zero() {
        return Ok(w.clone());
    }
    check_kernel_width(w, c)?;
    let n = w.x_grid().len();
    let mut spec = w.values().mapv(|v| Complex64::new(v, 0.0));
    fft2(&mut spec, false);
    apply_multiplier(&mut spec, w, &kernel);
    fft2(&mut spec, true);
    let scale = 1.0 / (n * n) as f64;
    Ok(w.with_values(spec.mapv(|z| z.re * scale)))
}

pub(crate) fn check_kernel_width(w: &WignerField, c: &CovarianceMatrix2) -> Result<()> {
    let n = w.x_grid().len() as f64;
    let half_x = 0.5 * n * w.dx();
    let half_p = 0.5 * n * w.dp();
    if 3.0 * c.c_xx.sqrt() > half_x || 3.0 * c.c_pp.sqrt() > half_p {
        return Err(Error::KernelTooWide(format!(
            "3σ extents ({:.3}, {:.3}) exceed half spans ({half_x:.3}, {half_p:.3})",
            3.0 * c.c_xx.sqrt(),
            3.0 * c.c_pp.sqrt()
        )));
    }
    Ok(())
}

/// Multiplies a 2-D spectrum (FFT bins along x then p) by the kernel transform.
pub(crate) fn apply_multiplier(spec: &mut Array2<Complex64>, w: &WignerField, kernel: &GaussianKernel) {
    let n = w.x_grid().len();
    let dkx = 2.0 * PI / (n as f64 * w.dx());
    let dkp = 2.0 * PI / (n as f64 * w.dp());
    for ((jx, jp), z) in spec.indexed_iter_mut() {
        let kx = dkx * signed_index(jx, n) as f64;
        let kp = dkp * signed_index(jp, n) as f64;
        *z *= kernel.transform(kx, kp);
    }
}

/// Husimi covariance for a coherent-state reference length `scale`:
/// `diag(ħ·scale²/2, ħ/(2·scale²))`, determinant ħ²/4.
pub fn husimi_covariance(hbar: f64, scale: f64) -> CovarianceMatrix2 {
    CovarianceMatrix2 { c_xx: 0.5 * hbar * scale * scale, c_xp: 0.0, c_pp: 0.5 * hbar / (scale * scale) }
}

/// Husimi function: coarse-graining with `diag(ħ/2, ħ/2)` (unit reference length).
pub fn husimi(w: &WignerField) -> Result<WignerField> {
    husimi_scaled(w, 1.0)
}

pub fn husimi_scaled(w: &WignerField, scale: f64) -> Result<WignerField> {
    coarse_grain(w, &husimi_covariance(w.params().hbar(), scale))
}

/// Coarse-grains with `C` and reports the resulting minimum.
pub fn check_lemma(w: &WignerField, c: &CovarianceMatrix2) -> Result<PositivityReport> {
    Ok(min_value(&coarse_grain(w, c)?))
}

/// Bisection bracket for [`positivity_threshold`]: smoothing with `lower·I`
/// leaves the field negative, smoothing with `upper·I` makes it non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdCertificate {
    pub threshold: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_floor: f64,
    pub upper_floor: f64,
}

const THRESHOLD_TOL: f64 = 1e-4;

/// Smallest isotropic `c ∈ [0, 1]` (to 1e-4) for which `c·I` smoothing gives a
/// non-negative field. Already non-negative fields return 0.
pub fn positivity_threshold(w: &WignerField) -> Result<ThresholdCertificate> {
    let floor = |c: f64| -> Result<f64> {
        let cov = CovarianceMatrix2::isotropic(c)?;
        Ok(check_lemma(w, &cov)?.relative_floor)
    };
    let f0 = floor(0.0)?;
    if f0 >= NONNEG_FLOOR {
        return Ok(ThresholdCertificate { threshold: 0.0, lower: 0.0, upper: 0.0, lower_floor: f0, upper_floor: f0 });
    }
    let f1 = floor(1.0)?;
    if f1 < NONNEG_FLOOR {
        return Err(Error::Bracket(format!("still negative at c = 1 (floor {f1:.3e})")));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let (mut flo, mut fhi) = (f0, f1);
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = floor(mid)?;
        if fm >= NONNEG_FLOOR {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    // re-verify both ends of the final bracket
    let (vlo, vhi) = (floor(lo)?, floor(hi)?);
    if vlo >= NONNEG_FLOOR || vhi < NONNEG_FLOOR || vlo != flo || vhi != fhi {
        return Err(Error::Bracket(format!("bracket [{lo}, {hi}] failed re-verification")));
    }
    Ok(ThresholdCertificate { threshold: hi, lower: lo, upper: hi, lower_floor: vlo, upper_floor: vhi })
}
