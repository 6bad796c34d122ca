use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic sampling `x_i = x_min + i·dx`, `i = 0..n`, with `dx = (x_max − x_min)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionGrid {
    x_min: f64,
    dx: f64,
    n: usize,
}

impl PositionGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidGrid(format!("bounds [{x_min}, {x_max}) are not an interval")));
        }
        if n_points < 64 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points = {n_points} must be a power of two >= 64"
            )));
        }
        Ok(Self { x_min, dx: (x_max - x_min) / n_points as f64, n: n_points })
    }

    /// 256 points on [−16, 16).
    pub fn standard() -> Self {
        Self { x_min: -16.0, dx: 0.125, n: 256 }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_min + self.n as f64 * self.dx
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn span(&self) -> f64 {
        self.n as f64 * self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Momenta conjugate to the grid in FFT order: `p_j = 2πħ·j/(n·dx)` with
    /// `j` folded into `[−n/2, n/2)`.
    pub fn fft_momenta(&self, hbar: f64) -> Vec<f64> {
        let dk = 2.0 * PI / self.span();
        (0..self.n).map(|j| hbar * dk * signed_index(j, self.n) as f64).collect()
    }

    /// Index of the mirror point `−x_i`, if it lies on the grid.
    pub fn mirror(&self, i: usize) -> Option<usize> {
        let j = (-self.x(i) - self.x_min) / self.dx;
        let r = j.round();
        if (j - r).abs() < 1e-9 && r >= 0.0 && (r as usize) < self.n {
            Some(r as usize)
        } else {
            None
        }
    }
}

impl Default for PositionGrid {
    fn default() -> Self {
        Self::standard()
    }
}

/// FFT bin `j` of an `n`-point transform as a signed frequency index in `[−n/2, n/2)`.
pub(crate) fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}
