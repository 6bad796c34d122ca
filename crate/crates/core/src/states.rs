//! Pure and mixed states sampled on a [`PositionGrid`].

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::PositionGrid;
use crate::numeric::compensated_sum;
use crate::params::PhysicalParams;

const NORM_TOL: f64 = 1e-10;
const EDGE_RATIO: f64 = 1e-6;
/// Fraction of the samples (split evenly between both ends) that must be empty.
const EDGE_FRACTION: f64 = 0.05;
const MAX_EIGEN_INDEX: usize = 10;

/// Normalized complex amplitudes `ψ(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: PositionGrid,
    amplitudes: Vec<Complex64>,
}

impl WaveFunction {
    /// Wraps raw amplitudes after checking normalization and edge leakage.
    pub fn from_amplitudes(grid: PositionGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if amplitudes.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::InvalidDensity("non-finite amplitude".into()));
        }
        let psi = Self { grid, amplitudes };
        psi.check_edges()?;
        let norm = psi.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { value: norm, tolerance: NORM_TOL });
        }
        Ok(psi)
    }

    /// Like [`WaveFunction::from_amplitudes`] but rescales to unit norm first.
    pub fn normalized(grid: PositionGrid, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = compensated_sum(amplitudes.iter().map(|a| a.norm_sqr())) * grid.dx();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidDensity("state has zero norm".into()));
        }
        let s = norm.sqrt().recip();
        amplitudes.iter_mut().for_each(|a| *a *= s);
        Self::from_amplitudes(grid, amplitudes)
    }

    /// Evolved states are normalized by unitarity; edge checks do not apply.
    pub(crate) fn from_evolution(grid: PositionGrid, amplitudes: Vec<Complex64>) -> Self {
        Self { grid, amplitudes }
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Σ|ψ|²·dx.
    pub fn norm(&self) -> f64 {
        compensated_sum(self.amplitudes.iter().map(|a| a.norm_sqr())) * self.grid.dx()
    }

    pub fn position_density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn mean_x(&self) -> f64 {
        let g = &self.grid;
        compensated_sum(self.amplitudes.iter().enumerate().map(|(i, a)| g.x(i) * a.norm_sqr())) * g.dx()
    }

    pub fn variance_x(&self) -> f64 {
        let g = &self.grid;
        let mean = self.mean_x();
        compensated_sum(
            self.amplitudes.iter().enumerate().map(|(i, a)| (g.x(i) - mean).powi(2) * a.norm_sqr()),
        ) * g.dx()
    }

    /// Σ ψ₁*·ψ₂·dx.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let re = compensated_sum(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a.conj() * b).re));
        let im = compensated_sum(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a.conj() * b).im));
        Ok(Complex64::new(re, im) * self.grid.dx())
    }

    fn check_edges(&self) -> Result<()> {
        let n = self.amplitudes.len();
        let band = ((EDGE_FRACTION * 0.5 * n as f64).ceil() as usize).max(1);
        let peak = self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let edge = self.amplitudes[..band]
            .iter()
            .chain(&self.amplitudes[n - band..])
            .map(|a| a.norm())
            .fold(0.0, f64::max);
        if peak > 0.0 && edge > EDGE_RATIO * peak {
            return Err(Error::Leakage { ratio: edge / peak });
        }
        Ok(())
    }
}

fn check_width(grid: &PositionGrid, sigma: f64) -> Result<()> {
    let lo = 4.0 * grid.dx();
    let hi = grid.span() / 16.0;
    if !(sigma >= lo && sigma <= hi) {
        return Err(Error::GridResolution(format!("sigma = {sigma} outside [{lo}, {hi}]")));
    }
    Ok(())
}

/// Real Gaussian amplitude of unit L² norm and position variance σ², centred at `center`.
fn gaussian_amplitude(x: f64, center: f64, sigma: f64) -> f64 {
    (2.0 * PI * sigma * sigma).powf(-0.25) * (-(x - center).powi(2) / (4.0 * sigma * sigma)).exp()
}

/// Minimum-uncertainty packet `ψ ∝ exp(−(x−x₀)²/4σ² + i·p₀·x/ħ)`.
pub fn gaussian_packet(
    grid: &PositionGrid,
    x0: f64,
    p0: f64,
    sigma: f64,
    params: &PhysicalParams,
) -> Result<WaveFunction> {
    check_width(grid, sigma)?;
    let hbar = params.hbar();
    let amps = (0..grid.len())
        .map(|i| {
            let x = grid.x(i);
            Complex64::from_polar(gaussian_amplitude(x, x0, sigma), p0 * x / hbar)
        })
        .collect();
    WaveFunction::from_amplitudes(*grid, amps)
}

/// Superposition of packets at `±x0` with relative phase `e^{iφ}`:
/// `ψ ∝ g(x − x₀) + e^{iφ}·g(x + x₀)`.
///
/// The normalization constant keeps the overlap term `e^{−x₀²/2σ²}` exactly.
pub fn cat_state(grid: &PositionGrid, x0: f64, sigma: f64, phase: f64) -> Result<WaveFunction> {
    check_width(grid, sigma)?;
    let overlap = (-x0 * x0 / (2.0 * sigma * sigma)).exp();
    let norm_sq = 2.0 * (1.0 + phase.cos() * overlap);
    if norm_sq < 1e-12 {
        return Err(Error::GridResolution(format!(
            "cat with x0 = {x0}, phase = {phase} is numerically the zero vector"
        )));
    }
    let scale = norm_sq.sqrt().recip();
    let rel = Complex64::from_polar(1.0, phase);
    let amps = (0..grid.len())
        .map(|i| {
            let x = grid.x(i);
            let right = gaussian_amplitude(x, x0, sigma);
            let left = gaussian_amplitude(x, -x0, sigma);
            (Complex64::new(right, 0.0) + rel * left) * scale
        })
        .collect();
    WaveFunction::from_amplitudes(*grid, amps)
}

/// Harmonic-oscillator eigenfunction `n` whose ground state has position width `sigma`.
///
/// Evaluated with the normalized Hermite-function recurrence, so `n = 0` coincides
/// with `gaussian_packet(0, 0, sigma)`.
pub fn oscillator_eigenstate(grid: &PositionGrid, n: usize, sigma: f64) -> Result<WaveFunction> {
    if n > MAX_EIGEN_INDEX {
        return Err(Error::GridResolution(format!("eigenstate index {n} > {MAX_EIGEN_INDEX}")));
    }
    check_width(grid, sigma)?;
    let scale = std::f64::consts::SQRT_2 * sigma;
    let amps = (0..grid.len())
        .map(|i| {
            let xi = grid.x(i) / scale;
            Complex64::new(hermite_function(n, xi) / scale.sqrt(), 0.0)
        })
        .collect();
    WaveFunction::normalized(*grid, amps)
}

/// Normalized Hermite function `φ_n(ξ) = (2ⁿ n! √π)^{-1/2} H_n(ξ) e^{−ξ²/2}`.
fn hermite_function(n: usize, xi: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Position-representation density matrix, `entries[(i, j)] = ⟨x_i|ρ|x_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    grid: PositionGrid,
    entries: Array2<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity (to 1e-10 of the largest entry) and unit trace, then
    /// replaces the entries by their exact Hermitian part.
    pub fn from_entries(grid: PositionGrid, mut entries: Array2<Complex64>) -> Result<Self> {
        let n = grid.len();
        if entries.dim() != (n, n) {
            return Err(Error::GridMismatch);
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !scale.is_finite() {
            return Err(Error::InvalidDensity("non-finite entries".into()));
        }
        let mut skew = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let a = entries[(i, j)];
                let b = entries[(j, i)].conj();
                skew = skew.max((a - b).norm());
                let h = (a + b) * 0.5;
                entries[(i, j)] = h;
                entries[(j, i)] = h.conj();
            }
        }
        if skew > 1e-10 * scale {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {skew:.3e})")));
        }
        let rho = Self { grid, entries };
        let tr = rho.trace();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { value: tr, tolerance: NORM_TOL });
        }
        Ok(rho)
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<Complex64> {
        self.entries
    }

    /// Σᵢ ρᵢᵢ·dx.
    pub fn trace(&self) -> f64 {
        compensated_sum(self.entries.diag().iter().map(|z| z.re)) * self.grid.dx()
    }

    /// tr(ρ²) = Σᵢⱼ |ρᵢⱼ|²·dx².
    pub fn purity(&self) -> f64 {
        compensated_sum(self.entries.iter().map(|z| z.norm_sqr())) * self.grid.dx().powi(2)
    }

    /// Diagonal ρ(x_i, x_i), the position probability density.
    pub fn position_density(&self) -> Vec<f64> {
        self.entries.diag().iter().map(|z| z.re).collect()
    }

    /// Extreme eigenvalues (min, max) of the operator ρ (matrix scaled by dx).
    pub fn eigenvalue_range(&self) -> (f64, f64) {
        let n = self.grid.len();
        let dx = self.grid.dx();
        // entries far below the peak underflow inside the Householder sweeps
        let peak = self.entries.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            let z = self.entries[(i, j)];
            if z.norm() < 1e-100 * peak {
                return nalgebra::Complex::new(0.0, 0.0);
            }
            nalgebra::Complex::new(z.re * dx, z.im * dx)
        });
        let eig = nalgebra::SymmetricEigen::new(m).eigenvalues;
        let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Positive semidefiniteness up to a floor of −1e-8 relative to the largest eigenvalue.
    pub fn check_psd(&self) -> Result<()> {
        let (lo, hi) = self.eigenvalue_range();
        if lo < -1e-8 * hi.abs() {
            return Err(Error::InvalidDensity(format!("eigenvalue {lo:.3e} below PSD floor")));
        }
        Ok(())
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn density_from_pure(psi: &WaveFunction) -> DensityMatrix {
    let a = psi.amplitudes();
    let n = a.len();
    let entries = Array2::from_shape_fn((n, n), |(i, j)| a[i] * a[j].conj());
    DensityMatrix { grid: *psi.grid(), entries }
}

/// Convex combination `Σ wₖ ρₖ`. Weights must be non-negative and sum to 1 (±1e-12).
pub fn mix(states: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
    let (_, first) = states.first().ok_or_else(|| Error::Weight("empty mixture".into()))?;
    if states.iter().any(|(w, _)| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::Weight("weights must be finite and >= 0".into()));
    }
    let total = compensated_sum(states.iter().map(|(w, _)| *w));
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Weight(format!("weights sum to {total}")));
    }
    let grid = *first.grid();
    if states.iter().any(|(_, r)| *r.grid() != grid) {
        return Err(Error::GridMismatch);
    }
    let mut entries = Array2::<Complex64>::zeros(first.entries.raw_dim());
    for (w, rho) in states {
        entries.scaled_add(Complex64::new(*w, 0.0), &rho.entries);
    }
    Ok(DensityMatrix { grid, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PositionGrid {
        PositionGrid::standard()
    }

    #[test]
    fn packet_is_normalized_and_centred() {
        let p = PhysicalParams::natural();
        let psi = gaussian_packet(&grid(), 0.0, 0.0, 1.0, &p).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        let psi = gaussian_packet(&grid(), 2.0, 0.0, 1.0, &p).unwrap();
        assert!((psi.mean_x() - 2.0).abs() < 1e-8);
        assert!((psi.variance_x() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn packet_width_band_is_enforced() {
        let p = PhysicalParams::natural();
        assert!(matches!(gaussian_packet(&grid(), 0.0, 0.0, 0.4, &p), Err(Error::GridResolution(_))));
        assert!(matches!(gaussian_packet(&grid(), 0.0, 0.0, 2.1, &p), Err(Error::GridResolution(_))));
        // widest admissible packet still fits
        gaussian_packet(&grid(), 0.0, 0.0, 2.0, &p).unwrap();
    }

    #[test]
    fn packet_near_edge_leaks() {
        let p = PhysicalParams::natural();
        let err = gaussian_packet(&grid(), 13.0, 0.0, 1.0, &p).unwrap_err();
        assert!(matches!(err, Error::Leakage { .. }));
    }

    #[test]
    fn even_cat_is_mirror_symmetric() {
        let g = grid();
        let psi = cat_state(&g, 4.0, std::f64::consts::FRAC_1_SQRT_2, 0.0).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        for i in 0..g.len() {
            if let Some(j) = g.mirror(i) {
                assert_eq!(psi.amplitudes()[i] - psi.amplitudes()[j], Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn odd_cat_has_node_at_origin() {
        let g = grid();
        let psi = cat_state(&g, 4.0, std::f64::consts::FRAC_1_SQRT_2, PI).unwrap();
        let origin = g.mirror(128).unwrap();
        assert_eq!(origin, 128);
        assert!(psi.amplitudes()[128].norm() < 1e-10);
    }

    #[test]
    fn overlapping_cat_uses_exact_normalization() {
        // strong overlap: the large-separation constant 1/√2 would be off by ~30%
        let psi = cat_state(&grid(), 0.5, 1.0, 0.0).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        assert!(cat_state(&grid(), 0.0, 1.0, PI).is_err());
    }

    #[test]
    fn eigenstates_have_parity_and_nodes() {
        let g = grid();
        let e0 = oscillator_eigenstate(&g, 0, 1.0).unwrap();
        let packet = gaussian_packet(&g, 0.0, 0.0, 1.0, &PhysicalParams::natural()).unwrap();
        for (a, b) in e0.amplitudes().iter().zip(packet.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        let e1 = oscillator_eigenstate(&g, 1, 1.0).unwrap();
        assert!(e1.amplitudes()[128].norm() < 1e-12);
        let e2 = oscillator_eigenstate(&g, 2, 1.0).unwrap();
        assert!(e0.inner(&e2).unwrap().norm() < 1e-8);
        assert!(oscillator_eigenstate(&g, 11, 1.0).is_err());
    }

    #[test]
    fn mixing_validates_weights_and_grids() {
        let g = grid();
        let rho = density_from_pure(&gaussian_packet(&g, 0.0, 0.0, 1.0, &PhysicalParams::natural()).unwrap());
        assert!(matches!(mix(&[(0.7, rho.clone()), (0.2, rho.clone())]), Err(Error::Weight(_))));
        assert!(matches!(mix(&[(1.5, rho.clone()), (-0.5, rho.clone())]), Err(Error::Weight(_))));
        let other = PositionGrid::new(-8.0, 8.0, 256).unwrap();
        let rho2 = density_from_pure(&gaussian_packet(&other, 0.0, 0.0, 1.0, &PhysicalParams::natural()).unwrap());
        assert!(matches!(mix(&[(0.5, rho.clone()), (0.5, rho2)]), Err(Error::GridMismatch)));
        let same = mix(&[(0.5, rho.clone()), (0.5, rho.clone())]).unwrap();
        assert_eq!(same, rho);
    }

    #[test]
    fn from_entries_rejects_non_hermitian() {
        let g = grid();
        let mut e = density_from_pure(&gaussian_packet(&g, 0.0, 0.0, 1.0, &PhysicalParams::natural()).unwrap())
            .into_entries();
        e[(3, 100)] += Complex64::new(0.0, 1e-3);
        assert!(matches!(DensityMatrix::from_entries(g, e), Err(Error::InvalidDensity(_))));
    }
}
