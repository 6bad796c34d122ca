//! Shared fixtures and independent oracles for the integration tests.
//!
//! Nothing here calls into the FFT machinery of the crate: the oracles are
//! direct sums and closed forms.
#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wigner_deco::states::{cat_state, density_from_pure, gaussian_packet, mix, oscillator_eigenstate};
use wigner_deco::wigner::wigner_transform;
use wigner_deco::{DensityMatrix, PhysicalParams, PositionGrid, WaveFunction, WignerField};

pub fn nat() -> PhysicalParams {
    PhysicalParams::natural()
}

pub fn grid() -> PositionGrid {
    PositionGrid::standard()
}

pub fn field_of(rho: &DensityMatrix) -> WignerField {
    wigner_transform(rho, &nat()).expect("valid state")
}

pub fn pure_field(psi: &WaveFunction) -> WignerField {
    field_of(&density_from_pure(psi))
}

pub fn linf(a: &WignerField, b: &WignerField) -> f64 {
    a.values().iter().zip(b.values()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// The fixed state zoo: packets, even cats (σ = 1/√2), eigenstates n = 1..4 (σ = 1)
/// and a 50/50 mixture of packets at ±4.
pub fn zoo() -> Vec<(String, DensityMatrix)> {
    let g = grid();
    let p = nat();
    let mut out = vec![
        ("packet(0,0,1)".to_string(), density_from_pure(&gaussian_packet(&g, 0.0, 0.0, 1.0, &p).unwrap())),
        ("packet(2,1,0.5)".to_string(), density_from_pure(&gaussian_packet(&g, 2.0, 1.0, 0.5, &p).unwrap())),
    ];
    for x0 in [2.0, 3.0, 4.0, 6.0, 8.0] {
        out.push((format!("cat({x0})"), density_from_pure(&cat_state(&g, x0, FRAC_1_SQRT_2, 0.0).unwrap())));
    }
    for n in 1..=4 {
        out.push((format!("eigen({n})"), density_from_pure(&oscillator_eigenstate(&g, n, 1.0).unwrap())));
    }
    out.push(("mix(±4)".to_string(), packet_pair_mixture(4.0)));
    out
}

pub fn packet_pair_mixture(x0: f64) -> DensityMatrix {
    let g = grid();
    let a = density_from_pure(&gaussian_packet(&g, x0, 0.0, FRAC_1_SQRT_2, &nat()).unwrap());
    let b = density_from_pure(&gaussian_packet(&g, -x0, 0.0, FRAC_1_SQRT_2, &nat()).unwrap());
    mix(&[(0.5, a), (0.5, b)]).unwrap()
}

/// A random pure state drawn from packets, cats (any phase) and eigenstates.
pub fn random_pure(rng: &mut ChaCha8Rng) -> WaveFunction {
    let g = grid();
    match rng.gen_range(0..3) {
        0 => gaussian_packet(
            &g,
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.5..1.2),
            &nat(),
        )
        .unwrap(),
        1 => cat_state(&g, rng.gen_range(1.0..7.0), rng.gen_range(0.5..1.0), rng.gen_range(0.0..2.0 * PI)).unwrap(),
        _ => oscillator_eigenstate(&g, rng.gen_range(0..=4), rng.gen_range(0.6..1.4)).unwrap(),
    }
}

/// Pure state or mixture of two to three random pure states.
pub fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    if rng.gen_bool(0.4) {
        return density_from_pure(&random_pure(rng));
    }
    let k = rng.gen_range(2..=3);
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut parts: Vec<(f64, DensityMatrix)> =
        raw.iter().map(|w| (w / total, density_from_pure(&random_pure(rng)))).collect();
    // absorb rounding so the weights sum to one
    let head: f64 = parts[1..].iter().map(|(w, _)| w).sum();
    parts[0].0 = 1.0 - head;
    mix(&parts).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Momentum density of ρ by the direct double sum
/// `(1/2πħ) Σ_ab ρ(a,b) e^{−ip(x_a − x_b)/ħ} dx²`.
pub fn momentum_density_direct(rho: &DensityMatrix, p: f64, hbar: f64) -> f64 {
    let g = rho.grid();
    let n = g.len();
    let phases: Vec<Complex64> = (0..n).map(|a| Complex64::from_polar(1.0, -p * g.x(a) / hbar)).collect();
    let e = rho.entries();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for b in 0..n {
            row += e[(a, b)] * phases[b].conj();
        }
        acc += phases[a] * row;
    }
    acc.re * g.dx() * g.dx() / (2.0 * PI * hbar)
}

/// tr(ρ²) through an explicit matrix product.
pub fn purity_by_product(rho: &DensityMatrix) -> f64 {
    let e = rho.entries();
    let dx = rho.grid().dx();
    let n = e.nrows();
    let mut tr = 0.0;
    for i in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..n {
            s += e[(i, j)] * e[(j, i)];
        }
        tr += s.re;
    }
    tr * dx * dx
}

/// Analytic Gaussian amplitude with ⟨x⟩ = x0, ⟨p⟩ = p0, Var x = σ².
pub fn packet_amp(x: f64, x0: f64, p0: f64, sigma: f64, hbar: f64) -> Complex64 {
    Complex64::from_polar(
        (2.0 * PI * sigma * sigma).powf(-0.25) * (-(x - x0).powi(2) / (4.0 * sigma * sigma)).exp(),
        p0 * x / hbar,
    )
}

/// Direct quadrature of `W = (1/2πħ)∫ψ(x − r/2)ψ*(x + r/2)e^{ipr/ħ}dr` with a fine
/// midpoint rule over `|r| ≤ r_max`.
pub fn wigner_quadrature(psi: impl Fn(f64) -> Complex64, x: f64, p: f64, hbar: f64) -> f64 {
    let h = 0.005;
    let r_max = 40.0;
    let steps = (2.0 * r_max / h) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 0..steps {
        let r = -r_max + (s as f64 + 0.5) * h;
        acc += psi(x - r / 2.0) * psi(x + r / 2.0).conj() * Complex64::from_polar(1.0, p * r / hbar);
    }
    acc.re * h / (2.0 * PI * hbar)
}

/// Normal density of variance `v`.
pub fn normal(z: f64, v: f64) -> f64 {
    (-(z * z) / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()
}

/// Closed-form Wigner function of the even cat `g(x−x0) + g(x+x0)` (ħ = 1 units
/// scaled by `hbar`) after smoothing with `diag(cx, cp)`; `cx = cp = 0` gives
/// the bare Wigner function.
pub fn smoothed_cat(x: f64, p: f64, x0: f64, sigma: f64, cx: f64, cp: f64, hbar: f64) -> f64 {
    let ax = sigma * sigma;
    let ap = hbar * hbar / (4.0 * sigma * sigma);
    let norm = 1.0 / (2.0 * (1.0 + (-x0 * x0 / (2.0 * sigma * sigma)).exp()));
    let (vx, vp) = (ax + cx, ap + cp);
    let k = 2.0 * x0 / hbar;
    let packets = normal(x - x0, vx) * normal(p, vp) + normal(x + x0, vx) * normal(p, vp);
    let fringe =
        2.0 * normal(x, vx) * normal(p, vp) * (k * p * ap / vp).cos() * (-(k * k) * ap * cp / (2.0 * vp)).exp();
    norm * (packets + fringe)
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
