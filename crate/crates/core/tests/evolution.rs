mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use wigner_deco::evolution::{
    decoherence_scan, evolve_density_trotter, evolve_density_trotter_with, evolve_exact, evolve_fd, evolve_fd_refined,
    evolve_montecarlo, fd_stability_limit, fd_stability_limit_refined, propagator_covariance, scales,
    simulate_trajectory, trajectory_ensemble, Splitting,
};
use wigner_deco::states::{cat_state, density_from_pure, gaussian_packet, oscillator_eigenstate};
use wigner_deco::wigner::{marginals, min_value, purity, wigner_transform};
use wigner_deco::{DensityMatrix, Error, PhysicalParams, PositionGrid, WaveFunction, WignerField};

fn cat4() -> WaveFunction {
    cat_state(&grid(), 4.0, FRAC_1_SQRT_2, 0.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn variance(xs: &[f64], density: &[f64], dx: f64) -> f64 {
    let m0: f64 = density.iter().sum::<f64>() * dx;
    let m1: f64 = xs.iter().zip(density).map(|(x, d)| x * d).sum::<f64>() * dx / m0;
    xs.iter().zip(density).map(|(x, d)| (x - m1).powi(2) * d).sum::<f64>() * dx / m0
}

fn field_variance(w: &WignerField) -> f64 {
    let (px, _) = marginals(w);
    variance(&w.x_grid().points(), &px, w.dx())
}

fn random_params(r: &mut impl Rng) -> PhysicalParams {
    let e = |r: &mut dyn rand::RngCore| 10f64.powf(r.gen_range(-2.0..2.0));
    PhysicalParams::new(e(r), e(r), e(r)).unwrap()
}

#[test]
fn scale_identities_for_random_parameters() {
    let mut r = rng(5);
    for _ in 0..100 {
        let p = random_params(&mut r);
        let (h, m, d) = (p.hbar(), p.mass(), p.diffusion());
        let s = scales(&p);
        assert!(rel(s.t0 * s.t0, h * m / d) < 1e-12);
        assert!(rel(s.sigma0.powi(4), h.powi(3) / (d * m)) < 1e-12);
        assert!(rel(s.t_d.powi(4), 3.0 * s.t0.powi(4)) < 1e-12);
        assert!(rel(s.sigma0 * s.sigma0, h * s.t0 / m) < 1e-12);
    }
}

#[test]
fn propagator_covariance_values() {
    let c = propagator_covariance(1.0, &nat()).unwrap().matrix;
    assert!((c.c_xx - 1.0 / 3.0).abs() < 1e-15 && (c.c_xp - 0.5).abs() < 1e-15 && (c.c_pp - 1.0).abs() < 1e-15);
    assert!((c.det() - 1.0 / 12.0).abs() < 1e-15);
    assert!(propagator_covariance(0.0, &nat()).unwrap().matrix.is_zero());
    assert!(matches!(propagator_covariance(-1.0, &nat()), Err(Error::NegativeTime(_))));
    let td = scales(&nat()).t_d;
    assert!(rel(propagator_covariance(td, &nat()).unwrap().det(), 0.25) < 1e-10);

    let mut r = rng(6);
    for _ in 0..100 {
        let p = random_params(&mut r);
        let t = r.gen_range(0.01..10.0) * scales(&p).t0;
        let det = propagator_covariance(t, &p).unwrap().det();
        let expected = (p.diffusion() * t * t).powi(2) / (12.0 * p.mass() * p.mass());
        assert!(rel(det, expected) < 1e-12);
        let at_td = propagator_covariance(scales(&p).t_d, &p).unwrap().det();
        assert!(rel(at_td, p.hbar() * p.hbar() / 4.0) < 1e-10);
    }
}

#[test]
fn determinant_increases_with_time() {
    let dets: Vec<f64> =
        (0..100).map(|j| propagator_covariance(j as f64 * 0.03, &nat()).unwrap().det()).collect();
    assert!(dets.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn exact_engine_basics() {
    let w = pure_field(&cat4());
    assert_eq!(evolve_exact(&w, 0.0).unwrap(), w);
    assert!(matches!(evolve_exact(&w, -0.1), Err(Error::NegativeTime(_))));
    let e = evolve_exact(&w, 0.7).unwrap();
    assert!((e.normalization() - 1.0).abs() < 1e-6);
    assert!(purity(&e) < purity(&w));
    assert!((purity(&evolve_exact(&w, 0.0).unwrap()) - 1.0).abs() < 1e-5);
    let fast = pure_field(&gaussian_packet(&grid(), 0.0, 6.0, 1.0, &nat()).unwrap());
    assert!(matches!(evolve_exact(&fast, 2.0), Err(Error::Support(_))));
}

#[test]
fn exact_engine_moments_follow_closed_form() {
    for (sigma, p0, t) in [(1.0, 0.0, 1.0), (0.8, 1.0, 1.5), (1.2, -0.5, 0.4)] {
        let w0 = pure_field(&gaussian_packet(&grid(), 0.0, p0, sigma, &nat()).unwrap());
        let w = evolve_exact(&w0, t).unwrap();
        let expected = sigma * sigma + (0.5 / sigma).powi(2) * t * t + t.powi(3) / 3.0;
        assert!((field_variance(&w) - expected).abs() < 1e-5, "sigma {sigma}, t {t}");
        let (px, _) = marginals(&w);
        let mean: f64 = w.x_grid().points().iter().zip(&px).map(|(x, d)| x * d).sum::<f64>() * w.dx();
        assert!((mean - p0 * t).abs() < 1e-8);
    }
}

#[test]
fn exact_engine_reaches_positivity_at_td() {
    let td = scales(&nat()).t_d;
    let w = evolve_exact(&pure_field(&cat4()), td).unwrap();
    assert!(min_value(&w).relative_floor >= -1e-9);
    // the whole zoo is positive at t_D, and decoherence is not instantaneous
    let mut deepest = 0.0f64;
    for (name, rho) in zoo() {
        let w0 = field_of(&rho);
        let at = min_value(&evolve_exact(&w0, td).unwrap()).relative_floor;
        assert!(at >= -1e-9, "{name}: {at:e}");
        deepest = deepest.min(min_value(&evolve_exact(&w0, 0.9 * td).unwrap()).relative_floor);
    }
    assert!(deepest < -1e-4);
}

#[test]
fn fd_engine_identity_mass_and_stability() {
    let w = pure_field(&gaussian_packet(&grid(), 0.0, 0.0, 1.0, &nat()).unwrap());
    assert_eq!(evolve_fd(&w, 0.0, 1e-3).unwrap(), w);
    let limit = fd_stability_limit(&w);
    assert!((limit - 0.5 * 0.125 / w.p(0).abs()).abs() < 1e-15 || (limit - 0.25 * w.dp() * w.dp()).abs() < 1e-15);
    assert!(matches!(evolve_fd(&w, 0.1, 2.0 * limit), Err(Error::Stability { .. })));
    assert!(evolve_fd_refined(&w, 0.1, limit, 3).is_err());
    assert!(fd_stability_limit_refined(&w, 4) < limit);

    let cat = pure_field(&cat4());
    let out = evolve_fd(&cat, 2.0, fd_stability_limit(&cat)).unwrap();
    assert!((out.normalization() - cat.normalization()).abs() < 1e-6);
}

#[test]
fn fd_engine_converges_to_exact() {
    let w = pure_field(&gaussian_packet(&grid(), 0.0, 0.0, 1.0, &nat()).unwrap());
    let exact = evolve_exact(&w, 1.0).unwrap();
    let errs: Vec<f64> = [1, 2, 4]
        .iter()
        .map(|&r| {
            let out = evolve_fd_refined(&w, 1.0, fd_stability_limit_refined(&w, r), r).unwrap();
            linf(&out, &exact) / exact.max_abs()
        })
        .collect();
    // first order in dx
    assert!(errs[1] < 0.6 * errs[0] && errs[2] < 0.6 * errs[1], "{errs:?}");
    assert!(errs[2] <= 1e-2, "{errs:?}");
}

#[test]
fn trotter_free_spreading() {
    let p = PhysicalParams::new(1.0, 1.0, 1e-15).unwrap();
    let sigma = 1.0;
    let psi = gaussian_packet(&grid(), 0.0, 0.0, sigma, &p).unwrap();
    let rho = evolve_density_trotter(&density_from_pure(&psi), 1.0, 1e-3, &p).unwrap();
    let expected = sigma * sigma + (1.0f64 / (2.0 * sigma)).powi(2);
    assert!((variance(&grid().points(), &rho.position_density(), grid().dx()) - expected).abs() < 1e-6);
    assert!((rho.purity() - 1.0).abs() < 1e-10);
}

#[test]
fn trotter_decoherence_only_damps_coherence() {
    let rho0 = density_from_pure(&cat4());
    let only = Splitting { kinetic: false, decoherence: true };
    let (i, j) = (160, 96);
    assert_eq!((grid().x(i), grid().x(j)), (4.0, -4.0));
    for t in [0.01, 0.05, 0.1] {
        let rho = evolve_density_trotter_with(&rho0, t, 1e-3, &nat(), only).unwrap();
        let expected = rho0.entries()[(i, j)] * (-64.0 * t / 2.0).exp();
        assert!((rho.entries()[(i, j)] - expected).norm() <= 1e-8 * expected.norm(), "t = {t}");
        assert_eq!(rho.position_density(), rho0.position_density());
    }
}

#[test]
fn trotter_state_stays_physical_and_matches_exact() {
    let rho0 = density_from_pure(&oscillator_eigenstate(&grid(), 2, 1.0).unwrap());
    let rho = evolve_density_trotter(&rho0, 0.5, 1e-3, &nat()).unwrap();
    assert!((rho.trace() - 1.0).abs() < 1e-10);
    let e = rho.entries();
    let herm = e.indexed_iter().fold(0.0f64, |m, ((a, b), z)| m.max((z - e[(b, a)].conj()).norm()));
    assert_eq!(herm, 0.0);
    assert!(rho.check_psd().is_ok());
    let w = field_of(&rho);
    let exact = evolve_exact(&field_of(&rho0), 0.5).unwrap();
    assert!(linf(&w, &exact) <= 1e-3 * exact.max_abs());
    assert!(matches!(evolve_density_trotter(&rho0, 0.5, 0.01, &nat()), Err(Error::StepSize { .. })));
    assert_eq!(evolve_density_trotter(&rho0, 0.0, 1e-3, &nat()).unwrap(), rho0);
}

#[test]
fn montecarlo_without_noise_is_unitary() {
    let p = PhysicalParams::new(1.0, 1.0, 1e-12).unwrap();
    let psi = cat_state(&grid(), 3.0, 0.8, 0.3).unwrap();
    let mc = evolve_montecarlo(&psi, 0.5, 0.01, &p, 100, 7).unwrap();
    let free = evolve_density_trotter(&density_from_pure(&psi), 0.5, 0.01, &p).unwrap();
    let d = mc.entries().iter().zip(free.entries()).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    assert!(d < 1e-5, "{d:e}");
    let one = simulate_trajectory(&psi, 0.5, 0.01, &p, 7, 3).unwrap();
    assert!((one.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn montecarlo_is_deterministic_per_seed() {
    let psi = cat4();
    let a = evolve_montecarlo(&psi, 0.2, 0.005, &nat(), 300, 42).unwrap();
    let b = evolve_montecarlo(&psi, 0.2, 0.005, &nat(), 300, 42).unwrap();
    let c = evolve_montecarlo(&psi, 0.2, 0.005, &nat(), 300, 43).unwrap();
    let bits = |r: &DensityMatrix| r.entries().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
    assert_ne!(bits(&a), bits(&c));
    let t1 = simulate_trajectory(&psi, 0.2, 0.005, &nat(), 42, 17).unwrap();
    let ens = trajectory_ensemble(&psi, 0.2, 0.005, &nat(), 20, 42).unwrap();
    assert_eq!(t1, ens[17]);
    assert!(matches!(evolve_montecarlo(&psi, 0.2, 0.005, &nat(), 50, 42), Err(Error::InvalidParams(_))));
}

/// Bootstrap standard error of `f(mean of resampled values)`.
fn bootstrap_se(values: &[Complex64], f: impl Fn(Complex64) -> f64, seed: u64) -> f64 {
    let mut r = rng(seed);
    let n = values.len();
    let stats: Vec<f64> = (0..400)
        .map(|_| {
            let s: Complex64 = (0..n).map(|_| values[r.gen_range(0..n)]).sum();
            f(s / n as f64)
        })
        .collect();
    let mean = stats.iter().sum::<f64>() / stats.len() as f64;
    (stats.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (stats.len() - 1) as f64).sqrt()
}

#[test]
fn montecarlo_agrees_with_trotter_statistically() {
    let psi = cat4();
    let (t, dt, n) = (0.5, 0.005, 4096);
    let trotter = evolve_density_trotter(&density_from_pure(&psi), t, dt, &nat()).unwrap();
    let ens = trajectory_ensemble(&psi, t, dt, &nat(), n, 2024).unwrap();
    let mc = evolve_montecarlo(&psi, t, dt, &nat(), n, 2024).unwrap();
    // x = ±4, then nearby pairs where the coherence is still large
    for (i, j) in [(160, 96), (136, 120), (128, 128), (140, 132)] {
        let samples: Vec<Complex64> = ens.iter().map(|s| s.amplitudes()[i] * s.amplitudes()[j].conj()).collect();
        let mean: Complex64 = samples.iter().sum::<Complex64>() / n as f64;
        assert!((mean - mc.entries()[(i, j)]).norm() < 1e-12);
        let se = bootstrap_se(&samples, |z| z.norm(), 99);
        let diff = (mean.norm() - trotter.entries()[(i, j)].norm()).abs();
        assert!(diff <= 3.0 * se, "({i}, {j}): |Δ| = {diff:e}, SE = {se:e}");
    }
}

#[test]
fn scan_examples() {
    let td = scales(&nat()).t_d;
    let gauss = pure_field(&gaussian_packet(&grid(), 0.0, 0.0, 1.0, &nat()).unwrap());
    assert_eq!(decoherence_scan(&gauss, 1.25 * td, 20).unwrap().first_nonneg_time, 0.0);

    let res = decoherence_scan(&pure_field(&cat4()), 1.25 * td, 50).unwrap();
    assert!(res.first_nonneg_time <= td + 1e-3);
    assert_eq!(res.trace.len(), 51);
    assert!(!res.multiple_crossings);
    let last_neg = res.trace.iter().rposition(|p| p.relative_floor < -1e-9).unwrap();
    assert!(res.trace[last_neg].t < res.first_nonneg_time && res.first_nonneg_time <= res.trace[last_neg + 1].t);

    // the first excited state saturates the bound
    let e1 = pure_field(&oscillator_eigenstate(&grid(), 1, 1.0).unwrap());
    let res = decoherence_scan(&e1, 1.25 * td, 50).unwrap();
    assert!((res.first_nonneg_time - td).abs() <= 1e-3, "{}", res.first_nonneg_time);
    let just_before = min_value(&evolve_exact(&e1, 0.999 * td).unwrap()).relative_floor;
    assert!(just_before < -1e-9, "{just_before:e}");
    assert!(Error::NeverPositive { t_max: td, relative_floor: -1.0 }.is_numerical_contract());
    assert!(matches!(decoherence_scan(&e1, 0.5 * td, 10), Err(Error::InvalidParams(_))));
}

#[test]
fn scan_over_cat_separations() {
    let td = scales(&nat()).t_d;
    let wide = PositionGrid::new(-32.0, 32.0, 512).unwrap();
    let nine = pure_field(&cat_state(&grid(), 9.0, FRAC_1_SQRT_2, 0.0).unwrap());
    assert!(matches!(decoherence_scan(&nine, 1.1 * td, 20), Err(Error::Support(_))));
    let times: Vec<f64> = [3.0, 6.0, 9.0]
        .iter()
        .map(|&x0| {
            let psi = cat_state(&wide, x0, FRAC_1_SQRT_2, 0.0).unwrap();
            let w = wigner_transform(&density_from_pure(&psi), &nat()).unwrap();
            decoherence_scan(&w, 1.1 * td, 40).unwrap().first_nonneg_time
        })
        .collect();
    assert!(times.iter().all(|&t| t <= td + 1e-3), "{times:?}");
    // wider cats carry faster fringes, which diffusion removes sooner
    assert!(times.windows(2).all(|w| w[1] <= w[0]), "{times:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn exact_engine_conserves_mass_and_mean_momentum(seed in 0u64..10_000, t in 0.0..1.3f64) {
        let w0 = field_of(&random_state(&mut rng(seed)));
        let w = evolve_exact(&w0, t).unwrap();
        prop_assert!((w.normalization() - 1.0).abs() < 1e-6);
        let mean_p = |f: &WignerField| {
            let (_, pp) = marginals(f);
            f.p_values().iter().zip(&pp).map(|(p, d)| p * d).sum::<f64>() * f.dp()
        };
        prop_assert!((mean_p(&w) - mean_p(&w0)).abs() < 1e-8);
    }
}

