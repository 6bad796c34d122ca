//! Browser front end: pick a state, evolve it under position decoherence and
//! coarse-grain it, watching the negative regions of the Wigner function.

use std::f64::consts::FRAC_1_SQRT_2;

use wasm_bindgen::prelude::*;
use wigner_deco::evolution::{evolve_exact, scales};
use wigner_deco::smoothing::{coarse_grain, CovarianceMatrix2};
use wigner_deco::states::{cat_state, density_from_pure, gaussian_packet, oscillator_eigenstate};
use wigner_deco::wigner::{min_value, wigner_transform};
use wigner_deco::{PhysicalParams, PositionGrid, WignerField};

fn js(e: wigner_deco::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// RGBA pixels, highest momentum in the first row; red above zero, blue below,
/// white at zero, scaled by `hi`.
pub fn diverging_rgba(field: &WignerField, hi: f64) -> Vec<u8> {
    let n = field.x_grid().len();
    let mut out = Vec::with_capacity(4 * n * n);
    for k in (0..n).rev() {
        for i in 0..n {
            let v = if hi > 0.0 { (field.at(i, k) / hi).clamp(-1.0, 1.0) } else { 0.0 };
            let fade = (255.0 * (1.0 - v.abs())).round() as u8;
            let rgb = if v >= 0.0 { [255, fade, fade] } else { [fade, fade, 255] };
            out.extend_from_slice(&rgb);
            out.push(255);
        }
    }
    out
}

#[wasm_bindgen]
pub struct Explorer {
    initial: WignerField,
    current: WignerField,
    floor: f64,
    det: f64,
}

#[wasm_bindgen]
impl Explorer {
    /// `kind` is `"gaussian"`, `"cat"` or `"eigenstate"`; `x0` doubles as the
    /// eigenstate index for the last one. Natural units on the 256-point grid.
    #[wasm_bindgen(constructor)]
    pub fn new(kind: &str, x0: f64, sigma: f64) -> Result<Explorer, JsError> {
        let grid = PositionGrid::standard();
        let params = PhysicalParams::natural();
        let psi = match kind {
            "gaussian" => gaussian_packet(&grid, x0, 0.0, sigma, &params),
            "cat" => cat_state(&grid, x0, sigma, 0.0),
            "eigenstate" => oscillator_eigenstate(&grid, x0.max(0.0).round() as usize, sigma),
            other => return Err(JsError::new(&format!("unknown state kind {other:?}"))),
        }
        .map_err(js)?;
        let initial = wigner_transform(&density_from_pure(&psi), &params).map_err(js)?;
        let floor = min_value(&initial).relative_floor;
        Ok(Explorer { current: initial.clone(), initial, floor, det: 0.0 })
    }

    /// Evolves the initial field to `t` and smooths it with `c·I`; returns the
    /// total smoothing determinant.
    pub fn update(&mut self, t: f64, c: f64) -> Result<f64, JsError> {
        let evolved = evolve_exact(&self.initial, t).map_err(js)?;
        let cov = CovarianceMatrix2::isotropic(c).map_err(js)?;
        self.current = coarse_grain(&evolved, &cov).map_err(js)?;
        self.floor = min_value(&self.current).relative_floor;
        let cw = wigner_deco::evolution::propagator_covariance(t, self.initial.params()).map_err(js)?.matrix;
        self.det = (cw.c_xx + c) * (cw.c_pp + c) - cw.c_xp * cw.c_xp;
        Ok(self.det)
    }

    pub fn rgba(&self) -> Vec<u8> {
        diverging_rgba(&self.current, self.current.max_abs())
    }

    pub fn size(&self) -> usize {
        self.current.x_grid().len()
    }

    #[wasm_bindgen(getter)]
    pub fn relative_floor(&self) -> f64 {
        self.floor
    }

    #[wasm_bindgen(getter)]
    pub fn determinant(&self) -> f64 {
        self.det
    }

    pub fn decoherence_time() -> f64 {
        scales(&PhysicalParams::natural()).t_d
    }

    pub fn default_sigma() -> f64 {
        FRAC_1_SQRT_2
    }
}
