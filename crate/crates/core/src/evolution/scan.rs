use crate::error::{Error, Result};
use crate::evolution::{evolve_exact, propagator_covariance, scales};
use crate::numeric::par_map;
use crate::wigner::{min_value, WignerField, NONNEG_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub t: f64,
    pub min_w: f64,
    pub relative_floor: f64,
    pub det_cw: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// Start of the final non-negative stretch, refined by bisection.
    pub first_nonneg_time: f64,
    pub trace: Vec<ScanPoint>,
    /// The floor dipped back below zero after an earlier non-negative sample.
    pub multiple_crossings: bool,
}

fn probe(w0: &WignerField, t: f64) -> Result<ScanPoint> {
    let rep = min_value(&evolve_exact(w0, t)?);
    Ok(ScanPoint {
        t,
        min_w: rep.min_value,
        relative_floor: rep.relative_floor,
        det_cw: propagator_covariance(t, w0.params())?.det(),
    })
}

/// Samples the relative floor of `evolve_exact(w0, t)` at `t_j = j·t_max/n_steps`,
/// `j = 0..=n_steps`, and locates the onset of permanent non-negativity to within
/// `1e-3·t₀`.
pub fn decoherence_scan(w0: &WignerField, t_max: f64, n_steps: usize) -> Result<ScanResult> {
    let sc = scales(w0.params());
    if t_max.is_nan() || t_max < sc.t_d {
        return Err(Error::InvalidParams(format!("t_max = {t_max} is below t_D = {}", sc.t_d)));
    }
    if n_steps == 0 {
        return Err(Error::InvalidParams("n_steps must be >= 1".into()));
    }
    let trace: Vec<ScanPoint> = par_map(n_steps + 1, |j| probe(w0, t_max * j as f64 / n_steps as f64))
        .into_iter()
        .collect::<Result<_>>()?;

    let negative = |p: &ScanPoint| p.relative_floor < NONNEG_FLOOR;
    let Some(last_neg) = trace.iter().rposition(negative) else {
        return Ok(ScanResult { first_nonneg_time: 0.0, trace, multiple_crossings: false });
    };
    if last_neg == n_steps {
        return Err(Error::NeverPositive { t_max, relative_floor: trace[last_neg].relative_floor });
    }
    let multiple_crossings = trace[..last_neg].iter().any(|p| !negative(p));

    let (mut lo, mut hi) = (trace[last_neg].t, trace[last_neg + 1].t);
    while hi - lo > 1e-3 * sc.t0 {
        let mid = 0.5 * (lo + hi);
        if negative(&probe(w0, mid)?) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ScanResult { first_nonneg_time: hi, trace, multiple_crossings })
}
