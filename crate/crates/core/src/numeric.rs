//! Small numerical helpers shared by the transforms.

use std::sync::Arc;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Neumaier-compensated sum. Order-dependent only at the rounding level of the
/// compensation term, and always evaluated sequentially.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// Runs `f` over every 1-D lane of `data` along `axis`, in parallel when enabled.
/// Each lane is copied into a contiguous buffer, handed to `f` together with its
/// index, and written back.
pub(crate) fn for_each_lane<F>(data: &mut Array2<Complex64>, axis: Axis, f: F)
where
    F: Fn(usize, &mut [Complex64]) + Sync + Send,
{
    // lanes along `axis` are indexed by the other axis
    let other = Axis(1 - axis.index());
    let work = |(idx, mut lane): (usize, ndarray::ArrayViewMut1<Complex64>)| {
        let mut buf: Vec<Complex64> = lane.iter().copied().collect();
        f(idx, &mut buf);
        for (dst, src) in lane.iter_mut().zip(buf) {
            *dst = src;
        }
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.axis_iter_mut(other).into_par_iter().enumerate().for_each(work);
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.axis_iter_mut(other).enumerate().for_each(work);
    }
}

/// Unnormalized FFT of every lane along `axis`.
pub(crate) fn fft_axis(data: &mut Array2<Complex64>, axis: Axis, inverse: bool) {
    let n = data.len_of(axis);
    let fft = plan(n, inverse);
    for_each_lane(data, axis, |_, buf| fft.process(buf));
}

/// Unnormalized 2-D FFT.
pub(crate) fn fft2(data: &mut Array2<Complex64>, inverse: bool) {
    fft_axis(data, Axis(0), inverse);
    fft_axis(data, Axis(1), inverse);
}

/// Maps `f` over `0..n` and collects, in parallel when enabled. Output order is
/// the index order regardless of scheduling.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
