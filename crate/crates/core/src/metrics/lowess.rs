//! Classical Lowess: locally weighted scatterplot smoothing.
//!
//! For each point the smoother runs a weighted linear regression over the
//! nearest `ceil(frac * n)` points with tricube distance weights.
//! Robustifying iterations refit after down-weighting residual outliers
//! with bisquare weights scaled by six times the median absolute residual.
//!
//! Window selection is defined exactly: the `r` nearest points by
//! `|x_j - x_i|`, ties resolved toward smaller `x`. The implementation
//! expands greedily around `i`; an independent check can reproduce the
//! same window by sorting on `(distance, x)`.

use crate::numeric::{real_from_usize, Real};

use super::MetricsError;

/// Smooth a series. `points` must hold at least two entries with strictly
/// increasing x. `frac` in (0, 1] selects the neighborhood share; `iters`
/// counts robustifying passes. Returns `(x, fitted)` pairs.
pub fn lowess_smooth<R: Real>(
    points: &[(R, R)],
    frac: f64,
    iters: usize,
) -> Result<Vec<(R, R)>, MetricsError> {
    let n = points.len();
    if n < 2 {
        return Err(MetricsError::SeriesTooShort(n));
    }
    if !points.windows(2).all(|w| w[0].0 < w[1].0) {
        return Err(MetricsError::SeriesNotIncreasing);
    }
    if !(frac > 0.0 && frac <= 1.0) {
        return Err(MetricsError::FracOutOfRange(frac));
    }
    // mathematical ceil(frac * n) guarded against float noise
    let window = ((frac * n as f64) - 1e-9).ceil() as usize;
    let window = window.min(n);
    if window < 2 {
        return Err(MetricsError::WindowTooSmall { window, n });
    }

    let xs: Vec<R> = points.iter().map(|p| p.0).collect();
    let ys: Vec<R> = points.iter().map(|p| p.1).collect();
    let mut robustness = vec![R::one(); n];
    let mut fitted = ys.clone();

    for pass in 0..=iters {
        for (i, slot) in fitted.iter_mut().enumerate() {
            let (lo, hi) = window_bounds(&xs, i, window);
            *slot = fit_at(&xs, &ys, &robustness, lo, hi, i);
        }
        if pass == iters {
            break;
        }
        let mut abs_res: Vec<R> = (0..n).map(|i| (ys[i] - fitted[i]).abs()).collect();
        let scale = median_in_place(&mut abs_res);
        if scale <= R::zero() {
            break;
        }
        let six = real_from_usize::<R>(6);
        for i in 0..n {
            let u = (ys[i] - fitted[i]).abs() / (six * scale);
            robustness[i] = if u < R::one() {
                let w = R::one() - u * u;
                w * w
            } else {
                R::zero()
            };
        }
    }

    Ok(xs.into_iter().zip(fitted).collect())
}

/// Inclusive bounds of the `r` nearest points around `i`, ties toward
/// smaller x.
fn window_bounds<R: Real>(xs: &[R], i: usize, r: usize) -> (usize, usize) {
    let n = xs.len();
    let mut lo = i;
    let mut hi = i;
    while hi - lo + 1 < r {
        if lo == 0 {
            hi += 1;
        } else if hi == n - 1 {
            lo -= 1;
        } else {
            let left = xs[i] - xs[lo - 1];
            let right = xs[hi + 1] - xs[i];
            if left <= right {
                lo -= 1;
            } else {
                hi += 1;
            }
        }
    }
    (lo, hi)
}

/// Tricube-weighted linear fit over `[lo, hi]`, evaluated at `xs[i]`.
fn fit_at<R: Real>(xs: &[R], ys: &[R], robustness: &[R], lo: usize, hi: usize, i: usize) -> R {
    let x0 = xs[i];
    let h = (x0 - xs[lo]).abs().max((xs[hi] - x0).abs());
    let mut w_sum = R::zero();
    let mut wx_sum = R::zero();
    let mut wy_sum = R::zero();
    let mut weights = Vec::with_capacity(hi - lo + 1);
    for j in lo..=hi {
        let w = tricube((xs[j] - x0).abs(), h) * robustness[j];
        weights.push(w);
        w_sum += w;
        wx_sum += w * xs[j];
        wy_sum += w * ys[j];
    }
    if w_sum <= R::zero() {
        // every neighbor down-weighted to zero: keep the raw value
        return ys[i];
    }
    let x_bar = wx_sum / w_sum;
    let y_bar = wy_sum / w_sum;
    let mut sxx = R::zero();
    let mut sxy = R::zero();
    for (j, &w) in (lo..=hi).zip(weights.iter()) {
        let dx = xs[j] - x_bar;
        sxx += w * dx * dx;
        sxy += w * dx * (ys[j] - y_bar);
    }
    if sxx <= R::zero() {
        return y_bar;
    }
    y_bar + (sxy / sxx) * (x0 - x_bar)
}

fn tricube<R: Real>(distance: R, h: R) -> R {
    if h <= R::zero() {
        return R::one();
    }
    let u = distance / h;
    if u >= R::one() {
        return R::zero();
    }
    let t = R::one() - u * u * u;
    t * t * t
}

fn median_in_place<R: Real>(values: &mut [R]) -> R {
    values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN residuals"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        let two = real_from_usize::<R>(2);
        (values[n / 2 - 1] + values[n / 2]) / two
    }
}
