//! Conventional high-pass NTF: every zero at DC, Butterworth pole
//! pattern, cutoff tuned so the out-of-band gain hits the bound exactly.

use num_complex::Complex;

use super::spec::DesignSpec;
use crate::delta_sigma::filter::{FrequencyResponse, RationalFilter};
use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{lit, Real};

fn poles_for_cutoff<T: Real>(order: usize, cutoff: T) -> Vec<Complex<T>> {
    let n = T::from_usize_lossy(order);
    (0..order)
        .map(|k| {
            // left-half-plane analog Butterworth pole on the unit circle
            let theta = T::PI() * (lit::<T>(2.0) * T::from_usize_lossy(k) + n + T::one())
                / (lit::<T>(2.0) * n);
            let lp = Complex::from_polar(T::one(), theta);
            // low-pass to high-pass: s -> cutoff / s
            let hp = Complex::new(cutoff, T::zero()) / lp;
            // bilinear with unit constant: z = (1 + s) / (1 - s)
            (Complex::new(T::one(), T::zero()) + hp) / (Complex::new(T::one(), T::zero()) - hp)
        })
        .collect()
}

fn build<T: Real>(order: usize, cutoff: T) -> RationalFilter<T> {
    let mut num = vec![T::one()];
    for _ in 0..order {
        num = poly::mul(&num, &[T::one(), -T::one()]);
    }
    let den = poly::from_reciprocal_roots(&poles_for_cutoff(order, cutoff));
    RationalFilter::new(num, den).expect("finite coefficients")
}

/// Gain at `w = pi`, where the high-pass response peaks.
fn nyquist_gain<T: Real>(order: usize, cutoff: T) -> T {
    build(order, cutoff).magnitude(T::PI())
}

/// Conventional NTF of `spec.order` with `max |NTF| = spec.gamma`.
pub fn synthesize_standard<T: Real>(spec: &DesignSpec<T>) -> Result<RationalFilter<T>> {
    spec.validate()?;
    let order = spec.order;
    // log-cutoff bisection; gain grows monotonically from 1 to infinity
    let mut lo = lit::<T>(-30.0);
    let mut hi = lit::<T>(30.0);
    let g_lo = nyquist_gain(order, lo.exp());
    let g_hi = nyquist_gain(order, hi.exp());
    if !(g_lo < spec.gamma && g_hi > spec.gamma) {
        return Err(Error::GainUnreachable {
            gamma: spec.gamma.to_f64_lossy(),
            order,
            min: g_lo.to_f64_lossy(),
            max: g_hi.to_f64_lossy(),
        });
    }
    let mut cutoff = T::one();
    for _ in 0..300 {
        let mid = (lo + hi) * lit(0.5);
        cutoff = mid.exp();
        let g = nyquist_gain(order, cutoff);
        if (g - spec.gamma).abs() <= spec.tol * lit(0.5) {
            break;
        }
        if g > spec.gamma {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let ntf = build(order, cutoff);
    let achieved = peak_gain(&ntf, 16 * spec.grid_points);
    if (achieved - spec.gamma).abs() > spec.tol {
        return Err(Error::GainUnreachable {
            gamma: spec.gamma.to_f64_lossy(),
            order,
            min: g_lo.to_f64_lossy(),
            max: g_hi.to_f64_lossy(),
        });
    }
    ntf.ensure_stable()?;
    Ok(ntf)
}

/// Largest magnitude over a uniform grid of `points` frequencies in
/// `[0, pi]` (both ends included).
pub fn peak_gain<T: Real, F: FrequencyResponse<T> + ?Sized>(filter: &F, points: usize) -> T {
    let last = T::from_usize_lossy(points.max(2) - 1);
    (0..points.max(2))
        .map(|i| filter.magnitude(T::PI() * T::from_usize_lossy(i) / last))
        .fold(T::zero(), T::max)
}
