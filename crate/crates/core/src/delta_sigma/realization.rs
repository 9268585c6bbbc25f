//! Loop-filter realization of a given NTF for the feed-forward /
//! feedback modulator structure.

use super::filter::RationalFilter;
use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{lit, Real};

/// Loop filters `(FF, FB)` with `FF = 1/NTF` and `FB = 1 - NTF`, giving a
/// unit STF and the requested NTF in the linearized loop.
///
/// Zeros of the NTF on the unit circle at DC are accepted (they turn into
/// integrators in `FF`). Any zero strictly outside the unit circle makes
/// `FF` unstable and is reported as [`Error::NonMinimumPhase`].
pub fn ff_fb_from_ntf<T: Real>(
    ntf: &RationalFilter<T>,
) -> Result<(RationalFilter<T>, RationalFilter<T>)> {
    ntf.ensure_stable()?;
    let num = ntf.num();
    if (num[0] - T::one()).abs() > T::epsilon() * lit(16.0) {
        return Err(Error::InvalidParameter(
            "NTF impulse response must start with 1".into(),
        ));
    }

    // Peel off exact DC zeros before root finding: repeated roots at z = 1
    // are exactly where Aberth iteration loses accuracy.
    let mut rest = num.to_vec();
    let scale: T = num.iter().map(|c| c.abs()).sum();
    while rest.len() > 1 && rest.iter().copied().sum::<T>().abs() <= scale * lit(1e-12) {
        rest = deflate_unit_root(&rest);
    }
    let worst = poly::roots_z_inv(&rest)
        .iter()
        .map(|z| z.norm())
        .fold(T::zero(), T::max);
    if worst >= T::one() {
        return Err(Error::NonMinimumPhase {
            max_zero_magnitude: worst.to_f64_lossy(),
        });
    }

    let ff = RationalFilter::new(ntf.den().to_vec(), num.to_vec())?;
    let mut fb_num = poly::sub(ntf.den(), num);
    fb_num[0] = T::zero();
    while fb_num.len() > 1 && fb_num.last().is_some_and(|c| c.is_zero()) {
        fb_num.pop();
    }
    let fb = RationalFilter::new(fb_num, ntf.den().to_vec())?;
    Ok((ff, fb))
}

/// Divides `c(z^-1)` by `(1 - z^-1)`.
fn deflate_unit_root<T: Real>(c: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(c.len() - 1);
    let mut acc = T::zero();
    for &v in &c[..c.len() - 1] {
        acc += v;
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta_sigma::filter::FrequencyResponse;

    #[test]
    fn unity_ntf_gives_open_quantizer() {
        let (ff, fb) = ff_fb_from_ntf(&RationalFilter::<f64>::identity()).unwrap();
        assert_eq!(ff.num(), &[1.0]);
        assert_eq!(ff.den(), &[1.0]);
        assert!(fb.num().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn first_order_loop() {
        let ntf = RationalFilter::fir(vec![1.0, -1.0]).unwrap();
        let (ff, fb) = ff_fb_from_ntf(&ntf).unwrap();
        assert_eq!(fb.num(), &[0.0, 1.0]);
        assert_eq!(fb.den(), &[1.0]);
        assert_eq!(ff.num(), &[1.0]);
        assert_eq!(ff.den(), &[1.0, -1.0]);
    }

    #[test]
    fn non_minimum_phase_is_rejected() {
        // zero at z = 2
        let ntf = RationalFilter::fir(vec![1.0, -2.0]).unwrap();
        assert!(matches!(
            ff_fb_from_ntf(&ntf),
            Err(Error::NonMinimumPhase { .. })
        ));
    }

    #[test]
    fn loop_reproduces_ntf() {
        // 2nd order with DC zeros and stable poles.
        let ntf = RationalFilter::new(vec![1.0, -2.0, 1.0], vec![1.0, -1.2, 0.45]).unwrap();
        let (ff, fb) = ff_fb_from_ntf(&ntf).unwrap();
        // 1/(1 + FF FB) as a rational function: FF FB = (d_ff... ) compare on a grid
        for i in 1..100 {
            let w = std::f64::consts::PI * i as f64 / 100.0;
            let loop_ntf = 1.0 / (1.0 + ff.response(w) * fb.response(w));
            assert!((loop_ntf - ntf.response(w)).norm() < 1e-10);
            let stf = ff.response(w) * loop_ntf;
            assert!((stf.re - 1.0).abs() < 1e-10 && stf.im.abs() < 1e-10);
        }
    }
}
