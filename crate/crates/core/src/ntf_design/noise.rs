//! Weighted quantization-noise power `(1/pi) int_0^pi |NTF|^2 |W|^2 dw`.

use crate::delta_sigma::{FrequencyResponse, Ntf, NtfFir};
use crate::error::{Error, Result};
use crate::quadrature;
use crate::scalar::{lit, Real};

use super::weighting::Weighting;

/// Quadratic form `q' R q` for an FIR NTF.
pub fn noise_power_quadratic<T: Real>(ntf: &NtfFir<T>, weighting: &Weighting<T>) -> Result<T> {
    let q = ntf.coefficients();
    let n = q.len() - 1;
    if weighting.lags() < n {
        return Err(Error::InvalidParameter(format!(
            "weighting has {} lags, NTF order is {n}",
            weighting.lags()
        )));
    }
    let r = &weighting.r;
    let mut acc = T::zero();
    for (i, &qi) in q.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            acc += qi * qj * r[i.abs_diff(j)];
        }
    }
    Ok(acc)
}

/// Adaptive quadrature of `|NTF|^2 |W|^2` over `[0, pi]`, split
/// geometrically towards DC where the weighting is sharply peaked.
pub fn noise_power_quadrature<T: Real, F: FrequencyResponse<T> + ?Sized>(
    ntf: &F,
    weighting: &Weighting<T>,
) -> T {
    let mut edges = vec![T::zero()];
    for k in (1..=8).rev() {
        edges.push(T::PI() * lit::<T>(10.0).powi(-k));
    }
    edges.push(T::PI());
    let mut total = T::zero();
    for pair in edges.windows(2) {
        let (v, _) = quadrature::integrate(
            |w: T| ntf.response(w).norm_sqr() * weighting.power_density(w),
            pair[0],
            pair[1],
            T::min_positive_value(),
            lit(1e-11),
            4000,
        );
        total += v;
    }
    total / T::PI()
}

/// Exact quadratic form for FIR NTFs (when the weighting has enough
/// lags), quadrature otherwise.
pub fn noise_power<T: Real>(ntf: &Ntf<T>, weighting: &Weighting<T>) -> Result<T> {
    match ntf {
        Ntf::Fir(q) if weighting.lags() >= q.order() => noise_power_quadratic(q, weighting),
        _ => {
            if weighting.filter.is_none() {
                return Err(Error::InvalidParameter(
                    "rational NTF needs a weighting with a known filter".into(),
                ));
            }
            Ok(noise_power_quadrature(ntf, weighting))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta_sigma::RationalFilter;

    #[test]
    fn flat_weighting_is_coefficient_energy() {
        let q = NtfFir::new(vec![1.0, -0.5, 0.25]).unwrap();
        let w = Weighting::<f64>::flat(2);
        assert_eq!(noise_power_quadratic(&q, &w).unwrap(), 1.3125);
        let quad = noise_power_quadrature(&q, &w);
        assert!((quad - 1.3125).abs() < 1e-10);
    }

    #[test]
    fn routes_agree_for_one_pole_weighting() {
        let f = RationalFilter::new(vec![1.0f64], vec![1.0, -0.9]).unwrap();
        let w = Weighting::from_filter(&f, 3).unwrap();
        let q = NtfFir::new(vec![1.0, -0.8, 0.1, 0.05]).unwrap();
        let a = noise_power_quadratic(&q, &w).unwrap();
        let b = noise_power_quadrature(&q, &w);
        assert!((a - b).abs() < 1e-9 * a, "{a} vs {b}");
    }

    #[test]
    fn rational_without_filter_rejected() {
        let w = Weighting::from_autocorrelation(vec![1.0, 0.2]).unwrap();
        let ntf = Ntf::Rational(RationalFilter::new(vec![1.0, -1.0], vec![1.0, -0.5]).unwrap());
        assert!(noise_power(&ntf, &w).is_err());
    }
}
