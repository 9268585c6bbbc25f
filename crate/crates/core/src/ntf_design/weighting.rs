use crate::delta_sigma::filter::{Df2t, RationalFilter};
use crate::error::{Error, Result};
use crate::motor_model::{discretize_admittance, MotorParams};
use crate::scalar::{lit, Real};

/// Spectral weighting for the noise objective: the autocorrelation of the
/// impulse response of a weighting filter `W(z)`,
/// `r(k) = (1/pi) int_0^pi |W(e^{jw})|^2 cos(k w) dw`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weighting<T> {
    pub r: Vec<T>,
    /// The weighting filter itself, when known.
    pub filter: Option<RationalFilter<T>>,
    pub sigma: Option<T>,
    pub fs: Option<T>,
}

impl<T: Real> Weighting<T> {
    /// Weighting from a raw autocorrelation sequence.
    pub fn from_autocorrelation(r: Vec<T>) -> Result<Self> {
        check_autocorrelation(&r)?;
        Ok(Self {
            r,
            filter: None,
            sigma: None,
            fs: None,
        })
    }

    /// Flat weighting `W = 1`.
    pub fn flat(lags: usize) -> Self {
        let mut r = vec![T::zero(); lags + 1];
        r[0] = T::one();
        Self {
            r,
            filter: Some(RationalFilter::identity()),
            sigma: None,
            fs: None,
        }
    }

    /// Lags `0..=lags` of the autocorrelation of a stable filter.
    pub fn from_filter(filter: &RationalFilter<T>, lags: usize) -> Result<Self> {
        let h = impulse_response_to_convergence(filter)?;
        let r = (0..=lags)
            .map(|k| {
                if k >= h.len() {
                    T::zero()
                } else {
                    h.iter().zip(&h[k..]).map(|(&a, &b)| a * b).sum()
                }
            })
            .collect::<Vec<T>>();
        check_autocorrelation(&r)?;
        Ok(Self {
            r,
            filter: Some(filter.clone()),
            sigma: None,
            fs: None,
        })
    }

    pub fn lags(&self) -> usize {
        self.r.len() - 1
    }

    /// `|W(e^{jw})|^2`, from the filter if present, else from the
    /// (truncated) autocorrelation.
    pub fn power_density(&self, omega: T) -> T {
        use crate::delta_sigma::filter::FrequencyResponse;
        match &self.filter {
            Some(f) => f.response(omega).norm_sqr(),
            None => {
                self.r[0]
                    + lit::<T>(2.0)
                        * self.r[1..]
                            .iter()
                            .enumerate()
                            .map(|(k, &rk)| rk * (omega * T::from_usize_lossy(k + 1)).cos())
                            .sum::<T>()
            }
        }
    }
}

/// Autocorrelation of the discretized motor admittance at slip `sigma`.
pub fn weighting_from_admittance<T: Real>(
    params: &MotorParams<T>,
    sigma: T,
    fs: T,
    lags: usize,
) -> Result<Weighting<T>> {
    let y = discretize_admittance(params, sigma, fs)?;
    let mut w = Weighting::from_filter(&y, lags)?;
    w.sigma = Some(sigma);
    w.fs = Some(fs);
    Ok(w)
}

/// Impulse response long enough that the neglected tail carries less than
/// 1e-12 of the total energy. Unstable filters are rejected.
pub fn impulse_response_to_convergence<T: Real>(filter: &RationalFilter<T>) -> Result<Vec<T>> {
    filter.ensure_stable()?;
    let rho = filter.max_pole_magnitude();
    const BLOCK: usize = 4096;
    const LIMIT: usize = 1 << 26;
    let mut state = Df2t::new(filter);
    let mut h = Vec::with_capacity(BLOCK);
    let mut energy = T::zero();
    let tail_factor = if rho.is_zero() {
        T::one()
    } else {
        T::one() / (T::one() - rho * rho)
    };
    loop {
        for _ in 0..BLOCK {
            let x = if h.is_empty() { T::one() } else { T::zero() };
            let v = state.process(x);
            energy += v * v;
            h.push(v);
        }
        let n = h.len();
        // geometric bound on the remaining energy from the dominant pole,
        // with the last few samples standing in for the unknown modal mix
        let recent = h[n - 8..].iter().map(|&v| v * v).fold(T::zero(), T::max);
        let tail = recent * tail_factor * lit(8.0);
        if tail <= energy * lit(1e-12) || energy.is_zero() {
            let keep = h.iter().rposition(|v| !v.is_zero()).map_or(1, |i| i + 1);
            h.truncate(keep);
            return Ok(h);
        }
        if n >= LIMIT || !energy.is_finite() {
            return Err(Error::UnstableFilter {
                max_pole_magnitude: rho.to_f64_lossy(),
            });
        }
    }
}

/// `r(0) > 0` and the Toeplitz matrix is positive semidefinite, checked
/// through the Levinson-Durbin reflection coefficients.
fn check_autocorrelation<T: Real>(r: &[T]) -> Result<()> {
    if r.is_empty() || !(r[0] > T::zero()) {
        return Err(Error::InvalidParameter(
            "autocorrelation needs r(0) > 0".into(),
        ));
    }
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("autocorrelation"));
    }
    let m = r.len() - 1;
    let mut a = vec![T::zero(); m + 1];
    a[0] = T::one();
    let mut err = r[0];
    let slack = lit::<T>(1e-9);
    for k in 1..=m {
        if err <= r[0] * T::epsilon() {
            // singular but still semidefinite so far; remaining lags are
            // determined by the lower-order predictor
            break;
        }
        let acc: T = (0..k).map(|j| a[j] * r[k - j]).sum();
        let refl = -acc / err;
        if refl.abs() > T::one() + slack {
            return Err(Error::InvalidParameter(format!(
                "autocorrelation is not positive semidefinite (reflection {refl} at lag {k})"
            )));
        }
        let prev = a.clone();
        for j in 1..k {
            a[j] = prev[j] + refl * prev[k - j];
        }
        a[k] = refl;
        err *= (T::one() - refl * refl).max(T::zero());
    }
    Ok(())
}
