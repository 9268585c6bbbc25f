//! Causal rational transfer functions in z^-1.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::Real;

/// Anything with a frequency response on the unit circle.
pub trait FrequencyResponse<T: Real> {
    /// Response at `e^{j omega}`, omega in rad/sample.
    fn response(&self, omega: T) -> Complex<T>;

    fn magnitude(&self, omega: T) -> T {
        self.response(omega).norm()
    }
}

/// `H(z) = (num[0] + num[1] z^-1 + ...) / (1 + den[1] z^-1 + ...)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFilter<T> {
    num: Vec<T>,
    den: Vec<T>,
}

impl<T: Real> RationalFilter<T> {
    /// Builds a filter, normalizing so that `den[0] == 1`.
    pub fn new(num: Vec<T>, den: Vec<T>) -> Result<Self> {
        if num.is_empty() || den.is_empty() {
            return Err(Error::InvalidParameter("empty coefficient list".into()));
        }
        if num.iter().chain(den.iter()).any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("filter coefficients"));
        }
        let d0 = den[0];
        if d0.is_zero() {
            return Err(Error::InvalidParameter(
                "den[0] must be non-zero for a causal filter".into(),
            ));
        }
        let mut f = Self {
            num: num.into_iter().map(|c| c / d0).collect(),
            den: den.into_iter().map(|c| c / d0).collect(),
        };
        f.den[0] = T::one();
        Ok(f)
    }

    pub fn fir(coeffs: Vec<T>) -> Result<Self> {
        Self::new(coeffs, vec![T::one()])
    }

    pub fn identity() -> Self {
        Self {
            num: vec![T::one()],
            den: vec![T::one()],
        }
    }

    pub fn num(&self) -> &[T] {
        &self.num
    }

    pub fn den(&self) -> &[T] {
        &self.den
    }

    pub fn is_fir(&self) -> bool {
        self.den[1..].iter().all(|c| c.is_zero())
    }

    /// Series connection `self * other`.
    pub fn cascade(&self, other: &Self) -> Self {
        Self {
            num: poly::mul(&self.num, &other.num),
            den: poly::mul(&self.den, &other.den),
        }
    }

    pub fn poles(&self) -> Vec<Complex<T>> {
        poly::roots_z_inv(&self.den)
    }

    pub fn zeros(&self) -> Vec<Complex<T>> {
        poly::roots_z_inv(&self.num)
    }

    pub fn max_pole_magnitude(&self) -> T {
        self.poles()
            .iter()
            .map(|p| p.norm())
            .fold(T::zero(), T::max)
    }

    /// All poles strictly inside the unit circle.
    pub fn is_stable(&self) -> bool {
        self.max_pole_magnitude() < T::one()
    }

    pub fn ensure_stable(&self) -> Result<()> {
        let m = self.max_pole_magnitude();
        if m < T::one() {
            Ok(())
        } else {
            Err(Error::UnstableFilter {
                max_pole_magnitude: m.to_f64_lossy(),
            })
        }
    }

    /// First `n` samples of the impulse response.
    pub fn impulse_response(&self, n: usize) -> Vec<T> {
        let mut state = Df2t::new(self);
        (0..n)
            .map(|k| state.process(if k == 0 { T::one() } else { T::zero() }))
            .collect()
    }

    /// Filters a whole sequence from zero initial state.
    pub fn filter(&self, input: &[T]) -> Vec<T> {
        let mut state = Df2t::new(self);
        input.iter().map(|&x| state.process(x)).collect()
    }
}

impl<T: Real> FrequencyResponse<T> for RationalFilter<T> {
    fn response(&self, omega: T) -> Complex<T> {
        let z_inv = Complex::from_polar(T::one(), -omega);
        poly::eval_ascending(&self.num, z_inv) / poly::eval_ascending(&self.den, z_inv)
    }
}

/// Transposed direct-form-II state for a [`RationalFilter`].
#[derive(Debug, Clone)]
pub struct Df2t<T> {
    b: Vec<T>,
    a: Vec<T>,
    s: Vec<T>,
}

impl<T: Real> Df2t<T> {
    pub fn new(filter: &RationalFilter<T>) -> Self {
        let n = filter.num.len().max(filter.den.len());
        let mut b = filter.num.clone();
        let mut a = filter.den.clone();
        b.resize(n, T::zero());
        a.resize(n, T::zero());
        Self {
            b,
            a,
            s: vec![T::zero(); n.saturating_sub(1)],
        }
    }

    /// Output the filter will produce for the next input if `b[0] == 0`,
    /// i.e. the strictly causal part already determined by past inputs.
    #[inline]
    pub fn pending(&self) -> T {
        self.s.first().copied().unwrap_or_else(T::zero)
    }

    #[inline]
    pub fn process(&mut self, x: T) -> T {
        let y = self.b[0] * x + self.pending();
        let n = self.s.len();
        for k in 0..n {
            let next = if k + 1 < n { self.s[k + 1] } else { T::zero() };
            self.s[k] = next + self.b[k + 1] * x - self.a[k + 1] * y;
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normalizes_leading_denominator() {
        let f = RationalFilter::new(vec![2.0, 4.0], vec![2.0, -1.0]).unwrap();
        assert_eq!(f.num(), &[1.0, 2.0]);
        assert_eq!(f.den(), &[1.0, -0.5]);
    }

    #[test]
    fn rejects_zero_leading_denominator() {
        assert!(RationalFilter::new(vec![1.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn one_pole_impulse_response_is_geometric() {
        let f = RationalFilter::new(vec![1.0], vec![1.0, -0.5]).unwrap();
        let h = f.impulse_response(6);
        for (k, v) in h.iter().enumerate() {
            assert!((v - 0.5f64.powi(k as i32)).abs() < 1e-15);
        }
        assert!(f.is_stable());
    }

    #[test]
    fn differencer_response() {
        let f = RationalFilter::fir(vec![1.0, -1.0]).unwrap();
        assert!(f.response(0.0).norm() < 1e-15);
        assert!((f.response(PI).norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn integrator_is_not_strictly_stable() {
        let f = RationalFilter::new(vec![1.0], vec![1.0, -1.0]).unwrap();
        assert!(!f.is_stable());
        assert!(f.ensure_stable().is_err());
    }

    #[test]
    fn pending_output_matches_strictly_causal_filter() {
        // b0 = 0: output is fully determined before the input arrives.
        let f = RationalFilter::new(vec![0.0, 0.3, -0.1], vec![1.0, -0.4, 0.2]).unwrap();
        let mut st = Df2t::new(&f);
        let xs = [1.0f64, -2.0, 0.5, 3.0, 0.0, 1.5];
        let reference = f.filter(&xs);
        for (k, &x) in xs.iter().enumerate() {
            let before = st.pending();
            let y = st.process(x);
            assert_eq!(before, y);
            assert!((y - reference[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let f = RationalFilter::<f32>::fir(vec![1.0, -1.0]).unwrap();
        assert!((f.magnitude(std::f32::consts::PI) - 2.0).abs() < 1e-6);
    }
}
