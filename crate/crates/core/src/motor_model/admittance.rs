use num_complex::Complex;

use super::params::MotorParams;
use crate::delta_sigma::filter::RationalFilter;
use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{lit, Real};

/// Continuous-time per-phase admittance of the linearized motor at slip
/// `sigma`, as polynomials in `s` (ascending powers): `(num, den)`.
///
/// `Y(s) = (Rr/(Ls Lr) + sigma s / Ls)
///       / (Rr Rs/(Lr Ls) + (Rr/Lr + sigma Rs/Ls) s + sigma D s^2)`
pub fn admittance_polynomials<T: Real>(params: &MotorParams<T>, sigma: T) -> (Vec<T>, Vec<T>) {
    let (rs, rr) = (params.stator_resistance, params.rotor_resistance);
    let (ls, lr) = (params.stator_inductance, params.rotor_inductance);
    let num = vec![rr / (ls * lr), sigma / ls];
    let den = vec![
        rr * rs / (lr * ls),
        rr / lr + sigma * rs / ls,
        sigma * params.leakage(),
    ];
    (num, den)
}

/// `Y(j omega)` in siemens; `omega` in rad/s.
pub fn admittance<T: Real>(params: &MotorParams<T>, sigma: T, omega: T) -> Complex<T> {
    let (num, den) = admittance_polynomials(params, sigma);
    let s = Complex::new(T::zero(), omega);
    poly::eval_ascending(&num, s) / poly::eval_ascending(&den, s)
}

/// Bilinear (Tustin) map of `num(s)/den(s)` to `z^-1` coefficients,
/// `s = 2 fs (1 - z^-1) / (1 + z^-1)`, without pre-warping.
pub fn bilinear<T: Real>(num_s: &[T], den_s: &[T], fs: T) -> Result<RationalFilter<T>> {
    let trim = |c: &[T]| -> Vec<T> {
        let mut v = c.to_vec();
        while v.len() > 1 && v.last().is_some_and(|x| x.is_zero()) {
            v.pop();
        }
        v
    };
    let (num_s, den_s) = (trim(num_s), trim(den_s));
    let order = num_s.len().max(den_s.len()) - 1;
    let k = lit::<T>(2.0) * fs;
    let minus = [T::one(), -T::one()];
    let plus = [T::one(), T::one()];

    let map = |c: &[T]| -> Vec<T> {
        let mut out = vec![T::zero(); order + 1];
        let mut kp = T::one();
        for (p, &cp) in c.iter().enumerate() {
            let mut term = vec![cp * kp];
            for _ in 0..p {
                term = poly::mul(&term, &minus);
            }
            for _ in p..order {
                term = poly::mul(&term, &plus);
            }
            for (o, t) in out.iter_mut().zip(term) {
                *o += t;
            }
            kp *= k;
        }
        out
    };
    RationalFilter::new(map(&num_s), map(&den_s))
}

/// Discrete-time admittance `Y(z)` at sample rate `fs` (Hz).
pub fn discretize_admittance<T: Real>(
    params: &MotorParams<T>,
    sigma: T,
    fs: T,
) -> Result<RationalFilter<T>> {
    params.validate()?;
    if !(sigma >= T::zero() && sigma <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "slip must lie in [0, 1], got {sigma}"
        )));
    }
    if !(fs > T::zero()) {
        return Err(Error::InvalidParameter("fs must be positive".into()));
    }
    let (num, den) = admittance_polynomials(params, sigma);
    let filter = bilinear(&num, &den, fs)?;
    filter.ensure_stable()?;
    Ok(filter)
}
