use super::filter::{Df2t, RationalFilter};
use super::ntf::Ntf;
use super::quantizer::Quantizer;
use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{lit, Real};

/// Everything the time-domain modulator needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulatorConfig<T> {
    pub ntf: Ntf<T>,
    pub quantizer: Quantizer<T>,
    /// Sample rate in Hz (one sample every `1/fs` s).
    pub fs: T,
}

impl<T: Real> ModulatorConfig<T> {
    pub fn new(ntf: Ntf<T>, quantizer: Quantizer<T>, fs: T) -> Result<Self> {
        ntf.validate()?;
        if !(fs > T::zero()) || !fs.is_finite() {
            return Err(Error::InvalidParameter("fs must be positive".into()));
        }
        Ok(Self { ntf, quantizer, fs })
    }

    pub fn sample_period(&self) -> T {
        fs_to_period(self.fs)
    }

    pub fn quantize(&self, v: T) -> T {
        self.quantizer.quantize(v)
    }
}

fn fs_to_period<T: Real>(fs: T) -> T {
    T::one() / fs
}

/// Output of [`simulate`].
#[derive(Debug, Clone)]
pub struct ModulatorRun<T> {
    /// Quantizer output `y(n)`.
    pub output: Vec<T>,
    /// Quantization error `e(n) = y(n) - u(n)`.
    pub error: Vec<T>,
    /// Some `|e(n)|` exceeded half a quantization step.
    pub overloaded: bool,
    pub first_overload: Option<usize>,
}

/// Error-feedback modulator.
///
/// The quantizer input is `u(n) = w(n) + sum_{k>=1} h_k e(n-k)` where
/// `h` is the impulse response of `NTF - 1`, so the output satisfies
/// `y = w + NTF * e` exactly, for any NTF with a unit leading sample.
pub fn simulate<T: Real>(config: &ModulatorConfig<T>, input: &[T]) -> Result<ModulatorRun<T>> {
    if input.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("modulator input"));
    }
    let half_step = config.quantizer.step() * lit(0.5);
    let mut output = Vec::with_capacity(input.len());
    let mut error = Vec::with_capacity(input.len());
    let mut first_overload = None;

    let mut record = |n: usize, u: T, output: &mut Vec<T>, error: &mut Vec<T>| -> Result<T> {
        if !u.is_finite() {
            return Err(Error::Instability { index: n });
        }
        let y = config.quantizer.quantize(u);
        let e = y - u;
        if e.abs() > half_step && first_overload.is_none() {
            first_overload = Some(n);
        }
        output.push(y);
        error.push(e);
        Ok(e)
    };

    match &config.ntf {
        Ntf::Fir(q) => {
            let taps = &q.coefficients()[1..];
            for (n, &w) in input.iter().enumerate() {
                let mut u = w;
                for (k, &h) in taps.iter().enumerate() {
                    if n > k {
                        u += h * error[n - 1 - k];
                    }
                }
                record(n, u, &mut output, &mut error)?;
            }
        }
        Ntf::Rational(f) => {
            let mut fb_num = poly::sub(f.num(), f.den());
            fb_num[0] = T::zero();
            let feedback = RationalFilter::new(fb_num, f.den().to_vec())?;
            let mut state = Df2t::new(&feedback);
            for (n, &w) in input.iter().enumerate() {
                let u = w + state.pending();
                let e = record(n, u, &mut output, &mut error)?;
                state.process(e);
            }
        }
    }

    Ok(ModulatorRun {
        output,
        error,
        overloaded: first_overload.is_some(),
        first_overload,
    })
}

/// `w + NTF * e`, the output the error-feedback identity predicts.
pub fn reconstruct_output<T: Real>(ntf: &Ntf<T>, input: &[T], error: &[T]) -> Vec<T> {
    let shaped = match ntf {
        Ntf::Fir(q) => {
            let c = q.coefficients();
            (0..error.len())
                .map(|n| {
                    c.iter()
                        .enumerate()
                        .take(n + 1)
                        .map(|(k, &ck)| ck * error[n - k])
                        .fold(T::zero(), |a, b| a + b)
                })
                .collect::<Vec<_>>()
        }
        Ntf::Rational(f) => f.filter(error),
    };
    input.iter().zip(shaped).map(|(&w, s)| w + s).collect()
}

/// Normalized autocorrelation of `x` (mean removed) at `lag`.
pub fn autocorrelation<T: Real>(x: &[T], lag: usize) -> T {
    if x.len() <= lag {
        return T::zero();
    }
    let mean = x.iter().copied().sum::<T>() / T::from_usize_lossy(x.len());
    let energy: T = x.iter().map(|&v| (v - mean) * (v - mean)).sum();
    if energy.is_zero() {
        return T::zero();
    }
    let cross: T = x
        .iter()
        .zip(&x[lag..])
        .map(|(&a, &b)| (a - mean) * (b - mean))
        .sum();
    cross / energy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta_sigma::ntf::NtfFir;

    fn config(q: Vec<f64>, levels: usize) -> ModulatorConfig<f64> {
        ModulatorConfig::new(
            Ntf::Fir(NtfFir::new(q).unwrap()),
            Quantizer::new(levels, 320.0).unwrap(),
            1e5,
        )
        .unwrap()
    }

    #[test]
    fn unity_ntf_is_memoryless() {
        let cfg = config(vec![1.0], 3);
        let w = [100.0, 170.0, -200.0, 0.0, 319.0];
        let run = simulate(&cfg, &w).unwrap();
        let direct: Vec<f64> = w.iter().map(|&v| cfg.quantize(v)).collect();
        assert_eq!(run.output, direct);
    }

    #[test]
    fn first_order_tracks_dc() {
        let cfg = config(vec![1.0, -1.0], 2);
        let w = vec![80.0; 100_000];
        let run = simulate(&cfg, &w).unwrap();
        let mean = run.output.iter().sum::<f64>() / run.output.len() as f64;
        assert!((mean - 80.0).abs() < 0.8, "mean {mean}");
        assert!(!run.overloaded);
    }

    #[test]
    fn rejects_non_finite_input() {
        let cfg = config(vec![1.0, -1.0], 2);
        assert!(simulate(&cfg, &[0.0, f64::NAN]).is_err());
    }

    #[test]
    fn unstable_feedback_is_detected() {
        // Huge feedback coefficients blow up the quantizer input.
        let cfg = config(vec![1.0, 1e200, 1e200], 2);
        let w = vec![1.0; 50];
        match simulate(&cfg, &w) {
            Err(Error::Instability { index }) => assert!(index < 50),
            Ok(run) => assert!(run.overloaded),
            Err(e) => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn overload_flag_when_input_exceeds_range() {
        let cfg = config(vec![1.0, -1.0], 2);
        let run = simulate(&cfg, &[1000.0; 10]).unwrap();
        assert!(run.overloaded);
        assert_eq!(run.first_overload, Some(0));
    }

    #[test]
    fn rational_ntf_identity() {
        let f = RationalFilter::new(vec![1.0, -2.0, 1.0], vec![1.0, -1.2, 0.45]).unwrap();
        let cfg = ModulatorConfig::new(Ntf::Rational(f), Quantizer::bridge(), 1e5).unwrap();
        let w: Vec<f64> = (0..20_000)
            .map(|n| 150.0 * (std::f64::consts::TAU * n as f64 / 2000.0).sin())
            .collect();
        let run = simulate(&cfg, &w).unwrap();
        let y = reconstruct_output(&cfg.ntf, &w, &run.error);
        for (a, b) in y.iter().zip(&run.output) {
            assert!((a - b).abs() < 1e-9 * 320.0);
        }
    }

    #[test]
    fn autocorrelation_of_alternating_sequence() {
        let x: Vec<f64> = (0..1000)
            .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        assert!((autocorrelation(&x, 1) + 1.0).abs() < 1e-2);
        assert!((autocorrelation(&x, 0) - 1.0).abs() < 1e-12);
    }
}
