use serde::{Deserialize, Serialize};

use crate::delta_sigma::{simulate, ModulatorConfig, Ntf, Quantizer, RationalFilter};
use crate::error::{Error, Result};
use crate::motor_model::{admittance, discretize_admittance, MotorParams};
use crate::ntf_design::{noise_power, weighting_from_admittance, Weighting};
use crate::scalar::{lit, Real};

/// Normalization of the frequency-domain noise integral.
///
/// `HalfBand` counts the shaped noise over `[0, pi]` with weight
/// `1/(2 pi)`, which is what the reference tables use. `FullBand` uses
/// `1/pi`, i.e. the total power of the filtered white error sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseScale {
    #[default]
    HalfBand,
    FullBand,
}

impl NoiseScale {
    pub fn factor<T: Real>(self) -> T {
        match self {
            NoiseScale::HalfBand => lit(0.5),
            NoiseScale::FullBand => T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrMethod {
    Frequency,
    Time,
}

impl std::fmt::Display for SnrMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SnrMethod::Frequency => "frequency",
            SnrMethod::Time => "time",
        })
    }
}

impl std::str::FromStr for SnrMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frequency" => Ok(SnrMethod::Frequency),
            "time" => Ok(SnrMethod::Time),
            other => Err(Error::InvalidParameter(format!(
                "method must be `frequency` or `time`, got `{other}`"
            ))),
        }
    }
}

/// Sinusoidal voltage command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSignal<T> {
    pub v_peak: T,
    #[serde(rename = "f")]
    pub frequency: T,
}

/// Settings shared by every SNR evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig<T> {
    pub fs: T,
    pub drive: DriveSignal<T>,
    pub quantizer_levels: usize,
    pub full_scale: T,
    pub noise_scale: NoiseScale,
    pub transient_periods: usize,
    pub measured_periods: usize,
}

impl<T: Real> Default for AnalysisConfig<T> {
    fn default() -> Self {
        Self {
            fs: lit(1e5),
            drive: DriveSignal {
                v_peak: lit(190.0),
                frequency: lit(50.0),
            },
            quantizer_levels: 2,
            full_scale: lit(320.0),
            noise_scale: NoiseScale::HalfBand,
            transient_periods: 10,
            measured_periods: 40,
        }
    }
}

impl<T: Real> AnalysisConfig<T> {
    pub fn quantizer(&self) -> Result<Quantizer<T>> {
        Quantizer::new(self.quantizer_levels, self.full_scale)
    }

    /// `fs / f_drive`, which must be an integer for coherent measurement.
    pub fn samples_per_period(&self) -> Result<usize> {
        let ratio = self.fs / self.drive.frequency;
        let rounded = ratio.round();
        if !ratio.is_finite()
            || rounded < T::one()
            || (ratio - rounded).abs() > lit::<T>(1e-9) * ratio
        {
            return Err(Error::InvalidParameter(format!(
                "fs / f_drive = {ratio} is not an integer"
            )));
        }
        rounded.to_usize().ok_or(Error::InvalidParameter(
            "samples per period out of range".into(),
        ))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fs > T::zero()) || !self.fs.is_finite() {
            return Err(Error::InvalidParameter("fs must be positive".into()));
        }
        if !(self.drive.frequency > T::zero()) || !(self.drive.v_peak >= T::zero()) {
            return Err(Error::InvalidParameter(
                "drive needs positive frequency and non-negative amplitude".into(),
            ));
        }
        self.quantizer()?;
        Ok(())
    }
}

/// SNR of the stator current for one NTF at one slip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrReport<T> {
    pub snr_db: T,
    /// `I_S^2` in A^2.
    pub signal_power: T,
    /// `I_N^2` in A^2.
    pub noise_power: T,
    pub method: SnrMethod,
    pub sigma: T,
    pub ntf_id: String,
    /// Only meaningful for the time-domain method.
    pub overloaded: bool,
    pub config: AnalysisConfig<T>,
}

impl<T: Real> SnrReport<T> {
    fn new(
        signal_power: T,
        noise_power: T,
        method: SnrMethod,
        sigma: T,
        ntf_id: &str,
        overloaded: bool,
        config: &AnalysisConfig<T>,
    ) -> Result<Self> {
        if !(signal_power > T::zero() && noise_power > T::zero())
            || !signal_power.is_finite()
            || !noise_power.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "SNR undefined for powers {signal_power} / {noise_power}"
            )));
        }
        Ok(Self {
            snr_db: lit::<T>(10.0) * (signal_power / noise_power).log10(),
            signal_power,
            noise_power,
            method,
            sigma,
            ntf_id: ntf_id.to_owned(),
            overloaded,
            config: *config,
        })
    }
}

/// An NTF with a table label.
#[derive(Debug, Clone, PartialEq)]
pub struct NtfEntry<T> {
    pub id: String,
    pub ntf: Ntf<T>,
    /// Slip the NTF was optimized for, if any.
    pub designed_for_sigma: Option<T>,
}

impl<T: Real> NtfEntry<T> {
    pub fn new(
        id: impl Into<String>,
        ntf: impl Into<Ntf<T>>,
        designed_for_sigma: Option<T>,
    ) -> Self {
        Self {
            id: id.into(),
            ntf: ntf.into(),
            designed_for_sigma,
        }
    }
}

fn ideal_signal_power<T: Real>(params: &MotorParams<T>, sigma: T, config: &AnalysisConfig<T>) -> T {
    let omega = T::TAU() * config.drive.frequency;
    let y = admittance(params, sigma, omega);
    config.drive.v_peak * config.drive.v_peak * lit(0.5) * y.norm_sqr()
}

/// Frequency-domain SNR: `I_S^2 = v^2/2 |Y|^2` against the shaped,
/// admittance-weighted quantization noise `scale * dq^2/12 * E`.
pub fn snr_frequency<T: Real>(
    entry: &NtfEntry<T>,
    params: &MotorParams<T>,
    sigma: T,
    config: &AnalysisConfig<T>,
) -> Result<SnrReport<T>> {
    let lags = entry.ntf.as_fir().map_or(1, |q| q.order().max(1));
    let weighting = weighting_from_admittance(params, sigma, config.fs, lags)?;
    snr_frequency_weighted(entry, params, sigma, &weighting, config)
}

/// [`snr_frequency`] with a precomputed weighting for this slip.
pub fn snr_frequency_weighted<T: Real>(
    entry: &NtfEntry<T>,
    params: &MotorParams<T>,
    sigma: T,
    weighting: &Weighting<T>,
    config: &AnalysisConfig<T>,
) -> Result<SnrReport<T>> {
    config.validate()?;
    entry.ntf.validate()?;
    let step = config.quantizer()?.step();
    let shaped = noise_power(&entry.ntf, weighting)?;
    let noise = config.noise_scale.factor::<T>() * step * step / lit(12.0) * shaped;
    let signal = ideal_signal_power(params, sigma, config);
    SnrReport::new(
        signal,
        noise,
        SnrMethod::Frequency,
        sigma,
        &entry.id,
        false,
        config,
    )
}

/// Modulator input `v sin(2 pi n / P)` with exact integer phases.
pub fn drive_samples<T: Real>(config: &AnalysisConfig<T>, len: usize) -> Result<Vec<T>> {
    let period = config.samples_per_period()?;
    let p = T::from_usize_lossy(period);
    Ok((0..len)
        .map(|n| config.drive.v_peak * (T::TAU() * T::from_usize_lossy(n % period) / p).sin())
        .collect())
}

/// Modulator output for the configured drive over the whole run
/// (transient plus measurement).
pub fn modulate_drive<T: Real>(
    ntf: &Ntf<T>,
    config: &AnalysisConfig<T>,
) -> Result<crate::delta_sigma::ModulatorRun<T>> {
    let period = config.samples_per_period()?;
    let len = period * (config.transient_periods + config.measured_periods);
    let input = drive_samples(config, len)?;
    let modulator = ModulatorConfig::new(ntf.clone(), config.quantizer()?, config.fs)?;
    simulate(&modulator, &input)
}

/// Time-domain SNR: nonlinear modulator, output filtered by the
/// discretized admittance, coherent fundamental extraction.
pub fn snr_time<T: Real>(
    entry: &NtfEntry<T>,
    params: &MotorParams<T>,
    sigma: T,
    config: &AnalysisConfig<T>,
) -> Result<SnrReport<T>> {
    config.validate()?;
    let run = modulate_drive(&entry.ntf, config)?;
    let y = discretize_admittance(params, sigma, config.fs)?;
    measure_current(&run.output, run.overloaded, &y, sigma, &entry.id, config)
}

/// SNR of the current obtained by filtering `voltage` through `admittance`.
pub fn measure_current<T: Real>(
    voltage: &[T],
    overloaded: bool,
    admittance: &RationalFilter<T>,
    sigma: T,
    ntf_id: &str,
    config: &AnalysisConfig<T>,
) -> Result<SnrReport<T>> {
    if config.measured_periods < 20 {
        return Err(Error::InvalidParameter(format!(
            "at least 20 measured periods needed, got {}",
            config.measured_periods
        )));
    }
    let period = config.samples_per_period()?;
    let start = period * config.transient_periods;
    let end = start + period * config.measured_periods;
    if voltage.len() < end {
        return Err(Error::InvalidParameter(format!(
            "stream has {} samples, window needs {end}",
            voltage.len()
        )));
    }
    let current = admittance.filter(&voltage[..end]);
    let proj = coherent_projection(&current[start..end], period, start)?;
    SnrReport::new(
        proj.signal_power,
        proj.residual_power,
        SnrMethod::Time,
        sigma,
        ntf_id,
        overloaded,
        config,
    )
}

/// Fundamental extracted over an integer number of periods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection<T> {
    /// Coefficient of `cos(2 pi n / P)`.
    pub cos_amplitude: T,
    /// Coefficient of `sin(2 pi n / P)`.
    pub sin_amplitude: T,
    /// Mean square of the fitted sinusoid.
    pub signal_power: T,
    /// Mean square of what remains.
    pub residual_power: T,
    /// Mean square of the input.
    pub total_power: T,
}

impl<T: Real> Projection<T> {
    pub fn amplitude(&self) -> T {
        self.cos_amplitude.hypot(self.sin_amplitude)
    }
}

/// Projects `x` onto the sinusoids of period `period` samples. `offset`
/// is the absolute index of `x[0]`, so phases refer to the whole run.
pub fn coherent_projection<T: Real>(
    x: &[T],
    period: usize,
    offset: usize,
) -> Result<Projection<T>> {
    if period < 3 || x.is_empty() || !x.len().is_multiple_of(period) {
        return Err(Error::InvalidParameter(format!(
            "projection needs a whole number of periods ({} samples, period {period})",
            x.len()
        )));
    }
    let p = T::from_usize_lossy(period);
    let table: Vec<(T, T)> = (0..period)
        .map(|k| {
            let (s, c) = (T::TAU() * T::from_usize_lossy(k) / p).sin_cos();
            (c, s)
        })
        .collect();
    let phase = |i: usize| table[(offset + i) % period];
    let n = T::from_usize_lossy(x.len());
    let (mut a, mut b) = (T::zero(), T::zero());
    for (i, &v) in x.iter().enumerate() {
        let (c, s) = phase(i);
        a += v * c;
        b += v * s;
    }
    a = lit::<T>(2.0) * a / n;
    b = lit::<T>(2.0) * b / n;
    let (mut residual, mut total) = (T::zero(), T::zero());
    for (i, &v) in x.iter().enumerate() {
        let (c, s) = phase(i);
        let r = v - a * c - b * s;
        residual += r * r;
        total += v * v;
    }
    Ok(Projection {
        cos_amplitude: a,
        sin_amplitude: b,
        signal_power: (a * a + b * b) * lit(0.5),
        residual_power: residual / n,
        total_power: total / n,
    })
}
