use super::ode::{Rk4, SinusoidalDrive};
use super::params::{MotorParams, SlipPoint};
use crate::error::{Error, Result};
use crate::motor_model::ode::MotorState;
use crate::scalar::{lit, Real};

/// Knobs for [`steady_state_slip_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlipSettings<T> {
    pub dt: T,
    /// Settled once `omega_m` moves less than this over one electrical
    /// period, rad/s.
    pub settle_tolerance: T,
    /// Give up after this much simulated time, s.
    pub max_time: T,
    /// Hold the rotor at standstill.
    pub locked_rotor: bool,
}

impl<T: Real> Default for SlipSettings<T> {
    fn default() -> Self {
        Self {
            dt: lit(1e-5),
            settle_tolerance: lit(1e-4),
            max_time: lit(20.0),
            locked_rotor: false,
        }
    }
}

/// Runs the motor from rest under an ideal sinusoidal supply and constant
/// load until the speed settles, then reports the slip.
pub fn steady_state_slip<T: Real>(
    params: &MotorParams<T>,
    load: T,
    drive_amplitude: T,
    drive_freq: T,
) -> Result<SlipPoint<T>> {
    steady_state_slip_with(
        params,
        load,
        drive_amplitude,
        drive_freq,
        &SlipSettings::default(),
    )
}

pub fn steady_state_slip_with<T: Real>(
    params: &MotorParams<T>,
    load: T,
    drive_amplitude: T,
    drive_freq: T,
    settings: &SlipSettings<T>,
) -> Result<SlipPoint<T>> {
    params.validate()?;
    if !load.is_finite() || !drive_amplitude.is_finite() || !drive_freq.is_finite() {
        return Err(Error::NonFinite("slip search inputs"));
    }
    if !(drive_freq > T::zero()) || !(drive_amplitude > T::zero()) {
        return Err(Error::InvalidParameter(
            "drive amplitude and frequency must be positive".into(),
        ));
    }
    let drive = SinusoidalDrive::new(drive_amplitude, drive_freq);
    let omega_w = drive.omega();
    if settings.locked_rotor {
        return SlipPoint::new(T::one(), omega_w);
    }

    let per_period = (T::one() / (drive_freq * settings.dt))
        .round()
        .to_usize()
        .unwrap_or(0)
        .max(1);
    let max_steps = (settings.max_time / settings.dt)
        .ceil()
        .to_usize()
        .unwrap_or(0);
    let load_fn = |_t: T| load;
    let mut rk = Rk4::new(params, MotorState::zero(), settings.dt);
    let mut previous = T::zero();
    let mut periods = 0usize;
    let mut last_delta = T::infinity();

    while rk.steps < max_steps {
        for _ in 0..per_period {
            rk.step(&drive, &load_fn);
        }
        periods += 1;
        let state = rk.state;
        if !state.is_finite() || state.max_abs() > lit(1e6) {
            return Err(Error::Divergence {
                t: rk.t.to_f64_lossy(),
                bound: 1e6,
            });
        }
        let speed = state.omega_m;
        // Start-up torque pulsations may briefly reverse the rotor; past
        // the first few periods a non-positive speed means the load won.
        if periods > 5 && speed <= T::zero() {
            return Err(Error::PullOut {
                t: rk.t.to_f64_lossy(),
                load: load.to_f64_lossy(),
            });
        }
        last_delta = (speed - previous).abs();
        previous = speed;
        if periods > 2 && last_delta < settings.settle_tolerance {
            let sigma = SlipPoint::slip_of(params, speed, omega_w);
            if sigma >= T::one() {
                return Err(Error::PullOut {
                    t: rk.t.to_f64_lossy(),
                    load: load.to_f64_lossy(),
                });
            }
            return SlipPoint::new(sigma.max(T::zero()), omega_w);
        }
    }
    Err(Error::NoConvergence {
        max_time: settings.max_time.to_f64_lossy(),
        last_delta: last_delta.to_f64_lossy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locked_rotor_slip_is_one() {
        let p = MotorParams::<f64>::reference();
        let s = SlipSettings {
            locked_rotor: true,
            ..Default::default()
        };
        let sp = steady_state_slip_with(&p, 0.0, 320.0, 50.0, &s).unwrap();
        assert_eq!(sp.sigma, 1.0);
    }

    #[test]
    fn short_horizon_reports_no_convergence() {
        let p = MotorParams::<f64>::reference();
        let s = SlipSettings {
            max_time: 0.05,
            ..Default::default()
        };
        assert!(matches!(
            steady_state_slip_with(&p, 0.0, 320.0, 50.0, &s),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn rejects_non_positive_drive() {
        let p = MotorParams::<f64>::reference();
        assert!(steady_state_slip(&p, 0.0, 0.0, 50.0).is_err());
    }
}
