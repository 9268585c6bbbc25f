//! Nonlinear dq model in the stationary frame and its fixed-step RK4
//! integration.

use serde::{Deserialize, Serialize};

use super::params::MotorParams;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Stator/rotor dq currents (A) and rotor mechanical speed (rad/s).
///
/// The same type carries time derivatives (A/s, rad/s^2).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MotorState<T> {
    pub isd: T,
    pub isq: T,
    pub ird: T,
    pub irq: T,
    pub omega_m: T,
}

impl<T: Real> MotorState<T> {
    pub fn zero() -> Self {
        Self::from_array([T::zero(); 5])
    }

    pub fn to_array(self) -> [T; 5] {
        [self.isd, self.isq, self.ird, self.irq, self.omega_m]
    }

    pub fn from_array(a: [T; 5]) -> Self {
        Self {
            isd: a[0],
            isq: a[1],
            ird: a[2],
            irq: a[3],
            omega_m: a[4],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> T {
        self.to_array()
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Magnitude of the stator current space vector.
    pub fn stator_current(&self) -> T {
        self.isd.hypot(self.isq)
    }

    fn axpy(self, h: T, d: Self) -> Self {
        let (a, b) = (self.to_array(), d.to_array());
        Self::from_array(std::array::from_fn(|i| a[i] + h * b[i]))
    }
}

/// Electromagnetic torque `(3/4) P Lm (isq ird - isd irq)`, N m.
pub fn electromagnetic_torque<T: Real>(state: &MotorState<T>, params: &MotorParams<T>) -> T {
    lit::<T>(0.75)
        * T::from_u32(params.poles).expect("pole count")
        * params.magnetizing_inductance
        * (state.isq * state.ird - state.isd * state.irq)
}

/// Time derivative of the motor state for stator voltages `(vsd, vsq)`
/// and load torque `load`.
pub fn motor_derivative<T: Real>(
    state: &MotorState<T>,
    vsd: T,
    vsq: T,
    load: T,
    params: &MotorParams<T>,
) -> Result<MotorState<T>> {
    if !state.is_finite() || !vsd.is_finite() || !vsq.is_finite() || !load.is_finite() {
        return Err(Error::NonFinite("motor derivative inputs"));
    }
    Ok(derivative_unchecked(state, vsd, vsq, load, params))
}

#[inline]
fn derivative_unchecked<T: Real>(
    x: &MotorState<T>,
    vsd: T,
    vsq: T,
    load: T,
    p: &MotorParams<T>,
) -> MotorState<T> {
    let (rs, rr) = (p.stator_resistance, p.rotor_resistance);
    let (ls, lr, lm) = (
        p.stator_inductance,
        p.rotor_inductance,
        p.magnetizing_inductance,
    );
    let leak = p.leakage();
    // electrical rotor speed omega_m P / 2
    let we = x.omega_m * p.pole_pairs();
    let ks = T::one() / (leak * ls);
    let kr = T::one() / (leak * lr);

    let disd =
        (-rs * x.isd + we * lm * lm / lr * x.isq + rr * lm / lr * x.ird + we * lm * x.irq + vsd)
            * ks;
    let disq =
        (-we * lm * lm / lr * x.isd - rs * x.isq - we * lm * x.ird + rr * lm / lr * x.irq + vsq)
            * ks;
    let dird =
        (rs * lm / ls * x.isd - we * lm * x.isq - rr * x.ird - we * lr * x.irq - lm / ls * vsd)
            * kr;
    let dirq =
        (we * lm * x.isd + rs * lm / ls * x.isq + we * lr * x.ird - rr * x.irq - lm / ls * vsq)
            * kr;
    let domega = (electromagnetic_torque(x, p) - load - p.damping * x.omega_m) / p.inertia;

    MotorState {
        isd: disd,
        isq: disq,
        ird: dird,
        irq: dirq,
        omega_m: domega,
    }
}

/// Source of dq stator voltages.
///
/// `t` is the evaluation instant inside an RK4 step and `step_start` the
/// beginning of that step. Smooth drives use `t`; sampled (held) drives
/// use `step_start` so the voltage stays constant across the step.
pub trait Drive<T> {
    fn voltage(&self, t: T, step_start: T) -> (T, T);
}

impl<T: Real, F: Fn(T) -> (T, T)> Drive<T> for F {
    fn voltage(&self, t: T, _step_start: T) -> (T, T) {
        self(t)
    }
}

/// Balanced 3-phase sinusoidal supply with per-phase peak `amplitude` (V)
/// at `frequency` (Hz), positive sequence.
///
/// With the amplitude-preserving-power dq transform the space vector has
/// length `sqrt(3/2) * amplitude`: `vsd = A cos(wt)`, `vsq = A sin(wt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidalDrive<T> {
    pub amplitude: T,
    pub frequency: T,
}

impl<T: Real> SinusoidalDrive<T> {
    pub fn new(amplitude: T, frequency: T) -> Self {
        Self {
            amplitude,
            frequency,
        }
    }

    /// Length of the dq voltage vector.
    pub fn dq_amplitude(&self) -> T {
        self.amplitude * lit::<T>(1.5).sqrt()
    }

    pub fn omega(&self) -> T {
        T::TAU() * self.frequency
    }
}

impl<T: Real> Drive<T> for SinusoidalDrive<T> {
    fn voltage(&self, t: T, _step_start: T) -> (T, T) {
        let a = self.dq_amplitude();
        let (s, c) = (self.omega() * t).sin_cos();
        (a * c, a * s)
    }
}

/// Pulse streams held for one sample period each (zero-order hold).
/// Zero after the end of the streams.
#[derive(Debug, Clone)]
pub struct HeldDrive<T> {
    pub vsd: Vec<T>,
    pub vsq: Vec<T>,
    pub fs: T,
}

impl<T: Real> Drive<T> for HeldDrive<T> {
    fn voltage(&self, _t: T, step_start: T) -> (T, T) {
        let idx = (step_start * self.fs + lit(1e-6)).floor();
        match idx.to_usize() {
            Some(i) => (
                self.vsd.get(i).copied().unwrap_or_else(T::zero),
                self.vsq.get(i).copied().unwrap_or_else(T::zero),
            ),
            None => (T::zero(), T::zero()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationSettings<T> {
    /// Step size, s.
    pub dt: T,
    /// Abort when any state component exceeds this magnitude.
    pub divergence_bound: T,
    /// Keep every n-th state in the trajectory (1 keeps all).
    pub record_every: usize,
}

impl<T: Real> Default for IntegrationSettings<T> {
    fn default() -> Self {
        Self {
            dt: lit(1e-5),
            divergence_bound: lit(1e6),
            record_every: 1,
        }
    }
}

/// Timestamped states.
#[derive(Debug, Clone, Default)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<MotorState<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> Option<(T, MotorState<T>)> {
        Some((*self.times.last()?, *self.states.last()?))
    }
}

/// Explicit 4th-order Runge-Kutta stepper for the motor ODE.
#[derive(Debug, Clone)]
pub struct Rk4<'p, T> {
    params: &'p MotorParams<T>,
    pub state: MotorState<T>,
    pub t: T,
    pub steps: usize,
    dt: T,
    /// Hold `omega_m` fixed (locked rotor or prescribed speed).
    pub freeze_speed: bool,
}

impl<'p, T: Real> Rk4<'p, T> {
    pub fn new(params: &'p MotorParams<T>, initial: MotorState<T>, dt: T) -> Self {
        Self {
            params,
            state: initial,
            t: T::zero(),
            steps: 0,
            dt,
            freeze_speed: false,
        }
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    #[inline]
    fn f<D: Drive<T> + ?Sized, L: Fn(T) -> T>(
        &self,
        x: &MotorState<T>,
        t: T,
        drive: &D,
        load: &L,
    ) -> MotorState<T> {
        let (vsd, vsq) = drive.voltage(t, self.t);
        let mut d = derivative_unchecked(x, vsd, vsq, load(t), self.params);
        if self.freeze_speed {
            d.omega_m = T::zero();
        }
        d
    }

    /// Advances one step.
    pub fn step<D: Drive<T> + ?Sized, L: Fn(T) -> T>(&mut self, drive: &D, load: &L) {
        let h = self.dt;
        let half = h * lit(0.5);
        let x = self.state;
        let t = self.t;
        let k1 = self.f(&x, t, drive, load);
        let k2 = self.f(&x.axpy(half, k1), t + half, drive, load);
        let k3 = self.f(&x.axpy(half, k2), t + half, drive, load);
        let k4 = self.f(&x.axpy(h, k3), t + h, drive, load);
        let (a, b1, b2, b3, b4) = (
            x.to_array(),
            k1.to_array(),
            k2.to_array(),
            k3.to_array(),
            k4.to_array(),
        );
        let sixth = h / lit(6.0);
        self.state = MotorState::from_array(std::array::from_fn(|i| {
            a[i] + sixth * (b1[i] + lit::<T>(2.0) * (b2[i] + b3[i]) + b4[i])
        }));
        self.steps += 1;
        // t = n dt avoids drift from repeated addition
        self.t = T::from_usize_lossy(self.steps) * h;
    }
}

/// Fixed-step RK4 trajectory of the motor from `initial` over `[0, t_end]`.
pub fn integrate<T: Real, D: Drive<T> + ?Sized, L: Fn(T) -> T>(
    params: &MotorParams<T>,
    drive: &D,
    load: L,
    t_end: T,
    settings: &IntegrationSettings<T>,
    initial: MotorState<T>,
) -> Result<Trajectory<T>> {
    params.validate()?;
    if !(settings.dt > T::zero()) || !settings.dt.is_finite() {
        return Err(Error::InvalidParameter("dt must be positive".into()));
    }
    if !(t_end >= settings.dt) {
        return Err(Error::InvalidParameter("t_end must be at least dt".into()));
    }
    if !initial.is_finite() {
        return Err(Error::NonFinite("initial state"));
    }
    let stride = settings.record_every.max(1);
    let n_steps = (t_end / settings.dt).round().to_usize().unwrap_or(0);
    let mut rk = Rk4::new(params, initial, settings.dt);
    let mut traj = Trajectory {
        times: Vec::with_capacity(n_steps / stride + 2),
        states: Vec::with_capacity(n_steps / stride + 2),
    };
    traj.times.push(T::zero());
    traj.states.push(initial);
    for _ in 0..n_steps {
        rk.step(drive, &load);
        let bad = !rk.state.is_finite() || rk.state.max_abs() > settings.divergence_bound;
        if bad {
            return Err(Error::Divergence {
                t: rk.t.to_f64_lossy(),
                bound: settings.divergence_bound.to_f64_lossy(),
            });
        }
        if rk.steps.is_multiple_of(stride) || rk.steps == n_steps {
            traj.times.push(rk.t);
            traj.states.push(rk.state);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> MotorParams<f64> {
        MotorParams::reference()
    }

    #[test]
    fn origin_is_equilibrium() {
        let d = motor_derivative(&MotorState::zero(), 0.0, 0.0, 0.0, &params()).unwrap();
        assert_eq!(d, MotorState::zero());
    }

    #[test]
    fn unit_d_voltage_from_rest() {
        let p = params();
        let d = motor_derivative(&MotorState::zero(), 1.0, 0.0, 0.0, &p).unwrap();
        // Hand substitution of the reference constants.
        let leak = 1.0 - 0.4425f64.powi(2) / (0.4592 * 0.457);
        let expect_isd = 1.0 / (leak * 0.4592);
        let expect_ird = -0.4425 / (0.4592 * leak * 0.457);
        assert!((d.isd - expect_isd).abs() < 1e-12);
        assert!((d.ird - expect_ird).abs() < 1e-12);
        assert!((d.isd - 32.53).abs() < 0.02);
        assert!((d.ird + 31.50).abs() < 0.02);
        assert_eq!(d.isq, 0.0);
        assert_eq!(d.irq, 0.0);
        assert_eq!(d.omega_m, 0.0);
    }

    #[test]
    fn no_speed_coupling_at_standstill() {
        let p = params();
        let x = MotorState {
            isd: 1.0,
            isq: -2.0,
            ird: 0.5,
            irq: 0.7,
            omega_m: 0.0,
        };
        let d = motor_derivative(&x, 0.0, 0.0, 0.0, &p).unwrap();
        let leak = p.leakage();
        let (rs, rr, ls, lr, lm) = (17.7, 13.8, 0.4592, 0.457, 0.4425);
        let isd = (-rs * x.isd + rr * lm / lr * x.ird) / (leak * ls);
        let irq = (rs * lm / ls * x.isq - rr * x.irq) / (leak * lr);
        assert!((d.isd - isd).abs() < 1e-12);
        assert!((d.irq - irq).abs() < 1e-12);
    }

    #[test]
    fn torque_term() {
        let p = params();
        let x = MotorState {
            isd: 0.0,
            isq: 2.0,
            ird: 3.0,
            irq: 0.0,
            omega_m: 10.0,
        };
        let d = motor_derivative(&x, 0.0, 0.0, 1.0, &p).unwrap();
        let torque = 0.75 * 6.0 * 4.0 * 0.4425;
        assert!((d.omega_m - (torque - 1.0 - 0.025 * 10.0) / 0.025).abs() < 1e-9);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(motor_derivative(&MotorState::zero(), f64::NAN, 0.0, 0.0, &params()).is_err());
    }

    #[test]
    fn zero_drive_stays_at_rest() {
        let traj = integrate(
            &params(),
            &|_t: f64| (0.0, 0.0),
            |_t| 0.0,
            0.01,
            &IntegrationSettings::default(),
            MotorState::zero(),
        )
        .unwrap();
        assert_eq!(traj.states.len(), 1001);
        assert!(traj.states.iter().all(|s| *s == MotorState::zero()));
    }

    #[test]
    fn divergence_reported_with_time() {
        let res = integrate(
            &params(),
            &|_t: f64| (1e9, 0.0),
            |_t| 0.0,
            0.01,
            &IntegrationSettings::default(),
            MotorState::zero(),
        );
        match res {
            Err(Error::Divergence { t, .. }) => assert!(t > 0.0 && t < 0.01),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn held_drive_is_constant_within_a_step() {
        let d = HeldDrive {
            vsd: vec![1.0, 2.0, 3.0],
            vsq: vec![0.0; 3],
            fs: 1e5,
        };
        assert_eq!(d.voltage(1.5e-5, 1e-5).0, 2.0);
        assert_eq!(d.voltage(2e-5, 1e-5).0, 2.0);
        assert_eq!(d.voltage(0.0, 5e-5).0, 0.0);
    }

    #[test]
    fn rejects_bad_steps() {
        let s = IntegrationSettings {
            dt: 0.0,
            ..Default::default()
        };
        assert!(integrate(
            &params(),
            &|_t: f64| (0.0, 0.0),
            |_t| 0.0,
            1.0,
            &s,
            MotorState::zero()
        )
        .is_err());
        assert!(integrate(
            &params(),
            &|_t: f64| (0.0, 0.0),
            |_t| 0.0,
            1e-7,
            &IntegrationSettings::default(),
            MotorState::zero()
        )
        .is_err());
    }
}
