//! Induction motor physics: the nonlinear dq model, slip, and the
//! linearized per-phase admittance in continuous and discrete time.

pub mod admittance;
pub mod ode;
pub mod params;
pub mod slip;

pub use admittance::{admittance, admittance_polynomials, bilinear, discretize_admittance};
pub use ode::{
    electromagnetic_torque, integrate, motor_derivative, Drive, HeldDrive, IntegrationSettings,
    MotorState, Rk4, SinusoidalDrive, Trajectory,
};
pub use params::{MotorParams, SlipPoint};
pub use slip::{steady_state_slip, steady_state_slip_with, SlipSettings};
