//! Delta-sigma modulation for induction motor drives, with noise transfer
//! functions shaped against the motor's own admittance.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below name the double-precision instantiations used by the
//! design and analysis paths.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod delta_sigma;
pub mod error;
pub mod linalg;
pub mod motor_model;
pub mod ntf_design;
pub mod poly;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type MotorParams64 = motor_model::MotorParams<f64>;
pub type MotorState64 = motor_model::MotorState<f64>;
pub type SlipPoint64 = motor_model::SlipPoint<f64>;
pub type RationalFilter64 = delta_sigma::RationalFilter<f64>;
pub type Ntf64 = delta_sigma::Ntf<f64>;
pub type NtfFir64 = delta_sigma::NtfFir<f64>;
pub type Quantizer64 = delta_sigma::Quantizer<f64>;
pub type ModulatorConfig64 = delta_sigma::ModulatorConfig<f64>;
pub type DesignSpec64 = ntf_design::DesignSpec<f64>;
pub type Weighting64 = ntf_design::Weighting<f64>;
pub type AnalysisConfig64 = analysis::AnalysisConfig<f64>;
pub type SnrReport64 = analysis::SnrReport<f64>;
pub type SweepTable64 = analysis::SweepTable<f64>;

pub type MotorParams32 = motor_model::MotorParams<f32>;
pub type RationalFilter32 = delta_sigma::RationalFilter<f32>;
pub type NtfFir32 = delta_sigma::NtfFir<f32>;
pub type Quantizer32 = delta_sigma::Quantizer<f32>;
