//! NTF synthesis: the conventional high-pass design and the
//! motor-weighted optimal FIR design.

pub mod noise;
pub mod optimize;
pub mod qcqp;
pub mod spec;
pub mod standard;
pub mod weighting;

pub use noise::{noise_power, noise_power_quadratic, noise_power_quadrature};
pub use optimize::{optimize_ntf_fir, optimize_ntf_fir_report, DesignReport};
pub use qcqp::{BallConstraint, Qcqp, QcqpSettings, QcqpSolution};
pub use spec::DesignSpec;
pub use standard::{peak_gain, synthesize_standard};
pub use weighting::{impulse_response_to_convergence, weighting_from_admittance, Weighting};
