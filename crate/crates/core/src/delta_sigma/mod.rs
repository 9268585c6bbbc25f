//! Delta-sigma modulator: filters, NTF representations, quantizer and the
//! sample-accurate error-feedback simulation.

pub mod filter;
pub mod modulator;
pub mod ntf;
pub mod quantizer;
pub mod realization;

pub use filter::{Df2t, FrequencyResponse, RationalFilter};
pub use modulator::{autocorrelation, reconstruct_output, simulate, ModulatorConfig, ModulatorRun};
pub use ntf::{evaluate, Ntf, NtfDocument, NtfFir};
pub use quantizer::Quantizer;
pub use realization::ff_fb_from_ntf;
