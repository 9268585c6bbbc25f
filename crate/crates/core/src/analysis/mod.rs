//! SNR of the motor current by the frequency-domain noise integral and by
//! time-domain simulation, and the NTF-by-slip comparison tables.

pub mod snr;
pub mod sweep;

pub use snr::{
    coherent_projection, drive_samples, measure_current, modulate_drive, snr_frequency,
    snr_frequency_weighted, snr_time, AnalysisConfig, DriveSignal, NoiseScale, NtfEntry,
    Projection, SnrMethod, SnrReport,
};
pub use sweep::{
    build_sweep, diagonal_advantage, ColumnWinner, SweepCell, SweepConfig, SweepRow, SweepTable,
};
