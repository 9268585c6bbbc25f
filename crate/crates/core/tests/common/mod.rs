#![allow(dead_code)]

use dsm_drive::analysis::NtfEntry;
use dsm_drive::ntf_design::{
    optimize_ntf_fir_report, synthesize_standard, weighting_from_admittance, DesignReport,
    DesignSpec,
};
use dsm_drive::MotorParams64;

pub const SIGMAS: [f64; 3] = [0.043, 0.2, 0.6];
pub const FS: f64 = 1e5;

pub fn standard_entry(gamma: f64) -> NtfEntry<f64> {
    let spec = DesignSpec {
        gamma,
        ..DesignSpec::with_order(4)
    };
    NtfEntry::new("standard", synthesize_standard(&spec).unwrap(), None)
}

pub fn optimized_entry(sigma: f64, gamma: f64) -> (NtfEntry<f64>, DesignReport<f64>) {
    let params = MotorParams64::reference();
    let spec = DesignSpec {
        gamma,
        ..DesignSpec::with_order(8)
    };
    let w = weighting_from_admittance(&params, sigma, FS, spec.order).unwrap();
    let (q, report) = optimize_ntf_fir_report(&w, &spec).unwrap();
    (
        NtfEntry::new(format!("opt-{sigma}"), q, Some(sigma)),
        report,
    )
}

/// Standard NTF followed by the three slip-optimized designs.
pub fn reference_entries() -> Vec<NtfEntry<f64>> {
    let mut v = vec![standard_entry(1.5)];
    v.extend(SIGMAS.iter().map(|&s| optimized_entry(s, 1.5).0));
    v
}
