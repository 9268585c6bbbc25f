mod common;

use dsm_drive::analysis::{
    build_sweep, coherent_projection, drive_samples, modulate_drive, snr_frequency, snr_time,
    AnalysisConfig, NtfEntry, SnrMethod, SweepConfig,
};
use dsm_drive::delta_sigma::{autocorrelation, NtfFir};
use dsm_drive::MotorParams64;
use proptest::prelude::*;

use common::{optimized_entry, reference_entries, standard_entry, SIGMAS};

fn cfg() -> AnalysisConfig<f64> {
    AnalysisConfig::default()
}

#[test]
fn frequency_snr_near_reference_values() {
    let p = MotorParams64::reference();
    let std = snr_frequency(&standard_entry(1.5), &p, 0.043, &cfg()).unwrap();
    assert!((std.snr_db - 24.72).abs() <= 1.5, "{}", std.snr_db);
    let opt = snr_frequency(&optimized_entry(0.2, 1.5).0, &p, 0.2, &cfg()).unwrap();
    assert!((opt.snr_db - 34.11).abs() <= 1.5, "{}", opt.snr_db);
    assert_eq!(opt.method, SnrMethod::Frequency);
    assert_eq!(opt.ntf_id, "opt-0.2");
    let recomputed = 10.0 * (opt.signal_power / opt.noise_power).log10();
    assert!((recomputed - opt.snr_db).abs() < 1e-12);
}

#[test]
fn doubling_step_costs_six_db() {
    let p = MotorParams64::reference();
    let e = optimized_entry(0.2, 1.5).0;
    let base = snr_frequency(&e, &p, 0.2, &cfg()).unwrap();
    let wide = AnalysisConfig {
        full_scale: 640.0,
        ..cfg()
    };
    let doubled = snr_frequency(&e, &p, 0.2, &wide).unwrap();
    let drop = base.snr_db - doubled.snr_db;
    assert!((drop - 20.0 * 2f64.log10()).abs() < 1e-9, "{drop}");
}

#[test]
fn time_snr_near_reference_value() {
    let p = MotorParams64::reference();
    let r = snr_time(&standard_entry(1.5), &p, 0.043, &cfg()).unwrap();
    assert!((r.snr_db - 25.87).abs() <= 2.5, "{}", r.snr_db);
    assert_eq!(r.method, SnrMethod::Time);
}

#[test]
fn shaping_beats_plain_quantization() {
    let p = MotorParams64::reference();
    let plain = NtfEntry::new("unity", NtfFir::unity(), None);
    let std = standard_entry(1.5);
    for sigma in SIGMAS {
        let a = snr_time(&plain, &p, sigma, &cfg()).unwrap().snr_db;
        let b = snr_time(&std, &p, sigma, &cfg()).unwrap().snr_db;
        assert!(b > a, "sigma {sigma}: shaped {b} vs plain {a}");
    }
}

#[test]
fn single_cell_sweep_equals_direct_call() {
    let p = MotorParams64::reference();
    let e = standard_entry(1.5);
    for method in [SnrMethod::Frequency, SnrMethod::Time] {
        let sc = SweepConfig {
            params: p,
            analysis: cfg(),
            method,
        };
        let t = build_sweep(std::slice::from_ref(&e), &[0.2], &sc).unwrap();
        let direct = match method {
            SnrMethod::Frequency => snr_frequency(&e, &p, 0.2, &cfg()),
            SnrMethod::Time => snr_time(&e, &p, 0.2, &cfg()),
        }
        .unwrap();
        assert_eq!(t.rows[0].cells[0].report().unwrap(), &direct);
    }
}

#[test]
fn sweep_is_deterministic_and_row_independent() {
    let entries = reference_entries();
    let sc = SweepConfig {
        params: MotorParams64::reference(),
        analysis: cfg(),
        method: SnrMethod::Frequency,
    };
    let a = build_sweep(&entries, &SIGMAS, &sc).unwrap();
    assert_eq!(a.rows.len(), 4);
    assert!(a.rows.iter().all(|r| r.cells.len() == 3));
    let b = build_sweep(&entries, &SIGMAS, &sc).unwrap();
    assert_eq!(a, b);
    let mut reversed = entries.clone();
    reversed.reverse();
    let c = build_sweep(&reversed, &SIGMAS, &sc).unwrap();
    for row in &c.rows {
        assert_eq!(Some(row), a.row(&row.id));
    }
}

#[test]
fn standard_ntf_passes_the_drive_unchanged() {
    let e = standard_entry(1.5);
    let run = modulate_drive(&e.ntf, &cfg()).unwrap();
    let period = cfg().samples_per_period().unwrap();
    let start = period * cfg().transient_periods;
    let proj = coherent_projection(&run.output[start..], period, start).unwrap();
    assert!(
        (proj.amplitude() - 190.0).abs() <= 0.01 * 190.0,
        "{}",
        proj.amplitude()
    );
    assert!(!run.overloaded);
}

#[test]
#[ignore = "the two-level quantizer error is strongly correlated (lag-1 about -0.3); the white-noise model is an approximation"]
fn quantization_error_is_white() {
    let e = optimized_entry(0.2, 1.5).0;
    let run = modulate_drive(&e.ntf, &cfg()).unwrap();
    for lag in 1..=8 {
        let c = autocorrelation(&run.error, lag);
        assert!(c.abs() < 0.05, "lag {lag}: {c}");
    }
}

#[test]
fn report_round_trips_through_json() {
    let p = MotorParams64::reference();
    let r = snr_frequency(&standard_entry(1.5), &p, 0.6, &cfg()).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    assert!(text.contains("\"method\":\"frequency\""));
    let back: dsm_drive::SnrReport64 = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projection_recovers_tone(amp in 0.1f64..500.0, phase in 0.0f64..std::f64::consts::TAU, offset in 0usize..5000) {
        let period = 2000;
        let x: Vec<f64> = (0..period * 4)
            .map(|n| amp * (std::f64::consts::TAU * ((n + offset) % period) as f64 / period as f64 + phase).sin())
            .collect();
        let p = coherent_projection(&x, period, offset).unwrap();
        prop_assert!((p.amplitude() - amp).abs() <= 1e-10 * amp);
    }

    #[test]
    fn projection_splits_power(seed in 0u64..1000) {
        let period = 400;
        let x: Vec<f64> = (0..period * 20)
            .map(|n| {
                let t = n as f64;
                3.0 * (std::f64::consts::TAU * t / period as f64).cos()
                    + ((t * 0.37 + seed as f64).sin() * 1e3).fract()
            })
            .collect();
        let p = coherent_projection(&x, period, 0).unwrap();
        let sum = p.signal_power + p.residual_power;
        prop_assert!((sum - p.total_power).abs() <= 1e-6 * p.total_power);
    }

    #[test]
    fn drive_is_periodic(n in 0usize..100_000) {
        let x = drive_samples(&cfg(), n + 2001).unwrap();
        prop_assert_eq!(x[n], x[n + 2000]);
    }
}

#[test]
fn time_method_needs_enough_periods() {
    let p = MotorParams64::reference();
    let short = AnalysisConfig {
        measured_periods: 10,
        ..cfg()
    };
    assert!(snr_time(&standard_entry(1.5), &p, 0.2, &short).is_err());
}
