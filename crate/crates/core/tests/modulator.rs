use dsm_drive::delta_sigma::{
    reconstruct_output, simulate, ModulatorConfig, Ntf, NtfFir, Quantizer, RationalFilter,
};
use dsm_drive::motor_model::{admittance, discretize_admittance, MotorParams};
use dsm_drive::{MotorParams32, NtfFir32, Quantizer32};
use proptest::prelude::*;

#[test]
fn single_precision_pipeline() {
    let p = MotorParams32::reference();
    let y = admittance(&p, 0.2f32, 0.0);
    assert!((y.re * 17.7 - 1.0).abs() < 1e-5);
    let yd = discretize_admittance(&p, 0.2f32, 1e5).unwrap();
    assert!(yd.is_stable());
    let q = NtfFir32::new(vec![1.0, -1.0]).unwrap();
    let cfg = ModulatorConfig::new(Ntf::Fir(q), Quantizer32::bridge(), 1e5).unwrap();
    let input = vec![100.0f32; 1000];
    let run = simulate(&cfg, &input).unwrap();
    let mean: f32 = run.output.iter().sum::<f32>() / 1000.0;
    assert!((mean - 100.0).abs() < 1.0);
}

#[test]
fn params_json_uses_table_names() {
    let text = serde_json::to_string(&MotorParams::<f64>::reference()).unwrap();
    for key in [
        "\"P\"", "\"B\"", "\"J\"", "\"Rs\"", "\"Rr\"", "\"Ls\"", "\"Lr\"", "\"Lm\"", "\"fw\"",
        "\"Vw\"",
    ] {
        assert!(text.contains(key), "{key} missing in {text}");
    }
    let back = MotorParams::<f64>::from_json(&text).unwrap();
    assert_eq!(back, MotorParams::reference());
}

fn levels() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(3), Just(5), Just(17)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn error_feedback_identity_fir(
        taps in prop::collection::vec(-0.6f64..0.6, 1..9),
        amp in 0.0f64..200.0,
        period in 20usize..500,
        levels in levels(),
    ) {
        let mut q = vec![1.0];
        q.extend(taps);
        let ntf = Ntf::Fir(NtfFir::new(q).unwrap());
        let quantizer = Quantizer::new(levels, 320.0).unwrap();
        let cfg = ModulatorConfig::new(ntf.clone(), quantizer, 1e5).unwrap();
        let input: Vec<f64> = (0..4000)
            .map(|n| amp * (std::f64::consts::TAU * n as f64 / period as f64).sin())
            .collect();
        // an unstable loop lets the error grow without bound; the identity
        // is only checked while the quantizer stays in range
        let run = simulate(&cfg, &input);
        prop_assume!(run.as_ref().is_ok_and(|r| !r.overloaded));
        let run = run.unwrap();
        let pred = reconstruct_output(&ntf, &input, &run.error);
        for (y, p) in run.output.iter().zip(&pred) {
            prop_assert!((y - p).abs() <= 1e-9 * 320.0);
        }
    }

    #[test]
    fn error_feedback_identity_rational(pole in -0.8f64..0.8, zero in -0.9f64..0.9) {
        let f = RationalFilter::new(vec![1.0, -zero], vec![1.0, -pole]).unwrap();
        let ntf = Ntf::Rational(f);
        let cfg = ModulatorConfig::new(ntf.clone(), Quantizer::bridge(), 1e5).unwrap();
        let input: Vec<f64> = (0..5000).map(|n| 150.0 * (n as f64 * 0.01).sin()).collect();
        let run = simulate(&cfg, &input).unwrap();
        let pred = reconstruct_output(&ntf, &input, &run.error);
        for (y, p) in run.output.iter().zip(&pred) {
            prop_assert!((y - p).abs() <= 1e-9 * 320.0);
        }
    }
}
