//! Randomized invariants across modules.

use btc_core::analysis::{fit_power_amplitude, FitParams};
use btc_core::dicke::{build_liouvillian, spectrum, steady_state_of};
use btc_core::meanfield::{
    classify_with_step, find_fixed_points, integrate, uniform_times, IntegrateOptions, Mode,
};
use btc_core::{bloch_from_angles, validate_params, Axis, ModelParams};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = ModelParams<f64>> {
    (1u32..=4, 1u32..=4, 0.0f64..3.0, 0.0f64..1.0, 0.0f64..1.0)
        .prop_map(|(p, q, wx, gu, gd)| ModelParams::new(p, q, 1.0, wx, gu, gd).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn collective_flow_stays_on_sphere(params in model(), theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU) {
        let traj = integrate(
            &params,
            bloch_from_angles(theta, phi, Axis::ZPole),
            &uniform_times(30.0, 300),
            &IntegrateOptions::default(),
        ).unwrap();
        prop_assert!(traj.max_norm_drift() < 1e-6);
    }

    #[test]
    fn validation_round_trips(params in model()) {
        let again: ModelParams<f64> = validate_params(&params.to_raw()).unwrap();
        prop_assert_eq!(again.to_raw(), params.to_raw());
    }

    #[test]
    fn fits_recover_exponent(k in -2.0f64..-0.05, b in 0.1f64..10.0) {
        let env: Vec<(f64, f64)> = (1..400).map(|i| i as f64 * 0.5).map(|t| (t, b * t.powf(k))).collect();
        let f = fit_power_amplitude(&env).unwrap();
        let FitParams::PowerLaw { exponent, .. } = f.params else { unreachable!() };
        prop_assert!((exponent / k - 1.0).abs() < 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fixed_points_are_stationary_and_robust(params in model()) {
        let eps = 1e-6 * params.frequency_scale();
        for fp in find_fixed_points(&params, Mode::Collective) {
            prop_assert!(fp.residual < 1e-10);
            let halved = classify_with_step(&params, fp.location, Mode::Collective, eps, 0.5 * btc_core::meanfield::fixed::default_fd_step::<f64>()).unwrap();
            prop_assert_eq!(halved.stability, fp.stability);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn zero_mode_is_null_vector(p in 1u32..=3, wx in 0.2f64..3.0, gu in 0.05f64..0.5, gd in 0.0f64..0.05, n in 2u32..=12) {
        let params = ModelParams::new(p, 1, 1.0, wx, gu, gd).unwrap();
        let l = build_liouvillian(&params, n).unwrap();
        let s = spectrum(&l, 4).unwrap();
        let ss = steady_state_of(&l).unwrap();
        prop_assert!(btc_core::dicke::fidelity(&s.zero_mode, &ss.null_vector) > 1.0 - 1e-8);
    }
}
