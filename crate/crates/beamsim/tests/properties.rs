//! Property suite for the signal model, field engine, and metrics.
//!
//! Shift-law properties use dyadic-rational coordinates (integer multiples of
//! powers of two) so that `r + c*dt` and `t + dt` are computed exactly; the
//! checks then measure model behaviour instead of floating-point round-off.

use proptest::prelude::*;

use beamsim::{
    bce, check_time_range_invariance, closed_form_fda_magnitude, evaluate_cube,
    instantaneous_field, make_linear_fda, make_steered_phased_array, ArrayConfig, DelayModel,
    ElementExcitation, EnvelopeSpec, ObservationPoint, PatternCube, PatternGrid, RegionSpec,
    FAR_FIELD_SHIFT_TOLERANCE, SPEED_OF_LIGHT,
};

// ─── Strategies ──────────────────────────────────────────────────────────────

fn envelope_strategy() -> impl Strategy<Value = EnvelopeSpec> {
    prop_oneof![
        Just(EnvelopeSpec::Cw),
        (1e-7..1e-3f64, -1e-4..1e-4f64)
            .prop_map(|(fdhm, center)| EnvelopeSpec::Gaussian { fdhm, center }),
        (1e-7..1e-3f64, -1e-4..1e-4f64)
            .prop_map(|(duration, start)| EnvelopeSpec::Rect { duration, start }),
        (1e-6..1e-3f64, 0.05..1.0f64, -1e-4..1e-4f64).prop_map(|(period, duty, offset)| {
            EnvelopeSpec::PeriodicSwitch {
                period,
                duty,
                offset,
            }
        }),
    ]
}

fn element_strategy() -> impl Strategy<Value = ElementExcitation> {
    (
        0.0..2.0f64,
        -std::f64::consts::PI..std::f64::consts::PI,
        -2.5e5..2.5e5f64,
        envelope_strategy(),
    )
        .prop_map(
            |(amplitude, phase, freq_offset, envelope)| ElementExcitation {
                amplitude,
                phase,
                freq_offset,
                envelope,
            },
        )
}

fn config_strategy() -> impl Strategy<Value = ArrayConfig> {
    (1usize..=32, 0.005..0.05f64, 1e9..2e10f64, any::<bool>()).prop_flat_map(
        |(n, spacing, carrier, couple)| {
            proptest::collection::vec(element_strategy(), n).prop_map(move |elements| ArrayConfig {
                n_elements: n,
                spacing,
                carrier,
                elements,
                couple_offset_aperture: couple,
                spreading_loss: false,
            })
        },
    )
}

/// Range as an exact multiple of 2^-20 m within [100 m, 8 km].
fn dyadic_range() -> impl Strategy<Value = f64> {
    (100u64 << 20..8000u64 << 20).prop_map(|k| k as f64 * 2f64.powi(-20))
}

/// Observation time near the wavefront arrival, snapped to 2^-34 s.
fn dyadic_time_for(range: f64, jitter_units: i64) -> f64 {
    let t = range / SPEED_OF_LIGHT + jitter_units as f64 * 2f64.powi(-30);
    (t * 2f64.powi(34)).round() * 2f64.powi(-34)
}

/// Time shift as an exact multiple of 2^-30 s in (0, ~30 us]; c*dt is then
/// exactly representable.
fn dyadic_dt() -> impl Strategy<Value = f64> {
    (1u64..32_000).prop_map(|k| k as f64 * 2f64.powi(-30))
}

// ─── Envelope properties ─────────────────────────────────────────────────────

proptest! {
    #[test]
    fn envelope_values_stay_in_unit_interval(
        spec in envelope_strategy(),
        t in -1.0..1.0f64,
    ) {
        let v = spec.value(t);
        prop_assert!((0.0..=1.0).contains(&v), "value {v} for {spec:?}");
    }

    #[test]
    fn gaussian_half_maximum_at_half_fdhm(
        fdhm in 1e-9..1e-2f64,
        center in -1e-3..1e-3f64,
    ) {
        let spec = EnvelopeSpec::Gaussian { fdhm, center };
        prop_assert!((spec.value(center + fdhm / 2.0) - 0.5).abs() < 1e-12);
        prop_assert!((spec.value(center - fdhm / 2.0) - 0.5).abs() < 1e-12);
    }

    /// Periodicity over exactly-representable periods: power-of-two periods
    /// make `t + k*period` exact, so the property holds bitwise.
    #[test]
    fn periodic_switch_is_periodic(
        exp in -20i32..=0,
        duty in 0.05..1.0f64,
        offset_units in -1000i64..1000,
        t_units in -(1i64 << 24)..(1i64 << 24),
        k in -100i64..=100,
    ) {
        let period = 2f64.powi(exp);
        let offset = offset_units as f64 * 2f64.powi(exp - 10);
        let t = t_units as f64 * 2f64.powi(exp - 20);
        let spec = EnvelopeSpec::PeriodicSwitch { period, duty, offset };
        prop_assert_eq!(spec.value(t), spec.value(t + k as f64 * period));
    }
}

// ─── Constructor equivalence ─────────────────────────────────────────────────

proptest! {
    #[test]
    fn zero_offset_fda_equals_unsteered_phased_array(
        n in 1usize..=64,
        spacing in 1e-3..0.1f64,
        carrier in 1e8..1e11f64,
        envelope in envelope_strategy(),
    ) {
        let fda = make_linear_fda(n, spacing, carrier, 0.0, envelope).unwrap();
        let phased = make_steered_phased_array(n, spacing, carrier, 0.0, envelope).unwrap();
        prop_assert_eq!(fda, phased);
    }
}

// ─── Field properties ────────────────────────────────────────────────────────

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The far-field time-range shift law: magnitudes are invariant under
    /// (r, t) -> (r + c*dt, t + dt) for every config, point, and shift.
    #[test]
    fn far_field_shift_law(
        config in config_strategy(),
        range in dyadic_range(),
        angle in -1.2..1.2f64,
        jitter in -20_000i64..20_000,
        dt in dyadic_dt(),
    ) {
        let point = ObservationPoint::new(range, angle).unwrap();
        let t = dyadic_time_for(range, jitter);
        let report = check_time_range_invariance(
            &config,
            &[(point, t)],
            &[dt],
            DelayModel::FarField,
        ).unwrap();
        prop_assert!(
            report.max_relative_deviation <= FAR_FIELD_SHIFT_TOLERANCE,
            "deviation {} at witness {:?}",
            report.max_relative_deviation,
            report.witness
        );
    }

    /// Any field magnitude is bounded by the sum of element amplitudes.
    #[test]
    fn triangle_inequality(
        config in config_strategy(),
        range in dyadic_range(),
        angle in -1.2..1.2f64,
        t_frac in 0.0..1e-4f64,
    ) {
        let point = ObservationPoint::new(range, angle).unwrap();
        let t = range / SPEED_OF_LIGHT + t_frac;
        let mag = instantaneous_field(&config, point, t, DelayModel::FarField)
            .unwrap()
            .norm();
        let bound = config.amplitude_sum() * (1.0 + 1e-12);
        prop_assert!(mag <= bound, "magnitude {mag} exceeds bound {bound}");
    }

    /// Uniform CW arrays with coupling disabled match the closed-form kernel.
    #[test]
    fn oracle_equivalence(
        n in 1usize..=64,
        delta_f in 1e3..4e5f64,
        range in 1000.0..2000.0f64,
        angle in -1.0..1.0f64,
        dt in 0.0..2.5e-6f64,
    ) {
        let f0 = 1e10;
        let d = SPEED_OF_LIGHT / (2.0 * f0);
        let mut config = make_linear_fda(n, d, f0, delta_f, EnvelopeSpec::Cw).unwrap();
        config.couple_offset_aperture = false;
        let t = range / SPEED_OF_LIGHT + dt;
        let point = ObservationPoint::new(range, angle).unwrap();
        let mag = instantaneous_field(&config, point, t, DelayModel::FarField)
            .unwrap()
            .norm();
        let psi = delta_f * ((SPEED_OF_LIGHT * t - range) / SPEED_OF_LIGHT)
            + f0 * d * angle.sin() / SPEED_OF_LIGHT;
        let oracle = closed_form_fda_magnitude(n, psi);
        prop_assert!(
            (mag - oracle).abs() <= 1e-9 * n as f64,
            "direct {mag} vs oracle {oracle} (n = {n}, psi = {psi})"
        );
    }
}

// ─── BCE properties ──────────────────────────────────────────────────────────

fn synthetic_cube(n_range: usize, n_angle: usize, values: Vec<f64>) -> PatternCube {
    let range_axis = (0..n_range).map(|i| 10.0 * i as f64).collect();
    let angle_axis = (0..n_angle)
        .map(|j| -0.5 + j as f64 / n_angle as f64)
        .collect();
    let grid = PatternGrid::new(range_axis, angle_axis, vec![0.0]).unwrap();
    PatternCube::from_parts(grid, values, "prop".into()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bce_full_region_unity_and_scale_invariance(
        n_range in 4usize..40,
        n_angle in 1usize..6,
        seed in any::<u64>(),
        scale in prop_oneof![Just(1e-6f64), Just(1.0f64), Just(1e6f64)],
    ) {
        // Deterministic pseudo-random positive magnitudes from the seed.
        let mut state = seed | 1;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            0.1 + (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let values: Vec<f64> = (0..n_range * n_angle).map(|_| next()).collect();
        let cube = synthetic_cube(n_range, n_angle, values.clone());
        let full = RegionSpec::new((-1.0, 1e9), (-1.0, 1.0));
        let unity = bce(&cube, 0, &full).unwrap();
        prop_assert!((unity - 1.0).abs() <= 1e-12);

        let scaled = synthetic_cube(n_range, n_angle, values.iter().map(|v| v * scale).collect());
        let half = RegionSpec::new((0.0, 10.0 * (n_range as f64) / 2.0), (-1.0, 1.0));
        let a = bce(&cube, 0, &half).unwrap();
        let b = bce(&scaled, 0, &half).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn bce_monotone_under_region_growth(
        n_range in 8usize..40,
        seed in any::<u64>(),
    ) {
        let mut state = seed | 1;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let values: Vec<f64> = (0..n_range).map(|_| next()).collect();
        if values.iter().all(|&v| v == 0.0) {
            return Ok(());
        }
        let cube = synthetic_cube(n_range, 1, values);
        let center = 10.0 * (n_range as f64 - 1.0) / 2.0;
        let mut last = -1.0;
        for step in 1..=(n_range / 2) {
            let w = 10.0 * step as f64;
            let region = RegionSpec::new((center - w, center + w), (-1.0, 1.0));
            if let Ok(v) = bce(&cube, 0, &region) {
                prop_assert!(v >= last, "step {step}: {v} < {last}");
                last = v;
            }
        }
    }
}

// ─── Cube determinism ────────────────────────────────────────────────────────

#[cfg(feature = "parallel")]
proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn parallel_cube_matches_sequential_bitwise(
        config in config_strategy(),
        n_range in 2usize..20,
        n_time in 1usize..4,
    ) {
        let grid = PatternGrid::new(
            (0..n_range).map(|i| 3000.0 + 8.0 * i as f64).collect(),
            vec![-0.1, 0.0, 0.1],
            (0..n_time).map(|k| 1e-5 + 1e-6 * k as f64).collect(),
        ).unwrap();
        let par = evaluate_cube(&config, &grid, DelayModel::FarField).unwrap();
        let seq = beamsim::evaluate_cube_sequential(&config, &grid, DelayModel::FarField).unwrap();
        prop_assert_eq!(par.magnitudes(), seq.magnitudes());
    }
}
