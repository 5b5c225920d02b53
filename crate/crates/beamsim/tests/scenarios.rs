//! Cross-module simulation scenarios: pulsed phased arrays versus
//! frequency-offset arrays measured with the same yardsticks.

use beamsim::{
    bce, closed_form_fda_magnitude, evaluate_cube, fwhm_range, make_linear_fda,
    make_steered_phased_array, sidelobe_level, DelayModel, EnvelopeSpec, PatternGrid, RegionSpec,
    SPEED_OF_LIGHT,
};

fn uniform_axis(lo: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + step * i as f64).collect()
}

/// Half-width in psi of the uniform-array kernel at half maximum, found by
/// scanning the closed form.
fn kernel_half_maximum_psi(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    let steps = 2_000_000;
    let hi = 1.0 / n as f64;
    let mut prev = n as f64;
    for i in 1..=steps {
        let psi = hi * i as f64 / steps as f64;
        let value = closed_form_fda_magnitude(n, psi);
        if value <= half {
            // Linear interpolation between the straddling samples.
            let psi_prev = hi * (i - 1) as f64 / steps as f64;
            return psi_prev + (prev - half) * (psi - psi_prev) / (prev - value);
        }
        prev = value;
    }
    panic!("kernel never fell to half maximum");
}

/// A Gaussian pulse through a phased array collects more energy in a
/// half-maximum-wide box than a CW frequency-offset array whose range lobe is
/// tuned to the same width: the pulse has no sidelobes to leak energy.
#[test]
fn gaussian_pulse_beats_matched_width_fda_on_bce() {
    let n = 19;
    let f0 = 1e10;
    let d = SPEED_OF_LIGHT / (2.0 * f0);
    let fdhm = 16.7e-6;
    let width = SPEED_OF_LIGHT * fdhm;

    // Tune the offset step so the kernel's range FWHM equals the pulse's.
    let psi_half = kernel_half_maximum_psi(n);
    let delta_f = 2.0 * psi_half * SPEED_OF_LIGHT / width;

    let center = 30_000.0;
    let t0 = center / SPEED_OF_LIGHT;
    let halfwidth = 1.5 * width;
    let step = width / 1000.0;
    let n_samples = (2.0 * halfwidth / step) as usize + 1;
    let grid = PatternGrid::new(
        uniform_axis(center - halfwidth, step, n_samples),
        vec![0.0],
        vec![t0],
    )
    .unwrap();

    let gaussian =
        make_steered_phased_array(n, d, f0, 0.0, EnvelopeSpec::Gaussian { fdhm, center: 0.0 })
            .unwrap();
    let fda = make_linear_fda(n, d, f0, delta_f, EnvelopeSpec::Cw).unwrap();

    let gaussian_cube = evaluate_cube(&gaussian, &grid, DelayModel::FarField).unwrap();
    let fda_cube = evaluate_cube(&fda, &grid, DelayModel::FarField).unwrap();

    let w_gauss = fwhm_range(&gaussian_cube, 0, 0).unwrap();
    let w_fda = fwhm_range(&fda_cube, 0, 0).unwrap();
    assert!(
        (w_gauss - w_fda).abs() / w_gauss < 0.02,
        "widths not matched: {w_gauss} vs {w_fda}"
    );

    // The pulse cut is sidelobe-free; the kernel cut is not.
    assert_eq!(sidelobe_level(&gaussian_cube, 0, 0).unwrap(), None);
    assert!(sidelobe_level(&fda_cube, 0, 0).unwrap().is_some());

    let target = RegionSpec::new(
        (center - w_gauss / 2.0, center + w_gauss / 2.0),
        (-1.0, 1.0),
    );
    let bce_gauss = bce(&gaussian_cube, 0, &target).unwrap();
    let bce_fda = bce(&fda_cube, 0, &target).unwrap();
    assert!(
        bce_gauss > bce_fda,
        "Gaussian box BCE {bce_gauss} must exceed matched FDA {bce_fda}"
    );
}

/// Range-pattern width tracks pulse duration: FWHM = c*FDHM within
/// max(0.5%, two grid steps) across a hundredfold duration sweep.
#[test]
fn fwhm_equals_c_times_fdhm_across_durations() {
    let f0 = 1e10;
    let d = SPEED_OF_LIGHT / (2.0 * f0);
    for fdhm in [1e-6, 16.7e-6, 100e-6] {
        let width = SPEED_OF_LIGHT * fdhm;
        let center = 2.0 * width + 2000.0;
        let step = width / 400.0;
        let n_samples = (2.6 * width / step) as usize + 1;
        let grid = PatternGrid::new(
            uniform_axis(center - 1.3 * width, step, n_samples),
            vec![0.0],
            vec![center / SPEED_OF_LIGHT],
        )
        .unwrap();
        let config =
            make_steered_phased_array(19, d, f0, 0.0, EnvelopeSpec::Gaussian { fdhm, center: 0.0 })
                .unwrap();
        let cube = evaluate_cube(&config, &grid, DelayModel::FarField).unwrap();
        let measured = fwhm_range(&cube, 0, 0).unwrap();
        let tolerance = (5e-3 * width).max(2.0 * step);
        assert!(
            (measured - width).abs() <= tolerance,
            "fdhm {fdhm}: measured {measured} vs {width} (tol {tolerance})"
        );
    }
}

/// The rectangular pulse maps onto a rectangular range footprint of width
/// c * duration; its measured FWHM equals the support width to one grid step.
#[test]
fn rect_pulse_fwhm_equals_support_width() {
    let f0 = 1e10;
    let d = SPEED_OF_LIGHT / (2.0 * f0);
    let duration = 16.7e-6;
    let width = SPEED_OF_LIGHT * duration;
    let center = 10_000.0;
    let step = width / 1000.0;
    let n_samples = (3.0 * width / step) as usize + 1;
    let grid = PatternGrid::new(
        uniform_axis(center - 1.5 * width, step, n_samples),
        vec![0.0],
        vec![center / SPEED_OF_LIGHT],
    )
    .unwrap();
    let config = make_steered_phased_array(
        19,
        d,
        f0,
        0.0,
        EnvelopeSpec::Rect {
            duration,
            start: -duration / 2.0,
        },
    )
    .unwrap();
    let cube = evaluate_cube(&config, &grid, DelayModel::FarField).unwrap();
    let measured = fwhm_range(&cube, 0, 0).unwrap();
    assert!(
        (measured - width).abs() <= step,
        "measured {measured} vs support {width} (step {step})"
    );
    assert_eq!(sidelobe_level(&cube, 0, 0).unwrap(), None);
}
