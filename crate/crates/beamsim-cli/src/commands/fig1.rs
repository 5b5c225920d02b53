//! `compare-fig1`: aligned range cuts of a CW frequency diverse array and two
//! pulsed phased arrays (Gaussian and rectangular), with width, sidelobe, and
//! collection-efficiency summaries.
//!
//! All cuts share one instant: the moment the pulse peak reaches the window
//! center (recorded in the manifest). Because BCE curves can be parameterized
//! several ways, the command emits three sweeps: versus target width, versus
//! target center range, and versus cut instant.

use beamsim::{
    bce_with_options, evaluate_cube, fwhm_range, make_linear_fda, make_steered_phased_array,
    sidelobe_level, ArrayConfig, EnvelopeSpec, PatternCube, PatternGrid, SPEED_OF_LIGHT,
};

use crate::config::{explicit_spec, Fig1Resolved};
use crate::errors::CliError;
use crate::manifest::RunManifest;
use crate::output::{fmt_f64, Csv, OutputWriter};
use crate::RunContext;

const CURVES: [&str; 3] = ["fda", "gaussian", "rect"];

/// Widths of the centered BCE targets in the summary table, as multiples of
/// the nominal pulse footprint c*FDHM.
const SUMMARY_WIDTH_FACTORS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];

struct Curve {
    name: &'static str,
    config: ArrayConfig,
    cube: PatternCube,
}

pub fn run(ctx: &RunContext) -> Result<i32, CliError> {
    let resolved = ctx.config.fig1.clone().unwrap_or_default().resolve()?;
    let model = ctx.model.to_model();

    let configs = build_configs(&resolved)?;
    let grid = build_grid(&resolved)?;
    let t0_index = TIME_HALF_SWEEP; // t0 sits mid-sweep by construction

    let curves: Vec<Curve> = configs
        .into_iter()
        .zip(CURVES)
        .map(|(config, name)| {
            let cube = evaluate_cube(&config, &grid, model)?;
            Ok(Curve { name, config, cube })
        })
        .collect::<Result<_, CliError>>()?;

    let mut writer = OutputWriter::new(&ctx.out)?;

    // Aligned range cuts at the common instant, each normalized to its peak.
    for curve in &curves {
        let cut = curve.cube.range_cut(0, t0_index);
        let peak = cut.iter().cloned().fold(0.0, f64::max);
        let mut csv = Csv::new("range_m,magnitude,magnitude_norm");
        for (i, &m) in cut.iter().enumerate() {
            let norm = if peak > 0.0 { m / peak } else { 0.0 };
            csv.row([fmt_f64(grid.range_axis()[i]), fmt_f64(m), fmt_f64(norm)]);
        }
        writer.write(&format!("{}_cut.csv", curve.name), &csv.finish())?;
    }

    // Summary: FWHM, sidelobe verdict, and BCE over centered target widths.
    let nominal_width = SPEED_OF_LIGHT * resolved.fdhm_s;
    let mut header = String::from("curve,fwhm_m,sidelobe_db");
    for f in SUMMARY_WIDTH_FACTORS {
        header.push_str(&format!(",bce_w{}", format_factor(f)));
    }
    let mut summary = Csv::new(&header);
    for curve in &curves {
        let fwhm = fwhm_range(&curve.cube, 0, t0_index)?;
        let sidelobe = sidelobe_level(&curve.cube, 0, t0_index)?;
        let mut cells = vec![
            curve.name.to_string(),
            fmt_f64(fwhm),
            sidelobe.map_or("none".to_string(), fmt_f64),
        ];
        for f in SUMMARY_WIDTH_FACTORS {
            let value = centered_bce(
                &curve.cube,
                t0_index,
                resolved.window_center_m,
                f * nominal_width,
                resolved.bce_polar_jacobian,
            )?;
            cells.push(fmt_f64(value));
        }
        summary.row(cells);
    }
    writer.write("summary.csv", &summary.finish())?;

    // BCE parameterization sweeps.
    let mut by_width = Csv::new("target_width_m,bce_fda,bce_gaussian,bce_rect");
    for i in 0..25 {
        let width = nominal_width * (0.2 + 2.8 * i as f64 / 24.0);
        let mut cells = vec![fmt_f64(width)];
        for curve in &curves {
            cells.push(fmt_f64(centered_bce(
                &curve.cube,
                t0_index,
                resolved.window_center_m,
                width,
                resolved.bce_polar_jacobian,
            )?));
        }
        by_width.row(cells);
    }
    writer.write("bce_vs_width.csv", &by_width.finish())?;

    let mut by_center = Csv::new("target_center_m,bce_fda,bce_gaussian,bce_rect");
    for i in 0..21 {
        let center =
            resolved.window_center_m + resolved.window_halfwidth_m * (-0.5 + i as f64 / 20.0);
        let mut cells = vec![fmt_f64(center)];
        for curve in &curves {
            cells.push(fmt_f64(centered_bce(
                &curve.cube,
                t0_index,
                center,
                nominal_width,
                resolved.bce_polar_jacobian,
            )?));
        }
        by_center.row(cells);
    }
    writer.write("bce_vs_center.csv", &by_center.finish())?;

    let mut by_time = Csv::new("time_s,bce_fda,bce_gaussian,bce_rect");
    for k in 0..grid.time_axis().len() {
        let mut cells = vec![fmt_f64(grid.time_axis()[k])];
        for curve in &curves {
            cells.push(fmt_f64(centered_bce(
                &curve.cube,
                k,
                resolved.window_center_m,
                nominal_width,
                resolved.bce_polar_jacobian,
            )?));
        }
        by_time.row(cells);
    }
    writer.write("bce_vs_time.csv", &by_time.finish())?;

    let mut expanded = ctx.config.clone();
    expanded.model = Some(ctx.model);
    expanded.seed = Some(ctx.seed);
    let mut manifest = RunManifest::new("compare-fig1", ctx.model.name(), ctx.seed, expanded)?;
    manifest.note("fig1_resolved", &resolved)?;
    manifest.note("fig1_instant_s", resolved.instant_s)?;
    for curve in &curves {
        manifest.note(
            &format!("{}_array", curve.name),
            explicit_spec(&curve.config),
        )?;
        manifest.note(
            &format!("{}_pattern_digest", curve.name),
            curve.cube.config_digest(),
        )?;
    }
    manifest.write(&mut writer)?;
    Ok(0)
}

/// Time samples on each side of the common instant in the BCE-versus-time
/// sweep. The sweep spans the time the pattern takes to cross half the range
/// window, so every slice keeps some pulse energy in view.
const TIME_HALF_SWEEP: usize = 10;

fn build_configs(resolved: &Fig1Resolved) -> Result<Vec<ArrayConfig>, CliError> {
    let fda = make_linear_fda(
        resolved.n_elements,
        resolved.spacing_m,
        resolved.carrier_hz,
        resolved.delta_f_hz,
        EnvelopeSpec::Cw,
    )?;
    let gaussian = make_steered_phased_array(
        resolved.n_elements,
        resolved.spacing_m,
        resolved.carrier_hz,
        0.0,
        EnvelopeSpec::Gaussian {
            fdhm: resolved.fdhm_s,
            center: 0.0,
        },
    )?;
    let rect = make_steered_phased_array(
        resolved.n_elements,
        resolved.spacing_m,
        resolved.carrier_hz,
        0.0,
        EnvelopeSpec::Rect {
            duration: resolved.rect_duration_s,
            start: -resolved.rect_duration_s / 2.0,
        },
    )?;
    Ok(vec![fda, gaussian, rect])
}

fn build_grid(resolved: &Fig1Resolved) -> Result<PatternGrid, CliError> {
    let lo = resolved.window_center_m - resolved.window_halfwidth_m;
    let hi = resolved.window_center_m + resolved.window_halfwidth_m;
    let n = ((hi - lo) / resolved.range_step_m).floor() as usize + 1;
    let range_axis = (0..n)
        .map(|i| lo + resolved.range_step_m * i as f64)
        .collect();
    let time_step = resolved.window_halfwidth_m / SPEED_OF_LIGHT / (2.0 * TIME_HALF_SWEEP as f64);
    let time_axis = (0..=2 * TIME_HALF_SWEEP)
        .map(|k| resolved.instant_s + (k as f64 - TIME_HALF_SWEEP as f64) * time_step)
        .collect();
    Ok(PatternGrid::new(range_axis, vec![0.0], time_axis)?)
}

fn centered_bce(
    cube: &PatternCube,
    time_index: usize,
    center_m: f64,
    width_m: f64,
    polar: bool,
) -> Result<f64, CliError> {
    let target = beamsim::RegionSpec::new(
        (center_m - width_m / 2.0, center_m + width_m / 2.0),
        (-1.0, 1.0),
    );
    Ok(bce_with_options(cube, time_index, &target, polar)?)
}

fn format_factor(f: f64) -> String {
    // 0.5 -> "0p5_cfdhm", 2.0 -> "2_cfdhm"
    let s = format!("{f}").replace('.', "p");
    format!("{s}_cfdhm")
}
