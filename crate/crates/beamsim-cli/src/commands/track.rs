//! `track-peak`: per-instant pattern peak positions with a least-squares
//! range speed, plus an optional envelope-duration sweep reporting how far the
//! peak wanders in angle during one pulse.

use beamsim::{track_peak, ArrayConfig, EnvelopeSpec, PatternGrid, SPEED_OF_LIGHT};

use crate::config::TrackSpec;
use crate::errors::CliError;
use crate::manifest::RunManifest;
use crate::output::{fmt_deg, fmt_f64, Csv, OutputWriter};
use crate::RunContext;

pub fn run(ctx: &RunContext) -> Result<i32, CliError> {
    let (array, explicit) = ctx.config.require_array()?.expand()?;
    let grid = ctx.config.require_grid()?.expand()?;
    let model = ctx.model.to_model();
    let track_spec = ctx.config.track.clone().unwrap_or_default();

    let mut writer = OutputWriter::new(&ctx.out)?;
    let mut expanded = ctx.config.clone();
    expanded.array = Some(explicit);
    expanded.model = Some(ctx.model);
    expanded.seed = Some(ctx.seed);
    let mut manifest = RunManifest::new("track-peak", ctx.model.name(), ctx.seed, expanded)?;

    if let Some(durations) = track_spec
        .duration_sweep_s
        .clone()
        .filter(|d| !d.is_empty())
    {
        run_duration_sweep(ctx, &array, &grid, &track_spec, &durations, &mut writer)?;
        manifest.note("mode", "duration_sweep")?;
        manifest.note("durations_s", &durations)?;
    } else {
        let track = track_peak(&array, &grid, model)?;
        let mut csv = Csv::new("time_s,peak_range_m,peak_angle_deg,peak_magnitude");
        for s in &track.samples {
            csv.row([
                fmt_f64(s.time),
                fmt_f64(s.peak_range),
                fmt_deg(s.peak_angle),
                fmt_f64(s.peak_magnitude),
            ]);
        }
        csv.footer("fitted_speed_m_per_s", &fmt_f64(track.fitted_speed));
        csv.footer(
            "fitted_speed_over_c",
            &fmt_f64(track.fitted_speed / SPEED_OF_LIGHT),
        );
        csv.footer("angle_drift_rad", &fmt_f64(track.angle_drift));
        csv.footer(
            "degenerate_flat_pattern",
            if track.degenerate { "true" } else { "false" },
        );
        writer.write("track.csv", &csv.finish())?;
        manifest.note("mode", "track")?;
        manifest.note("fitted_speed_m_per_s", track.fitted_speed)?;
        manifest.note("fitted_speed_over_c", track.fitted_speed / SPEED_OF_LIGHT)?;
        manifest.note("angle_drift_rad", track.angle_drift)?;
        manifest.note("degenerate_flat_pattern", track.degenerate)?;
    }

    manifest.write(&mut writer)?;
    Ok(0)
}

/// For each requested duration, rebuilds the envelope at that on-time, samples
/// the pattern at the window-center range over exactly one pulse dwell, and
/// tracks the peak across the angle axis.
fn run_duration_sweep(
    ctx: &RunContext,
    array: &ArrayConfig,
    grid: &PatternGrid,
    track_spec: &TrackSpec,
    durations: &[f64],
    writer: &mut OutputWriter,
) -> Result<(), CliError> {
    let model = ctx.model.to_model();
    let n_times = track_spec.sweep_time_samples.unwrap_or(16).max(2);
    let range_axis = grid.range_axis();
    let r0 = range_axis[range_axis.len() / 2];
    let arrival = r0 / SPEED_OF_LIGHT;

    let mut csv =
        Csv::new("envelope_duration_s,n_time_samples,angle_drift_rad,fitted_speed_m_per_s");
    for &duration in durations {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(CliError::Config(
                "track.duration_sweep_s entries must be > 0".into(),
            ));
        }
        let mut swept = array.clone();
        for e in &mut swept.elements {
            e.envelope = envelope_with_duration(&e.envelope, duration)?;
        }
        // Envelopes act at emission (retarded) time, so a pulse emitted
        // around 0 sweeps past r0 around the arrival instant; sample strictly
        // inside that dwell.
        let times: Vec<f64> = (0..n_times)
            .map(|i| arrival - duration / 2.0 + (i as f64 + 0.5) * duration / n_times as f64)
            .collect();
        let sweep_grid = PatternGrid::new(vec![r0], grid.angle_axis().to_vec(), times)?;
        let track = track_peak(&swept, &sweep_grid, model)?;
        csv.row([
            fmt_f64(duration),
            n_times.to_string(),
            fmt_f64(track.angle_drift),
            fmt_f64(track.fitted_speed),
        ]);
    }
    writer.write("duration_sweep.csv", &csv.finish())?;
    Ok(())
}

/// The same envelope family resized to the requested on-time, with the pulse
/// centered at emission time 0.
fn envelope_with_duration(
    envelope: &EnvelopeSpec,
    duration: f64,
) -> Result<EnvelopeSpec, CliError> {
    Ok(match *envelope {
        EnvelopeSpec::Cw => {
            return Err(CliError::Config(
                "duration sweep requires a pulsed envelope (gaussian, rect, or periodic_switch)"
                    .into(),
            ))
        }
        EnvelopeSpec::Gaussian { .. } => EnvelopeSpec::Gaussian {
            fdhm: duration,
            center: 0.0,
        },
        EnvelopeSpec::Rect { .. } => EnvelopeSpec::Rect {
            duration,
            start: -duration / 2.0,
        },
        EnvelopeSpec::PeriodicSwitch { duty, .. } => EnvelopeSpec::PeriodicSwitch {
            period: duration / duty,
            duty,
            offset: -duration / 2.0,
        },
    })
}
