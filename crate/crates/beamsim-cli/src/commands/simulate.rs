//! `simulate`: evaluate a pattern cube and emit one CSV row per grid point.

use beamsim::{bce_with_options, evaluate_cube, fwhm_range, sidelobe_level, RegionSpec};

use crate::errors::CliError;
use crate::manifest::RunManifest;
use crate::output::{fmt_deg, fmt_f64, Csv, OutputWriter};
use crate::RunContext;

pub fn run(ctx: &RunContext) -> Result<i32, CliError> {
    let (array, explicit) = ctx.config.require_array()?.expand()?;
    let grid = ctx.config.require_grid()?.expand()?;
    let model = ctx.model.to_model();

    let cube = evaluate_cube(&array, &grid, model)?;
    let max = cube.max_magnitude();

    let mut csv = Csv::new("range_m,angle_deg,time_s,magnitude,magnitude_db");
    let (nr, na, nt) = grid.shape();
    for i in 0..nr {
        for j in 0..na {
            for k in 0..nt {
                let m = cube.magnitude(i, j, k);
                let db = if max > 0.0 {
                    20.0 * (m / max).log10()
                } else {
                    f64::NAN
                };
                csv.row([
                    fmt_f64(grid.range_axis()[i]),
                    fmt_deg(grid.angle_axis()[j]),
                    fmt_f64(grid.time_axis()[k]),
                    fmt_f64(m),
                    fmt_f64(db),
                ]);
            }
        }
    }

    let mut writer = OutputWriter::new(&ctx.out)?;
    writer.write("cube.csv", &csv.finish())?;

    if let Some(metrics) = &ctx.config.metrics {
        let polar = metrics.bce_polar_jacobian.unwrap_or(false);
        let mut mcsv = Csv::new(
            "metric,angle_index,time_index,range_lo_m,range_hi_m,angle_lo_deg,angle_hi_deg,value",
        );
        for region in metrics.bce_targets.as_deref().unwrap_or(&[]) {
            let target = RegionSpec::new(
                (region.range_m[0], region.range_m[1]),
                (
                    region.angle_deg[0].to_radians(),
                    region.angle_deg[1].to_radians(),
                ),
            );
            let value = bce_with_options(&cube, region.time_index, &target, polar)?;
            mcsv.row([
                "bce".to_string(),
                String::new(),
                region.time_index.to_string(),
                fmt_f64(region.range_m[0]),
                fmt_f64(region.range_m[1]),
                fmt_f64(region.angle_deg[0]),
                fmt_f64(region.angle_deg[1]),
                fmt_f64(value),
            ]);
        }
        for cut in metrics.fwhm_cuts.as_deref().unwrap_or(&[]) {
            let width = fwhm_range(&cube, cut.angle_index, cut.time_index)?;
            mcsv.row([
                "fwhm_m".to_string(),
                cut.angle_index.to_string(),
                cut.time_index.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                fmt_f64(width),
            ]);
            let sidelobe = sidelobe_level(&cube, cut.angle_index, cut.time_index)?;
            mcsv.row([
                "sidelobe_db".to_string(),
                cut.angle_index.to_string(),
                cut.time_index.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                sidelobe.map_or("none".to_string(), fmt_f64),
            ]);
        }
        writer.write("metrics.csv", &mcsv.finish())?;
    }

    let mut expanded = ctx.config.clone();
    expanded.array = Some(explicit);
    expanded.model = Some(ctx.model);
    expanded.seed = Some(ctx.seed);
    let mut manifest = RunManifest::new("simulate", ctx.model.name(), ctx.seed, expanded)?;
    manifest.note("pattern_digest", cube.config_digest())?;
    manifest.note("grid_shape", grid.shape())?;
    manifest.note("cube_max_magnitude", cube.max_magnitude())?;
    manifest.write(&mut writer)?;
    Ok(0)
}
