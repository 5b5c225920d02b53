//! Quantitative analysis of pattern cubes: beam collection efficiency,
//! half-maximum widths, sidelobe levels, peak tracking, and the time-range
//! shift checker.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{FieldError, MetricsError, ValidationError, Violation};
use crate::field::{DelayModel, FieldEvaluator, ObservationPoint, PatternCube, PatternGrid};
use crate::signal::ArrayConfig;

/// Floor applied to relative-deviation denominators so pattern nulls cannot
/// blow the ratio up to infinity.
pub const RELATIVE_DEVIATION_FLOOR: f64 = 1e-30;

/// Largest relative deviation the far-field shift law is allowed before it
/// counts as violated. The law is an algebraic identity of the parallel-ray
/// model, so anything beyond double-precision noise means an engine bug.
pub const FAR_FIELD_SHIFT_TOLERANCE: f64 = 1e-12;

/// Rectangular target region in the range/angle plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSpec {
    /// `(low, high)` range bounds, meters, inclusive.
    pub range_interval: (f64, f64),
    /// `(low, high)` angle bounds, radians, inclusive.
    pub angle_interval: (f64, f64),
}

impl RegionSpec {
    pub fn new(range_interval: (f64, f64), angle_interval: (f64, f64)) -> Self {
        Self {
            range_interval,
            angle_interval,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        // The negated form also rejects NaN bounds.
        let range_ordered = self.range_interval.0 <= self.range_interval.1;
        if !range_ordered {
            out.push(Violation::new("range_interval", "lower bound above upper"));
        }
        let angle_ordered = self.angle_interval.0 <= self.angle_interval.1;
        if !angle_ordered {
            out.push(Violation::new("angle_interval", "lower bound above upper"));
        }
        out
    }
}

/// Inclusive index window of axis samples inside `[lo, hi]`.
fn axis_window(axis: &[f64], (lo, hi): (f64, f64)) -> Option<(usize, usize)> {
    let first = axis.iter().position(|&x| x >= lo)?;
    let last = axis.iter().rposition(|&x| x <= hi)?;
    if first > last {
        None
    } else {
        Some((first, last))
    }
}

/// Trapezoidal quadrature weights for the samples `lo..=hi` of an axis.
///
/// A length-one axis is a point mass (weight 1). A degenerate sub-window of a
/// longer axis spans zero length, so its weight is zero; this keeps region
/// integrals monotone under region growth.
fn subrange_weights(axis: &[f64], lo: usize, hi: usize) -> Vec<f64> {
    if axis.len() == 1 {
        return vec![1.0];
    }
    if lo == hi {
        return vec![0.0];
    }
    (lo..=hi)
        .map(|i| {
            let left = if i == lo { axis[i] } else { axis[i - 1] };
            let right = if i == hi { axis[i] } else { axis[i + 1] };
            0.5 * (right - left)
        })
        .collect()
}

/// Beam collection efficiency: the fraction of the slice's squared-magnitude
/// integral that falls inside `target`, using trapezoidal weights on the
/// range/angle grid at `time_index`.
pub fn bce(
    cube: &PatternCube,
    time_index: usize,
    target: &RegionSpec,
) -> Result<f64, MetricsError> {
    bce_with_options(cube, time_index, target, false)
}

/// [`bce`] with an optional polar Jacobian: when `polar_jacobian` is true the
/// integrand is weighted by `r`, i.e. energy is integrated over `r dr dtheta`
/// instead of `dr dtheta`.
pub fn bce_with_options(
    cube: &PatternCube,
    time_index: usize,
    target: &RegionSpec,
    polar_jacobian: bool,
) -> Result<f64, MetricsError> {
    let violations = target.validate();
    if !violations.is_empty() {
        return Err(MetricsError::Invalid(ValidationError::new(violations)));
    }
    let grid = cube.grid();
    let (nr, na, nt) = grid.shape();
    if time_index >= nt {
        return Err(MetricsError::IndexOutOfRange {
            index: time_index,
            len: nt,
        });
    }
    let (r_lo, r_hi) =
        axis_window(grid.range_axis(), target.range_interval).ok_or(MetricsError::EmptyRegion)?;
    let (a_lo, a_hi) =
        axis_window(grid.angle_axis(), target.angle_interval).ok_or(MetricsError::EmptyRegion)?;

    let wr_full = subrange_weights(grid.range_axis(), 0, nr - 1);
    let wa_full = subrange_weights(grid.angle_axis(), 0, na - 1);
    let wr_target = subrange_weights(grid.range_axis(), r_lo, r_hi);
    let wa_target = subrange_weights(grid.angle_axis(), a_lo, a_hi);

    let jac = |i: usize| {
        if polar_jacobian {
            grid.range_axis()[i]
        } else {
            1.0
        }
    };

    let mut denominator = 0.0;
    for (i, &wr) in wr_full.iter().enumerate() {
        for (j, &wa) in wa_full.iter().enumerate() {
            let m = cube.magnitude(i, j, time_index);
            denominator += wr * wa * jac(i) * m * m;
        }
    }
    if denominator == 0.0 {
        return Err(MetricsError::UndefinedBce);
    }
    let mut numerator = 0.0;
    for i in r_lo..=r_hi {
        for j in a_lo..=a_hi {
            let m = cube.magnitude(i, j, time_index);
            numerator += wr_target[i - r_lo] * wa_target[j - a_lo] * jac(i) * m * m;
        }
    }
    Ok(numerator / denominator)
}

/// Locates the half-maximum crossing between samples `i` and `i+1` of a cut by
/// linear interpolation. Caller guarantees the cut actually crosses there.
fn interpolate_crossing(axis: &[f64], cut: &[f64], below: usize, above: usize, half: f64) -> f64 {
    let (x0, x1) = (axis[below], axis[above]);
    let (y0, y1) = (cut[below], cut[above]);
    x0 + (half - y0) * (x1 - x0) / (y1 - y0)
}

/// Full width at half maximum of the range cut at `(angle_index, time_index)`:
/// the distance between the two half-maximum crossings bracketing the peak,
/// each located by linear interpolation between adjacent samples.
pub fn fwhm_range(
    cube: &PatternCube,
    angle_index: usize,
    time_index: usize,
) -> Result<f64, MetricsError> {
    let grid = cube.grid();
    let (_, na, nt) = grid.shape();
    if angle_index >= na {
        return Err(MetricsError::IndexOutOfRange {
            index: angle_index,
            len: na,
        });
    }
    if time_index >= nt {
        return Err(MetricsError::IndexOutOfRange {
            index: time_index,
            len: nt,
        });
    }
    let cut = cube.range_cut(angle_index, time_index);
    let axis = grid.range_axis();
    let peak_idx = argmax(&cut);
    if peak_idx == 0 || peak_idx == cut.len() - 1 {
        return Err(MetricsError::PeakAtBoundary);
    }
    let half = cut[peak_idx] / 2.0;

    // Walk outward from the peak until the cut drops below half maximum.
    let mut left = peak_idx;
    while left > 0 && cut[left - 1] >= half {
        left -= 1;
    }
    if left == 0 {
        return Err(MetricsError::MissingHalfCrossing { side: "left" });
    }
    let mut right = peak_idx;
    while right + 1 < cut.len() && cut[right + 1] >= half {
        right += 1;
    }
    if right + 1 == cut.len() {
        return Err(MetricsError::MissingHalfCrossing { side: "right" });
    }

    let left_x = interpolate_crossing(axis, &cut, left - 1, left, half);
    let right_x = interpolate_crossing(axis, &cut, right + 1, right, half);
    Ok(right_x - left_x)
}

/// First index attaining the maximum of `values`.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Highest sidelobe of the range cut at `(angle_index, time_index)`, in dB
/// relative to the peak (always <= 0). Returns `Ok(None)` when no local
/// maximum exists outside the mainlobe: the "no sidelobes" verdict.
///
/// The mainlobe spans the samples between the first local minima (or first
/// nulls) flanking the peak.
pub fn sidelobe_level(
    cube: &PatternCube,
    angle_index: usize,
    time_index: usize,
) -> Result<Option<f64>, MetricsError> {
    let grid = cube.grid();
    let (_, na, nt) = grid.shape();
    if angle_index >= na {
        return Err(MetricsError::IndexOutOfRange {
            index: angle_index,
            len: na,
        });
    }
    if time_index >= nt {
        return Err(MetricsError::IndexOutOfRange {
            index: time_index,
            len: nt,
        });
    }
    let cut = cube.range_cut(angle_index, time_index);
    let peak_idx = argmax(&cut);
    let peak = cut[peak_idx];
    // A constant cut has no lobes at all: "no sidelobes" rather than an error.
    let min = cut.iter().cloned().fold(f64::INFINITY, f64::min);
    if peak - min <= FLAT_SLICE_RELATIVE_SPREAD * peak.abs() {
        return Ok(None);
    }
    if peak_idx == 0 || peak_idx == cut.len() - 1 {
        return Err(MetricsError::PeakAtBoundary);
    }
    // A coherent plateau is flat only up to round-off; rises below this are
    // not lobe structure.
    let eps = 1e-12 * peak;

    // Mainlobe edges: walk outward while the cut keeps falling (flats count
    // as still inside the lobe); the walk stops where the cut first rises
    // again, i.e. at the flanking local minimum or null.
    let mut left_edge = peak_idx;
    while left_edge > 0 && cut[left_edge - 1] <= cut[left_edge] + eps {
        left_edge -= 1;
    }
    let mut right_edge = peak_idx;
    while right_edge + 1 < cut.len() && cut[right_edge + 1] <= cut[right_edge] + eps {
        right_edge += 1;
    }

    let mut best: Option<f64> = None;
    let mut consider = |i: usize| {
        if i == 0 || i + 1 >= cut.len() {
            return;
        }
        // A sidelobe sample rises clearly above its inner neighbour and does
        // not fall off outward; flat stretches (e.g. zero tails) are rejected.
        if cut[i] > cut[i - 1] + eps && cut[i] >= cut[i + 1] - eps {
            best = Some(best.map_or(cut[i], |b: f64| b.max(cut[i])));
        }
    };
    for i in 0..left_edge {
        consider(i);
    }
    for i in (right_edge + 1)..cut.len() {
        consider(i);
    }

    Ok(best.map(|b| 20.0 * (b / peak).log10()))
}

/// One tracked pattern peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakSample {
    pub time: f64,
    pub peak_range: f64,
    pub peak_angle: f64,
    pub peak_magnitude: f64,
}

/// Per-time peak positions with a least-squares range speed and the maximal
/// angular excursion from the median peak angle.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakTrack {
    pub samples: Vec<PeakSample>,
    /// Least-squares slope of `peak_range` versus time, m/s.
    pub fitted_speed: f64,
    /// `max |peak_angle - median(peak_angle)|`, radians.
    pub angle_drift: f64,
    /// True when every time slice was flat (constant magnitude): the peak
    /// position carries no information and the fitted speed is pinned to 0.
    pub degenerate: bool,
}

const FLAT_SLICE_RELATIVE_SPREAD: f64 = 1e-12;

/// Evaluates the cube for `config` on `grid` and tracks the per-time argmax
/// over range and angle (ties break to the smallest range, then the smallest
/// angle).
pub fn track_peak(
    config: &ArrayConfig,
    grid: &PatternGrid,
    model: DelayModel,
) -> Result<PeakTrack, MetricsError> {
    let (nr, na, nt) = grid.shape();
    if nt < 2 {
        return Err(MetricsError::TooFewTimeSamples);
    }
    let cube = crate::field::evaluate_cube(config, grid, model)?;

    let mut samples = Vec::with_capacity(nt);
    let mut flat_slices = 0usize;
    for k in 0..nt {
        let mut max_v = f64::NEG_INFINITY;
        let mut min_v = f64::INFINITY;
        let mut best = (0usize, 0usize);
        for i in 0..nr {
            for j in 0..na {
                let v = cube.magnitude(i, j, k);
                if v > max_v {
                    max_v = v;
                    best = (i, j);
                }
                if v < min_v {
                    min_v = v;
                }
            }
        }
        let flat = max_v - min_v <= FLAT_SLICE_RELATIVE_SPREAD * max_v.abs();
        if flat {
            flat_slices += 1;
            best = (0, 0);
        } else {
            // A peak pressed against a multi-sample axis boundary means the
            // window clipped it.
            if nr > 1 && (best.0 == 0 || best.0 == nr - 1) {
                return Err(MetricsError::PeakAtBoundary);
            }
            if na > 1 && (best.1 == 0 || best.1 == na - 1) {
                return Err(MetricsError::PeakAtBoundary);
            }
        }
        samples.push(PeakSample {
            time: grid.time_axis()[k],
            peak_range: grid.range_axis()[best.0],
            peak_angle: grid.angle_axis()[best.1],
            peak_magnitude: max_v,
        });
    }

    let degenerate = flat_slices == nt;
    if flat_slices > 0 && !degenerate {
        let k = (0..nt).find(|&k| {
            let s = &samples[k];
            s.peak_range == grid.range_axis()[0] && s.peak_angle == grid.angle_axis()[0]
        });
        return Err(MetricsError::FlatSlice {
            time_s: grid.time_axis()[k.unwrap_or(0)],
        });
    }

    let times: Vec<f64> = samples.iter().map(|s| s.time).collect();
    let ranges: Vec<f64> = samples.iter().map(|s| s.peak_range).collect();
    let fitted_speed = least_squares_slope(&times, &ranges);
    let angles: Vec<f64> = samples.iter().map(|s| s.peak_angle).collect();
    let angle_drift = max_deviation_from_median(&angles);

    Ok(PeakTrack {
        samples,
        fitted_speed,
        angle_drift,
        degenerate,
    })
}

/// Least-squares slope of `ys` against `xs`. A constant series has slope 0
/// exactly, with no round-off from the mean subtraction.
fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    if ys.iter().all(|&y| y == ys[0]) {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        num += (x - mean_x) * (y - mean_y);
        den += (x - mean_x) * (x - mean_x);
    }
    num / den
}

fn max_deviation_from_median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    values
        .iter()
        .map(|v| (v - median).abs())
        .fold(0.0, f64::max)
}

/// Result of a time-range shift check.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    /// Maximum of `| |B(r + c*dt, a, t + dt)| - |B(r, a, t)| | / max(|B|, floor)`.
    pub max_relative_deviation: f64,
    /// `(point, t, dt)` attaining the maximum; `None` only for empty input.
    pub witness: Option<(ObservationPoint, f64, f64)>,
    pub samples_checked: usize,
}

/// Checks the time-range shift law over explicit samples: for each `(point, t)`
/// and each `dt`, compares the magnitude at `(point, t)` against the magnitude
/// at `(point shifted by c*dt, t + dt)`.
///
/// Under [`DelayModel::FarField`] the two are analytically identical; under
/// [`DelayModel::ExactSpherical`] the deviation is the near-field correction,
/// shrinking as ranges grow.
pub fn check_time_range_invariance(
    config: &ArrayConfig,
    samples: &[(ObservationPoint, f64)],
    dt_list: &[f64],
    model: DelayModel,
) -> Result<InvarianceReport, FieldError> {
    let eval = FieldEvaluator::new(config, model)?;

    let per_sample = |&(point, t): &(ObservationPoint, f64)| -> Result<(f64, (ObservationPoint, f64, f64)), FieldError> {
        let base = eval.field(point, t)?.norm();
        let mut local_max = f64::NEG_INFINITY;
        let mut local_witness = (point, t, 0.0);
        for &dt in dt_list {
            let moved = point.shifted(dt)?;
            let shifted = eval.field(moved, t + dt)?.norm();
            let deviation = (shifted - base).abs() / base.max(RELATIVE_DEVIATION_FLOOR);
            if deviation > local_max {
                local_max = deviation;
                local_witness = (point, t, dt);
            }
        }
        Ok((local_max, local_witness))
    };

    #[cfg(feature = "parallel")]
    let locals: Vec<(f64, (ObservationPoint, f64, f64))> = samples
        .par_iter()
        .map(per_sample)
        .collect::<Result<_, _>>()?;

    #[cfg(not(feature = "parallel"))]
    let locals: Vec<(f64, (ObservationPoint, f64, f64))> =
        samples.iter().map(per_sample).collect::<Result<_, _>>()?;

    // Deterministic reduction in sample order; strict comparison keeps the
    // earliest witness on ties.
    let mut max_relative_deviation = f64::NEG_INFINITY;
    let mut witness = None;
    for (local_max, local_witness) in locals {
        if local_max > max_relative_deviation {
            max_relative_deviation = local_max;
            witness = Some(local_witness);
        }
    }
    Ok(InvarianceReport {
        max_relative_deviation: max_relative_deviation.max(0.0),
        witness,
        samples_checked: samples.len() * dt_list.len(),
    })
}

/// Elementwise difference summary of two cubes on identical grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternDiff {
    pub max_abs_diff: f64,
    pub rms_diff: f64,
}

/// Compares two cubes sample by sample. Errors unless the grids are identical.
pub fn compare_patterns(a: &PatternCube, b: &PatternCube) -> Result<PatternDiff, MetricsError> {
    if a.grid() != b.grid() {
        return Err(MetricsError::GridMismatch);
    }
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0f64;
    for (&x, &y) in a.magnitudes().iter().zip(b.magnitudes()) {
        let d = (x - y).abs();
        max_abs = max_abs.max(d);
        sum_sq += d * d;
    }
    Ok(PatternDiff {
        max_abs_diff: max_abs,
        rms_diff: (sum_sq / a.magnitudes().len() as f64).sqrt(),
    })
}

/// Magnitude excursion of the field at one fixed observation point over a
/// time window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSwing {
    pub max_magnitude: f64,
    pub min_magnitude: f64,
    /// `20*log10(max / max(min, floor))`; 0 for an identically zero signal.
    pub swing_db: f64,
}

/// Samples `|B|` at `point` over `n_samples` instants in `[t_start,
/// t_start + span)` and reports the peak-to-trough swing. A time-varying
/// pattern shows a large swing at a fixed location; a CW phased array shows
/// none.
pub fn fixed_point_time_swing(
    config: &ArrayConfig,
    point: ObservationPoint,
    t_start: f64,
    span: f64,
    n_samples: usize,
    model: DelayModel,
) -> Result<TimeSwing, MetricsError> {
    if n_samples == 0 || !(span.is_finite() && span > 0.0) {
        return Err(MetricsError::Invalid(ValidationError::single(
            "probe",
            "span must be > 0 and n_samples >= 1",
        )));
    }
    let eval = FieldEvaluator::new(config, model).map_err(FieldError::from)?;
    let step = span / n_samples as f64;
    let mut max_m = f64::NEG_INFINITY;
    let mut min_m = f64::INFINITY;
    for i in 0..n_samples {
        let m = eval
            .field(point, t_start + i as f64 * step)
            .map_err(MetricsError::from)?
            .norm();
        max_m = max_m.max(m);
        min_m = min_m.min(m);
    }
    let swing_db = if max_m <= 0.0 {
        0.0
    } else {
        20.0 * (max_m / min_m.max(RELATIVE_DEVIATION_FLOOR)).log10()
    };
    Ok(TimeSwing {
        max_magnitude: max_m,
        min_magnitude: min_m,
        swing_db,
    })
}
