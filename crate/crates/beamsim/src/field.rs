//! Instantaneous complex fields of linear arrays over range, angle, and time.
//!
//! The field at an observation point is the superposition of the element
//! drives evaluated at each element's retarded time `t - r_n/c`, where `r_n`
//! is the element-to-observer distance under the chosen [`DelayModel`]:
//!
//! * [`DelayModel::FarField`] uses the parallel-ray approximation
//!   `r_n = r - x_n * sin(theta)`. Under this model the magnitude pattern
//!   satisfies the time-range shift law `|B(r + c*dt, theta, t + dt)| =
//!   |B(r, theta, t)|` identically: a range-focused spot necessarily travels
//!   outward at the speed of light.
//! * [`DelayModel::ExactSpherical`] uses the exact spherical wavefront
//!   distance and serves as the reference for quantifying the approximation.
//!
//! Retarded times are computed in the distance domain (`c*t - r_n`, divided
//! by `c` once per element) so that the far-field shift law holds not just
//! analytically but bit-for-bit whenever `r`, `t`, `dt`, and `c*dt` are
//! exactly representable; the shift-law checks then measure the model, not
//! floating-point round-off.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{FieldError, ValidationError, Violation};
use crate::signal::{ArrayConfig, EnvelopeSpec};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const TAU: f64 = std::f64::consts::TAU;

/// Element-to-observer distance model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayModel {
    /// Parallel-ray approximation `r_n = r - x_n * sin(theta)`; valid in the
    /// far field, errors when it produces a non-positive range.
    FarField,
    /// Exact spherical distance `sqrt(r^2 + x_n^2 - 2 r x_n sin(theta))`.
    ExactSpherical,
}

/// A point in the range/angle observation plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationPoint {
    range: f64,
    angle: f64,
}

impl ObservationPoint {
    /// `range` in meters (>= 0), `angle` in radians strictly inside
    /// `(-pi/2, pi/2)`, measured from broadside.
    pub fn new(range: f64, angle: f64) -> Result<Self, ValidationError> {
        let mut violations = Vec::new();
        if !(range.is_finite() && range >= 0.0) {
            violations.push(Violation::new("range", "must be finite and >= 0"));
        }
        if !(angle.is_finite() && angle.abs() < std::f64::consts::FRAC_PI_2) {
            violations.push(Violation::new(
                "angle",
                "must lie strictly inside (-pi/2, pi/2)",
            ));
        }
        if violations.is_empty() {
            Ok(Self { range, angle })
        } else {
            Err(ValidationError::new(violations))
        }
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// The point reached after time `dt` by anything travelling outward at
    /// the speed of light: `(range + c*dt, angle)`.
    pub fn shifted(&self, dt: f64) -> Result<Self, FieldError> {
        let moved = self.range + SPEED_OF_LIGHT * dt;
        if moved < 0.0 {
            return Err(FieldError::NegativeShiftedRange {
                range_m: self.range,
                dt_s: dt,
            });
        }
        Ok(Self {
            range: moved,
            angle: self.angle,
        })
    }
}

/// Free-function form of [`ObservationPoint::shifted`].
pub fn shifted_point(point: ObservationPoint, dt: f64) -> Result<ObservationPoint, FieldError> {
    point.shifted(dt)
}

#[inline]
fn spherical_range(range: f64, x: f64, x_sin: f64) -> f64 {
    (range * range + x * x - 2.0 * range * x_sin).sqrt()
}

/// Distance from element `element_index` to the observation point under the
/// given delay model, meters.
pub fn element_range(
    point: ObservationPoint,
    element_index: usize,
    config: &ArrayConfig,
    model: DelayModel,
) -> Result<f64, FieldError> {
    if element_index >= config.n_elements {
        return Err(FieldError::ElementIndexOutOfRange {
            index: element_index,
            n_elements: config.n_elements,
        });
    }
    let x = config.element_position(element_index);
    let sin = point.angle().sin();
    match model {
        DelayModel::FarField => {
            if point.range() <= 0.0 {
                return Err(FieldError::NonPositiveObservationRange {
                    range_m: point.range(),
                });
            }
            let r_n = point.range() - x * sin;
            if r_n <= 0.0 {
                return Err(FieldError::NonPositiveFarFieldRange {
                    element: element_index,
                    range_m: r_n,
                });
            }
            Ok(r_n)
        }
        DelayModel::ExactSpherical => Ok(spherical_range(point.range(), x, x * sin)),
    }
}

struct PreparedElement {
    x: f64,
    amplitude: f64,
    phase: f64,
    /// Radiated frequency `carrier + freq_offset`, Hz.
    rf_freq: f64,
    freq_offset: f64,
    envelope: EnvelopeSpec,
}

/// A validated array fixed to one delay model, ready for repeated point
/// evaluations. Building one up front amortizes validation and per-element
/// setup across a whole grid.
pub struct FieldEvaluator {
    elements: Vec<PreparedElement>,
    carrier: f64,
    couple_offset_aperture: bool,
    spreading_loss: bool,
    model: DelayModel,
}

impl FieldEvaluator {
    pub fn new(config: &ArrayConfig, model: DelayModel) -> Result<Self, ValidationError> {
        let violations = config.validate();
        if !violations.is_empty() {
            return Err(ValidationError::new(violations));
        }
        let elements = config
            .elements
            .iter()
            .enumerate()
            .map(|(n, e)| PreparedElement {
                x: config.element_position(n),
                amplitude: e.amplitude,
                phase: e.phase,
                rf_freq: config.carrier + e.freq_offset,
                freq_offset: e.freq_offset,
                envelope: e.envelope,
            })
            .collect();
        Ok(Self {
            elements,
            carrier: config.carrier,
            couple_offset_aperture: config.couple_offset_aperture,
            spreading_loss: config.spreading_loss,
            model,
        })
    }

    pub fn model(&self) -> DelayModel {
        self.model
    }

    /// Complex field at an observation point and instant.
    pub fn field(&self, point: ObservationPoint, t: f64) -> Result<Complex64, FieldError> {
        self.field_at(point.range(), point.angle().sin(), t)
    }

    /// Field magnitude at an observation point and instant.
    pub fn magnitude(&self, point: ObservationPoint, t: f64) -> Result<f64, FieldError> {
        Ok(self.field(point, t)?.norm())
    }

    /// Core evaluation over `(range, sin(angle), t)`. Elements are summed in
    /// ascending index order so results are deterministic regardless of how
    /// callers distribute points across threads.
    fn field_at(&self, range: f64, sin_angle: f64, t: f64) -> Result<Complex64, FieldError> {
        if self.model == DelayModel::FarField && range <= 0.0 {
            return Err(FieldError::NonPositiveObservationRange { range_m: range });
        }
        let ct = SPEED_OF_LIGHT * t;
        // Common retarded distance c*t - r; per-element terms are added to it
        // so a (c*dt, dt) range/time shift cancels before any division.
        let lead = ct - range;
        let t_ref = lead / SPEED_OF_LIGHT;
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, e) in self.elements.iter().enumerate() {
            let x_sin = e.x * sin_angle;
            let (tau, r_n) = match self.model {
                DelayModel::FarField => {
                    let r_n = range - x_sin;
                    if r_n <= 0.0 {
                        return Err(FieldError::NonPositiveFarFieldRange {
                            element: n,
                            range_m: r_n,
                        });
                    }
                    ((lead + x_sin) / SPEED_OF_LIGHT, r_n)
                }
                DelayModel::ExactSpherical => {
                    let r_n = spherical_range(range, e.x, x_sin);
                    ((ct - r_n) / SPEED_OF_LIGHT, r_n)
                }
            };
            let phase = if self.couple_offset_aperture {
                TAU * (e.rf_freq * tau) + e.phase
            } else {
                // Frequency offsets advance with the common reference delay
                // t - r/c instead of t - r_n/c, dropping the offset-aperture
                // cross term. Matches the closed-form uniform-array oracle.
                TAU * (self.carrier * tau + e.freq_offset * t_ref) + e.phase
            };
            let mut amplitude = e.amplitude * e.envelope.value(tau);
            if self.spreading_loss {
                if r_n <= 0.0 {
                    return Err(FieldError::ZeroRangeSpreading { element: n });
                }
                amplitude /= r_n;
            }
            acc += Complex64::from_polar(amplitude, phase);
        }
        Ok(acc)
    }
}

/// Instantaneous complex field of the array at one observation point.
///
/// Equals the ascending-index sum over elements of
/// `a_n * g_n(t - r_n/c) * exp(j*(2*pi*(f0 + df_n)*(t - r_n/c) + phi_n))`
/// with `r_n` from [`element_range`] under the chosen model.
pub fn instantaneous_field(
    config: &ArrayConfig,
    point: ObservationPoint,
    t: f64,
    model: DelayModel,
) -> Result<Complex64, FieldError> {
    FieldEvaluator::new(config, model)?.field(point, t)
}

/// Magnitude of the array factor of a uniform continuous-wave array:
/// `|sin(N*pi*psi) / sin(pi*psi)|` with the removable singularity at integer
/// `psi` evaluating to `N`.
///
/// Here `psi = df*(t - r/c) + f0*d*sin(theta)/c` is supplied by the caller.
/// The closed form matches the direct element sum for unit amplitudes, zero
/// phases, a CW envelope, and offset-aperture coupling disabled.
pub fn closed_form_fda_magnitude(n_elements: usize, psi: f64) -> f64 {
    let n = n_elements as f64;
    // Reduce to the nearest integer before taking sines: both numerator and
    // denominator are periodic with period 1 up to sign, and small arguments
    // keep the evaluation well conditioned far from psi = 0.
    let w = psi - psi.round();
    if w == 0.0 {
        return n;
    }
    let num = (n * std::f64::consts::PI * w).sin().abs();
    let den = (std::f64::consts::PI * w).sin().abs();
    num / den
}

/// A rectilinear observation grid over range, angle, and time.
///
/// Axes are strictly increasing and may have length one.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternGrid {
    range_axis: Vec<f64>,
    angle_axis: Vec<f64>,
    time_axis: Vec<f64>,
}

impl PatternGrid {
    /// Ranges in meters (>= 0), angles in radians strictly inside
    /// `(-pi/2, pi/2)`, times in seconds. Every axis must be non-empty and
    /// strictly increasing.
    pub fn new(
        range_axis: Vec<f64>,
        angle_axis: Vec<f64>,
        time_axis: Vec<f64>,
    ) -> Result<Self, ValidationError> {
        let mut violations = Vec::new();
        check_axis("range_axis", &range_axis, &mut violations);
        check_axis("angle_axis", &angle_axis, &mut violations);
        check_axis("time_axis", &time_axis, &mut violations);
        if range_axis.iter().any(|&r| r < 0.0) {
            violations.push(Violation::new("range_axis", "all ranges must be >= 0"));
        }
        if angle_axis
            .iter()
            .any(|&a| a.abs() >= std::f64::consts::FRAC_PI_2)
        {
            violations.push(Violation::new(
                "angle_axis",
                "all angles must lie strictly inside (-pi/2, pi/2)",
            ));
        }
        if violations.is_empty() {
            Ok(Self {
                range_axis,
                angle_axis,
                time_axis,
            })
        } else {
            Err(ValidationError::new(violations))
        }
    }

    pub fn range_axis(&self) -> &[f64] {
        &self.range_axis
    }

    pub fn angle_axis(&self) -> &[f64] {
        &self.angle_axis
    }

    pub fn time_axis(&self) -> &[f64] {
        &self.time_axis
    }

    /// `(n_range, n_angle, n_time)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (
            self.range_axis.len(),
            self.angle_axis.len(),
            self.time_axis.len(),
        )
    }

    pub fn len(&self) -> usize {
        self.range_axis.len() * self.angle_axis.len() * self.time_axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_axis(name: &str, axis: &[f64], out: &mut Vec<Violation>) {
    if axis.is_empty() {
        out.push(Violation::new(name, "must be non-empty"));
        return;
    }
    if axis.iter().any(|v| !v.is_finite()) {
        out.push(Violation::new(name, "all samples must be finite"));
    }
    if axis.windows(2).any(|w| w[0] >= w[1]) {
        out.push(Violation::new(name, "must be strictly increasing"));
    }
}

/// Field magnitudes sampled on a [`PatternGrid`], indexed `[range][angle][time]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCube {
    grid: PatternGrid,
    magnitudes: Vec<f64>,
    config_digest: String,
}

impl PatternCube {
    /// Assembles a cube from raw parts, checking the shape and that every
    /// magnitude is finite and non-negative.
    pub fn from_parts(
        grid: PatternGrid,
        magnitudes: Vec<f64>,
        config_digest: String,
    ) -> Result<Self, ValidationError> {
        if magnitudes.len() != grid.len() {
            return Err(ValidationError::single(
                "magnitudes",
                format!(
                    "length {} does not match grid size {}",
                    magnitudes.len(),
                    grid.len()
                ),
            ));
        }
        if magnitudes.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(ValidationError::single(
                "magnitudes",
                "all entries must be finite and >= 0",
            ));
        }
        Ok(Self {
            grid,
            magnitudes,
            config_digest,
        })
    }

    pub fn grid(&self) -> &PatternGrid {
        &self.grid
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn config_digest(&self) -> &str {
        &self.config_digest
    }

    #[inline]
    pub fn index(&self, range_idx: usize, angle_idx: usize, time_idx: usize) -> usize {
        let (_, na, nt) = self.grid.shape();
        (range_idx * na + angle_idx) * nt + time_idx
    }

    #[inline]
    pub fn magnitude(&self, range_idx: usize, angle_idx: usize, time_idx: usize) -> f64 {
        self.magnitudes[self.index(range_idx, angle_idx, time_idx)]
    }

    /// The range cut at a fixed angle and time.
    pub fn range_cut(&self, angle_idx: usize, time_idx: usize) -> Vec<f64> {
        let (nr, _, _) = self.grid.shape();
        (0..nr)
            .map(|i| self.magnitude(i, angle_idx, time_idx))
            .collect()
    }

    /// Largest magnitude in the cube (0 for an all-zero cube).
    pub fn max_magnitude(&self) -> f64 {
        self.magnitudes.iter().cloned().fold(0.0, f64::max)
    }
}

/// Stable digest identifying an `(ArrayConfig, DelayModel)` pair, used to tag
/// cubes with their provenance. FNV-1a over the exact bit patterns.
pub fn config_digest(config: &ArrayConfig, model: DelayModel) -> String {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    let mut eat = |bits: u64| {
        for byte in bits.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    eat(config.n_elements as u64);
    eat(config.spacing.to_bits());
    eat(config.carrier.to_bits());
    eat(u64::from(config.couple_offset_aperture));
    eat(u64::from(config.spreading_loss));
    for e in &config.elements {
        eat(e.amplitude.to_bits());
        eat(e.phase.to_bits());
        eat(e.freq_offset.to_bits());
        match e.envelope {
            EnvelopeSpec::Cw => eat(1),
            EnvelopeSpec::Gaussian { fdhm, center } => {
                eat(2);
                eat(fdhm.to_bits());
                eat(center.to_bits());
            }
            EnvelopeSpec::Rect { duration, start } => {
                eat(3);
                eat(duration.to_bits());
                eat(start.to_bits());
            }
            EnvelopeSpec::PeriodicSwitch {
                period,
                duty,
                offset,
            } => {
                eat(4);
                eat(period.to_bits());
                eat(duty.to_bits());
                eat(offset.to_bits());
            }
        }
    }
    eat(match model {
        DelayModel::FarField => 1,
        DelayModel::ExactSpherical => 2,
    });
    format!("fnv1a64:{h:016x}")
}

fn cube_compute(
    eval: &FieldEvaluator,
    grid: &PatternGrid,
    sines: &[f64],
    flat: usize,
) -> Result<f64, FieldError> {
    let (_, na, nt) = grid.shape();
    let i = flat / (na * nt);
    let rem = flat % (na * nt);
    let j = rem / nt;
    let k = rem % nt;
    Ok(eval
        .field_at(grid.range_axis()[i], sines[j], grid.time_axis()[k])?
        .norm())
}

/// Evaluates `|instantaneous_field|` on every grid point.
///
/// Points are independent, so evaluation is data-parallel when the `parallel`
/// feature is enabled; each point's element sum runs in fixed order, making
/// the result bit-identical to [`evaluate_cube_sequential`] for any thread
/// count.
pub fn evaluate_cube(
    config: &ArrayConfig,
    grid: &PatternGrid,
    model: DelayModel,
) -> Result<PatternCube, FieldError> {
    let eval = FieldEvaluator::new(config, model)?;
    let sines: Vec<f64> = grid.angle_axis().iter().map(|a| a.sin()).collect();

    #[cfg(feature = "parallel")]
    let magnitudes = (0..grid.len())
        .into_par_iter()
        .map(|flat| cube_compute(&eval, grid, &sines, flat))
        .collect::<Result<Vec<f64>, FieldError>>()?;

    #[cfg(not(feature = "parallel"))]
    let magnitudes = (0..grid.len())
        .map(|flat| cube_compute(&eval, grid, &sines, flat))
        .collect::<Result<Vec<f64>, FieldError>>()?;

    Ok(PatternCube {
        grid: grid.clone(),
        magnitudes,
        config_digest: config_digest(config, model),
    })
}

/// Single-threaded [`evaluate_cube`]; also the reference for determinism
/// checks and benchmark comparisons.
pub fn evaluate_cube_sequential(
    config: &ArrayConfig,
    grid: &PatternGrid,
    model: DelayModel,
) -> Result<PatternCube, FieldError> {
    let eval = FieldEvaluator::new(config, model)?;
    let sines: Vec<f64> = grid.angle_axis().iter().map(|a| a.sin()).collect();
    let magnitudes = (0..grid.len())
        .map(|flat| cube_compute(&eval, grid, &sines, flat))
        .collect::<Result<Vec<f64>, FieldError>>()?;
    Ok(PatternCube {
        grid: grid.clone(),
        magnitudes,
        config_digest: config_digest(config, model),
    })
}
