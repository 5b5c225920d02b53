//! Array geometry, per-element excitations, and baseband magnitude envelopes.
//!
//! An [`ArrayConfig`] describes a uniform linear array: element `n` sits at
//! axial position `x_n = n * spacing` and radiates at `carrier + freq_offset`
//! with its own amplitude, phase, and baseband envelope. Everything here is
//! immutable plain data; all operations are pure functions.

use crate::error::{ValidationError, Violation};

/// Baseband magnitude envelope of an element drive signal.
///
/// Evaluated values always lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopeSpec {
    /// Continuous wave: unit magnitude for all time.
    Cw,
    /// Gaussian pulse parameterized by its full duration at half maximum.
    Gaussian {
        /// Full duration at half maximum, seconds (> 0).
        fdhm: f64,
        /// Instant of the pulse peak, seconds.
        center: f64,
    },
    /// Rectangular pulse with half-open support `[start, start + duration)`.
    Rect {
        /// Pulse length, seconds (> 0).
        duration: f64,
        /// Leading edge, seconds.
        start: f64,
    },
    /// Periodic on/off switching: on during the first `duty` fraction of each
    /// period, off for the rest.
    PeriodicSwitch {
        /// Switching period, seconds (> 0).
        period: f64,
        /// On fraction of each period, in `(0, 1]`.
        duty: f64,
        /// Time of a switch-on edge, seconds.
        offset: f64,
    },
}

impl EnvelopeSpec {
    /// Collects invariant violations for this envelope under the given field path.
    pub fn validate_into(&self, field: &str, out: &mut Vec<Violation>) {
        match *self {
            EnvelopeSpec::Cw => {}
            EnvelopeSpec::Gaussian { fdhm, center } => {
                if !(fdhm.is_finite() && fdhm > 0.0) {
                    out.push(Violation::new(format!("{field}.fdhm"), "must be > 0"));
                }
                if !center.is_finite() {
                    out.push(Violation::new(format!("{field}.center"), "must be finite"));
                }
            }
            EnvelopeSpec::Rect { duration, start } => {
                if !(duration.is_finite() && duration > 0.0) {
                    out.push(Violation::new(format!("{field}.duration"), "must be > 0"));
                }
                if !start.is_finite() {
                    out.push(Violation::new(format!("{field}.start"), "must be finite"));
                }
            }
            EnvelopeSpec::PeriodicSwitch {
                period,
                duty,
                offset,
            } => {
                if !(period.is_finite() && period > 0.0) {
                    out.push(Violation::new(format!("{field}.period"), "must be > 0"));
                }
                if !(duty.is_finite() && duty > 0.0 && duty <= 1.0) {
                    out.push(Violation::new(format!("{field}.duty"), "must be in (0, 1]"));
                }
                if !offset.is_finite() {
                    out.push(Violation::new(format!("{field}.offset"), "must be finite"));
                }
            }
        }
    }

    /// Returns the violations for a standalone envelope.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.validate_into("envelope", &mut out);
        out
    }

    /// Evaluates the envelope at time `t`, assuming the spec is valid.
    ///
    /// The result is in `[0, 1]` for any finite `t`.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            EnvelopeSpec::Cw => 1.0,
            EnvelopeSpec::Gaussian { fdhm, center } => {
                let q = (t - center) / fdhm;
                (-4.0 * std::f64::consts::LN_2 * q * q).exp()
            }
            EnvelopeSpec::Rect { duration, start } => {
                if t >= start && t < start + duration {
                    1.0
                } else {
                    0.0
                }
            }
            EnvelopeSpec::PeriodicSwitch {
                period,
                duty,
                offset,
            } => {
                let x = (t - offset) / period;
                // Fractional part in [0, 1); rounding can land exactly on 1.0,
                // which wraps to the start of the next period.
                let mut frac = x - x.floor();
                if frac >= 1.0 {
                    frac = 0.0;
                }
                if frac < duty {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Nominal on-time of the envelope: FDHM for Gaussian, support for Rect,
    /// `duty * period` for a periodic switch, `None` for CW.
    pub fn duration_hint(&self) -> Option<f64> {
        match *self {
            EnvelopeSpec::Cw => None,
            EnvelopeSpec::Gaussian { fdhm, .. } => Some(fdhm),
            EnvelopeSpec::Rect { duration, .. } => Some(duration),
            EnvelopeSpec::PeriodicSwitch { period, duty, .. } => Some(period * duty),
        }
    }
}

/// Evaluates a baseband envelope at time `t` after validating the spec.
pub fn envelope_value(spec: &EnvelopeSpec, t: f64) -> Result<f64, ValidationError> {
    let violations = spec.validate();
    if !violations.is_empty() {
        return Err(ValidationError::new(violations));
    }
    Ok(spec.value(t))
}

/// Excitation of a single array element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementExcitation {
    /// Drive amplitude, dimensionless, >= 0.
    pub amplitude: f64,
    /// Drive phase, radians.
    pub phase: f64,
    /// Frequency offset from the array carrier, Hz. Must satisfy
    /// `|freq_offset| < carrier`.
    pub freq_offset: f64,
    /// Baseband magnitude envelope of the drive signal.
    pub envelope: EnvelopeSpec,
}

impl ElementExcitation {
    /// Unit-amplitude, zero-phase excitation with the given offset and envelope.
    pub fn uniform(freq_offset: f64, envelope: EnvelopeSpec) -> Self {
        Self {
            amplitude: 1.0,
            phase: 0.0,
            freq_offset,
            envelope,
        }
    }
}

/// A uniform linear array of isotropic elements.
///
/// Element `n` (for `n = 0..n_elements`) sits at axial position
/// `x_n = n * spacing` along the array line; angles are measured from
/// broadside (the array normal).
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayConfig {
    /// Number of elements, >= 1.
    pub n_elements: usize,
    /// Inter-element spacing, meters, > 0.
    pub spacing: f64,
    /// Carrier frequency shared by all elements, Hz, > 0.
    pub carrier: f64,
    /// Per-element excitations; length must equal `n_elements`.
    pub elements: Vec<ElementExcitation>,
    /// Keep the per-element phase term coupling frequency offsets to aperture
    /// position. Physically present; disable only to compare against the
    /// closed-form uniform-array oracle, which excludes it.
    pub couple_offset_aperture: bool,
    /// Apply a 1/r amplitude factor per element. Off by default so patterns
    /// isolate array-factor structure.
    pub spreading_loss: bool,
}

impl ArrayConfig {
    /// Axial position of element `n`, meters.
    pub fn element_position(&self, n: usize) -> f64 {
        n as f64 * self.spacing
    }

    /// Sum of element amplitudes; an upper bound on any field magnitude when
    /// spreading loss is disabled.
    pub fn amplitude_sum(&self) -> f64 {
        self.elements.iter().map(|e| e.amplitude).sum()
    }

    /// True when at least two elements radiate at distinct frequencies.
    pub fn has_distinct_offsets(&self) -> bool {
        self.elements
            .windows(2)
            .any(|w| w[0].freq_offset != w[1].freq_offset)
    }

    /// Period of the envelope-free magnitude pattern in time, if one exists:
    /// the reciprocal of the greatest common divisor of the pairwise frequency
    /// offset differences, quantized to 1 mHz. `None` when all offsets agree.
    pub fn offset_period(&self) -> Option<f64> {
        const QUANTUM_HZ: f64 = 1e-3;
        let base = self.elements.first()?.freq_offset;
        let mut gcd_mhz: u64 = 0;
        for e in &self.elements {
            let diff = ((e.freq_offset - base) / QUANTUM_HZ).round().abs();
            if diff > u64::MAX as f64 {
                return None;
            }
            gcd_mhz = gcd_u64(gcd_mhz, diff as u64);
        }
        if gcd_mhz == 0 {
            None
        } else {
            Some(1.0 / (gcd_mhz as f64 * QUANTUM_HZ))
        }
    }

    /// Returns every violated invariant; empty means the config is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n_elements < 1 {
            out.push(Violation::new("n_elements", "must be >= 1"));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            out.push(Violation::new("spacing", "must be > 0"));
        }
        if !(self.carrier.is_finite() && self.carrier > 0.0) {
            out.push(Violation::new("carrier", "must be > 0"));
        }
        if self.elements.len() != self.n_elements {
            out.push(Violation::new(
                "elements",
                format!(
                    "length mismatch: {} entries for n_elements = {}",
                    self.elements.len(),
                    self.n_elements
                ),
            ));
        }
        for (n, e) in self.elements.iter().enumerate() {
            let path = format!("elements[{n}]");
            if !(e.amplitude.is_finite() && e.amplitude >= 0.0) {
                out.push(Violation::new(
                    format!("{path}.amplitude"),
                    "must be finite and >= 0",
                ));
            }
            if !e.phase.is_finite() {
                out.push(Violation::new(format!("{path}.phase"), "must be finite"));
            }
            if !e.freq_offset.is_finite() || e.freq_offset.abs() >= self.carrier {
                out.push(Violation::new(
                    format!("{path}.freq_offset"),
                    "magnitude must be finite and below the carrier frequency",
                ));
            }
            e.envelope
                .validate_into(&format!("{path}.envelope"), &mut out);
        }
        out
    }

    /// Returns the config if valid, otherwise the full violation list.
    pub fn validated(self) -> Result<Self, ValidationError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(ValidationError::new(violations))
        }
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Builds a linear-offset frequency diverse array: element `n` radiates at
/// `carrier + n * delta_f` with unit amplitude, zero phase, and the shared
/// envelope. `delta_f = 0` degenerates to a broadside phased array.
pub fn make_linear_fda(
    n: usize,
    spacing: f64,
    carrier: f64,
    delta_f: f64,
    envelope: EnvelopeSpec,
) -> Result<ArrayConfig, ValidationError> {
    let elements = (0..n)
        .map(|k| ElementExcitation::uniform(k as f64 * delta_f, envelope))
        .collect();
    ArrayConfig {
        n_elements: n,
        spacing,
        carrier,
        elements,
        couple_offset_aperture: true,
        spreading_loss: false,
    }
    .validated()
}

/// Builds a phased array steered to `steer_angle` (radians from broadside):
/// all elements share the carrier, and element `n` is driven with phase
/// `-2*pi*carrier*n*spacing*sin(steer_angle)/c` so the CW array factor peaks
/// at the steering angle.
pub fn make_steered_phased_array(
    n: usize,
    spacing: f64,
    carrier: f64,
    steer_angle: f64,
    envelope: EnvelopeSpec,
) -> Result<ArrayConfig, ValidationError> {
    if !(steer_angle.is_finite() && steer_angle.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(ValidationError::single(
            "steer_angle",
            "must lie strictly inside (-pi/2, pi/2)",
        ));
    }
    let phase_per_meter =
        -std::f64::consts::TAU * carrier * steer_angle.sin() / crate::field::SPEED_OF_LIGHT;
    let elements = (0..n)
        .map(|k| ElementExcitation {
            amplitude: 1.0,
            phase: (k as f64 * spacing) * phase_per_meter,
            freq_offset: 0.0,
            envelope,
        })
        .collect();
    ArrayConfig {
        n_elements: n,
        spacing,
        carrier,
        elements,
        couple_offset_aperture: true,
        spreading_loss: false,
    }
    .validated()
}
