//! Error types shared across the crate.

use std::fmt;

use thiserror::Error;

/// A single violated invariant, reported with the path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Path of the field that violates an invariant, e.g. `elements[3].amplitude`.
    pub field: String,
    /// Human-readable description of the violated invariant.
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// One or more violated invariants found while validating an input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl ValidationError {
    pub fn new(violations: Vec<Violation>) -> Self {
        Self { violations }
    }

    pub fn single(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            violations: vec![Violation::new(field, message)],
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Errors raised while evaluating fields and delays.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    /// The parallel-ray delay model produced a non-positive element range; the
    /// observation point lies inside or behind the aperture.
    #[error(
        "far-field range for element {element} is {range_m} m (not positive); \
         use the exact-spherical delay model for this geometry"
    )]
    NonPositiveFarFieldRange { element: usize, range_m: f64 },

    /// The parallel-ray model needs a strictly positive observation range.
    #[error("far-field delay model requires observation range > 0, got {range_m} m")]
    NonPositiveObservationRange { range_m: f64 },

    /// 1/r spreading cannot be applied at zero element range.
    #[error("element {element} range is zero; cannot apply 1/r spreading loss")]
    ZeroRangeSpreading { element: usize },

    /// A time shift moved an observation point to a negative range.
    #[error("time shift of {dt_s} s moves range {range_m} m below zero")]
    NegativeShiftedRange { range_m: f64, dt_s: f64 },

    #[error("element index {index} out of range for {n_elements} elements")]
    ElementIndexOutOfRange { index: usize, n_elements: usize },

    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Errors raised by pattern-cube analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("target region does not intersect the grid")]
    EmptyRegion,

    #[error("pattern slice is identically zero; collection efficiency is undefined")]
    UndefinedBce,

    #[error("axis index {index} out of range (axis length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("pattern peak lies on the grid boundary; widen the range window")]
    PeakAtBoundary,

    #[error("no half-maximum crossing on the {side} side of the peak; widen the range window")]
    MissingHalfCrossing { side: &'static str },

    #[error("pattern slice at t = {time_s} s is flat; peak position is undefined there")]
    FlatSlice { time_s: f64 },

    #[error("peak tracking needs at least two time samples")]
    TooFewTimeSamples,

    #[error("pattern cubes have different grids and cannot be compared")]
    GridMismatch,

    #[error(transparent)]
    Field(#[from] FieldError),

    #[error(transparent)]
    Invalid(#[from] ValidationError),
}
