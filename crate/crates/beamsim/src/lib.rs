//! Simulation and analysis of instantaneous space-time beampatterns of linear
//! antenna arrays.
//!
//! The crate models phased arrays, frequency diverse arrays (per-element
//! carrier offsets), and switched time-modulated arrays as superpositions of
//! retarded-time element drives, then measures the resulting range/angle/time
//! patterns: beam collection efficiency, half-maximum widths, sidelobe levels,
//! peak tracking, and a falsifier for claims of time-invariant range focusing.
//!
//! Organization:
//!
//! * [`signal`]: array configurations, element excitations, envelopes.
//! * [`field`]: delay models, instantaneous fields, pattern cubes.
//! * [`metrics`]: pattern analysis and the time-range shift checker.
//!
//! Cube evaluation is data-parallel via rayon when the default `parallel`
//! feature is enabled, with bit-identical output to the sequential fallback.

pub mod error;
pub mod field;
pub mod metrics;
pub mod signal;

pub use error::{FieldError, MetricsError, ValidationError, Violation};
pub use field::{
    closed_form_fda_magnitude, config_digest, element_range, evaluate_cube,
    evaluate_cube_sequential, instantaneous_field, shifted_point, DelayModel, FieldEvaluator,
    ObservationPoint, PatternCube, PatternGrid, SPEED_OF_LIGHT,
};
pub use metrics::{
    bce, bce_with_options, check_time_range_invariance, compare_patterns, fixed_point_time_swing,
    fwhm_range, sidelobe_level, track_peak, InvarianceReport, PatternDiff, PeakSample, PeakTrack,
    RegionSpec, TimeSwing, FAR_FIELD_SHIFT_TOLERANCE, RELATIVE_DEVIATION_FLOOR,
};
pub use signal::{
    envelope_value, make_linear_fda, make_steered_phased_array, ArrayConfig, ElementExcitation,
    EnvelopeSpec,
};
