//! Scenario config schema (JSON), defaults, and expansion into library types.
//!
//! Shorthand array constructors (`fda`, `phased`) expand into explicit
//! per-element excitations before validation, and the expanded form is what
//! the run manifest records.

use std::path::Path;

use serde::{Deserialize, Serialize};

use beamsim::{
    make_linear_fda, make_steered_phased_array, ArrayConfig, DelayModel, ElementExcitation,
    EnvelopeSpec, PatternGrid, SPEED_OF_LIGHT,
};

use crate::errors::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_N_ELEMENTS: usize = 19;
pub const DEFAULT_CARRIER_HZ: f64 = 1e10;
pub const DEFAULT_DELTA_F_HZ: f64 = 1e4;

/// Half-wavelength element spacing for a carrier.
pub fn half_wavelength(carrier_hz: f64) -> f64 {
    SPEED_OF_LIGHT / (2.0 * carrier_hz)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub array: Option<ArraySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fig1: Option<Fig1Spec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariance: Option<InvarianceSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub track: Option<TrackSpec>,
}

impl ScenarioConfig {
    /// Minimal empty config; commands fill in their own defaults.
    pub fn empty() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            array: None,
            grid: None,
            model: None,
            seed: None,
            metrics: None,
            fig1: None,
            invariance: None,
            track: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: ScenarioConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        Ok(config)
    }

    pub fn require_array(&self) -> Result<&ArraySpec, CliError> {
        self.array
            .as_ref()
            .ok_or_else(|| CliError::Config("an 'array' section is required".into()))
    }

    pub fn require_grid(&self) -> Result<&GridSpec, CliError> {
        self.grid
            .as_ref()
            .ok_or_else(|| CliError::Config("a 'grid' section is required".into()))
    }
}

/// Delay model selector; shared between config files and `--model`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelSpec {
    Farfield,
    Exact,
}

impl ModelSpec {
    pub fn to_model(self) -> DelayModel {
        match self {
            ModelSpec::Farfield => DelayModel::FarField,
            ModelSpec::Exact => DelayModel::ExactSpherical,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelSpec::Farfield => "farfield",
            ModelSpec::Exact => "exact",
        }
    }
}

// ── Envelopes ────────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeJson {
    Cw,
    Gaussian(GaussianJson),
    Rect(RectJson),
    PeriodicSwitch(SwitchJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianJson {
    pub fdhm_s: f64,
    #[serde(default)]
    pub center_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectJson {
    pub duration_s: f64,
    #[serde(default)]
    pub start_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchJson {
    pub period_s: f64,
    pub duty: f64,
    #[serde(default)]
    pub offset_s: f64,
}

impl EnvelopeJson {
    pub fn to_spec(&self) -> EnvelopeSpec {
        match self {
            EnvelopeJson::Cw => EnvelopeSpec::Cw,
            EnvelopeJson::Gaussian(g) => EnvelopeSpec::Gaussian {
                fdhm: g.fdhm_s,
                center: g.center_s,
            },
            EnvelopeJson::Rect(r) => EnvelopeSpec::Rect {
                duration: r.duration_s,
                start: r.start_s,
            },
            EnvelopeJson::PeriodicSwitch(s) => EnvelopeSpec::PeriodicSwitch {
                period: s.period_s,
                duty: s.duty,
                offset: s.offset_s,
            },
        }
    }

    pub fn from_spec(spec: &EnvelopeSpec) -> Self {
        match *spec {
            EnvelopeSpec::Cw => EnvelopeJson::Cw,
            EnvelopeSpec::Gaussian { fdhm, center } => EnvelopeJson::Gaussian(GaussianJson {
                fdhm_s: fdhm,
                center_s: center,
            }),
            EnvelopeSpec::Rect { duration, start } => EnvelopeJson::Rect(RectJson {
                duration_s: duration,
                start_s: start,
            }),
            EnvelopeSpec::PeriodicSwitch {
                period,
                duty,
                offset,
            } => EnvelopeJson::PeriodicSwitch(SwitchJson {
                period_s: period,
                duty,
                offset_s: offset,
            }),
        }
    }
}

// ── Arrays ───────────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArraySpec {
    /// Linear-offset frequency diverse array: element n at carrier + n*delta_f.
    Fda(FdaSpec),
    /// Phase-steered array at a single carrier.
    Phased(PhasedSpec),
    /// Fully explicit per-element excitations.
    Explicit(ExplicitSpec),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdaSpec {
    pub n_elements: Option<usize>,
    pub spacing_m: Option<f64>,
    pub carrier_hz: Option<f64>,
    pub delta_f_hz: Option<f64>,
    pub envelope: Option<EnvelopeJson>,
    pub couple_offset_aperture: Option<bool>,
    pub spreading_loss: Option<bool>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhasedSpec {
    pub n_elements: Option<usize>,
    pub spacing_m: Option<f64>,
    pub carrier_hz: Option<f64>,
    pub steer_angle_deg: Option<f64>,
    pub envelope: Option<EnvelopeJson>,
    pub couple_offset_aperture: Option<bool>,
    pub spreading_loss: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub n_elements: usize,
    pub spacing_m: f64,
    pub carrier_hz: f64,
    /// Shared default envelope for elements that do not name their own.
    pub envelope: Option<EnvelopeJson>,
    pub elements: Vec<ElementJson>,
    pub couple_offset_aperture: Option<bool>,
    pub spreading_loss: Option<bool>,
}

fn default_amplitude() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default)]
    pub phase_rad: f64,
    #[serde(default)]
    pub freq_offset_hz: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope: Option<EnvelopeJson>,
}

impl ArraySpec {
    /// Expands shorthand into a validated [`ArrayConfig`] plus the explicit
    /// spec form recorded in manifests.
    pub fn expand(&self) -> Result<(ArrayConfig, ArraySpec), CliError> {
        let config = match self {
            ArraySpec::Fda(s) => {
                let carrier = s.carrier_hz.unwrap_or(DEFAULT_CARRIER_HZ);
                let mut config = make_linear_fda(
                    s.n_elements.unwrap_or(DEFAULT_N_ELEMENTS),
                    s.spacing_m.unwrap_or_else(|| half_wavelength(carrier)),
                    carrier,
                    s.delta_f_hz.unwrap_or(DEFAULT_DELTA_F_HZ),
                    s.envelope
                        .as_ref()
                        .map_or(EnvelopeSpec::Cw, |e| e.to_spec()),
                )?;
                config.couple_offset_aperture = s.couple_offset_aperture.unwrap_or(true);
                config.spreading_loss = s.spreading_loss.unwrap_or(false);
                config
            }
            ArraySpec::Phased(s) => {
                let carrier = s.carrier_hz.unwrap_or(DEFAULT_CARRIER_HZ);
                let mut config = make_steered_phased_array(
                    s.n_elements.unwrap_or(DEFAULT_N_ELEMENTS),
                    s.spacing_m.unwrap_or_else(|| half_wavelength(carrier)),
                    carrier,
                    s.steer_angle_deg.unwrap_or(0.0).to_radians(),
                    s.envelope
                        .as_ref()
                        .map_or(EnvelopeSpec::Cw, |e| e.to_spec()),
                )?;
                config.couple_offset_aperture = s.couple_offset_aperture.unwrap_or(true);
                config.spreading_loss = s.spreading_loss.unwrap_or(false);
                config
            }
            ArraySpec::Explicit(s) => {
                let shared = s
                    .envelope
                    .as_ref()
                    .map_or(EnvelopeSpec::Cw, |e| e.to_spec());
                let elements = s
                    .elements
                    .iter()
                    .map(|e| ElementExcitation {
                        amplitude: e.amplitude,
                        phase: e.phase_rad,
                        freq_offset: e.freq_offset_hz,
                        envelope: e.envelope.as_ref().map_or(shared, |env| env.to_spec()),
                    })
                    .collect();
                ArrayConfig {
                    n_elements: s.n_elements,
                    spacing: s.spacing_m,
                    carrier: s.carrier_hz,
                    elements,
                    couple_offset_aperture: s.couple_offset_aperture.unwrap_or(true),
                    spreading_loss: s.spreading_loss.unwrap_or(false),
                }
                .validated()?
            }
        };
        let explicit = explicit_spec(&config);
        Ok((config, explicit))
    }

    /// Steering angle of a phased shorthand, radians; 0 otherwise. Used to aim
    /// the fixed-point probe at the nominal focus direction.
    pub fn steer_angle(&self) -> f64 {
        match self {
            ArraySpec::Phased(s) => s.steer_angle_deg.unwrap_or(0.0).to_radians(),
            _ => 0.0,
        }
    }
}

/// The fully expanded spec form of a validated config.
pub fn explicit_spec(config: &ArrayConfig) -> ArraySpec {
    ArraySpec::Explicit(ExplicitSpec {
        n_elements: config.n_elements,
        spacing_m: config.spacing,
        carrier_hz: config.carrier,
        envelope: None,
        elements: config
            .elements
            .iter()
            .map(|e| ElementJson {
                amplitude: e.amplitude,
                phase_rad: e.phase,
                freq_offset_hz: e.freq_offset,
                envelope: Some(EnvelopeJson::from_spec(&e.envelope)),
            })
            .collect(),
        couple_offset_aperture: Some(config.couple_offset_aperture),
        spreading_loss: Some(config.spreading_loss),
    })
}

// ── Grids ────────────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub range_m: AxisSpec,
    pub angle_deg: AxisSpec,
    pub time_s: AxisSpec,
}

/// One grid axis: either explicit `values` or a `min`/`max`/`step` span
/// (`step` may be omitted when `min == max`).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl AxisSpec {
    pub fn span(min: f64, max: f64, step: f64) -> Self {
        Self {
            min: Some(min),
            max: Some(max),
            step: Some(step),
            values: None,
        }
    }

    pub fn single(value: f64) -> Self {
        Self {
            min: Some(value),
            max: Some(value),
            step: None,
            values: None,
        }
    }

    pub fn values(values: Vec<f64>) -> Self {
        Self {
            min: None,
            max: None,
            step: None,
            values: Some(values),
        }
    }

    pub fn expand(&self, name: &str) -> Result<Vec<f64>, CliError> {
        if let Some(values) = &self.values {
            if self.min.is_some() || self.max.is_some() || self.step.is_some() {
                return Err(CliError::Config(format!(
                    "{name}: give either 'values' or 'min'/'max'/'step', not both"
                )));
            }
            return Ok(values.clone());
        }
        let min = self
            .min
            .ok_or_else(|| CliError::Config(format!("{name}: 'min' is required")))?;
        let max = self
            .max
            .ok_or_else(|| CliError::Config(format!("{name}: 'max' is required")))?;
        if max < min {
            return Err(CliError::Config(format!("{name}: max < min")));
        }
        if min == max {
            return Ok(vec![min]);
        }
        let step = self.step.ok_or_else(|| {
            CliError::Config(format!("{name}: 'step' is required when min < max"))
        })?;
        if !(step.is_finite() && step > 0.0) {
            return Err(CliError::Config(format!("{name}: step must be > 0")));
        }
        let n = ((max - min) / step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| min + step * i as f64).collect())
    }
}

impl GridSpec {
    pub fn expand(&self) -> Result<PatternGrid, CliError> {
        let range = self.range_m.expand("grid.range_m")?;
        let angle_deg = self.angle_deg.expand("grid.angle_deg")?;
        let time = self.time_s.expand("grid.time_s")?;
        let angle = angle_deg.iter().map(|a| a.to_radians()).collect();
        Ok(PatternGrid::new(range, angle, time)?)
    }
}

// ── Metrics requests ─────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bce_targets: Option<Vec<RegionJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fwhm_cuts: Option<Vec<CutJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bce_polar_jacobian: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionJson {
    pub range_m: [f64; 2],
    pub angle_deg: [f64; 2],
    #[serde(default)]
    pub time_index: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutJson {
    #[serde(default)]
    pub angle_index: usize,
    #[serde(default)]
    pub time_index: usize,
}

// ── Canned-experiment sections ───────────────────────────────────────────────

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig1Spec {
    pub n_elements: Option<usize>,
    pub carrier_hz: Option<f64>,
    pub spacing_m: Option<f64>,
    pub delta_f_hz: Option<f64>,
    pub fdhm_s: Option<f64>,
    pub rect_duration_s: Option<f64>,
    pub window_center_m: Option<f64>,
    pub window_halfwidth_m: Option<f64>,
    pub range_step_m: Option<f64>,
    pub bce_polar_jacobian: Option<bool>,
}

/// Fully resolved comparison parameters.
#[derive(Debug, Clone, Serialize)]
pub struct Fig1Resolved {
    pub n_elements: usize,
    pub carrier_hz: f64,
    pub spacing_m: f64,
    pub delta_f_hz: f64,
    pub fdhm_s: f64,
    pub rect_duration_s: f64,
    pub window_center_m: f64,
    pub window_halfwidth_m: f64,
    pub range_step_m: f64,
    pub bce_polar_jacobian: bool,
    /// Instant of every cut: when the pulse peak reaches the window center.
    pub instant_s: f64,
}

impl Fig1Spec {
    pub fn resolve(&self) -> Result<Fig1Resolved, CliError> {
        let carrier_hz = self.carrier_hz.unwrap_or(DEFAULT_CARRIER_HZ);
        let fdhm_s = self.fdhm_s.unwrap_or(16.7e-6);
        if !(fdhm_s.is_finite() && fdhm_s > 0.0) {
            return Err(CliError::Config("fig1.fdhm_s must be > 0".into()));
        }
        let nominal_width = SPEED_OF_LIGHT * fdhm_s;
        let window_halfwidth_m = self.window_halfwidth_m.unwrap_or(1.5 * nominal_width);
        // Keep the window away from r = 0 even for very long pulses.
        let window_center_m = self
            .window_center_m
            .unwrap_or_else(|| (1.1 * window_halfwidth_m).max(10_000.0));
        if window_center_m - window_halfwidth_m <= 0.0 {
            return Err(CliError::Config(
                "fig1 window reaches non-positive ranges; increase window_center_m".into(),
            ));
        }
        let resolved = Fig1Resolved {
            n_elements: self.n_elements.unwrap_or(DEFAULT_N_ELEMENTS),
            carrier_hz,
            spacing_m: self
                .spacing_m
                .unwrap_or_else(|| half_wavelength(carrier_hz)),
            delta_f_hz: self.delta_f_hz.unwrap_or(DEFAULT_DELTA_F_HZ),
            fdhm_s,
            rect_duration_s: self.rect_duration_s.unwrap_or(fdhm_s),
            window_center_m,
            window_halfwidth_m,
            range_step_m: self.range_step_m.unwrap_or(nominal_width / 1200.0),
            bce_polar_jacobian: self.bce_polar_jacobian.unwrap_or(false),
            instant_s: window_center_m / SPEED_OF_LIGHT,
        };
        Ok(resolved)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceSpec {
    pub samples: Option<usize>,
    pub dt_s: Option<Vec<f64>>,
    pub range_m: Option<[f64; 2]>,
    pub angle_deg: Option<[f64; 2]>,
    /// Observation times are drawn as `r/c + u` with `u` uniform in this
    /// window, so the wavefront neighbourhood is always probed.
    pub time_offset_s: Option<[f64; 2]>,
    pub probe_samples: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceResolved {
    pub samples: usize,
    pub dt_s: Vec<f64>,
    pub range_m: [f64; 2],
    pub angle_deg: [f64; 2],
    pub time_offset_s: [f64; 2],
    pub probe_samples: usize,
}

impl InvarianceSpec {
    pub fn resolve(&self) -> InvarianceResolved {
        InvarianceResolved {
            samples: self.samples.unwrap_or(200),
            // Exactly representable shifts: c*dt and r + c*dt then carry no
            // round-off into the shift check.
            dt_s: self
                .dt_s
                .clone()
                .unwrap_or_else(|| vec![2f64.powi(-23), 2f64.powi(-20), 2f64.powi(-17)]),
            range_m: self.range_m.unwrap_or([2_000.0, 8_000.0]),
            angle_deg: self.angle_deg.unwrap_or([-60.0, 60.0]),
            time_offset_s: self.time_offset_s.unwrap_or([0.0, 5e-5]),
            probe_samples: self.probe_samples.unwrap_or(512),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackSpec {
    /// When present, rerun the tracker once per envelope duration and report
    /// the angle drift of each run.
    pub duration_sweep_s: Option<Vec<f64>>,
    /// Time samples per sweep run (all inside the pulse dwell).
    pub sweep_time_samples: Option<usize>,
}
