use serde::{Deserialize, Serialize};

use crate::error::{PipelineError, Result};

/// The six monitored action categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActionClass {
    A01,
    A02,
    A03,
    A04,
    A05,
    A06,
}

impl ActionClass {
    pub const ALL: [ActionClass; 6] = [
        ActionClass::A01,
        ActionClass::A02,
        ActionClass::A03,
        ActionClass::A04,
        ActionClass::A05,
        ActionClass::A06,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            ActionClass::A01 => "A01",
            ActionClass::A02 => "A02",
            ActionClass::A03 => "A03",
            ActionClass::A04 => "A04",
            ActionClass::A05 => "A05",
            ActionClass::A06 => "A06",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.label() == s)
    }
}

impl std::fmt::Display for ActionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Sensor channels captured per athlete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    HeartRate,
    AccelX,
    AccelY,
    AccelZ,
    GyroX,
    GyroY,
    GyroZ,
}

impl Channel {
    pub const ALL: [Channel; 7] = [
        Channel::HeartRate,
        Channel::AccelX,
        Channel::AccelY,
        Channel::AccelZ,
        Channel::GyroX,
        Channel::GyroY,
        Channel::GyroZ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::HeartRate => "heart_rate",
            Channel::AccelX => "accel_x",
            Channel::AccelY => "accel_y",
            Channel::AccelZ => "accel_z",
            Channel::GyroX => "gyro_x",
            Channel::GyroY => "gyro_y",
            Channel::GyroZ => "gyro_z",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.name() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One timestamped reading of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSample {
    /// Milliseconds since stream start.
    pub timestamp_ms: f64,
    pub channel: Channel,
    pub value: f64,
}

/// Fixed-length slice of one channel, input to feature extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorWindow {
    channel: Channel,
    values: Vec<f64>,
    sample_period_ms: f64,
}

impl SensorWindow {
    pub fn new(channel: Channel, values: Vec<f64>, sample_period_ms: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(PipelineError::WindowTooShort { needed: 1, got: 0 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(PipelineError::NonFinite { index });
        }
        if !(sample_period_ms.is_finite() && sample_period_ms > 0.0) {
            return Err(PipelineError::InvalidConfig(format!(
                "sample period must be positive, got {sample_period_ms}"
            )));
        }
        Ok(Self {
            channel,
            values,
            sample_period_ms,
        })
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sample_period_ms(&self) -> f64 {
        self.sample_period_ms
    }
}

/// The eleven per-window statistics, one `f64` each.
///
/// `degenerate` flags zero-dispersion windows where skewness and kurtosis are
/// reported as 0 instead of dividing by a zero standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub mean: f64,
    pub std_dev: f64,
    pub max: f64,
    pub min: f64,
    pub range: f64,
    pub rms: f64,
    pub peak_to_peak: f64,
    pub iqr: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub entropy: f64,
    pub degenerate: bool,
}

impl FeatureVector {
    pub const NAMES: [&'static str; 11] = [
        "mean",
        "std_dev",
        "max",
        "min",
        "range",
        "rms",
        "peak_to_peak",
        "iqr",
        "skewness",
        "kurtosis",
        "entropy",
    ];

    /// Feature values in [`FeatureVector::NAMES`] order.
    pub fn as_array(&self) -> [f64; 11] {
        [
            self.mean,
            self.std_dev,
            self.max,
            self.min,
            self.range,
            self.rms,
            self.peak_to_peak,
            self.iqr,
            self.skewness,
            self.kurtosis,
            self.entropy,
        ]
    }
}

/// Scalar random-walk Kalman filter state for one channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KalmanState {
    /// Current estimate in channel units.
    pub estimate: f64,
    /// Error variance P, kept >= 0 by the update.
    pub variance: f64,
    /// Process noise q added at each predict step.
    pub process_noise: f64,
    /// Measurement noise r; must be positive.
    pub measurement_noise: f64,
}

impl KalmanState {
    pub fn new(estimate: f64, variance: f64, process_noise: f64, measurement_noise: f64) -> Result<Self> {
        if !(measurement_noise.is_finite() && measurement_noise > 0.0) {
            return Err(PipelineError::InvalidConfig(format!(
                "measurement noise must be positive, got {measurement_noise}"
            )));
        }
        if !(variance.is_finite() && variance >= 0.0) || !(process_noise.is_finite() && process_noise >= 0.0) {
            return Err(PipelineError::InvalidConfig(
                "variance and process noise must be non-negative".into(),
            ));
        }
        if !estimate.is_finite() {
            return Err(PipelineError::InvalidConfig("estimate must be finite".into()));
        }
        Ok(Self {
            estimate,
            variance,
            process_noise,
            measurement_noise,
        })
    }
}

/// Configuration for one synthetic stream (all channels of one athlete).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StreamConfig {
    /// Per-channel sampling rate in Hz.
    pub sample_rate_hz: f64,
    /// Stream duration in seconds.
    pub duration_s: f64,
    pub class: ActionClass,
    /// Scales the per-channel Gaussian noise; 0 yields exact waveforms.
    pub noise_level: f64,
    pub seed: u64,
}

impl Default for StreamConfig {
    fn default() -> Self {
        Self {
            sample_rate_hz: 50.0,
            duration_s: 300.0,
            class: ActionClass::A01,
            noise_level: 0.5,
            seed: 0,
        }
    }
}

impl StreamConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(PipelineError::InvalidConfig(format!(
                "sample rate must be positive, got {}",
                self.sample_rate_hz
            )));
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return Err(PipelineError::InvalidConfig(format!(
                "duration must be positive, got {}",
                self.duration_s
            )));
        }
        if !(self.noise_level.is_finite() && self.noise_level >= 0.0) {
            return Err(PipelineError::InvalidConfig(format!(
                "noise level must be non-negative, got {}",
                self.noise_level
            )));
        }
        Ok(())
    }

    pub fn samples_per_channel(&self) -> usize {
        (self.sample_rate_hz * self.duration_s).round() as usize
    }
}
