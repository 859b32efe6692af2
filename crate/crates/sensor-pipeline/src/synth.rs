use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::types::{ActionClass, Channel, SensorSample, StreamConfig};

use std::f64::consts::PI;

/// Per-class waveform parameters. Each action class has a distinct motion
/// fundamental and amplitude so classes are separable by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassSignature {
    pub accel_amplitude: f64,
    pub accel_freq_hz: f64,
    pub gyro_amplitude: f64,
    pub gyro_freq_hz: f64,
    pub heart_rate_base_bpm: f64,
    pub heart_rate_amplitude_bpm: f64,
    pub heart_rate_freq_hz: f64,
}

impl ClassSignature {
    /// Default signatures, one per class: sprint-like classes run fast and
    /// high-impact, throw-like classes slow with strong rotation.
    pub fn for_class(class: ActionClass) -> Self {
        let (accel_amplitude, accel_freq_hz, gyro_amplitude, heart_rate_base_bpm, heart_rate_amplitude_bpm) =
            match class {
                ActionClass::A01 => (12.0, 3.2, 6.0, 165.0, 10.0),
                ActionClass::A02 => (9.0, 2.6, 5.0, 172.0, 8.0),
                ActionClass::A03 => (7.0, 1.4, 8.5, 140.0, 12.0),
                ActionClass::A04 => (8.0, 1.9, 7.0, 150.0, 10.0),
                ActionClass::A05 => (5.0, 0.9, 10.0, 135.0, 15.0),
                ActionClass::A06 => (4.0, 0.6, 12.0, 130.0, 14.0),
            };
        Self {
            accel_amplitude,
            accel_freq_hz,
            gyro_amplitude,
            gyro_freq_hz: accel_freq_hz,
            heart_rate_base_bpm,
            heart_rate_amplitude_bpm,
            heart_rate_freq_hz: 0.05,
        }
    }
}

/// Per-channel noise scale, multiplied by the config's noise level.
fn noise_scale(channel: Channel) -> f64 {
    match channel {
        Channel::HeartRate => 2.0,
        Channel::AccelX | Channel::AccelY | Channel::AccelZ => 1.0,
        Channel::GyroX | Channel::GyroY | Channel::GyroZ => 0.5,
    }
}

/// Noise-free waveform value for `channel` at time `t` seconds.
///
/// Motion channels are phase-shifted sinusoids of the class fundamental
/// (accel-x has zero phase, so with zero noise it is exactly
/// `A sin(2 pi f t)`); heart rate is a baseline plus a slow sinusoid.
pub fn clean_value(class: ActionClass, channel: Channel, t: f64) -> f64 {
    let sig = ClassSignature::for_class(class);
    let third = 2.0 * PI / 3.0;
    match channel {
        Channel::HeartRate => {
            sig.heart_rate_base_bpm
                + sig.heart_rate_amplitude_bpm * (2.0 * PI * sig.heart_rate_freq_hz * t).sin()
        }
        Channel::AccelX => sig.accel_amplitude * (2.0 * PI * sig.accel_freq_hz * t).sin(),
        Channel::AccelY => sig.accel_amplitude * (2.0 * PI * sig.accel_freq_hz * t + third).sin(),
        Channel::AccelZ => {
            sig.accel_amplitude * (2.0 * PI * sig.accel_freq_hz * t + 2.0 * third).sin()
        }
        Channel::GyroX => sig.gyro_amplitude * (2.0 * PI * sig.gyro_freq_hz * t).sin(),
        Channel::GyroY => sig.gyro_amplitude * (2.0 * PI * sig.gyro_freq_hz * t + third).sin(),
        Channel::GyroZ => sig.gyro_amplitude * (2.0 * PI * sig.gyro_freq_hz * t + 2.0 * third).sin(),
    }
}

/// Synthesizes all channels of one stream, channel-major.
///
/// Each channel draws from its own generator stream, so per-channel output is
/// independent of channel iteration order and fully determined by
/// `(seed, channel)`.
pub fn generate_stream(cfg: &StreamConfig) -> Result<Vec<SensorSample>> {
    cfg.validate()?;
    let n = cfg.samples_per_channel();
    let mut out = Vec::with_capacity(n * Channel::ALL.len());
    for channel in Channel::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(channel.index() as u64 + 1);
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        let scale = cfg.noise_level * noise_scale(channel);
        for k in 0..n {
            let t = k as f64 / cfg.sample_rate_hz;
            let noise: f64 = normal.sample(&mut rng);
            out.push(SensorSample {
                timestamp_ms: 1000.0 * k as f64 / cfg.sample_rate_hz,
                channel,
                value: clean_value(cfg.class, channel, t) + scale * noise,
            });
        }
    }
    Ok(out)
}

/// Extracts the ordered value series of one channel from a flat sample list.
pub fn channel_values(samples: &[SensorSample], channel: Channel) -> Vec<f64> {
    samples
        .iter()
        .filter(|s| s.channel == channel)
        .map(|s| s.value)
        .collect()
}
