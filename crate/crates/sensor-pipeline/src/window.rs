use crate::error::{PipelineError, Result};
use crate::types::{Channel, SensorSample, SensorWindow};

/// Cuts an ordered single-channel value series into overlapping windows.
/// The trailing partial window is dropped; fewer samples than `window_len`
/// yields an empty list.
pub fn make_windows_from_values(
    channel: Channel,
    values: &[f64],
    sample_period_ms: f64,
    window_len: usize,
    stride: usize,
) -> Result<Vec<SensorWindow>> {
    if window_len < 2 {
        return Err(PipelineError::InvalidConfig(format!(
            "window length must be at least 2, got {window_len}"
        )));
    }
    if stride < 1 {
        return Err(PipelineError::InvalidConfig("stride must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut start = 0;
    while start + window_len <= values.len() {
        out.push(SensorWindow::new(
            channel,
            values[start..start + window_len].to_vec(),
            sample_period_ms,
        )?);
        start += stride;
    }
    Ok(out)
}

/// Windows a single-channel sample list. All samples must share one channel;
/// the sample period is taken from the first two timestamps.
pub fn make_windows(
    samples: &[SensorSample],
    window_len: usize,
    stride: usize,
) -> Result<Vec<SensorWindow>> {
    if samples.len() < 2 {
        return Ok(Vec::new());
    }
    let channel = samples[0].channel;
    if samples.iter().any(|s| s.channel != channel) {
        return Err(PipelineError::InvalidConfig(
            "make_windows expects samples from a single channel".into(),
        ));
    }
    let period = samples[1].timestamp_ms - samples[0].timestamp_ms;
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    make_windows_from_values(channel, &values, period, window_len, stride)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64).collect()
    }

    #[test]
    fn exact_tiling() {
        let w = make_windows_from_values(Channel::AccelX, &series(10), 20.0, 5, 5).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].values(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(w[1].values(), &[5.0, 6.0, 7.0, 8.0, 9.0]);
    }

    #[test]
    fn overlapping_windows_drop_trailing_partial() {
        let w = make_windows_from_values(Channel::AccelX, &series(10), 20.0, 4, 3).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w[0].values(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(w[1].values(), &[3.0, 4.0, 5.0, 6.0]);
        assert_eq!(w[2].values(), &[6.0, 7.0, 8.0, 9.0]);
    }

    #[test]
    fn too_few_samples_yield_empty_list() {
        let w = make_windows_from_values(Channel::AccelX, &series(3), 20.0, 5, 1).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn mixed_channels_are_rejected() {
        let samples = vec![
            SensorSample {
                timestamp_ms: 0.0,
                channel: Channel::AccelX,
                value: 1.0,
            },
            SensorSample {
                timestamp_ms: 20.0,
                channel: Channel::GyroX,
                value: 2.0,
            },
        ];
        assert!(make_windows(&samples, 2, 1).is_err());
    }
}
