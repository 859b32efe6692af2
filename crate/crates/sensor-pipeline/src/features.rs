use crate::error::{PipelineError, Result};
use crate::types::{FeatureVector, SensorWindow};

/// Linear-interpolation quantile (the "type 7" convention) on sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < n {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

/// Computes the eleven window statistics with population (1/N) moments.
///
/// Entropy uses an equal-width histogram over `[min, max]` with `bin_count`
/// bins, probabilities `count / N`, and the convention `0 ln 0 = 0`. A window
/// with zero dispersion gets skewness and kurtosis 0 and the degenerate flag.
pub fn extract_features(window: &SensorWindow, bin_count: usize) -> Result<FeatureVector> {
    let values = window.values();
    let n = values.len();
    if n < 2 {
        return Err(PipelineError::WindowTooShort { needed: 2, got: n });
    }
    if bin_count == 0 {
        return Err(PipelineError::InvalidConfig("bin count must be positive".into()));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let range = max - min;
    let rms = (values.iter().map(|v| v * v).sum::<f64>() / nf).sqrt();

    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / nf;
    let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / nf;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / nf;
    let std_dev = m2.sqrt();
    let degenerate = std_dev == 0.0;
    let (skewness, kurtosis) = if degenerate {
        (0.0, 0.0)
    } else {
        (m3 / std_dev.powi(3), m4 / std_dev.powi(4))
    };

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);

    let entropy = if range == 0.0 {
        0.0
    } else {
        let mut counts = vec![0usize; bin_count];
        for &v in values {
            let idx = (((v - min) / range) * bin_count as f64) as usize;
            counts[idx.min(bin_count - 1)] += 1;
        }
        -counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / nf;
                p * p.ln()
            })
            .sum::<f64>()
    };

    Ok(FeatureVector {
        mean,
        std_dev,
        max,
        min,
        range,
        rms,
        peak_to_peak: range,
        iqr,
        skewness,
        kurtosis,
        entropy,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Channel;
    use approx::assert_relative_eq;

    fn window(values: Vec<f64>) -> SensorWindow {
        SensorWindow::new(Channel::AccelX, values, 20.0).unwrap()
    }

    #[test]
    fn hand_computed_three_sample_window() {
        let f = extract_features(&window(vec![1.0, 2.0, 3.0]), 16).unwrap();
        assert_relative_eq!(f.mean, 2.0, epsilon = 1e-12);
        assert_relative_eq!(f.std_dev, (2.0_f64 / 3.0).sqrt(), epsilon = 1e-12);
        assert_eq!(f.max, 3.0);
        assert_eq!(f.min, 1.0);
        assert_eq!(f.range, 2.0);
        assert_relative_eq!(f.rms, (14.0_f64 / 3.0).sqrt(), epsilon = 1e-12);
        assert_eq!(f.peak_to_peak, 2.0);
        assert_relative_eq!(f.iqr, 1.0, epsilon = 1e-12);
        assert_relative_eq!(f.skewness, 0.0, epsilon = 1e-12);
        assert_relative_eq!(f.kurtosis, 1.5, epsilon = 1e-12);
        // 1 -> bin 0, 2 -> bin 8, 3 -> bin 15: three equal cells
        assert_relative_eq!(f.entropy, 3.0_f64.ln(), epsilon = 1e-12);
        assert!(!f.degenerate);
    }

    #[test]
    fn constant_window_is_degenerate() {
        let f = extract_features(&window(vec![5.0; 4]), 16).unwrap();
        assert_eq!(f.range, 0.0);
        assert_eq!(f.peak_to_peak, 0.0);
        assert_eq!(f.entropy, 0.0);
        assert_eq!(f.skewness, 0.0);
        assert_eq!(f.kurtosis, 0.0);
        assert!(f.degenerate);
    }

    #[test]
    fn uniform_bins_reach_maximum_entropy() {
        // 16 distinct values, 100 copies each: every bin holds exactly 100.
        let mut values = Vec::with_capacity(1600);
        for v in 0..16 {
            values.extend(std::iter::repeat(v as f64).take(100));
        }
        let f = extract_features(&window(values), 16).unwrap();
        assert_relative_eq!(f.entropy, 16.0_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn single_sample_window_is_rejected_by_extraction() {
        let w = SensorWindow::new(Channel::AccelX, vec![1.0], 20.0).unwrap();
        assert!(matches!(
            extract_features(&w, 16),
            Err(PipelineError::WindowTooShort { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn gaussian_kurtosis_is_near_three() {
        use rand::SeedableRng;
        use rand_distr::Distribution;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let normal = rand_distr::Normal::new(0.0, 1.0).unwrap();
        let values: Vec<f64> = (0..200_000).map(|_| normal.sample(&mut rng)).collect();
        let f = extract_features(&window(values), 16).unwrap();
        assert!((f.kurtosis - 3.0).abs() < 0.1, "kurtosis {}", f.kurtosis);
    }
}
