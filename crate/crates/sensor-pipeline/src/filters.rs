use crate::error::{PipelineError, Result};
use crate::types::KalmanState;

/// Scalar random-walk Kalman filter over an ordered value sequence.
///
/// Per sample: predict `P <- P + q`, gain `K = P / (P + r)`, update
/// `x <- x + K (z - x)`, `P <- (1 - K) P`. Returns the estimate sequence and
/// leaves the final state in `state`.
pub fn kalman_filter(values: &[f64], state: &mut KalmanState) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(values.len());
    for (index, &z) in values.iter().enumerate() {
        if !z.is_finite() {
            return Err(PipelineError::NonFinite { index });
        }
        let predicted = state.variance + state.process_noise;
        let gain = predicted / (predicted + state.measurement_noise);
        state.estimate += gain * (z - state.estimate);
        state.variance = (1.0 - gain) * predicted;
        out.push(state.estimate);
    }
    Ok(out)
}

/// First-order exponential smoothing: `y[0] = x[0]`,
/// `y[i] = alpha x[i] + (1 - alpha) y[i-1]`.
pub fn lowpass_filter(values: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
        return Err(PipelineError::InvalidConfig(format!(
            "low-pass alpha must be in (0, 1], got {alpha}"
        )));
    }
    let mut out = Vec::with_capacity(values.len());
    let mut prev: Option<f64> = None;
    for (index, &x) in values.iter().enumerate() {
        if !x.is_finite() {
            return Err(PipelineError::NonFinite { index });
        }
        let y = match prev {
            None => x,
            Some(p) => alpha * x + (1.0 - alpha) * p,
        };
        out.push(y);
        prev = Some(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn tiny_measurement_noise_tracks_input() {
        let input = vec![1.0, -3.0, 7.5, 0.25, 100.0];
        let mut state = KalmanState::new(0.0, 1.0, 0.01, 1e-12).unwrap();
        let out = kalman_filter(&input, &mut state).unwrap();
        for (o, i) in out.iter().zip(&input) {
            assert_relative_eq!(o, i, max_relative = 1e-9);
        }
    }

    #[test]
    fn constant_input_with_matching_estimate_is_a_fixed_point() {
        let input = vec![5.0; 20];
        let mut state = KalmanState::new(5.0, 2.0, 0.0, 1.0).unwrap();
        let out = kalman_filter(&input, &mut state).unwrap();
        assert!(out.iter().all(|&v| v == 5.0));
    }

    #[test]
    fn filtering_reduces_noise_mse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let raw: Vec<f64> = (0..1000).map(|_| 5.0 + normal.sample(&mut rng)).collect();
        let mut state = KalmanState::new(raw[0], 1.0, 0.01, 1.0).unwrap();
        let filtered = kalman_filter(&raw, &mut state).unwrap();
        let mse = |xs: &[f64]| xs.iter().map(|x| (x - 5.0).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(
            mse(&filtered) < 0.5 * mse(&raw),
            "filtered {} vs raw {}",
            mse(&filtered),
            mse(&raw)
        );
    }

    #[test]
    fn kalman_rejects_non_finite_with_index() {
        let input = vec![1.0, 2.0, f64::NAN];
        let mut state = KalmanState::new(0.0, 1.0, 0.1, 1.0).unwrap();
        let err = kalman_filter(&input, &mut state).unwrap_err();
        assert!(matches!(err, PipelineError::NonFinite { index: 2 }));
    }

    #[test]
    fn variance_stays_non_negative_and_gain_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let normal = Normal::new(0.0, 3.0).unwrap();
        let mut state = KalmanState::new(0.0, 0.5, 0.05, 0.8).unwrap();
        for index in 0..500 {
            let z: f64 = normal.sample(&mut rng);
            let predicted = state.variance + state.process_noise;
            let gain = predicted / (predicted + state.measurement_noise);
            assert!(gain > 0.0 && gain < 1.0, "step {index}: gain {gain}");
            kalman_filter(&[z], &mut state).unwrap();
            assert!(state.variance >= 0.0, "step {index}: P {}", state.variance);
        }
    }

    #[test]
    fn lowpass_alpha_one_is_identity() {
        let input = vec![3.0, -1.0, 4.5];
        assert_eq!(lowpass_filter(&input, 1.0).unwrap(), input);
    }

    #[test]
    fn lowpass_constant_is_fixed_point() {
        let input = vec![2.5; 10];
        assert_eq!(lowpass_filter(&input, 0.3).unwrap(), input);
    }

    #[test]
    fn lowpass_hand_case() {
        assert_eq!(lowpass_filter(&[0.0, 2.0], 0.5).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn lowpass_rejects_bad_alpha() {
        assert!(lowpass_filter(&[1.0], 0.0).is_err());
        assert!(lowpass_filter(&[1.0], 1.5).is_err());
    }
}
