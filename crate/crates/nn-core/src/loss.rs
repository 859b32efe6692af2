use crate::error::{NnError, Result};
use crate::tensor::Tensor;

/// Numerically stable softmax of a logit slice.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Cross-entropy loss of a logit vector against an integer class label.
///
/// Returns the loss and its gradient with respect to the logits,
/// `softmax(logits) - one_hot(label)`. Loss is computed as
/// `log(sum(exp(l - max))) - (l[label] - max)` so large logits do not
/// overflow.
pub fn softmax_cross_entropy(logits: &Tensor, label: usize) -> Result<(f64, Tensor)> {
    let n = logits.len();
    if label >= n {
        return Err(NnError::LabelOutOfRange { label, classes: n });
    }
    let l = logits.data();
    let max = l.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum_exp: f64 = l.iter().map(|&v| (v - max).exp()).sum();
    let loss = sum_exp.ln() - (l[label] - max);
    let mut grad: Vec<f64> = l.iter().map(|&v| (v - max).exp() / sum_exp).collect();
    grad[label] -= 1.0;
    Ok((loss, Tensor::new(logits.shape().to_vec(), grad)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_logits_give_log_k() {
        let logits = Tensor::vector(vec![0.7; 4]).unwrap();
        for label in 0..4 {
            let (loss, _) = softmax_cross_entropy(&logits, label).unwrap();
            assert_relative_eq!(loss, 4.0_f64.ln(), epsilon = 1e-12);
        }
    }

    #[test]
    fn huge_logit_does_not_overflow() {
        let logits = Tensor::vector(vec![1000.0, 0.0]).unwrap();
        let (loss, grad) = softmax_cross_entropy(&logits, 0).unwrap();
        assert!(loss.is_finite());
        assert!(loss < 1e-12);
        assert!(grad.data().iter().all(|g| g.is_finite()));
    }

    #[test]
    fn hand_computed_three_class_case() {
        // -ln(e^3 / (e^1 + e^2 + e^3)) = 0.40760596...
        let logits = Tensor::vector(vec![1.0, 2.0, 3.0]).unwrap();
        let (loss, _) = softmax_cross_entropy(&logits, 2).unwrap();
        assert_relative_eq!(loss, 0.407_605_964_445_193_2, epsilon = 1e-12);
    }

    #[test]
    fn gradient_is_softmax_minus_one_hot() {
        let logits = Tensor::vector(vec![0.2, -1.3, 0.5]).unwrap();
        let (_, grad) = softmax_cross_entropy(&logits, 1).unwrap();
        let p = softmax(logits.data());
        assert_relative_eq!(grad.data()[0], p[0], epsilon = 1e-12);
        assert_relative_eq!(grad.data()[1], p[1] - 1.0, epsilon = 1e-12);
        assert_relative_eq!(grad.data()[2], p[2], epsilon = 1e-12);
    }

    #[test]
    fn label_out_of_range_is_an_error() {
        let logits = Tensor::vector(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            softmax_cross_entropy(&logits, 2),
            Err(NnError::LabelOutOfRange { label: 2, classes: 2 })
        ));
    }
}
