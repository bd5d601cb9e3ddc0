//! Deterministic summation and moment estimates.
//!
//! Ensemble reductions must produce bit-identical results regardless of
//! worker count, so every sum runs over a slice in fixed order with
//! pairwise (cascade) summation. Pairwise summation also keeps the rounding
//! error at O(log n) depth instead of O(n).

/// Pairwise sum of a slice. Deterministic for a fixed element order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Arithmetic mean via pairwise summation. Empty input yields 0.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Mean and standard error of the mean (sample standard deviation over
/// sqrt(n)). A single sample has standard error 0.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n < 2 {
        return (mean(xs), 0.0);
    }
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (m, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_sequential_on_small_input() {
        let xs: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 5050.0);
    }

    #[test]
    fn mean_and_se_of_constant_sample_is_exact() {
        let xs = vec![2.5; 64];
        let (m, se) = mean_and_se(&xs);
        assert_eq!(m, 2.5);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn se_matches_hand_computation() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let (m, se) = mean_and_se(&xs);
        assert_eq!(m, 2.5);
        // sample variance 5/3, se = sqrt(5/3/4)
        assert!((se - (5.0 / 12.0f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_sample_has_zero_se() {
        assert_eq!(mean_and_se(&[7.0]), (7.0, 0.0));
    }
}
