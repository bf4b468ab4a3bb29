//! Sample statistics for Monte Carlo estimates.

/// Two-sided 99% standard normal quantile, `Phi^-1(0.995)`.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

/// Mean and normal-approximation 99% half-width of `xs`.
///
/// With fewer than two samples the half-width is reported as 0.
pub fn mean_and_half_width(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, Z_99 * (var / n as f64).sqrt())
}

/// Ratio of means `mean(num) / mean(den)` with a delta-method 99% half-width.
///
/// Returns `(num_mean, den_mean, ratio, half_width)`. A zero denominator mean
/// only arises when every trial has `W* = 0`, in which case the ratio is 1.
pub fn ratio_of_means(num: &[f64], den: &[f64]) -> (f64, f64, f64, f64) {
    assert_eq!(num.len(), den.len());
    let n = num.len();
    if n == 0 {
        return (0.0, 0.0, 1.0, 0.0);
    }
    let a = num.iter().sum::<f64>() / n as f64;
    let o = den.iter().sum::<f64>() / n as f64;
    if o <= 0.0 {
        return (a, o, 1.0, 0.0);
    }
    let r = a / o;
    if n < 2 {
        return (a, o, r, 0.0);
    }
    let var = num
        .iter()
        .zip(den)
        .map(|(x, y)| (x - r * y).powi(2))
        .sum::<f64>()
        / (n - 1) as f64;
    (a, o, r, Z_99 * (var / n as f64).sqrt() / o)
}
