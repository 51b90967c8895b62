//! Small statistical utilities: rank correlation, uniformity checks and
//! empirical quantiles. Used for data exploration and heavily by the test
//! oracles.

/// Empirical Kendall's tau via inversion counting, O(n log n).
///
/// Ties are assumed absent (continuous data); pairs are counted as
/// concordant minus discordant over n(n-1)/2.
pub fn empirical_kendall_tau(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let mut y_sorted: Vec<f64> = order.iter().map(|&i| ys[i]).collect();
    let discordant = count_inversions(&mut y_sorted);
    let total = n as f64 * (n as f64 - 1.0) / 2.0;
    (total - 2.0 * discordant as f64) / total
}

fn count_inversions(values: &mut [f64]) -> u64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mut buf = values.to_vec();
    merge_count(values, &mut buf)
}

fn merge_count(values: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = values.split_at_mut(mid);
    let (buf_l, buf_r) = buf.split_at_mut(mid);
    let mut inv = merge_count(left, buf_l) + merge_count(right, buf_r);
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if left[i] <= right[j] {
            buf[k] = left[i];
            i += 1;
        } else {
            buf[k] = right[j];
            inv += (left.len() - i) as u64;
            j += 1;
        }
        k += 1;
    }
    while i < left.len() {
        buf[k] = left[i];
        i += 1;
        k += 1;
    }
    while j < right.len() {
        buf[k] = right[j];
        j += 1;
        k += 1;
    }
    values.copy_from_slice(&buf[..n]);
    inv
}

/// Two-sided Kolmogorov-Smirnov statistic against Uniform(0, 1).
/// Sorts the input in place.
pub fn ks_uniform_statistic(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len() as f64;
    let mut d = 0.0f64;
    for (i, &v) in values.iter().enumerate() {
        let hi = (i as f64 + 1.0) / n - v;
        let lo = v - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    d
}

/// Empirical quantile with linear interpolation between order statistics.
/// `values` must be sorted ascending.
pub fn quantile_sorted(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty());
    assert!((0.0..=1.0).contains(&q));
    let n = values.len();
    if n == 1 {
        return values[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    values[lo] + frac * (values[hi] - values[lo])
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance (n - 1 denominator).
pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n as f64 - 1.0)
}

/// Pearson correlation of two equally long samples.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Numerically stable log(sum(exp(x))) over a slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kendall_tau_on_small_samples() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [0.1, 0.2, 0.3, 0.4];
        assert!((empirical_kendall_tau(&xs, &ys) - 1.0).abs() < 1e-15);
        let ys_rev = [0.4, 0.3, 0.2, 0.1];
        assert!((empirical_kendall_tau(&xs, &ys_rev) + 1.0).abs() < 1e-15);
        // One discordant pair out of six.
        let ys_mix = [0.1, 0.3, 0.2, 0.4];
        assert!((empirical_kendall_tau(&xs, &ys_mix) - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn ks_statistic_detects_shift() {
        let mut uniform: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_uniform_statistic(&mut uniform) < 1e-3);
        let mut shifted: Vec<f64> = (0..1000).map(|i| (i as f64 / 1000.0).powi(2)).collect();
        assert!(ks_uniform_statistic(&mut shifted) > 0.2);
    }

    #[test]
    fn quantiles_interpolate() {
        let values = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&values, 0.0), 1.0);
        assert_eq!(quantile_sorted(&values, 1.0), 5.0);
        assert_eq!(quantile_sorted(&values, 0.5), 3.0);
        assert!((quantile_sorted(&values, 0.25) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_matches_direct() {
        let xs = [-1.0, 0.0, 2.0];
        let direct: f64 = xs.iter().map(|&x| f64::exp(x)).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - direct).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
    }
}
