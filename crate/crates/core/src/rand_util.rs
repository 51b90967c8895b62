//! Shared sampling helpers for simplex-valued and count-valued draws.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};

/// Floor applied to simplex components so that their logarithms stay finite.
const SIMPLEX_FLOOR: f64 = 1e-300;

/// Dirichlet draw by gamma normalization.
pub fn sample_dirichlet<R: Rng + ?Sized>(alphas: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    let mut raw = Vec::with_capacity(alphas.len());
    for &a in alphas {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dirichlet parameter {a} must be positive"
            )));
        }
        let g = Gamma::new(a, 1.0)
            .map_err(|e| Error::InvalidParameter(format!("gamma({a}, 1): {e}")))?;
        raw.push(g.sample(rng).max(SIMPLEX_FLOOR));
    }
    let sum: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|g| g / sum).collect())
}

/// Multinomial draw with `trials` total count.
pub fn sample_multinomial<R: Rng + ?Sized>(
    trials: u32,
    probs: &[f64],
    rng: &mut R,
) -> Vec<u32> {
    let mut counts = vec![0u32; probs.len()];
    for _ in 0..trials {
        counts[sample_categorical(probs, rng)] += 1;
    }
    counts
}

/// Single categorical draw from (possibly unnormalized) nonnegative weights.
pub fn sample_categorical<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let pick: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (idx, &w) in weights.iter().enumerate() {
        acc += w;
        if pick < acc {
            return idx;
        }
    }
    weights.len() - 1
}

/// Categorical draw from log weights, normalized by max subtraction.
pub fn sample_categorical_log<R: Rng + ?Sized>(log_weights: &[f64], rng: &mut R) -> usize {
    let max = log_weights
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_weights.iter().map(|&lw| (lw - max).exp()).collect();
    sample_categorical(&weights, rng)
}

/// Gamma draw parameterized by shape and rate.
pub fn sample_gamma_rate<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> Result<f64> {
    let g = Gamma::new(shape, 1.0 / rate)
        .map_err(|e| Error::InvalidParameter(format!("gamma({shape}, rate {rate}): {e}")))?;
    Ok(g.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dirichlet_sums_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let draw = sample_dirichlet(&[0.25, 0.25, 0.25, 0.25], &mut rng).unwrap();
            let sum: f64 = draw.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            assert!(draw.iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn dirichlet_rejects_nonpositive_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_dirichlet(&[1.0, 0.0], &mut rng).is_err());
    }

    #[test]
    fn dirichlet_means_follow_parameter_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let alphas = [4.0, 2.0, 1.0, 0.5];
        let n = 4000;
        let mut sums = [0.0f64; 4];
        for _ in 0..n {
            let draw = sample_dirichlet(&alphas, &mut rng).unwrap();
            for (s, d) in sums.iter_mut().zip(&draw) {
                *s += d;
            }
        }
        for pair in sums.windows(2) {
            assert!(pair[0] > pair[1], "means not ordered: {sums:?}");
        }
        // And they land near alpha / sum(alpha).
        let total: f64 = alphas.iter().sum();
        for (s, &a) in sums.iter().zip(&alphas) {
            assert!((s / n as f64 - a / total).abs() < 0.02);
        }
    }

    #[test]
    fn multinomial_counts_sum_to_trials() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let counts = sample_multinomial(40, &[0.7, 0.2, 0.1], &mut rng);
        assert_eq!(counts.iter().sum::<u32>(), 40);
    }

    #[test]
    fn categorical_log_matches_linear() {
        let mut rng_a = ChaCha8Rng::seed_from_u64(3);
        let mut rng_b = ChaCha8Rng::seed_from_u64(3);
        let weights = [0.5, 0.25, 0.25];
        let logs: Vec<f64> = weights.iter().map(|&w| f64::ln(w) + 7.0).collect();
        for _ in 0..200 {
            assert_eq!(
                sample_categorical(&weights, &mut rng_a),
                sample_categorical_log(&logs, &mut rng_b)
            );
        }
    }
}
