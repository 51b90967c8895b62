//! Dependent Dirichlet prior on the time-indexed mixture weights.
//!
//! A single global simplex omega is drawn from Dir(a0 * p); each time slice
//! receives a latent multinomial count vector eta_t given omega, and the
//! slice weights pi_t are Dirichlet with parameter a0 * p plus the counts
//! pooled over a lag set. Pooling makes nearby slices correlated while the
//! marginal law of every pi_t stays Dir(a0 * p); setting every count total
//! to zero recovers independence across time.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rand_util::{sample_dirichlet, sample_multinomial};

/// Lag sets for every time slice plus their incidence inverses.
///
/// Times are 0-based throughout: `set(t)` lists the slices whose latent
/// counts feed pi_t, and `inverse(t)` lists the slices whose weight
/// conditionals are fed by eta_t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagStructure {
    horizon: usize,
    ma_order: usize,
    seasonal_order: usize,
    period: usize,
    sets: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

/// Builds the lag sets for a moving-average order `q`, seasonal order `p`
/// with period `s`, over `horizon` time slices. The set for slice t is the
/// union {t, t-1, ..., t-q} with {t, t-s, ..., t-ps}, truncated at the first
/// slice; q = p = 0 gives the singleton {t}.
pub fn build_lag_sets(horizon: usize, q: usize, p: usize, s: usize) -> Result<LagStructure> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    if s == 0 {
        return Err(Error::InvalidParameter("seasonal period must be >= 1".into()));
    }
    let mut sets = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let mut set = Vec::new();
        for lag in 0..=q {
            if lag <= t {
                set.push(t - lag);
            }
        }
        for mult in 0..=p {
            let lag = mult * s;
            if lag <= t {
                set.push(t - lag);
            }
        }
        set.sort_unstable();
        set.dedup();
        sets.push(set);
    }
    let mut inverses = vec![Vec::new(); horizon];
    for (l, set) in sets.iter().enumerate() {
        for &t in set {
            inverses[t].push(l);
        }
    }
    Ok(LagStructure {
        horizon,
        ma_order: q,
        seasonal_order: p,
        period: s,
        sets,
        inverses,
    })
}

impl LagStructure {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn ma_order(&self) -> usize {
        self.ma_order
    }

    pub fn seasonal_order(&self) -> usize {
        self.seasonal_order
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Slices pooled into the weight prior of slice `t`.
    pub fn set(&self, t: usize) -> &[usize] {
        &self.sets[t]
    }

    /// Slices whose weight conditionals depend on eta_t.
    pub fn inverse(&self, t: usize) -> &[usize] {
        &self.inverses[t]
    }
}

/// Hyperparameters of the dependent Dirichlet prior and of the hierarchical
/// gamma prior on the dependence parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorConfig {
    /// Total mass of the base Dirichlet measure.
    pub a0: f64,
    /// Base probability vector over the 2^m rotations.
    pub base_weights: Vec<f64>,
    /// Multinomial count totals a_t, one per time slice.
    pub count_totals: Vec<u32>,
    /// Gamma shape of theta given beta, one per rotation.
    pub theta_shape: Vec<f64>,
    /// Gamma shape of beta, one per rotation.
    pub beta_shape: Vec<f64>,
    /// Gamma rate of beta, one per rotation.
    pub beta_rate: Vec<f64>,
}

impl PriorConfig {
    pub fn new(
        a0: f64,
        base_weights: Vec<f64>,
        count_totals: Vec<u32>,
        theta_shape: Vec<f64>,
        beta_shape: Vec<f64>,
        beta_rate: Vec<f64>,
    ) -> Result<Self> {
        if !(a0.is_finite() && a0 > 0.0) {
            return Err(Error::InvalidParameter(format!("a0 = {a0} must be > 0")));
        }
        let k = base_weights.len();
        if k < 4 || !k.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "base measure length {k} must be a power of two >= 4 (dimension m >= 2)"
            )));
        }
        let sum: f64 = base_weights.iter().sum();
        if base_weights.iter().any(|&p| !(p.is_finite() && p > 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSimplex(format!(
                "base measure must be positive and sum to 1, sums to {sum}"
            )));
        }
        for (name, v) in [
            ("theta_shape", &theta_shape),
            ("beta_shape", &beta_shape),
            ("beta_rate", &beta_rate),
        ] {
            if v.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: v.len(),
                });
            }
            if v.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
                return Err(Error::InvalidParameter(format!(
                    "{name} entries must be positive"
                )));
            }
        }
        if count_totals.is_empty() {
            return Err(Error::InvalidParameter(
                "count totals must cover at least one time slice".into(),
            ));
        }
        Ok(Self {
            a0,
            base_weights,
            count_totals,
            theta_shape,
            beta_shape,
            beta_rate,
        })
    }

    /// Uniform base measure with a constant count total and exchangeable
    /// gamma hyperparameters, the configuration used by all experiments.
    pub fn symmetric(
        dim: usize,
        horizon: usize,
        a0: f64,
        count_total: u32,
        theta_shape: f64,
        beta_shape: f64,
        beta_rate: f64,
    ) -> Result<Self> {
        let k = 1usize << dim;
        Self::new(
            a0,
            vec![1.0 / k as f64; k],
            vec![count_total; horizon],
            vec![theta_shape; k],
            vec![beta_shape; k],
            vec![beta_rate; k],
        )
    }

    pub fn component_count(&self) -> usize {
        self.base_weights.len()
    }

    pub fn horizon(&self) -> usize {
        self.count_totals.len()
    }

    /// a0 * p, the base Dirichlet parameter vector.
    pub fn base_alpha(&self) -> Vec<f64> {
        self.base_weights.iter().map(|&p| self.a0 * p).collect()
    }
}

/// A forward draw from the prior: global simplex, per-slice counts and
/// per-slice weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentState {
    pub omega: Vec<f64>,
    pub eta: Vec<Vec<u32>>,
    pub pis: Vec<Vec<f64>>,
}

impl LatentState {
    /// Checks the structural invariants: simplexes sum to one and count
    /// vectors hit their totals exactly.
    pub fn validate(&self, cfg: &PriorConfig) -> Result<()> {
        let check_simplex = |v: &[f64], what: &str| -> Result<()> {
            let sum: f64 = v.iter().sum();
            if (sum - 1.0).abs() > 1e-12 || v.iter().any(|&p| p < 0.0) {
                return Err(Error::InvalidSimplex(format!("{what} sums to {sum}")));
            }
            Ok(())
        };
        check_simplex(&self.omega, "omega")?;
        for (t, (eta_t, pi_t)) in self.eta.iter().zip(&self.pis).enumerate() {
            check_simplex(pi_t, &format!("pi_{t}"))?;
            let total: u32 = eta_t.iter().sum();
            if total != cfg.count_totals[t] {
                return Err(Error::InvalidParameter(format!(
                    "eta_{t} sums to {total}, expected {}",
                    cfg.count_totals[t]
                )));
            }
        }
        Ok(())
    }
}

/// Forward simulation of the prior: omega ~ Dir(a0 p), eta_t | omega ~
/// Mult(a_t, omega) independently, pi_t | eta ~ Dir(a0 p + pooled counts).
pub fn sample_prior_path<R: Rng + ?Sized>(
    cfg: &PriorConfig,
    lags: &LagStructure,
    rng: &mut R,
) -> Result<LatentState> {
    if lags.horizon() != cfg.horizon() {
        return Err(Error::DimensionMismatch {
            expected: cfg.horizon(),
            got: lags.horizon(),
        });
    }
    let base = cfg.base_alpha();
    let omega = sample_dirichlet(&base, rng)?;
    let eta: Vec<Vec<u32>> = cfg
        .count_totals
        .iter()
        .map(|&a_t| sample_multinomial(a_t, &omega, rng))
        .collect();
    let mut pis = Vec::with_capacity(cfg.horizon());
    for t in 0..cfg.horizon() {
        let mut alpha = base.clone();
        for &k in lags.set(t) {
            for (j, a) in alpha.iter_mut().enumerate() {
                *a += eta[k][j] as f64;
            }
        }
        pis.push(sample_dirichlet(&alpha, rng)?);
    }
    Ok(LatentState { omega, eta, pis })
}

/// Closed-form prior correlation between pi_t and pi_r (any component; the
/// value does not depend on which one).
pub fn theoretical_correlation(
    t: usize,
    r: usize,
    cfg: &PriorConfig,
    lags: &LagStructure,
) -> Result<f64> {
    if t == r {
        return Err(Error::InvalidParameter(
            "correlation requires two distinct time slices".into(),
        ));
    }
    if t >= lags.horizon() || r >= lags.horizon() {
        return Err(Error::InvalidParameter(format!(
            "time slices ({t}, {r}) outside horizon {}",
            lags.horizon()
        )));
    }
    let sum_over = |set: &[usize]| -> f64 {
        set.iter().map(|&k| cfg.count_totals[k] as f64).sum()
    };
    let set_t = lags.set(t);
    let set_r = lags.set(r);
    let shared: f64 = set_t
        .iter()
        .filter(|k| set_r.contains(k))
        .map(|&k| cfg.count_totals[k] as f64)
        .sum();
    let sum_t = sum_over(set_t);
    let sum_r = sum_over(set_r);
    Ok((cfg.a0 * shared + sum_t * sum_r) / ((cfg.a0 + sum_t) * (cfg.a0 + sum_r)))
}
