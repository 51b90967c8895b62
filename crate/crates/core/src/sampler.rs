//! Gibbs sampler for the posterior of the dynamic mixture.
//!
//! One sweep visits, in order: the per-observation component allocations,
//! the per-slice mixture weights, the latent count vectors (componentwise,
//! with the all-ones component absorbing the slack), the global simplex,
//! the dependence parameters (adaptive gamma random-walk Metropolis with a
//! shared tuning scalar adapted on batches), and finally the gamma rates of
//! the hierarchical theta prior. All mass computations run in log space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::mixture::MixtureParams;
use crate::prior::{LagStructure, PriorConfig};
use crate::rand_util::{sample_categorical, sample_categorical_log, sample_dirichlet};
use crate::rotation::{
    rotated_log_density, ClaytonTheta, RotationIndex, ThetaRange, UnitPoint,
};

/// Panel of pseudo-observations: for each of T time slices, a (possibly
/// empty) list of points in the unit hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelData {
    dim: usize,
    slices: Vec<Vec<UnitPoint>>,
}

impl PanelData {
    pub fn new(dim: usize, slices: Vec<Vec<UnitPoint>>) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::Data("panel needs at least one time slice".into()));
        }
        for (t, slice) in slices.iter().enumerate() {
            for (i, u) in slice.iter().enumerate() {
                if u.dim() != dim {
                    return Err(Error::Data(format!(
                        "observation ({}, {}) has dimension {}, expected {dim}",
                        t + 1,
                        i + 1,
                        u.dim()
                    )));
                }
            }
        }
        Ok(Self { dim, slices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> usize {
        self.slices.len()
    }

    pub fn slice(&self, t: usize) -> &[UnitPoint] {
        &self.slices[t]
    }

    pub fn len(&self) -> usize {
        self.slices.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Keeps the first `keep` slices, for rolling predictive fits.
    pub fn truncated(&self, keep: usize) -> Result<Self> {
        if keep == 0 || keep > self.horizon() {
            return Err(Error::Data(format!(
                "cannot truncate panel of horizon {} to {keep}",
                self.horizon()
            )));
        }
        Ok(Self {
            dim: self.dim,
            slices: self.slices[..keep].to_vec(),
        })
    }

    /// Splits each slice into the first `train` observations and the rest.
    pub fn split_observations(&self, train: usize) -> (Self, Self) {
        let mut fit = Vec::with_capacity(self.horizon());
        let mut test = Vec::with_capacity(self.horizon());
        for slice in &self.slices {
            let cut = train.min(slice.len());
            fit.push(slice[..cut].to_vec());
            test.push(slice[cut..].to_vec());
        }
        (
            Self {
                dim: self.dim,
                slices: fit,
            },
            Self {
                dim: self.dim,
                slices: test,
            },
        )
    }
}

/// Sampler configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    pub iterations: u64,
    pub burn_in: u64,
    pub batch_size: u64,
    /// Acceptance-rate band outside which the tuning scalar adapts.
    pub ar_low: f64,
    pub ar_high: f64,
    pub kappa_init: f64,
    pub theta_range: ThetaRange,
    pub seed: u64,
    pub chains: u32,
    /// When set, the mixture weight is pinned to one on this component and
    /// only its dependence parameter is sampled (the plain-copula
    /// competitor configuration).
    pub forced_component: Option<usize>,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            iterations: 7000,
            burn_in: 3000,
            batch_size: 50,
            ar_low: 0.3,
            ar_high: 0.4,
            kappa_init: 1.0,
            theta_range: ThetaRange::default(),
            seed: 1,
            chains: 1,
            forced_component: None,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 || self.burn_in >= self.iterations {
            return Err(Error::Config(format!(
                "burn-in {} must be below iterations {}",
                self.burn_in, self.iterations
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be >= 1".into()));
        }
        if !(0.0 < self.ar_low && self.ar_low < self.ar_high && self.ar_high < 1.0) {
            return Err(Error::Config(format!(
                "acceptance bounds must satisfy 0 < low < high < 1, got ({}, {})",
                self.ar_low, self.ar_high
            )));
        }
        if !(self.kappa_init.is_finite() && self.kappa_init > 0.0) {
            return Err(Error::Config("kappa_init must be positive".into()));
        }
        if self.chains == 0 {
            return Err(Error::Config("at least one chain required".into()));
        }
        ThetaRange::new(self.theta_range.min, self.theta_range.max)?;
        Ok(())
    }
}

/// Mutable state of one chain.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub omega: Vec<f64>,
    pub eta: Vec<Vec<u32>>,
    pub pis: Vec<Vec<f64>>,
    pub thetas: Vec<Vec<f64>>,
    pub betas: Vec<f64>,
    /// Component index allocated to each observation.
    pub z: Vec<Vec<usize>>,
    pub kappa: f64,
    pub batch_accepts: u64,
    pub batch_proposals: u64,
    pub alloc_fallbacks: u64,
}

/// One stored posterior draw.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    pub iteration: u64,
    pub chain: u32,
    pub pis: Vec<Vec<f64>>,
    pub thetas: Vec<Vec<f64>>,
    pub betas: Vec<f64>,
    pub omega: Vec<f64>,
    pub eta: Vec<Vec<u32>>,
}

/// Tuning trajectory of one adaptation batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchDiagnostic {
    pub chain: u32,
    pub batch: u32,
    /// Tuning scalar in effect during the batch.
    pub kappa: f64,
    pub acceptance_rate: f64,
}

/// Everything needed to reproduce or extend a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub iterations: u64,
    pub burn_in: u64,
    pub chains: u32,
    pub prior: PriorConfig,
    pub ma_order: usize,
    pub seasonal_order: usize,
    pub period: usize,
    pub theta_range: ThetaRange,
    pub forced_component: Option<usize>,
}

/// Post-burn-in draws from one or more chains, with batch diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDraws {
    pub dim: usize,
    pub horizon: usize,
    pub draws: Vec<Draw>,
    pub batches: Vec<BatchDiagnostic>,
    pub alloc_fallbacks: u64,
    pub provenance: Provenance,
}

impl PosteriorDraws {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn component_count(&self) -> usize {
        1usize << self.dim
    }

    /// Mixture parameters of draw `r` at slice `t`.
    pub fn params_at(&self, r: usize, t: usize) -> Result<MixtureParams> {
        let draw = &self.draws[r];
        MixtureParams::from_values(self.dim, draw.pis[t].clone(), &draw.thetas[t])
    }

    /// Keeps every `step`-th draw.
    pub fn thinned(&self, step: usize) -> Self {
        let step = step.max(1);
        Self {
            draws: self.draws.iter().step_by(step).cloned().collect(),
            ..self.clone()
        }
    }

    /// Structural invariants of every stored draw.
    pub fn validate(&self) -> Result<()> {
        let range = self.provenance.theta_range;
        for draw in &self.draws {
            for (t, pi_t) in draw.pis.iter().enumerate() {
                let sum: f64 = pi_t.iter().sum();
                if (sum - 1.0).abs() > 1e-12 || pi_t.iter().any(|&p| p < 0.0) {
                    return Err(Error::InvalidSimplex(format!(
                        "draw {} slice {t}: weights sum to {sum}",
                        draw.iteration
                    )));
                }
            }
            for (t, eta_t) in draw.eta.iter().enumerate() {
                let total: u32 = eta_t.iter().sum();
                if total != self.provenance.prior.count_totals[t] {
                    return Err(Error::InvalidParameter(format!(
                        "draw {} slice {t}: counts sum to {total}",
                        draw.iteration
                    )));
                }
            }
            if self.provenance.forced_component.is_none()
                && draw
                    .thetas
                    .iter()
                    .flatten()
                    .any(|&th| !range.contains(th))
            {
                return Err(Error::InvalidParameter(format!(
                    "draw {}: theta outside compact range",
                    draw.iteration
                )));
            }
        }
        Ok(())
    }
}

fn theta_of(value: f64) -> ClaytonTheta {
    ClaytonTheta::new(value).expect("theta kept nonnegative by the sampler")
}

/// Log component density, with underflow mapped to -inf rather than an
/// error; the callers treat such states as (numerically) impossible.
fn component_log_density(dim: usize, component: usize, u: &UnitPoint, theta: f64) -> f64 {
    let j = RotationIndex::from_index(component, dim).expect("component index validated");
    rotated_log_density(&j, u, theta_of(theta)).unwrap_or(f64::NEG_INFINITY)
}

/// Normalized allocation probabilities from weights and log densities.
pub fn allocation_probabilities(weights: &[f64], log_densities: &[f64]) -> Vec<f64> {
    let logs: Vec<f64> = weights
        .iter()
        .zip(log_densities)
        .map(|(&w, &lf)| if w > 0.0 { w.ln() + lf } else { f64::NEG_INFINITY })
        .collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return weights.to_vec();
    }
    let unnorm: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = unnorm.iter().sum();
    unnorm.into_iter().map(|p| p / total).collect()
}

/// Dirichlet parameter of the weight conditional: base measure plus pooled
/// latent counts plus allocation counts.
pub fn weight_posterior_alpha(
    base_alpha: &[f64],
    pooled_counts: &[u32],
    allocation_counts: &[u32],
) -> Vec<f64> {
    base_alpha
        .iter()
        .zip(pooled_counts)
        .zip(allocation_counts)
        .map(|((&b, &e), &z)| b + e as f64 + z as f64)
        .collect()
}

/// Gamma parameters (shape, rate) of the beta conditional.
pub fn beta_posterior(
    beta_shape: f64,
    beta_rate: f64,
    theta_shape: f64,
    horizon: usize,
    theta_sum: f64,
) -> (f64, f64) {
    (
        beta_shape + horizon as f64 * theta_shape,
        beta_rate + theta_sum,
    )
}

/// Metropolis-Hastings log acceptance ratio for a dependence parameter,
/// gamma random walk with shape `kappa` centred at the current value.
pub fn theta_log_acceptance(
    current: f64,
    proposal: f64,
    kappa: f64,
    theta_shape: f64,
    beta: f64,
    loglik_current: f64,
    loglik_proposal: f64,
) -> f64 {
    let log_target = |th: f64, ll: f64| (theta_shape - 1.0) * th.ln() - beta * th + ll;
    let log_prop = |x: f64, center: f64| {
        let rate = kappa / center;
        kappa * rate.ln() - ln_gamma(kappa) + (kappa - 1.0) * x.ln() - rate * x
    };
    log_target(proposal, loglik_proposal) - log_target(current, loglik_current)
        + log_prop(current, proposal)
        - log_prop(proposal, current)
}

/// Batch adaptation of the tuning scalar: nudge kappa up when acceptance is
/// low (smaller steps), down when high, by a factor 1.01^sqrt(batch).
pub fn adapted_kappa(kappa: f64, acceptance_rate: f64, batch: u32, low: f64, high: f64) -> f64 {
    let step = 1.01f64.powf((batch as f64).sqrt());
    if acceptance_rate < low {
        kappa * step
    } else if acceptance_rate > high {
        kappa / step
    } else {
        kappa
    }
}

/// Deterministic interior initialization: uniform weights, unit dependence
/// parameters, prior-mean rates, base-measure simplex and largest-remainder
/// count vectors; allocations follow from one conditional pass.
pub fn init_state<R: Rng + ?Sized>(
    data: &PanelData,
    prior: &PriorConfig,
    lags: &LagStructure,
    cfg: &McmcConfig,
    rng: &mut R,
) -> Result<ChainState> {
    let k = prior.component_count();
    if 1usize << data.dim() != k {
        return Err(Error::DimensionMismatch {
            expected: 1usize << data.dim(),
            got: k,
        });
    }
    if data.horizon() != prior.horizon() || data.horizon() != lags.horizon() {
        return Err(Error::DimensionMismatch {
            expected: data.horizon(),
            got: prior.horizon(),
        });
    }
    if let Some(f) = cfg.forced_component {
        if f >= k {
            return Err(Error::Config(format!(
                "forced component {f} out of range for {k} components"
            )));
        }
    }
    let horizon = data.horizon();

    let pis: Vec<Vec<f64>> = match cfg.forced_component {
        Some(f) => {
            let mut one_hot = vec![0.0; k];
            one_hot[f] = 1.0;
            vec![one_hot; horizon]
        }
        None => vec![vec![1.0 / k as f64; k]; horizon],
    };
    let theta0 = cfg.theta_range.clamp(1.0);
    let thetas = vec![vec![theta0; k]; horizon];
    let betas: Vec<f64> = prior
        .beta_shape
        .iter()
        .zip(&prior.beta_rate)
        .map(|(&e, &g)| e / g)
        .collect();
    let eta: Vec<Vec<u32>> = prior
        .count_totals
        .iter()
        .map(|&a_t| largest_remainder(a_t, &prior.base_weights))
        .collect();

    // Fail early, naming the offending observation, if the likelihood is
    // degenerate at the starting point.
    for t in 0..horizon {
        let params = MixtureParams::from_values(data.dim(), pis[t].clone(), &thetas[t])?;
        for (i, u) in data.slice(t).iter().enumerate() {
            if params.log_density(u).is_err() {
                return Err(Error::Chain(format!(
                    "non-finite log-likelihood at initialization for observation ({}, {})",
                    t + 1,
                    i + 1
                )));
            }
        }
    }

    let mut state = ChainState {
        omega: prior.base_weights.clone(),
        eta,
        pis,
        thetas,
        betas,
        z: data.slices.iter().map(|s| vec![0; s.len()]).collect(),
        kappa: cfg.kappa_init,
        batch_accepts: 0,
        batch_proposals: 0,
        alloc_fallbacks: 0,
    };
    match cfg.forced_component {
        Some(f) => {
            for zs in &mut state.z {
                zs.iter_mut().for_each(|z| *z = f);
            }
        }
        None => update_allocations(&mut state, data, rng),
    }
    Ok(state)
}

/// Rounds a_t * p to integers that sum exactly to a_t.
fn largest_remainder(total: u32, probs: &[f64]) -> Vec<u32> {
    let mut counts: Vec<u32> = probs
        .iter()
        .map(|&p| (total as f64 * p).floor() as u32)
        .collect();
    let mut remainder = total - counts.iter().sum::<u32>();
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = total as f64 * probs[a] - (total as f64 * probs[a]).floor();
        let fb = total as f64 * probs[b] - (total as f64 * probs[b]).floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for &idx in &order {
        if remainder == 0 {
            break;
        }
        counts[idx] += 1;
        remainder -= 1;
    }
    counts
}

/// (a) Component allocations: multinomial with probabilities proportional
/// to weight times component density, in log space. If every component
/// underflows, fall back to the weights alone and record it.
pub fn update_allocations<R: Rng + ?Sized>(
    state: &mut ChainState,
    data: &PanelData,
    rng: &mut R,
) {
    let k = state.omega.len();
    let dim = data.dim();
    let mut logs = vec![0.0f64; k];
    for t in 0..data.horizon() {
        for (i, u) in data.slice(t).iter().enumerate() {
            let mut any_finite = false;
            for (j, lw) in logs.iter_mut().enumerate() {
                let w = state.pis[t][j];
                *lw = if w > 0.0 {
                    let l = w.ln() + component_log_density(dim, j, u, state.thetas[t][j]);
                    any_finite |= l.is_finite();
                    l
                } else {
                    f64::NEG_INFINITY
                };
            }
            state.z[t][i] = if any_finite {
                sample_categorical_log(&logs, rng)
            } else {
                state.alloc_fallbacks += 1;
                sample_categorical(&state.pis[t], rng)
            };
        }
    }
}

fn allocation_counts(state: &ChainState, t: usize) -> Vec<u32> {
    let mut counts = vec![0u32; state.omega.len()];
    for &j in &state.z[t] {
        counts[j] += 1;
    }
    counts
}

/// (b) Slice weights: Dirichlet with base measure plus pooled latent counts
/// plus allocation counts.
pub fn update_weights<R: Rng + ?Sized>(
    state: &mut ChainState,
    prior: &PriorConfig,
    lags: &LagStructure,
    rng: &mut R,
) -> Result<()> {
    let base = prior.base_alpha();
    for t in 0..lags.horizon() {
        let mut pooled = vec![0u32; base.len()];
        for &k in lags.set(t) {
            for (j, p) in pooled.iter_mut().enumerate() {
                *p += state.eta[k][j];
            }
        }
        let alpha = weight_posterior_alpha(&base, &pooled, &allocation_counts(state, t));
        state.pis[t] = sample_dirichlet(&alpha, rng)?;
    }
    Ok(())
}

/// Unnormalized log masses of the count conditional for component `j` at
/// slice `t`, as a function of the candidate value v in 0..=support. The
/// all-ones component absorbs the slack `support - v`.
pub(crate) fn count_log_masses(
    state: &ChainState,
    prior: &PriorConfig,
    lags: &LagStructure,
    t: usize,
    j: usize,
) -> Result<Vec<f64>> {
    let k = prior.component_count();
    let reference = k - 1;
    debug_assert!(j != reference);
    let a_t = prior.count_totals[t];
    let others: u32 = (0..k)
        .filter(|&c| c != j && c != reference)
        .map(|c| state.eta[t][c])
        .sum();
    let support = a_t - others;
    let base_j = prior.a0 * prior.base_weights[j];
    let base_ref = prior.a0 * prior.base_weights[reference];

    // Pooled counts excluding slice t, for every slice whose weight
    // conditional is fed by eta_t.
    let feeds = lags.inverse(t);
    let mut pooled_j = Vec::with_capacity(feeds.len());
    let mut pooled_ref = Vec::with_capacity(feeds.len());
    let mut log_scale_j = state.omega[j].ln();
    let mut log_scale_ref = state.omega[reference].ln();
    for &l in feeds {
        let mut s_j = 0u32;
        let mut s_ref = 0u32;
        for &src in lags.set(l) {
            if src == t {
                continue;
            }
            s_j += state.eta[src][j];
            s_ref += state.eta[src][reference];
        }
        pooled_j.push(s_j as f64);
        pooled_ref.push(s_ref as f64);
        log_scale_j += state.pis[l][j].ln();
        log_scale_ref += state.pis[l][reference].ln();
    }

    let weighted = |count: f64, log_scale: f64| if count == 0.0 { 0.0 } else { count * log_scale };
    let mut masses = Vec::with_capacity(support as usize + 1);
    for v in 0..=support {
        let v = v as f64;
        let slack = support as f64 - v;
        let mut lw = weighted(v, log_scale_j) + weighted(slack, log_scale_ref)
            - ln_gamma(v + 1.0)
            - ln_gamma(slack + 1.0);
        for (s_j, s_ref) in pooled_j.iter().zip(&pooled_ref) {
            lw -= ln_gamma(base_j + s_j + v) + ln_gamma(base_ref + s_ref + slack);
        }
        if lw.is_nan() {
            return Err(Error::Chain(format!(
                "count conditional non-finite at slice {}, component {j}",
                t + 1
            )));
        }
        masses.push(lw);
    }
    Ok(masses)
}

/// (c) Latent counts: sweep the components other than the all-ones one in
/// canonical order, sampling each from its discrete conditional with the
/// all-ones component holding the slack so the slice total stays exact.
pub fn update_counts<R: Rng + ?Sized>(
    state: &mut ChainState,
    prior: &PriorConfig,
    lags: &LagStructure,
    rng: &mut R,
) -> Result<()> {
    let k = prior.component_count();
    let reference = k - 1;
    for t in 0..lags.horizon() {
        let a_t = prior.count_totals[t];
        if a_t == 0 {
            state.eta[t].iter_mut().for_each(|c| *c = 0);
            continue;
        }
        for j in 0..k {
            if j == reference {
                continue;
            }
            let masses = count_log_masses(state, prior, lags, t, j)?;
            let v = sample_categorical_log(&masses, rng) as u32;
            let support = (masses.len() - 1) as u32;
            state.eta[t][j] = v;
            state.eta[t][reference] = support - v;
        }
    }
    Ok(())
}

/// (d) Global simplex: Dirichlet with base measure plus all latent counts.
pub fn update_omega<R: Rng + ?Sized>(
    state: &mut ChainState,
    prior: &PriorConfig,
    rng: &mut R,
) -> Result<()> {
    let mut alpha = prior.base_alpha();
    for eta_t in &state.eta {
        for (j, a) in alpha.iter_mut().enumerate() {
            *a += eta_t[j] as f64;
        }
    }
    state.omega = sample_dirichlet(&alpha, rng)?;
    Ok(())
}

/// (e) Dependence parameters: componentwise adaptive random-walk
/// Metropolis. Proposals outside the compact range are rejected outright
/// and still count toward the batch acceptance rate.
pub fn update_thetas<R: Rng + ?Sized>(
    state: &mut ChainState,
    data: &PanelData,
    prior: &PriorConfig,
    cfg: &McmcConfig,
    rng: &mut R,
) -> Result<()> {
    let k = prior.component_count();
    let dim = data.dim();
    for t in 0..data.horizon() {
        for j in 0..k {
            if let Some(f) = cfg.forced_component {
                if j != f {
                    continue;
                }
            }
            let current = state.thetas[t][j];
            let proposal_dist = Gamma::new(state.kappa, current / state.kappa)
                .map_err(|e| Error::Chain(format!("theta proposal: {e}")))?;
            let proposal: f64 = proposal_dist.sample(rng);
            state.batch_proposals += 1;
            if !cfg.theta_range.contains(proposal) {
                continue;
            }
            let loglik = |th: f64| -> f64 {
                data.slice(t)
                    .iter()
                    .zip(&state.z[t])
                    .filter(|(_, &z)| z == j)
                    .map(|(u, _)| component_log_density(dim, j, u, th))
                    .sum()
            };
            let log_alpha = theta_log_acceptance(
                current,
                proposal,
                state.kappa,
                prior.theta_shape[j],
                state.betas[j],
                loglik(current),
                loglik(proposal),
            );
            if rng.gen::<f64>().ln() < log_alpha {
                state.thetas[t][j] = proposal;
                state.batch_accepts += 1;
            }
        }
    }
    Ok(())
}

/// Per-batch adaptation step; returns the diagnostic row for the batch just
/// completed and resets the counters.
pub fn adapt_kappa(state: &mut ChainState, cfg: &McmcConfig, batch: u32, chain: u32) -> BatchDiagnostic {
    let rate = if state.batch_proposals > 0 {
        state.batch_accepts as f64 / state.batch_proposals as f64
    } else {
        0.0
    };
    let diagnostic = BatchDiagnostic {
        chain,
        batch,
        kappa: state.kappa,
        acceptance_rate: rate,
    };
    state.kappa = adapted_kappa(state.kappa, rate, batch, cfg.ar_low, cfg.ar_high);
    state.batch_accepts = 0;
    state.batch_proposals = 0;
    diagnostic
}

/// (f) Hierarchical gamma rates: conjugate update from the dependence
/// parameters across all slices.
pub fn update_betas<R: Rng + ?Sized>(
    state: &mut ChainState,
    prior: &PriorConfig,
    rng: &mut R,
) -> Result<()> {
    let horizon = state.thetas.len();
    for j in 0..prior.component_count() {
        let theta_sum: f64 = (0..horizon).map(|t| state.thetas[t][j]).sum();
        let (shape, rate) = beta_posterior(
            prior.beta_shape[j],
            prior.beta_rate[j],
            prior.theta_shape[j],
            horizon,
            theta_sum,
        );
        state.betas[j] = crate::rand_util::sample_gamma_rate(shape, rate, rng)?;
    }
    Ok(())
}

fn snapshot(state: &ChainState, iteration: u64, chain: u32) -> Draw {
    Draw {
        iteration,
        chain,
        pis: state.pis.clone(),
        thetas: state.thetas.clone(),
        betas: state.betas.clone(),
        omega: state.omega.clone(),
        eta: state.eta.clone(),
    }
}

fn run_single_chain(
    data: &PanelData,
    prior: &PriorConfig,
    lags: &LagStructure,
    cfg: &McmcConfig,
    chain: u32,
) -> Result<(Vec<Draw>, Vec<BatchDiagnostic>, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chain as u64);
    let mut state = init_state(data, prior, lags, cfg, &mut rng)?;
    let mut draws = Vec::with_capacity((cfg.iterations - cfg.burn_in) as usize);
    let mut batches = Vec::new();
    let mut batch = 0u32;
    let forced = cfg.forced_component.is_some();
    for iteration in 1..=cfg.iterations {
        if !forced {
            update_allocations(&mut state, data, &mut rng);
            update_weights(&mut state, prior, lags, &mut rng)?;
            update_counts(&mut state, prior, lags, &mut rng)?;
            update_omega(&mut state, prior, &mut rng)?;
        }
        update_thetas(&mut state, data, prior, cfg, &mut rng)?;
        if iteration % cfg.batch_size == 0 {
            batch += 1;
            batches.push(adapt_kappa(&mut state, cfg, batch, chain));
        }
        update_betas(&mut state, prior, &mut rng)?;
        if iteration > cfg.burn_in {
            draws.push(snapshot(&state, iteration, chain));
        }
    }
    Ok((draws, batches, state.alloc_fallbacks))
}

/// Runs the configured number of chains (in parallel when more than one)
/// and concatenates their post-burn-in draws in chain order.
pub fn run_chain(
    data: &PanelData,
    prior: &PriorConfig,
    lags: &LagStructure,
    cfg: &McmcConfig,
) -> Result<PosteriorDraws> {
    cfg.validate()?;
    if prior.horizon() != data.horizon() {
        return Err(Error::DimensionMismatch {
            expected: data.horizon(),
            got: prior.horizon(),
        });
    }
    let chain_ids: Vec<u32> = (0..cfg.chains).collect();
    let results: Vec<Result<_>> = if cfg.chains == 1 {
        vec![run_single_chain(data, prior, lags, cfg, 0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chain_ids
                .iter()
                .map(|&c| scope.spawn(move || run_single_chain(data, prior, lags, cfg, c)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("chain thread panicked"))
                .collect()
        })
    };
    let mut draws = Vec::new();
    let mut batches = Vec::new();
    let mut fallbacks = 0;
    for result in results {
        let (d, b, f) = result?;
        draws.extend(d);
        batches.extend(b);
        fallbacks += f;
    }
    Ok(PosteriorDraws {
        dim: data.dim(),
        horizon: data.horizon(),
        draws,
        batches,
        alloc_fallbacks: fallbacks,
        provenance: Provenance {
            seed: cfg.seed,
            iterations: cfg.iterations,
            burn_in: cfg.burn_in,
            chains: cfg.chains,
            prior: prior.clone(),
            ma_order: lags.ma_order(),
            seasonal_order: lags.seasonal_order(),
            period: lags.period(),
            theta_range: cfg.theta_range,
            forced_component: cfg.forced_component,
        },
    })
}
