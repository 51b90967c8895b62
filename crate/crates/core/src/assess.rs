//! Goodness-of-fit and predictive scoring over stored posterior draws.
//!
//! LPML is the sum of log conditional predictive ordinates (harmonic means
//! of the per-draw densities, taken in log space); WAIC is -2 times the log
//! pointwise predictive density minus its variance penalty. The log
//! predictive score for a future slice forward-simulates the weight and
//! dependence parameters from each stored draw before averaging densities,
//! and the prediction error path scores the posterior-mean conditional
//! expectation of one coordinate given the other.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::MixtureParams;
use crate::prior::build_lag_sets;
use crate::rand_util::{sample_dirichlet, sample_gamma_rate, sample_multinomial};
use crate::rotation::{rotated_log_density, RotationIndex, UnitPoint};
use crate::sampler::{PanelData, PosteriorDraws};
use crate::stats::{log_sum_exp, mean, quantile_sorted, sample_variance};

/// Goodness-of-fit report; serialized as the gof JSON artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub model: String,
    pub lpml: f64,
    pub waic: f64,
    pub lps: Vec<LpsEntry>,
    pub mse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpsEntry {
    /// 1-based time index of the predicted slice.
    pub t: usize,
    pub value: f64,
}

/// Model label of a fit: `M_{a,q,p}` for the dynamic mixture,
/// `single_<bits>` for a forced single-component run.
pub fn model_label(draws: &PosteriorDraws) -> String {
    let p = &draws.provenance;
    match p.forced_component {
        Some(f) => {
            let j = RotationIndex::from_index(f, draws.dim).expect("stored component valid");
            format!("single_{j}")
        }
        None => format!(
            "M_{{{},{},{}}}",
            p.prior.count_totals.first().copied().unwrap_or(0),
            p.ma_order,
            p.seasonal_order
        ),
    }
}

/// Per-observation log densities under every stored draw: one row per
/// observation (slice-major), one column per draw.
pub fn log_predictive_matrix(
    draws: &PosteriorDraws,
    data: &PanelData,
) -> Result<Vec<Vec<f64>>> {
    if data.horizon() != draws.horizon {
        return Err(Error::DimensionMismatch {
            expected: draws.horizon,
            got: data.horizon(),
        });
    }
    if draws.is_empty() {
        return Err(Error::Assessment("no stored draws".into()));
    }
    let mut rows = Vec::with_capacity(data.len());
    for t in 0..data.horizon() {
        let params: Vec<MixtureParams> = (0..draws.len())
            .map(|r| draws.params_at(r, t))
            .collect::<Result<_>>()?;
        for u in data.slice(t) {
            let row: Vec<f64> = params
                .iter()
                .map(|p| p.log_density(u).unwrap_or(f64::NEG_INFINITY))
                .collect();
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Log pseudo marginal likelihood from a log-density matrix.
pub fn lpml_from_log_matrix(rows: &[Vec<f64>]) -> f64 {
    rows.iter()
        .map(|row| {
            let r = row.len() as f64;
            let inv: Vec<f64> = row.iter().map(|&lf| -lf).collect();
            // log CPO = log R - log sum exp(-log f).
            r.ln() - log_sum_exp(&inv)
        })
        .sum()
}

/// WAIC from a log-density matrix: -2 * sum over observations of
/// (log mean density - variance of the log density).
pub fn waic_from_log_matrix(rows: &[Vec<f64>]) -> f64 {
    let total: f64 = rows
        .iter()
        .map(|row| {
            let r = row.len() as f64;
            let lppd = log_sum_exp(row) - r.ln();
            lppd - sample_variance(row)
        })
        .sum();
    -2.0 * total
}

/// Count of observations whose CPO harmonic mean is dominated by a single
/// draw; a high count flags an unstable LPML estimate.
pub fn cpo_dominated_count(rows: &[Vec<f64>]) -> usize {
    rows.iter()
        .filter(|row| {
            let inv: Vec<f64> = row.iter().map(|&lf| -lf).collect();
            let total = log_sum_exp(&inv);
            let max = inv.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (max - total).exp() > 0.99
        })
        .count()
}

/// Log pseudo marginal likelihood of the fit data under the stored draws.
pub fn lpml(draws: &PosteriorDraws, data: &PanelData) -> Result<f64> {
    Ok(lpml_from_log_matrix(&log_predictive_matrix(draws, data)?))
}

/// WAIC of the fit data under the stored draws.
pub fn waic(draws: &PosteriorDraws, data: &PanelData) -> Result<f64> {
    Ok(waic_from_log_matrix(&log_predictive_matrix(draws, data)?))
}

/// LPML and WAIC from a single shared density matrix, plus the count of
/// unstable CPO terms.
pub fn gof_measures(draws: &PosteriorDraws, data: &PanelData) -> Result<(f64, f64, usize)> {
    let rows = log_predictive_matrix(draws, data)?;
    Ok((
        lpml_from_log_matrix(&rows),
        waic_from_log_matrix(&rows),
        cpo_dominated_count(&rows),
    ))
}

/// Forward-simulated mixture parameters for the slice after the fit
/// horizon, one set per stored draw.
fn forward_params<R: Rng + ?Sized>(
    draws: &PosteriorDraws,
    t: usize,
    rng: &mut R,
) -> Result<Vec<MixtureParams>> {
    let p = &draws.provenance;
    let k = draws.component_count();
    let lags = build_lag_sets(t + 1, p.ma_order, p.seasonal_order, p.period)?;
    // Constant-total continuation: the predicted slice reuses the last
    // configured count total.
    let a_next = *p.prior.count_totals.last().expect("nonempty totals");
    let base = p.prior.base_alpha();
    let mut out = Vec::with_capacity(draws.len());
    for draw in &draws.draws {
        let weights = match p.forced_component {
            Some(f) => {
                let mut one_hot = vec![0.0; k];
                one_hot[f] = 1.0;
                one_hot
            }
            None => {
                let eta_next = sample_multinomial(a_next, &draw.omega, rng);
                let mut alpha = base.clone();
                for &l in lags.set(t) {
                    let source = if l == t { &eta_next } else { &draw.eta[l] };
                    for (j, a) in alpha.iter_mut().enumerate() {
                        *a += source[j] as f64;
                    }
                }
                sample_dirichlet(&alpha, rng)?
            }
        };
        let mut thetas = Vec::with_capacity(k);
        for j in 0..k {
            let th = sample_gamma_rate(p.prior.theta_shape[j], draw.betas[j], rng)?;
            thetas.push(p.theta_range.clamp(th));
        }
        out.push(MixtureParams::from_values(draws.dim, weights, &thetas)?);
    }
    Ok(out)
}

/// Log predictive score of the observations in the slice at 0-based time
/// `t`, under draws fitted to slices 0..t. The predictive density is the
/// Monte-Carlo average over draws of the density at forward-simulated
/// parameters.
pub fn lps<R: Rng + ?Sized>(
    draws: &PosteriorDraws,
    slice: &[UnitPoint],
    t: usize,
    rng: &mut R,
) -> Result<f64> {
    if t == 0 {
        return Err(Error::Assessment(
            "log predictive score needs at least one fitted slice before the predicted one"
                .into(),
        ));
    }
    if draws.horizon != t {
        return Err(Error::Assessment(format!(
            "draws cover {} slices but the predicted slice has 0-based index {t}",
            draws.horizon
        )));
    }
    let params = forward_params(draws, t, rng)?;
    let ln_r = (params.len() as f64).ln();
    let mut total = 0.0;
    for u in slice {
        let logs: Vec<f64> = params
            .iter()
            .map(|p| p.log_density(u).unwrap_or(f64::NEG_INFINITY))
            .collect();
        total += log_sum_exp(&logs) - ln_r;
    }
    Ok(total)
}

/// Weighted mean squared prediction error report.
#[derive(Debug, Clone, PartialEq)]
pub struct MseReport {
    pub mse: f64,
    /// Per-slice errors; None where the test slice was empty.
    pub per_slice: Vec<Option<f64>>,
    pub skipped_slices: Vec<usize>,
}

/// Mean squared error of the posterior-mean prediction of the second
/// coordinate given the first, over the test panel. Bivariate only; test
/// slices must align with the fit horizon, and empty slices are excluded
/// with a warning in the report.
pub fn predictive_mse(draws: &PosteriorDraws, test_data: &PanelData) -> Result<MseReport> {
    if draws.dim != 2 || test_data.dim() != 2 {
        return Err(Error::UnsupportedDimension(
            "prediction error is defined for the bivariate model only".into(),
        ));
    }
    if test_data.horizon() != draws.horizon {
        return Err(Error::DimensionMismatch {
            expected: draws.horizon,
            got: test_data.horizon(),
        });
    }
    let mut weighted = 0.0;
    let mut count = 0usize;
    let mut per_slice = Vec::with_capacity(draws.horizon);
    let mut skipped = Vec::new();
    for t in 0..draws.horizon {
        let slice = test_data.slice(t);
        if slice.is_empty() {
            per_slice.push(None);
            skipped.push(t);
            continue;
        }
        let params: Vec<MixtureParams> = (0..draws.len())
            .map(|r| draws.params_at(r, t))
            .collect::<Result<_>>()?;
        let mut slice_sse = 0.0;
        for u in slice {
            let given = u.coords()[0];
            let observed = u.coords()[1];
            let mut predicted = 0.0;
            for p in &params {
                predicted += p.predictive_mean(given)?;
            }
            predicted /= params.len() as f64;
            slice_sse += (observed - predicted) * (observed - predicted);
        }
        per_slice.push(Some(slice_sse / slice.len() as f64));
        weighted += slice_sse;
        count += slice.len();
    }
    if count == 0 {
        return Err(Error::Assessment("no test observations".into()));
    }
    Ok(MseReport {
        mse: weighted / count as f64,
        per_slice,
        skipped_slices: skipped,
    })
}

/// One summary row: posterior mean and central 95% interval of a statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    /// 1-based time index.
    pub t: usize,
    /// Rotation bit string, or "mixture" for slice-level statistics.
    pub component: String,
    pub statistic: String,
    pub mean: f64,
    pub q025: f64,
    pub q975: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
    /// Cells whose posterior mean fell outside its own 95% interval; a
    /// diagnostic, not a failure.
    pub containment_violations: usize,
}

fn summary_row(t: usize, component: String, statistic: &str, series: &mut [f64]) -> SummaryRow {
    series.sort_by(|a, b| a.partial_cmp(b).unwrap());
    SummaryRow {
        t: t + 1,
        component,
        statistic: statistic.to_string(),
        mean: mean(series),
        q025: quantile_sorted(series, 0.025),
        q975: quantile_sorted(series, 0.975),
    }
}

/// Posterior means and 95% intervals per slice and component for the
/// weights, dependence parameters and tail coefficients, plus the mixture
/// Kendall's tau per slice.
pub fn summarize(draws: &PosteriorDraws) -> Result<SummaryTable> {
    if draws.is_empty() {
        return Err(Error::Assessment("no stored draws".into()));
    }
    let k = draws.component_count();
    let r = draws.len();
    let mut rows = Vec::new();
    for t in 0..draws.horizon {
        let mut taus = Vec::with_capacity(r);
        let mut lambda_series: Vec<Vec<f64>> = vec![Vec::with_capacity(r); k];
        let mut pi_series: Vec<Vec<f64>> = vec![Vec::with_capacity(r); k];
        let mut theta_series: Vec<Vec<f64>> = vec![Vec::with_capacity(r); k];
        for idx in 0..r {
            let params = draws.params_at(idx, t)?;
            taus.push(params.kendall_tau());
            let lambdas = params.tail_coefficients()?;
            for j in 0..k {
                pi_series[j].push(params.weights()[j]);
                theta_series[j].push(params.theta(j).value());
                lambda_series[j].push(lambdas[j]);
            }
        }
        for j in 0..k {
            let label = RotationIndex::from_index(j, draws.dim)?.to_string();
            rows.push(summary_row(t, label.clone(), "pi", &mut pi_series[j]));
            rows.push(summary_row(t, label.clone(), "theta", &mut theta_series[j]));
            rows.push(summary_row(t, label, "lambda", &mut lambda_series[j]));
        }
        rows.push(summary_row(t, "mixture".into(), "tau", &mut taus));
    }
    let mut violations = 0;
    for row in &rows {
        let ordered =
            row.q025.is_finite() && row.q975.is_finite() && row.q025 <= row.q975;
        if !ordered || !row.mean.is_finite() {
            return Err(Error::Assessment(format!(
                "degenerate summary cell at t={}, {} {}",
                row.t, row.component, row.statistic
            )));
        }
        if row.mean < row.q025 || row.mean > row.q975 {
            violations += 1;
        }
    }
    Ok(SummaryTable {
        rows,
        containment_violations: violations,
    })
}

/// Posterior-mean bivariate density of one coordinate pair on a regular
/// grid of cell midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    /// 1-based time index.
    pub t: usize,
    /// 0-based coordinate pair.
    pub pair: (usize, usize),
    pub grid_n: usize,
    /// Row-major over (x index, y index).
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.grid_n + iy]
    }
}

/// Log density of the coordinate-pair margin of the mixture: each rotated
/// component marginalizes to the bivariate rotated Clayton with the same
/// parameter and the pair's rotation bits.
fn pair_margin_log_density(
    params: &MixtureParams,
    pair: (usize, usize),
    u: &UnitPoint,
) -> Result<f64> {
    let mut terms = Vec::with_capacity(params.component_count());
    for j in RotationIndex::all(params.dim()) {
        let w = params.weights()[j.index()];
        if w == 0.0 {
            continue;
        }
        let bits = [u8::from(j.bit(pair.0)), u8::from(j.bit(pair.1))];
        let pair_rot = RotationIndex::new(&bits)?;
        terms.push(w.ln() + rotated_log_density(&pair_rot, u, params.theta(j.index()))?);
    }
    Ok(log_sum_exp(&terms))
}

/// Posterior-mean pair density at slice `t` (0-based) on a grid_n x grid_n
/// midpoint grid.
pub fn density_grid(
    draws: &PosteriorDraws,
    t: usize,
    pair: (usize, usize),
    grid_n: usize,
) -> Result<DensityGrid> {
    if pair.0 >= draws.dim || pair.1 >= draws.dim || pair.0 == pair.1 {
        return Err(Error::InvalidParameter(format!(
            "coordinate pair ({}, {}) invalid for dimension {}",
            pair.0, pair.1, draws.dim
        )));
    }
    if t >= draws.horizon {
        return Err(Error::InvalidParameter(format!(
            "slice {t} outside horizon {}",
            draws.horizon
        )));
    }
    if grid_n == 0 {
        return Err(Error::InvalidParameter("grid size must be >= 1".into()));
    }
    let params: Vec<MixtureParams> = (0..draws.len())
        .map(|r| draws.params_at(r, t))
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; grid_n * grid_n];
    for ix in 0..grid_n {
        let x = (ix as f64 + 0.5) / grid_n as f64;
        for iy in 0..grid_n {
            let y = (iy as f64 + 0.5) / grid_n as f64;
            let u = UnitPoint::new(vec![x, y])?;
            let mut acc = 0.0;
            for p in &params {
                acc += pair_margin_log_density(p, pair, &u)?.exp();
            }
            values[ix * grid_n + iy] = acc / params.len() as f64;
        }
    }
    Ok(DensityGrid {
        t: t + 1,
        pair,
        grid_n,
        values,
    })
}

/// Evaluates a full report in one pass; `lps_entries` and `mse` are
/// computed separately because they need refits or a test split.
pub fn gof_report(
    draws: &PosteriorDraws,
    data: &PanelData,
    lps_entries: Vec<LpsEntry>,
    mse: Option<f64>,
) -> Result<GofReport> {
    let (lpml_value, waic_value, _) = gof_measures(draws, data)?;
    Ok(GofReport {
        model: model_label(draws),
        lpml: lpml_value,
        waic: waic_value,
        lps: lps_entries,
        mse,
    })
}
