//! Command surface: simulate, fit, assess and predict.
//!
//! Configuration comes from a JSON file mirrored by command-line flags
//! (flags win). Every run writes a manifest containing the fully resolved
//! configuration, the seed and the crate version, so a fit is reproducible
//! from its manifest alone.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::assess::{
    density_grid, gof_measures, lps, model_label, predictive_mse, summarize, GofReport,
    LpsEntry,
};
use crate::data::{
    benchmark_truth, rank_transform, read_draws_csv, read_panel_csv, simulate_panel,
    uniform_panel, write_betas_csv, write_diagnostics_csv, write_draws_csv, write_grid_csv,
    write_panel_csv, write_summary_csv, write_truth_csv, PanelColumns, RankScope,
};
use crate::error::{Error, Result};
use crate::prior::{build_lag_sets, PriorConfig};
use crate::rotation::{RotationIndex, ThetaRange};
use crate::sampler::{run_chain, McmcConfig, PanelData, PosteriorDraws, Provenance};

/// Prior block of the run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PriorSection {
    pub a0: f64,
    /// Base measure over components; None means uniform.
    pub p_vec: Option<Vec<f64>>,
    /// Constant multinomial total per slice.
    pub a_t: u32,
    /// Moving-average order.
    pub q: usize,
    /// Seasonal order.
    pub p: usize,
    /// Seasonal period.
    pub s: usize,
}

impl Default for PriorSection {
    fn default() -> Self {
        Self {
            a0: 1.0,
            p_vec: None,
            a_t: 0,
            q: 0,
            p: 0,
            s: 12,
        }
    }
}

/// Hierarchical gamma hyperparameters, one scalar replicated across
/// components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HyperSection {
    pub d: f64,
    pub e: f64,
    pub g: f64,
}

impl Default for HyperSection {
    fn default() -> Self {
        Self {
            d: 1.0,
            e: 1.0,
            g: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcSection {
    pub iterations: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub batch_size: u64,
    pub ar_low: f64,
    pub ar_high: f64,
    pub kappa_init: f64,
    pub chains: u32,
}

impl Default for McmcSection {
    fn default() -> Self {
        let theta = ThetaRange::default();
        Self {
            iterations: 7000,
            burn_in: 3000,
            seed: 1,
            theta_min: theta.min,
            theta_max: theta.max,
            batch_size: 50,
            ar_low: 0.3,
            ar_high: 0.4,
            kappa_init: 1.0,
            chains: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct IoSection {
    pub input: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelSection {
    /// Bit string of a component forced to weight one (plain-copula
    /// competitor); None fits the full mixture.
    pub forced_component: Option<String>,
    /// Re-rank pseudo-observation inputs; raw inputs are always ranked.
    pub rank_transform: bool,
    pub rank_scope: RankScope,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            forced_component: None,
            rank_transform: false,
            rank_scope: RankScope::Global,
        }
    }
}

/// Fully resolved run configuration; the manifest serializes exactly this
/// plus provenance fields.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub m: Option<usize>,
    pub prior: PriorSection,
    pub hyper: HyperSection,
    pub mcmc: McmcSection,
    pub io: IoSection,
    pub model: ModelSection,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("cannot parse config {}: {e}", path.display())))
    }

    pub fn mcmc_config(&self) -> Result<McmcConfig> {
        let forced = match &self.model.forced_component {
            None => None,
            Some(bits) => {
                let parsed: Vec<u8> = bits
                    .bytes()
                    .map(|b| b.wrapping_sub(b'0'))
                    .collect();
                Some(RotationIndex::new(&parsed)?.index())
            }
        };
        let cfg = McmcConfig {
            iterations: self.mcmc.iterations,
            burn_in: self.mcmc.burn_in,
            batch_size: self.mcmc.batch_size,
            ar_low: self.mcmc.ar_low,
            ar_high: self.mcmc.ar_high,
            kappa_init: self.mcmc.kappa_init,
            theta_range: ThetaRange::new(self.mcmc.theta_min, self.mcmc.theta_max)?,
            seed: self.mcmc.seed,
            chains: self.mcmc.chains,
            forced_component: forced,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn prior_config(&self, dim: usize, horizon: usize) -> Result<PriorConfig> {
        let k = 1usize << dim;
        let base = match &self.prior.p_vec {
            Some(p) => p.clone(),
            None => vec![1.0 / k as f64; k],
        };
        PriorConfig::new(
            self.prior.a0,
            base,
            vec![self.prior.a_t; horizon],
            vec![self.hyper.d; k],
            vec![self.hyper.e; k],
            vec![self.hyper.g; k],
        )
    }
}

/// Manifest written next to every run's artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub input_sha256: Option<String>,
    #[serde(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Parser)]
#[command(
    name = "rotamix",
    version,
    about = "Time-varying mixtures of rotated Clayton copulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic bivariate panel and its generating truth.
    Simulate(SimulateArgs),
    /// Fit the model to a panel and write draws plus summaries.
    Fit(FitArgs),
    /// Score a finished fit: LPML/WAIC and optionally rolling log
    /// predictive scores.
    Assess(AssessArgs),
    /// Train/test split prediction of the second coordinate given the
    /// first, with mean squared error.
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Number of time slices.
    #[arg(long, default_value_t = 20)]
    t: usize,
    /// Observations per slice.
    #[arg(long = "n-per-t", default_value_t = 300)]
    n_per_t: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Component dependence parameters, canonical order (00,10,01,11).
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [5.0, 3.0, 4.0, 3.0])]
    theta: Vec<f64>,
    /// Initial weights, canonical order.
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [0.4, 0.25, 0.25, 0.1])]
    pi1: Vec<f64>,
}

#[derive(Debug, Clone, Default, Args)]
struct ConfigOverrides {
    /// JSON config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Model dimension m (the mixture has 2^m components).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    a0: Option<f64>,
    /// Constant multinomial total a_t.
    #[arg(long)]
    at: Option<u32>,
    /// Moving-average order of the weight prior.
    #[arg(long)]
    q: Option<usize>,
    /// Seasonal order of the weight prior.
    #[arg(long)]
    p: Option<usize>,
    /// Seasonal period.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    iters: Option<u64>,
    #[arg(long)]
    burnin: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "theta-min")]
    theta_min: Option<f64>,
    #[arg(long = "theta-max")]
    theta_max: Option<f64>,
    #[arg(long)]
    chains: Option<u32>,
    /// Gamma shape of theta given beta.
    #[arg(long)]
    d: Option<f64>,
    /// Gamma shape of beta.
    #[arg(long)]
    e: Option<f64>,
    /// Gamma rate of beta.
    #[arg(long)]
    g: Option<f64>,
    #[arg(long = "kappa-init")]
    kappa_init: Option<f64>,
    #[arg(long = "batch-size")]
    batch_size: Option<u64>,
    /// Re-rank pseudo-observation inputs (raw inputs are always ranked).
    #[arg(long = "rank-transform", default_value_t = false)]
    rank_transform: bool,
    #[arg(long = "rank-scope", value_enum)]
    rank_scope: Option<RankScopeArg>,
    /// Force all weight onto one component, by bit string (e.g. 00).
    #[arg(long = "forced-component")]
    forced_component: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum RankScopeArg {
    Global,
    PerTime,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    overrides: ConfigOverrides,
    /// Also write posterior-mean density grids for every slice and pair.
    #[arg(long, default_value_t = false)]
    grids: bool,
    #[arg(long = "grid-n", default_value_t = 64)]
    grid_n: usize,
}

#[derive(Debug, Args)]
struct AssessArgs {
    /// Directory of a finished fit (reads its manifest and draw files).
    #[arg(long)]
    fit: PathBuf,
    /// First 1-based slice of the rolling log-predictive-score window;
    /// each slice t in the window is scored by a refit on slices 1..t-1.
    #[arg(long = "lps-start")]
    lps_start: Option<usize>,
    /// Iteration override for the rolling refits.
    #[arg(long = "lps-iters")]
    lps_iters: Option<u64>,
    #[arg(long = "lps-burnin")]
    lps_burnin: Option<u64>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[command(flatten)]
    overrides: ConfigOverrides,
    /// Observations per slice used for fitting; the rest are predicted.
    #[arg(long = "train-n")]
    train_n: usize,
    /// Keep every k-th draw when averaging predictions (0 = auto).
    #[arg(long, default_value_t = 0)]
    thin: usize,
}

fn resolve_config(overrides: &ConfigOverrides) -> Result<RunConfig> {
    let mut cfg = match &overrides.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let o = overrides;
    if o.input.is_some() {
        cfg.io.input = o.input.clone();
    }
    if o.out.is_some() {
        cfg.io.out_dir = o.out.clone();
    }
    if o.m.is_some() {
        cfg.m = o.m;
    }
    if let Some(v) = o.a0 {
        cfg.prior.a0 = v;
    }
    if let Some(v) = o.at {
        cfg.prior.a_t = v;
    }
    if let Some(v) = o.q {
        cfg.prior.q = v;
    }
    if let Some(v) = o.p {
        cfg.prior.p = v;
    }
    if let Some(v) = o.s {
        cfg.prior.s = v;
    }
    if let Some(v) = o.iters {
        cfg.mcmc.iterations = v;
    }
    if let Some(v) = o.burnin {
        cfg.mcmc.burn_in = v;
    }
    if let Some(v) = o.seed {
        cfg.mcmc.seed = v;
    }
    if let Some(v) = o.theta_min {
        cfg.mcmc.theta_min = v;
    }
    if let Some(v) = o.theta_max {
        cfg.mcmc.theta_max = v;
    }
    if let Some(v) = o.chains {
        cfg.mcmc.chains = v;
    }
    if let Some(v) = o.d {
        cfg.hyper.d = v;
    }
    if let Some(v) = o.e {
        cfg.hyper.e = v;
    }
    if let Some(v) = o.g {
        cfg.hyper.g = v;
    }
    if let Some(v) = o.kappa_init {
        cfg.mcmc.kappa_init = v;
    }
    if let Some(v) = o.batch_size {
        cfg.mcmc.batch_size = v;
    }
    if o.rank_transform {
        cfg.model.rank_transform = true;
    }
    if let Some(v) = o.rank_scope {
        cfg.model.rank_scope = match v {
            RankScopeArg::Global => RankScope::Global,
            RankScopeArg::PerTime => RankScope::PerTime,
        };
    }
    if o.forced_component.is_some() {
        cfg.model.forced_component = o.forced_component.clone();
    }
    Ok(cfg)
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

fn write_manifest(dir: &Path, command: &str, cfg: &RunConfig, input_sha: Option<String>) -> Result<()> {
    let manifest = Manifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        input_sha256: input_sha,
        config: cfg.clone(),
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(())
}

fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join("manifest.json");
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// Loads and transforms the input panel per the configuration; checks the
/// model dimension.
fn load_panel(cfg: &RunConfig) -> Result<PanelData> {
    let input = cfg
        .io
        .input
        .as_ref()
        .ok_or_else(|| Error::Config("no input panel configured".into()))?;
    let (raw, kind) = read_panel_csv(input)?;
    let expected_m = cfg.m.unwrap_or(raw.dim);
    if raw.dim != expected_m {
        return Err(Error::Data(format!(
            "panel has {} measurement columns but the configuration says m = {expected_m}",
            raw.dim
        )));
    }
    match (kind, cfg.model.rank_transform) {
        (PanelColumns::Raw, _) => rank_transform(&raw, cfg.model.rank_scope),
        (PanelColumns::Uniform, true) => rank_transform(&raw, cfg.model.rank_scope),
        (PanelColumns::Uniform, false) => uniform_panel(&raw),
    }
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg
        .io
        .out_dir
        .clone()
        .ok_or_else(|| Error::Config("no output directory configured".into()))?;
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn fit_model(cfg: &RunConfig, panel: &PanelData) -> Result<PosteriorDraws> {
    let prior = cfg.prior_config(panel.dim(), panel.horizon())?;
    let lags = build_lag_sets(panel.horizon(), cfg.prior.q, cfg.prior.p, cfg.prior.s)?;
    run_chain(panel, &prior, &lags, &cfg.mcmc_config()?)
}

fn write_fit_artifacts(dir: &Path, draws: &PosteriorDraws) -> Result<()> {
    write_draws_csv(draws, &dir.join("draws.csv"))?;
    write_betas_csv(draws, &dir.join("betas.csv"))?;
    write_diagnostics_csv(&draws.batches, &dir.join("diagnostics.csv"))?;
    write_summary_csv(&summarize(draws)?, &dir.join("summary.csv"))?;
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    fs::create_dir_all(&args.out)?;
    let pi1: [f64; 4] = args.pi1.clone().try_into().map_err(|_| {
        Error::Config("--pi1 needs exactly four weights".into())
    })?;
    let thetas: [f64; 4] = args.theta.clone().try_into().map_err(|_| {
        Error::Config("--theta needs exactly four values".into())
    })?;
    let truth = benchmark_truth(args.t, pi1, thetas)?;
    let (panel, _labels) = simulate_panel(&truth, &vec![args.n_per_t; args.t], args.seed)?;
    write_panel_csv(&panel, &args.out.join("panel.csv"))?;
    write_truth_csv(&truth, &args.out.join("truth.csv"))?;
    let cfg = RunConfig {
        m: Some(2),
        mcmc: McmcSection {
            seed: args.seed,
            ..Default::default()
        },
        io: IoSection {
            out_dir: Some(args.out.clone()),
            ..Default::default()
        },
        ..Default::default()
    };
    write_manifest(&args.out, "simulate", &cfg, None)?;
    println!(
        "simulated panel: {} slices x {} observations -> {}",
        args.t,
        args.n_per_t,
        args.out.display()
    );
    Ok(())
}

fn cmd_fit(args: &FitArgs) -> Result<()> {
    let cfg = resolve_config(&args.overrides)?;
    let panel = load_panel(&cfg)?;
    let dir = out_dir(&cfg)?;
    let draws = fit_model(&cfg, &panel)?;
    write_fit_artifacts(&dir, &draws)?;
    if args.grids {
        for t in 0..panel.horizon() {
            for a in 0..panel.dim() {
                for b in (a + 1)..panel.dim() {
                    let grid = density_grid(&draws, t, (a, b), args.grid_n)?;
                    let name = format!("grid_t{}_p{}-{}.csv", t + 1, a + 1, b + 1);
                    write_grid_csv(&grid, &dir.join(name))?;
                }
            }
        }
    }
    let input_sha = cfg
        .io
        .input
        .as_deref()
        .map(sha256_file)
        .transpose()?;
    write_manifest(&dir, "fit", &cfg, input_sha)?;
    println!(
        "fit {}: {} draws over {} slices -> {}",
        model_label(&draws),
        draws.len(),
        draws.horizon,
        dir.display()
    );
    Ok(())
}

fn provenance_from_config(cfg: &RunConfig, dim: usize, horizon: usize) -> Result<Provenance> {
    let mcmc = cfg.mcmc_config()?;
    Ok(Provenance {
        seed: mcmc.seed,
        iterations: mcmc.iterations,
        burn_in: mcmc.burn_in,
        chains: mcmc.chains,
        prior: cfg.prior_config(dim, horizon)?,
        ma_order: cfg.prior.q,
        seasonal_order: cfg.prior.p,
        period: cfg.prior.s,
        theta_range: mcmc.theta_range,
        forced_component: mcmc.forced_component,
    })
}

fn cmd_assess(args: &AssessArgs) -> Result<()> {
    let manifest = read_manifest(&args.fit)?;
    let cfg = manifest.config.clone();
    let panel = load_panel(&cfg)?;
    if let (Some(stored), Some(input)) = (&manifest.input_sha256, cfg.io.input.as_deref()) {
        let current = sha256_file(input)?;
        if &current != stored {
            return Err(Error::Data(format!(
                "input {} changed since the fit (sha256 mismatch)",
                input.display()
            )));
        }
    }
    let provenance = provenance_from_config(&cfg, panel.dim(), panel.horizon())?;
    let draws = read_draws_csv(
        &args.fit.join("draws.csv"),
        &args.fit.join("betas.csv"),
        provenance,
        panel.dim(),
        panel.horizon(),
    )?;
    let (lpml_v, waic_v, unstable) = gof_measures(&draws, &panel)?;
    if unstable > 0 {
        eprintln!("warning: {unstable} observations have an unstable CPO estimate");
    }

    let mut lps_entries = Vec::new();
    if let Some(start) = args.lps_start {
        if start < 2 || start > panel.horizon() {
            return Err(Error::Config(format!(
                "--lps-start must lie in 2..={}",
                panel.horizon()
            )));
        }
        let mut lps_cfg = cfg.clone();
        if let Some(v) = args.lps_iters {
            lps_cfg.mcmc.iterations = v;
        }
        if let Some(v) = args.lps_burnin {
            lps_cfg.mcmc.burn_in = v;
        }
        for t in start..=panel.horizon() {
            // Fit on slices 1..t-1, then score slice t.
            let history = panel.truncated(t - 1)?;
            let refit = fit_model(&lps_cfg, &history)?;
            let mut rng =
                ChaCha8Rng::seed_from_u64(lps_cfg.mcmc.seed.wrapping_add(1_000_003 * t as u64));
            let value = lps(&refit, panel.slice(t - 1), t - 1, &mut rng)?;
            lps_entries.push(LpsEntry { t, value });
        }
    }

    let report = GofReport {
        model: model_label(&draws),
        lpml: lpml_v,
        waic: waic_v,
        lps: lps_entries,
        mse: None,
    };
    let text = serde_json::to_string_pretty(&report)?;
    fs::write(args.fit.join("gof.json"), text + "\n")?;
    println!(
        "assessed {}: lpml {:.3}, waic {:.3}{}",
        report.model,
        report.lpml,
        report.waic,
        if report.lps.is_empty() {
            String::new()
        } else {
            format!(
                ", lps total {:.3}",
                report.lps.iter().map(|e| e.value).sum::<f64>()
            )
        }
    );
    Ok(())
}

fn cmd_predict(args: &PredictArgs) -> Result<()> {
    let cfg = resolve_config(&args.overrides)?;
    let panel = load_panel(&cfg)?;
    if panel.dim() != 2 {
        return Err(Error::UnsupportedDimension(
            "predict needs a bivariate panel".into(),
        ));
    }
    let dir = out_dir(&cfg)?;
    let (train, test) = panel.split_observations(args.train_n);
    if test.is_empty() {
        return Err(Error::Data(format!(
            "no test observations left after keeping {} per slice for training",
            args.train_n
        )));
    }
    let draws = fit_model(&cfg, &train)?;
    write_fit_artifacts(&dir, &draws)?;

    let thin = if args.thin == 0 {
        draws.len().div_ceil(200)
    } else {
        args.thin
    };
    let thinned = draws.thinned(thin);
    let report = predictive_mse(&thinned, &test)?;
    for t in &report.skipped_slices {
        eprintln!("warning: test slice {} is empty, excluded", t + 1);
    }

    // Per-observation predictions for external inspection.
    let mut w = csv::Writer::from_path(dir.join("predictions.csv"))?;
    w.write_record(["t", "given", "observed", "predicted"])?;
    for t in 0..test.horizon() {
        if test.slice(t).is_empty() {
            continue;
        }
        let params: Vec<_> = (0..thinned.len())
            .map(|r| thinned.params_at(r, t))
            .collect::<Result<_>>()?;
        for u in test.slice(t) {
            let given = u.coords()[0];
            let mut predicted = 0.0;
            for p in &params {
                predicted += p.predictive_mean(given)?;
            }
            predicted /= params.len() as f64;
            w.write_record([
                (t + 1).to_string(),
                format!("{given:?}"),
                format!("{:?}", u.coords()[1]),
                format!("{predicted:?}"),
            ])?;
        }
    }
    w.flush()?;

    let (lpml_v, waic_v, _) = gof_measures(&draws, &train)?;
    let gof = GofReport {
        model: model_label(&draws),
        lpml: lpml_v,
        waic: waic_v,
        lps: Vec::new(),
        mse: Some(report.mse),
    };
    fs::write(
        dir.join("gof.json"),
        serde_json::to_string_pretty(&gof)? + "\n",
    )?;
    let input_sha = cfg.io.input.as_deref().map(sha256_file).transpose()?;
    write_manifest(&dir, "predict", &cfg, input_sha)?;
    println!(
        "predict {}: mse {:.5} over {} test observations -> {}",
        gof.model,
        report.mse,
        test.len(),
        dir.display()
    );
    Ok(())
}

/// Parses and dispatches a full argument vector (including the binary
/// name); returns the process exit code.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Clap handles --help/--version through this path.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Assess(args) => cmd_assess(args),
        Command::Predict(args) => cmd_predict(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
