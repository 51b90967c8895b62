//! Panel ingestion, pseudo-observation transforms, synthetic-data
//! generation and the CSV schemas of every artifact.
//!
//! Input panels are long-format CSV with header `t,id,x1..xm` for raw
//! measurements or `t,id,u1..um` for pre-transformed pseudo-observations.
//! Times are 1-based in every file and reindexed to a contiguous 1..T on
//! read. Draw storage uses one row per (iteration, chain, slice, component).

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::MixtureParams;
use crate::rotation::{RotationIndex, UnitPoint};
use crate::sampler::{
    BatchDiagnostic, Draw, PanelData, PosteriorDraws, Provenance,
};
use crate::assess::{DensityGrid, SummaryRow, SummaryTable};

/// Whether a panel file carries raw measurements or pseudo-observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelColumns {
    Raw,
    Uniform,
}

/// Scope over which the empirical CDF of each variable is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankScope {
    /// Pool all time slices (the default).
    Global,
    /// Rank within each time slice separately.
    PerTime,
}

/// One ingested row of a long-format panel.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    /// 1-based contiguous time index after reindexing.
    pub t: usize,
    pub id: String,
    pub values: Vec<f64>,
}

/// A raw panel before transformation to the unit hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPanel {
    pub dim: usize,
    pub horizon: usize,
    pub rows: Vec<RawRow>,
}

impl RawPanel {
    pub fn new(dim: usize, rows: Vec<(i64, String, Vec<f64>)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Data("panel has no rows".into()));
        }
        let mut times: Vec<i64> = rows.iter().map(|r| r.0).collect();
        times.sort_unstable();
        times.dedup();
        let reindex = |raw: i64| times.binary_search(&raw).unwrap() + 1;
        let mut out = Vec::with_capacity(rows.len());
        for (raw_t, id, values) in rows {
            if values.len() != dim {
                return Err(Error::Data(format!(
                    "row at time {raw_t} has {} measurements, expected {dim}",
                    values.len()
                )));
            }
            if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::Data(format!(
                    "non-finite measurement {bad} at time {raw_t}"
                )));
            }
            out.push(RawRow {
                t: reindex(raw_t),
                id,
                values,
            });
        }
        Ok(Self {
            dim,
            horizon: times.len(),
            rows: out,
        })
    }
}

/// Modified rank transform to pseudo-observations: U = rank / (n + 1) per
/// variable with average ranks on ties, computed over the chosen scope.
/// Outputs are strictly interior to (0, 1).
#[allow(clippy::needless_range_loop)]
pub fn rank_transform(raw: &RawPanel, scope: RankScope) -> Result<PanelData> {
    let mut transformed: Vec<Vec<f64>> = vec![vec![0.0; raw.dim]; raw.rows.len()];
    let groups: Vec<Vec<usize>> = match scope {
        RankScope::Global => vec![(0..raw.rows.len()).collect()],
        RankScope::PerTime => {
            let mut by_t: Vec<Vec<usize>> = vec![Vec::new(); raw.horizon];
            for (idx, row) in raw.rows.iter().enumerate() {
                by_t[row.t - 1].push(idx);
            }
            by_t.into_iter().filter(|g| !g.is_empty()).collect()
        }
    };
    for variable in 0..raw.dim {
        for group in &groups {
            let n = group.len();
            let mut order: Vec<usize> = group.clone();
            order.sort_by(|&a, &b| {
                raw.rows[a].values[variable]
                    .partial_cmp(&raw.rows[b].values[variable])
                    .unwrap()
            });
            let first = raw.rows[order[0]].values[variable];
            if raw.rows[order[n - 1]].values[variable] == first {
                return Err(Error::Data(format!(
                    "variable {} is constant within its ranking scope",
                    variable + 1
                )));
            }
            // Average ranks over runs of tied values (1-based positions).
            let mut pos = 0;
            while pos < n {
                let mut end = pos + 1;
                let value = raw.rows[order[pos]].values[variable];
                while end < n && raw.rows[order[end]].values[variable] == value {
                    end += 1;
                }
                let avg_rank = (pos + 1 + end) as f64 / 2.0;
                for &row_idx in &order[pos..end] {
                    transformed[row_idx][variable] = avg_rank / (n as f64 + 1.0);
                }
                pos = end;
            }
        }
    }
    let mut slices: Vec<Vec<UnitPoint>> = vec![Vec::new(); raw.horizon];
    for (idx, row) in raw.rows.iter().enumerate() {
        slices[row.t - 1].push(UnitPoint::new(transformed[idx].clone())?);
    }
    PanelData::new(raw.dim, slices)
}

/// The benchmark generator for bivariate synthetic panels: constant
/// dependence parameters, an initial weight vector, and the recursion
/// pi_{t,00} = 0.95 pi_{t-1,00}, pi_{t,10} = 1.05 pi_{t-1,10}, pi_{t,11}
/// held fixed, pi_{t,01} the simplex remainder.
pub fn benchmark_truth(
    horizon: usize,
    pi1: [f64; 4],
    thetas: [f64; 4],
) -> Result<Vec<MixtureParams>> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(horizon);
    let mut weights = pi1.to_vec();
    for t in 0..horizon {
        if t > 0 {
            let w00 = 0.95 * weights[0];
            let w10 = 1.05 * weights[1];
            let w11 = pi1[3];
            let w01 = 1.0 - w00 - w10 - w11;
            weights = vec![w00, w10, w01, w11];
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weight recursion leaves the simplex at slice {}",
                t + 1
            )));
        }
        out.push(
            MixtureParams::from_values(2, weights.clone(), &thetas).map_err(|e| {
                Error::InvalidParameter(format!("invalid truth at slice {}: {e}", t + 1))
            })?,
        );
    }
    Ok(out)
}

/// Samples a synthetic panel from per-slice truth parameters; returns the
/// component label of every observation for recovery scoring.
pub fn simulate_panel(
    truth: &[MixtureParams],
    n_per_slice: &[usize],
    seed: u64,
) -> Result<(PanelData, Vec<Vec<usize>>)> {
    if truth.is_empty() || truth.len() != n_per_slice.len() {
        return Err(Error::InvalidParameter(format!(
            "truth covers {} slices but counts cover {}",
            truth.len(),
            n_per_slice.len()
        )));
    }
    let dim = truth[0].dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slices = Vec::with_capacity(truth.len());
    let mut labels = Vec::with_capacity(truth.len());
    for (params, &n) in truth.iter().zip(n_per_slice) {
        let (points, js) = params.sample(n, &mut rng)?;
        slices.push(points);
        labels.push(js.into_iter().map(|j| j.index()).collect());
    }
    Ok((PanelData::new(dim, slices)?, labels))
}

// ---------------------------------------------------------------------------
// CSV schemas
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct DrawRow {
    iteration: u64,
    chain: u32,
    t: usize,
    component: String,
    pi: f64,
    theta: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct BetaRow {
    iteration: u64,
    chain: u32,
    component: String,
    beta: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct DiagnosticRow {
    batch: u32,
    kappa: f64,
    acceptance_rate: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct TruthRow {
    t: usize,
    component: String,
    pi: f64,
    theta: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GridRow {
    t: usize,
    pair: String,
    x: f64,
    y: f64,
    value: f64,
}

fn open_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

fn open_reader(path: &Path) -> Result<csv::Reader<BufReader<File>>> {
    Ok(csv::Reader::from_reader(BufReader::new(File::open(path)?)))
}

/// Writes a panel as `t,id,u1..um`, ids numbered within each slice.
pub fn write_panel_csv(panel: &PanelData, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    let mut header = vec!["t".to_string(), "id".to_string()];
    header.extend((1..=panel.dim()).map(|l| format!("u{l}")));
    w.write_record(&header)?;
    for t in 0..panel.horizon() {
        for (i, u) in panel.slice(t).iter().enumerate() {
            let mut record = vec![(t + 1).to_string(), (i + 1).to_string()];
            record.extend(u.coords().iter().map(|c| format!("{c:?}")));
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a panel CSV, detecting raw (`x*`) versus pseudo-observation
/// (`u*`) columns from the header.
pub fn read_panel_csv(path: &Path) -> Result<(RawPanel, PanelColumns)> {
    let mut r = open_reader(path)?;
    let headers = r.headers()?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols.len() < 3 || cols[0] != "t" || cols[1] != "id" {
        return Err(Error::Data(format!(
            "panel header must start with t,id followed by x1..xm or u1..um, got {cols:?}"
        )));
    }
    let kind = if cols[2..].iter().all(|c| c.starts_with('u')) {
        PanelColumns::Uniform
    } else if cols[2..].iter().all(|c| c.starts_with('x')) {
        PanelColumns::Raw
    } else {
        return Err(Error::Data(format!(
            "measurement columns must be uniformly x* or u*, got {:?}",
            &cols[2..]
        )));
    };
    let dim = cols.len() - 2;
    let mut rows = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let parse_err = |what: &str, value: &str| {
            Error::Data(format!(
                "row {}: cannot parse {what} from {value:?}",
                line + 2
            ))
        };
        let t: i64 = record
            .get(0)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| parse_err("time index", record.get(0).unwrap_or("")))?;
        let id = record.get(1).unwrap_or("").to_string();
        if record.len() != dim + 2 {
            return Err(Error::Data(format!(
                "row {}: expected {} fields, got {}",
                line + 2,
                dim + 2,
                record.len()
            )));
        }
        let mut values = Vec::with_capacity(dim);
        for l in 0..dim {
            let field = record.get(l + 2).unwrap_or("");
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(&format!("measurement {}", l + 1), field))?;
            values.push(v);
        }
        rows.push((t, id, values));
    }
    Ok((RawPanel::new(dim, rows)?, kind))
}

/// Converts an already-uniform raw panel into panel data (clamping into the
/// open hypercube).
pub fn uniform_panel(raw: &RawPanel) -> Result<PanelData> {
    let mut slices: Vec<Vec<UnitPoint>> = vec![Vec::new(); raw.horizon];
    for row in &raw.rows {
        slices[row.t - 1].push(UnitPoint::new(row.values.clone()).map_err(|e| {
            Error::Data(format!("observation at time {}: {e}", row.t))
        })?);
    }
    PanelData::new(raw.dim, slices)
}

/// Writes the per-slice truth parameters as `t,component,pi,theta`.
pub fn write_truth_csv(truth: &[MixtureParams], path: &Path) -> Result<()> {
    let mut w = open_writer(path)?;
    for (t, params) in truth.iter().enumerate() {
        for j in RotationIndex::all(params.dim()) {
            w.serialize(TruthRow {
                t: t + 1,
                component: j.to_string(),
                pi: params.weights()[j.index()],
                theta: params.theta(j.index()).value(),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads truth parameters back (inverse of [`write_truth_csv`]).
pub fn read_truth_csv(path: &Path, dim: usize) -> Result<Vec<MixtureParams>> {
    let mut r = open_reader(path)?;
    let k = 1usize << dim;
    let mut per_t: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for record in r.deserialize() {
        let row: TruthRow = record?;
        if row.t == 0 {
            return Err(Error::Data("truth rows use 1-based times".into()));
        }
        while per_t.len() < row.t {
            per_t.push((vec![0.0; k], vec![0.0; k]));
        }
        let bits: Vec<u8> = row
            .component
            .bytes()
            .map(|b| b - b'0')
            .collect();
        let j = RotationIndex::new(&bits)?;
        per_t[row.t - 1].0[j.index()] = row.pi;
        per_t[row.t - 1].1[j.index()] = row.theta;
    }
    per_t
        .into_iter()
        .map(|(weights, thetas)| MixtureParams::from_values(dim, weights, &thetas))
        .collect()
}

/// Writes the draw table: one row per (iteration, chain, slice, component).
pub fn write_draws_csv(draws: &PosteriorDraws, path: &Path) -> Result<()> {
    let mut w = open_writer(path)?;
    let labels: Vec<String> = RotationIndex::all(draws.dim)
        .map(|j| j.to_string())
        .collect();
    for draw in &draws.draws {
        for t in 0..draws.horizon {
            for (j, label) in labels.iter().enumerate() {
                w.serialize(DrawRow {
                    iteration: draw.iteration,
                    chain: draw.chain,
                    t: t + 1,
                    component: label.clone(),
                    pi: draw.pis[t][j],
                    theta: draw.thetas[t][j],
                })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the rate table: one row per (iteration, chain, component).
pub fn write_betas_csv(draws: &PosteriorDraws, path: &Path) -> Result<()> {
    let mut w = open_writer(path)?;
    let labels: Vec<String> = RotationIndex::all(draws.dim)
        .map(|j| j.to_string())
        .collect();
    for draw in &draws.draws {
        for (j, label) in labels.iter().enumerate() {
            w.serialize(BetaRow {
                iteration: draw.iteration,
                chain: draw.chain,
                component: label.clone(),
                beta: draw.betas[j],
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the adaptation trajectory as `batch,kappa,acceptance_rate`; with
/// several chains the trajectories follow each other in chain order.
pub fn write_diagnostics_csv(batches: &[BatchDiagnostic], path: &Path) -> Result<()> {
    let mut w = open_writer(path)?;
    for b in batches {
        w.serialize(DiagnosticRow {
            batch: b.batch,
            kappa: b.kappa,
            acceptance_rate: b.acceptance_rate,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reconstructs stored draws from the draw and rate tables. The latent
/// simplex and count draws are not part of the storage schema, so the
/// result supports scoring and summaries but carries placeholder latents.
pub fn read_draws_csv(
    draws_path: &Path,
    betas_path: &Path,
    provenance: Provenance,
    dim: usize,
    horizon: usize,
) -> Result<PosteriorDraws> {
    let k = 1usize << dim;
    let mut r = open_reader(draws_path)?;
    let mut draws: Vec<Draw> = Vec::new();
    let mut index: std::collections::HashMap<(u64, u32), usize> = std::collections::HashMap::new();
    for record in r.deserialize() {
        let row: DrawRow = record?;
        let key = (row.iteration, row.chain);
        let slot = *index.entry(key).or_insert_with(|| {
            draws.push(Draw {
                iteration: row.iteration,
                chain: row.chain,
                pis: vec![vec![0.0; k]; horizon],
                thetas: vec![vec![0.0; k]; horizon],
                betas: vec![0.0; k],
                omega: vec![1.0 / k as f64; k],
                eta: vec![vec![0; k]; horizon],
            });
            draws.len() - 1
        });
        if row.t == 0 || row.t > horizon {
            return Err(Error::Data(format!(
                "draw row with time {} outside 1..={horizon}",
                row.t
            )));
        }
        let bits: Vec<u8> = row.component.bytes().map(|b| b - b'0').collect();
        let j = RotationIndex::new(&bits)?.index();
        draws[slot].pis[row.t - 1][j] = row.pi;
        draws[slot].thetas[row.t - 1][j] = row.theta;
    }
    let mut r = open_reader(betas_path)?;
    for record in r.deserialize() {
        let row: BetaRow = record?;
        let bits: Vec<u8> = row.component.bytes().map(|b| b - b'0').collect();
        let j = RotationIndex::new(&bits)?.index();
        if let Some(&slot) = index.get(&(row.iteration, row.chain)) {
            draws[slot].betas[j] = row.beta;
        }
    }
    draws.sort_by_key(|d| (d.chain, d.iteration));
    Ok(PosteriorDraws {
        dim,
        horizon,
        draws,
        batches: Vec::new(),
        alloc_fallbacks: 0,
        provenance,
    })
}

/// Writes summary rows as `t,component,statistic,mean,q025,q975`.
pub fn write_summary_csv(table: &SummaryTable, path: &Path) -> Result<()> {
    let mut w = open_writer(path)?;
    for row in &table.rows {
        w.serialize::<&SummaryRow>(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a density grid as `t,pair,x,y,value`.
pub fn write_grid_csv(grid: &DensityGrid, path: &Path) -> Result<()> {
    let mut w = open_writer(path)?;
    let pair = format!("{}-{}", grid.pair.0 + 1, grid.pair.1 + 1);
    for ix in 0..grid.grid_n {
        for iy in 0..grid.grid_n {
            w.serialize(GridRow {
                t: grid.t,
                pair: pair.clone(),
                x: (ix as f64 + 0.5) / grid.grid_n as f64,
                y: (iy as f64 + 0.5) / grid.grid_n as f64,
                value: grid.value(ix, iy),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn rank_transform_hand_values() {
        let raw = RawPanel::new(
            1,
            vec![
                (1, "a".into(), vec![10.0]),
                (1, "b".into(), vec![5.0]),
                (1, "c".into(), vec![7.0]),
            ],
        )
        .unwrap();
        let panel = rank_transform(&raw, RankScope::Global).unwrap();
        let us: Vec<f64> = panel.slice(0).iter().map(|u| u.coords()[0]).collect();
        assert_eq!(us, vec![0.75, 0.25, 0.5]);
    }

    #[test]
    fn rank_transform_averages_ties() {
        let raw = RawPanel::new(
            1,
            vec![
                (1, "a".into(), vec![4.0]),
                (1, "b".into(), vec![4.0]),
                (1, "c".into(), vec![9.0]),
            ],
        )
        .unwrap();
        let panel = rank_transform(&raw, RankScope::Global).unwrap();
        let us: Vec<f64> = panel.slice(0).iter().map(|u| u.coords()[0]).collect();
        assert_eq!(us, vec![0.375, 0.375, 0.75]);
    }

    #[test]
    fn rank_transform_outputs_interior() {
        let values: Vec<(i64, String, Vec<f64>)> = (0..50)
            .map(|i| (1 + i % 5, format!("{i}"), vec![i as f64, (i * i) as f64]))
            .collect();
        let raw = RawPanel::new(2, values).unwrap();
        for scope in [RankScope::Global, RankScope::PerTime] {
            let panel = rank_transform(&raw, scope).unwrap();
            for t in 0..panel.horizon() {
                for u in panel.slice(t) {
                    assert!(u.coords().iter().all(|&c| c > 0.0 && c < 1.0));
                }
            }
        }
    }

    #[test]
    fn rank_transform_invariant_to_monotone_maps() {
        let base: Vec<f64> = vec![3.0, -1.0, 7.0, 2.0, 0.5, 9.0];
        let rows = |vals: &[f64]| -> RawPanel {
            RawPanel::new(
                1,
                vals.iter()
                    .enumerate()
                    .map(|(i, &v)| (1 + (i % 2) as i64, format!("{i}"), vec![v]))
                    .collect(),
            )
            .unwrap()
        };
        let direct = rank_transform(&rows(&base), RankScope::Global).unwrap();
        let mapped: Vec<f64> = base.iter().map(|&v| (v * 0.3).exp()).collect();
        let transformed = rank_transform(&rows(&mapped), RankScope::Global).unwrap();
        for t in 0..direct.horizon() {
            for (a, b) in direct.slice(t).iter().zip(transformed.slice(t)) {
                assert_eq!(a.coords(), b.coords());
            }
        }
    }

    #[test]
    fn rank_transform_rejects_constant_column() {
        let raw = RawPanel::new(
            1,
            vec![
                (1, "a".into(), vec![2.0]),
                (1, "b".into(), vec![2.0]),
            ],
        )
        .unwrap();
        let err = rank_transform(&raw, RankScope::Global).unwrap_err();
        assert!(err.to_string().contains("variable 1"));
    }

    #[test]
    fn benchmark_truth_recursion() {
        let truth = benchmark_truth(
            20,
            [0.4, 0.25, 0.25, 0.1],
            [5.0, 3.0, 4.0, 3.0],
        )
        .unwrap();
        let w2 = truth[1].weights();
        assert!((w2[0] - 0.38).abs() < 1e-15);
        assert!((w2[1] - 0.2625).abs() < 1e-15);
        assert!((w2[2] - 0.2575).abs() < 1e-12);
        assert!((w2[3] - 0.1).abs() < 1e-15);
        for params in &truth {
            let sum: f64 = params.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        // The recursion eventually leaves the simplex.
        assert!(benchmark_truth(60, [0.4, 0.25, 0.25, 0.1], [5.0, 3.0, 4.0, 3.0]).is_err());
    }

    #[test]
    fn simulate_panel_deterministic() {
        let truth =
            benchmark_truth(4, [0.4, 0.25, 0.25, 0.1], [5.0, 3.0, 4.0, 3.0]).unwrap();
        let (a, labels_a) = simulate_panel(&truth, &[25; 4], 7).unwrap();
        let (b, labels_b) = simulate_panel(&truth, &[25; 4], 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(labels_a, labels_b);
        assert_eq!(a.horizon(), 4);
        assert_eq!(a.slice(0).len(), 25);
    }

    #[test]
    fn panel_roundtrip_is_identical() {
        let truth =
            benchmark_truth(3, [0.4, 0.25, 0.25, 0.1], [5.0, 3.0, 4.0, 3.0]).unwrap();
        let (panel, _) = simulate_panel(&truth, &[10, 0, 7], 11).unwrap();
        let dir = tempdir().unwrap();
        let path = dir.path().join("panel.csv");
        write_panel_csv(&panel, &path).unwrap();
        let (raw, kind) = read_panel_csv(&path).unwrap();
        assert_eq!(kind, PanelColumns::Uniform);
        let reread = uniform_panel(&raw).unwrap();
        // The empty middle slice is dropped by reindexing; compare the
        // non-empty slices.
        assert_eq!(reread.horizon(), 2);
        assert_eq!(reread.slice(0), panel.slice(0));
        assert_eq!(reread.slice(1), panel.slice(2));
    }

    #[test]
    fn truth_roundtrip() {
        let truth =
            benchmark_truth(5, [0.4, 0.25, 0.25, 0.1], [5.0, 3.0, 4.0, 3.0]).unwrap();
        let dir = tempdir().unwrap();
        let path = dir.path().join("truth.csv");
        write_truth_csv(&truth, &path).unwrap();
        let reread = read_truth_csv(&path, 2).unwrap();
        assert_eq!(truth, reread);
    }

    #[test]
    fn read_panel_rejects_malformed_rows() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "t,id,x1,x2\n1,a,0.5,oops\n").unwrap();
        let err = read_panel_csv(&path).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");

        std::fs::write(&path, "time,id,x1\n1,a,0.5\n").unwrap();
        assert!(read_panel_csv(&path).is_err());

        std::fs::write(&path, "t,id,x1,u2\n1,a,0.5,0.5\n").unwrap();
        assert!(read_panel_csv(&path).is_err());
    }
}
