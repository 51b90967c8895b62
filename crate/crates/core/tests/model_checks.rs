//! Behavioral checks of the fitted model beyond the acceptance criteria:
//! interval-width patterns, the WAIC/LPML relation, and grid artifacts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rotamix::assess::{density_grid, gof_measures, summarize};
use rotamix::data::benchmark_truth;
use rotamix::mixture::MixtureParams;
use rotamix::prior::{build_lag_sets, PriorConfig};
use rotamix::sampler::{run_chain, McmcConfig, PanelData};

fn benchmark_panel(horizon: usize, n_t: usize, seed: u64) -> PanelData {
    let truth =
        benchmark_truth(horizon, [0.4, 0.25, 0.25, 0.1], [5.0, 3.0, 4.0, 3.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slices = truth
        .iter()
        .map(|params| params.sample(n_t, &mut rng).unwrap().0)
        .collect();
    PanelData::new(2, slices).unwrap()
}

fn fit(panel: &PanelData, a_t: u32, q: usize, seed: u64) -> rotamix::PosteriorDraws {
    let prior = PriorConfig::symmetric(2, panel.horizon(), 1.0, a_t, 1.0, 1.0, 1.0).unwrap();
    let lags = build_lag_sets(panel.horizon(), q, 0, 1).unwrap();
    let cfg = McmcConfig {
        iterations: 2000,
        burn_in: 1000,
        seed,
        ..Default::default()
    };
    run_chain(panel, &prior, &lags, &cfg).unwrap()
}

#[test]
fn waic_tracks_minus_two_lpml() {
    let panel = benchmark_panel(5, 120, 201);
    let draws = fit(&panel, 10, 2, 202);
    let (lpml, waic, _) = gof_measures(&draws, &panel).unwrap();
    let rel = (waic + 2.0 * lpml).abs() / waic.abs();
    assert!(rel < 0.05, "waic {waic} vs -2*lpml {}", -2.0 * lpml);
}

#[test]
fn interval_width_shrinks_with_component_weight() {
    // One slice, strongly unequal weights: the heavy component sees far
    // more observations, so its dependence parameter is better resolved.
    let truth = MixtureParams::from_values(
        2,
        vec![0.65, 0.15, 0.1, 0.1],
        &[3.0, 3.0, 3.0, 3.0],
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    let (points, _) = truth.sample(600, &mut rng).unwrap();
    let panel = PanelData::new(2, vec![points]).unwrap();
    let draws = fit(&panel, 0, 0, 204);
    let table = summarize(&draws).unwrap();
    let width = |component: &str| -> f64 {
        let row = table
            .rows
            .iter()
            .find(|r| r.statistic == "theta" && r.component == component)
            .unwrap();
        row.q975 - row.q025
    };
    assert!(
        width("00") < width("01"),
        "heavy component interval {} should be narrower than light {}",
        width("00"),
        width("01")
    );
}

#[test]
fn posterior_mean_weights_track_truth_ordering() {
    let panel = benchmark_panel(4, 200, 205);
    let draws = fit(&panel, 5, 1, 206);
    let table = summarize(&draws).unwrap();
    // At slice 1 the generating weights are (0.4, 0.25, 0.25, 0.1): the
    // first component should dominate the last.
    let mean_of = |component: &str| -> f64 {
        table
            .rows
            .iter()
            .find(|r| r.t == 1 && r.statistic == "pi" && r.component == component)
            .unwrap()
            .mean
    };
    assert!(mean_of("00") > mean_of("11"));
}

#[test]
fn density_grid_from_a_real_fit_normalizes() {
    let panel = benchmark_panel(3, 80, 207);
    let draws = fit(&panel, 5, 1, 208).thinned(10);
    let grid = density_grid(&draws, 1, (0, 1), 48).unwrap();
    let mass: f64 = grid.values.iter().sum::<f64>() / (48.0 * 48.0);
    assert!((mass - 1.0).abs() < 0.05, "mass {mass}");
    assert!(grid.values.iter().all(|&v| v >= 0.0));
}

#[test]
fn allocation_fallbacks_stay_rare_on_clean_data() {
    let panel = benchmark_panel(3, 60, 209);
    let draws = fit(&panel, 5, 1, 210);
    assert_eq!(draws.alloc_fallbacks, 0);
}
