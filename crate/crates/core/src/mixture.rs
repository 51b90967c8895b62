//! Mixture of all 2^m rotated Clayton copulas for one time slice.
//!
//! A single mixture carries one weight and one dependence parameter per
//! rotation corner, in canonical order. Besides CDF/density evaluation and
//! sampling, this module derives the dependence summaries of the mixture
//! (Kendall's tau, per-corner tail coefficients) and, for the bivariate
//! case, the conditional distribution used for point prediction.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rotation::{
    clamp_unit, kendall_tau_component, rotated_cdf, rotated_log_density, sample_rotated,
    tail_coefficient, ClaytonTheta, RotationIndex, UnitPoint, THETA_INDEPENDENCE_EPS,
};
use crate::stats::log_sum_exp;

/// Tolerance on the mixture-weight simplex constraint.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Number of midpoint-rule nodes used by [`MixtureParams::predictive_mean`].
pub const PREDICTIVE_QUADRATURE_NODES: usize = 512;

/// Weights and dependence parameters of one time-slice mixture, indexed by
/// rotation corner in canonical order (first coordinate's bit fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureParams {
    dim: usize,
    weights: Vec<f64>,
    thetas: Vec<ClaytonTheta>,
}

impl MixtureParams {
    pub fn new(dim: usize, weights: Vec<f64>, thetas: Vec<ClaytonTheta>) -> Result<Self> {
        let k = 1usize
            .checked_shl(dim as u32)
            .filter(|_| (2..=crate::rotation::MAX_DIM).contains(&dim))
            .ok_or_else(|| {
                Error::UnsupportedDimension(format!("mixture dimension {dim} out of range"))
            })?;
        if weights.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: weights.len(),
            });
        }
        if thetas.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: thetas.len(),
            });
        }
        let mut sum = 0.0;
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidSimplex(format!("weight {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidSimplex(format!(
                "weights sum to {sum}, expected 1 within {SIMPLEX_TOL}"
            )));
        }
        Ok(Self {
            dim,
            weights,
            thetas,
        })
    }

    /// Convenience constructor from raw theta values.
    pub fn from_values(dim: usize, weights: Vec<f64>, thetas: &[f64]) -> Result<Self> {
        let thetas = thetas
            .iter()
            .map(|&t| ClaytonTheta::new(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, weights, thetas)
    }

    /// Degenerate mixture with all weight on a single rotation.
    pub fn single(dim: usize, component: usize, theta: f64) -> Result<Self> {
        let k = 1usize << dim;
        if component >= k {
            return Err(Error::InvalidParameter(format!(
                "component {component} out of range for dimension {dim}"
            )));
        }
        let mut weights = vec![0.0; k];
        weights[component] = 1.0;
        Self::from_values(dim, weights, &vec![theta; k])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn theta(&self, component: usize) -> ClaytonTheta {
        self.thetas[component]
    }

    pub fn theta_values(&self) -> Vec<f64> {
        self.thetas.iter().map(|t| t.value()).collect()
    }

    fn check_point(&self, u: &UnitPoint) -> Result<()> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: u.dim(),
            });
        }
        Ok(())
    }

    /// Mixture CDF, the weighted sum of rotated CDFs.
    pub fn cdf(&self, u: &UnitPoint) -> Result<f64> {
        self.check_point(u)?;
        let mut total = 0.0;
        for j in RotationIndex::all(self.dim) {
            let w = self.weights[j.index()];
            if w == 0.0 {
                continue;
            }
            total += w * rotated_cdf(&j, u, self.thetas[j.index()])?;
        }
        Ok(total)
    }

    /// Log mixture density via log-sum-exp over the component densities.
    pub fn log_density(&self, u: &UnitPoint) -> Result<f64> {
        self.check_point(u)?;
        let mut terms = Vec::with_capacity(self.weights.len());
        for j in RotationIndex::all(self.dim) {
            let w = self.weights[j.index()];
            if w == 0.0 {
                continue;
            }
            terms.push(w.ln() + rotated_log_density(&j, u, self.thetas[j.index()])?);
        }
        let log_f = log_sum_exp(&terms);
        if log_f.is_finite() {
            Ok(log_f)
        } else {
            Err(Error::BoundaryUnderflow(format!(
                "mixture log density non-finite at {:?}",
                u.coords()
            )))
        }
    }

    pub fn density(&self, u: &UnitPoint) -> Result<f64> {
        self.log_density(u).map(f64::exp)
    }

    /// Pairwise Kendall's tau of the mixture: the weight-averaged,
    /// parity-signed component taus. Identical for every coordinate pair by
    /// exchangeability.
    pub fn kendall_tau(&self) -> f64 {
        RotationIndex::all(self.dim)
            .map(|j| self.weights[j.index()] * kendall_tau_component(&j, self.thetas[j.index()]))
            .sum()
    }

    /// Tail dependence coefficient at every corner, in canonical order.
    /// Only the matching rotation contributes for Clayton components, so
    /// corner k gets weight_k * (m/(m-1))^(-1/theta_k).
    pub fn tail_coefficients(&self) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.weights.len());
        for j in RotationIndex::all(self.dim) {
            let w = self.weights[j.index()];
            if w == 0.0 {
                out.push(0.0);
                continue;
            }
            out.push(w * tail_coefficient(&j, &j, self.thetas[j.index()])?);
        }
        Ok(out)
    }

    /// Ancestral sampling: draw a component label from the weights, then a
    /// point from that rotated copula. Labels are returned alongside the
    /// points for use as test oracles.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        n: usize,
        rng: &mut R,
    ) -> Result<(Vec<UnitPoint>, Vec<RotationIndex>)> {
        let mut points = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let pick: f64 = rng.gen();
            let mut acc = 0.0;
            let mut chosen = self.weights.len() - 1;
            for (idx, &w) in self.weights.iter().enumerate() {
                acc += w;
                if pick < acc {
                    chosen = idx;
                    break;
                }
            }
            let j = RotationIndex::from_index(chosen, self.dim)?;
            let mut pt = sample_rotated(&j, self.thetas[chosen], 1, rng)?;
            points.push(pt.pop().expect("one sample requested"));
            labels.push(j);
        }
        Ok((points, labels))
    }

    fn require_bivariate(&self) -> Result<()> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(format!(
                "conditional prediction is bivariate only, dimension is {}",
                self.dim
            )));
        }
        Ok(())
    }

    /// Conditional CDF of the target coordinate given the other one,
    /// P(U_target <= u_target | U_given = u_given), i.e. the mixture of
    /// component h-functions d C_j(u_given, u_target) / d u_given.
    /// Bivariate only; the first copula argument is the conditioning one.
    pub fn conditional_cdf(&self, u_target: f64, u_given: f64) -> Result<f64> {
        self.require_bivariate()?;
        let v = clamp_unit(u_target);
        let w = clamp_unit(u_given);
        let mut total = 0.0;
        for j in RotationIndex::all(2) {
            let wt = self.weights[j.index()];
            if wt == 0.0 {
                continue;
            }
            total += wt * rotated_h(&j, v, w, self.thetas[j.index()].value());
        }
        Ok(total.clamp(0.0, 1.0))
    }

    /// Predictive mean E(U_target | U_given = u_given), integrated from the
    /// conditional survival function with a fixed midpoint rule.
    pub fn predictive_mean(&self, u_given: f64) -> Result<f64> {
        self.require_bivariate()?;
        let n = PREDICTIVE_QUADRATURE_NODES;
        let mut acc = 0.0;
        for k in 0..n {
            let v = (k as f64 + 0.5) / n as f64;
            acc += 1.0 - self.conditional_cdf(v, u_given)?;
        }
        Ok(acc / n as f64)
    }
}

/// Clayton h-function: d C(w, v) / d w = w^(-theta-1) * S^(-1/theta - 1)
/// with S = w^(-theta) + v^(-theta) - 1.
fn clayton_h(v_target: f64, w_given: f64, theta: f64) -> f64 {
    if theta < THETA_INDEPENDENCE_EPS {
        return v_target;
    }
    let s1 = f64::exp_m1(-theta * w_given.ln()) + f64::exp_m1(-theta * v_target.ln());
    let ln_s = if s1.is_finite() {
        s1.ln_1p()
    } else {
        let xw = -theta * w_given.ln();
        let xv = -theta * v_target.ln();
        let x_max = xw.max(xv);
        x_max + ((xw - x_max).exp() + (xv - x_max).exp() - (-x_max).exp()).ln()
    };
    ((-theta - 1.0) * w_given.ln() + (-1.0 / theta - 1.0) * ln_s).exp()
}

/// h-function of a rotated component: flip the arguments per the rotation
/// bits, evaluate the base h-function, and complement when the target
/// coordinate is flipped.
fn rotated_h(j: &RotationIndex, v_target: f64, w_given: f64, theta: f64) -> f64 {
    let w = if j.bit(0) { 1.0 - w_given } else { w_given };
    let v = if j.bit(1) { 1.0 - v_target } else { v_target };
    let core = clayton_h(clamp_unit(v), clamp_unit(w), theta);
    if j.bit(1) {
        1.0 - core
    } else {
        core
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::empirical_kendall_tau;
    use proptest::{prop_assert, proptest};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn point(coords: &[f64]) -> UnitPoint {
        UnitPoint::new(coords.to_vec()).unwrap()
    }

    /// Weights and thetas of the four-component benchmark mixture used
    /// throughout the tests: pi = (0.4, 0.25, 0.25, 0.1) in canonical order
    /// (00, 10, 01, 11) and theta = (5, 3, 4, 3).
    fn benchmark() -> MixtureParams {
        MixtureParams::from_values(2, vec![0.4, 0.25, 0.25, 0.1], &[5.0, 3.0, 4.0, 3.0]).unwrap()
    }

    #[test]
    fn rejects_bad_simplex() {
        assert!(MixtureParams::from_values(2, vec![0.5, 0.2, 0.2, 0.2], &[1.0; 4]).is_err());
        assert!(MixtureParams::from_values(2, vec![0.5, -0.1, 0.3, 0.3], &[1.0; 4]).is_err());
    }

    #[test]
    fn degenerate_mixture_equals_identity_rotation() {
        let params = MixtureParams::single(2, 0, 2.0).unwrap();
        let u = point(&[0.3, 0.7]);
        let direct = rotated_cdf(
            &RotationIndex::identity(2).unwrap(),
            &u,
            ClaytonTheta::new(2.0).unwrap(),
        )
        .unwrap();
        assert_eq!(params.cdf(&u).unwrap(), direct);
    }

    #[test]
    fn uniform_mixture_at_centre() {
        // Hand evaluation at (0.5, 0.5), theta = 1: the four rotated CDFs are
        // 1/3, 1/6, 1/6, 1/3, averaging to 1/4.
        let params = MixtureParams::from_values(2, vec![0.25; 4], &[1.0; 4]).unwrap();
        let c = params.cdf(&point(&[0.5, 0.5])).unwrap();
        assert!((c - 0.25).abs() < 1e-14, "got {c}");
    }

    #[test]
    fn cdf_normalized_at_one() {
        let c = benchmark().cdf(&point(&[1.0, 1.0])).unwrap();
        assert!((c - 1.0).abs() < 1e-8, "got {c}");
    }

    #[test]
    fn single_component_density_matches() {
        let params = MixtureParams::single(2, 3, 1.5).unwrap();
        let u = point(&[0.4, 0.8]);
        let expect = crate::rotation::rotated_density(
            &RotationIndex::from_index(3, 2).unwrap(),
            &u,
            ClaytonTheta::new(1.5).unwrap(),
        )
        .unwrap();
        assert!((params.density(&u).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn independence_density_is_flat() {
        let params = MixtureParams::from_values(2, vec![0.25; 4], &[0.0; 4]).unwrap();
        for u in [[0.2, 0.9], [0.5, 0.5]] {
            assert!((params.density(&point(&u)).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_integrates_to_one() {
        let params =
            MixtureParams::from_values(2, vec![0.4, 0.2, 0.2, 0.2], &[2.0, 1.0, 1.5, 2.0]).unwrap();
        let n = 1024;
        let mut mass = 0.0;
        for i in 0..n {
            for j in 0..n {
                let u = point(&[(i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64]);
                mass += params.density(&u).unwrap();
            }
        }
        mass /= (n * n) as f64;
        assert!((mass - 1.0).abs() < 1e-3, "got {mass}");
    }

    #[test]
    fn kendall_tau_hand_values() {
        let uniform = MixtureParams::from_values(2, vec![0.25; 4], &[2.0; 4]).unwrap();
        assert!(uniform.kendall_tau().abs() < 1e-15);

        let single = MixtureParams::single(2, 0, 2.0).unwrap();
        assert!((single.kendall_tau() - 0.5).abs() < 1e-15);

        let expect = 0.4 * (5.0 / 7.0) - 0.25 * 0.6 - 0.25 * (4.0 / 6.0) + 0.1 * 0.6;
        assert!((benchmark().kendall_tau() - expect).abs() < 1e-15);
        assert!((expect - 0.0290).abs() < 1e-4);
    }

    #[test]
    fn tail_coefficients_hand_values() {
        let lambdas = benchmark().tail_coefficients().unwrap();
        assert!((lambdas[0] - 0.4 * 2f64.powf(-0.2)).abs() < 1e-15);
        assert!((lambdas[0] - 0.3482).abs() < 1e-4);

        let mut weights = vec![0.0; 8];
        weights[7] = 0.1;
        weights[0] = 0.9;
        let m3 = MixtureParams::from_values(3, weights, &[1.0; 8]).unwrap();
        let lambdas = m3.tail_coefficients().unwrap();
        assert!((lambdas[7] - 0.1 * (2.0 / 3.0)).abs() < 1e-15);
        assert_eq!(lambdas[1], 0.0);
    }

    #[test]
    fn sampling_recovers_weights_and_tau() {
        let params = benchmark();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let (points, labels) = params.sample(n, &mut rng).unwrap();

        for (idx, &w) in params.weights().iter().enumerate() {
            let freq =
                labels.iter().filter(|j| j.index() == idx).count() as f64 / n as f64;
            let se = (w * (1.0 - w) / n as f64).sqrt();
            assert!(
                (freq - w).abs() < 3.0 * se + 1e-9,
                "component {idx}: freq {freq} vs weight {w}"
            );
        }

        let xs: Vec<f64> = points.iter().map(|p| p.coords()[0]).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.coords()[1]).collect();
        let tau = empirical_kendall_tau(&xs, &ys);
        assert!(
            (tau - params.kendall_tau()).abs() < 0.02,
            "tau {tau} vs {}",
            params.kendall_tau()
        );
    }

    #[test]
    fn degenerate_sampling_keeps_one_label() {
        let params = MixtureParams::single(2, 2, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (_, labels) = params.sample(500, &mut rng).unwrap();
        assert!(labels.iter().all(|j| j.index() == 2));
    }

    #[test]
    fn conditional_cdf_independence_returns_target() {
        let params = MixtureParams::from_values(2, vec![0.25; 4], &[0.0; 4]).unwrap();
        for v in [0.1, 0.4, 0.9] {
            let c = params.conditional_cdf(v, 0.6).unwrap();
            assert!((c - v).abs() < 1e-9, "v={v}: got {c}");
        }
    }

    #[test]
    fn conditional_cdf_monotone_and_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for trial in 0..4 {
            let params = if trial == 0 {
                benchmark()
            } else {
                let raw: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() + 0.05).collect();
                let total: f64 = raw.iter().sum();
                let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
                let thetas: Vec<f64> = (0..4).map(|_| 8.0 * rng.gen::<f64>()).collect();
                MixtureParams::from_values(2, weights, &thetas).unwrap()
            };
            let w = 0.1 + 0.8 * rng.gen::<f64>();
            let mut prev = -1.0;
            for k in 1..1000 {
                let v = k as f64 / 1000.0;
                let c = params.conditional_cdf(v, w).unwrap();
                assert!(c >= prev - 1e-12, "trial {trial}: not monotone at v={v}");
                prev = c;
            }
        }
        let params = benchmark();
        let w = 0.35;
        // Finite difference of the mixture CDF in the conditioning argument.
        let h = 1e-5;
        for v in [0.2, 0.5, 0.8] {
            let fd = (params.cdf(&point(&[w + h, v])).unwrap()
                - params.cdf(&point(&[w - h, v])).unwrap())
                / (2.0 * h);
            let c = params.conditional_cdf(v, w).unwrap();
            assert!((c - fd).abs() < 1e-5, "v={v}: {c} vs fd {fd}");
        }
    }

    #[test]
    fn conditional_cdf_rejects_higher_dimensions() {
        let params = MixtureParams::from_values(3, vec![0.125; 8], &[1.0; 8]).unwrap();
        assert!(matches!(
            params.conditional_cdf(0.5, 0.5),
            Err(Error::UnsupportedDimension(_))
        ));
    }

    #[test]
    fn conditional_quantile_inversion_roundtrip() {
        let params = benchmark();
        let w = 0.55;
        for v in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let target = params.conditional_cdf(v, w).unwrap();
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if params.conditional_cdf(mid, w).unwrap() < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let inv = 0.5 * (lo + hi);
            assert!((inv - v).abs() < 1e-6, "v={v}: inverted {inv}");
        }
    }

    #[test]
    fn predictive_mean_independence_is_half() {
        let params = MixtureParams::from_values(2, vec![0.25; 4], &[0.0; 4]).unwrap();
        let m = params.predictive_mean(0.77).unwrap();
        assert!((m - 0.5).abs() < 1e-12, "got {m}");
    }

    #[test]
    fn predictive_mean_tracks_strong_dependence() {
        // Monte-Carlo oracle: conditional mean from samples restricted to a
        // narrow band around the conditioning value.
        let params = MixtureParams::single(2, 0, 50.0).unwrap();
        let m = params.predictive_mean(0.3).unwrap();
        assert!((m - 0.3).abs() < 0.02, "got {m}");

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (points, _) = params.sample(400_000, &mut rng).unwrap();
        let band: Vec<f64> = points
            .iter()
            .filter(|p| (p.coords()[0] - 0.3).abs() < 0.01)
            .map(|p| p.coords()[1])
            .collect();
        assert!(band.len() > 1000);
        let mc = crate::stats::mean(&band);
        assert!((m - mc).abs() < 0.01, "quadrature {m} vs MC {mc}");
    }

    #[test]
    fn predictive_mean_reflection_symmetry() {
        let params =
            MixtureParams::from_values(2, vec![0.5, 0.0, 0.0, 0.5], &[3.0, 1.0, 1.0, 3.0]).unwrap();
        for u in [0.2, 0.35, 0.6] {
            let a = params.predictive_mean(u).unwrap();
            let b = params.predictive_mean(1.0 - u).unwrap();
            assert!((a + b - 1.0).abs() < 1e-9, "u={u}: {a} + {b}");
        }
    }

    #[test]
    fn tail_coefficients_permutation_consistent() {
        let weights = vec![0.3, 0.1, 0.05, 0.05, 0.2, 0.1, 0.1, 0.1];
        let thetas = [1.0, 2.0, 0.5, 1.5, 3.0, 2.5, 0.7, 1.2];
        let params = MixtureParams::from_values(3, weights.clone(), &thetas).unwrap();
        let lambdas = params.tail_coefficients().unwrap();

        let perm = [2usize, 0, 1];
        let mut p_weights = vec![0.0; 8];
        let mut p_thetas = vec![0.0; 8];
        for j in RotationIndex::all(3) {
            let pj = j.permuted(&perm).unwrap();
            p_weights[pj.index()] = weights[j.index()];
            p_thetas[pj.index()] = thetas[j.index()];
        }
        let permuted = MixtureParams::from_values(3, p_weights, &p_thetas).unwrap();
        let p_lambdas = permuted.tail_coefficients().unwrap();
        for j in RotationIndex::all(3) {
            let pj = j.permuted(&perm).unwrap();
            assert!((lambdas[j.index()] - p_lambdas[pj.index()]).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn prop_box_masses_nonnegative(
            w0 in 0.0f64..1.0, w1 in 0.0f64..1.0, w2 in 0.0f64..1.0, w3 in 0.0f64..1.0,
            t0 in 0.0f64..8.0, t1 in 0.0f64..8.0, t2 in 0.0f64..8.0, t3 in 0.0f64..8.0,
            a1 in 0.05f64..0.9, d1 in 0.05f64..0.5,
            a2 in 0.05f64..0.9, d2 in 0.05f64..0.5,
        ) {
            let total = w0 + w1 + w2 + w3 + 1e-12;
            let weights: Vec<f64> = [w0, w1, w2, w3].iter().map(|w| (w + 0.25e-12) / total).collect();
            let params = MixtureParams::from_values(2, weights, &[t0, t1, t2, t3]).unwrap();
            let (b1, b2) = (a1 + d1.min(0.99 - a1), a2 + d2.min(0.99 - a2));
            let mass = params.cdf(&point(&[b1, b2])).unwrap()
                - params.cdf(&point(&[a1, b2])).unwrap()
                - params.cdf(&point(&[b1, a2])).unwrap()
                + params.cdf(&point(&[a1, a2])).unwrap();
            prop_assert!(mass > -1e-10, "box mass {}", mass);
        }

        #[test]
        fn prop_tail_coefficients_sum_below_one(
            w0 in 0.0f64..1.0, w1 in 0.0f64..1.0, w2 in 0.0f64..1.0, w3 in 0.0f64..1.0,
            t0 in 0.1f64..20.0, t1 in 0.1f64..20.0, t2 in 0.1f64..20.0, t3 in 0.1f64..20.0,
        ) {
            let total = w0 + w1 + w2 + w3 + 1e-12;
            let weights: Vec<f64> = [w0, w1, w2, w3].iter().map(|w| (w + 0.25e-12) / total).collect();
            let params = MixtureParams::from_values(2, weights, &[t0, t1, t2, t3]).unwrap();
            let sum: f64 = params.tail_coefficients().unwrap().iter().sum();
            prop_assert!(sum <= 1.0 + 1e-12);
        }

        #[test]
        fn prop_mixture_margins_uniform(
            mask in 0usize..4,
            th in 0.1f64..10.0,
            u in 0.05f64..0.95,
        ) {
            let params = MixtureParams::single(2, mask, th).unwrap();
            let c1 = params.cdf(&point(&[u, 1.0])).unwrap();
            let c2 = params.cdf(&point(&[1.0, u])).unwrap();
            prop_assert!((c1 - u).abs() < 1e-8);
            prop_assert!((c2 - u).abs() < 1e-8);
        }
    }
}
