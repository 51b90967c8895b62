//! Rotated Clayton copula primitives.
//!
//! An m-variate copula can be relocated to any of the 2^m corners of the unit
//! hypercube by flipping a subset of coordinates, u_l -> 1 - u_l. Corners are
//! identified by a binary index with one bit per coordinate. The rotated CDF
//! is assembled by inclusion-exclusion over lower-dimensional Clayton margins
//! (Clayton margins are again Clayton with the same parameter), while the
//! rotated density is simply the base density evaluated at the flipped point,
//! the coordinate flips having unit Jacobian.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{Error, Result};

/// Dependence parameters below this threshold are treated as exact
/// independence, avoiding the 1/theta blow-up in the Clayton generator.
pub const THETA_INDEPENDENCE_EPS: f64 = 1e-6;

/// Coordinates are clamped into [UNIT_CLAMP, 1 - UNIT_CLAMP]; the density
/// factor u^(-theta-1) diverges at 0.
pub const UNIT_CLAMP: f64 = 1e-10;

/// Largest supported dimension (the mixture has 2^m components).
pub const MAX_DIM: usize = 16;

/// Binary corner/rotation index of the unit hypercube.
///
/// Bit `l` selects the lower (0) or upper (1) corner for coordinate `l`. The
/// canonical ordering counts the first coordinate fastest, so for m = 2 the
/// sequence is 00, 10, 01, 11 and `index()` gives the position in that list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RotationIndex {
    mask: u32,
    dim: usize,
}

impl RotationIndex {
    /// Builds an index from explicit 0/1 flags, one per coordinate.
    pub fn new(bits: &[u8]) -> Result<Self> {
        if bits.len() < 2 || bits.len() > MAX_DIM {
            return Err(Error::UnsupportedDimension(format!(
                "rotation index needs 2..={} bits, got {}",
                MAX_DIM,
                bits.len()
            )));
        }
        let mut mask = 0u32;
        for (l, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => mask |= 1 << l,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "rotation bit {l} must be 0 or 1, got {other}"
                    )))
                }
            }
        }
        Ok(Self {
            mask,
            dim: bits.len(),
        })
    }

    /// Builds the index at a canonical position in 0..2^dim.
    pub fn from_index(index: usize, dim: usize) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::UnsupportedDimension(format!(
                "dimension must be 2..={MAX_DIM}, got {dim}"
            )));
        }
        if index >= (1usize << dim) {
            return Err(Error::InvalidParameter(format!(
                "rotation index {index} out of range for dimension {dim}"
            )));
        }
        Ok(Self {
            mask: index as u32,
            dim,
        })
    }

    /// The identity (no-flip) rotation.
    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_index(0, dim)
    }

    /// All 2^dim rotations in canonical order.
    pub fn all(dim: usize) -> impl Iterator<Item = RotationIndex> {
        (0..(1usize << dim)).map(move |i| RotationIndex {
            mask: i as u32,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical position of this rotation (binary counting, first bit fastest).
    pub fn index(&self) -> usize {
        self.mask as usize
    }

    /// Whether coordinate `l` is flipped to its upper corner.
    pub fn bit(&self, l: usize) -> bool {
        debug_assert!(l < self.dim);
        self.mask >> l & 1 == 1
    }

    /// Number of flipped coordinates.
    pub fn ones(&self) -> u32 {
        self.mask.count_ones()
    }

    /// (-1)^(number of flips); drives the sign of Kendall's tau.
    pub fn parity_sign(&self) -> f64 {
        if self.ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Applies the coordinate flips to a point of matching dimension.
    pub fn flip(&self, coords: &[f64]) -> Vec<f64> {
        debug_assert_eq!(coords.len(), self.dim);
        coords
            .iter()
            .enumerate()
            .map(|(l, &u)| if self.bit(l) { 1.0 - u } else { u })
            .collect()
    }

    /// Re-indexes the bits under a coordinate permutation: bit `l` of the
    /// result is bit `perm[l]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: perm.len(),
            });
        }
        let mut mask = 0u32;
        for (l, &src) in perm.iter().enumerate() {
            if self.bit(src) {
                mask |= 1 << l;
            }
        }
        Ok(Self {
            mask,
            dim: self.dim,
        })
    }
}

impl fmt::Display for RotationIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 0..self.dim {
            write!(f, "{}", u8::from(self.bit(l)))?;
        }
        Ok(())
    }
}

/// Clayton dependence intensity, theta >= 0.
///
/// Values below [`THETA_INDEPENDENCE_EPS`] evaluate as the independence
/// copula. Samplers restrict theta to a compact range (see [`ThetaRange`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaytonTheta(f64);

impl ClaytonTheta {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("theta = {value}")));
        }
        if value < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "theta must be nonnegative, got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// True when the parameter falls in the independence branch.
    pub fn is_independent(&self) -> bool {
        self.0 < THETA_INDEPENDENCE_EPS
    }
}

/// Compact restriction on theta used by the posterior sampler.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ThetaRange {
    pub min: f64,
    pub max: f64,
}

impl ThetaRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min <= 0.0 || min >= max {
            return Err(Error::InvalidParameter(format!(
                "theta range requires 0 < min < max, got [{min}, {max}]"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.min && value <= self.max
    }

    pub fn clamp(&self, value: f64) -> f64 {
        value.clamp(self.min, self.max)
    }
}

impl Default for ThetaRange {
    fn default() -> Self {
        Self {
            min: 1e-4,
            max: 50.0,
        }
    }
}

/// A point in the open unit hypercube, clamped away from the faces.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitPoint {
    coords: Vec<f64>,
}

impl UnitPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::UnsupportedDimension(
                "unit point needs at least one coordinate".into(),
            ));
        }
        for (l, &u) in coords.iter().enumerate() {
            if !u.is_finite() {
                return Err(Error::NonFinite(format!("coordinate {l} = {u}")));
            }
            if !(0.0..=1.0).contains(&u) {
                return Err(Error::InvalidParameter(format!(
                    "coordinate {l} = {u} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            coords: coords
                .into_iter()
                .map(|u| u.clamp(UNIT_CLAMP, 1.0 - UNIT_CLAMP))
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Clamps a scalar into the open unit interval.
pub(crate) fn clamp_unit(u: f64) -> f64 {
    u.clamp(UNIT_CLAMP, 1.0 - UNIT_CLAMP)
}

/// log of S(u) = sum_l u_l^(-theta) - (m - 1), the Clayton generator sum.
///
/// Uses expm1 for accuracy near u = 1 and falls back to a max-shifted
/// log-space evaluation when u^(-theta) overflows.
fn clayton_ln_s(coords: &[f64], theta: f64) -> f64 {
    let mut s1 = 0.0f64; // S - 1
    for &u in coords {
        s1 += f64::exp_m1(-theta * u.ln());
    }
    if s1.is_finite() {
        return s1.ln_1p();
    }
    let xs: Vec<f64> = coords.iter().map(|&u| -theta * u.ln()).collect();
    let x_max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = 0.0f64;
    for &x in &xs {
        acc += (x - x_max).exp();
    }
    acc -= (coords.len() as f64 - 1.0) * (-x_max).exp();
    x_max + acc.ln()
}

/// Clayton CDF on a raw coordinate slice; empty slices evaluate to 1 and a
/// single coordinate to itself, which is what the inclusion-exclusion over
/// margins expects.
fn clayton_cdf_coords(coords: &[f64], theta: f64) -> f64 {
    match coords.len() {
        0 => return 1.0,
        1 => return coords[0],
        _ => {}
    }
    if theta < THETA_INDEPENDENCE_EPS {
        return coords.iter().product();
    }
    (-clayton_ln_s(coords, theta) / theta).exp()
}

fn clayton_log_density_coords(coords: &[f64], theta: f64) -> f64 {
    let m = coords.len();
    if theta < THETA_INDEPENDENCE_EPS {
        return 0.0;
    }
    let ln_s = clayton_ln_s(coords, theta);
    let mut log_f = (-1.0 / theta - m as f64) * ln_s;
    for (i, &u) in coords.iter().enumerate() {
        log_f += (1.0 + i as f64 * theta).ln();
        log_f += (-theta - 1.0) * u.ln();
    }
    log_f
}

fn check_dims(j: &RotationIndex, u: &UnitPoint) -> Result<()> {
    if j.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: j.dim(),
            got: u.dim(),
        });
    }
    Ok(())
}

/// Multivariate Clayton CDF, {sum_l (u_l^(-theta) - 1) + 1}^(-1/theta).
pub fn clayton_cdf(u: &UnitPoint, theta: ClaytonTheta) -> f64 {
    clayton_cdf_coords(u.coords(), theta.value())
}

/// Log Clayton density.
///
/// Computed entirely in log space; a non-finite value signals underflow at
/// the hypercube boundary and is reported as an error rather than silently
/// returned.
pub fn clayton_log_density(u: &UnitPoint, theta: ClaytonTheta) -> Result<f64> {
    let log_f = clayton_log_density_coords(u.coords(), theta.value());
    if log_f.is_finite() {
        Ok(log_f)
    } else {
        Err(Error::BoundaryUnderflow(format!(
            "clayton log density non-finite at {:?}, theta = {}",
            u.coords(),
            theta.value()
        )))
    }
}

/// Clayton density, exp of [`clayton_log_density`].
pub fn clayton_density(u: &UnitPoint, theta: ClaytonTheta) -> Result<f64> {
    clayton_log_density(u, theta).map(f64::exp)
}

/// CDF of the Clayton copula rotated to corner `j`.
///
/// Inclusion-exclusion over the subsets of flipped coordinates, each term a
/// lower-dimensional Clayton margin evaluated at the flipped point.
pub fn rotated_cdf(j: &RotationIndex, u: &UnitPoint, theta: ClaytonTheta) -> Result<f64> {
    check_dims(j, u)?;
    let flipped = j.flip(u.coords());
    let th = theta.value();
    let ones_mask = j.index() as u32;
    let m = j.dim();

    let mut total = 0.0f64;
    let mut kept = Vec::with_capacity(m);
    let mut sub = ones_mask;
    loop {
        kept.clear();
        for (l, &v) in flipped.iter().enumerate() {
            if ones_mask >> l & 1 == 0 || sub >> l & 1 == 1 {
                kept.push(v);
            }
        }
        let sign = if sub.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * clayton_cdf_coords(&kept, th);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & ones_mask;
    }
    Ok(total.clamp(0.0, 1.0))
}

/// Log density of the rotated copula: the base log density at the flipped
/// point (coordinate flips have unit Jacobian).
pub fn rotated_log_density(j: &RotationIndex, u: &UnitPoint, theta: ClaytonTheta) -> Result<f64> {
    check_dims(j, u)?;
    let flipped = j.flip(u.coords());
    let log_f = clayton_log_density_coords(&flipped, theta.value());
    if log_f.is_finite() {
        Ok(log_f)
    } else {
        Err(Error::BoundaryUnderflow(format!(
            "rotated log density non-finite at {:?}, rotation {}, theta = {}",
            u.coords(),
            j,
            theta.value()
        )))
    }
}

/// Density of the rotated copula.
pub fn rotated_density(j: &RotationIndex, u: &UnitPoint, theta: ClaytonTheta) -> Result<f64> {
    rotated_log_density(j, u, theta).map(f64::exp)
}

/// Tail dependence coefficient of rotation `j_rotation` at corner `j_corner`.
///
/// Non-zero only when the corner matches the rotation, in which case the
/// Clayton value is (m/(m-1))^(-1/theta): 2^(-1/theta) for m = 2 and
/// (3/2)^(-1/theta) for m = 3.
pub fn tail_coefficient(
    j_corner: &RotationIndex,
    j_rotation: &RotationIndex,
    theta: ClaytonTheta,
) -> Result<f64> {
    if j_corner.dim() != j_rotation.dim() {
        return Err(Error::DimensionMismatch {
            expected: j_corner.dim(),
            got: j_rotation.dim(),
        });
    }
    if theta.value() <= 0.0 {
        return Err(Error::UndefinedTailCoefficient(theta.value()));
    }
    if j_corner != j_rotation {
        return Ok(0.0);
    }
    let m = j_corner.dim() as f64;
    Ok((m / (m - 1.0)).powf(-1.0 / theta.value()))
}

/// Pairwise Kendall's tau contributed by rotation `j`:
/// (-1)^(number of flips) * theta / (2 + theta).
pub fn kendall_tau_component(j: &RotationIndex, theta: ClaytonTheta) -> f64 {
    let th = theta.value();
    if th < THETA_INDEPENDENCE_EPS {
        return 0.0;
    }
    j.parity_sign() * th / (2.0 + th)
}

/// Draws `n` points from the rotated Clayton copula.
///
/// Frailty construction: V ~ Gamma(1/theta, rate 1), E_l iid standard
/// exponential, U_l = (1 + E_l / V)^(-1/theta), then flip the coordinates
/// selected by `j`. Below the independence threshold the coordinates are
/// independent uniforms.
pub fn sample_rotated<R: Rng + ?Sized>(
    j: &RotationIndex,
    theta: ClaytonTheta,
    n: usize,
    rng: &mut R,
) -> Result<Vec<UnitPoint>> {
    let m = j.dim();
    let th = theta.value();
    let mut out = Vec::with_capacity(n);
    if th < THETA_INDEPENDENCE_EPS {
        for _ in 0..n {
            let coords: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
            out.push(UnitPoint::new(coords)?);
        }
        return Ok(out);
    }
    let frailty = Gamma::new(1.0 / th, 1.0)
        .map_err(|e| Error::InvalidParameter(format!("frailty gamma: {e}")))?;
    for _ in 0..n {
        let v: f64 = frailty.sample(rng).max(f64::MIN_POSITIVE);
        let mut coords = Vec::with_capacity(m);
        for l in 0..m {
            let e: f64 = Exp1.sample(rng);
            let mut u = (1.0 + e / v).powf(-1.0 / th);
            if j.bit(l) {
                u = 1.0 - u;
            }
            coords.push(u);
        }
        out.push(UnitPoint::new(coords)?);
    }
    Ok(out)
}
