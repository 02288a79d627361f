//! The open probability simplex, its tangent spaces in the exponential
//! representation, and the Fisher metric.
//!
//! A tangent vector at `p` is stored as a vector `u` with `E_p(u) = 0`; the
//! corresponding velocity of a curve through `p` is `dp_i/dt = p_i u_i`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Invariant ids checked by the verify suite.
pub const INVARIANTS: &[&str] = &[
    "simplex.distribution_valid",
    "simplex.fisher_positive",
    "simplex.fisher_symmetric",
    "simplex.fisher_bilinear",
    "simplex.center_projection",
];

/// Absolute tolerance on `|sum(p) - 1|` accepted at construction.
pub const SUM_TOL: f64 = 1e-12;
/// Componentwise tolerance for deciding that two distributions are the same point.
pub const BASE_TOL: f64 = 1e-12;
/// Tolerance on `E_p(u)`, relative to `max(1, max |u_i|)`.
pub const CENTER_TOL: f64 = 1e-12;
/// Lower clamp applied to the positive variates drawn by [`random_point`].
pub const RANDOM_POINT_FLOOR: f64 = 1e-6;
/// Condition number above which [`fisher_gram`] rejects a basis.
pub const GRAM_MAX_CONDITION: f64 = 1e12;

/// A strictly positive probability vector on `n >= 2` outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution {
    weights: Arc<[f64]>,
}

impl Distribution {
    /// Validates `weights` without repairing them.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::TooFewOutcomes(weights.len()));
        }
        for (index, &value) in weights.iter().enumerate() {
            // `!(value > 0)` also rejects NaN.
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveWeight { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self {
            weights: weights.into(),
        })
    }

    /// Divides positive weights by their sum.
    pub fn normalize(weights: &[f64]) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::TooFewOutcomes(weights.len()));
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveWeight { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        Self::new(weights.iter().map(|w| w / sum).collect())
    }

    /// The uniform distribution on `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewOutcomes(n));
        }
        Self::normalize(&vec![1.0; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Componentwise equality within [`BASE_TOL`].
    pub fn same_point(&self, other: &Distribution) -> bool {
        Arc::ptr_eq(&self.weights, &other.weights)
            || (self.len() == other.len()
                && self
                    .weights
                    .iter()
                    .zip(other.weights.iter())
                    .all(|(a, b)| (a - b).abs() <= BASE_TOL))
    }

    pub fn expectation(&self, x: &[f64]) -> Result<f64> {
        expectation(self, x)
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;

    fn try_from(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(p: Distribution) -> Self {
        p.weights.to_vec()
    }
}

/// A tangent vector `[u]_p` in the exponential representation.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Distribution,
    components: Vec<f64>,
}

impl TangentVector {
    /// Validates that `components` satisfies `E_p(u) = 0`.
    pub fn new(base: Distribution, components: Vec<f64>) -> Result<Self> {
        check_len(&base, components.len())?;
        let mean = mean_of(&base, &components);
        let scale = components.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
        if !(mean.abs() <= CENTER_TOL * scale) {
            return Err(Error::NotCentered { mean });
        }
        Ok(Self { base, components })
    }

    pub fn zero(base: &Distribution) -> Self {
        Self {
            components: vec![0.0; base.len()],
            base: base.clone(),
        }
    }

    pub fn base(&self) -> &Distribution {
        &self.base
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<f64> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &TangentVector) -> Result<TangentVector> {
        self.require_same_base(other)?;
        Ok(Self {
            base: self.base.clone(),
            components: zip_map(&self.components, &other.components, |a, b| a + b),
        })
    }

    pub fn sub(&self, other: &TangentVector) -> Result<TangentVector> {
        self.require_same_base(other)?;
        Ok(Self {
            base: self.base.clone(),
            components: zip_map(&self.components, &other.components, |a, b| a - b),
        })
    }

    pub fn scale(&self, factor: f64) -> TangentVector {
        Self {
            base: self.base.clone(),
            components: self.components.iter().map(|c| c * factor).collect(),
        }
    }

    /// Largest absolute component.
    pub fn sup_norm(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest absolute componentwise difference; the base points must agree.
    pub fn sup_distance(&self, other: &TangentVector) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    pub(crate) fn require_same_base(&self, other: &TangentVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        if !self.base.same_point(&other.base) {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(base: Distribution, components: Vec<f64>) -> Self {
        Self { base, components }
    }
}

impl Serialize for TangentVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.components.serialize(s)
    }
}

fn check_len(p: &Distribution, len: usize) -> Result<()> {
    if p.len() != len {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: len,
        });
    }
    Ok(())
}

fn mean_of(p: &Distribution, x: &[f64]) -> f64 {
    p.weights().iter().zip(x).map(|(pi, xi)| pi * xi).sum()
}

fn zip_map(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// `E_p(x) = sum_i p_i x_i`.
pub fn expectation(p: &Distribution, x: &[f64]) -> Result<f64> {
    check_len(p, x.len())?;
    Ok(mean_of(p, x))
}

/// Projects a raw vector onto `T_p` by subtracting `E_p(raw)` from every component.
pub fn center(p: &Distribution, raw: &[f64]) -> Result<TangentVector> {
    check_len(p, raw.len())?;
    let mean = mean_of(p, raw);
    let mut components: Vec<f64> = raw.iter().map(|x| x - mean).collect();
    // A second pass removes the rounding residue of the first one.
    let residue = mean_of(p, &components);
    if residue != 0.0 {
        components.iter_mut().for_each(|c| *c -= residue);
    }
    Ok(TangentVector::from_parts_unchecked(p.clone(), components))
}

/// Fisher metric `(1/4) sum_k p_k u_k v_k`.
pub fn fisher_metric(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    u.require_same_base(v)?;
    let p = u.base.weights();
    let s: f64 = (0..p.len())
        .map(|k| p[k] * u.components[k] * v.components[k])
        .sum();
    Ok(0.25 * s)
}

/// Gram matrix of the Fisher metric on `basis`, all vectors based at `p`.
pub fn fisher_gram(p: &Distribution, basis: &[TangentVector]) -> Result<DMatrix<f64>> {
    let k = basis.len();
    for b in basis {
        check_len(p, b.len())?;
        if !b.base.same_point(p) {
            return Err(Error::BaseMismatch);
        }
    }
    let mut gram = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let g = fisher_metric(&basis[i], &basis[j])?;
            gram[(i, j)] = g;
            gram[(j, i)] = g;
        }
    }
    if k > 0 {
        let eig = gram.clone().symmetric_eigen();
        let max = eig.eigenvalues.max();
        let min = eig.eigenvalues.min();
        let condition = if min > 0.0 { max / min } else { f64::INFINITY };
        if !(condition <= GRAM_MAX_CONDITION) {
            return Err(Error::SingularBasis { condition });
        }
    }
    Ok(gram)
}

/// Tangent basis `center(p, e_k)` for `k < n - 1`.
pub fn coordinate_basis(p: &Distribution) -> Vec<TangentVector> {
    let n = p.len();
    (0..n - 1)
        .map(|k| {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            center(p, &e).expect("length matches")
        })
        .collect()
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sample `index` in a batch seeded with `seed` (`seed XOR index`, then mixed).
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ index)
}

/// Independent sub-stream `stream` of `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed.wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03)))
}

/// A point drawn from the flat Dirichlet distribution, with every `Exp(1)`
/// variate clamped to `[RANDOM_POINT_FLOOR, inf)` before normalization.
///
/// Every weight is therefore at least `RANDOM_POINT_FLOOR / (n * max_variate)`.
///
/// Panics if `n < 2`.
pub fn random_point(n: usize, seed: u64) -> Distribution {
    assert!(n >= 2, "random_point needs n >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let variates: Vec<f64> = (0..n)
        .map(|_| {
            let x: f64 = Exp1.sample(&mut rng);
            x.max(RANDOM_POINT_FLOOR)
        })
        .collect();
    Distribution::normalize(&variates).expect("clamped variates are positive")
}

/// Standard normal components, centered at `p`.
pub fn random_tangent(p: &Distribution, seed: u64) -> TangentVector {
    center(p, &random_raw(p.len(), seed)).expect("length matches")
}

/// `n` standard normal variates.
pub fn random_raw(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}
