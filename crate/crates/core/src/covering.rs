//! The covering map `tau: TP -> P(C^n)^×`, `[u]_p -> [sqrt(p_j) e^{i u_j / 2}]`,
//! its deck group `Z^{n-1}`, its differential, and the pullback identities
//! relating `(G, Omega, J)` to the Fubini-Study structure.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::DEFAULT_FD_STEP;
use crate::dombrowski::{
    phi_inverse_curve, split_form_omega, split_j, split_metric_g, SplitDoubleTangent,
};
use crate::error::{Error, Result};
use crate::projective::{chart_forward, fubini_study, hermitian, j_fs, ProjectivePoint, ProjectiveTangent};
use crate::simplex::{center, derive_seed, random_point, random_tangent, sample_seed, TangentVector};

/// Invariant ids checked by the verify suite.
pub const INVARIANTS: &[&str] = &[
    "covering.deck_invariance",
    "covering.local_injectivity",
    "covering.pairing",
    "covering.orthogonality",
    "covering.commutation",
];

/// An element `k ∈ Z^{n-1}` of the deck group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DeckElement {
    pub k: Vec<i64>,
}

impl DeckElement {
    pub fn new(k: Vec<i64>) -> Self {
        Self { k }
    }

    pub fn identity(n: usize) -> Self {
        Self { k: vec![0; n - 1] }
    }

    pub fn is_identity(&self) -> bool {
        self.k.iter().all(|&k| k == 0)
    }
}

/// `tau([u]_p) = [sqrt(p_1) e^{i u_1/2}, ..., sqrt(p_n) e^{i u_n/2}]`, with
/// exactly that representative.
pub fn tau(x: &TangentVector) -> ProjectivePoint {
    let z = x
        .base()
        .weights()
        .iter()
        .zip(x.components())
        .map(|(p, u)| Complex64::from_polar(p.sqrt(), 0.5 * u))
        .collect();
    ProjectivePoint::new(z).expect("weights sum to one")
}

/// Shifts `u_i` by `4 pi k_i` for `i < n` and recenters. Recentering only
/// changes `tau` by a global phase.
pub fn deck_action(k: &DeckElement, x: &TangentVector) -> Result<TangentVector> {
    if k.k.len() + 1 != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len() - 1,
            found: k.k.len(),
        });
    }
    let raw: Vec<f64> = x
        .components()
        .iter()
        .enumerate()
        .map(|(i, u)| u + k.k.get(i).map_or(0.0, |&ki| 4.0 * PI * ki as f64))
        .collect();
    center(x.base(), &raw)
}

/// Analytic differential in the chart centered at `z = tau([u]_p)`:
/// `xi_j = (1/2) sqrt(p_j) e^{i u_j / 2} (v_j + i w_j)`.
pub fn tau_pushforward(x: &SplitDoubleTangent) -> ProjectiveTangent {
    let z = tau(x.foot());
    let xi = z
        .representative()
        .iter()
        .zip(x.horizontal().components().iter().zip(x.vertical().components()))
        .map(|(zj, (v, w))| 0.5 * zj * Complex64::new(*v, *w))
        .collect();
    ProjectiveTangent::new(z, xi).expect("centered v and w make xi orthogonal to z")
}

/// Central-difference differential of `phi_z ∘ tau` along the curve
/// returned by [`phi_inverse_curve`].
pub fn tau_pushforward_fd(x: &SplitDoubleTangent, h: f64) -> Result<ProjectiveTangent> {
    let z = tau(x.foot());
    let gamma = phi_inverse_curve(x);
    let at = |t: f64| -> Result<Vec<Complex64>> { chart_forward(&z, &tau(&gamma.at(t)?)) };
    let plus = at(h)?;
    let minus = at(-h)?;
    let mut xi: Vec<Complex64> = plus
        .iter()
        .zip(&minus)
        .map(|(a, b)| (a - b) / (2.0 * h))
        .collect();
    // The chart takes values in z^⊥; remove the rounding residue of the quotient.
    let overlap = hermitian(z.representative(), &xi);
    xi.iter_mut()
        .zip(z.representative())
        .for_each(|(x, zj)| *x -= overlap * zj);
    ProjectiveTangent::new(z, xi)
}

/// How [`verify_pullback`] obtains `tau_*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PushforwardMode {
    Analytic,
    FiniteDifference { h: f64 },
}

impl PushforwardMode {
    pub fn fd() -> Self {
        PushforwardMode::FiniteDifference { h: DEFAULT_FD_STEP }
    }

    pub fn pushforward(&self, x: &SplitDoubleTangent) -> Result<ProjectiveTangent> {
        match *self {
            PushforwardMode::Analytic => Ok(tau_pushforward(x)),
            PushforwardMode::FiniteDifference { h } => tau_pushforward_fd(x, h),
        }
    }
}

/// Absolute residuals of `tau^* g_FS = G`, `tau^* omega_FS = Omega` and
/// `tau_* J = J_FS tau_*` (largest componentwise modulus).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PullbackResiduals {
    pub metric: f64,
    pub symplectic: f64,
    pub complex_structure: f64,
}

impl PullbackResiduals {
    pub fn max(self, other: Self) -> Self {
        Self {
            metric: self.metric.max(other.metric),
            symplectic: self.symplectic.max(other.symplectic),
            complex_structure: self.complex_structure.max(other.complex_structure),
        }
    }
}

/// Compares both sides of the three pullback identities for `x`, `y` over a common foot.
pub fn verify_pullback(
    x: &SplitDoubleTangent,
    y: &SplitDoubleTangent,
    mode: PushforwardMode,
) -> Result<PullbackResiduals> {
    let g = split_metric_g(x, y)?;
    let omega = split_form_omega(x, y)?;
    let tx = mode.pushforward(x)?;
    let ty = mode.pushforward(y)?;
    let z = tx.base().clone();
    let (g_fs, omega_fs) = fubini_study(&z, &tx, &ty)?;
    let tjx = mode.pushforward(&split_j(x))?;
    Ok(PullbackResiduals {
        metric: (g_fs - g).abs(),
        symplectic: (omega_fs - omega).abs(),
        complex_structure: tjx.sup_distance(&j_fs(&tx)),
    })
}

/// `|<tau_* x, tau_* y> - (G(x,y) + i Omega(x,y))|` with the analytic pushforward.
pub fn pairing_residual(x: &SplitDoubleTangent, y: &SplitDoubleTangent) -> Result<f64> {
    let lhs = hermitian(tau_pushforward(x).vector(), tau_pushforward(y).vector());
    let rhs = Complex64::new(split_metric_g(x, y)?, split_form_omega(x, y)?);
    Ok((lhs - rhs).norm())
}

/// Two double tangents over a common random foot; every component is a
/// centered standard normal vector.
pub fn random_split_pair(n: usize, seed: u64) -> (SplitDoubleTangent, SplitDoubleTangent) {
    let p = random_point(n, derive_seed(seed, 0));
    let foot = random_tangent(&p, derive_seed(seed, 1));
    let mk = |a: u64, b: u64| {
        SplitDoubleTangent::new(
            foot.clone(),
            random_tangent(&p, derive_seed(seed, a)),
            random_tangent(&p, derive_seed(seed, b)),
        )
        .expect("common base")
    };
    (mk(2, 3), mk(4, 5))
}

/// Largest residuals over `samples` random pairs; sample `i` is seeded with
/// `sample_seed(seed, i)` so the result does not depend on scheduling.
pub fn verify_pullback_batch(
    n: usize,
    samples: u64,
    seed: u64,
    mode: PushforwardMode,
) -> Result<PullbackResiduals> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let (x, y) = random_split_pair(n, sample_seed(seed, i));
            verify_pullback(&x, &y, mode)
        })
        .try_reduce(PullbackResiduals::default, |a, b| Ok(a.max(b)))
}
