//! Randomized verification suites and their JSON reports.
//!
//! Every check runs `samples` independent configurations per dimension. Sample
//! `i` for dimension `n` is seeded with `sample_seed(derive_seed(seed, n), i)`,
//! so results do not depend on how rayon schedules the samples.

mod checks;

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connections::{exponential_geodesic, geodesic, mixture_geodesic, Alpha, SampledCurve};
use crate::covering::{verify_pullback_batch, PushforwardMode};
use crate::error::{Error, Result};
use crate::natgrad::{descend, Trace};
use crate::simplex::{derive_seed, random_point, sample_seed, Distribution, TangentVector};

/// Admissible dimensions for [`run_verify`].
pub const N_RANGE: (usize, usize) = (2, 64);
pub const DEFAULT_N_LIST: [usize; 4] = [2, 3, 5, 8];
pub const DEFAULT_SAMPLES: u64 = 1000;
pub const DEFAULT_SEED: u64 = 42;

/// Base tolerance of every check and report record, before `tol_scale`.
/// Indicator checks (error 0 or 1) use 0.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("simplex.distribution_valid", 1e-12),
    ("simplex.fisher_positive", 0.0),
    ("simplex.fisher_symmetric", 1e-14),
    ("simplex.fisher_bilinear", 1e-12),
    ("simplex.center_projection", 1e-14),
    ("curve.velocity_fd", 1e-8),
    ("connections.exponential_reduction", 1e-12),
    ("connections.linearity", 1e-10),
    ("connections.metric_compatibility", 1e-6),
    ("connections.duality", 1e-6),
    ("connections.geodesic_oracles", 1e-6),
    ("dombrowski.j_squared", 1e-15),
    ("dombrowski.hermitian", 1e-14),
    ("dombrowski.fundamental_form", 1e-14),
    ("dombrowski.omega_closed", 1e-5),
    ("dombrowski.connector_additive", 1e-10),
    ("dombrowski.connector_recovery", 1e-8),
    ("dombrowski.projection_recovery", 1e-8),
    ("dombrowski.curve_independence", 2e-6),
    ("projective.unit_norm", 1e-12),
    ("projective.tangent_orthogonal", 1e-12),
    ("projective.chart_roundtrip", 1e-10),
    ("projective.metric_positive", 0.0),
    ("projective.form_nondegenerate", 1e-10),
    ("projective.chart_independence", 1e-6),
    ("covering.deck_invariance", 1e-10),
    ("covering.deck_free", 0.0),
    ("covering.local_injectivity", 0.0),
    ("covering.pairing", 1e-10),
    ("covering.orthogonality", 1e-12),
    ("covering.commutation", 1e-12),
    ("covering.pushforward_fd", 2e-6),
    ("covering.pullback_metric", 1e-10),
    ("covering.pullback_symplectic", 1e-10),
    ("pullback.metric", 1e-10),
    ("pullback.symplectic", 1e-10),
    ("pullback.complex_structure", 1e-12),
    ("pullback_fd.metric", 2e-6),
    ("pullback_fd.symplectic", 2e-6),
    ("pullback_fd.complex_structure", 2e-6),
];

/// Base tolerance for `name`.
pub fn tolerance(name: &str) -> Option<f64> {
    TOLERANCES.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
}

type CheckFn = fn(usize, u64) -> Result<f64>;

/// A registered check and the module invariants it establishes.
pub struct Check {
    pub name: &'static str,
    pub covers: &'static [&'static str],
    run: CheckFn,
}

impl Check {
    /// Absolute error of one configuration; an error of the library counts as `f64::MAX`.
    pub fn sample(&self, n: usize, seed: u64) -> f64 {
        match (self.run)(n, seed) {
            Ok(e) if e.is_nan() => f64::MAX,
            Ok(e) => e,
            Err(_) => f64::MAX,
        }
    }
}

macro_rules! check {
    ($name:literal, $f:path, [$($cover:literal),* $(,)?]) => {
        Check { name: $name, covers: &[$($cover),*], run: $f }
    };
}

pub static REGISTRY: &[Check] = &[
    check!("simplex.distribution_valid", checks::distribution_valid, ["simplex.distribution_valid"]),
    check!("simplex.fisher_positive", checks::fisher_positive, ["simplex.fisher_positive"]),
    check!("simplex.fisher_symmetric", checks::fisher_symmetric, ["simplex.fisher_symmetric"]),
    check!("simplex.fisher_bilinear", checks::fisher_bilinear, ["simplex.fisher_bilinear"]),
    check!("simplex.center_projection", checks::center_projection, ["simplex.center_projection"]),
    check!("curve.velocity_fd", checks::curve_velocity, ["curve.velocity_fd"]),
    check!("connections.exponential_reduction", checks::exponential_reduction, ["connections.exponential_reduction"]),
    check!("connections.linearity", checks::connection_linearity, ["connections.linearity"]),
    check!("connections.metric_compatibility", checks::metric_compatibility, ["connections.metric_compatibility"]),
    check!("connections.duality", checks::duality, ["connections.duality"]),
    check!("connections.geodesic_oracles", checks::geodesic_oracles, ["connections.geodesic_oracles"]),
    check!("dombrowski.j_squared", checks::j_squared, ["dombrowski.j_squared"]),
    check!("dombrowski.hermitian", checks::hermitian_compatibility, ["dombrowski.hermitian"]),
    check!("dombrowski.fundamental_form", checks::fundamental_form, ["dombrowski.fundamental_form"]),
    check!("dombrowski.omega_closed", checks::omega_closed, ["dombrowski.omega_closed"]),
    check!("dombrowski.connector_additive", checks::connector_additive, ["dombrowski.connector_additive"]),
    check!("dombrowski.connector_recovery", checks::connector_recovery, ["dombrowski.connector_recovery"]),
    check!("dombrowski.projection_recovery", checks::projection_recovery, ["dombrowski.projection_recovery"]),
    check!("dombrowski.curve_independence", checks::curve_independence, ["dombrowski.curve_independence"]),
    check!("projective.unit_norm", checks::unit_norm, ["projective.unit_norm"]),
    check!("projective.tangent_orthogonal", checks::tangent_orthogonal, ["projective.tangent_orthogonal"]),
    check!("projective.chart_roundtrip", checks::chart_roundtrip, ["projective.chart_roundtrip"]),
    check!("projective.metric_positive", checks::fs_metric_positive, ["projective.metric_positive"]),
    check!("projective.form_nondegenerate", checks::fs_form_nondegenerate, ["projective.form_nondegenerate"]),
    check!("projective.chart_independence", checks::chart_independence, ["projective.chart_independence"]),
    check!("covering.deck_invariance", checks::deck_invariance, ["covering.deck_invariance"]),
    check!("covering.deck_free", checks::deck_free, ["covering.deck_free"]),
    check!("covering.local_injectivity", checks::local_injectivity, ["covering.local_injectivity"]),
    check!("covering.pairing", checks::pairing, ["covering.pairing"]),
    check!("covering.orthogonality", checks::pushforward_orthogonal, ["covering.orthogonality"]),
    check!("covering.commutation", checks::pushforward_commutes, ["covering.commutation"]),
    check!("covering.pushforward_fd", checks::pushforward_fd, ["covering.pushforward_fd"]),
    // The symplectic pullback also certifies that Omega is closed.
    check!("covering.pullback_metric", checks::pullback_metric, ["covering.pullback_metric"]),
    check!("covering.pullback_symplectic", checks::pullback_symplectic, ["covering.pullback_symplectic", "dombrowski.omega_closed"]),
];

/// Every invariant id declared by a module; each must be covered by [`REGISTRY`].
pub fn declared_invariants() -> Vec<&'static str> {
    [
        crate::simplex::INVARIANTS,
        crate::curve::INVARIANTS,
        crate::connections::INVARIANTS,
        crate::dombrowski::INVARIANTS,
        crate::projective::INVARIANTS,
        crate::covering::INVARIANTS,
    ]
    .concat()
}

/// Declared invariants that no registered check covers.
pub fn uncovered_invariants() -> Vec<&'static str> {
    declared_invariants()
        .into_iter()
        .filter(|id| !REGISTRY.iter().any(|c| c.covers.contains(id)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub n: usize,
    pub samples: u64,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
    pub wall_time_ms: f64,
}

impl CheckRecord {
    fn new(name: &str, n: usize, samples: u64, seed: u64, max_abs_error: f64, tolerance: f64, started: Instant) -> Self {
        Self {
            name: name.to_owned(),
            n,
            samples,
            max_abs_error,
            tolerance,
            pass: max_abs_error <= tolerance,
            seed,
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub artifact_version: String,
    pub records: Vec<CheckRecord>,
    pub overall_pass: bool,
}

impl Report {
    pub fn new(suite: &str, records: Vec<CheckRecord>) -> Self {
        Self {
            suite: suite.to_owned(),
            artifact_version: env!("CARGO_PKG_VERSION").to_owned(),
            overall_pass: records.iter().all(|r| r.pass),
            records,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold finite numbers and strings")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// The same report with every `wall_time_ms` set to zero.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        r.records.iter_mut().for_each(|c| c.wall_time_ms = 0.0);
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub n_list: Vec<usize>,
    pub samples: u64,
    pub seed: u64,
    /// Multiplies every entry of [`TOLERANCES`].
    pub tol_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_list: DEFAULT_N_LIST.to_vec(),
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            tol_scale: 1.0,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::Config("the list of dimensions is empty".into()));
        }
        if let Some(n) = self.n_list.iter().find(|n| !(N_RANGE.0..=N_RANGE.1).contains(*n)) {
            return Err(Error::Config(format!(
                "dimension {n} outside [{}, {}]",
                N_RANGE.0, N_RANGE.1
            )));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if !(self.tol_scale > 0.0 && self.tol_scale.is_finite()) {
            return Err(Error::Config(format!("invalid tolerance scale {}", self.tol_scale)));
        }
        Ok(())
    }
}

/// Largest error of `check` over the samples for dimension `n`.
pub fn run_check(check: &Check, n: usize, samples: u64, seed: u64) -> f64 {
    let base = derive_seed(seed, n as u64);
    (0..samples)
        .into_par_iter()
        .map(|i| check.sample(n, sample_seed(base, i)))
        .reduce(|| 0.0, f64::max)
}

/// Runs every registered check for every `n`; writes the report to `out` if given.
pub fn run_verify(config: &VerifyConfig, out: Option<&Path>) -> Result<Report> {
    config.validate()?;
    let mut records = Vec::with_capacity(REGISTRY.len() * config.n_list.len());
    for check in REGISTRY {
        let tol = tolerance(check.name).expect("every check has a tolerance") * config.tol_scale;
        for &n in &config.n_list {
            let started = Instant::now();
            let err = run_check(check, n, config.samples, config.seed);
            records.push(CheckRecord::new(check.name, n, config.samples, config.seed, err, tol, started));
        }
    }
    let report = Report::new("verify", records);
    if let Some(path) = out {
        report.write(path)?;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Fd,
}

/// Batch pullback verification: records for the metric, symplectic and
/// complex-structure residuals.
pub fn run_pullback(n: usize, samples: u64, seed: u64, mode: Mode, tol_scale: f64, out: Option<&Path>) -> Result<Report> {
    VerifyConfig { n_list: vec![n], samples, seed, tol_scale }.validate()?;
    let (prefix, push) = match mode {
        Mode::Analytic => ("pullback", PushforwardMode::Analytic),
        Mode::Fd => ("pullback_fd", PushforwardMode::fd()),
    };
    let started = Instant::now();
    let r = verify_pullback_batch(n, samples, seed, push)?;
    let records = [
        ("metric", r.metric),
        ("symplectic", r.symplectic),
        ("complex_structure", r.complex_structure),
    ]
    .into_iter()
    .map(|(kind, err)| {
        let name = format!("{prefix}.{kind}");
        let tol = tolerance(&name).expect("pullback tolerances are tabulated") * tol_scale;
        CheckRecord::new(&name, n, samples, seed, err, tol, started)
    })
    .collect();
    let report = Report::new("pullback", records);
    if let Some(path) = out {
        report.write(path)?;
    }
    Ok(report)
}

/// Integrated geodesic and, for `alpha = ±1`, the sup deviation of its final
/// point from the closed form.
#[derive(Debug, Clone)]
pub struct GeodesicRun {
    pub curve: SampledCurve,
    pub closed_form_deviation: Option<f64>,
}

pub fn run_geodesic(
    alpha: Alpha,
    p0: &Distribution,
    v0: &TangentVector,
    t_end: f64,
    steps: usize,
    out: Option<&Path>,
) -> Result<GeodesicRun> {
    let curve = geodesic(alpha, p0, v0, t_end, steps)?;
    let oracle = if alpha == Alpha::exponential() {
        Some(exponential_geodesic(p0, v0)?)
    } else if alpha == Alpha::mixture() {
        Some(mixture_geodesic(p0, v0)?)
    } else {
        None
    };
    let closed_form_deviation = match oracle {
        Some(c) => {
            let exact = c.point(t_end)?;
            Some(
                curve
                    .last_point()
                    .weights()
                    .iter()
                    .zip(exact.weights())
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())),
            )
        }
        None => None,
    };
    if let Some(path) = out {
        curve.write_csv(path)?;
    }
    Ok(GeodesicRun { curve, closed_form_deviation })
}

/// Natural-gradient descent towards `target` from `start`, or from
/// `random_point(n, seed)` when no start is given.
pub fn run_natgrad(
    target: &Distribution,
    start: Option<&Distribution>,
    iters: usize,
    step: f64,
    seed: u64,
    out: Option<&Path>,
) -> Result<Trace> {
    let start = match start {
        Some(s) => s.clone(),
        None => random_point(target.len(), seed),
    };
    let trace = descend(&start, target, step, iters)?;
    if let Some(path) = out {
        trace.write_csv(path)?;
    }
    Ok(trace)
}
