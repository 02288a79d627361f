//! Geodesics and parallel transport of the alpha-connections.
//!
//! Keeping `V` centered along the curve forces `E_p(V') = -E_p(uV)`, so
//! `D^(a)/dt V = 0` becomes the explicit linear equation
//!
//! ```text
//! V' = -c uV + (c - 1) E_p(uV),   c = (1 - a)/2,
//! ```
//!
//! and geodesics solve it with `V = u` together with `p_i' = p_i u_i`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use super::rk4::{rk4_integrate, rk4_step};
use super::Alpha;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::simplex::{center, fisher_metric, Distribution, TangentVector};

/// Smallest weight an integrated trajectory may reach before it counts as
/// having left the open simplex.
pub const SIMPLEX_FLOOR: f64 = 1e-9;
/// Fewest RK4 steps accepted by [`geodesic`].
pub const MIN_GEODESIC_STEPS: usize = 16;

/// A trajectory recorded at the RK4 nodes.
#[derive(Debug, Clone, Serialize)]
pub struct SampledCurve {
    pub times: Vec<f64>,
    pub points: Vec<Distribution>,
    pub velocities: Vec<TangentVector>,
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_point(&self) -> &Distribution {
        self.points.last().expect("sampled curves hold the initial point")
    }

    /// CSV with columns `t, p_1..p_n, u_1..u_n`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let n = self.points[0].len();
        let mut out = String::from("t");
        for i in 1..=n {
            write!(out, ",p_{i}").unwrap();
        }
        for i in 1..=n {
            write!(out, ",u_{i}").unwrap();
        }
        out.push('\n');
        for ((t, p), u) in self.times.iter().zip(&self.points).zip(&self.velocities) {
            write!(out, "{t:.16e}").unwrap();
            for x in p.weights().iter().chain(u.components()) {
                write!(out, ",{x:.16e}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

fn geodesic_rhs(coupling: f64, n: usize) -> impl Fn(f64, &[f64]) -> Result<Vec<f64>> {
    move |_t, y| {
        let (p, u) = y.split_at(n);
        let mean_sq: f64 = p.iter().zip(u).map(|(pi, ui)| pi * ui * ui).sum();
        let mut dy = Vec::with_capacity(2 * n);
        dy.extend(p.iter().zip(u).map(|(pi, ui)| pi * ui));
        dy.extend(u.iter().map(|ui| -coupling * ui * ui + (coupling - 1.0) * mean_sq));
        Ok(dy)
    }
}

/// Integrates the alpha-geodesic from `p0` with initial velocity `v0` over
/// `[0, t_end]` with `steps` fixed RK4 steps.
///
/// After every step the weights are renormalized and the velocity recentered.
/// Fails with [`Error::LeftSimplex`] as soon as a weight leaves `[SIMPLEX_FLOOR, 1]`.
pub fn geodesic(
    alpha: Alpha,
    p0: &Distribution,
    v0: &TangentVector,
    t_end: f64,
    steps: usize,
) -> Result<SampledCurve> {
    if !v0.base().same_point(p0) {
        return Err(Error::BaseMismatch);
    }
    if steps < MIN_GEODESIC_STEPS {
        return Err(Error::Config(format!(
            "geodesic needs at least {MIN_GEODESIC_STEPS} steps, got {steps}"
        )));
    }
    if !t_end.is_finite() {
        return Err(Error::Config(format!("t_end must be finite, got {t_end}")));
    }
    let n = p0.len();
    let rhs = geodesic_rhs(alpha.coupling(), n);
    let h = t_end / steps as f64;

    let mut curve = SampledCurve {
        times: vec![0.0],
        points: vec![p0.clone()],
        velocities: vec![v0.clone()],
    };
    let mut y: Vec<f64> = p0.weights().iter().chain(v0.components()).copied().collect();
    for k in 0..steps {
        let t = (k + 1) as f64 * h;
        y = rk4_step(&rhs, k as f64 * h, &y, h)?;
        if y[..n].iter().any(|w| !(SIMPLEX_FLOOR..=1.0).contains(w)) {
            return Err(Error::LeftSimplex { t });
        }
        let p = Distribution::normalize(&y[..n]).map_err(|_| Error::LeftSimplex { t })?;
        let u = center(&p, &y[n..])?;
        y[..n].copy_from_slice(p.weights());
        y[n..].copy_from_slice(u.components());
        curve.times.push(t);
        curve.points.push(p);
        curve.velocities.push(u);
    }
    Ok(curve)
}

/// Solves `D^(alpha)/dt V = 0` along `curve` from `t = 0` to `t_end` with
/// `steps` RK4 steps; `v0` must be based at `curve(0)`.
pub fn parallel_transport(
    alpha: Alpha,
    curve: &Curve,
    v0: &TangentVector,
    t_end: f64,
    steps: usize,
) -> Result<TangentVector> {
    let p0 = curve.point(0.0)?;
    if !v0.base().same_point(&p0) {
        return Err(Error::BaseMismatch);
    }
    curve.require(t_end)?;
    if steps == 0 {
        return Err(Error::Config("parallel transport needs at least one step".into()));
    }
    let c = alpha.coupling();
    let rhs = |t: f64, v: &[f64]| -> Result<Vec<f64>> {
        let p = curve.point(t)?;
        let u = curve.velocity(t)?;
        let uv: Vec<f64> = u.components().iter().zip(v).map(|(a, b)| a * b).collect();
        let mean = p.expectation(&uv)?;
        Ok(uv.iter().map(|x| -c * x + (c - 1.0) * mean).collect())
    };
    let v = rk4_integrate(rhs, 0.0, t_end, v0.components(), steps)?;
    center(&curve.point(t_end)?, &v)
}

fn require_base(p: &Distribution, v: &TangentVector) -> Result<()> {
    if !v.base().same_point(p) {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// Closed-form exponential geodesic `p_i(t) ∝ p_i exp(t v_i)`.
pub fn exponential_geodesic(p: &Distribution, v: &TangentVector) -> Result<Curve> {
    require_base(p, v)?;
    let w = p.weights().to_vec();
    let vv = v.components().to_vec();
    let vel = vv.clone();
    Ok(Curve::new((f64::NEG_INFINITY, f64::INFINITY), move |t| {
        w.iter().zip(&vv).map(|(wi, vi)| wi * (t * vi).exp()).collect()
    })
    .with_velocity(move |_| vel.clone()))
}

/// Closed-form mixture geodesic `p_i(t) = p_i (1 + t v_i)`, defined while all
/// weights stay positive.
pub fn mixture_geodesic(p: &Distribution, v: &TangentVector) -> Result<Curve> {
    require_base(p, v)?;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for &vi in v.components() {
        if vi > 0.0 {
            lo = lo.max(-1.0 / vi);
        } else if vi < 0.0 {
            hi = hi.min(-1.0 / vi);
        }
    }
    let w = p.weights().to_vec();
    let vv = v.components().to_vec();
    let vel = vv.clone();
    Ok(Curve::new((lo, hi), move |t| {
        w.iter().zip(&vv).map(|(wi, vi)| wi * (1.0 + t * vi)).collect()
    })
    .with_velocity(move |t| vel.iter().map(|vi| vi / (1.0 + t * vi)).collect()))
}

/// Closed-form Levi-Civita geodesic of the Fisher metric.
///
/// `p -> sqrt(p)` maps the Fisher metric isometrically onto the unit sphere,
/// so geodesics are great circles `xi(t) = cos(st) xi0 + sin(st) xi'/s` with
/// `xi0 = sqrt(p)`, `xi'_i = sqrt(p_i) v_i / 2` and `s^2 = g_F(v, v)`.
/// The domain is the interval around 0 on which every `xi_i` stays positive.
pub fn fisher_geodesic(p: &Distribution, v: &TangentVector) -> Result<Curve> {
    require_base(p, v)?;
    let speed = fisher_metric(v, v)?.sqrt();
    if speed == 0.0 {
        return Ok(Curve::constant(p));
    }
    let xi0: Vec<f64> = p.weights().iter().map(|w| w.sqrt()).collect();
    let dir: Vec<f64> = xi0
        .iter()
        .zip(v.components())
        .map(|(x, vi)| 0.5 * x * vi / speed)
        .collect();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (a, b) in xi0.iter().zip(&dir) {
        let phase = b.atan2(*a);
        hi = hi.min((half_pi + phase) / speed);
        lo = lo.max((phase - half_pi) / speed);
    }
    let (x0, d0) = (xi0.clone(), dir.clone());
    let position = move |t: f64| -> Vec<f64> {
        let (s, c) = (speed * t).sin_cos();
        x0.iter().zip(&d0).map(|(x, d)| c * x + s * d).collect()
    };
    let pos = position.clone();
    Ok(Curve::new((lo, hi), move |t| pos(t).iter().map(|x| x * x).collect())
        .with_velocity(move |t| {
            let (s, c) = (speed * t).sin_cos();
            position(t)
                .iter()
                .zip(xi0.iter().zip(&dir))
                .map(|(x, (x0, d))| 2.0 * speed * (c * d - s * x0) / x)
                .collect()
        }))
}
