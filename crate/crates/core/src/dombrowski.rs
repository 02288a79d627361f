//! Dombrowski splitting of `T(TP)` for the exponential connection and the
//! almost-Hermitian structure `(G, Omega, J)` it induces on the tangent bundle.
//!
//! A double tangent at the foot `[u]_p` is stored through its split
//! coordinates: the pushforward under the bundle projection (horizontal part)
//! and the connector image (vertical part).

use crate::connections::{
    exponential_derivative, exponential_geodesic, mixture_geodesic, VectorFieldAlongCurve,
};
use crate::curve::{FdScheme, DEFAULT_FD_STEP};
use crate::error::{Error, Result};
use crate::simplex::{center, fisher_metric, Distribution, TangentVector};

/// Invariant ids checked by the verify suite.
pub const INVARIANTS: &[&str] = &[
    "dombrowski.j_squared",
    "dombrowski.hermitian",
    "dombrowski.fundamental_form",
    "dombrowski.omega_closed",
    "dombrowski.connector_additive",
];

/// Step of the finite differences in [`d_omega_residual`].
pub const D_OMEGA_STEP: f64 = 1e-4;

/// Split coordinates `([u]_p, [v]_p, [w]_p)` of an element of `T_{[u]_p} TP`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitDoubleTangent {
    foot: TangentVector,
    horizontal: TangentVector,
    vertical: TangentVector,
}

impl SplitDoubleTangent {
    pub fn new(foot: TangentVector, horizontal: TangentVector, vertical: TangentVector) -> Result<Self> {
        foot.require_same_base(&horizontal)?;
        foot.require_same_base(&vertical)?;
        Ok(Self {
            foot,
            horizontal,
            vertical,
        })
    }

    pub fn base(&self) -> &Distribution {
        self.foot.base()
    }

    pub fn foot(&self) -> &TangentVector {
        &self.foot
    }

    pub fn horizontal(&self) -> &TangentVector {
        &self.horizontal
    }

    pub fn vertical(&self) -> &TangentVector {
        &self.vertical
    }

    fn require_same_fiber(&self, other: &SplitDoubleTangent) -> Result<()> {
        self.foot.require_same_base(&other.foot)?;
        if self.foot.sup_distance(&other.foot)? > crate::simplex::BASE_TOL {
            return Err(Error::FootMismatch);
        }
        Ok(())
    }

    /// Componentwise sum in the fiber over a common foot.
    pub fn add(&self, other: &SplitDoubleTangent) -> Result<SplitDoubleTangent> {
        self.require_same_fiber(other)?;
        Ok(Self {
            foot: self.foot.clone(),
            horizontal: self.horizontal.add(&other.horizontal)?,
            vertical: self.vertical.add(&other.vertical)?,
        })
    }

    pub fn scale(&self, factor: f64) -> SplitDoubleTangent {
        Self {
            foot: self.foot.clone(),
            horizontal: self.horizontal.scale(factor),
            vertical: self.vertical.scale(factor),
        }
    }
}

/// Base curve used to realize a prescribed 1-jet in [`phi_inverse_curve_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaseCurve {
    /// `p(t) ∝ p exp(t v)`.
    #[default]
    ExponentialGeodesic,
    /// `p(t) = p (1 + t v)`.
    MixtureGeodesic,
}

/// A curve in `TP` whose velocity at 0 has split coordinates `x`:
/// `gamma(t) = [u + t w - E_{p(t)}(u + t w) * 1]_{p(t)}` with `p(t)` the
/// exponential geodesic through `p` with velocity `[v]_p`.
pub fn phi_inverse_curve(x: &SplitDoubleTangent) -> VectorFieldAlongCurve {
    phi_inverse_curve_with(x, BaseCurve::ExponentialGeodesic)
}

pub fn phi_inverse_curve_with(x: &SplitDoubleTangent, base: BaseCurve) -> VectorFieldAlongCurve {
    let p = x.base();
    let curve = match base {
        BaseCurve::ExponentialGeodesic => exponential_geodesic(p, &x.horizontal),
        BaseCurve::MixtureGeodesic => mixture_geodesic(p, &x.horizontal),
    }
    .expect("split components share the base point");
    let u = x.foot.components().to_vec();
    let w = x.vertical.components().to_vec();
    let w2 = w.clone();
    VectorFieldAlongCurve::new(curve, move |t| {
        u.iter().zip(&w).map(|(ui, wi)| ui + t * wi).collect()
    })
    .with_derivative(move |_| w2.clone())
}

/// The connector of the exponential connection applied to the velocity of
/// `gamma` at `t`.
pub fn connector(gamma: &VectorFieldAlongCurve, t: f64, h: f64) -> Result<TangentVector> {
    exponential_derivative(gamma, t, h)
}

/// Bundle-projection pushforward of the velocity of `gamma` at `t`, i.e. the
/// velocity of the base curve, by central differences of log-weights.
pub fn bundle_projection(gamma: &VectorFieldAlongCurve, t: f64, h: f64) -> Result<TangentVector> {
    gamma.curve().velocity_fd(t, FdScheme::Central { h })
}

/// Split coordinates of the velocity of `gamma` at `t`, recovered by finite
/// differences (the field's raw components are differenced numerically).
pub fn split_velocity(gamma: &VectorFieldAlongCurve, t: f64, h: f64) -> Result<SplitDoubleTangent> {
    let stripped = VectorFieldAlongCurve::new(gamma.curve().clone().without_velocity(), {
        let g = gamma.clone();
        move |s| g.raw(s)
    });
    SplitDoubleTangent::new(
        gamma.at(t)?,
        bundle_projection(gamma, t, h)?,
        connector(&stripped, t, h)?,
    )
}

/// The coordinate velocity `(dp/dt, dV/dt)` of `gamma` at `t`, with `V` the
/// centered representative. Two curves define the same double tangent iff
/// these jets agree.
pub fn jet(gamma: &VectorFieldAlongCurve, t: f64, h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let fd = FdScheme::Central { h };
    let p_dot = fd.derivative(t, |s| Ok(gamma.curve().point(s)?.weights().to_vec()))?;
    let v_dot = fd.derivative(t, |s| Ok(gamma.at(s)?.into_components()))?;
    Ok((p_dot, v_dot))
}

/// `G(x, y) = g_F(v, v̄) + g_F(w, w̄)`.
pub fn split_metric_g(x: &SplitDoubleTangent, y: &SplitDoubleTangent) -> Result<f64> {
    x.require_same_fiber(y)?;
    Ok(fisher_metric(&x.horizontal, &y.horizontal)? + fisher_metric(&x.vertical, &y.vertical)?)
}

/// `Omega(x, y) = g_F(v, w̄) - g_F(w, v̄)`.
pub fn split_form_omega(x: &SplitDoubleTangent, y: &SplitDoubleTangent) -> Result<f64> {
    x.require_same_fiber(y)?;
    Ok(fisher_metric(&x.horizontal, &y.vertical)? - fisher_metric(&x.vertical, &y.horizontal)?)
}

/// `J(u, v, w) = (u, -w, v)`.
pub fn split_j(x: &SplitDoubleTangent) -> SplitDoubleTangent {
    SplitDoubleTangent {
        foot: x.foot.clone(),
        horizontal: x.vertical.scale(-1.0),
        vertical: x.horizontal.clone(),
    }
}

/// Global chart of `TP` on `R^{n-1} x R^{n-1}`: the point `(theta, r)` is
/// `[center(p, (r, 0))]_p` with `p ∝ (exp(theta), 1)`.
pub fn chart_point(theta: &[f64], r: &[f64]) -> Result<TangentVector> {
    let mut w: Vec<f64> = theta.iter().map(|x| x.exp()).collect();
    w.push(1.0);
    let p = Distribution::normalize(&w)?;
    let mut raw = r.to_vec();
    raw.push(0.0);
    center(&p, &raw)
}

/// Split coordinates of the constant-coefficient coordinate field
/// `sum_a a_theta[a] d/dtheta_a + a_r[a] d/dr_a` at `(theta, r)`.
///
/// Moving `theta` traces an exponential geodesic while keeping the raw foot
/// fixed, so its connector image vanishes; moving `r` keeps `p` fixed.
pub fn coordinate_field(
    theta: &[f64],
    r: &[f64],
    a_theta: &[f64],
    a_r: &[f64],
) -> Result<SplitDoubleTangent> {
    let foot = chart_point(theta, r)?;
    let p = foot.base().clone();
    let pad = |a: &[f64]| {
        let mut v = a.to_vec();
        v.push(0.0);
        v
    };
    SplitDoubleTangent::new(foot, center(&p, &pad(a_theta))?, center(&p, &pad(a_r))?)
}

/// Constant-coefficient direction in the `(theta, r)` chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartDirection {
    pub theta: Vec<f64>,
    pub r: Vec<f64>,
}

/// `dOmega(X, Y, Z)` for commuting coordinate fields, by the three-term formula
/// `X Omega(Y,Z) + Y Omega(Z,X) + Z Omega(X,Y)` with central differences of step `h`.
pub fn d_omega_residual(
    theta: &[f64],
    r: &[f64],
    fields: [&ChartDirection; 3],
    h: f64,
) -> Result<f64> {
    let omega_at = |s: f64, along: &ChartDirection, a: &ChartDirection, b: &ChartDirection| -> Result<f64> {
        let th: Vec<f64> = theta.iter().zip(&along.theta).map(|(t, d)| t + s * d).collect();
        let rr: Vec<f64> = r.iter().zip(&along.r).map(|(t, d)| t + s * d).collect();
        let x = coordinate_field(&th, &rr, &a.theta, &a.r)?;
        let y = coordinate_field(&th, &rr, &b.theta, &b.r)?;
        split_form_omega(&x, &y)
    };
    let derivative = |along: &ChartDirection, a: &ChartDirection, b: &ChartDirection| -> Result<f64> {
        Ok((omega_at(h, along, a, b)? - omega_at(-h, along, a, b)?) / (2.0 * h))
    };
    let [x, y, z] = fields;
    Ok(derivative(x, y, z)? + derivative(y, z, x)? + derivative(z, x, y)?)
}

/// Default-step variant of [`split_velocity`] used by tests and examples.
pub fn split_velocity_default(gamma: &VectorFieldAlongCurve) -> Result<SplitDoubleTangent> {
    split_velocity(gamma, 0.0, DEFAULT_FD_STEP)
}
