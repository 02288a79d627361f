//! The alpha-connections of the Fisher metric, expressed through covariant
//! derivatives along curves.
//!
//! For a field `[V(t)]_{p(t)}` along a curve with velocity `[u(t)]_{p(t)}`,
//!
//! ```text
//! D^(a)/dt [V] = [ V' + (1-a)/2 * uV - E_p(V' + (1-a)/2 * uV) * 1 ]
//! ```
//!
//! where `uV` is the componentwise product. No Christoffel symbols are formed.

mod geodesic;
mod rk4;

use std::fmt;
use std::sync::Arc;

use crate::curve::{check_step, Curve, FdScheme, DEFAULT_FD_STEP};
use crate::error::Result;
use crate::simplex::{
    center, derive_seed, fisher_metric, random_raw, random_tangent, Distribution, TangentVector,
};

pub use geodesic::{
    exponential_geodesic, fisher_geodesic, geodesic, mixture_geodesic, parallel_transport,
    SampledCurve, MIN_GEODESIC_STEPS, SIMPLEX_FLOOR,
};
pub use rk4::{rk4_integrate, rk4_step};

/// Invariant ids checked by the verify suite.
pub const INVARIANTS: &[&str] = &[
    "connections.exponential_reduction",
    "connections.linearity",
    "connections.metric_compatibility",
    "connections.duality",
    "connections.geodesic_oracles",
];

/// Number of random configurations evaluated by [`check_duality`].
pub const DUALITY_SAMPLES: u64 = 20;

/// The connection parameter of the alpha-family.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    /// Panics on non-finite values.
    pub fn new(value: f64) -> Self {
        assert!(value.is_finite(), "alpha must be finite");
        Alpha(value)
    }

    /// `alpha = -1`.
    pub fn mixture() -> Self {
        Alpha(-1.0)
    }

    /// `alpha = 0`, the Levi-Civita connection of the Fisher metric.
    pub fn levi_civita() -> Self {
        Alpha(0.0)
    }

    /// `alpha = 1`.
    pub fn exponential() -> Self {
        Alpha(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The dual parameter `-alpha`.
    pub fn dual(self) -> Self {
        Alpha(-self.0)
    }

    /// The coefficient `(1 - alpha) / 2` of the `uV` term.
    pub fn coupling(self) -> f64 {
        (1.0 - self.0) / 2.0
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

type VecMap = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// A vector field along a curve, given by raw components `V(t)` that are
/// centered at `p(t)` on evaluation. Equivalently, a curve in the tangent bundle.
#[derive(Clone)]
pub struct VectorFieldAlongCurve {
    curve: Curve,
    field: VecMap,
    derivative: Option<VecMap>,
}

impl fmt::Debug for VectorFieldAlongCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorFieldAlongCurve")
            .field("curve", &self.curve)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl VectorFieldAlongCurve {
    pub fn new<F>(curve: Curve, field: F) -> Self
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            curve,
            field: Arc::new(field),
            derivative: None,
        }
    }

    /// The field `t -> center(p(t), raw)`.
    pub fn constant_raw(curve: Curve, raw: Vec<f64>) -> Self {
        Self::new(curve, move |_| raw.clone())
    }

    /// Attaches the derivative of the raw components. Only its class modulo
    /// the constant direction matters, so `d/dt V(t)` of the raw field suffices.
    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn raw(&self, t: f64) -> Vec<f64> {
        (self.field)(t)
    }

    /// `[V(t)]_{p(t)}`.
    pub fn at(&self, t: f64) -> Result<TangentVector> {
        let p = self.curve.point(t)?;
        center(&p, &(self.field)(t))
    }

    /// Componentwise sum of two fields along the same curve.
    pub fn sum(&self, other: &VectorFieldAlongCurve) -> VectorFieldAlongCurve {
        let (f, g) = (self.field.clone(), other.field.clone());
        VectorFieldAlongCurve::new(self.curve.clone(), move |t| {
            f(t).iter().zip(g(t)).map(|(a, b)| a + b).collect()
        })
    }

    pub fn scaled(&self, factor: f64) -> VectorFieldAlongCurve {
        let f = self.field.clone();
        VectorFieldAlongCurve::new(self.curve.clone(), move |t| {
            f(t).into_iter().map(|x| factor * x).collect()
        })
    }

    fn time_derivative(&self, t: f64, h: f64) -> Result<Vec<f64>> {
        match &self.derivative {
            Some(d) => Ok(d(t)),
            None => FdScheme::Central { h }.derivative(t, |s| Ok(self.at(s)?.into_components())),
        }
    }
}

/// Covariant derivative `D^(alpha)/dt` of `vf` at `t`, with central
/// differences of step `h` for `V'`.
pub fn covariant_derivative(
    alpha: Alpha,
    vf: &VectorFieldAlongCurve,
    t: f64,
    h: f64,
) -> Result<TangentVector> {
    check_step(h)?;
    let curve = vf.curve();
    curve.require(t - h)?;
    curve.require(t + h)?;
    let p = curve.point(t)?;
    let v_dot = vf.time_derivative(t, h)?;
    let a = alpha.coupling();
    if a == 0.0 {
        return center(&p, &v_dot);
    }
    let u = curve.velocity(t)?;
    let v = vf.at(t)?;
    let raw: Vec<f64> = (0..p.len())
        .map(|i| v_dot[i] + a * u.components()[i] * v.components()[i])
        .collect();
    center(&p, &raw)
}

/// Covariant derivative of the exponential connection, `[V' - E_p(V') * 1]`.
pub fn exponential_derivative(vf: &VectorFieldAlongCurve, t: f64, h: f64) -> Result<TangentVector> {
    check_step(h)?;
    let curve = vf.curve();
    curve.require(t - h)?;
    curve.require(t + h)?;
    let p = curve.point(t)?;
    center(&p, &vf.time_derivative(t, h)?)
}

/// Residual of `X g(Y,Z) = g(D^(a)_X Y, Z) + g(Y, D^(-a)_X Z)` at `p`.
///
/// `X` is the velocity at 0 of the exponential geodesic with initial velocity
/// `x`; `Y` and `Z` are the fields `q -> center(q, y_raw)` and `q -> center(q, z_raw)`.
/// Every derivative is a central difference of step `h`.
pub fn duality_residual(
    alpha: Alpha,
    x: &TangentVector,
    y_raw: &[f64],
    z_raw: &[f64],
    h: f64,
) -> Result<f64> {
    check_step(h)?;
    let curve = exponential_geodesic(x.base(), x)?;
    let y = VectorFieldAlongCurve::constant_raw(curve.clone(), y_raw.to_vec());
    let z = VectorFieldAlongCurve::constant_raw(curve, z_raw.to_vec());

    let pairing = |t: f64| -> Result<Vec<f64>> { Ok(vec![fisher_metric(&y.at(t)?, &z.at(t)?)?]) };
    let lhs = FdScheme::Central { h }.derivative(0.0, pairing)?[0];

    let rhs = fisher_metric(&covariant_derivative(alpha, &y, 0.0, h)?, &z.at(0.0)?)?
        + fisher_metric(&y.at(0.0)?, &covariant_derivative(alpha.dual(), &z, 0.0, h)?)?;
    Ok((lhs - rhs).abs())
}

/// Largest duality residual at `p` over [`DUALITY_SAMPLES`] random
/// configurations, with the default step.
pub fn check_duality(alpha: Alpha, p: &Distribution, seed: u64) -> f64 {
    check_duality_with_step(alpha, p, seed, DEFAULT_FD_STEP)
        .expect("exponential geodesics stay in the simplex near t = 0")
}

pub fn check_duality_with_step(alpha: Alpha, p: &Distribution, seed: u64, h: f64) -> Result<f64> {
    let n = p.len();
    let mut worst: f64 = 0.0;
    for k in 0..DUALITY_SAMPLES {
        let s = derive_seed(seed, k);
        let x = random_tangent(p, derive_seed(s, 0));
        let y = random_raw(n, derive_seed(s, 1));
        let z = random_raw(n, derive_seed(s, 2));
        worst = worst.max(duality_residual(alpha, &x, &y, &z, h)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{random_point, sample_seed};

    fn random_curve(p: &Distribution, seed: u64) -> Curve {
        exponential_geodesic(p, &random_tangent(p, seed)).unwrap()
    }

    #[test]
    fn alpha_constructors() {
        assert_eq!(Alpha::mixture().value(), -1.0);
        assert_eq!(Alpha::levi_civita().value(), 0.0);
        assert_eq!(Alpha::exponential().value(), 1.0);
        assert_eq!(Alpha::exponential().coupling(), 0.0);
        assert_eq!(Alpha::mixture().coupling(), 1.0);
        assert_eq!(Alpha::new(0.5).dual(), Alpha::new(-0.5));
    }

    #[test]
    #[should_panic]
    fn alpha_rejects_nan() {
        Alpha::new(f64::NAN);
    }

    #[test]
    fn constant_field_on_constant_curve_is_parallel() {
        let p = random_point(4, 1);
        let raw = random_raw(4, 2);
        let vf = VectorFieldAlongCurve::constant_raw(Curve::constant(&p), raw);
        for a in [-1.0, -0.5, 0.0, 0.5, 1.0, 3.0] {
            let d = covariant_derivative(Alpha::new(a), &vf, 0.0, 1e-5).unwrap();
            assert!(d.sup_norm() < 1e-12);
        }
        assert!(exponential_derivative(&vf, 0.0, 1e-5).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn exponential_connection_is_alpha_one() {
        for k in 0..100u64 {
            let s = sample_seed(7, k);
            let n = [2, 3, 5, 8][(k % 4) as usize];
            let p = random_point(n, derive_seed(s, 0));
            let curve = random_curve(&p, derive_seed(s, 1));
            let a = random_raw(n, derive_seed(s, 2));
            let b = random_raw(n, derive_seed(s, 3));
            let vf = VectorFieldAlongCurve::new(curve, move |t| {
                a.iter().zip(&b).map(|(ai, bi)| ai + (t * bi).sin()).collect()
            });
            let t = 0.1 * (k % 5) as f64;
            let d1 = covariant_derivative(Alpha::exponential(), &vf, t, 1e-5).unwrap();
            let e = exponential_derivative(&vf, t, 1e-5).unwrap();
            assert!(d1.sup_distance(&e).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn linear_field_on_constant_base() {
        let p = random_point(3, 11);
        let w = random_raw(3, 12);
        let w2 = w.clone();
        let vf = VectorFieldAlongCurve::new(Curve::constant(&p), move |t| {
            w2.iter().map(|x| t * x).collect()
        });
        let d = exponential_derivative(&vf, 0.0, 1e-5).unwrap();
        let expected = center(&p, &w).unwrap();
        assert!(d.sup_distance(&expected).unwrap() < 1e-10);
    }

    #[test]
    fn exponential_geodesic_velocity_is_autoparallel() {
        for n in [2, 3, 5, 8] {
            let p = random_point(n, 40 + n as u64);
            let v = random_tangent(&p, 50 + n as u64);
            let curve = exponential_geodesic(&p, &v).unwrap().without_velocity();
            let vv = v.components().to_vec();
            // The raw velocity v is constant; its centering at p(t) is the velocity.
            let vf = VectorFieldAlongCurve::constant_raw(curve, vv);
            for t in [-0.3, 0.0, 0.4] {
                let d = exponential_derivative(&vf, t, 1e-5).unwrap();
                assert!(d.sup_norm() < 1e-8, "n={n} t={t}: {}", d.sup_norm());
            }
        }
    }

    #[test]
    fn analytic_and_fd_field_derivatives_agree() {
        let p = random_point(5, 3);
        let curve = random_curve(&p, 4);
        let a = random_raw(5, 5);
        let a2 = a.clone();
        let fd = VectorFieldAlongCurve::new(curve.clone(), move |t| {
            a.iter().map(|x| (t * x).exp()).collect()
        });
        let a3 = a2.clone();
        let analytic = VectorFieldAlongCurve::new(curve, move |t| {
            a2.iter().map(|x| (t * x).exp()).collect()
        })
        .with_derivative(move |t| a3.iter().map(|x| x * (t * x).exp()).collect());
        for alpha in [-1.0, 0.0, 0.7] {
            let x = covariant_derivative(Alpha::new(alpha), &fd, 0.2, 1e-5).unwrap();
            let y = covariant_derivative(Alpha::new(alpha), &analytic, 0.2, 1e-5).unwrap();
            assert!(x.sup_distance(&y).unwrap() < 1e-8);
        }
    }

    #[test]
    fn covariant_derivative_is_linear() {
        for k in 0..50u64 {
            let s = sample_seed(19, k);
            let n = 2 + (k % 6) as usize;
            let p = random_point(n, derive_seed(s, 0));
            let curve = random_curve(&p, derive_seed(s, 1));
            let a = random_raw(n, derive_seed(s, 2));
            let b = random_raw(n, derive_seed(s, 3));
            let v = VectorFieldAlongCurve::new(curve.clone(), move |t| {
                a.iter().map(|x| x * (1.0 + t * t)).collect()
            });
            let w = VectorFieldAlongCurve::new(curve, move |t| {
                b.iter().map(|x| (x * t).cos()).collect()
            });
            let alpha = Alpha::new(-1.0 + 0.5 * (k % 5) as f64);
            let dv = covariant_derivative(alpha, &v, 0.1, 1e-5).unwrap();
            let dw = covariant_derivative(alpha, &w, 0.1, 1e-5).unwrap();
            let dsum = covariant_derivative(alpha, &v.sum(&w), 0.1, 1e-5).unwrap();
            assert!(dsum.sup_distance(&dv.add(&dw).unwrap()).unwrap() < 1e-10);
            let dscaled = covariant_derivative(alpha, &v.scaled(-2.5), 0.1, 1e-5).unwrap();
            assert!(dscaled.sup_distance(&dv.scale(-2.5)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn levi_civita_is_metric_compatible() {
        for k in 0..40u64 {
            let s = sample_seed(23, k);
            let n = [2, 3, 5, 8][(k % 4) as usize];
            let p = random_point(n, derive_seed(s, 0));
            let curve = random_curve(&p, derive_seed(s, 1));
            let a = random_raw(n, derive_seed(s, 2));
            let b = random_raw(n, derive_seed(s, 3));
            let c = random_raw(n, derive_seed(s, 4));
            let v = VectorFieldAlongCurve::new(curve.clone(), move |t| {
                a.iter().zip(&b).map(|(x, y)| x + t * y).collect()
            });
            let w = VectorFieldAlongCurve::new(curve, move |t| {
                c.iter().map(|x| (t * x).sin() + 1.0).collect()
            });
            let h = 1e-5;
            let lhs = FdScheme::Central { h }
                .derivative(0.0, |t| Ok(vec![fisher_metric(&v.at(t)?, &w.at(t)?)?]))
                .unwrap()[0];
            let lc = Alpha::levi_civita();
            let rhs = fisher_metric(&covariant_derivative(lc, &v, 0.0, h).unwrap(), &w.at(0.0).unwrap())
                .unwrap()
                + fisher_metric(&v.at(0.0).unwrap(), &covariant_derivative(lc, &w, 0.0, h).unwrap())
                    .unwrap();
            assert!((lhs - rhs).abs() < 1e-6);
        }
    }

    #[test]
    fn duality_examples() {
        let p3 = random_point(3, 42);
        assert!(check_duality(Alpha::levi_civita(), &p3, 42) <= 1e-6);
        for n in [2, 3, 5] {
            let p = random_point(n, 100 + n as u64);
            assert!(check_duality(Alpha::exponential(), &p, 7) <= 1e-6);
        }
    }

    #[test]
    fn duality_residual_is_second_order() {
        let p = random_point(4, 8);
        for alpha in [-1.0, 0.0, 0.5] {
            let coarse = check_duality_with_step(Alpha::new(alpha), &p, 3, 1e-2).unwrap();
            let fine = check_duality_with_step(Alpha::new(alpha), &p, 3, 5e-3).unwrap();
            let ratio = coarse / fine;
            assert!((ratio / 4.0 - 1.0).abs() <= 0.3, "alpha={alpha} ratio={ratio}");
        }
    }

    #[test]
    fn covariant_derivative_rejects_bad_step_and_domain() {
        let p = random_point(3, 1);
        let curve = mixture_geodesic(&p, &random_tangent(&p, 2)).unwrap();
        let (_, hi) = curve.domain();
        let vf = VectorFieldAlongCurve::constant_raw(curve, vec![1.0, 0.0, 0.0]);
        assert!(covariant_derivative(Alpha::levi_civita(), &vf, 0.0, 1.0).is_err());
        assert!(matches!(
            covariant_derivative(Alpha::levi_civita(), &vf, hi, 1e-5),
            Err(crate::Error::CurveDomain { .. })
        ));
    }
}
