//! Smooth curves in the simplex, evaluated from closures.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::simplex::{center, Distribution, TangentVector};

/// Invariant ids checked by the verify suite.
pub const INVARIANTS: &[&str] = &[
    "curve.velocity_fd",
];

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// Admissible range for finite-difference steps.
pub const FD_STEP_RANGE: (f64, f64) = (1e-8, 1e-2);

type VecMap = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

pub(crate) fn check_step(h: f64) -> Result<()> {
    if !(FD_STEP_RANGE.0..=FD_STEP_RANGE.1).contains(&h) {
        return Err(Error::InvalidStep(h));
    }
    Ok(())
}

/// How finite-difference derivatives are formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FdScheme {
    /// `(f(t+h) - f(t-h)) / 2h`.
    Central { h: f64 },
    /// Richardson extrapolation of two central differences with steps `h` and `h/2`.
    Richardson { h: f64 },
}

impl FdScheme {
    pub fn step(&self) -> f64 {
        match *self {
            FdScheme::Central { h } | FdScheme::Richardson { h } => h,
        }
    }

    /// Derivative at `t` of a vector-valued function.
    pub fn derivative<F>(&self, t: f64, f: F) -> Result<Vec<f64>>
    where
        F: Fn(f64) -> Result<Vec<f64>>,
    {
        let central = |h: f64| -> Result<Vec<f64>> {
            let plus = f(t + h)?;
            let minus = f(t - h)?;
            Ok(plus
                .iter()
                .zip(&minus)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect())
        };
        match *self {
            FdScheme::Central { h } => central(h),
            FdScheme::Richardson { h } => {
                let coarse = central(h)?;
                let fine = central(h / 2.0)?;
                Ok(fine
                    .iter()
                    .zip(&coarse)
                    .map(|(f, c)| (4.0 * f - c) / 3.0)
                    .collect())
            }
        }
    }
}

impl Default for FdScheme {
    fn default() -> Self {
        FdScheme::Central {
            h: DEFAULT_FD_STEP,
        }
    }
}

/// A curve `t -> p(t)` in the open simplex over a closed interval.
///
/// The closure returns positive (possibly unnormalized) weights; the curve is
/// their normalization. Without an analytic velocity, `u_i = d/dt log p_i` is
/// taken by finite differences.
#[derive(Clone)]
pub struct Curve {
    weights: VecMap,
    velocity: Option<VecMap>,
    domain: (f64, f64),
    fd: FdScheme,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("domain", &self.domain)
            .field("analytic_velocity", &self.velocity.is_some())
            .field("fd", &self.fd)
            .finish()
    }
}

impl Curve {
    pub fn new<F>(domain: (f64, f64), weights: F) -> Self
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            weights: Arc::new(weights),
            velocity: None,
            domain,
            fd: FdScheme::default(),
        }
    }

    /// Attaches an analytic velocity (raw components, centered on evaluation).
    pub fn with_velocity<F>(mut self, velocity: F) -> Self
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        self.velocity = Some(Arc::new(velocity));
        self
    }

    /// Drops any analytic velocity so that finite differences are used.
    pub fn without_velocity(mut self) -> Self {
        self.velocity = None;
        self
    }

    pub fn with_fd(mut self, fd: FdScheme) -> Self {
        self.fd = fd;
        self
    }

    pub fn constant(p: &Distribution) -> Self {
        let w = p.weights().to_vec();
        let n = w.len();
        Self::new((f64::NEG_INFINITY, f64::INFINITY), move |_| w.clone())
            .with_velocity(move |_| vec![0.0; n])
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn has_analytic_velocity(&self) -> bool {
        self.velocity.is_some()
    }

    pub fn fd_scheme(&self) -> FdScheme {
        self.fd
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.domain.0 && t <= self.domain.1
    }

    pub(crate) fn require(&self, t: f64) -> Result<()> {
        if !self.contains(t) {
            return Err(Error::CurveDomain {
                t,
                lo: self.domain.0,
                hi: self.domain.1,
            });
        }
        Ok(())
    }

    pub fn point(&self, t: f64) -> Result<Distribution> {
        self.require(t)?;
        Distribution::normalize(&(self.weights)(t))
    }

    /// Velocity `[u(t)]_{p(t)}`.
    pub fn velocity(&self, t: f64) -> Result<TangentVector> {
        let p = self.point(t)?;
        match &self.velocity {
            Some(v) => center(&p, &v(t)),
            None => self.velocity_fd(t, self.fd),
        }
    }

    /// Finite-difference velocity from log-weights, ignoring any analytic velocity.
    pub fn velocity_fd(&self, t: f64, fd: FdScheme) -> Result<TangentVector> {
        let p = self.point(t)?;
        let raw = fd.derivative(t, |s| {
            Ok(self.point(s)?.weights().iter().map(|w| w.ln()).collect())
        })?;
        center(&p, &raw)
    }

    /// `s -> self(t_end - s)` on `[t_end - hi, t_end - lo]`.
    pub fn reversed(&self, t_end: f64) -> Curve {
        let w = self.weights.clone();
        let velocity = self.velocity.clone().map(|v| -> VecMap {
            Arc::new(move |s: f64| v(t_end - s).into_iter().map(|x| -x).collect())
        });
        Curve {
            weights: Arc::new(move |s| w(t_end - s)),
            velocity,
            domain: (t_end - self.domain.1, t_end - self.domain.0),
            fd: self.fd,
        }
    }
}
