//! Natural-gradient descent on the simplex for the squared loss
//! `f(p) = sum (p_i - target_i)^2`.
//!
//! The gradient is the Fisher-metric gradient, obtained by solving the Gram
//! system of [`coordinate_basis`]. A step moves along `-grad f` to first order,
//! `p_i <- p_i (1 - step * y_i)`, which preserves the total mass exactly.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplex::{center, coordinate_basis, fisher_gram, Distribution, TangentVector};

/// `sum (p_i - target_i)^2`.
pub fn squared_loss(p: &Distribution, target: &Distribution) -> Result<f64> {
    require_len(p, target)?;
    Ok(p.weights()
        .iter()
        .zip(target.weights())
        .map(|(a, b)| (a - b) * (a - b))
        .sum())
}

/// Fisher gradient of a function with coordinate differential `df_dp` at `p`:
/// the tangent `y` with `g_F(y, x) = sum_i df_dp[i] p_i x_i` for every `x`.
pub fn natural_gradient(p: &Distribution, df_dp: &[f64]) -> Result<TangentVector> {
    if df_dp.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: df_dp.len(),
        });
    }
    let basis = coordinate_basis(p);
    let gram = fisher_gram(p, &basis)?;
    let rhs = DVector::from_iterator(
        basis.len(),
        basis.iter().map(|b| {
            b.components()
                .iter()
                .zip(p.weights())
                .zip(df_dp)
                .map(|((x, pi), d)| d * pi * x)
                .sum::<f64>()
        }),
    );
    let coeffs = gram
        .cholesky()
        .ok_or(Error::SingularBasis { condition: f64::INFINITY })?
        .solve(&rhs);
    let mut raw = vec![0.0; p.len()];
    for (c, b) in coeffs.iter().zip(&basis) {
        raw.iter_mut().zip(b.components()).for_each(|(r, x)| *r += c * x);
    }
    center(p, &raw)
}

/// Fisher gradient of [`squared_loss`].
pub fn squared_loss_gradient(p: &Distribution, target: &Distribution) -> Result<TangentVector> {
    require_len(p, target)?;
    let df: Vec<f64> = p
        .weights()
        .iter()
        .zip(target.weights())
        .map(|(a, b)| 2.0 * (a - b))
        .collect();
    natural_gradient(p, &df)
}

/// One row of a descent trace: the iterate before the update of iteration `iter`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub loss: f64,
    pub p: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
}

impl Trace {
    pub fn last(&self) -> &TraceRow {
        self.rows.last().expect("a trace holds the start point")
    }

    pub fn final_loss(&self) -> f64 {
        self.last().loss
    }

    /// Header `iter,f,p_1,...,p_n`; reals with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let n = self.rows.first().map_or(0, |r| r.p.len());
        let mut out = String::from("iter,f");
        for i in 1..=n {
            let _ = write!(out, ",p_{i}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{},{:.16e}", row.iter, row.loss);
            for x in &row.p {
                let _ = write!(out, ",{x:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Runs `iters` natural-gradient steps from `start`. The trace has
/// `iters + 1` rows. An update that makes a weight nonpositive fails with
/// [`Error::LeftSimplex`] carrying the iteration index as `t`.
pub fn descend(start: &Distribution, target: &Distribution, step: f64, iters: usize) -> Result<Trace> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidStep(step));
    }
    require_len(start, target)?;
    let mut p = start.clone();
    let mut rows = Vec::with_capacity(iters + 1);
    for iter in 0..=iters {
        rows.push(TraceRow {
            iter,
            loss: squared_loss(&p, target)?,
            p: p.weights().to_vec(),
        });
        if iter == iters {
            break;
        }
        let y = squared_loss_gradient(&p, target)?;
        let next: Vec<f64> = p
            .weights()
            .iter()
            .zip(y.components())
            .map(|(pi, yi)| pi * (1.0 - step * yi))
            .collect();
        if next.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::LeftSimplex { t: iter as f64 });
        }
        p = Distribution::normalize(&next)?;
    }
    Ok(Trace { rows })
}

fn require_len(p: &Distribution, q: &Distribution) -> Result<()> {
    if p.len() == q.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{fisher_metric, random_point, random_tangent, sample_seed};

    fn dist(w: &[f64]) -> Distribution {
        Distribution::new(w.to_vec()).unwrap()
    }

    #[test]
    fn gradient_matches_closed_form() {
        for k in 0..200u64 {
            let n = 2 + (k % 7) as usize;
            let p = random_point(n, sample_seed(1, k));
            let t = random_point(n, sample_seed(2, k));
            let y = squared_loss_gradient(&p, &t).unwrap();
            let diff: Vec<f64> = p.weights().iter().zip(t.weights()).map(|(a, b)| 8.0 * (a - b)).collect();
            let oracle = center(&p, &diff).unwrap();
            let scale = oracle.sup_norm().max(1.0);
            assert!(y.sup_distance(&oracle).unwrap() <= 1e-10 * scale);
        }
    }

    #[test]
    fn gradient_represents_the_differential() {
        for k in 0..100u64 {
            let n = 2 + (k % 5) as usize;
            let p = random_point(n, sample_seed(3, k));
            let t = random_point(n, sample_seed(4, k));
            let x = random_tangent(&p, sample_seed(5, k));
            let y = squared_loss_gradient(&p, &t).unwrap();
            let h = 1e-6;
            let moved = |s: f64| {
                let w: Vec<f64> = p.weights().iter().zip(x.components()).map(|(a, b)| a * (s * b).exp()).collect();
                squared_loss(&Distribution::normalize(&w).unwrap(), &t).unwrap()
            };
            let df = (moved(h) - moved(-h)) / (2.0 * h);
            assert!((fisher_metric(&y, &x).unwrap() - df).abs() <= 1e-7);
        }
    }

    #[test]
    fn minimizer_is_a_fixed_point() {
        let t = dist(&[0.2, 0.3, 0.5]);
        let y = squared_loss_gradient(&t, &t).unwrap();
        assert_eq!(y.sup_norm(), 0.0);
        let trace = descend(&t, &t, 0.25, 10).unwrap();
        assert!(trace.rows.iter().all(|r| r.p == t.weights() && r.loss == 0.0));
    }

    #[test]
    fn two_outcome_convergence() {
        let trace = descend(&Distribution::uniform(2).unwrap(), &dist(&[0.75, 0.25]), 0.25, 200).unwrap();
        assert!(trace.final_loss() < 1e-12);
        assert!(trace.rows.iter().position(|r| r.loss < 1e-12).unwrap() <= 200);
    }

    #[test]
    fn oversized_step_leaves_the_simplex() {
        let far = dist(&[0.98, 0.01, 0.01]);
        let t = dist(&[0.01, 0.01, 0.98]);
        assert!(matches!(descend(&far, &t, 10.0, 50), Err(Error::LeftSimplex { t }) if t == 0.0));
    }

    #[test]
    fn small_steps_decrease_monotonically() {
        for k in 0..50u64 {
            let n = 2 + (k % 7) as usize;
            let start = random_point(n, sample_seed(6, k));
            let t = random_point(n, sample_seed(7, k));
            let trace = descend(&start, &t, 0.05, 100).unwrap();
            for w in trace.rows.windows(2) {
                assert!(w[1].loss <= w[0].loss * (1.0 + 1e-12) + 1e-300);
            }
        }
    }

    #[test]
    fn converges_on_random_targets() {
        // Near the target the error in coordinate i contracts by about
        // 1 - 8 step t_i per iteration, so targets keep every weight above 1/(2n).
        for k in 0..60u64 {
            let n = 2 + (k % 7) as usize;
            let step = [0.1, 0.25, 0.5][(k % 3) as usize];
            let start = random_point(n, sample_seed(8, k));
            let mixed: Vec<f64> = random_point(n, sample_seed(9, k)).weights().iter().map(|w| 0.5 * w + 0.5 / n as f64).collect();
            let t = Distribution::normalize(&mixed).unwrap();
            let trace = descend(&start, &t, step, 500).unwrap();
            let dist = trace
                .last()
                .p
                .iter()
                .zip(t.weights())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(dist <= 1e-6, "k={k} n={n} step={step} dist={dist}");
        }
    }

    #[test]
    fn trace_csv_layout() {
        let trace = descend(&Distribution::uniform(2).unwrap(), &dist(&[0.75, 0.25]), 0.25, 3).unwrap();
        let csv = trace.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "iter,f,p_1,p_2");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,1.2500000000000000e-1,5.0000000000000000e-1"));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = Distribution::uniform(3).unwrap();
        assert!(matches!(descend(&p, &p, 0.0, 1), Err(Error::InvalidStep(_))));
        assert!(matches!(descend(&p, &Distribution::uniform(2).unwrap(), 0.1, 1), Err(Error::DimensionMismatch { .. })));
        assert!(natural_gradient(&p, &[1.0]).is_err());
    }
}
