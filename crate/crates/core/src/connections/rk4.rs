use crate::error::Result;

/// One classical Runge-Kutta step of `y' = f(t, y)`.
pub fn rk4_step<F>(f: &F, t: f64, y: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let axpy = |a: f64, x: &[f64]| -> Vec<f64> { y.iter().zip(x).map(|(yi, xi)| yi + a * xi).collect() };
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &axpy(0.5 * h, &k1))?;
    let k3 = f(t + 0.5 * h, &axpy(0.5 * h, &k2))?;
    let k4 = f(t + h, &axpy(h, &k3))?;
    Ok((0..y.len())
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Integrates from `t0` to `t1` in `steps` equal steps and returns the final state.
pub fn rk4_integrate<F>(f: F, t0: f64, t1: f64, y0: &[f64], steps: usize) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    for k in 0..steps {
        y = rk4_step(&f, t0 + k as f64 * h, &y, h)?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_is_fourth_order() {
        let f = |_t: f64, y: &[f64]| Ok(vec![-y[0]]);
        let exact = (-1.0f64).exp();
        let e1 = (rk4_integrate(f, 0.0, 1.0, &[1.0], 10).unwrap()[0] - exact).abs();
        let e2 = (rk4_integrate(f, 0.0, 1.0, &[1.0], 20).unwrap()[0] - exact).abs();
        let ratio = e1 / e2;
        assert!((ratio - 16.0).abs() < 2.0, "ratio {ratio}");
    }

    #[test]
    fn harmonic_oscillator_closes() {
        let f = |_t: f64, y: &[f64]| Ok(vec![y[1], -y[0]]);
        let y = rk4_integrate(f, 0.0, std::f64::consts::TAU, &[1.0, 0.0], 1000).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }
}
