//! The split (u, v, w) of a double tangent, its curve representative, the
//! connector, and the almost-Hermitian triple (G, J, Omega).

use fisher_kahler::dombrowski::{
    bundle_projection, connector, d_omega_residual, phi_inverse_curve, split_form_omega, split_j,
    split_metric_g, ChartDirection, SplitDoubleTangent, D_OMEGA_STEP,
};
use fisher_kahler::curve::DEFAULT_FD_STEP;
use fisher_kahler::simplex::{center, Distribution};

fn main() -> fisher_kahler::Result<()> {
    let p = Distribution::new(vec![0.2, 0.5, 0.3])?;
    let t = |raw: &[f64]| center(&p, raw);
    let x = SplitDoubleTangent::new(t(&[0.3, 0.0, -0.1])?, t(&[1.0, -1.0, 0.0])?, t(&[0.0, 0.5, -0.5])?)?;
    let y = SplitDoubleTangent::new(x.foot().clone(), t(&[0.0, 1.0, 0.0])?, t(&[1.0, 0.0, 0.0])?)?;

    // A curve in TP whose velocity splits as x; K and the projection recover w and v.
    let gamma = phi_inverse_curve(&x);
    let w = connector(&gamma, 0.0, DEFAULT_FD_STEP)?;
    let v = bundle_projection(&gamma, 0.0, DEFAULT_FD_STEP)?;
    println!("|K(gamma') - w| = {:.2e}", w.sup_distance(x.vertical())?);
    println!("|pi_*(gamma') - v| = {:.2e}", v.sup_distance(x.horizontal())?);

    println!("G(x, y) = {:.6}", split_metric_g(&x, &y)?);
    println!("Omega(x, y) = {:.6}", split_form_omega(&x, &y)?);
    println!("G(Jx, y) = {:.6}", split_metric_g(&split_j(&x), &y)?);
    println!("G(Jx, Jy) = {:.6}", split_metric_g(&split_j(&x), &split_j(&y))?);

    let dirs = [
        ChartDirection { theta: vec![1.0, 0.0], r: vec![0.0, 1.0] },
        ChartDirection { theta: vec![0.0, 1.0], r: vec![1.0, 0.0] },
        ChartDirection { theta: vec![0.5, 0.5], r: vec![-1.0, 0.3] },
    ];
    let d = d_omega_residual(&[0.1, -0.4], &[0.7, 0.2], [&dirs[0], &dirs[1], &dirs[2]], D_OMEGA_STEP)?;
    println!("dOmega on three coordinate fields: {d:.2e}");
    Ok(())
}
