//! Covariant derivatives of the alpha-family along a curve and the duality
//! between the alpha and -alpha connections.

use fisher_kahler::connections::{
    check_duality, covariant_derivative, exponential_geodesic, Alpha, VectorFieldAlongCurve,
};
use fisher_kahler::curve::DEFAULT_FD_STEP;
use fisher_kahler::simplex::{center, random_point};

fn main() -> fisher_kahler::Result<()> {
    let p = random_point(4, 7);
    let a = center(&p, &[1.0, -0.5, 0.25, 0.0])?;
    let curve = exponential_geodesic(&p, &a)?;

    // The velocity field of an exponential geodesic is autoparallel for alpha = 1 only.
    let velocity = VectorFieldAlongCurve::constant_raw(curve, a.components().to_vec());
    for alpha in [-1.0, 0.0, 1.0] {
        let d = covariant_derivative(Alpha::new(alpha), &velocity, 0.3, DEFAULT_FD_STEP)?;
        println!("alpha = {alpha:+.1}: |D u/dt| = {:.3e}", d.sup_norm());
    }

    for alpha in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let r = check_duality(Alpha::new(alpha), &p, 42);
        println!("duality residual, alpha = {alpha:+.1}: {r:.3e}");
    }
    Ok(())
}
