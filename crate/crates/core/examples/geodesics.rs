//! RK4 geodesics of the alpha-connections against their closed forms, and
//! parallel transport that preserves the pairing of dual connections.

use fisher_kahler::connections::{
    exponential_geodesic, fisher_geodesic, geodesic, mixture_geodesic, parallel_transport, Alpha,
};
use fisher_kahler::simplex::{center, fisher_metric, Distribution};

fn main() -> fisher_kahler::Result<()> {
    let p = Distribution::new(vec![0.4, 0.35, 0.25])?;
    let v = center(&p, &[0.6, -0.2, -0.5])?;

    let oracles = [
        (Alpha::exponential(), exponential_geodesic(&p, &v)?),
        (Alpha::levi_civita(), fisher_geodesic(&p, &v)?),
        (Alpha::mixture(), mixture_geodesic(&p, &v)?),
    ];
    for (alpha, oracle) in &oracles {
        let sampled = geodesic(*alpha, &p, &v, 1.0, 256)?;
        let exact = oracle.point(1.0)?;
        let dev = sampled
            .last_point()
            .weights()
            .iter()
            .zip(exact.weights())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        println!("alpha = {alpha}: p(1) = {:.6?}, deviation {dev:.2e}", sampled.last_point().weights());
    }

    // Transport X with alpha = 1 and Y with alpha = -1 along the same curve.
    let curve = &oracles[0].1;
    let x = center(&p, &[1.0, 0.0, 0.0])?;
    let y = center(&p, &[0.0, 0.0, 1.0])?;
    let tx = parallel_transport(Alpha::exponential(), curve, &x, 1.0, 256)?;
    let ty = parallel_transport(Alpha::mixture(), curve, &y, 1.0, 256)?;
    println!("g(X, Y) at t = 0: {:.10}", fisher_metric(&x, &y)?);
    println!("g(X, Y) at t = 1: {:.10}", fisher_metric(&tx, &ty)?);

    let csv = geodesic(Alpha::levi_civita(), &p, &v, 1.0, 16)?.to_csv();
    println!("{}", csv.lines().take(3).collect::<Vec<_>>().join("\n"));
    Ok(())
}
