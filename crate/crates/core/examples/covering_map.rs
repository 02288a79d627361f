//! The covering map tau onto the rays with nonzero coordinates, its deck
//! group, and the pullback of the Fubini-Study structure.

use fisher_kahler::covering::{
    deck_action, pairing_residual, tau, tau_pushforward, tau_pushforward_fd, verify_pullback,
    DeckElement, PushforwardMode,
};
use fisher_kahler::dombrowski::{split_form_omega, split_metric_g, SplitDoubleTangent};
use fisher_kahler::simplex::{center, Distribution, TangentVector};

fn main() -> fisher_kahler::Result<()> {
    let p = Distribution::uniform(2)?;
    let u = TangentVector::zero(&p);
    let v = center(&p, &[1.0, -1.0])?;
    let x = SplitDoubleTangent::new(u.clone(), v, TangentVector::zero(&p))?;

    let xi = tau_pushforward(&x);
    println!("tau([0]_p) = {:.6?}", tau(&u).representative());
    println!("tau_* x = {:.6?}", xi.vector());
    println!("G(x, x) = {}", split_metric_g(&x, &x)?);

    // Shifting phases by 4 pi leaves tau unchanged; 2 pi does not.
    let q = Distribution::new(vec![0.1, 0.6, 0.3])?;
    let y = center(&q, &[0.4, -1.0, 2.0])?;
    let shifted = deck_action(&DeckElement::new(vec![1, -2]), &y)?;
    println!("deck shift: ray distance {:.2e}", tau(&shifted).ray_distance(&tau(&y)));
    let half = center(&q, &[0.4 + 2.0 * std::f64::consts::PI, -1.0, 2.0])?;
    println!("half shift: ray distance {:.3}", tau(&half).ray_distance(&tau(&y)));

    let t = |raw: &[f64]| center(&q, raw);
    let a = SplitDoubleTangent::new(y.clone(), t(&[1.0, 0.0, -1.0])?, t(&[0.0, 2.0, 0.0])?)?;
    let b = SplitDoubleTangent::new(y.clone(), t(&[0.0, 1.0, 1.0])?, t(&[-1.0, 0.0, 0.5])?)?;
    println!("G(a, b) = {:.6}, Omega(a, b) = {:.6}", split_metric_g(&a, &b)?, split_form_omega(&a, &b)?);
    println!("|<tau_* a, tau_* b> - (G + i Omega)| = {:.2e}", pairing_residual(&a, &b)?);
    println!("analytic residuals: {:?}", verify_pullback(&a, &b, PushforwardMode::Analytic)?);
    let fd = tau_pushforward_fd(&a, 1e-5)?;
    println!("|tau_* a (fd) - tau_* a| = {:.2e}", fd.sup_distance(&tau_pushforward(&a)));
    Ok(())
}
