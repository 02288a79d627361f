//! Distributions, tangent vectors in the exponential representation, and the
//! Fisher metric with its Gram matrix.

use fisher_kahler::simplex::{center, coordinate_basis, fisher_gram, fisher_metric, Distribution};

fn main() -> fisher_kahler::Result<()> {
    let p = Distribution::new(vec![0.5, 0.3, 0.2])?;
    println!("p = {:?}", p.weights());

    // [u]_p is the class of u modulo constants; center picks E_p(u) = 0.
    let u = center(&p, &[1.0, 0.0, 0.0])?;
    let v = center(&p, &[0.0, 1.0, -1.0])?;
    println!("u = {:?}, E_p(u) = {:.1e}", u.components(), p.expectation(u.components())?);
    println!("g_F(u, u) = {:.6}", fisher_metric(&u, &u)?);
    println!("g_F(u, v) = {:.6}", fisher_metric(&u, &v)?);

    let basis = coordinate_basis(&p);
    let gram = fisher_gram(&p, &basis)?;
    println!("Gram matrix of the coordinate basis:{gram:.6}");

    // Unnormalized weights are only accepted through normalize.
    assert!(Distribution::new(vec![2.0, 1.0, 1.0]).is_err());
    println!("normalize([2, 1, 1]) = {:?}", Distribution::normalize(&[2.0, 1.0, 1.0])?.weights());
    Ok(())
}
