//! Affine charts of P(C^n), the Fubini-Study metric and symplectic form at a
//! chart center, and transfer of tangents between representatives of a ray.

use fisher_kahler::projective::{
    chart_backward, chart_forward, fubini_study, j_fs, random_projective_point,
    random_projective_tangent, symplectic_determinant, transfer_tangent,
};

fn main() -> fisher_kahler::Result<()> {
    let u = random_projective_point(3, 1);
    let z = random_projective_point(3, 2);

    let xi = chart_forward(&u, &z)?;
    println!("phi_u(z) = {xi:.4?}");
    println!("round trip ray distance: {:.2e}", chart_backward(&u, &xi)?.ray_distance(&z));

    let a = random_projective_tangent(&u, 3);
    let b = random_projective_tangent(&u, 4);
    let (g, omega) = fubini_study(&u, &a, &b)?;
    println!("g_FS(a, b) = {g:.6}, omega_FS(a, b) = {omega:.6}");
    let (g_j, _) = fubini_study(&u, &j_fs(&a), &b)?;
    println!("g_FS(J a, b) = {g_j:.6} = omega_FS(a, b)");
    println!("det omega in an orthonormal basis: {:.6}", symplectic_determinant(&u));

    // The chart of e^{i phi} u is e^{i phi} times the chart of u.
    let u2 = u.rephased(0.8);
    let (ta, tb) = (transfer_tangent(&u, &u2, &a)?, transfer_tangent(&u, &u2, &b)?);
    let (g2, omega2) = fubini_study(&u2, &ta, &tb)?;
    println!("after transfer: g = {g2:.6}, omega = {omega2:.6}");
    Ok(())
}
