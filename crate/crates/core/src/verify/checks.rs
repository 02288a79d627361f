//! Per-sample check functions. Each returns the absolute error of one random
//! configuration for a given `n`; indicator checks return 0 or 1.

use num_complex::Complex64;

use crate::connections::{
    covariant_derivative, duality_residual, exponential_derivative, exponential_geodesic, geodesic,
    mixture_geodesic, Alpha, VectorFieldAlongCurve,
};
use crate::covering::{
    deck_action, pairing_residual, random_split_pair, tau, tau_pushforward, tau_pushforward_fd,
    DeckElement,
};
use crate::curve::{Curve, FdScheme, DEFAULT_FD_STEP};
use crate::dombrowski::{
    bundle_projection, connector, d_omega_residual, jet, phi_inverse_curve, phi_inverse_curve_with,
    split_form_omega, split_j, split_metric_g, BaseCurve, ChartDirection, D_OMEGA_STEP,
    SplitDoubleTangent,
};
use crate::error::Result;
use crate::projective::{
    chart_backward, chart_forward, fubini_study, hermitian, j_fs, norm, random_projective_point,
    random_projective_tangent, real_orthonormal_basis, symplectic_determinant, transfer_tangent,
    ProjectiveTangent,
};
use crate::simplex::{
    center, derive_seed, fisher_metric, random_point, random_raw, random_tangent, Distribution,
    TangentVector,
};

const DUALITY_ALPHAS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];
const GEODESIC_STEPS: usize = 256;
const LINEARITY_STEP: f64 = 1e-3;

fn indicator(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn uniform(seed: u64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * (seed >> 11) as f64 / (1u64 << 53) as f64
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn base_tangent(n: usize, seed: u64) -> (Distribution, TangentVector) {
    let p = random_point(n, derive_seed(seed, 0));
    let u = random_tangent(&p, derive_seed(seed, 1));
    (p, u)
}

pub(super) fn distribution_valid(n: usize, seed: u64) -> Result<f64> {
    let (p, u) = base_tangent(n, seed);
    let raw: Vec<f64> = random_raw(n, derive_seed(seed, 2)).iter().map(|x| x.exp()).collect();
    let candidates = [
        p.clone(),
        Distribution::normalize(&raw)?,
        exponential_geodesic(&p, &u)?.point(1.0)?,
    ];
    Ok(candidates.iter().fold(0.0f64, |m, q| {
        let sum: f64 = q.weights().iter().sum();
        let positive = q.weights().iter().all(|&w| w > 0.0);
        m.max(if positive { (sum - 1.0).abs() } else { f64::MAX })
    }))
}

pub(super) fn fisher_positive(n: usize, seed: u64) -> Result<f64> {
    let (_, u) = base_tangent(n, seed);
    Ok(indicator(u.sup_norm() == 0.0 || fisher_metric(&u, &u)? > 0.0))
}

pub(super) fn fisher_symmetric(n: usize, seed: u64) -> Result<f64> {
    let (p, u) = base_tangent(n, seed);
    let v = random_tangent(&p, derive_seed(seed, 2));
    Ok((fisher_metric(&u, &v)? - fisher_metric(&v, &u)?).abs())
}

pub(super) fn fisher_bilinear(n: usize, seed: u64) -> Result<f64> {
    let (p, u) = base_tangent(n, seed);
    let b = random_tangent(&p, derive_seed(seed, 2));
    let v = random_tangent(&p, derive_seed(seed, 3));
    let a = random_raw(1, derive_seed(seed, 4))[0];
    let lhs = fisher_metric(&u.scale(a).add(&b)?, &v)?;
    Ok((lhs - a * fisher_metric(&u, &v)? - fisher_metric(&b, &v)?).abs())
}

pub(super) fn center_projection(n: usize, seed: u64) -> Result<f64> {
    let p = random_point(n, derive_seed(seed, 0));
    let once = center(&p, &random_raw(n, derive_seed(seed, 1)))?;
    let twice = center(&p, once.components())?;
    twice.sup_distance(&once)
}

pub(super) fn curve_velocity(n: usize, seed: u64) -> Result<f64> {
    let p = random_point(n, derive_seed(seed, 0));
    let a = random_raw(n, derive_seed(seed, 1));
    let (w, dir) = (p.weights().to_vec(), a.clone());
    let curve = Curve::new((f64::NEG_INFINITY, f64::INFINITY), move |t| {
        w.iter().zip(&dir).map(|(pi, ai)| pi * (t * ai).exp()).collect()
    });
    let fd = curve.velocity_fd(0.0, FdScheme::Central { h: DEFAULT_FD_STEP })?;
    fd.sup_distance(&center(&p, &a)?)
}

/// A field along an exponential geodesic whose raw components are quadratic in `t`.
fn quadratic_field(p: &Distribution, seed: u64) -> Result<VectorFieldAlongCurve> {
    let n = p.len();
    let curve = exponential_geodesic(p, &random_tangent(p, derive_seed(seed, 10)))?;
    let (a, b, c) = (
        random_raw(n, derive_seed(seed, 11)),
        random_raw(n, derive_seed(seed, 12)),
        random_raw(n, derive_seed(seed, 13)),
    );
    Ok(VectorFieldAlongCurve::new(curve, move |t| {
        (0..a.len()).map(|i| a[i] + t * b[i] + t * t * c[i]).collect()
    }))
}

fn companion_field(vf: &VectorFieldAlongCurve, seed: u64) -> VectorFieldAlongCurve {
    let n = vf.raw(0.0).len();
    let (a, b) = (random_raw(n, derive_seed(seed, 20)), random_raw(n, derive_seed(seed, 21)));
    VectorFieldAlongCurve::new(vf.curve().clone(), move |t| {
        a.iter().zip(&b).map(|(x, y)| x + t.sin() * y).collect()
    })
}

pub(super) fn exponential_reduction(n: usize, seed: u64) -> Result<f64> {
    let p = random_point(n, derive_seed(seed, 0));
    let vf = quadratic_field(&p, seed)?;
    let a = covariant_derivative(Alpha::exponential(), &vf, 0.0, DEFAULT_FD_STEP)?;
    a.sup_distance(&exponential_derivative(&vf, 0.0, DEFAULT_FD_STEP)?)
}

pub(super) fn connection_linearity(n: usize, seed: u64) -> Result<f64> {
    let p = random_point(n, derive_seed(seed, 0));
    let alpha = Alpha::new(uniform(derive_seed(seed, 1), -2.0, 2.0));
    let v = quadratic_field(&p, seed)?;
    let w = companion_field(&v, seed);
    let s = random_raw(1, derive_seed(seed, 2))[0];
    // The difference quotient is linear in the field for every step; a coarse
    // step keeps rounding far below the tolerance.
    let d = |f: &VectorFieldAlongCurve| covariant_derivative(alpha, f, 0.0, LINEARITY_STEP);
    let (dv, dw) = (d(&v)?, d(&w)?);
    let additive = d(&v.sum(&w))?.sup_distance(&dv.add(&dw)?)?;
    let homogeneous = d(&v.scaled(s))?.sup_distance(&dv.scale(s))?;
    Ok(additive.max(homogeneous))
}

pub(super) fn metric_compatibility(n: usize, seed: u64) -> Result<f64> {
    let p = random_point(n, derive_seed(seed, 0));
    let v = quadratic_field(&p, seed)?;
    let w = companion_field(&v, seed);
    let h = DEFAULT_FD_STEP;
    let pairing = |t: f64| -> Result<Vec<f64>> { Ok(vec![fisher_metric(&v.at(t)?, &w.at(t)?)?]) };
    let lhs = FdScheme::Central { h }.derivative(0.0, pairing)?[0];
    let lc = Alpha::levi_civita();
    let rhs = fisher_metric(&covariant_derivative(lc, &v, 0.0, h)?, &w.at(0.0)?)?
        + fisher_metric(&v.at(0.0)?, &covariant_derivative(lc, &w, 0.0, h)?)?;
    Ok((lhs - rhs).abs())
}

pub(super) fn duality(n: usize, seed: u64) -> Result<f64> {
    let (_, x) = base_tangent(n, seed);
    let y = random_raw(n, derive_seed(seed, 2));
    let z = random_raw(n, derive_seed(seed, 3));
    DUALITY_ALPHAS.iter().try_fold(0.0f64, |m, &a| {
        Ok(m.max(duality_residual(Alpha::new(a), &x, &y, &z, DEFAULT_FD_STEP)?))
    })
}

pub(super) fn geodesic_oracles(n: usize, seed: u64) -> Result<f64> {
    let (p, v) = base_tangent(n, seed);
    // Keeps the mixture path inside the simplex on [0, 1].
    let v = v.scale(0.5 / v.sup_norm().max(1e-300));
    let mut worst: f64 = 0.0;
    for (alpha, oracle) in [
        (Alpha::exponential(), exponential_geodesic(&p, &v)?),
        (Alpha::mixture(), mixture_geodesic(&p, &v)?),
    ] {
        let sampled = geodesic(alpha, &p, &v, 1.0, GEODESIC_STEPS)?;
        for (t, q) in sampled.times.iter().zip(&sampled.points) {
            worst = worst.max(sup(q.weights(), oracle.point(*t)?.weights()));
        }
    }
    Ok(worst)
}

pub(super) fn random_split(n: usize, seed: u64) -> SplitDoubleTangent {
    random_split_pair(n, seed).0
}

pub(super) fn j_squared(n: usize, seed: u64) -> Result<f64> {
    let x = random_split(n, seed);
    let jj = split_j(&split_j(&x));
    Ok(jj
        .horizontal()
        .add(x.horizontal())?
        .sup_norm()
        .max(jj.vertical().add(x.vertical())?.sup_norm()))
}

pub(super) fn hermitian_compatibility(n: usize, seed: u64) -> Result<f64> {
    let (x, y) = random_split_pair(n, seed);
    Ok((split_metric_g(&split_j(&x), &split_j(&y))? - split_metric_g(&x, &y)?).abs())
}

pub(super) fn fundamental_form(n: usize, seed: u64) -> Result<f64> {
    let (x, y) = random_split_pair(n, seed);
    Ok((split_form_omega(&x, &y)? - split_metric_g(&split_j(&x), &y)?).abs())
}

pub(super) fn omega_closed(n: usize, seed: u64) -> Result<f64> {
    let m = n - 1;
    let theta = random_raw(m, derive_seed(seed, 0));
    let r = random_raw(m, derive_seed(seed, 1));
    let dir = |k: u64| ChartDirection {
        theta: random_raw(m, derive_seed(seed, 10 + k)),
        r: random_raw(m, derive_seed(seed, 20 + k)),
    };
    let (a, b, c) = (dir(0), dir(1), dir(2));
    Ok(d_omega_residual(&theta, &r, [&a, &b, &c], D_OMEGA_STEP)?.abs())
}

pub(super) fn connector_additive(n: usize, seed: u64) -> Result<f64> {
    let x = random_split(n, seed);
    let gamma = phi_inverse_curve(&x);
    let other = companion_field(&gamma, seed);
    let h = LINEARITY_STEP;
    let sum = connector(&gamma.sum(&other), 0.0, h)?;
    sum.sup_distance(&connector(&gamma, 0.0, h)?.add(&connector(&other, 0.0, h)?)?)
}

pub(super) fn connector_recovery(n: usize, seed: u64) -> Result<f64> {
    let x = random_split(n, seed);
    connector(&phi_inverse_curve(&x), 0.0, DEFAULT_FD_STEP)?.sup_distance(x.vertical())
}

pub(super) fn projection_recovery(n: usize, seed: u64) -> Result<f64> {
    let x = random_split(n, seed);
    bundle_projection(&phi_inverse_curve(&x), 0.0, DEFAULT_FD_STEP)?.sup_distance(x.horizontal())
}

pub(super) fn curve_independence(n: usize, seed: u64) -> Result<f64> {
    let x = random_split(n, seed);
    let (pe, ve) = jet(&phi_inverse_curve_with(&x, BaseCurve::ExponentialGeodesic), 0.0, DEFAULT_FD_STEP)?;
    let (pm, vm) = jet(&phi_inverse_curve_with(&x, BaseCurve::MixtureGeodesic), 0.0, DEFAULT_FD_STEP)?;
    Ok(sup(&pe, &pm).max(sup(&ve, &vm)))
}

fn orthogonality_error(xi: &ProjectiveTangent) -> f64 {
    hermitian(xi.base().representative(), xi.vector()).norm()
}

pub(super) fn unit_norm(n: usize, seed: u64) -> Result<f64> {
    let u = random_projective_point(n, derive_seed(seed, 0));
    let xi = random_projective_tangent(&u, derive_seed(seed, 1));
    let (p, x) = base_tangent(n, derive_seed(seed, 2));
    let points = [
        u.clone(),
        chart_backward(&u, xi.vector())?,
        u.rephased(uniform(derive_seed(seed, 3), -3.0, 3.0)),
        tau(&x),
        tau(&deck_action(&DeckElement::new(vec![1; n - 1]), &x)?),
        tau(&TangentVector::zero(&p)),
    ];
    Ok(points.iter().fold(0.0f64, |m, z| m.max((norm(z.representative()) - 1.0).abs())))
}

pub(super) fn tangent_orthogonal(n: usize, seed: u64) -> Result<f64> {
    let u = random_projective_point(n, derive_seed(seed, 0));
    let xi = random_projective_tangent(&u, derive_seed(seed, 1));
    let phase = uniform(derive_seed(seed, 2), -3.0, 3.0);
    let c = Complex64::new(random_raw(1, derive_seed(seed, 3))[0], random_raw(1, derive_seed(seed, 4))[0]);
    let tangents = [
        j_fs(&xi),
        xi.scale(c),
        transfer_tangent(&u, &u.rephased(phase), &xi)?,
        tau_pushforward(&random_split(n, derive_seed(seed, 5))),
    ];
    Ok(tangents.iter().fold(orthogonality_error(&xi), |m, t| m.max(orthogonality_error(t))))
}

pub(super) fn chart_roundtrip(n: usize, seed: u64) -> Result<f64> {
    let u = random_projective_point(n, derive_seed(seed, 0));
    let z = random_projective_point(n, derive_seed(seed, 1));
    let xi = random_projective_tangent(&u, derive_seed(seed, 2));
    let point_side = chart_backward(&u, &chart_forward(&u, &z)?)?.ray_distance(&z);
    let back = chart_forward(&u, &chart_backward(&u, xi.vector())?)?;
    let coord_side = back
        .iter()
        .zip(xi.vector())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    Ok(point_side.max(coord_side))
}

pub(super) fn fs_metric_positive(n: usize, seed: u64) -> Result<f64> {
    let u = random_projective_point(n, derive_seed(seed, 0));
    let xi = random_projective_tangent(&u, derive_seed(seed, 1));
    let mut ok = fubini_study(&u, &xi, &xi)?.0 > 0.0;
    for b in real_orthonormal_basis(&u) {
        ok &= fubini_study(&u, &b, &b)?.0 > 0.0;
    }
    Ok(indicator(ok))
}

/// `| |det omega| - 1 |` in a `g_FS`-orthonormal real basis.
pub(super) fn fs_form_nondegenerate(n: usize, seed: u64) -> Result<f64> {
    let u = random_projective_point(n, derive_seed(seed, 0));
    Ok((symplectic_determinant(&u).abs() - 1.0).abs())
}

pub(super) fn chart_independence(n: usize, seed: u64) -> Result<f64> {
    let u = random_projective_point(n, derive_seed(seed, 0));
    let a = random_projective_tangent(&u, derive_seed(seed, 1));
    let b = random_projective_tangent(&u, derive_seed(seed, 2));
    let u2 = u.rephased(uniform(derive_seed(seed, 3), -3.0, 3.0));
    let (ta, tb) = (transfer_tangent(&u, &u2, &a)?, transfer_tangent(&u, &u2, &b)?);
    let (g1, w1) = fubini_study(&u, &a, &b)?;
    let (g2, w2) = fubini_study(&u2, &ta, &tb)?;
    Ok((g1 - g2).abs().max((w1 - w2).abs()))
}

fn random_deck(m: usize, seed: u64) -> DeckElement {
    DeckElement::new(
        random_raw(m, seed)
            .iter()
            .map(|r| (2.0 * r).round().clamp(-3.0, 3.0) as i64)
            .collect(),
    )
}

pub(super) fn deck_invariance(n: usize, seed: u64) -> Result<f64> {
    let (_, x) = base_tangent(n, seed);
    let k = random_deck(n - 1, derive_seed(seed, 2));
    Ok(tau(&deck_action(&k, &x)?).ray_distance(&tau(&x)))
}

pub(super) fn deck_free(n: usize, seed: u64) -> Result<f64> {
    let (_, x) = base_tangent(n, seed);
    let mut k = random_deck(n - 1, derive_seed(seed, 2));
    if k.is_identity() {
        k.k[0] = 1;
    }
    Ok(indicator(deck_action(&k, &x)?.sup_distance(&x)? > 1.0))
}

/// Perturbations of size in `[1e-3, 1e-1]` in split coordinates move `tau(x)`.
pub(super) fn local_injectivity(n: usize, seed: u64) -> Result<f64> {
    let (p, x) = base_tangent(n, seed);
    let dv = random_tangent(&p, derive_seed(seed, 2));
    let dw = random_tangent(&p, derive_seed(seed, 3));
    let size = uniform(derive_seed(seed, 4), 1e-3, 1e-1);
    let scale = size / dv.sup_norm().hypot(dw.sup_norm());
    let moved = exponential_geodesic(&p, &dv.scale(scale))?.point(1.0)?;
    let raw: Vec<f64> = x
        .components()
        .iter()
        .zip(dw.components())
        .map(|(u, w)| u + scale * w)
        .collect();
    let y = center(&moved, &raw)?;
    Ok(indicator(tau(&y).ray_distance(&tau(&x)) > 1e-6))
}

pub(super) fn pairing(n: usize, seed: u64) -> Result<f64> {
    let (x, y) = random_split_pair(n, seed);
    pairing_residual(&x, &y)
}

pub(super) fn pushforward_orthogonal(n: usize, seed: u64) -> Result<f64> {
    Ok(orthogonality_error(&tau_pushforward(&random_split(n, seed))))
}

pub(super) fn pushforward_commutes(n: usize, seed: u64) -> Result<f64> {
    let x = random_split(n, seed);
    Ok(tau_pushforward(&split_j(&x)).sup_distance(&j_fs(&tau_pushforward(&x))))
}

pub(super) fn pushforward_fd(n: usize, seed: u64) -> Result<f64> {
    let x = random_split(n, seed);
    Ok(tau_pushforward_fd(&x, DEFAULT_FD_STEP)?.sup_distance(&tau_pushforward(&x)))
}

pub(super) fn pullback_metric(n: usize, seed: u64) -> Result<f64> {
    let (x, y) = random_split_pair(n, seed);
    let (tx, ty) = (tau_pushforward(&x), tau_pushforward(&y));
    Ok((fubini_study(tx.base(), &tx, &ty)?.0 - split_metric_g(&x, &y)?).abs())
}

pub(super) fn pullback_symplectic(n: usize, seed: u64) -> Result<f64> {
    let (x, y) = random_split_pair(n, seed);
    let (tx, ty) = (tau_pushforward(&x), tau_pushforward(&y));
    Ok((fubini_study(tx.base(), &tx, &ty)?.1 - split_form_omega(&x, &y)?).abs())
}
