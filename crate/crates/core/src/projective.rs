//! Complex projective space `P(C^n)` through unit-vector charts, and its
//! Fubini-Study structure.
//!
//! The Hermitian product is linear in the second argument:
//! `<a, b> = sum conj(a_i) b_i`.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Invariant ids checked by the verify suite.
pub const INVARIANTS: &[&str] = &[
    "projective.unit_norm",
    "projective.tangent_orthogonal",
    "projective.chart_roundtrip",
    "projective.metric_positive",
    "projective.form_nondegenerate",
    "projective.chart_independence",
];

/// Tolerance on `| |z| - 1 |` for point representatives.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance on `|<z, xi>|` (relative to `max(1, |xi|)`) for tangent vectors.
pub const ORTHO_TOL: f64 = 1e-12;
/// Two points are equal when `| |<z1, z2>| - 1 | <= RAY_TOL`.
pub const RAY_TOL: f64 = 1e-10;
/// Points with `|<u, z>|` at or below this are outside the chart centered at `u`.
pub const CHART_TOL: f64 = 1e-12;
/// Default step of the finite-difference chart transition.
pub const TRANSFER_STEP: f64 = 1e-6;

/// `<a, b>`, conjugate-linear in `a`.
pub fn hermitian(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Interleaves a complex vector as `[re_1, im_1, re_2, im_2, ...]`.
pub fn to_interleaved(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

pub fn from_interleaved(x: &[f64]) -> Result<Vec<Complex64>> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: x.len() + 1,
            found: x.len(),
        });
    }
    Ok(x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

fn serialize_interleaved<S: Serializer>(z: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    to_interleaved(z).serialize(s)
}

/// A point `[z]` stored through a unit representative `z`.
#[derive(Debug, Clone)]
pub struct ProjectivePoint {
    z: Vec<Complex64>,
}

/// Serialized as the interleaved representative.
impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_interleaved(&self.z, s)
    }
}

impl ProjectivePoint {
    /// Validates that `z` has unit norm.
    pub fn new(z: Vec<Complex64>) -> Result<Self> {
        let r = norm(&z);
        if !((r - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::NotUnitNorm { norm: r });
        }
        Ok(Self { z })
    }

    /// The ray through a nonzero vector.
    pub fn from_vector(z: &[Complex64]) -> Result<Self> {
        let r = norm(z);
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::NotUnitNorm { norm: r });
        }
        Self::new(z.iter().map(|c| c / r).collect())
    }

    pub fn representative(&self) -> &[Complex64] {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// `e^{i phi} z`, the same point.
    pub fn rephased(&self, phi: f64) -> Self {
        let l = Complex64::from_polar(1.0, phi);
        Self {
            z: self.z.iter().map(|c| l * c).collect(),
        }
    }

    /// `min_phi |z1 - e^{i phi} z2|`, a phase-insensitive distance.
    pub fn ray_distance(&self, other: &ProjectivePoint) -> f64 {
        let overlap = hermitian(&other.z, &self.z);
        let r = overlap.norm();
        let phase = if r > 0.0 { overlap / r } else { Complex64::new(1.0, 0.0) };
        let diff: Vec<Complex64> = self.z.iter().zip(&other.z).map(|(a, b)| a - phase * b).collect();
        norm(&diff)
    }

    /// Same representative up to [`UNIT_TOL`] componentwise (phase-sensitive).
    pub fn same_representative(&self, other: &ProjectivePoint) -> bool {
        self.len() == other.len()
            && self.z.iter().zip(&other.z).all(|(a, b)| (a - b).norm() <= UNIT_TOL)
    }

    /// Whether every homogeneous coordinate is nonzero.
    pub fn all_coordinates_nonzero(&self) -> bool {
        self.z.iter().all(|c| c.norm() > 0.0)
    }
}

/// Equality of rays: `|<z1, z2>| = 1` within [`RAY_TOL`].
impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && (hermitian(&self.z, &other.z).norm() - 1.0).abs() <= RAY_TOL
    }
}

/// A tangent vector `xi ∈ z^⊥` at `[z]`, in the chart centered at the
/// representative `z`.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectiveTangent {
    base: ProjectivePoint,
    #[serde(serialize_with = "serialize_interleaved")]
    vector: Vec<Complex64>,
}

impl ProjectiveTangent {
    pub fn new(base: ProjectivePoint, vector: Vec<Complex64>) -> Result<Self> {
        if base.len() != vector.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: vector.len(),
            });
        }
        let overlap = hermitian(&base.z, &vector).norm();
        if !(overlap <= ORTHO_TOL * norm(&vector).max(1.0)) {
            return Err(Error::NotOrthogonal { overlap });
        }
        Ok(Self { base, vector })
    }

    pub fn base(&self) -> &ProjectivePoint {
        &self.base
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            base: self.base.clone(),
            vector: self.vector.iter().map(|x| c * x).collect(),
        }
    }

    /// Largest componentwise modulus of the difference of the vectors.
    pub fn sup_distance(&self, other: &ProjectiveTangent) -> f64 {
        self.vector
            .iter()
            .zip(&other.vector)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// `phi_u([z]) = z / <u, z> - u`.
pub fn chart_forward(u: &ProjectivePoint, z: &ProjectivePoint) -> Result<Vec<Complex64>> {
    chart_forward_raw(u, &z.z)
}

fn chart_forward_raw(u: &ProjectivePoint, z: &[Complex64]) -> Result<Vec<Complex64>> {
    if u.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: z.len(),
        });
    }
    let overlap = hermitian(&u.z, z);
    if !(overlap.norm() > CHART_TOL) {
        return Err(Error::OutsideChart {
            overlap: overlap.norm(),
        });
    }
    Ok(z.iter().zip(&u.z).map(|(zi, ui)| zi / overlap - ui).collect())
}

/// `phi_u^{-1}(xi) = [u + xi]`, normalized.
pub fn chart_backward(u: &ProjectivePoint, xi: &[Complex64]) -> Result<ProjectivePoint> {
    if u.len() != xi.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: xi.len(),
        });
    }
    let overlap = hermitian(&u.z, xi).norm();
    if !(overlap <= RAY_TOL * norm(xi).max(1.0)) {
        return Err(Error::NotOrthogonal { overlap });
    }
    let v: Vec<Complex64> = u.z.iter().zip(xi).map(|(a, b)| a + b).collect();
    ProjectivePoint::from_vector(&v)
}

/// Fubini-Study metric and symplectic form at the chart center:
/// `(Re <xi1, xi2>, Im <xi1, xi2>)`.
pub fn fubini_study(
    u: &ProjectivePoint,
    xi1: &ProjectiveTangent,
    xi2: &ProjectiveTangent,
) -> Result<(f64, f64)> {
    if !xi1.base.same_representative(u) || !xi2.base.same_representative(u) {
        return Err(Error::BaseMismatch);
    }
    let h = hermitian(&xi1.vector, &xi2.vector);
    Ok((h.re, h.im))
}

/// The complex structure: multiplication by `i`.
pub fn j_fs(xi: &ProjectiveTangent) -> ProjectiveTangent {
    xi.scale(Complex64::i())
}

/// Expresses a tangent vector at the center of the chart of `u1` in the chart
/// of `u2`, where `u2` is another representative of the same ray.
///
/// The differential of `phi_{u2} ∘ phi_{u1}^{-1}` is taken by central differences.
pub fn transfer_tangent(
    u1: &ProjectivePoint,
    u2: &ProjectivePoint,
    xi: &ProjectiveTangent,
) -> Result<ProjectiveTangent> {
    if !xi.base.same_representative(u1) {
        return Err(Error::BaseMismatch);
    }
    if u1 != u2 {
        return Err(Error::NotSameRay);
    }
    let mut image = chart_transition_differential(u1, u2, &vec![Complex64::new(0.0, 0.0); u1.len()], &xi.vector, TRANSFER_STEP)?;
    // The chart takes values in u2^⊥; remove the rounding residue of the quotient.
    let overlap = hermitian(&u2.z, &image);
    image.iter_mut().zip(&u2.z).for_each(|(x, ui)| *x -= overlap * ui);
    ProjectiveTangent::new(u2.clone(), image)
}

/// Central-difference differential of `phi_{to} ∘ phi_{from}^{-1}` at the chart
/// coordinate `at`, applied to `direction`.
pub fn chart_transition_differential(
    from: &ProjectivePoint,
    to: &ProjectivePoint,
    at: &[Complex64],
    direction: &[Complex64],
    h: f64,
) -> Result<Vec<Complex64>> {
    let eval = |s: f64| -> Result<Vec<Complex64>> {
        let coord: Vec<Complex64> = at.iter().zip(direction).map(|(a, d)| a + d * s).collect();
        // Undo phi_from without renormalizing; the chart map is projective.
        let lifted: Vec<Complex64> = from.z.iter().zip(&coord).map(|(u, c)| u + c).collect();
        chart_forward_raw(to, &lifted)
    };
    let plus = eval(h)?;
    let minus = eval(-h)?;
    Ok(plus
        .iter()
        .zip(&minus)
        .map(|(a, b)| (a - b) / (2.0 * h))
        .collect())
}

/// A real basis of `u^⊥` that is orthonormal for `g_FS`, of size `2(n-1)`,
/// obtained by Gram-Schmidt on the projections of `e_j` and `i e_j`.
pub fn real_orthonormal_basis(u: &ProjectivePoint) -> Vec<ProjectiveTangent> {
    let n = u.len();
    let mut ortho: Vec<Vec<Complex64>> = Vec::with_capacity(2 * n);
    for j in 0..n {
        for unit in [Complex64::new(1.0, 0.0), Complex64::i()] {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[j] = unit;
            // Two passes keep the result orthogonal to u at rounding level.
            for _ in 0..2 {
                let o = hermitian(&u.z, &v);
                v.iter_mut().zip(&u.z).for_each(|(x, ui)| *x -= o * ui);
                for q in &ortho {
                    let g = hermitian(q, &v).re;
                    v.iter_mut().zip(q).for_each(|(x, y)| *x -= y * g);
                }
            }
            let r = norm(&v);
            if r > 1e-8 && ortho.len() < 2 * (n - 1) {
                ortho.push(v.iter().map(|x| x / r).collect());
            }
        }
    }
    ortho
        .into_iter()
        .map(|v| ProjectiveTangent::new(u.clone(), v).expect("projected onto u^⊥"))
        .collect()
}

/// Determinant of the matrix of `omega_FS` in [`real_orthonormal_basis`];
/// its modulus is 1 because `J_FS` is a `g_FS`-isometry.
pub fn symplectic_determinant(u: &ProjectivePoint) -> f64 {
    let basis = real_orthonormal_basis(u);
    let m = basis.len();
    let omega = nalgebra::DMatrix::from_fn(m, m, |a, b| hermitian(&basis[a].vector, &basis[b].vector).im);
    omega.determinant()
}

/// Point sampled from the uniform (unitarily invariant) measure on `P(C^n)`.
pub fn random_projective_point(n: usize, seed: u64) -> ProjectivePoint {
    let raw = crate::simplex::random_raw(2 * n, seed);
    let z: Vec<Complex64> = raw.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    ProjectivePoint::from_vector(&z).expect("gaussian vector is nonzero")
}

/// Gaussian vector projected onto `u^⊥`.
pub fn random_projective_tangent(u: &ProjectivePoint, seed: u64) -> ProjectiveTangent {
    let raw = crate::simplex::random_raw(2 * u.len(), seed);
    let mut v: Vec<Complex64> = raw.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let overlap = hermitian(&u.z, &v);
    v.iter_mut().zip(&u.z).for_each(|(x, ui)| *x -= overlap * ui);
    ProjectiveTangent::new(u.clone(), v).expect("projected vector is orthogonal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{derive_seed, sample_seed};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e1() -> ProjectivePoint {
        ProjectivePoint::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn chart_forward_examples() {
        let u = e1();
        assert!(chart_forward(&u, &u).unwrap().iter().all(|x| x.norm() == 0.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = ProjectivePoint::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        let xi = chart_forward(&u, &z).unwrap();
        assert!((xi[0] - c(0.0, 0.0)).norm() < 1e-15 && (xi[1] - c(1.0, 0.0)).norm() < 1e-15);
        let w = ProjectivePoint::new(vec![c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(matches!(chart_forward(&u, &w), Err(Error::OutsideChart { .. })));
    }

    #[test]
    fn chart_backward_examples() {
        let u = e1();
        assert!(chart_backward(&u, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap().same_representative(&u));
        let z = chart_backward(&u, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(z, ProjectivePoint::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap());
        assert!(matches!(
            chart_backward(&u, &[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn chart_roundtrip() {
        for k in 0..100u64 {
            let s = sample_seed(1, k);
            let n = 2 + (k % 5) as usize;
            let u = random_projective_point(n, derive_seed(s, 0));
            let xi = random_projective_tangent(&u, derive_seed(s, 1));
            let back = chart_forward(&u, &chart_backward(&u, xi.vector()).unwrap()).unwrap();
            let err = back.iter().zip(xi.vector()).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            assert!(err <= 1e-10);
            assert!(hermitian(u.representative(), &back).norm() <= 1e-10);
        }
    }

    #[test]
    fn fubini_study_examples() {
        let u = e1();
        let xi = ProjectiveTangent::new(u.clone(), vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let ixi = ProjectiveTangent::new(u.clone(), vec![c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(fubini_study(&u, &xi, &ixi).unwrap(), (0.0, 1.0));
        assert_eq!(fubini_study(&u, &xi, &xi).unwrap(), (1.0, 0.0));

        let v = random_projective_point(4, 3);
        let t = random_projective_tangent(&v, 4);
        let (g, w) = fubini_study(&v, &t, &t).unwrap();
        let n2 = norm(t.vector()).powi(2);
        assert!((g - n2).abs() < 1e-14 && w == 0.0);
        let (g, w) = fubini_study(&v, &t, &j_fs(&t)).unwrap();
        assert!(g.abs() < 1e-14 && (w - n2).abs() < 1e-14);

        assert!(matches!(fubini_study(&u.rephased(0.3), &xi, &xi), Err(Error::BaseMismatch)));
    }

    #[test]
    fn complex_structure_compatibility() {
        for k in 0..200u64 {
            let s = sample_seed(2, k);
            let n = 2 + (k % 7) as usize;
            let u = random_projective_point(n, derive_seed(s, 0));
            let a = random_projective_tangent(&u, derive_seed(s, 1));
            let b = random_projective_tangent(&u, derive_seed(s, 2));
            let jja = j_fs(&j_fs(&a));
            assert!(jja.sup_distance(&a.scale(c(-1.0, 0.0))) == 0.0);
            let (g, w) = fubini_study(&u, &a, &b).unwrap();
            let (gj, _) = fubini_study(&u, &j_fs(&a), &j_fs(&b)).unwrap();
            assert!((g - gj).abs() <= 1e-14);
            let (g_ja_b, _) = fubini_study(&u, &j_fs(&a), &b).unwrap();
            assert!((w - g_ja_b).abs() <= 1e-14);
            let (_, w_ba) = fubini_study(&u, &b, &a).unwrap();
            assert!((w + w_ba).abs() <= 1e-15);
        }
    }

    #[test]
    fn metric_is_positive_and_form_nondegenerate() {
        for k in 0..50u64 {
            let s = sample_seed(3, k);
            let n = 2 + (k % 4) as usize;
            let u = random_projective_point(n, s);
            let ortho = real_orthonormal_basis(&u);
            assert_eq!(ortho.len(), 2 * (n - 1));
            let m = ortho.len();
            let mut omega = nalgebra::DMatrix::zeros(m, m);
            for a in 0..m {
                for b in 0..m {
                    omega[(a, b)] = fubini_study(&u, &ortho[a], &ortho[b]).unwrap().1;
                }
                assert!(fubini_study(&u, &ortho[a], &ortho[a]).unwrap().0 > 0.0);
            }
            // In a g-orthonormal basis the form is a rotation: |det| = 1.
            assert!((omega.determinant().abs() - 1.0).abs() < 1e-8);
            assert!((symplectic_determinant(&u).abs() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn phase_transfer_multiplies_by_phase() {
        for k in 0..200u64 {
            let s = sample_seed(4, k);
            let n = [2, 3, 5][(k % 3) as usize];
            let u1 = random_projective_point(n, derive_seed(s, 0));
            let phi = 6.0 * (derive_seed(s, 1) as f64 / u64::MAX as f64) - 3.0;
            let u2 = u1.rephased(phi);
            let a = random_projective_tangent(&u1, derive_seed(s, 2));
            let b = random_projective_tangent(&u1, derive_seed(s, 3));
            let ta = transfer_tangent(&u1, &u2, &a).unwrap();
            let tb = transfer_tangent(&u1, &u2, &b).unwrap();
            // phi_{λu}(z) = λ phi_u(z) for |λ| = 1.
            let expected = a.scale(Complex64::from_polar(1.0, phi));
            assert!(ta.sup_distance(&expected) < 1e-8);
            let before = fubini_study(&u1, &a, &b).unwrap();
            let after = fubini_study(&u2, &ta, &tb).unwrap();
            assert!((before.0 - after.0).abs() <= 1e-6 && (before.1 - after.1).abs() <= 1e-6);
            let back = transfer_tangent(&u2, &u1, &ta).unwrap();
            assert!(back.sup_distance(&a) <= 1e-8);
        }
    }

    #[test]
    fn transfer_requires_same_ray() {
        let u1 = random_projective_point(3, 1);
        let u2 = random_projective_point(3, 2);
        let xi = random_projective_tangent(&u1, 3);
        assert!(matches!(transfer_tangent(&u1, &u2, &xi), Err(Error::NotSameRay)));
    }

    #[test]
    fn chart_transition_obeys_chain_rule() {
        // Velocity of t -> [z + t eta] in chart b equals the transition
        // differential applied to its velocity in chart a.
        for k in 0..50u64 {
            let s = sample_seed(5, k);
            let n = [2, 3, 5][(k % 3) as usize];
            let a = random_projective_point(n, derive_seed(s, 0));
            let b = random_projective_point(n, derive_seed(s, 1));
            let z = random_projective_point(n, derive_seed(s, 2));
            let eta = random_projective_tangent(&z, derive_seed(s, 3));
            let h = 1e-6;
            let velocity_in = |chart: &ProjectivePoint| -> Vec<Complex64> {
                let at = |t: f64| {
                    let v: Vec<Complex64> =
                        z.representative().iter().zip(eta.vector()).map(|(x, e)| x + e * t).collect();
                    chart_forward_raw(chart, &v).unwrap()
                };
                at(h).iter().zip(at(-h)).map(|(p, m)| (p - m) / (2.0 * h)).collect()
            };
            let in_a = velocity_in(&a);
            let in_b = velocity_in(&b);
            let za = chart_forward(&a, &z).unwrap();
            let mapped = chart_transition_differential(&a, &b, &za, &in_a, h).unwrap();
            let scale = norm(&in_b).max(1.0);
            let err = mapped.iter().zip(&in_b).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
            assert!(err <= 1e-6 * scale, "err {err}");
        }
    }

    #[test]
    fn equality_is_phase_insensitive() {
        let z = random_projective_point(4, 9);
        assert_eq!(z, z.rephased(1.234));
        assert!(z.ray_distance(&z.rephased(-2.0)) < 1e-15);
        assert_ne!(z, random_projective_point(4, 10));
        assert!(ProjectivePoint::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn interleaved_serialization() {
        let u = e1();
        assert_eq!(serde_json::to_string(&u).unwrap(), "[1.0,0.0,0.0,0.0]");
        let v = vec![c(1.0, 2.0), c(-3.0, 0.5)];
        assert_eq!(from_interleaved(&to_interleaved(&v)).unwrap(), v);
        assert!(from_interleaved(&[1.0, 2.0, 3.0]).is_err());
    }
}
