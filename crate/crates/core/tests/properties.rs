use proptest::prelude::*;

use fisher_kahler::covering::{deck_action, pairing_residual, tau, tau_pushforward, DeckElement};
use fisher_kahler::dombrowski::{split_form_omega, split_j, split_metric_g, SplitDoubleTangent};
use fisher_kahler::projective::{chart_backward, chart_forward, hermitian, ProjectivePoint};
use fisher_kahler::simplex::{center, fisher_metric, Distribution, TangentVector};
use num_complex::Complex64;

fn distribution(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Distribution> {
    prop::collection::vec(1e-3..1.0f64, n).prop_map(|w| Distribution::normalize(&w).unwrap())
}

fn point_and_raws(k: usize) -> impl Strategy<Value = (Distribution, Vec<Vec<f64>>)> {
    distribution(2..=9).prop_flat_map(move |p| {
        let n = p.len();
        (Just(p), prop::collection::vec(prop::collection::vec(-5.0..5.0f64, n), k))
    })
}

fn split(p: &Distribution, raws: &[Vec<f64>]) -> SplitDoubleTangent {
    let t = |r: &Vec<f64>| center(p, r).unwrap();
    SplitDoubleTangent::new(t(&raws[0]), t(&raws[1]), t(&raws[2])).unwrap()
}

proptest! {
    #[test]
    fn centering_is_idempotent((p, raws) in point_and_raws(1)) {
        let once = center(&p, &raws[0]).unwrap();
        let twice = center(&p, once.components()).unwrap();
        prop_assert!(twice.sup_distance(&once).unwrap() <= 1e-14);
        prop_assert!(p.expectation(once.components()).unwrap().abs() <= 1e-12 * once.sup_norm().max(1.0));
    }

    #[test]
    fn fisher_metric_is_symmetric_and_positive((p, raws) in point_and_raws(2)) {
        let u = center(&p, &raws[0]).unwrap();
        let v = center(&p, &raws[1]).unwrap();
        prop_assert!((fisher_metric(&u, &v).unwrap() - fisher_metric(&v, &u).unwrap()).abs() <= 1e-14);
        if u.sup_norm() > 1e-6 {
            prop_assert!(fisher_metric(&u, &u).unwrap() > 0.0);
        }
    }

    #[test]
    fn almost_hermitian_identities((p, raws) in point_and_raws(6)) {
        let x = split(&p, &raws[0..3]);
        let y = split(&p, &[raws[0].clone(), raws[4].clone(), raws[5].clone()]);
        let jj = split_j(&split_j(&x));
        prop_assert_eq!(jj.horizontal().scale(-1.0), x.horizontal().clone());
        prop_assert_eq!(jj.vertical().scale(-1.0), x.vertical().clone());
        let g = split_metric_g(&x, &y).unwrap();
        prop_assert!((split_metric_g(&split_j(&x), &split_j(&y)).unwrap() - g).abs() <= 1e-14 * g.abs().max(1.0));
        prop_assert!((split_form_omega(&x, &y).unwrap() - split_metric_g(&split_j(&x), &y).unwrap()).abs() <= 1e-14);
    }

    #[test]
    fn pairing_identity((p, raws) in point_and_raws(6)) {
        let x = split(&p, &raws[0..3]);
        let y = split(&p, &[raws[0].clone(), raws[4].clone(), raws[5].clone()]);
        prop_assert!(pairing_residual(&x, &y).unwrap() <= 1e-10);
        let xi = tau_pushforward(&x);
        prop_assert!(hermitian(tau(x.foot()).representative(), xi.vector()).norm() <= 1e-12);
    }

    #[test]
    fn deck_shifts_preserve_tau(
        (p, raws) in point_and_raws(1),
        ks in prop::collection::vec(-50i64..50, 8),
    ) {
        let x = center(&p, &raws[0]).unwrap();
        let k = DeckElement::new(ks[..p.len() - 1].to_vec());
        let y = deck_action(&k, &x).unwrap();
        prop_assert!(tau(&y).ray_distance(&tau(&x)) <= 1e-10);
    }

    #[test]
    fn half_deck_shifts_change_tau((p, raws) in point_and_raws(1), i in 0usize..8) {
        // A 2 pi shift of one coordinate flips the sign of one entry of tau.
        let i = i % (p.len() - 1);
        let mut shifted = raws[0].clone();
        shifted[i] += 2.0 * std::f64::consts::PI;
        let a = tau(&center(&p, &raws[0]).unwrap());
        let b = tau(&center(&p, &shifted).unwrap());
        prop_assert!(a.ray_distance(&b) > 1e-6);
    }

    #[test]
    fn chart_roundtrip(
        u in prop::collection::vec(-1.0..1.0f64, 6),
        z in prop::collection::vec(-1.0..1.0f64, 6),
    ) {
        let to_point = |x: &[f64]| {
            let c: Vec<Complex64> = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
            ProjectivePoint::from_vector(&c)
        };
        let (Ok(u), Ok(z)) = (to_point(&u), to_point(&z)) else { return Ok(()) };
        prop_assume!(hermitian(u.representative(), z.representative()).norm() > 1e-3);
        let xi = chart_forward(&u, &z).unwrap();
        prop_assert!(chart_backward(&u, &xi).unwrap().ray_distance(&z) <= 1e-10);
    }

    #[test]
    fn tangent_vectors_reject_uncentered(p in distribution(2..=6), shift in 1e-6..1.0f64) {
        let raw = vec![shift; p.len()];
        prop_assert!(TangentVector::new(p.clone(), raw).is_err());
    }
}
