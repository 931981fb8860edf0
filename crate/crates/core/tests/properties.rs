use proptest::prelude::*;

use vahlen_core::clifford::{Multivector, VectorPoint};
use vahlen_core::eisenstein::hypergenic_lift;
use vahlen_core::modular::{generator_list, GroupElement, GroupParams};
use vahlen_core::operators::{sphere_monomial_integral, QuadratureRule};
use vahlen_core::summation::pairwise_sum;
use vahlen_core::vahlen::{weight_factor, VahlenMatrix, WeightKind};

fn mv(n: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec(-1.0f64..1.0, 1 << n).prop_map(move |c| Multivector::from_coeffs(n, c).unwrap())
}

fn upper_point(n: usize) -> impl Strategy<Value = VectorPoint> {
    (prop::collection::vec(-1.0f64..1.0, n - 1), 0.3f64..2.5).prop_map(|(mut c, t)| {
        c.push(t);
        VectorPoint::new(c)
    })
}

fn word(p: usize, max_len: usize) -> impl Strategy<Value = GroupElement> {
    let gens = generator_list(p);
    prop::collection::vec(0..gens.len(), 0..=max_len)
        .prop_map(move |ix| GroupElement::from_word(p, &ix.iter().map(|&i| gens[i]).collect::<Vec<_>>()))
}

fn close(a: &Multivector, b: &Multivector, rel: f64) -> bool {
    a.max_abs_diff(b) <= rel * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn product_is_associative((a, b, c) in (1usize..=5).prop_flat_map(|n| (mv(n), mv(n), mv(n)))) {
        prop_assert!(close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-12));
    }

    #[test]
    fn involutions_respect_products((a, b) in (1usize..=5).prop_flat_map(|n| (mv(n), mv(n)))) {
        let ab = &a * &b;
        prop_assert!(close(&ab.reversion(), &(&b.reversion() * &a.reversion()), 1e-12));
        prop_assert!(close(&ab.conjugate(), &(&b.conjugate() * &a.conjugate()), 1e-12));
        prop_assert!(close(&ab.grade_involution(), &(&a.grade_involution() * &b.grade_involution()), 1e-12));
        prop_assert!(close(&ab.hat(), &(&a.hat() * &b.hat()), 1e-12));
    }

    #[test]
    fn vectors_square_to_minus_norm(c in prop::collection::vec(-2.0f64..2.0, 1..=6)) {
        let x = VectorPoint::new(c);
        let m = x.to_multivector();
        let sq = &m * &m;
        prop_assert!(close(&sq, &Multivector::scalar(x.dim(), -x.norm_squared()), 1e-13));
    }

    #[test]
    fn pq_decomposition(a in (2usize..=5).prop_flat_map(mv)) {
        let n = a.dim();
        let en = Multivector::e(n, n);
        let back = &a.p_part() + &(&a.q_part() * &en);
        prop_assert!(close(&back, &a, 1e-14));
        prop_assert!(close(&(&a.q_part() * &en), &(&a - &a.p_part()), 1e-14));
    }

    #[test]
    fn group_words_are_vahlen(m in word(2, 8)) {
        prop_assert!(m.matrix.verify_vahlen_conditions().pass);
        let id = m.mul(&m.inverse());
        prop_assert!(id.matrix.a.is_one() && id.matrix.d.is_one());
        prop_assert!(id.matrix.b.is_zero() && id.matrix.c.is_zero());
    }

    #[test]
    fn mobius_action_composes(m in word(2, 6), l in word(2, 6), x in upper_point(4)) {
        let (mf, lf) = (m.matrix.to_float(4), l.matrix.to_float(4));
        let ml = mf.matrix_mul(&lf);
        let direct = ml.mobius_apply(&x).unwrap();
        let nested = mf.mobius_apply(&lf.mobius_apply(&x).unwrap()).unwrap();
        prop_assert!(direct.distance(&nested) <= 1e-10 * direct.norm().max(1.0));
        // the upper half-space is preserved
        prop_assert!(direct.last() > 0.0);
    }

    #[test]
    fn weights_are_cocycles(m in word(2, 5), l in word(2, 5), x in upper_point(4), k in -1.5f64..2.5) {
        let (mf, lf) = (m.matrix.to_float(4), l.matrix.to_float(4));
        let ml = mf.matrix_mul(&lf);
        let lx = lf.mobius_apply(&x).unwrap();
        for kind in [WeightKind::K, WeightKind::L] {
            let lhs = weight_factor(kind, k, &ml, &x).unwrap();
            let rhs = &weight_factor(kind, k, &lf, &x).unwrap() * &weight_factor(kind, k, &mf, &lx).unwrap();
            prop_assert!(close(&lhs, &rhs, 1e-10), "{kind:?}: {lhs:?} vs {rhs:?}");
        }
        for kj in [1.0, 2.0, 3.0] {
            let lhs = weight_factor(WeightKind::J, kj, &ml, &x).unwrap();
            let rhs = &weight_factor(WeightKind::J, kj, &lf, &x).unwrap() * &weight_factor(WeightKind::J, kj, &mf, &lx).unwrap();
            prop_assert!(close(&lhs, &rhs, 1e-10));
        }
    }

    #[test]
    fn image_height_is_h_weight(m in word(1, 6), x in upper_point(3)) {
        let mf = m.matrix.to_float(3);
        let h = weight_factor(WeightKind::H, 0.0, &mf, &x).unwrap().scalar_part();
        let img = mf.mobius_apply(&x).unwrap();
        prop_assert!((img.last() - h).abs() <= 1e-12 * h.max(1.0));
    }

    #[test]
    fn lift_round_trip(f in mv(4), x in upper_point(4), k in -3.0f64..3.0) {
        let g = hypergenic_lift(&f, k, &x).unwrap();
        let back = hypergenic_lift(&g, -k, &x).unwrap();
        prop_assert!(close(&back, &(-f), 1e-12));
    }

    #[test]
    fn pairwise_sum_matches_naive(v in prop::collection::vec(-1.0f64..1.0, 0..200)) {
        let terms: Vec<Multivector> = v.iter().map(|&c| Multivector::scalar(2, c)).collect();
        let s = pairwise_sum(2, &terms).scalar_part();
        let naive: f64 = v.iter().sum();
        prop_assert!((s - naive).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_rules_integrate_monomials(n in 2usize..=5, alpha in prop::collection::vec(0usize..4, 5)) {
        let alpha: Vec<usize> = alpha[..n].to_vec();
        let deg: usize = alpha.iter().sum();
        let rule = QuadratureRule::product_gauss(n, deg.max(2)).unwrap();
        let approx: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.coords.iter().zip(&alpha).map(|(c, &a)| c.powi(a as i32)).product::<f64>())
            .sum();
        prop_assert!((approx - sphere_monomial_integral(&alpha)).abs() < 1e-11);
    }

    #[test]
    fn translations_act_by_shift(u in prop::collection::vec(-3.0f64..3.0, 3), x in upper_point(3)) {
        let t = VahlenMatrix::translation(&VectorPoint::new(u.clone()));
        let img = t.mobius_apply(&x).unwrap();
        let expect = x.add(&VectorPoint::new(u));
        prop_assert!(img.distance(&expect) < 1e-14);
    }
}

#[test]
fn weights_reject_bad_parameters() {
    let params = GroupParams::new(3, 1, 1).unwrap();
    let m = GroupElement::parse_word(params.p, "J T1").unwrap().matrix.to_float(3);
    let x = VectorPoint::new(vec![0.1, 0.2, 0.8]);
    assert!(weight_factor(WeightKind::J, 3.0, &m, &x).is_err());
}
