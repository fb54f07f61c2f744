use padic_nagumo::operators::{
    apply_pd, semigroup_apply, taibleson_kochubei, taibleson_spectral, PdTerms, TailPolicy,
};
use padic_nagumo::padic::char_eval;
use padic_nagumo::radial::{embedding_constant_a, ExactRadialField};
use padic_nagumo::{PadicPoint, Prime, RadialField};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

fn field_for(p: Prime) -> impl Strategy<Value = RadialField> {
    (-8i64..=8, 0usize..=10)
        .prop_flat_map(move |(a, len)| {
            let b = (a + len as i64).min(8);
            (
                Just(a),
                Just(b),
                -2.0f64..2.0,
                prop::collection::vec(-2.0f64..2.0, (b - a) as usize),
            )
        })
        .prop_map(move |(a, b, ball, shells)| RadialField::new(p, a, b, ball, shells).unwrap())
}

fn field() -> impl Strategy<Value = RadialField> {
    prime().prop_flat_map(field_for)
}

fn pair() -> impl Strategy<Value = (RadialField, RadialField)> {
    prime().prop_flat_map(|p| (field_for(p), field_for(p)))
}

fn point_for(p: Prime) -> impl Strategy<Value = PadicPoint> {
    (-6i64..=6, prop::collection::vec(0u64..1000, 1..6)).prop_map(move |(order, raw)| {
        let mut digits: Vec<u64> = raw.iter().map(|d| d % p.get()).collect();
        digits[0] = 1 + raw[0] % (p.get() - 1);
        PadicPoint::new(p, order, digits).unwrap()
    })
}

fn points() -> impl Strategy<Value = (PadicPoint, PadicPoint)> {
    prime().prop_flat_map(|p| (point_for(p), point_for(p)))
}

fn gap(f: &RadialField, g: &RadialField) -> f64 {
    RadialField::linear_combine(1.0, f, -1.0, g)
        .unwrap()
        .norm_l2()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_fourier_is_an_involution(f in field()) {
        let e = ExactRadialField::from_field(&f);
        prop_assert_eq!(e.fourier().fourier(), e);
    }

    #[test]
    fn parseval(f in field()) {
        let n = f.norm_l2();
        prop_assert!((f.fourier().norm_l2() - n).abs() <= 1e-12 * n.max(1e-300));
    }

    #[test]
    fn sobolev_norm_is_monotone_in_s(f in field(), s in -3.0f64..3.0, ds in 0.0f64..2.0) {
        prop_assert!(f.norm_sobolev(s) <= f.norm_sobolev(s + ds) * (1.0 + 1e-14));
        prop_assert!((f.norm_sobolev(0.0) - f.norm_l2()).abs() <= 1e-12 * f.norm_l2().max(1e-300));
    }

    #[test]
    fn ultrametric_inequality((x, y) in points()) {
        let s = x.add(&y);
        let abs = |z: &PadicPoint| z.shell().map_or(f64::NEG_INFINITY, |k| k as f64);
        prop_assert!(abs(&s) <= abs(&x).max(abs(&y)));
        prop_assert_eq!(s.to_rational(), x.to_rational() + y.to_rational());
    }

    #[test]
    fn character_is_additive((x, y) in points()) {
        let lhs = char_eval(&x.add(&y));
        let rhs = char_eval(&x) * char_eval(&y);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn routes_agree((f, alpha) in (field(), 0.1f64..2.5)) {
        let tail = TailPolicy::default();
        let (s, es) = taibleson_spectral(&f, alpha, tail).unwrap();
        let (k, ek) = taibleson_kochubei(&f, alpha, tail).unwrap();
        // Small α with p = 2 leaves a visible deep-frequency cutoff; both
        // routes report theirs.
        prop_assert!(gap(&s, &k) <= 1e-8 * s.norm_l2().max(1e-12) + es.l2 + ek.l2);
    }

    #[test]
    fn derivative_kills_mass(f in field(), alpha in 0.1f64..2.5) {
        let (g, err) = taibleson_kochubei(&f, alpha, TailPolicy::default()).unwrap();
        // Shell contributions cancel, so rounding scales with ‖D^α f‖_1.
        prop_assert!(g.integral().abs() <= 1e-12 * g.norm_l1() + err.mass);
    }

    #[test]
    fn semigroup_property(f in field(), t1 in 0.0f64..1.0, t2 in 0.0f64..1.0, alpha in 0.2f64..2.0) {
        let tail = TailPolicy::default();
        let (a, e1) = semigroup_apply(&f, t1, 1.0, alpha, 0.3, tail).unwrap();
        let (ab, e2) = semigroup_apply(&a, t2, 1.0, alpha, 0.3, tail).unwrap();
        let (c, e3) = semigroup_apply(&f, t1 + t2, 1.0, alpha, 0.3, tail).unwrap();
        prop_assert!(gap(&ab, &c) <= 1e-10 * f.norm_l2() + e1.l2 + e2.l2 + e3.l2);
    }

    #[test]
    fn pd_is_linear((f, g) in pair(), c in -3.0f64..3.0, d1 in 0.0f64..0.5, d2 in 0.5f64..1.0) {
        let terms = PdTerms::new(vec![(1.0, d1), (-0.5, d2)]).unwrap();
        let tail = TailPolicy::default();
        let (lhs, e0) = apply_pd(&RadialField::linear_combine(1.0, &f, c, &g).unwrap(), &terms, tail).unwrap();
        let (pf, e1) = apply_pd(&f, &terms, tail).unwrap();
        let (pg, e2) = apply_pd(&g, &terms, tail).unwrap();
        let rhs = RadialField::linear_combine(1.0, &pf, c, &pg).unwrap();
        // Each call truncates the deep frequencies of its own window.
        let slack = e0.l2 + e1.l2 + c.abs() * e2.l2;
        prop_assert!(gap(&lhs, &rhs) <= 1e-10 * (pf.norm_l2() + c.abs() * pg.norm_l2()) + slack + 1e-12);
    }

    #[test]
    fn algebra_bound((f, g) in pair(), s in 1.05f64..4.0) {
        let a = embedding_constant_a(f.prime(), s).unwrap();
        let fg = RadialField::product(&f, &g).unwrap();
        prop_assert!(fg.norm_sobolev(s) <= 2.0 * a * f.norm_sobolev(s) * g.norm_sobolev(s) + 1e-9);
    }
}
