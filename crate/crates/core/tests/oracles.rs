//! Closed-form values computed by hand, checked against the library.

use approx::assert_relative_eq;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_nagumo::operators::{
    kochubei_constant, semigroup_apply, taibleson_kochubei, taibleson_spectral, TailPolicy,
};
use padic_nagumo::padic::{char_eval, valuation, Order};
use padic_nagumo::radial::{embedding_constant_a, ExactRadialField};
use padic_nagumo::{PadicPoint, Prime, RadialField};

fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

#[test]
fn valuations_of_small_rationals() {
    assert_eq!(valuation(12, 1, p(2)).unwrap(), Order::Finite(2));
    assert_eq!(valuation(1, 9, p(3)).unwrap(), Order::Finite(-2));
    assert_eq!(valuation(-50, 7, p(5)).unwrap(), Order::Finite(2));
    assert_eq!(valuation(0, 7, p(5)).unwrap(), Order::Infinite);
    assert!(Prime::new(9).is_err());
}

#[test]
fn expansion_of_a_fraction() {
    // 7/9 = 1·3^{-2} + 2·3^{-1}
    let x = PadicPoint::from_ratio(p(3), 7, 9).unwrap();
    assert_eq!(x.digits(), &[1, 2]);
    assert_eq!(x.shell(), Some(2));
    assert_eq!(x.fractional_part(), BigRational::new(7.into(), 9.into()));
    assert!(PadicPoint::from_ratio(p(3), 1, 2).is_err());
}

#[test]
fn character_values() {
    let x = PadicPoint::from_ratio(p(5), 1, 5).unwrap();
    let want = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
    assert!((char_eval(&x) - want).norm() < 1e-15);
    let integer = PadicPoint::from_ratio(p(5), 30, 1).unwrap();
    assert!((char_eval(&integer) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn shell_indicator_transform() {
    // F[1_{S_k}] = p^k 1_{B_{-k}} - p^{k-1} 1_{B_{1-k}}
    for &pp in &[2u64, 3, 7] {
        let q = p(pp);
        for k in -3..=3 {
            let f =
                RadialField::from_profile(q, k - 1, k, |j| if j == k { 1.0 } else { 0.0 }).unwrap();
            let exact = ExactRadialField::from_field(&f).fourier();
            for j in -6..=6 {
                let mut want = BigRational::zero();
                if j <= -k {
                    want += q.pow_exact(k);
                }
                if j <= 1 - k {
                    want -= q.pow_exact(k - 1);
                }
                assert_eq!(exact.value_at_shell(j), want, "p={pp} k={k} j={j}");
            }
        }
    }
}

#[test]
fn kochubei_constant_values() {
    assert_relative_eq!(kochubei_constant(p(3), 1.0), -2.25, max_relative = 1e-15);
    assert_relative_eq!(
        kochubei_constant(p(2), 1.0),
        -4.0 / 3.0,
        max_relative = 1e-15
    );
}

#[test]
fn embedding_constant_values() {
    // A(1, 2)^2 = 1 + (1 - 1/p) p^{-1} / (1 - p^{-1}) = 1 + 1/p
    for &pp in &[2u64, 3, 5] {
        let a = embedding_constant_a(p(pp), 2.0).unwrap();
        assert_relative_eq!(a * a, 1.0 + 1.0 / pp as f64, max_relative = 1e-14);
    }
    assert!(embedding_constant_a(p(3), 1.0).is_err());
}

/// `D^α 1_{Z_p}` equals `(1 - 1/p) / (1 - p^{-α-1})` on `Z_p` and
/// `c_α |x|^{-α-1}` outside.
#[test]
fn fractional_derivative_of_unit_ball() {
    for &pp in &[2u64, 3, 5] {
        let q = p(pp);
        for &alpha in &[0.3, 1.0, 1.7] {
            let qa = q.as_f64().powf(-alpha - 1.0);
            let inside = (1.0 - 1.0 / q.as_f64()) / (1.0 - qa);
            let c = kochubei_constant(q, alpha);
            let f = RadialField::ball_indicator(q, 0);
            let tail = TailPolicy::default();
            for (g, _) in [
                taibleson_spectral(&f, alpha, tail).unwrap(),
                taibleson_kochubei(&f, alpha, tail).unwrap(),
            ] {
                assert_relative_eq!(g.value_at_shell(0), inside, max_relative = 1e-10);
                assert_relative_eq!(g.value_at_shell(-5), inside, max_relative = 1e-10);
                for v in 1..=12 {
                    let want = c * q.as_f64().powf(-(v as f64) * (alpha + 1.0));
                    assert_relative_eq!(g.value_at_shell(v), want, max_relative = 1e-9);
                }
            }
        }
    }
}

/// `V(t) 1_{Z_p}(0) = Σ_{k<=0} e^{-γ t p^{kα}} μ(S_k)`.
#[test]
fn heat_kernel_at_origin() {
    let q = p(3);
    let (t, gamma, alpha) = (0.7, 1.3, 0.5);
    let want: f64 = (-400..=0)
        .map(|k: i64| {
            (-gamma * t * q.as_f64().powf(alpha * k as f64)).exp()
                * (2.0 / 3.0)
                * 3f64.powi(k as i32)
        })
        .sum();
    let (g, err) = semigroup_apply(
        &RadialField::ball_indicator(q, 0),
        t,
        gamma,
        alpha,
        0.0,
        TailPolicy::default(),
    )
    .unwrap();
    assert!((g.value_at_shell(-100) - want).abs() <= 1e-12 + err.l2);
    // Mass is conserved exactly.
    assert_relative_eq!(g.integral(), 1.0, max_relative = 1e-12);
}

#[test]
fn exact_ball_transform_is_self_dual() {
    let q = p(5);
    let exact = ExactRadialField::from_field(&RadialField::ball_indicator(q, 0)).fourier();
    assert_eq!(exact.value_at_shell(0), BigRational::one());
    assert_eq!(exact.value_at_shell(1), BigRational::zero());
}
