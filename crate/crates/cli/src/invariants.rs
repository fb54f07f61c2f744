//! Seeded property suites shared by `check-invariants` and the acceptance
//! tests. Each case draws from its own RNG derived from `(seed, suite, case)`,
//! so results do not depend on the number of worker threads.

use num_complex::Complex64;
use padic_nagumo::operators::{
    apply_pd, kochubei_pointwise, pd_product_constant, semigroup_apply, smoothing_bound,
    taibleson_kochubei, taibleson_spectral, PdTerms, TailPolicy,
};
use padic_nagumo::padic::{ball_measure, shell_measure, PadicPoint, Prime};
use padic_nagumo::radial::{embedding_constant_a, ExactRadialField};
use padic_nagumo::solver::{
    continuous_dependence_check, existence_time, lipschitz_l, picard_solve,
    smoothing_kernel_integral, Method, ModelParams, SolverConfig,
};
use padic_nagumo::wavelets::{blowup_weight_build, wavelet_eval, WaveletIndex};
use padic_nagumo::RadialField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub violations: usize,
    /// Largest observed value of the suite's figure of merit (an error or a
    /// lhs/rhs ratio, see `metric`).
    pub worst: f64,
    pub metric: &'static str,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct CaseResult {
    value: f64,
    ok: bool,
    detail: String,
}

impl CaseResult {
    fn new(value: f64, ok: bool, detail: impl FnOnce() -> String) -> Self {
        let detail = if ok { String::new() } else { detail() };
        CaseResult { value, ok, detail }
    }

    fn error(msg: String) -> Self {
        CaseResult {
            value: f64::INFINITY,
            ok: false,
            detail: msg,
        }
    }
}

fn case_rng(seed: u64, suite: u64, case: usize) -> ChaCha8Rng {
    let mixed = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(suite.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(case as u64);
    ChaCha8Rng::seed_from_u64(mixed)
}

fn run_suite<F>(
    name: &'static str,
    metric: &'static str,
    suite: u64,
    seed: u64,
    cases: usize,
    f: F,
) -> CheckOutcome
where
    F: Fn(usize, &mut ChaCha8Rng) -> CaseResult + Sync,
{
    let results: Vec<CaseResult> = (0..cases)
        .into_par_iter()
        .map(|i| f(i, &mut case_rng(seed, suite, i)))
        .collect();
    let violations = results.iter().filter(|r| !r.ok).count();
    CheckOutcome {
        name,
        cases,
        violations,
        worst: results.iter().map(|r| r.value).fold(0.0, f64::max),
        metric,
        first_failure: results.iter().find(|r| !r.ok).map(|r| r.detail.clone()),
    }
}

fn random_prime(rng: &mut ChaCha8Rng, choices: &[u64]) -> Prime {
    Prime::new(choices[rng.random_range(0..choices.len())]).expect("prime table")
}

fn random_field(rng: &mut ChaCha8Rng, p: Prime, lo: i64, hi: i64, amplitude: f64) -> RadialField {
    let a = rng.random_range(lo..=hi);
    let b = rng.random_range(a..=hi);
    let shells = (a..b)
        .map(|_| amplitude * rng.random_range(-1.0..1.0))
        .collect();
    RadialField::new(p, a, b, amplitude * rng.random_range(-1.0..1.0), shells)
        .expect("valid window")
}

fn field_on(rng: &mut ChaCha8Rng, p: Prime, a: i64, b: i64, lo: f64, hi: f64) -> RadialField {
    let ball = rng.random_range(lo..hi);
    let shells = (a..b).map(|_| rng.random_range(lo..hi)).collect();
    RadialField::new(p, a, b, ball, shells).expect("valid window")
}

fn random_pd(rng: &mut ChaCha8Rng, max_delta: f64) -> PdTerms {
    let n = rng.random_range(1..=3usize);
    let mut exps: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..max_delta)).collect();
    if rng.random_bool(0.3) {
        exps[0] = 0.0;
    }
    exps.sort_by(f64::total_cmp);
    exps.dedup();
    PdTerms::new(
        exps.into_iter()
            .map(|d| (rng.random_range(-2.0..2.0), d))
            .collect(),
    )
    .expect("sorted exponents")
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn l2_gap(f: &RadialField, g: &RadialField) -> f64 {
    RadialField::linear_combine(1.0, f, -1.0, g)
        .expect("same prime")
        .norm_l2()
}

/// Fourier involution, Parseval, ball-indicator transforms and Haar measure
/// identities; relative errors must stay below `1e-12`, exact identities
/// must hold exactly.
pub fn exactness(seed: u64, cases: usize) -> CheckOutcome {
    run_suite(
        "exactness",
        "max relative error",
        1,
        seed,
        cases,
        |_, rng| {
            let p = random_prime(rng, &[2, 3, 5, 7]);
            let f = random_field(rng, p, -8, 8, 1.0);
            let norm = f.norm_l2();
            let fh = f.fourier();
            let involution = rel(l2_gap(&fh.fourier(), &f), norm);
            let parseval = rel((fh.norm_l2() - norm).abs(), norm);

            let k = rng.random_range(-8..=8);
            let got = RadialField::ball_indicator(p, k).fourier();
            let want = RadialField::ball_indicator(p, -k).scale(p.pow_f64(k));
            let indicator = rel(l2_gap(&got, &want), want.norm_l2());

            let exact = ExactRadialField::from_field(&f);
            let exact_ok = exact.fourier().fourier() == exact;
            let measure_ok = {
                let lo = f.j_min();
                let partial = ((lo + 1)..=k.max(lo + 1))
                    .map(|j| shell_measure(p, j))
                    .fold(ball_measure(p, lo), |a, b| a + b);
                partial == ball_measure(p, k.max(lo + 1))
                    && shell_measure(p, k) == p.pow_exact(k) - p.pow_exact(k - 1)
            };

            let worst = involution.max(parseval).max(indicator);
            let ok = worst <= 1e-12 && exact_ok && measure_ok;
            CaseResult::new(worst, ok, || {
                format!(
                "p={p} window=[{}, {}]: involution {involution:e}, parseval {parseval:e}, \
                 indicator(k={k}) {indicator:e}, exact involution {exact_ok}, measures {measure_ok}",
                f.j_min(),
                f.j_max()
            )
            })
        },
    )
}

pub const EQUIVALENCE_ALPHAS: [f64; 4] = [0.2, 0.5, 1.0, 2.0];

/// Spectral and hypersingular `D^α` agree to `1e-8` in relative L².
pub fn operator_equivalence(seed: u64, cases: usize) -> CheckOutcome {
    run_suite(
        "operator-equivalence",
        "max relative L2 difference",
        2,
        seed,
        cases,
        |_, rng| {
            let p = random_prime(rng, &[2, 3, 5, 7]);
            let f = random_field(rng, p, -8, 8, 1.0);
            let tail = TailPolicy::default();
            let mut worst = 0.0f64;
            for alpha in EQUIVALENCE_ALPHAS {
                let pair = taibleson_spectral(&f, alpha, tail)
                    .and_then(|s| Ok((s.0, taibleson_kochubei(&f, alpha, tail)?.0)));
                match pair {
                    Ok((s, k)) => worst = worst.max(rel(l2_gap(&s, &k), s.norm_l2())),
                    Err(e) => return CaseResult::error(e.to_string()),
                }
            }
            CaseResult::new(worst, worst <= 1e-8, || {
                format!(
                    "p={p} window=[{}, {}]: relative difference {worst:e}",
                    f.j_min(),
                    f.j_max()
                )
            })
        },
    )
}

fn random_point(rng: &mut ChaCha8Rng, p: Prime, lo: i64, hi: i64) -> PadicPoint {
    if rng.random_bool(0.05) {
        return PadicPoint::zero(p);
    }
    let order = rng.random_range(lo..=hi);
    let len = rng.random_range(1..=5usize);
    let mut digits: Vec<u64> = (0..len).map(|_| rng.random_range(0..p.get())).collect();
    digits[0] = rng.random_range(1..p.get());
    PadicPoint::new(p, order, digits).expect("valid digits")
}

/// Pointwise hypersingular `D^α` on `Ψ_{r,0,j}` and on the blow-up weight
/// reproduces the eigenvalue `p^{(1-r)α}`. `points` points per `(p, r)`.
pub fn wavelet_eigenrelation(seed: u64, points: usize) -> CheckOutcome {
    let combos: Vec<(u64, i64)> = [3u64, 5]
        .iter()
        .flat_map(|&p| [-2i64, -1, 0].map(|r| (p, r)))
        .collect();
    let cases = combos.len() * points;
    run_suite(
        "wavelet-eigenrelation",
        "max relative error",
        3,
        seed,
        cases,
        move |case, rng| {
            let (pp, r) = combos[case / points];
            let p = Prime::new(pp).expect("prime");
            let alpha = [0.2, 0.5, 1.0, 2.0][rng.random_range(0..4)];
            let j = rng.random_range(1..pp);
            // Shells from well inside the support to two shells outside it.
            let x = random_point(rng, p, -r - 2, -r + 3);
            let lambda = p.as_f64().powf((1 - r) as f64 * alpha);

            let idx = WaveletIndex::centered(p, r, j).expect("valid index");
            let psi = kochubei_pointwise(p, |z| wavelet_eval(&idx, z), r - 1, r, alpha, &x);
            let w = blowup_weight_build(p, r, alpha).expect("odd prime, r <= 0");
            let wv = kochubei_pointwise(p, |z| Complex64::new(w.eval(z), 0.0), r - 1, r, alpha, &x);
            let (psi, wv) = match (psi, wv) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return CaseResult::error(e.to_string()),
            };
            let e1 = (psi - lambda * wavelet_eval(&idx, &x)).norm()
                / (lambda * p.as_f64().powf(-r as f64 / 2.0)).max(1.0);
            let e2 =
                (wv - lambda * w.eval(&x)).norm() / (lambda * p.as_f64().powf(-r as f64)).max(1.0);
            let worst = e1.max(e2);
            CaseResult::new(worst, worst <= 1e-8, || {
                format!("p={pp} r={r} j={j} α={alpha} x={x}: wavelet {e1:e}, weight {e2:e}")
            })
        },
    )
}

struct SemigroupCase {
    f: RadialField,
    t: f64,
    gamma: f64,
    alpha: f64,
    beta: f64,
    s: f64,
}

fn semigroup_case(rng: &mut ChaCha8Rng) -> SemigroupCase {
    let p = random_prime(rng, &[2, 3, 5, 7]);
    SemigroupCase {
        f: random_field(rng, p, -8, 8, 1.0),
        t: rng.random_range(1e-3..2.0),
        gamma: rng.random_range(0.1..3.0),
        alpha: rng.random_range(0.1..2.0),
        beta: rng.random_range(0.0..2.0),
        s: rng.random_range(-2.0..3.0),
    }
}

/// `‖V(t) f‖_s <= e^{-βt} ‖f‖_s`.
pub fn semigroup_contraction(seed: u64, cases: usize) -> CheckOutcome {
    run_suite(
        "semigroup-contraction",
        "max lhs/rhs",
        4,
        seed,
        cases,
        |_, rng| {
            let c = semigroup_case(rng);
            let (v, e) =
                match semigroup_apply(&c.f, c.t, c.gamma, c.alpha, c.beta, TailPolicy::default()) {
                    Ok(x) => x,
                    Err(err) => return CaseResult::error(err.to_string()),
                };
            let lhs = v.norm_sobolev(c.s);
            let rhs = (-c.beta * c.t).exp() * c.f.norm_sobolev(c.s);
            CaseResult::new(rel(lhs, rhs), lhs <= rhs + e.l2 + 1e-9, || {
                format!(
                    "t={} γ={} α={} β={} s={}: {lhs} > {rhs}",
                    c.t, c.gamma, c.alpha, c.beta, c.s
                )
            })
        },
    )
}

/// `‖V(t) f‖_{s+λ} <= e^{-βt}(1 + e^{-λ/(2α)}(λ/(2αγt))^{λ/(2α)}) ‖f‖_s`.
pub fn smoothing(seed: u64, cases: usize) -> CheckOutcome {
    run_suite(
        "smoothing-bound",
        "max lhs/rhs",
        5,
        seed,
        cases,
        |_, rng| {
            let c = semigroup_case(rng);
            let lambda = rng.random_range(0.0..3.0);
            let result =
                semigroup_apply(&c.f, c.t, c.gamma, c.alpha, c.beta, TailPolicy::default())
                    .and_then(|v| Ok((v, smoothing_bound(lambda, c.t, c.gamma, c.alpha, c.beta)?)));
            let ((v, e), factor) = match result {
                Ok(x) => x,
                Err(err) => return CaseResult::error(err.to_string()),
            };
            let lhs = v.norm_sobolev(c.s + lambda);
            let rhs = factor * c.f.norm_sobolev(c.s);
            CaseResult::new(rel(lhs, rhs), lhs <= rhs + e.l2 + 1e-9, || {
                format!(
                    "λ={lambda} t={} γ={} α={} β={} s={}: {lhs} > {rhs}",
                    c.t, c.gamma, c.alpha, c.beta, c.s
                )
            })
        },
    )
}

/// `‖f‖_s <= ‖f‖_{s1}^θ ‖f‖_{s2}^{1-θ}` for `s = θ s1 + (1-θ) s2`.
pub fn interpolation(seed: u64, cases: usize) -> CheckOutcome {
    run_suite("interpolation", "max lhs/rhs", 6, seed, cases, |_, rng| {
        let p = random_prime(rng, &[2, 3, 5, 7]);
        let f = random_field(rng, p, -8, 8, 1.0);
        let s1 = rng.random_range(-2.0..3.0);
        let s2 = s1 + rng.random_range(0.0..3.0);
        let theta: f64 = rng.random_range(0.0..=1.0);
        let s = theta * s1 + (1.0 - theta) * s2;
        let lhs = f.norm_sobolev(s);
        let rhs = f.norm_sobolev(s1).powf(theta) * f.norm_sobolev(s2).powf(1.0 - theta);
        CaseResult::new(rel(lhs, rhs), lhs <= rhs * (1.0 + 1e-12) + 1e-9, || {
            format!("s1={s1} s2={s2} θ={theta}: {lhs} > {rhs}")
        })
    })
}

/// `‖fg‖_s <= 2 A(1, s) ‖f‖_s ‖g‖_s` for `s > 1`.
pub fn banach_algebra(seed: u64, cases: usize) -> CheckOutcome {
    run_suite("banach-algebra", "max lhs/rhs", 7, seed, cases, |_, rng| {
        let p = random_prime(rng, &[2, 3, 5, 7]);
        let f = random_field(rng, p, -8, 8, 2.0);
        let g = random_field(rng, p, -8, 8, 2.0);
        let s = rng.random_range(1.05..4.0);
        let a = match embedding_constant_a(p, s) {
            Ok(a) => a,
            Err(e) => return CaseResult::error(e.to_string()),
        };
        let fg = RadialField::product(&f, &g).expect("same prime");
        let lhs = fg.norm_sobolev(s);
        let rhs = 2.0 * a * f.norm_sobolev(s) * g.norm_sobolev(s);
        CaseResult::new(rel(lhs, rhs), lhs <= rhs + 1e-9, || {
            format!("p={p} s={s}: {lhs} > {rhs}")
        })
    })
}

fn random_model(rng: &mut ChaCha8Rng, primes: &[u64], max_delta: f64) -> ModelParams {
    let pd = random_pd(rng, max_delta);
    let delta = pd.degree();
    ModelParams {
        p: random_prime(rng, primes),
        gamma: rng.random_range(0.5..2.0),
        alpha: rng.random_range(0.2..1.5),
        beta: rng.random_range(0.0..2.0),
        m: rng.random_range(1..=4),
        pd,
        s: 1.0 + 2.0 * delta + rng.random_range(0.05..2.0),
        reaction: true,
    }
}

/// `F(u) = (β+1)u² - u³ + P(D)(u^m)` through the spectral route.
fn nonlinearity(u: &RadialField, params: &ModelParams) -> padic_nagumo::Result<(RadialField, f64)> {
    let b1 = params.beta + 1.0;
    let poly = u.pointwise_map(|y| b1 * y * y - y * y * y);
    let m = params.m as i32;
    let (pd, e) = apply_pd(
        &u.pointwise_map(|y| y.powi(m)),
        &params.pd,
        TailPolicy::default(),
    )?;
    Ok((RadialField::linear_combine(1.0, &poly, 1.0, &pd)?, e.l2))
}

/// `‖F(u) - F(w)‖_{s-2δ} <= L(‖u‖_s, ‖w‖_s) ‖u - w‖_s`.
pub fn lipschitz(seed: u64, cases: usize) -> CheckOutcome {
    run_suite(
        "lipschitz-domination",
        "max lhs/rhs",
        8,
        seed,
        cases,
        |_, rng| {
            let params = random_model(rng, &[2, 3, 5, 7], 1.0);
            let a = rng.random_range(-6..=0);
            let b = rng.random_range(0..=6);
            let amp = rng.random_range(0.1..2.0);
            let mk = |rng: &mut ChaCha8Rng| field_on(rng, params.p, a, b, -amp, amp);
            let u = mk(rng);
            let w = if rng.random_bool(0.5) {
                let d = mk(rng);
                RadialField::linear_combine(1.0, &u, rng.random_range(1e-4..1.0), &d)
                    .expect("same prime")
            } else {
                mk(rng)
            };
            let s = params.s;
            let result = (|| {
                let (fu, eu) = nonlinearity(&u, &params)?;
                let (fw, ew) = nonlinearity(&w, &params)?;
                let diff = RadialField::linear_combine(1.0, &fu, -1.0, &fw)?;
                let l = lipschitz_l(u.norm_sobolev(s), w.norm_sobolev(s), &params)?;
                let uw = RadialField::linear_combine(1.0, &u, -1.0, &w)?.norm_sobolev(s);
                Ok::<_, padic_nagumo::Error>((
                    diff.norm_sobolev(s - 2.0 * params.pd.degree()),
                    l * uw,
                    eu + ew,
                ))
            })();
            let (lhs, rhs, slack) = match result {
                Ok(x) => x,
                Err(e) => return CaseResult::error(e.to_string()),
            };
            CaseResult::new(rel(lhs, rhs), lhs <= rhs + slack + 1e-9, || {
                format!("{params:?}: {lhs} > {rhs}")
            })
        },
    )
}

/// `‖P(D)(fg)‖_s <= (Σ|C_j|) 2A(1, s) ‖f‖_{s+2δ} ‖g‖_{s+2δ}`.
pub fn product_bound(seed: u64, cases: usize) -> CheckOutcome {
    run_suite(
        "pd-product-bound",
        "max lhs/rhs",
        9,
        seed,
        cases,
        |_, rng| {
            let p = random_prime(rng, &[2, 3, 5, 7]);
            let pd = random_pd(rng, 1.0);
            let delta = pd.degree();
            let s = rng.random_range(1.05..3.0);
            let f = random_field(rng, p, -8, 8, 2.0);
            let g = random_field(rng, p, -8, 8, 2.0);
            let result = (|| {
                let k = pd_product_constant(p, &pd, s)?;
                let (out, e) =
                    apply_pd(&RadialField::product(&f, &g)?, &pd, TailPolicy::default())?;
                Ok::<_, padic_nagumo::Error>((
                    out.norm_sobolev(s),
                    k * f.norm_sobolev(s + 2.0 * delta) * g.norm_sobolev(s + 2.0 * delta),
                    e.l2,
                ))
            })();
            let (lhs, rhs, slack) = match result {
                Ok(x) => x,
                Err(e) => return CaseResult::error(e.to_string()),
            };
            CaseResult::new(rel(lhs, rhs), lhs <= rhs + slack + 1e-9, || {
                format!("p={p} s={s} pd={pd:?}: {lhs} > {rhs}")
            })
        },
    )
}

/// `‖u(t) - v(t)‖_s <= e^{L(W,W) t} ‖f0 - f1‖_s + scheme error` along short
/// Euler runs.
pub fn gronwall(seed: u64, cases: usize) -> CheckOutcome {
    run_suite(
        "gronwall-envelope",
        "max distance/envelope",
        10,
        seed,
        cases,
        |_, rng| {
            let mut params = random_model(rng, &[2, 3, 5], 0.5);
            params.alpha = rng.random_range(0.2..1.0);
            params.m = rng.random_range(2..=3);
            params.beta = rng.random_range(0.0..1.0);
            let (a, b) = (-4, 4);
            let amp = rng.random_range(0.05..0.5);
            let f0 = field_on(rng, params.p, a, b, 0.0, amp);
            let eps = 10f64.powf(rng.random_range(-6.0..-2.0));
            let bump = field_on(rng, params.p, a, b, -1.0, 1.0);
            let f1 = RadialField::linear_combine(1.0, &f0, eps, &bump).expect("same prime");
            let stiff =
                params.gamma * params.p.as_f64().powf(params.alpha * b as f64) + params.beta + 3.0;
            let dt = 0.25 / stiff;
            let cfg = SolverConfig {
                j_min: a,
                j_max: b,
                dt,
                t_end: 10.0 * dt,
                save_every: 1,
                method: Method::EulerSpectral,
                ..SolverConfig::default()
            };
            match continuous_dependence_check(&f0, &f1, &params, &cfg) {
                Ok(r) => {
                    let ratio = r
                        .distance
                        .iter()
                        .zip(&r.envelope)
                        .map(|(d, e)| rel(*d, *e))
                        .fold(0.0, f64::max);
                    CaseResult::new(ratio, r.holds, || {
                        format!("{params:?} ε={eps}: envelope violated")
                    })
                }
                Err(e) => CaseResult::error(e.to_string()),
            }
        },
    )
}

/// Existence horizons satisfy both defining inequalities on substitution,
/// and Picard residual ratios on that horizon stay below 1.1 × the
/// contraction constant.
pub fn existence(seed: u64, cases: usize) -> CheckOutcome {
    run_suite(
        "existence-estimator",
        "max residual ratio / contraction",
        11,
        seed,
        cases,
        |_, rng| {
            let mut params = random_model(rng, &[3, 5], 1.0);
            params.alpha = rng.random_range(0.3..1.5);
            params.m = rng.random_range(2..=3);
            params.beta = rng.random_range(0.0..1.0);
            params.pd = if rng.random_bool(0.2) {
                PdTerms::empty()
            } else {
                PdTerms::new(vec![(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(0.0..0.8 * params.alpha),
                )])
                .expect("single term")
            };
            params.s = 1.0 + 2.0 * params.pd.degree() + rng.random_range(0.2..1.5);
            let f0_norm = rng.random_range(0.1..3.0);
            let m = rng.random_range(0.1..3.0);

            let est = match existence_time(f0_norm, m, &params) {
                Ok(e) => e,
                Err(e) => return CaseResult::error(format!("{params:?}: {e}")),
            };
            let w = m + f0_norm;
            let k = smoothing_kernel_integral(est.t, &params);
            let plug = (|| {
                let invariance = lipschitz_l(w, 0.0, &params)? * w * k <= m;
                let contraction = lipschitz_l(w, w, &params)? * k;
                Ok::<_, padic_nagumo::Error>(invariance && contraction < 1.0)
            })();
            if !matches!(plug, Ok(true)) {
                return CaseResult::error(format!(
                    "{params:?}: T = {} fails on substitution",
                    est.t
                ));
            }

            let raw = field_on(rng, params.p, -4, 4, -1.0, 1.0);
            let f0 = raw.scale(f0_norm / raw.norm_sobolev(params.s));
            let dt = est.t / 8.0;
            let cfg = SolverConfig {
                j_min: -4,
                j_max: 4,
                dt,
                t_end: 8.0 * dt,
                save_every: 8,
                max_picard_iters: 200,
                picard_tol: 1e-11 * f0_norm,
                method: Method::Picard,
                ..SolverConfig::default()
            };
            let traj = match picard_solve(&f0, &params, &cfg) {
                Ok(t) => t,
                Err(e) => return CaseResult::error(format!("{params:?}: {e}")),
            };
            let r = &traj.residuals;
            let floor = 1e-9 * r[0].max(f64::MIN_POSITIVE);
            let worst = r
                .windows(2)
                .take_while(|w| w[0] > floor && w[0] > 1e-12)
                .map(|w| w[1] / w[0])
                .fold(0.0, f64::max);
            let ratio = worst / est.contraction_constant;
            CaseResult::new(ratio, ratio <= 1.1, || {
                format!(
                    "{params:?}: residual ratio {worst} vs contraction {}",
                    est.contraction_constant
                )
            })
        },
    )
}

/// Every suite at its default case count.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        exactness(seed, 500),
        operator_equivalence(seed, 100),
        wavelet_eigenrelation(seed, 50),
        semigroup_contraction(seed, 1000),
        smoothing(seed, 1000),
        interpolation(seed, 1000),
        banach_algebra(seed, 1000),
        lipschitz(seed, 1000),
        product_bound(seed, 1000),
        gronwall(seed, 1000),
        existence(seed, 20),
    ]
}

/// Runs `f` on a pool capped by `NAGUMO_THREADS` when that is set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var("NAGUMO_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}
