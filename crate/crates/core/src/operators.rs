//! Radial Fourier multipliers and the Taibleson operator.
//!
//! Two independent realisations of `D^α` are provided: the spectral one
//! (`F^{-1} ‖ξ‖^α F`) and Kochubei's hypersingular integral
//!
//! ```text
//! (D^α f)(x) = (1 - p^α)/(1 - p^{-α-1}) ∫ ‖y‖^{-α-1} (f(x - y) - f(x)) dy
//! ```
//!
//! evaluated shell by shell. Both extend the output window by
//! `tail_depth` shells past `j_max` and report an [`ErrorBound`] for
//! everything beyond that.

use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{shell_measure_f64, PadicPoint, Prime};
use crate::radial::{embedding_constant_a, RadialField};
use crate::sum::CompensatedSum;

pub const DEFAULT_TAIL_DEPTH: usize = 40;

/// Look-ahead used to estimate `sup |m - m_limit|` on the deep ball.
const SUP_LOOKAHEAD: i64 = 64;

/// Largest coset enumeration accepted by [`kochubei_pointwise`].
const MAX_COSETS: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailPolicy {
    pub tail_depth: usize,
}

impl TailPolicy {
    pub fn new(tail_depth: usize) -> Result<Self> {
        if tail_depth == 0 {
            return Err(Error::InvalidArgument(
                "tail_depth must be at least 1".into(),
            ));
        }
        Ok(TailPolicy { tail_depth })
    }

    #[inline]
    fn depth(&self) -> i64 {
        self.tail_depth as i64
    }
}

impl Default for TailPolicy {
    fn default() -> Self {
        TailPolicy {
            tail_depth: DEFAULT_TAIL_DEPTH,
        }
    }
}

/// Bound on the difference between a computed field and the exact operator
/// output: `l2` bounds the L² norm, `mass` bounds `|∫ difference|`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorBound {
    pub l2: f64,
    pub mass: f64,
}

impl ErrorBound {
    pub const ZERO: ErrorBound = ErrorBound { l2: 0.0, mass: 0.0 };

    pub fn new(l2: f64, mass: f64) -> Self {
        ErrorBound { l2, mass }
    }

    /// Single number dominating both components.
    pub fn total(&self) -> f64 {
        self.l2 + self.mass
    }
}

impl Add for ErrorBound {
    type Output = ErrorBound;
    fn add(self, o: ErrorBound) -> ErrorBound {
        ErrorBound::new(self.l2 + o.l2, self.mass + o.mass)
    }
}

impl AddAssign for ErrorBound {
    fn add_assign(&mut self, o: ErrorBound) {
        *self = *self + o;
    }
}

impl Mul<ErrorBound> for f64 {
    type Output = ErrorBound;
    fn mul(self, e: ErrorBound) -> ErrorBound {
        ErrorBound::new(self.abs() * e.l2, self.abs() * e.mass)
    }
}

/// Which realisation of `D^α` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorRoute {
    Spectral,
    Kochubei,
}

/// `P(D) = Σ C_j D^{δ_j}` with strictly increasing exponents `δ_j >= 0`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PdTerms {
    terms: Vec<(f64, f64)>,
}

impl PdTerms {
    pub fn new(terms: Vec<(f64, f64)>) -> Result<Self> {
        for &(c, d) in &terms {
            if !c.is_finite() || !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "invalid P(D) term ({c}, {d})"
                )));
            }
        }
        if terms.windows(2).any(|w| w[1].1 <= w[0].1) {
            return Err(Error::InvalidArgument(
                "P(D) exponents must be strictly increasing".into(),
            ));
        }
        Ok(PdTerms { terms })
    }

    pub fn empty() -> Self {
        PdTerms { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `δ`, the largest exponent (zero for an empty operator).
    pub fn degree(&self) -> f64 {
        self.terms.last().map_or(0.0, |t| t.1)
    }

    pub fn abs_coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.0.abs()).sum()
    }
}

/// `F^{-1}(m(‖ξ‖) F f)`, with `m(k)` the multiplier on `‖ξ‖ = p^k` and
/// `m_limit` its limit as `‖ξ‖ → 0`.
///
/// The Fourier image's inner ball is split into `tail_depth` explicit shells;
/// below that the multiplier is replaced by `m_limit`. The output lives on
/// `[j_min, j_max + tail_depth]`.
pub fn apply_multiplier<M: Fn(i64) -> f64>(
    f: &RadialField,
    m: M,
    m_limit: f64,
    tail: TailPolicy,
) -> (RadialField, ErrorBound) {
    let p = f.prime();
    let fh = f.fourier();
    let deep = fh.j_min() - tail.depth();
    let shells = ((deep + 1)..=fh.j_max())
        .map(|k| fh.value_at_shell(k) * m(k))
        .collect::<Vec<_>>();
    let g = RadialField::new(p, deep, fh.j_max(), fh.ball_value() * m_limit, shells)
        .expect("window is consistent by construction");

    let sup = (0..SUP_LOOKAHEAD)
        .map(|i| (m(deep - i) - m_limit).abs())
        .fold(0.0, f64::max);
    let l2 = fh.ball_value().abs() * sup * p.pow_f64(deep).sqrt();
    // The zero frequency is carried exactly by m_limit, so the integral is exact.
    (g.fourier(), ErrorBound::new(l2, 0.0))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "α must be positive, got {alpha}"
        )));
    }
    Ok(())
}

/// `D^α` as the Fourier multiplier `‖ξ‖^α`.
pub fn taibleson_spectral(
    f: &RadialField,
    alpha: f64,
    tail: TailPolicy,
) -> Result<(RadialField, ErrorBound)> {
    check_alpha(alpha)?;
    let p = f.prime();
    Ok(apply_multiplier(
        f,
        |k| p.as_f64().powf(alpha * k as f64),
        0.0,
        tail,
    ))
}

/// `(1 - p^α) / (1 - p^{-α-1})`.
pub fn kochubei_constant(p: Prime, alpha: f64) -> f64 {
    let pf = p.as_f64();
    (1.0 - pf.powf(alpha)) / (1.0 - pf.powf(-alpha - 1.0))
}

/// `D^α` through the hypersingular integral, summed shell by shell.
///
/// For `x ∈ S_m` with `f = f_m` there, ultrametricity splits the integral into
///
/// ```text
/// c_α [ p^{-m(α+1)} ∫_{B_{m-1}} (f - f_m) + (1 - 1/p) Σ_{k>m} p^{-kα} (f_k - f_m) ]
/// ```
///
/// (shells `‖y‖ < ‖x‖` contribute nothing). The part of the outer series
/// beyond `j_max`, where `f` vanishes, is a geometric series summed in
/// closed form. Output shells stop at `j_max + tail_depth`; the returned bound
/// covers the omitted far field `c_α p^{-m(α+1)} ∫ f`.
pub fn taibleson_kochubei(
    f: &RadialField,
    alpha: f64,
    tail: TailPolicy,
) -> Result<(RadialField, ErrorBound)> {
    check_alpha(alpha)?;
    let p = f.prime();
    let pf = p.as_f64();
    let (a, b) = f.window();
    let top = b + tail.depth();
    let c_alpha = kochubei_constant(p, alpha);
    let unit = 1.0 - 1.0 / pf;
    let geo_alpha = 1.0 - pf.powf(-alpha);
    let outer_weight = |k: i64| unit * pf.powf(-alpha * k as f64);

    let value = |m: i64| -> f64 {
        let fm = f.value_at_shell(m);
        let mut inner = CompensatedSum::new();
        if m > a {
            inner.add((f.ball_value() - fm) * p.pow_f64(a));
            for k in (a + 1)..=(m - 1).min(b) {
                inner.add((f.value_at_shell(k) - fm) * shell_measure_f64(p, k));
            }
        }
        let mut acc = CompensatedSum::new();
        acc.add(pf.powf(-(alpha + 1.0) * m as f64) * inner.value());
        for k in (m + 1)..=b {
            acc.add(outer_weight(k) * (f.value_at_shell(k) - fm));
        }
        let start = m.max(b) + 1;
        acc.add(-fm * unit * pf.powf(-alpha * start as f64) / geo_alpha);
        c_alpha * acc.value()
    };

    let out = RadialField::new(p, a, top, value(a), ((a + 1)..=top).map(value).collect())
        .expect("window is consistent by construction");

    let far = (c_alpha * f.integral()).abs();
    let s2 = 2.0 * alpha + 1.0;
    let l2 = far * (unit * pf.powf(-s2 * (top + 1) as f64) / (1.0 - pf.powf(-s2))).sqrt();
    let mass = far * unit * pf.powf(-alpha * (top + 1) as f64) / geo_alpha;
    Ok((out, ErrorBound::new(l2, mass)))
}

pub fn taibleson(
    route: OperatorRoute,
    f: &RadialField,
    alpha: f64,
    tail: TailPolicy,
) -> Result<(RadialField, ErrorBound)> {
    match route {
        OperatorRoute::Spectral => taibleson_spectral(f, alpha, tail),
        OperatorRoute::Kochubei => taibleson_kochubei(f, alpha, tail),
    }
}

/// `P(D) f` through the spectral route.
pub fn apply_pd(
    f: &RadialField,
    terms: &PdTerms,
    tail: TailPolicy,
) -> Result<(RadialField, ErrorBound)> {
    apply_pd_with(OperatorRoute::Spectral, f, terms, tail)
}

/// `P(D) f = Σ C_j D^{δ_j} f`; a zero exponent acts as the identity.
pub fn apply_pd_with(
    route: OperatorRoute,
    f: &RadialField,
    terms: &PdTerms,
    tail: TailPolicy,
) -> Result<(RadialField, ErrorBound)> {
    let (a, b) = f.window();
    let mut out = RadialField::zero(f.prime(), a, b)?;
    let mut err = ErrorBound::ZERO;
    for &(c, delta) in terms.terms() {
        let term = if delta == 0.0 {
            f.clone()
        } else {
            let (g, e) = taibleson(route, f, delta, tail)?;
            err += c * e;
            g
        };
        out = RadialField::linear_combine(1.0, &out, c, &term)?;
    }
    Ok((out, err))
}

/// `V(t) f = F^{-1}(e^{-(γ‖ξ‖^α + β)t} F f)`.
pub fn semigroup_apply(
    f: &RadialField,
    t: f64,
    gamma: f64,
    alpha: f64,
    beta: f64,
    tail: TailPolicy,
) -> Result<(RadialField, ErrorBound)> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative time {t}")));
    }
    if !(gamma > 0.0) || !(beta >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "semigroup needs γ > 0 and β >= 0, got γ = {gamma}, β = {beta}"
        )));
    }
    check_alpha(alpha)?;
    if t == 0.0 {
        return Ok((f.clone(), ErrorBound::ZERO));
    }
    let p = f.prime();
    let m = |k: i64| (-(gamma * p.as_f64().powf(alpha * k as f64) + beta) * t).exp();
    Ok(apply_multiplier(f, m, (-beta * t).exp(), tail))
}

/// Smoothing factor: `‖V(t) f‖_{s+λ} <= smoothing_bound(λ, t, …) ‖f‖_s`.
///
/// Equal to `e^{-βt} (1 + C (λ / (2αγt))^{λ/(2α)})` with `C = e^{-λ/(2α)}`;
/// for `λ = 0` this is `2 e^{-βt}`.
pub fn smoothing_bound(lambda: f64, t: f64, gamma: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "smoothing bound needs t > 0, got {t}"
        )));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "λ must be >= 0, got {lambda}"
        )));
    }
    check_alpha(alpha)?;
    let e = lambda / (2.0 * alpha);
    let core = if lambda == 0.0 {
        1.0
    } else {
        (-e).exp() * (lambda / (2.0 * alpha * gamma * t)).powf(e)
    };
    Ok((-beta * t).exp() * (1.0 + core))
}

/// Conservative constant for `‖P(D)(fg)‖_s <= K ‖f‖_{s+2δ} ‖g‖_{s+2δ}`:
/// `K = (Σ|C_j|) 2 A(1, s_floor)` where `s_floor` is the smallest index at
/// which products are formed.
pub fn pd_product_constant(p: Prime, terms: &PdTerms, s_floor: f64) -> Result<f64> {
    Ok(terms.abs_coefficient_sum() * 2.0 * embedding_constant_a(p, s_floor)?)
}

/// Pointwise `D^α f (x)` for a function that is constant on cosets of
/// `B_scale` and supported in `B_support`.
///
/// Shells `scale < k <= max(support, shell(x))` are integrated by summing over
/// coset representatives; the remaining shells only see `-f(x)` and are summed
/// in closed form.
pub fn kochubei_pointwise<F>(
    p: Prime,
    f: F,
    scale: i64,
    support: i64,
    alpha: f64,
    x: &PadicPoint,
) -> Result<Complex64>
where
    F: Fn(&PadicPoint) -> Complex64,
{
    check_alpha(alpha)?;
    if x.prime() != p {
        return Err(Error::InvalidArgument(
            "point over a different prime".into(),
        ));
    }
    let pf = p.as_f64();
    let fx = f(x);
    let top = support.max(x.shell().unwrap_or(i64::MIN)).max(scale);

    let cosets: u64 = ((scale + 1)..=top)
        .map(|k| (p.get() - 1).saturating_mul(p.get().saturating_pow((k - scale - 1) as u32)))
        .fold(0u64, |a, b| a.saturating_add(b));
    if cosets > MAX_COSETS {
        return Err(Error::Unsupported(format!(
            "pointwise evaluation would enumerate {cosets} cosets"
        )));
    }

    let coset_measure = p.pow_f64(scale);
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for k in (scale + 1)..=top {
        let weight = pf.powf(-(alpha + 1.0) * k as f64) * coset_measure;
        let len = (k - scale) as usize;
        let mut digits = vec![0u64; len];
        digits[0] = 1;
        loop {
            let y = PadicPoint::with_cap(p, -k, digits.clone(), usize::MAX)?;
            let d = f(&x.sub_mod(&y, -scale)) - fx;
            re.add(weight * d.re);
            im.add(weight * d.im);
            if !next_digits(&mut digits, p.get()) {
                break;
            }
        }
    }
    let unit = 1.0 - 1.0 / pf;
    let tail = unit * pf.powf(-alpha * (top + 1) as f64) / (1.0 - pf.powf(-alpha));
    re.add(-fx.re * tail);
    im.add(-fx.im * tail);
    Ok(kochubei_constant(p, alpha) * Complex64::new(re.value(), im.value()))
}

/// Odometer over digit vectors with a nonzero leading digit.
fn next_digits(digits: &mut [u64], p: u64) -> bool {
    for i in (0..digits.len()).rev() {
        let lo = if i == 0 { 1 } else { 0 };
        if digits[i] + 1 < p {
            digits[i] += 1;
            return true;
        }
        digits[i] = lo;
    }
    false
}
