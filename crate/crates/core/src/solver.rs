//! Time integration of
//!
//! ```text
//! u_t = -γ D^α u - u³ + (β+1)u² - βu + P(D)(u^m)
//! ```
//!
//! for radial data: forward Euler on the differential form and Picard
//! iteration on the mild (Duhamel) form, plus the explicit constants behind
//! local existence and continuous dependence.
//!
//! The state always lives on the configured window. Operators return fields
//! extending past it; the excess is dropped after every step and its L² norm
//! and mass are charged to the trajectory's error budget together with the
//! operators' own tail bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{
    apply_pd_with, semigroup_apply, taibleson, ErrorBound, OperatorRoute, PdTerms, TailPolicy,
};
use crate::padic::Prime;
use crate::radial::{embedding_constant_a, RadialField};
use crate::wavelets::{comparison_h, pairing_g, BlowupWeight, ComparisonParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub p: Prime,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub m: u32,
    pub pd: PdTerms,
    /// Working Sobolev index.
    pub s: f64,
    /// When false the polynomial reaction `-u³ + (β+1)u² - βu` is dropped
    /// (pure diffusion plus `P(D)(u^m)`).
    pub reaction: bool,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return bad(format!("γ must be positive, got {}", self.gamma));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return bad(format!("α must be positive, got {}", self.alpha));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return bad(format!("β must be nonnegative, got {}", self.beta));
        }
        if self.m == 0 {
            return bad("m must be a positive integer".into());
        }
        if !(self.s - 2.0 * self.pd.degree() > 0.5) {
            return bad(format!(
                "need s - 2δ > 1/2, got s = {} and δ = {}",
                self.s,
                self.pd.degree()
            ));
        }
        Ok(())
    }

    /// The mild formulation additionally needs `δ < α` for the smoothing
    /// kernel `(t - τ)^{-δ/α}` to be integrable.
    pub fn validate_mild(&self) -> Result<()> {
        self.validate()?;
        if !(self.pd.degree() < self.alpha) {
            return Err(Error::InvalidArgument(format!(
                "mild solver needs δ < α, got δ = {} and α = {}",
                self.pd.degree(),
                self.alpha
            )));
        }
        Ok(())
    }

    /// Pure diffusion `u_t = -D^α u` with `p = 3`, `α = 0.2`.
    pub fn figure1_left() -> Self {
        ModelParams {
            p: Prime::new(3).expect("3 is prime"),
            gamma: 1.0,
            alpha: 0.2,
            beta: 0.0,
            m: 3,
            pd: PdTerms::empty(),
            s: 1.5,
            reaction: false,
        }
    }

    /// `u_t = -D^α u + F(u) + D^{α₁} u³` with `p = 3`, `α = 0.2`,
    /// `α₁ = 0.1`, `β = 0.7`.
    pub fn figure1_right() -> Self {
        ModelParams {
            beta: 0.7,
            pd: PdTerms::new(vec![(1.0, 0.1)]).expect("valid terms"),
            reaction: true,
            ..Self::figure1_left()
        }
    }

    fn effective_beta(&self) -> f64 {
        if self.reaction {
            self.beta
        } else {
            0.0
        }
    }

    /// Parameters of the scalar comparison function for a weight at scale `r`.
    pub fn comparison(&self, r: i64) -> ComparisonParams {
        ComparisonParams {
            p: self.p,
            gamma: self.gamma,
            alpha: self.alpha,
            alpha1: self.pd.degree(),
            beta: self.beta,
            r,
        }
    }
}

/// `A e^{-p^{|ord|}/B}` sampled on shells `j = -ord`.
pub fn gaussian_profile(
    p: Prime,
    j_min: i64,
    j_max: i64,
    amplitude: f64,
    width: f64,
) -> Result<RadialField> {
    RadialField::from_profile(p, j_min, j_max, |k| {
        amplitude * (-p.as_f64().powf(k.unsigned_abs() as f64) / width).exp()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    EulerKochubei,
    EulerSpectral,
    Picard,
}

impl Method {
    fn route(self) -> OperatorRoute {
        match self {
            Method::EulerKochubei => OperatorRoute::Kochubei,
            Method::EulerSpectral | Method::Picard => OperatorRoute::Spectral,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub j_min: i64,
    pub j_max: i64,
    pub dt: f64,
    pub t_end: f64,
    pub save_every: usize,
    pub tail: TailPolicy,
    pub blowup_threshold: f64,
    pub max_picard_iters: usize,
    pub picard_tol: f64,
    pub method: Method,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            j_min: -20,
            j_max: 20,
            dt: 1e-3,
            t_end: 3.0,
            save_every: 10,
            tail: TailPolicy::default(),
            blowup_threshold: 1e6,
            max_picard_iters: 60,
            picard_tol: 1e-10,
            method: Method::EulerKochubei,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.j_min > self.j_max {
            return Err(Error::InvalidWindow {
                j_min: self.j_min,
                j_max: self.j_max,
            });
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return bad(format!("t_end must be nonnegative, got {}", self.t_end));
        }
        if self.save_every == 0 {
            return bad("save_every must be positive".into());
        }
        if !(self.blowup_threshold > 0.0) {
            return bad(format!(
                "blow-up threshold must be positive, got {}",
                self.blowup_threshold
            ));
        }
        Ok(())
    }

    /// Number of uniform steps reaching `t_end`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupBracket {
    pub t_lo: f64,
    pub t_hi: f64,
    pub sup_lo: f64,
    pub sup_hi: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<RadialField>,
    pub sup_norm: Vec<f64>,
    pub l2_norm: Vec<f64>,
    pub hs_norm: Vec<f64>,
    pub mass: Vec<f64>,
    /// `G(t) = ∫ u w`, present when a weight was supplied.
    pub g_value: Option<Vec<f64>>,
    pub blowup: Option<BlowupBracket>,
    /// Accumulated bound on truncation errors, in L² and mass alike.
    pub error_budget: f64,
    /// Picard residual history `sup_t ‖u^{(i+1)} - u^{(i)}‖_s`.
    pub residuals: Vec<f64>,
}

impl Trajectory {
    fn record(&mut self, t: f64, u: &RadialField, s: f64, w: Option<&BlowupWeight>) -> Result<()> {
        self.times.push(t);
        self.sup_norm.push(u.norm_sup());
        self.l2_norm.push(u.norm_l2());
        self.hs_norm.push(u.norm_sobolev(s));
        self.mass.push(u.integral());
        if let Some(w) = w {
            self.g_value
                .get_or_insert_with(Vec::new)
                .push(pairing_g(u, w)?);
        }
        self.snapshots.push(u.clone());
        Ok(())
    }

    pub fn last(&self) -> Option<&RadialField> {
        self.snapshots.last()
    }
}

/// `F(y) = -y³ + (β+1)y² - βy`.
#[inline]
pub fn reaction_polynomial(y: f64, beta: f64) -> f64 {
    y * (-y * y + (beta + 1.0) * y - beta)
}

/// Right-hand side of the equation, computed with the given route for `D^α`
/// and `P(D)`. The output extends `tail_depth` shells past `u`'s window.
pub fn rhs(
    u: &RadialField,
    params: &ModelParams,
    route: OperatorRoute,
    tail: TailPolicy,
) -> Result<(RadialField, ErrorBound)> {
    let (diffusion, mut err) = taibleson(route, u, params.alpha, tail)?;
    let mut out = diffusion.scale(-params.gamma);
    err = params.gamma * err;
    if params.reaction {
        let beta = params.beta;
        out = RadialField::linear_combine(
            1.0,
            &out,
            1.0,
            &u.pointwise_map(|y| reaction_polynomial(y, beta)),
        )?;
    }
    if !params.pd.is_empty() {
        let m = params.m as i32;
        let (pd, e) = apply_pd_with(route, &u.pointwise_map(|y| y.powi(m)), &params.pd, tail)?;
        out = RadialField::linear_combine(1.0, &out, 1.0, &pd)?;
        err += e;
    }
    Ok((out, err))
}

/// Cost of dropping `removed` from a field, in the budget's units.
fn removal_cost(removed: &RadialField) -> f64 {
    removed.norm_l2() + removed.integral().abs()
}

struct EulerStepper<'a> {
    params: &'a ModelParams,
    route: OperatorRoute,
    tail: TailPolicy,
    window: (i64, i64),
}

impl EulerStepper<'_> {
    /// `u + h rhs(u)` restricted to the window, and the budget increment.
    fn step(&self, u: &RadialField, h: f64) -> Result<(RadialField, f64)> {
        let (r, e) = rhs(u, self.params, self.route, self.tail)?;
        let (kept, removed) = r.split_window(self.window.0, self.window.1)?;
        let next = RadialField::linear_combine(1.0, u, h, &kept)?;
        Ok((next, h * (e.total() + removal_cost(&removed))))
    }
}

fn bring_to_window(f0: &RadialField, cfg: &SolverConfig) -> Result<RadialField> {
    if f0.j_min() < cfg.j_min || f0.j_max() > cfg.j_max {
        return Err(Error::InvalidArgument(format!(
            "initial window [{}, {}] is not inside the solver window [{}, {}]",
            f0.j_min(),
            f0.j_max(),
            cfg.j_min,
            cfg.j_max
        )));
    }
    Ok(f0.retruncate(cfg.j_min, cfg.j_max)?.0)
}

/// Forward Euler `u_{k+1} = u_k + dt rhs(u_k)` on the uniform grid `k dt`.
///
/// When the sup norm reaches `blowup_threshold` (or a step produces a
/// non-finite value) the march stops and the crossing is bracketed by
/// re-marching from the last state below threshold with successively halved
/// steps, until the bracket is no wider than `dt / 2^10`.
pub fn euler_run(
    f0: &RadialField,
    params: &ModelParams,
    cfg: &SolverConfig,
    weight: Option<&BlowupWeight>,
) -> Result<Trajectory> {
    params.validate()?;
    cfg.validate()?;
    if cfg.method == Method::Picard {
        return Err(Error::InvalidArgument(
            "euler_run called with the Picard method".into(),
        ));
    }
    let stepper = EulerStepper {
        params,
        route: cfg.method.route(),
        tail: cfg.tail,
        window: (cfg.j_min, cfg.j_max),
    };
    let threshold = cfg.blowup_threshold;
    let crossed = |u: &RadialField| !u.is_finite() || u.norm_sup() >= threshold;

    let mut traj = Trajectory::default();
    let mut u = bring_to_window(f0, cfg)?;
    traj.record(0.0, &u, params.s, weight)?;
    if crossed(&u) {
        let sup = u.norm_sup();
        traj.blowup = Some(BlowupBracket {
            t_lo: 0.0,
            t_hi: 0.0,
            sup_lo: sup,
            sup_hi: sup,
        });
        return Ok(traj);
    }

    let mut budget = 0.0;
    for step in 1..=cfg.steps() {
        let t_prev = (step - 1) as f64 * cfg.dt;
        let (next, cost) = stepper.step(&u, cfg.dt)?;
        if crossed(&next) {
            let sup_hi = next.norm_sup();
            traj.blowup = Some(refine_bracket(
                &stepper, u, t_prev, cfg.dt, sup_hi, &crossed,
            )?);
            break;
        }
        budget += cost;
        u = next;
        if step % cfg.save_every == 0 {
            traj.record(step as f64 * cfg.dt, &u, params.s, weight)?;
        }
    }
    traj.error_budget = budget;
    Ok(traj)
}

fn refine_bracket(
    stepper: &EulerStepper<'_>,
    mut lo: RadialField,
    mut t_lo: f64,
    dt: f64,
    sup_hi: f64,
    crossed: &dyn Fn(&RadialField) -> bool,
) -> Result<BlowupBracket> {
    let nan_to_inf = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let mut bracket = BlowupBracket {
        t_lo,
        t_hi: t_lo + dt,
        sup_lo: lo.norm_sup(),
        sup_hi: nan_to_inf(sup_hi),
    };
    let min_width = dt / 1024.0;
    let mut h = dt;
    while h > min_width {
        h *= 0.5;
        // Finer steps may cross a little later than the coarse ones; allow a
        // generous number of steps before giving up on this level.
        let mut found = false;
        for _ in 0..(1usize << 16) {
            let (next, _) = stepper.step(&lo, h)?;
            if crossed(&next) {
                bracket = BlowupBracket {
                    t_lo,
                    t_hi: t_lo + h,
                    sup_lo: lo.norm_sup(),
                    sup_hi: nan_to_inf(next.norm_sup()),
                };
                found = true;
                break;
            }
            lo = next;
            t_lo += h;
        }
        if !found {
            break;
        }
    }
    Ok(bracket)
}

/// Mild nonlinearity `(β+1)u² - u³ + P(D)(u^m)`; the `-βu` term belongs to
/// the semigroup.
fn mild_nonlinearity(
    u: &RadialField,
    params: &ModelParams,
    tail: TailPolicy,
) -> Result<(RadialField, ErrorBound)> {
    let mut out = if params.reaction {
        let b1 = params.beta + 1.0;
        u.pointwise_map(|y| b1 * y * y - y * y * y)
    } else {
        RadialField::zero(u.prime(), u.j_min(), u.j_max())?
    };
    let mut err = ErrorBound::ZERO;
    if !params.pd.is_empty() {
        let m = params.m as i32;
        let (pd, e) = apply_pd_with(
            OperatorRoute::Spectral,
            &u.pointwise_map(|y| y.powi(m)),
            &params.pd,
            tail,
        )?;
        out = RadialField::linear_combine(1.0, &out, 1.0, &pd)?;
        err = e;
    }
    Ok((out, err))
}

struct Semigroup<'a> {
    params: &'a ModelParams,
    tail: TailPolicy,
    window: (i64, i64),
}

impl Semigroup<'_> {
    /// `V(t) f` restricted to the window, and the budget increment.
    fn apply(&self, f: &RadialField, t: f64) -> Result<(RadialField, f64)> {
        let (g, e) = semigroup_apply(
            f,
            t,
            self.params.gamma,
            self.params.alpha,
            self.params.effective_beta(),
            self.tail,
        )?;
        let (kept, removed) = g.split_window(self.window.0, self.window.1)?;
        Ok((kept, e.total() + removal_cost(&removed)))
    }
}

/// Picard iteration on the mild form
/// `u(t) = V(t) f0 + ∫_0^t V(t - τ) F(u(τ)) dτ`.
///
/// The Duhamel integral uses the midpoint rule on the `dt` grid, accumulated
/// recursively: `I_i = V(dt) I_{i-1} + dt V(dt/2) F((u_{i-1} + u_i)/2)`.
/// Iteration starts from `u^{(0)}(t) = V(t) f0` and stops once
/// `sup_t ‖u^{(i+1)}(t) - u^{(i)}(t)‖_s <= picard_tol`.
pub fn picard_solve(
    f0: &RadialField,
    params: &ModelParams,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    params.validate_mild()?;
    cfg.validate()?;
    let n = cfg.steps();
    let dt = cfg.dt;
    let semigroup = Semigroup {
        params,
        tail: cfg.tail,
        window: (cfg.j_min, cfg.j_max),
    };
    let f0 = bring_to_window(f0, cfg)?;

    let mut base = Vec::with_capacity(n + 1);
    let mut base_budget = 0.0;
    for i in 0..=n {
        let (v, c) = semigroup.apply(&f0, i as f64 * dt)?;
        base_budget += c;
        base.push(v);
    }

    let mut current = base.clone();
    let mut residuals = Vec::new();
    let mut budget;
    loop {
        let mut next = Vec::with_capacity(n + 1);
        next.push(base[0].clone());
        let mut integral = RadialField::zero(f0.prime(), cfg.j_min, cfg.j_max)?;
        let mut iter_budget = base_budget;
        for i in 1..=n {
            let mid = RadialField::linear_combine(0.5, &current[i - 1], 0.5, &current[i])?;
            let (fm, e) = mild_nonlinearity(&mid, params, cfg.tail)?;
            let (fm, removed) = fm.split_window(cfg.j_min, cfg.j_max)?;
            let (propagated, c1) = semigroup.apply(&integral, dt)?;
            let (kick, c2) = semigroup.apply(&fm, 0.5 * dt)?;
            integral = RadialField::linear_combine(1.0, &propagated, dt, &kick)?;
            iter_budget += c1 + dt * (c2 + e.total() + removal_cost(&removed));
            next.push(RadialField::linear_combine(1.0, &base[i], 1.0, &integral)?);
        }
        let residual = current
            .iter()
            .zip(&next)
            .map(|(a, b)| {
                RadialField::linear_combine(1.0, b, -1.0, a).map(|d| d.norm_sobolev(params.s))
            })
            .try_fold(0.0f64, |acc, r| {
                r.map(|r| if r.is_nan() { f64::NAN } else { acc.max(r) })
            })?;
        residuals.push(residual);
        current = next;
        budget = iter_budget;
        if !residual.is_finite() {
            return Err(Error::IterationDiverged { residuals });
        }
        if residual <= cfg.picard_tol {
            break;
        }
        if residuals.len() >= cfg.max_picard_iters {
            return Err(Error::IterationDiverged { residuals });
        }
    }

    let mut traj = Trajectory::default();
    for (i, u) in current.iter().enumerate() {
        if i % cfg.save_every == 0 {
            traj.record(i as f64 * dt, u, params.s, None)?;
        }
    }
    traj.error_budget = budget;
    traj.residuals = residuals;
    Ok(traj)
}

/// `C = (1 + Σ|C_j|) 2 A(1, s - 2δ)`, the constant shared by every term of
/// the Lipschitz function.
pub fn lipschitz_constant_c(params: &ModelParams) -> Result<f64> {
    let a = embedding_constant_a(params.p, params.s - 2.0 * params.pd.degree())?;
    Ok((1.0 + params.pd.abs_coefficient_sum()) * 2.0 * a)
}

/// `L(a, b) = C(β+1)(a+b) + C²(a²+ab+b²) + C^{m+1} Σ_{k<m} a^k b^{m-1-k}`.
pub fn lipschitz_l(a: f64, b: f64, params: &ModelParams) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "L needs a, b >= 0, got ({a}, {b})"
        )));
    }
    let c = lipschitz_constant_c(params)?;
    let m = params.m as i32;
    let sum: f64 = (0..m).map(|k| a.powi(k) * b.powi(m - 1 - k)).sum();
    Ok(c * (params.beta + 1.0) * (a + b) + c * c * (a * a + a * b + b * b) + c.powi(m + 1) * sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExistenceEstimate {
    pub t: f64,
    pub m: f64,
    /// `L(M + ‖f0‖, M + ‖f0‖)`.
    pub l_at_boundary: f64,
    /// `L(M + ‖f0‖, M + ‖f0‖) K(T)`, the contraction factor of the mild map.
    pub contraction_constant: f64,
}

/// `K(T) = ∫_0^T (1 + c τ^{-q}) dτ`, the integrated smoothing factor for a
/// lift by `2δ`, with `q = δ/α` and `c = e^{-q} (δ/(αγ))^q`.
pub fn smoothing_kernel_integral(t: f64, params: &ModelParams) -> f64 {
    let delta = params.pd.degree();
    let q = delta / params.alpha;
    let c = if delta == 0.0 {
        1.0
    } else {
        (-q).exp() * (delta / (params.alpha * params.gamma)).powf(q)
    };
    t + c * t.powf(1.0 - q) / (1.0 - q)
}

fn existence_conditions(
    t: f64,
    f0_norm: f64,
    m: f64,
    params: &ModelParams,
) -> Result<(bool, f64, f64)> {
    let w = m + f0_norm;
    let k = smoothing_kernel_integral(t, params);
    let invariance = lipschitz_l(w, 0.0, params)? * w * k <= m;
    let l_wall = lipschitz_l(w, w, params)?;
    let contraction = l_wall * k;
    Ok((invariance && contraction < 1.0, l_wall, contraction))
}

/// Largest horizon `T` (found by bisection) for which the mild map keeps the
/// ball of radius `M` around the free evolution invariant,
/// `L(M+‖f0‖, 0)(M+‖f0‖)K(T) <= M`, and contracts,
/// `L(M+‖f0‖, M+‖f0‖)K(T) < 1`.
pub fn existence_time(f0_norm: f64, m: f64, params: &ModelParams) -> Result<ExistenceEstimate> {
    params.validate_mild()?;
    if !(m > 0.0) || !(f0_norm >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need M > 0 and ‖f0‖ >= 0, got M = {m}, ‖f0‖ = {f0_norm}"
        )));
    }
    let ok = |t: f64| existence_conditions(t, f0_norm, m, params).map(|c| c.0);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while ok(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::EstimateFailed(
                "conditions hold for arbitrarily long horizons".into(),
            ));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (holds, l_wall, contraction) = existence_conditions(lo, f0_norm, m, params)?;
    if !(lo > 0.0) || !holds {
        return Err(Error::EstimateFailed(format!(
            "no positive horizon satisfies both conditions (‖f0‖ = {f0_norm}, M = {m})"
        )));
    }
    Ok(ExistenceEstimate {
        t: lo,
        m,
        l_at_boundary: l_wall,
        contraction_constant: contraction,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependenceReport {
    pub times: Vec<f64>,
    pub distance: Vec<f64>,
    pub envelope: Vec<f64>,
    /// `max_t ‖u(t)‖_s` over both trajectories.
    pub w: f64,
    pub lipschitz: f64,
    /// Smallest `envelope / distance` over frames with nonzero distance
    /// (infinite when the trajectories coincide).
    pub slack: f64,
    pub holds: bool,
}

/// Runs both initial data and checks
/// `‖u(t) - v(t)‖_s <= e^{L(W,W) t} ‖f0 - f1‖_s + scheme error` at every
/// saved frame.
pub fn continuous_dependence_check(
    f0: &RadialField,
    f1: &RadialField,
    params: &ModelParams,
    cfg: &SolverConfig,
) -> Result<DependenceReport> {
    let run = |f: &RadialField| match cfg.method {
        Method::Picard => picard_solve(f, params, cfg),
        _ => euler_run(f, params, cfg, None),
    };
    let (a, b) = (run(f0)?, run(f1)?);
    let w = a
        .hs_norm
        .iter()
        .chain(&b.hs_norm)
        .fold(0.0f64, |m, &v| m.max(v));
    let lipschitz = lipschitz_l(w, w, params)?;
    let d0 = RadialField::linear_combine(1.0, f0, -1.0, f1)?.norm_sobolev(params.s);
    let scheme = a.error_budget + b.error_budget;

    let frames = a.times.len().min(b.times.len());
    let mut report = DependenceReport {
        times: Vec::with_capacity(frames),
        distance: Vec::with_capacity(frames),
        envelope: Vec::with_capacity(frames),
        w,
        lipschitz,
        slack: f64::INFINITY,
        holds: true,
    };
    for i in 0..frames {
        let t = a.times[i];
        let dist = RadialField::linear_combine(1.0, &a.snapshots[i], -1.0, &b.snapshots[i])?
            .norm_sobolev(params.s);
        let env = (lipschitz * t).exp() * d0 + scheme;
        if dist > 0.0 {
            report.slack = report.slack.min(env / dist);
        }
        report.holds &= dist <= env;
        report.times.push(t);
        report.distance.push(dist);
        report.envelope.push(env);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GMonitor {
    pub times: Vec<f64>,
    /// `dG/dt - H(G)` by centered differences at interior frames.
    pub defect: Vec<f64>,
    pub tolerance: f64,
    pub violations: usize,
}

/// Compares the discrete derivative of `G` along a trajectory with the
/// comparison function `H(G)`, flagging frames where `G' >= H(G)` fails by
/// more than `10 Δt max|G''|`. Purely diagnostic.
pub fn monitor_g(traj: &Trajectory, w: &BlowupWeight, params: &ModelParams) -> Result<GMonitor> {
    let g = traj
        .g_value
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("trajectory has no recorded G values".into()))?;
    let t = &traj.times;
    let cmp = params.comparison(w.r());
    let mut out = GMonitor {
        times: Vec::new(),
        defect: Vec::new(),
        tolerance: 0.0,
        violations: 0,
    };
    if g.len() < 3 {
        return Ok(out);
    }
    let mut max_g2 = 0.0f64;
    let mut max_dt = 0.0f64;
    for i in 1..g.len() - 1 {
        let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        let g2 = 2.0 * (h1 * g[i + 1] - (h1 + h2) * g[i] + h2 * g[i - 1]) / (h1 * h2 * (h1 + h2));
        max_g2 = max_g2.max(g2.abs());
        max_dt = max_dt.max(h1.max(h2));
        let dg = (g[i + 1] - g[i - 1]) / (t[i + 1] - t[i - 1]);
        out.times.push(t[i]);
        out.defect.push(dg - comparison_h(g[i], &cmp));
    }
    out.tolerance = 10.0 * max_dt * max_g2;
    out.violations = out.defect.iter().filter(|&&d| d < -out.tolerance).count();
    Ok(out)
}
