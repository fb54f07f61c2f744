//! Kozyrev wavelets and the blow-up comparison machinery.
//!
//! `Ψ_{rnj}(x) = p^{-r/2} χ_p(p^{-1} j (p^r x - n)) Ω(|p^r x - n|_p)` is
//! supported on `n p^{-r} + B_r`, constant on cosets of `B_{r-1}`, and an
//! eigenfunction of every radial multiplier with eigenvalue `m(1 - r)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{char_shell_integral, rational_turns_sin_cos, shell_measure, PadicPoint, Prime};
use crate::radial::RadialField;
use crate::sum::CompensatedSum;

/// Step cap for [`ode_blowup_time`]; reaching it is reported as no blow-up.
const ODE_MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletIndex {
    r: i64,
    n: PadicPoint,
    j: u64,
}

impl WaveletIndex {
    /// `n` must only carry digits at negative positions (a representative of
    /// `Q_p / Z_p`), and `1 <= j <= p - 1`.
    pub fn new(r: i64, n: PadicPoint, j: u64) -> Result<Self> {
        let p = n.prime();
        if j == 0 || j >= p.get() {
            return Err(Error::InvalidArgument(format!(
                "wavelet index j = {j} outside 1..={}",
                p.get() - 1
            )));
        }
        if let Some(k) = n.shell() {
            // Highest digit position is order + len - 1, which must be < 0.
            if n.order_value() + n.digits().len() as i64 > 0 || k < 1 {
                return Err(Error::InvalidArgument(format!(
                    "translation {n} is not a fractional representative"
                )));
            }
        }
        Ok(WaveletIndex { r, n, j })
    }

    /// `Ψ_{r,0,j}`.
    pub fn centered(p: Prime, r: i64, j: u64) -> Result<Self> {
        Self::new(r, PadicPoint::zero(p), j)
    }

    pub fn prime(&self) -> Prime {
        self.n.prime()
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn n(&self) -> &PadicPoint {
        &self.n
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    /// Radius exponent of the balls on which `Ψ` is constant.
    pub fn locally_constant_scale(&self) -> i64 {
        self.r - 1
    }
}

/// `exp(2πi · a / p)` evaluated through an exact reduction of `a / p`.
fn root_of_unity(p: Prime, a: u64) -> Complex64 {
    let q = BigRational::new(BigInt::from(a % p.get()), BigInt::from(p.get()));
    let (s, c) = rational_turns_sin_cos(&q);
    Complex64::new(c, s)
}

pub fn wavelet_eval(idx: &WaveletIndex, x: &PadicPoint) -> Complex64 {
    let p = idx.prime();
    // Only z = p^r x - n modulo p Z_p matters: its fractional digits decide
    // the support and its unit digit the phase.
    let z = x.scale_pow(idx.r).sub_mod(&idx.n, 1);
    if !z.is_zero() && z.order_value() < 0 {
        return Complex64::zero();
    }
    let d0 = z.digit_at(0);
    p.as_f64().powf(-(idx.r as f64) / 2.0) * root_of_unity(p, idx.j * d0)
}

/// The eigenvalue `m(1 - r)` of a radial multiplier on `Ψ_{r n j}`, where
/// `m(k)` is the multiplier's value on `‖ξ‖ = p^k`.
pub fn multiplier_eigenvalue<M: Fn(i64) -> f64>(m: M, r: i64) -> f64 {
    m(1 - r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    /// `w = Re(Ψ_{r,0,1}²) = p^{-r} cos(2π {2 p^{r-1} x}_p) Ω(|p^r x|_p)`,
    /// an eigenfunction of `D^α` but signed, with total integral zero.
    #[default]
    SignedSquare,
    /// `|Ψ_{r,0,1}|² = p^{-r} 1_{B_r}`: nonnegative with integral one, but
    /// not an eigenfunction.
    Modulus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupWeight {
    p: Prime,
    r: i64,
    kind: WeightKind,
    eigenvalue_alpha: f64,
}

pub fn blowup_weight_build(p: Prime, r: i64, alpha: f64) -> Result<BlowupWeight> {
    blowup_weight_build_kind(p, r, alpha, WeightKind::SignedSquare)
}

pub fn blowup_weight_build_kind(
    p: Prime,
    r: i64,
    alpha: f64,
    kind: WeightKind,
) -> Result<BlowupWeight> {
    if p.get() == 2 {
        return Err(Error::Unsupported(
            "blow-up weights need p >= 3 (the square identity uses j = 2)".into(),
        ));
    }
    if r > 0 {
        return Err(Error::InvalidArgument(format!(
            "weight scale r = {r} must be <= 0"
        )));
    }
    Ok(BlowupWeight {
        p,
        r,
        kind,
        eigenvalue_alpha: p.as_f64().powf((1 - r) as f64 * alpha),
    })
}

impl BlowupWeight {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// `p^{(1-r)α}`.
    pub fn eigenvalue_alpha(&self) -> f64 {
        self.eigenvalue_alpha
    }

    /// Exact `∫_{S_k} w`.
    pub fn shell_integral(&self, k: i64) -> BigRational {
        if k > self.r {
            return BigRational::zero();
        }
        let scale = self.p.pow_exact(-self.r);
        match self.kind {
            // |2 p^{r-1}|_p = p^{1-r} since p is odd.
            WeightKind::SignedSquare => scale * char_shell_integral(self.p, 1 - self.r, k),
            WeightKind::Modulus => scale * shell_measure(self.p, k),
        }
    }

    /// Exact `∫_{B_k} w`.
    pub fn ball_integral(&self, k: i64) -> BigRational {
        match self.kind {
            WeightKind::SignedSquare if k >= self.r => BigRational::zero(),
            WeightKind::Modulus if k >= self.r => BigRational::from_integer(1.into()),
            _ => self.p.pow_exact(k - self.r),
        }
    }

    /// Pointwise value.
    pub fn eval(&self, x: &PadicPoint) -> f64 {
        let idx = WaveletIndex::centered(self.p, self.r, 1).expect("j = 1 is always valid");
        let psi = wavelet_eval(&idx, x);
        match self.kind {
            WeightKind::SignedSquare => (psi * psi).re,
            WeightKind::Modulus => psi.norm_sqr(),
        }
    }
}

/// `G = ∫ u w`.
pub fn pairing_g(u: &RadialField, w: &BlowupWeight) -> Result<f64> {
    if u.prime() != w.p {
        return Err(Error::InvalidArgument(
            "field and weight use different primes".into(),
        ));
    }
    let mut acc = CompensatedSum::new();
    for (k, v) in u.iter() {
        let integral = if k == u.j_min() {
            w.ball_integral(k)
        } else {
            w.shell_integral(k)
        };
        if !integral.is_zero() {
            acc.add(v * integral.to_f64().unwrap_or(0.0));
        }
    }
    Ok(acc.value())
}

/// Parameters of the comparison function
/// `H(y) = -γ p^{(1-r)α} y + F(y) + p^{(1-r)α₁} y³`, `F(y) = -y³ + (β+1)y² - βy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonParams {
    pub p: Prime,
    pub gamma: f64,
    pub alpha: f64,
    pub alpha1: f64,
    pub beta: f64,
    pub r: i64,
}

impl ComparisonParams {
    fn rates(&self) -> (f64, f64) {
        let e = (1 - self.r) as f64;
        let pf = self.p.as_f64();
        (pf.powf(e * self.alpha), pf.powf(e * self.alpha1))
    }
}

pub fn comparison_h(y: f64, c: &ComparisonParams) -> f64 {
    let (la, la1) = c.rates();
    let f = -y * y * y + (c.beta + 1.0) * y * y - c.beta * y;
    -c.gamma * la * y + f + la1 * y * y * y
}

pub fn comparison_h_prime(y: f64, c: &ComparisonParams) -> f64 {
    let (la, la1) = c.rates();
    -c.gamma * la - 3.0 * y * y + 2.0 * (c.beta + 1.0) * y - c.beta + 3.0 * la1 * y * y
}

pub fn h_second(y: f64, c: &ComparisonParams) -> f64 {
    let (_, la1) = c.rates();
    6.0 * y * (la1 - 1.0) + 2.0 * (c.beta + 1.0)
}

fn rk4_step(g: f64, dt: f64, c: &ComparisonParams) -> f64 {
    let k1 = comparison_h(g, c);
    let k2 = comparison_h(g + 0.5 * dt * k1, c);
    let k3 = comparison_h(g + 0.5 * dt * k2, c);
    let k4 = comparison_h(g + dt * k3, c);
    g + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// First time at which the solution of `g' = H(g)`, `g(0) = g0` reaches
/// `threshold`, or `+∞` if it settles at a root of `H` instead.
///
/// Classical RK4 with step halving whenever `|H(g)| dt > 0.1 |g|`; the step
/// is allowed to grow again once the bound is comfortably met. The crossing
/// step is located by bisection on the step length.
pub fn ode_blowup_time(g0: f64, c: &ComparisonParams, threshold: f64, dt0: f64) -> f64 {
    if g0 >= threshold {
        return 0.0;
    }
    // The flow of a scalar autonomous ODE is monotone: if H(g0) <= 0 the
    // solution never increases.
    if !(comparison_h(g0, c) > 0.0) {
        return f64::INFINITY;
    }
    let mut t = 0.0;
    let mut g = g0;
    let mut dt = dt0.max(f64::MIN_POSITIVE);
    for _ in 0..ODE_MAX_STEPS {
        let h = comparison_h(g, c);
        if h.abs() < 1e-12 && comparison_h_prime(g, c) < 0.0 {
            return f64::INFINITY;
        }
        let scale = g.abs().max(1e-12);
        while h.abs() * dt > 0.1 * scale {
            dt *= 0.5;
        }
        let next = rk4_step(g, dt, c);
        if !next.is_finite() || next >= threshold {
            let (mut lo, mut hi) = (0.0, dt);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let v = rk4_step(g, mid, c);
                if v.is_finite() && v < threshold {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return t + hi;
        }
        if next <= g {
            // Reached (numerically) a stable equilibrium.
            return f64::INFINITY;
        }
        t += dt;
        g = next;
        if h.abs() * dt < 0.025 * scale {
            dt *= 2.0;
        }
    }
    f64::INFINITY
}
