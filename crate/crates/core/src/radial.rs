//! Radial step functions on `Q_p`.
//!
//! A [`RadialField`] stores one real value on the inner ball `B_{j_min}`, one
//! value per shell `S_k` for `j_min < k <= j_max`, and vanishes outside
//! `B_{j_max}`. The class is closed under pointwise algebra and under the
//! Fourier transform, which maps window `[a, b]` onto `[-b, -a]` through
//! `F[1_{B_k}] = p^k 1_{B_{-k}}`.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{bracket_weight, rational_from_f64, shell_measure_f64, Prime};
use crate::sum::{compensated, CompensatedSum};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialField {
    p: Prime,
    j_min: i64,
    j_max: i64,
    ball: f64,
    shells: Vec<f64>,
}

impl RadialField {
    /// `shells[i]` is the value on `S_{j_min + 1 + i}`.
    pub fn new(p: Prime, j_min: i64, j_max: i64, ball: f64, shells: Vec<f64>) -> Result<Self> {
        if j_min > j_max {
            return Err(Error::InvalidWindow { j_min, j_max });
        }
        if shells.len() as i64 != j_max - j_min {
            return Err(Error::InvalidArgument(format!(
                "expected {} shell values, got {}",
                j_max - j_min,
                shells.len()
            )));
        }
        Ok(RadialField {
            p,
            j_min,
            j_max,
            ball,
            shells,
        })
    }

    pub fn zero(p: Prime, j_min: i64, j_max: i64) -> Result<Self> {
        Self::from_profile(p, j_min, j_max, |_| 0.0)
    }

    /// Indicator of the ball `B_k`.
    pub fn ball_indicator(p: Prime, k: i64) -> Self {
        RadialField {
            p,
            j_min: k,
            j_max: k,
            ball: 1.0,
            shells: Vec::new(),
        }
    }

    /// Samples `profile(k)` on every shell of the window; the inner ball takes
    /// `profile(j_min)`.
    pub fn from_profile<F: Fn(i64) -> f64>(
        p: Prime,
        j_min: i64,
        j_max: i64,
        profile: F,
    ) -> Result<Self> {
        if j_min > j_max {
            return Err(Error::InvalidWindow { j_min, j_max });
        }
        Ok(RadialField {
            p,
            j_min,
            j_max,
            ball: profile(j_min),
            shells: ((j_min + 1)..=j_max).map(profile).collect(),
        })
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn j_min(&self) -> i64 {
        self.j_min
    }

    #[inline]
    pub fn j_max(&self) -> i64 {
        self.j_max
    }

    #[inline]
    pub fn window(&self) -> (i64, i64) {
        (self.j_min, self.j_max)
    }

    #[inline]
    pub fn ball_value(&self) -> f64 {
        self.ball
    }

    pub fn shell_values(&self) -> &[f64] {
        &self.shells
    }

    /// Value of the field on `S_k` (inner-ball value below the window, zero above).
    #[inline]
    pub fn value_at_shell(&self, k: i64) -> f64 {
        if k <= self.j_min {
            self.ball
        } else if k <= self.j_max {
            self.shells[(k - self.j_min - 1) as usize]
        } else {
            0.0
        }
    }

    /// Shell indices `j_min ..= j_max` paired with values; the first entry is
    /// the inner ball.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        std::iter::once((self.j_min, self.ball)).chain(
            self.shells
                .iter()
                .enumerate()
                .map(move |(i, &v)| (self.j_min + 1 + i as i64, v)),
        )
    }

    /// Haar measure of the region carrying the value at index `k` of [`Self::iter`].
    #[inline]
    fn region_measure(&self, k: i64) -> f64 {
        if k == self.j_min {
            self.p.pow_f64(k)
        } else {
            shell_measure_f64(self.p, k)
        }
    }

    pub fn pointwise_map<G: Fn(f64) -> f64>(&self, g: G) -> RadialField {
        RadialField {
            p: self.p,
            j_min: self.j_min,
            j_max: self.j_max,
            ball: g(self.ball),
            shells: self.shells.iter().map(|&v| g(v)).collect(),
        }
    }

    /// `a f + b g` on the union of both windows.
    pub fn linear_combine(a: f64, f: &RadialField, b: f64, g: &RadialField) -> Result<RadialField> {
        Self::zip_with(f, g, |x, y| a * x + b * y)
    }

    /// Pointwise product on the union of both windows.
    pub fn product(f: &RadialField, g: &RadialField) -> Result<RadialField> {
        Self::zip_with(f, g, |x, y| x * y)
    }

    pub fn zip_with<H: Fn(f64, f64) -> f64>(
        f: &RadialField,
        g: &RadialField,
        h: H,
    ) -> Result<RadialField> {
        if f.p != g.p {
            return Err(Error::InvalidArgument(format!(
                "fields over different primes ({} and {})",
                f.p, g.p
            )));
        }
        let j_min = f.j_min.min(g.j_min);
        let j_max = f.j_max.max(g.j_max);
        Ok(RadialField {
            p: f.p,
            j_min,
            j_max,
            ball: h(f.value_at_shell(j_min), g.value_at_shell(j_min)),
            shells: ((j_min + 1)..=j_max)
                .map(|k| h(f.value_at_shell(k), g.value_at_shell(k)))
                .collect(),
        })
    }

    pub fn scale(&self, c: f64) -> RadialField {
        self.pointwise_map(|v| c * v)
    }

    /// Exact Fourier transform; the result lives on window `[-j_max, -j_min]`.
    pub fn fourier(&self) -> RadialField {
        let (a, b) = (self.j_min, self.j_max);
        // f = Σ_k c_k 1_{B_k}, F f = Σ_k c_k p^k 1_{B_{-k}}.
        // Prefix sums S(K) = Σ_{k=a}^{K} c_k p^k give the value on S_{-K}.
        let n = (b - a) as usize;
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = CompensatedSum::new();
        for k in a..=b {
            let c = self.value_at_shell(k) - self.value_at_shell(k + 1);
            acc.add(c * self.p.pow_f64(k));
            prefix.push(acc.value());
        }
        // Output shells m = -b+1 ..= -a use S(-m), i.e. prefix index b-1-i-a.
        let shells = (0..n).map(|i| prefix[n - 1 - i]).collect();
        RadialField {
            p: self.p,
            j_min: -b,
            j_max: -a,
            ball: prefix[n],
            shells,
        }
    }

    /// `∫ f`; equals the Fourier transform at zero.
    pub fn integral(&self) -> f64 {
        compensated(self.iter().map(|(k, v)| v * self.region_measure(k)))
    }

    pub fn norm_l1(&self) -> f64 {
        compensated(self.iter().map(|(k, v)| v.abs() * self.region_measure(k)))
    }

    pub fn norm_l2(&self) -> f64 {
        compensated(self.iter().map(|(k, v)| v * v * self.region_measure(k)))
            .max(0.0)
            .sqrt()
    }

    pub fn norm_sup(&self) -> f64 {
        self.iter().fold(
            0.0,
            |m, (_, v)| {
                if v.is_nan() {
                    f64::NAN
                } else {
                    m.max(v.abs())
                }
            },
        )
    }

    /// `‖f‖_s = (∫ [ξ]^s |f̂(ξ)|² dξ)^{1/2}`.
    pub fn norm_sobolev(&self, s: f64) -> f64 {
        self.fourier().weighted_l2_squared(s).max(0.0).sqrt()
    }

    /// `∫ [ξ]^s |g(ξ)|² dξ` treating `self` as the Fourier-side function `g`.
    pub(crate) fn weighted_l2_squared(&self, s: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        let inner = self.j_min;
        let b2 = self.ball * self.ball;
        if inner <= 0 {
            acc.add(b2 * self.p.pow_f64(inner));
        } else {
            acc.add(b2);
            for k in 1..=inner {
                acc.add(b2 * bracket_weight(self.p, k, s) * shell_measure_f64(self.p, k));
            }
        }
        for (k, v) in self.iter().skip(1) {
            acc.add(v * v * bracket_weight(self.p, k, s) * shell_measure_f64(self.p, k));
        }
        acc.value()
    }

    /// Restricts the field to `[j_min', j_max']` and returns the L² norm of
    /// what was removed. Shells above the new window are dropped; shells below
    /// it are replaced by their mean over the new inner ball.
    pub fn retruncate(&self, j_min: i64, j_max: i64) -> Result<(RadialField, f64)> {
        let kept = self.restrict(j_min, j_max)?;
        let removed = RadialField::linear_combine(1.0, self, -1.0, &kept)?;
        Ok((kept, removed.norm_l2()))
    }

    /// The restricted field together with the removed part as a field.
    pub fn split_window(&self, j_min: i64, j_max: i64) -> Result<(RadialField, RadialField)> {
        let kept = self.restrict(j_min, j_max)?;
        let removed = RadialField::linear_combine(1.0, self, -1.0, &kept)?;
        Ok((kept, removed))
    }

    fn restrict(&self, j_min: i64, j_max: i64) -> Result<RadialField> {
        if j_min > j_max {
            return Err(Error::InvalidWindow { j_min, j_max });
        }
        let ball = if j_min <= self.j_min {
            self.ball
        } else {
            // Mean of the field over B_{j_min'} (which may extend past j_max).
            let top = j_min.min(self.j_max);
            let mass = compensated(
                std::iter::once(self.ball * self.p.pow_f64(self.j_min)).chain(
                    ((self.j_min + 1)..=top)
                        .map(|k| self.value_at_shell(k) * shell_measure_f64(self.p, k)),
                ),
            );
            mass / self.p.pow_f64(j_min)
        };
        Ok(RadialField {
            p: self.p,
            j_min,
            j_max,
            ball,
            shells: ((j_min + 1)..=j_max)
                .map(|k| self.value_at_shell(k))
                .collect(),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.ball.is_finite() && self.shells.iter().all(|v| v.is_finite())
    }
}

/// `A(1, s) = (∫ [ξ]^{-s} dξ)^{1/2}`, finite for `s > 1`.
pub fn embedding_constant_a(p: Prime, s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::DivergentConstant(format!(
            "A(1, s) requires s > 1, got s = {s}"
        )));
    }
    let q = p.as_f64().powf(1.0 - s);
    let tail = (1.0 - 1.0 / p.as_f64()) * q / (1.0 - q);
    Ok((1.0 + tail).sqrt())
}

/// A radial field with exact rational values, used to check identities
/// without rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRadialField {
    pub p: Prime,
    pub j_min: i64,
    pub j_max: i64,
    pub ball: BigRational,
    pub shells: Vec<BigRational>,
}

impl ExactRadialField {
    pub fn from_field(f: &RadialField) -> Self {
        ExactRadialField {
            p: f.p,
            j_min: f.j_min,
            j_max: f.j_max,
            ball: rational_from_f64(f.ball),
            shells: f.shells.iter().map(|&v| rational_from_f64(v)).collect(),
        }
    }

    pub fn value_at_shell(&self, k: i64) -> BigRational {
        if k <= self.j_min {
            self.ball.clone()
        } else if k <= self.j_max {
            self.shells[(k - self.j_min - 1) as usize].clone()
        } else {
            BigRational::zero()
        }
    }

    pub fn fourier(&self) -> ExactRadialField {
        let (a, b) = (self.j_min, self.j_max);
        let n = (b - a) as usize;
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = BigRational::zero();
        for k in a..=b {
            let c = self.value_at_shell(k) - self.value_at_shell(k + 1);
            acc += c * self.p.pow_exact(k);
            prefix.push(acc.clone());
        }
        let shells = (0..n).map(|i| prefix[n - 1 - i].clone()).collect();
        ExactRadialField {
            p: self.p,
            j_min: -b,
            j_max: -a,
            ball: prefix[n].clone(),
            shells,
        }
    }

    pub fn to_field(&self) -> RadialField {
        RadialField {
            p: self.p,
            j_min: self.j_min,
            j_max: self.j_max,
            ball: self.ball.to_f64().unwrap_or(f64::NAN),
            shells: self
                .shells
                .iter()
                .map(|v| v.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }
}
