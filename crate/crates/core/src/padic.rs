//! Arithmetic of the p-adic line for the one-dimensional case.
//!
//! Points are finite digit expansions `x = p^v * sum(d_i p^i)`, shells are
//! `S_k = {|x|_p = p^k}` and balls are `B_k = {|x|_p <= p^k}`. Haar measure is
//! normalised so that `Z_p = B_0` has measure one. Every measure and character
//! integral is returned as an exact rational.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of digits accepted by the public point constructors.
pub const DEFAULT_DIGIT_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// `p^k` in floating point.
    #[inline]
    pub fn pow_f64(self, k: i64) -> f64 {
        (self.0 as f64).powi(k as i32)
    }

    /// `p^k` as an exact rational.
    pub fn pow_exact(self, k: i64) -> BigRational {
        let base = BigInt::from(self.0).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            BigRational::from_integer(base)
        } else {
            BigRational::new(BigInt::one(), base)
        }
    }

    fn pow_uint(self, k: u64) -> BigUint {
        BigUint::from(self.0).pow(k as u32)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The p-adic order `ord(x)`; `|x|_p = p^{-ord(x)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(i64),
    Infinite,
}

/// `ord_p(numerator / denominator)`.
pub fn valuation(numerator: i64, denominator: i64, p: Prime) -> Result<Order> {
    if denominator == 0 {
        return Err(Error::InvalidArgument("zero denominator".into()));
    }
    if numerator == 0 {
        return Ok(Order::Infinite);
    }
    Ok(Order::Finite(
        strip_factor(numerator.unsigned_abs(), p.get()).1
            - strip_factor(denominator.unsigned_abs(), p.get()).1,
    ))
}

fn strip_factor(mut n: u64, p: u64) -> (u64, i64) {
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    (n, e)
}

/// Haar measure of the ball `B_k`, i.e. `p^k`.
pub fn ball_measure(p: Prime, k: i64) -> BigRational {
    p.pow_exact(k)
}

/// Haar measure of the sphere `S_k`, i.e. `p^k (1 - 1/p)`.
pub fn shell_measure(p: Prime, k: i64) -> BigRational {
    ball_measure(p, k) - ball_measure(p, k - 1)
}

/// Floating-point shell measure, used on hot paths.
#[inline]
pub fn shell_measure_f64(p: Prime, k: i64) -> f64 {
    p.pow_f64(k) * (1.0 - 1.0 / p.as_f64())
}

/// `∫_{S_k} χ_p(a x) dx` for a frequency with `|a|_p = p^v`.
pub fn char_shell_integral(p: Prime, v: i64, k: i64) -> BigRational {
    if v <= -k {
        shell_measure(p, k)
    } else if v == 1 - k {
        -p.pow_exact(k - 1)
    } else {
        BigRational::zero()
    }
}

/// `[ξ]_p^s = max(1, p^k)^s` for `ξ ∈ S_k`.
#[inline]
pub fn bracket_weight(p: Prime, k: i64, s: f64) -> f64 {
    if k <= 0 {
        1.0
    } else {
        p.as_f64().powf(k as f64 * s)
    }
}

/// A point of `Q_p` with a finite digit expansion `p^order * sum(digits[i] p^i)`.
///
/// `digits[0]` is nonzero, so `order` is the p-adic order. Zero is the empty
/// expansion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicPoint {
    p: Prime,
    order: i64,
    digits: Vec<u64>,
}

impl PadicPoint {
    pub fn zero(p: Prime) -> Self {
        PadicPoint {
            p,
            order: 0,
            digits: Vec::new(),
        }
    }

    pub fn new(p: Prime, order: i64, digits: Vec<u64>) -> Result<Self> {
        Self::with_cap(p, order, digits, DEFAULT_DIGIT_CAP)
    }

    pub fn with_cap(p: Prime, order: i64, mut digits: Vec<u64>, cap: usize) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= p.get()) {
            return Err(Error::InvalidArgument(format!(
                "digit {d} out of range for p = {p}"
            )));
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.is_empty() {
            return Ok(Self::zero(p));
        }
        if digits[0] == 0 {
            return Err(Error::InvalidArgument(
                "leading digit of a nonzero point must be nonzero".into(),
            ));
        }
        if digits.len() > cap {
            return Err(Error::DigitOverflow {
                len: digits.len(),
                cap,
            });
        }
        Ok(PadicPoint { p, order, digits })
    }

    /// `x = n * p^e` for a nonnegative integer `n`.
    pub fn from_scaled(p: Prime, n: &BigUint, e: i64) -> Result<Self> {
        let x = Self::from_scaled_unchecked(p, n, e);
        if x.digits.len() > DEFAULT_DIGIT_CAP {
            return Err(Error::DigitOverflow {
                len: x.digits.len(),
                cap: DEFAULT_DIGIT_CAP,
            });
        }
        Ok(x)
    }

    /// The rational `numerator / denominator`, which must be nonnegative with a
    /// denominator that is a power of `p` (otherwise the expansion is infinite).
    pub fn from_ratio(p: Prime, numerator: i64, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        if numerator == 0 {
            return Ok(Self::zero(p));
        }
        if (numerator < 0) != (denominator < 0) {
            return Err(Error::InfiniteExpansion(format!(
                "{numerator}/{denominator}"
            )));
        }
        let (num, en) = strip_factor(numerator.unsigned_abs(), p.get());
        let (den, ed) = strip_factor(denominator.unsigned_abs(), p.get());
        if den != 1 {
            return Err(Error::InfiniteExpansion(format!(
                "{numerator}/{denominator}"
            )));
        }
        Self::from_scaled(p, &BigUint::from(num), en - ed)
    }

    pub(crate) fn from_scaled_unchecked(p: Prime, n: &BigUint, e: i64) -> Self {
        if n.is_zero() {
            return Self::zero(p);
        }
        let base = BigUint::from(p.get());
        let mut n = n.clone();
        let mut e = e;
        loop {
            let (q, r) = n.div_rem(&base);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        let mut digits = Vec::new();
        while !n.is_zero() {
            let (q, r) = n.div_rem(&base);
            digits.push(r.to_u64().unwrap_or(0));
            n = q;
        }
        PadicPoint {
            p,
            order: e,
            digits,
        }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn order(&self) -> Order {
        if self.is_zero() {
            Order::Infinite
        } else {
            Order::Finite(self.order)
        }
    }

    /// The shell index `k` with `x ∈ S_k`, or `None` for zero.
    pub fn shell(&self) -> Option<i64> {
        (!self.is_zero()).then_some(-self.order)
    }

    /// Position of the leading digit; zero for the zero point.
    pub(crate) fn order_value(&self) -> i64 {
        self.order
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at absolute position `i` (coefficient of `p^i`).
    pub fn digit_at(&self, i: i64) -> u64 {
        let idx = i - self.order;
        if self.is_zero() || idx < 0 {
            return 0;
        }
        self.digits.get(idx as usize).copied().unwrap_or(0)
    }

    /// `(n, e)` with `x = n * p^e`.
    pub fn to_scaled(&self) -> (BigUint, i64) {
        let base = BigUint::from(self.p.get());
        let n = self
            .digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &base + BigUint::from(d));
        (n, self.order)
    }

    pub fn to_rational(&self) -> BigRational {
        let (n, e) = self.to_scaled();
        BigRational::from_integer(BigInt::from(n)) * self.p.pow_exact(e)
    }

    /// Exact sum; the result is never truncated.
    pub fn add(&self, other: &PadicPoint) -> PadicPoint {
        self.assert_same_prime(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (nx, ex) = self.to_scaled();
        let (ny, ey) = other.to_scaled();
        let e = ex.min(ey);
        let n = nx * self.p.pow_uint((ex - e) as u64) + ny * self.p.pow_uint((ey - e) as u64);
        Self::from_scaled_unchecked(self.p, &n, e)
    }

    /// `x - y` reduced modulo `p^precision Z_p` (= the ball `B_{-precision}`).
    ///
    /// Negation has an infinite expansion, so differences are only available
    /// up to a coset; that is all a locally constant function needs.
    pub fn sub_mod(&self, other: &PadicPoint, precision: i64) -> PadicPoint {
        self.assert_same_prime(other);
        let (nx, ex) = if self.is_zero() {
            (BigUint::zero(), precision)
        } else {
            self.to_scaled()
        };
        let (ny, ey) = if other.is_zero() {
            (BigUint::zero(), precision)
        } else {
            other.to_scaled()
        };
        let e = ex.min(ey);
        if e >= precision {
            return Self::zero(self.p);
        }
        let lift = |n: BigUint, ei: i64| -> BigInt {
            if ei >= precision {
                BigInt::zero()
            } else {
                BigInt::from(n * self.p.pow_uint((ei - e) as u64))
            }
        };
        let modulus = BigInt::from(self.p.pow_uint((precision - e) as u64));
        let diff = (lift(nx, ex) - lift(ny, ey)).mod_floor(&modulus);
        let (_, mag) = diff.into_parts();
        Self::from_scaled_unchecked(self.p, &mag, e)
    }

    /// Multiply by `p^k`.
    pub fn scale_pow(&self, k: i64) -> PadicPoint {
        let mut out = self.clone();
        if !out.is_zero() {
            out.order += k;
        }
        out
    }

    /// Multiply by a nonnegative integer.
    pub fn mul_int(&self, j: u64) -> PadicPoint {
        if self.is_zero() || j == 0 {
            return Self::zero(self.p);
        }
        let (n, e) = self.to_scaled();
        Self::from_scaled_unchecked(self.p, &(n * BigUint::from(j)), e)
    }

    /// `{x}_p`, the part of the expansion carried by negative powers of `p`.
    pub fn fractional_part(&self) -> BigRational {
        if self.is_zero() || self.order >= 0 {
            return BigRational::zero();
        }
        let neg = (-self.order) as usize;
        let base = BigInt::from(self.p.get());
        let num = self
            .digits
            .iter()
            .take(neg)
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &base + BigInt::from(d));
        BigRational::new(num, base.pow(neg as u32))
    }

    fn assert_same_prime(&self, other: &PadicPoint) {
        assert_eq!(self.p, other.p, "points over different primes");
    }
}

impl fmt::Display for PadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, d)| format!("{d}*{}^{}", self.p, self.order + i as i64))
            .collect::<Vec<_>>();
        write!(f, "{}", terms.join(" + "))
    }
}

/// The additive character `χ_p(x) = exp(2πi {x}_p)`.
pub fn char_eval(x: &PadicPoint) -> Complex64 {
    let frac = x.fractional_part();
    if frac.is_zero() {
        return Complex64::new(1.0, 0.0);
    }
    let (s, c) = rational_turns_sin_cos(&frac);
    Complex64::new(c, s)
}

/// `(sin, cos)` of `2π q` for a rational `q`, reduced to `[0, 1)` exactly first.
pub(crate) fn rational_turns_sin_cos(q: &BigRational) -> (f64, f64) {
    let num = q.numer().mod_floor(q.denom());
    let mut t = BigRational::new(num, q.denom().clone());
    // Fold into (-1/2, 1/2] to keep the angle small.
    if t > BigRational::new(BigInt::one(), BigInt::from(2)) {
        t -= BigRational::one();
    }
    let angle = std::f64::consts::TAU * t.to_f64().unwrap_or(0.0);
    angle.sin_cos()
}

/// Exact conversion of an `f64` into a rational.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn primes_are_checked() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Prime::new(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(1, 3, p(3)).unwrap(), Order::Finite(-1));
        assert_eq!(valuation(9, 1, p(3)).unwrap(), Order::Finite(2));
        assert_eq!(valuation(0, 5, p(7)).unwrap(), Order::Infinite);
        assert_eq!(valuation(-18, 4, p(2)).unwrap(), Order::Finite(-1));
        assert!(matches!(
            valuation(1, 0, p(3)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn shell_measure_examples() {
        assert_eq!(shell_measure(p(3), 0), q(2, 3));
        assert_eq!(shell_measure(p(3), 2), q(6, 1));
        assert_eq!(shell_measure(p(2), 0), q(1, 2));
        assert_eq!(ball_measure(p(5), -2), q(1, 25));
    }

    #[test]
    fn shell_partial_sums_approach_ball() {
        for prime in [2, 3, 5, 7] {
            let pr = p(prime);
            for k in -4..=4 {
                for j_min in (k - 12)..=k {
                    let partial = (j_min..=k)
                        .map(|j| shell_measure(pr, j))
                        .fold(BigRational::zero(), |a, b| a + b);
                    assert_eq!(ball_measure(pr, k) - partial, ball_measure(pr, j_min - 1));
                }
            }
        }
    }

    #[test]
    fn char_eval_examples() {
        let third = PadicPoint::from_ratio(p(3), 1, 3).unwrap();
        let z = char_eval(&third);
        assert!((z.re + 0.5).abs() < 1e-15);
        assert!((z.im - 3f64.sqrt() / 2.0).abs() < 1e-15);

        let five = PadicPoint::from_ratio(p(5), 5, 1).unwrap();
        assert_eq!(char_eval(&five), Complex64::new(1.0, 0.0));

        let x = PadicPoint::from_ratio(p(2), 3, 2).unwrap();
        let z = char_eval(&x);
        assert!((z.re + 1.0).abs() < 1e-15 && z.im.abs() < 1e-15);
    }

    /// Brute force over the cosets of `B_{-n}` inside `S_0`, with `n` large
    /// enough that `χ(a·)` is constant on each coset.
    fn coset_sum_shell0(pr: Prime, a: &PadicPoint, n: usize) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let pp = pr.get();
        let mut digits = vec![0u64; n];
        digits[0] = 1;
        let mut count = 0u64;
        loop {
            let x = PadicPoint::with_cap(pr, 0, digits.clone(), usize::MAX).unwrap();
            let prod = x.to_rational() * a.to_rational();
            let (s, c) = rational_turns_sin_cos(&prod);
            acc += Complex64::new(c, s);
            count += 1;
            let mut i = n;
            loop {
                if i == 0 {
                    assert_eq!(count, (pp - 1) * pp.pow(n as u32 - 1));
                    let measure = 1.0 / (pp.pow(n as u32)) as f64;
                    assert!(acc.im.abs() * measure < 1e-9);
                    return acc.re * measure;
                }
                i -= 1;
                let lo = if i == 0 { 1 } else { 0 };
                if digits[i] + 1 < pp {
                    digits[i] += 1;
                    break;
                }
                digits[i] = lo;
            }
        }
    }

    #[test]
    fn char_shell_integral_matches_coset_sums() {
        let pr = p(3);
        // |a| = 3^-2, 3^1, 3^5 respectively.
        let cases = [
            (PadicPoint::from_ratio(pr, 9, 1).unwrap(), -2),
            (PadicPoint::from_ratio(pr, 1, 3).unwrap(), 1),
            (PadicPoint::from_ratio(pr, 1, 243).unwrap(), 5),
        ];
        let expected = [q(2, 3), q(-1, 3), q(0, 1)];
        for ((a, v), want) in cases.iter().zip(expected) {
            assert_eq!(char_shell_integral(pr, *v, 0), want);
            let brute = coset_sum_shell0(pr, a, (*v).max(1) as usize);
            let diff = (brute - want.to_f64().unwrap()).abs();
            assert!(diff < 1e-9, "v = {v}: brute force disagrees by {diff}");
        }
    }

    #[test]
    fn char_shell_integrals_sum_to_ball_integral() {
        for prime in [2, 3, 5] {
            let pr = p(prime);
            for v in -6..=6 {
                for big_k in -5..=5 {
                    let sum = ((big_k - 40)..=big_k)
                        .map(|k| char_shell_integral(pr, v, k))
                        .fold(BigRational::zero(), |a, b| a + b);
                    // The shells below k = K - 40 all lie inside the character's
                    // kernel, contributing exactly the measure of B_{K-41}.
                    let tail = if v <= -(big_k - 41) {
                        ball_measure(pr, big_k - 41)
                    } else {
                        BigRational::zero()
                    };
                    let expected = if v <= -big_k {
                        ball_measure(pr, big_k)
                    } else {
                        BigRational::zero()
                    };
                    assert_eq!(sum + tail, expected, "p={prime} v={v} K={big_k}");
                }
            }
        }
    }

    #[test]
    fn bracket_weight_examples() {
        assert_eq!(bracket_weight(p(3), -2, 7.5), 1.0);
        assert_eq!(bracket_weight(p(3), 2, 2.0), 81.0);
        assert_eq!(bracket_weight(p(5), 1, 0.0), 1.0);
    }

    #[test]
    fn point_construction_rules() {
        let pr = p(3);
        assert!(PadicPoint::new(pr, 0, vec![0, 1]).is_err());
        assert!(PadicPoint::new(pr, 0, vec![3]).is_err());
        assert!(PadicPoint::new(pr, 0, vec![]).unwrap().is_zero());
        assert!(matches!(
            PadicPoint::new(pr, 0, vec![1; 65]),
            Err(Error::DigitOverflow { len: 65, cap: 64 })
        ));
        assert!(PadicPoint::with_cap(pr, 0, vec![1; 65], 80).is_ok());
        assert!(matches!(
            PadicPoint::from_ratio(pr, 1, 2),
            Err(Error::InfiniteExpansion(_))
        ));
        assert!(matches!(
            PadicPoint::from_ratio(pr, -1, 3),
            Err(Error::InfiniteExpansion(_))
        ));
        let x = PadicPoint::from_ratio(pr, 10, 9).unwrap();
        assert_eq!(x.order(), Order::Finite(-2));
        assert_eq!(x.to_rational(), q(10, 9));
    }

    #[test]
    fn sub_mod_reduces_to_coset() {
        let pr = p(3);
        let x = PadicPoint::from_ratio(pr, 1, 3).unwrap();
        let y = PadicPoint::from_ratio(pr, 2, 3).unwrap();
        // 1/3 - 2/3 = -1/3 ≡ 2/3 (mod Z_3)
        let d = x.sub_mod(&y, 0);
        assert_eq!(d.to_rational(), q(2, 3));
        // modulo 3Z_3: -1/3 ≡ 2/3 + 2 (mod 3)
        let d = x.sub_mod(&y, 1);
        assert_eq!(d.to_rational(), q(8, 3));
        assert!(x.sub_mod(&x, 5).is_zero());
    }
}
