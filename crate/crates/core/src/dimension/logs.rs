//! Exact comparisons of logarithm expressions.
//!
//! Values of the form `c·ln(x)/ln(b)` and `c·ln(x)` with `c` rational and
//! `x`, `b` positive integers. Equality is decided exactly through
//! perfect-power decomposition (`ln g / ln h` is irrational for distinct
//! non-perfect-power integers `g, h`), and order by interval refinement that
//! always terminates once equality has been ruled out.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

const GUARD_BITS: u64 = 64;

/// `x = g^e` with `e` maximal. `1` decomposes as `(1, 1)`.
pub fn perfect_power(x: &BigUint) -> (BigUint, u64) {
    let mut g = x.clone();
    let mut e_total = 1u64;
    let mut p = 2u64;
    while g > BigUint::one() && p <= g.bits() {
        let r = g.nth_root(p as u32);
        if num_traits::pow(r.clone(), p as usize) == g {
            g = r;
            e_total *= p;
        } else {
            p = next_prime(p);
        }
    }
    (g, e_total)
}

fn next_prime(p: u64) -> u64 {
    (p + 1..).find(|&n| (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)).unwrap()
}

fn atanh_inv_fixed(num: &BigInt, den: &BigInt, prec: u64) -> BigInt {
    // atanh(num/den) * 2^prec, for 0 <= num/den <= 1/3
    let one = BigInt::one() << prec;
    let t = (&one * num) / den;
    let t2 = (&t * &t) >> prec;
    let mut term = t.clone();
    let mut sum = t;
    let mut k = 1u64;
    loop {
        term = (&term * &t2) >> prec;
        if term.is_zero() {
            break;
        }
        k += 2;
        sum += &term / BigInt::from(k);
    }
    sum
}

fn ln2_fixed(prec: u64) -> BigInt {
    atanh_inv_fixed(&BigInt::one(), &BigInt::from(3), prec) * 2
}

/// `ln(x)` as a fixed-point integer scaled by `2^prec`, within a few units
/// of the last place.
pub fn ln_fixed(x: &BigUint, prec: u64) -> BigInt {
    assert!(!x.is_zero(), "logarithm of zero");
    let p = prec + GUARD_BITS;
    let k = x.bits() - 1;
    // m = x / 2^k in [1, 2) as fixed point with p bits
    let m: BigInt = if k > p {
        BigInt::from(x >> (k - p) as usize)
    } else {
        BigInt::from(x << (p - k) as usize)
    };
    let one = BigInt::one() << p;
    let ln_m = atanh_inv_fixed(&(&m - &one), &(&m + &one), p) * 2;
    let total = ln2_fixed(p) * BigInt::from(k) + ln_m;
    total >> GUARD_BITS
}

/// Closed rational interval.
#[derive(Debug, Clone)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn ln_interval(x: &BigUint, prec: u64) -> Interval {
    let scale = BigInt::one() << prec;
    let v = ln_fixed(x, prec);
    // generous error: 4 ulps plus one per doubling of the argument's bit-length
    let err = BigInt::from(4 + x.bits());
    Interval {
        lo: BigRational::new(&v - &err, scale.clone()).max(BigRational::zero()),
        hi: BigRational::new(v + err, scale),
    }
}

/// `coeff · ln(arg)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaledLog {
    #[serde(serialize_with = "crate::report::rational_string")]
    pub coeff: BigRational,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub arg: BigUint,
}

impl ScaledLog {
    pub fn new(coeff: BigRational, arg: BigUint) -> Self {
        assert!(!arg.is_zero(), "logarithm of zero");
        ScaledLog { coeff, arg }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() || self.arg.is_one()
    }

    /// Canonical form `c · ln g` with `g` not a perfect power.
    fn canonical(&self) -> (BigRational, BigUint) {
        if self.is_zero() {
            return (BigRational::zero(), BigUint::one());
        }
        let (g, e) = perfect_power(&self.arg);
        (&self.coeff * BigRational::from_integer(e.into()), g)
    }

    pub fn exact_eq(&self, other: &ScaledLog) -> bool {
        self.canonical() == other.canonical()
    }

    fn interval(&self, prec: u64) -> Interval {
        let l = ln_interval(&self.arg, prec);
        scale_interval(&l, &self.coeff)
    }

    pub fn cmp_exact(&self, other: &ScaledLog) -> Ordering {
        if self.exact_eq(other) {
            return Ordering::Equal;
        }
        refine(|p| (self.interval(p), other.interval(p)))
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_of(|p| self.interval(p), digits)
    }
}

fn scale_interval(l: &Interval, c: &BigRational) -> Interval {
    let a = &l.lo * c;
    let b = &l.hi * c;
    if c.is_negative() {
        Interval { lo: b, hi: a }
    } else {
        Interval { lo: a, hi: b }
    }
}

/// Doubles the working precision until the two intervals separate.
/// Callers must have ruled out equality first.
fn refine(mut f: impl FnMut(u64) -> (Interval, Interval)) -> Ordering {
    let mut prec = 128;
    loop {
        let (a, b) = f(prec);
        if a.hi < b.lo {
            return Ordering::Less;
        }
        if a.lo > b.hi {
            return Ordering::Greater;
        }
        prec *= 2;
        assert!(prec < 1 << 24, "interval refinement did not separate distinct values");
    }
}

/// Decimal expansion truncated to `digits` fractional digits, refined until
/// the truncation is certain or the value is pinned to a digit boundary.
fn decimal_of(mut f: impl FnMut(u64) -> Interval, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let mut prec = (digits as u64 * 7) / 2 + 32;
    for _ in 0..8 {
        let iv = f(prec);
        let lo = (&iv.lo * BigRational::from_integer(scale.clone())).floor().to_integer();
        let hi = (&iv.hi * BigRational::from_integer(scale.clone())).floor().to_integer();
        if lo == hi {
            return format_fixed(&lo, digits);
        }
        prec *= 2;
    }
    // The value sits on a digit boundary (rational with a terminating
    // expansion); the upper endpoint rounds correctly there.
    let iv = f(prec);
    let hi = (&iv.hi * BigRational::from_integer(scale)).floor().to_integer();
    format_fixed(&hi, digits)
}

fn format_fixed(v: &BigInt, digits: usize) -> String {
    let neg = v.sign() == Sign::Minus;
    let s = v.abs().to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Decimal expansion of an exact rational, truncated toward zero.
pub fn rational_decimal(r: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let v = (r * BigRational::from_integer(scale)).trunc().to_integer();
    let s = format_fixed(&v, digits);
    if r.is_negative() && !s.starts_with('-') {
        format!("-{s}")
    } else {
        s
    }
}

/// `coeff · ln(arg) / ln(base)` with `base >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogRatio {
    #[serde(serialize_with = "crate::report::rational_string")]
    pub coeff: BigRational,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub arg: BigUint,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub base: BigUint,
}

impl LogRatio {
    pub fn new(coeff: BigRational, arg: BigUint, base: BigUint) -> Self {
        assert!(!arg.is_zero(), "logarithm of zero");
        assert!(base >= BigUint::from(2u32), "logarithm base must be at least 2");
        LogRatio { coeff, arg, base }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() || self.arg.is_one()
    }

    /// The exact value when it is rational.
    pub fn exact(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let (g1, e1) = perfect_power(&self.arg);
        let (g2, e2) = perfect_power(&self.base);
        (g1 == g2).then(|| &self.coeff * BigRational::new(e1.into(), e2.into()))
    }

    fn interval(&self, prec: u64) -> Interval {
        if let Some(r) = self.exact() {
            return Interval { lo: r.clone(), hi: r };
        }
        let a = ln_interval(&self.arg, prec);
        let b = ln_interval(&self.base, prec);
        let ratio = Interval { lo: &a.lo / &b.hi, hi: &a.hi / &b.lo };
        scale_interval(&ratio, &self.coeff)
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        if let Some(v) = self.exact() {
            return v.cmp(r);
        }
        // irrational and nonzero: never equal to a rational
        refine(|p| {
            (
                self.interval(p),
                Interval { lo: r.clone(), hi: r.clone() },
            )
        })
    }

    /// Exact order between two values sharing the same base.
    pub fn cmp_same_base(&self, other: &LogRatio) -> Ordering {
        assert_eq!(self.base, other.base, "comparison requires a common base");
        let a = ScaledLog::new(self.coeff.clone(), self.arg.clone());
        let b = ScaledLog::new(other.coeff.clone(), other.arg.clone());
        a.cmp_exact(&b)
    }

    /// `self · (ln(base) · factor)`: multiplying by a constant of the form
    /// `factor · ln(base)` cancels the denominator exactly.
    pub fn times_log_of_base(&self, factor: &ScaledLog) -> Option<ScaledLog> {
        (factor.arg == self.base).then(|| ScaledLog::new(&self.coeff * &factor.coeff, self.arg.clone()))
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        match self.exact() {
            Some(r) => rational_decimal(&r, digits),
            None => decimal_of(|p| self.interval(p), digits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(17).parse().unwrap_or(f64::NAN)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

pub(crate) fn to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power(&BigUint::from(64u32)), (BigUint::from(2u32), 6));
        assert_eq!(perfect_power(&BigUint::from(1296u32)), (BigUint::from(6u32), 4));
        assert_eq!(perfect_power(&BigUint::from(12u32)), (BigUint::from(12u32), 1));
        assert_eq!(perfect_power(&BigUint::from(1u32)), (BigUint::from(1u32), 1));
    }

    #[test]
    fn ln_matches_known_digits() {
        // ln 2 = 0.693147180559945309417232121458176568075500134360255254120680...
        let s = ScaledLog::new(q(1, 1), BigUint::from(2u32)).to_decimal(50);
        assert_eq!(s, "0.69314718055994530941723212145817656807550013436025");
        // ln 10 = 2.302585092994045684017991454684364207601101488628772976033327...
        let s = ScaledLog::new(q(1, 1), BigUint::from(10u32)).to_decimal(40);
        assert_eq!(s, "2.3025850929940456840179914546843642076011");
    }

    #[test]
    fn exact_ratios() {
        let r = LogRatio::new(q(1, 1), BigUint::from(8u32), BigUint::from(4u32));
        assert_eq!(r.exact(), Some(q(3, 2)));
        let r = LogRatio::new(q(1, 1), BigUint::from(3u32), BigUint::from(2u32));
        assert_eq!(r.exact(), None);
        assert_eq!(r.cmp_rational(&q(158, 100)), Ordering::Greater);
        assert_eq!(r.cmp_rational(&q(159, 100)), Ordering::Less);
        assert_eq!(r.to_decimal(10), "1.5849625007");
    }

    #[test]
    fn scaled_log_equality_is_exact() {
        let a = ScaledLog::new(q(1, 4), BigUint::from(8u32));
        let b = ScaledLog::new(q(3, 4), BigUint::from(2u32));
        assert!(a.exact_eq(&b));
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        let c = ScaledLog::new(q(1, 2), BigUint::from(3u32));
        assert_eq!(a.cmp_exact(&c), Ordering::Less);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(rational_decimal(&q(7, 8), 4), "0.8750");
        assert_eq!(rational_decimal(&q(-1, 3), 3), "-0.333");
        assert_eq!(format_fixed(&BigInt::from(5), 3), "0.005");
    }
}
