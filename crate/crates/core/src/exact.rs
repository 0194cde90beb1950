//! Exact dyadic rationals `m / 2^e` and exact ratios of them.
//!
//! Every time and every curve coordinate in this crate is a [`Dyadic`]. The
//! numerator is an arbitrary-precision integer, so arithmetic never rounds and
//! never wraps. Square-to-linear ratios divide by time gaps such as `3/8`,
//! which leaves the dyadic ring; those values are carried as [`ExactRatio`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Depth guard used when `SK_DEPTH_BUDGET` is unset.
pub const DEFAULT_DEPTH_BUDGET: u32 = 64;

/// Fraction indices are `u128`, which caps any budget override.
pub const MAX_DEPTH_BUDGET: u32 = 127;

/// Environment variable that overrides [`DEFAULT_DEPTH_BUDGET`].
pub const DEPTH_BUDGET_ENV: &str = "SK_DEPTH_BUDGET";

/// Parses a depth-budget override. `None` means the value is unusable.
pub fn parse_depth_budget(raw: &str) -> Option<u32> {
    raw.trim()
        .parse::<u32>()
        .ok()
        .filter(|b| *b <= MAX_DEPTH_BUDGET)
}

/// The active depth budget, read once from `SK_DEPTH_BUDGET`.
///
/// Unparsable or out-of-range overrides fall back to the default; the CLI
/// validates the variable before any work starts.
pub fn depth_budget() -> u32 {
    static BUDGET: OnceLock<u32> = OnceLock::new();
    *BUDGET.get_or_init(|| {
        std::env::var(DEPTH_BUDGET_ENV)
            .ok()
            .and_then(|raw| parse_depth_budget(&raw))
            .unwrap_or(DEFAULT_DEPTH_BUDGET)
    })
}

pub(crate) fn check_depth(depth: u32) -> Result<()> {
    let budget = depth_budget();
    if depth > budget {
        return Err(Error::DepthBudget { depth, budget });
    }
    Ok(())
}

/// An exact dyadic rational `numerator / 2^exponent`.
///
/// Normal form: the exponent is zero or the numerator is odd, and zero is
/// stored as `0 / 2^0`. Structural equality is therefore value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    /// Builds the normalized value `m / 2^e`.
    pub fn new(m: impl Into<BigInt>, e: u32) -> Self {
        Self::normalize(m.into(), e)
    }

    fn normalize(mut num: BigInt, mut exp: u32) -> Self {
        if num.is_zero() {
            return Dyadic { num, exp: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(u64::from(exp)) as u32;
        if shift > 0 {
            num >>= shift;
            exp -= shift;
        }
        Dyadic { num, exp }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from(1)
    }

    /// `2^-e`.
    pub fn pow2_neg(e: u32) -> Self {
        Dyadic {
            num: BigInt::one(),
            exp: e,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn signum(&self) -> Ordering {
        self.num.sign().cmp(&Sign::NoSign)
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// `self / 2`.
    pub fn half(&self) -> Self {
        self.mul_pow2(-1)
    }

    /// `self * 2^shift` for any signed shift.
    pub fn mul_pow2(&self, shift: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        let exp = i64::from(self.exp) - shift;
        if exp >= 0 {
            let exp = u32::try_from(exp).expect("dyadic exponent exceeds u32");
            Dyadic::normalize(self.num.clone(), exp)
        } else {
            Dyadic {
                num: &self.num << (-exp) as u64,
                exp: 0,
            }
        }
    }

    /// The reciprocal, when it is dyadic (numerator `±1`).
    pub fn recip_pow2(&self) -> Option<Self> {
        if self.num.abs().is_one() {
            let shifted = BigInt::one() << self.exp as u64;
            Some(Dyadic::new(
                if self.is_negative() { -shifted } else { shifted },
                0,
            ))
        } else if self.exp == 0 && !self.num.is_zero() {
            // Even integers: ±2^k has reciprocal ±2^-k.
            let magnitude = self.num.abs();
            let tz = magnitude.trailing_zeros()?;
            if magnitude == BigInt::one() << tz {
                let e = u32::try_from(tz).ok()?;
                let sign = if self.is_negative() { -1 } else { 1 };
                Some(Dyadic::new(sign, e))
            } else {
                None
            }
        } else {
            None
        }
    }

    /// The integer value, when `self` has exponent zero and fits.
    pub fn to_i128(&self) -> Option<i128> {
        if self.exp == 0 {
            self.num.to_i128()
        } else {
            None
        }
    }

    /// `self * 2^e` as an integer. `None` if the result is not an integer.
    pub fn scaled_numerator(&self, e: u32) -> Option<BigInt> {
        if self.exp > e {
            None
        } else {
            Some(&self.num << (e - self.exp) as u64)
        }
    }

    /// `floor(self * 2^e)`.
    pub fn scaled_floor(&self, e: u32) -> BigInt {
        if self.exp <= e {
            &self.num << (e - self.exp) as u64
        } else {
            self.num.div_floor(&(BigInt::one() << (self.exp - e) as u64))
        }
    }

    /// Nearest `f64`; for display only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.num.bits();
        if bits <= 1000 {
            let m = self.num.to_f64().unwrap_or(f64::NAN);
            scale_f64(m, -i64::from(self.exp))
        } else {
            let drop = bits - 64;
            let m = (&self.num >> drop).to_f64().unwrap_or(f64::NAN);
            scale_f64(m, drop as i64 - i64::from(self.exp))
        }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Result<Self> {
        if !v.is_finite() {
            return Err(domain(format!("{v} is not finite")));
        }
        if v == 0.0 {
            return Ok(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1u64 << 52) - 1);
        let (mantissa, e) = if exponent == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), exponent - 1075)
        };
        let m = BigInt::from(mantissa) * sign;
        Ok(Dyadic::new(m, 0).mul_pow2(e))
    }

    /// Parses a decimal literal such as `-0.125` or `1e-3`, rounding to the
    /// nearest multiple of `2^-bits`. The flag reports whether no rounding
    /// was needed.
    pub fn from_decimal(text: &str, bits: u32) -> Result<(Self, bool)> {
        let (negative, digits, exp10) = parse_decimal(text)?;
        let magnitude = if exp10 >= 0 {
            let value = digits * BigInt::from(10u32).pow(exp10 as u32);
            (Dyadic::new(value, 0), true)
        } else {
            let q = BigInt::from(10u32).pow((-exp10) as u32);
            let n = digits << bits as u64;
            let (quot, rem) = n.div_rem(&q);
            let exact = rem.is_zero();
            // Round half away from zero.
            let rounded = if &rem * 2 >= q { quot + 1 } else { quot };
            (Dyadic::new(rounded, bits), exact)
        };
        let value = if negative { -magnitude.0 } else { magnitude.0 };
        Ok((value, magnitude.1))
    }

    /// Decimal rendering with `places` digits after the point, for reports.
    pub fn to_decimal_string(&self, places: usize) -> String {
        format!("{:.*}", places, self.to_f64())
    }

    /// Exact decimal expansion; every dyadic has a finite one since
    /// `m / 2^e = m * 5^e / 10^e`.
    pub fn to_exact_decimal(&self) -> String {
        if self.exp == 0 {
            return self.num.to_string();
        }
        let scaled = self.num.abs() * BigInt::from(5u32).pow(self.exp);
        let digits = format!("{:0>width$}", scaled.to_string(), width = self.exp as usize + 1);
        let (int_part, frac_part) = digits.split_at(digits.len() - self.exp as usize);
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{sign}{int_part}.{frac_part}")
    }
}

fn scale_f64(m: f64, e: i64) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 0 {
        let step = e.min(1000);
        v *= 2f64.powi(step as i32);
        e -= step;
    }
    while e < 0 {
        let step = (-e).min(1000);
        v *= 2f64.powi(-(step as i32));
        e += step;
    }
    v
}

/// Splits a decimal literal into (negative, digits, power of ten).
fn parse_decimal(text: &str) -> Result<(bool, BigInt, i64)> {
    let bad = || Error::Parse(format!("invalid decimal literal {text:?}"));
    let s = text.trim();
    let (negative, s) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp_part) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut exp10: i64 = match exp_part {
        Some(e) => e.parse::<i64>().map_err(|_| bad())?,
        None => 0,
    };
    if exp10.abs() > 10_000 {
        return Err(Error::Parse(format!("decimal exponent out of range in {text:?}")));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let digits = BigInt::parse_bytes(all_digits.as_bytes(), 10).ok_or_else(bad)?;
    exp10 -= frac_part.len() as i64;
    Ok((negative, digits, exp10))
}

/// Brings two values to a shared exponent and returns the scaled numerators.
fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, u32) {
    let e = a.exp.max(b.exp);
    let an = &a.num << (e - a.exp) as u64;
    let bn = &b.num << (e - b.exp) as u64;
    (an, bn, e)
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `m`, `m/2^e` and `m/d` with `d` a power of two.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid dyadic literal {s:?}"));
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            let t = t.trim();
            let t = t.strip_prefix('+').unwrap_or(t);
            BigInt::from_str(t).map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(Dyadic::new(parse_int(s)?, 0)),
            Some((m, den)) => {
                let m = parse_int(m)?;
                let den = den.trim();
                if let Some(e) = den.strip_prefix("2^") {
                    let e: u32 = e.trim().parse().map_err(|_| bad())?;
                    Ok(Dyadic::new(m, e))
                } else {
                    let d = parse_int(den)?;
                    if !d.is_positive() {
                        return Err(bad());
                    }
                    let tz = d.trailing_zeros().unwrap_or(0);
                    if d != BigInt::one() << tz {
                        return Err(Error::Parse(format!(
                            "denominator of {s:?} is not a power of two"
                        )));
                    }
                    Ok(Dyadic::new(m, u32::try_from(tz).map_err(|_| bad())?))
                }
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(i) => Ok(Dyadic::from(i)),
        }
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Dyadic {
            fn from(v: $t) -> Self {
                Dyadic::new(BigInt::from(v), 0)
            }
        }
    )*};
}
from_int!(i32, i64, i128, u32, u64, u128);

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.exp == other.exp {
            return self.num.cmp(&other.num);
        }
        let (a, b, _) = aligned(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = aligned(self, rhs);
        Dyadic::normalize(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = aligned(self, rhs);
        Dyadic::normalize(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::normalize(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic { (&self).$m(&rhs) }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic { (&self).$m(rhs) }
        }
        impl $tr<Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

/// Shorthand for [`Dyadic::new`].
pub fn dyadic(m: i64, e: u32) -> Dyadic {
    Dyadic::new(m, e)
}

/// Exact three-way comparison of `num / den` against `bound`.
pub fn cmp_ratio(num: &Dyadic, den: &Dyadic, bound: &Dyadic) -> Result<Ordering> {
    if !den.is_positive() {
        return Err(domain(format!("ratio denominator {den} is not positive")));
    }
    Ok(num.cmp(&(bound * den)))
}

/// An exact nonnegative rational `num / den` with dyadic parts.
///
/// Stored reduced: `den` is an odd positive integer coprime to the
/// numerator's odd part, so equal values are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactRatio {
    num: Dyadic,
    den: Dyadic,
}

impl ExactRatio {
    pub fn new(num: Dyadic, den: Dyadic) -> Result<Self> {
        if !den.is_positive() {
            return Err(domain(format!("ratio denominator {den} is not positive")));
        }
        if num.is_negative() {
            return Err(domain(format!("ratio numerator {num} is negative")));
        }
        if num.is_zero() {
            return Ok(ExactRatio {
                num: Dyadic::zero(),
                den: Dyadic::one(),
            });
        }
        // num = A/2^a, den = B/2^b  =>  value = A * 2^(b-a) / B.
        let mut odd = den.num.clone();
        let tz = odd.trailing_zeros().unwrap_or(0);
        odd >>= tz;
        let g = num.num.gcd(&odd);
        let a = &num.num / &g;
        let b = odd / &g;
        let shift = i64::from(den.exp) - i64::from(num.exp) - tz as i64;
        Ok(ExactRatio {
            num: Dyadic::new(a, 0).mul_pow2(shift),
            den: Dyadic::new(b, 0),
        })
    }

    pub fn from_dyadic(value: Dyadic) -> Result<Self> {
        ExactRatio::new(value, Dyadic::one())
    }

    pub fn integer(v: i64) -> Self {
        ExactRatio::from_dyadic(Dyadic::from(v)).expect("nonnegative integer ratio")
    }

    pub fn num(&self) -> &Dyadic {
        &self.num
    }

    pub fn den(&self) -> &Dyadic {
        &self.den
    }

    /// Exact comparison against a dyadic bound.
    pub fn cmp_dyadic(&self, bound: &Dyadic) -> Ordering {
        self.num.cmp(&(bound * &self.den))
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64()
    }
}

impl Ord for ExactRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for ExactRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactRatio({self})")
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Dyadic::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} / {}", self.num, self.den)
        }
    }
}

impl FromStr for ExactRatio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(" / ") {
            Some((n, d)) => ExactRatio::new(n.parse()?, d.parse()?),
            None => ExactRatio::from_dyadic(s.parse()?),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RatioRepr {
    num: Dyadic,
    den: Dyadic,
    #[serde(default)]
    approx: f64,
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RatioRepr {
            num: self.num.clone(),
            den: self.den.clone(),
            approx: self.to_f64(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactRatio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RatioRepr::deserialize(deserializer)?;
        ExactRatio::new(repr.num, repr.den).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_examples() {
        let half = dyadic(2, 2);
        assert_eq!(half.numerator(), &BigInt::from(1));
        assert_eq!(half.exponent(), 1);

        let zero = dyadic(0, 5);
        assert_eq!(zero.numerator(), &BigInt::from(0));
        assert_eq!(zero.exponent(), 0);

        let three_quarters = dyadic(3, 2);
        assert_eq!(three_quarters.numerator(), &BigInt::from(3));
        assert_eq!(three_quarters.exponent(), 2);

        // Even integers keep exponent zero.
        let four = dyadic(16, 2);
        assert_eq!((four.numerator().clone(), four.exponent()), (BigInt::from(4), 0));
    }

    #[test]
    fn cmp_ratio_examples() {
        assert_eq!(
            cmp_ratio(&dyadic(2, 0), &dyadic(1, 1), &dyadic(4, 0)).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            cmp_ratio(&dyadic(1, 0), &dyadic(1, 0), &dyadic(4, 0)).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            cmp_ratio(&dyadic(9, 2), &dyadic(1, 1), &dyadic(4, 0)).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn cmp_ratio_rejects_nonpositive_denominator() {
        assert!(matches!(
            cmp_ratio(&dyadic(1, 0), &dyadic(0, 0), &dyadic(4, 0)),
            Err(Error::Domain(_))
        ));
        assert!(cmp_ratio(&dyadic(1, 0), &dyadic(-1, 3), &dyadic(4, 0)).is_err());
    }

    #[test]
    fn text_encoding() {
        assert_eq!(dyadic(3, 2).to_string(), "3/2^2");
        assert_eq!(dyadic(-8, 0).to_string(), "-8");
        assert_eq!("3/2^2".parse::<Dyadic>().unwrap(), dyadic(3, 2));
        assert_eq!("1/2^1".parse::<Dyadic>().unwrap(), dyadic(1, 1));
        assert_eq!("6/8".parse::<Dyadic>().unwrap(), dyadic(3, 2));
        assert_eq!("-12".parse::<Dyadic>().unwrap(), dyadic(-12, 0));
        assert_eq!("4/2^3".parse::<Dyadic>().unwrap(), dyadic(1, 1));
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("abc".parse::<Dyadic>().is_err());
        assert!("1/2^x".parse::<Dyadic>().is_err());
    }

    #[test]
    fn decimal_conversion() {
        let (v, exact) = Dyadic::from_decimal("0.375", 10).unwrap();
        assert!(exact);
        assert_eq!(v, dyadic(3, 3));
        let (v, exact) = Dyadic::from_decimal("-1.5e1", 4).unwrap();
        assert!(exact);
        assert_eq!(v, dyadic(-15, 0));
        let (v, exact) = Dyadic::from_decimal("0.1", 4).unwrap();
        assert!(!exact);
        // 0.1 * 16 = 1.6 rounds to 2/16.
        assert_eq!(v, dyadic(2, 4));
        assert!(Dyadic::from_decimal("1.2.3", 8).is_err());
        assert!(Dyadic::from_decimal("", 8).is_err());
    }

    #[test]
    fn exact_decimal_expansion() {
        assert_eq!(dyadic(3, 2).to_exact_decimal(), "0.75");
        assert_eq!(dyadic(-5, 3).to_exact_decimal(), "-0.625");
        assert_eq!(dyadic(7, 0).to_exact_decimal(), "7");
        assert_eq!(dyadic(9, 1).to_exact_decimal(), "4.5");
        for v in [dyadic(3, 2), dyadic(-1234567, 17), dyadic(1, 40)] {
            let (back, exact) = Dyadic::from_decimal(&v.to_exact_decimal(), 64).unwrap();
            assert!(exact);
            assert_eq!(back, v);
        }
    }

    #[test]
    fn f64_round_trip() {
        for v in [0.0, 1.0, -0.75, 1e-300, 123456.125, f64::MIN_POSITIVE / 8.0] {
            assert_eq!(Dyadic::from_f64(v).unwrap().to_f64(), v);
        }
        assert!(Dyadic::from_f64(f64::NAN).is_err());
    }

    #[test]
    fn reciprocal_of_powers_of_two() {
        assert_eq!(dyadic(1, 3).recip_pow2(), Some(dyadic(8, 0)));
        assert_eq!(dyadic(-4, 0).recip_pow2(), Some(dyadic(-1, 2)));
        assert_eq!(dyadic(3, 1).recip_pow2(), None);
    }

    #[test]
    fn ratio_normal_form() {
        let a = ExactRatio::new(dyadic(8, 0), dyadic(3, 0)).unwrap();
        let b = ExactRatio::new(dyadic(1, 0), dyadic(3, 3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "8 / 3");
        let four = ExactRatio::new(dyadic(2, 0), dyadic(1, 1)).unwrap();
        assert_eq!(four, ExactRatio::integer(4));
        assert_eq!(four.cmp_dyadic(&dyadic(4, 0)), Ordering::Equal);
        assert_eq!("8 / 3".parse::<ExactRatio>().unwrap(), a);
        assert!(ExactRatio::new(dyadic(-1, 0), dyadic(1, 0)).is_err());
        assert!(ExactRatio::new(dyadic(1, 0), dyadic(0, 0)).is_err());
    }

    #[test]
    fn ratio_json_round_trip() {
        let r = ExactRatio::new(dyadic(9, 2), dyadic(3, 1)).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: ExactRatio = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn depth_budget_parsing() {
        assert_eq!(parse_depth_budget("80"), Some(80));
        assert_eq!(parse_depth_budget("500"), None);
        assert_eq!(parse_depth_budget("x"), None);
    }
}
