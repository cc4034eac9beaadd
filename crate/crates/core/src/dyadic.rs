//! Exact scalars.
//!
//! [`Dyadic`] is the canonical `n/2^k` form used for planar coordinates and
//! command-line tolerances. [`Exact`] is a reduced rational that also covers
//! circle residues `j/q` and the `1/n` fiber heights; every dyadic value is an
//! `Exact`, and an `Exact` whose denominator is a power of two prints in
//! dyadic form so that each value has exactly one textual spelling.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest accepted exponent; keeps every shift inside `i128`.
pub const MAX_EXPONENT: u32 = 120;

/// `numerator / 2^exponent`, always canonical: `exponent == 0` or the
/// numerator is odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: i128,
    exponent: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { numerator: 0, exponent: 0 };
    pub const ONE: Dyadic = Dyadic { numerator: 1, exponent: 0 };

    /// Builds the canonical representative of `numerator / 2^exponent`.
    pub fn new(numerator: i128, exponent: u32) -> Dyadic {
        assert!(exponent <= MAX_EXPONENT, "dyadic exponent {exponent} too large");
        let mut n = numerator;
        let mut e = exponent;
        if n == 0 {
            e = 0;
        }
        while e > 0 && n % 2 == 0 {
            n /= 2;
            e -= 1;
        }
        Dyadic { numerator: n, exponent: e }
    }

    pub fn from_int(n: i128) -> Dyadic {
        Dyadic::new(n, 0)
    }

    /// `(2^n - 1) / 2^n`.
    pub fn one_minus_pow2(n: u32) -> Dyadic {
        Dyadic::new((1i128 << n) - 1, n)
    }

    /// `1 / 2^n`.
    pub fn pow2_inv(n: u32) -> Dyadic {
        Dyadic::new(1, n)
    }

    pub fn numerator(&self) -> i128 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn is_positive(&self) -> bool {
        self.numerator > 0
    }

    pub fn abs(self) -> Dyadic {
        Dyadic { numerator: self.numerator.abs(), exponent: self.exponent }
    }

    pub fn min(self, other: Dyadic) -> Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Numerator rescaled to exponent `e` (which must be >= self.exponent).
    fn scaled(&self, e: u32) -> i128 {
        let shift = e - self.exponent;
        self.numerator
            .checked_mul(1i128 << shift)
            .expect("dyadic arithmetic overflow")
    }

    /// Multiplies by an integer.
    pub fn mul_int(self, k: i128) -> Dyadic {
        Dyadic::new(
            self.numerator.checked_mul(k).expect("dyadic arithmetic overflow"),
            self.exponent,
        )
    }

    pub fn mul(self, other: Dyadic) -> Dyadic {
        Dyadic::new(
            self.numerator
                .checked_mul(other.numerator)
                .expect("dyadic arithmetic overflow"),
            self.exponent + other.exponent,
        )
    }

    /// Halves the value exactly.
    pub fn half(self) -> Dyadic {
        Dyadic::new(self.numerator, self.exponent + 1)
    }

    pub fn to_exact(self) -> Exact {
        Exact::from(self)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::ZERO
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        let n = self
            .scaled(e)
            .checked_add(rhs.scaled(e))
            .expect("dyadic arithmetic overflow");
        Dyadic::new(n, e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { numerator: -self.numerator, exponent: self.exponent }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled(e).cmp(&other.scaled(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

fn number_error(text: &str, reason: impl Into<String>) -> Error {
    Error::Number { text: text.to_string(), reason: reason.into() }
}

/// Parses `0` or `-?[1-9][0-9]*` with no redundant characters.
fn parse_signed(text: &str, whole: &str) -> Result<i128> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(number_error(whole, "numerator must be a decimal integer"));
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return Err(number_error(whole, "leading zeros are not allowed"));
    }
    if text.starts_with('-') && digits == "0" {
        return Err(number_error(whole, "negative zero is not allowed"));
    }
    text.parse::<i128>()
        .map_err(|_| number_error(whole, "numerator out of range"))
}

fn parse_unsigned(text: &str, whole: &str, what: &str) -> Result<u128> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(number_error(whole, format!("{what} must be a decimal integer")));
    }
    if text.len() > 1 && text.starts_with('0') {
        return Err(number_error(whole, "leading zeros are not allowed"));
    }
    text.parse::<u128>()
        .map_err(|_| number_error(whole, format!("{what} out of range")))
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts exactly the canonical spelling `n/2^k`.
    fn from_str(s: &str) -> Result<Dyadic> {
        let (num, exp) = s
            .split_once("/2^")
            .ok_or_else(|| number_error(s, "expected the form n/2^k"))?;
        let n = parse_signed(num, s)?;
        let k = parse_unsigned(exp, s, "exponent")?;
        if k > MAX_EXPONENT as u128 {
            return Err(number_error(s, format!("exponent exceeds {MAX_EXPONENT}")));
        }
        let k = k as u32;
        let canonical = Dyadic::new(n, k);
        if canonical.numerator != n || canonical.exponent != k {
            return Err(number_error(
                s,
                format!("non-canonical dyadic, write \"{canonical}\""),
            ));
        }
        Ok(canonical)
    }
}

/// Reduced rational with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exact(Ratio<i128>);

impl Exact {
    pub fn zero() -> Exact {
        Exact(Ratio::zero())
    }

    pub fn new(numer: i128, denom: i128) -> Exact {
        assert!(denom != 0, "zero denominator");
        Exact(Ratio::new(numer, denom))
    }

    pub fn from_int(n: i128) -> Exact {
        Exact(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(self) -> Exact {
        Exact(self.0.abs())
    }

    pub fn min(self, other: Exact) -> Exact {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Exact) -> Exact {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn mul_int(self, k: i128) -> Exact {
        Exact(self.0 * Ratio::from_integer(k))
    }

    pub fn div_int(self, k: i128) -> Exact {
        Exact(self.0 / Ratio::from_integer(k))
    }

    pub fn mul(self, other: Exact) -> Exact {
        Exact(self.0 * other.0)
    }

    /// The dyadic value, when the denominator is a power of two.
    pub fn to_dyadic(self) -> Option<Dyadic> {
        let d = self.denom();
        if d > 0 && (d & (d - 1)) == 0 {
            Some(Dyadic::new(self.numer(), d.trailing_zeros()))
        } else {
            None
        }
    }

    /// Value times `unit`, when that is an integer.
    pub fn in_units(self, unit: i128) -> Option<i128> {
        let scaled = self.0 * Ratio::from_integer(unit);
        scaled.is_integer().then(|| scaled.to_integer())
    }

    /// Smallest integer `m` with `self * unit <= m`.
    pub fn ceil_units(self, unit: i128) -> i128 {
        (self.0 * Ratio::from_integer(unit)).ceil().to_integer()
    }

    /// Largest integer `m` with `m <= self * unit`.
    pub fn floor_units(self, unit: i128) -> i128 {
        (self.0 * Ratio::from_integer(unit)).floor().to_integer()
    }

    /// Fixed-point decimal rendering rounded toward zero, for figure output.
    pub fn to_decimal(self, places: u32) -> String {
        let scale = 10i128.pow(places);
        let scaled = (self.0 * Ratio::from_integer(scale)).trunc().to_integer();
        let neg = scaled < 0 || (scaled == 0 && self.is_negative());
        let a = scaled.abs();
        let int = a / scale;
        let frac = a % scale;
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&int.to_string());
        if places > 0 {
            let mut digits = format!("{:0width$}", frac, width = places as usize);
            while digits.ends_with('0') {
                digits.pop();
            }
            if !digits.is_empty() {
                s.push('.');
                s.push_str(&digits);
            }
        }
        s
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Default for Exact {
    fn default() -> Self {
        Exact::zero()
    }
}

impl From<Dyadic> for Exact {
    fn from(d: Dyadic) -> Exact {
        Exact(Ratio::new(d.numerator, 1i128 << d.exponent))
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        Exact(self.0 + rhs.0)
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        Exact(self.0 - rhs.0)
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact(-self.0)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_dyadic() {
            Some(d) => d.fmt(f),
            None => write!(f, "{}/{}", self.numer(), self.denom()),
        }
    }
}

impl FromStr for Exact {
    type Err = Error;

    /// Accepts `n/2^k` (canonical dyadic) or a reduced `p/q` whose
    /// denominator is not a power of two.
    fn from_str(s: &str) -> Result<Exact> {
        if s.contains("/2^") {
            return s.parse::<Dyadic>().map(Exact::from);
        }
        let (num, den) = s
            .split_once('/')
            .ok_or_else(|| number_error(s, "expected n/2^k or p/q"))?;
        let p = parse_signed(num, s)?;
        let q = parse_unsigned(den, s, "denominator")?;
        if q == 0 || q > i64::MAX as u128 {
            return Err(number_error(s, "denominator out of range"));
        }
        let q = q as i128;
        let value = Exact::new(p, q);
        if value.to_dyadic().is_some() {
            return Err(number_error(s, format!("dyadic value, write \"{value}\"")));
        }
        if p.gcd(&q) != 1 {
            return Err(number_error(s, format!("not in lowest terms, write \"{value}\"")));
        }
        Ok(value)
    }
}
