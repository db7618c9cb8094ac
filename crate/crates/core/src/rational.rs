//! Exact rationals over arbitrary-precision integers.
//!
//! `Rational` is a thin newtype over [`num_rational::BigRational`]. It is the
//! only numeric type the engine computes with; floats appear only at the
//! output boundary (plots, sanity checks).

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("`{0}` is not finite")]
    NotFinite(String),
}

/// An exact fraction, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let d = denom.into();
        assert!(!d.is_zero(), "zero denominator");
        Rational(BigRational::new(numer.into(), d))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> Ordering {
        self.0.numer().sign().cmp_zero()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Integer value as `i64` when `self` is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        if self.is_integer() {
            self.0.numer().to_u64()
        } else {
            None
        }
    }

    /// Nearest `f64`; only for plotting and floating cross-checks.
    pub fn to_f64(&self) -> f64 {
        let n = self.0.numer();
        let d = self.0.denom();
        match (n.to_f64(), d.to_f64()) {
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() && y != 0.0 => x / y,
            _ => {
                // shift both down to keep the quotient in range
                let shift = n.bits().max(d.bits()).saturating_sub(1000);
                let n = n >> shift;
                let d = d >> shift;
                n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    /// Exact square root when `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = isqrt_exact(self.0.numer())?;
        let d = isqrt_exact(self.0.denom())?;
        Some(Rational::new(n, d))
    }

    pub fn is_perfect_square(&self) -> bool {
        self.sqrt_exact().is_some()
    }

    /// Rational enclosure `lo <= sqrt(self) <= hi` with `hi - lo <= 2^-bits`
    /// (relative to the denominator scale). `self` must be non-negative.
    pub fn sqrt_bounds(&self, bits: u32) -> (Rational, Rational) {
        assert!(!self.is_negative(), "sqrt of negative rational");
        if let Some(r) = self.sqrt_exact() {
            return (r.clone(), r);
        }
        // sqrt(n/d) = sqrt(n*d)/d
        let nd: BigInt = self.0.numer() * self.0.denom();
        let scale = BigInt::one() << (2 * bits as usize);
        let m = (nd * &scale).sqrt();
        let den = self.0.denom() * (BigInt::one() << bits as usize);
        let lo = Rational::new(m.clone(), den.clone());
        let hi = Rational::new(m + 1, den);
        (lo, hi)
    }

    /// Closest rational to `x` whose denominator does not exceed `max_den`,
    /// via continued-fraction convergents.
    pub fn from_f64_approx(x: f64, max_den: u64) -> Option<Rational> {
        if !x.is_finite() {
            return None;
        }
        let negative = x < 0.0;
        let mut rem = x.abs();
        let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
        for _ in 0..64 {
            let a = rem.floor();
            if a > 1e18 {
                break;
            }
            let a = a as u128;
            let p2 = a * p1 + p0;
            let q2 = a * q1 + q0;
            if q2 > max_den as u128 {
                break;
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = rem - rem.floor();
            if frac < 1e-15 {
                break;
            }
            rem = 1.0 / frac;
        }
        if q1 == 0 {
            return None;
        }
        let r = Rational::new(BigInt::from(p1), BigInt::from(q1));
        Some(if negative { -r } else { r })
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Rational) -> Rational {
        if other < self {
            other
        } else {
            self
        }
    }
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

trait SignExt {
    fn cmp_zero(&self) -> Ordering;
}

impl SignExt for Sign {
    fn cmp_zero(&self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p/q`, integers, and finite decimal literals such as `2.25`
    /// (parsed exactly, not through floating point).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let invalid = || ParseRationalError::Invalid(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| invalid())?;
            let d: BigInt = d.trim().parse().map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            return Ok(Rational::new(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid());
            }
            let negative = int.starts_with('-');
            let int_part: BigInt = match int {
                "" | "-" | "+" => BigInt::zero(),
                _ => int.parse().map_err(|_| invalid())?,
            };
            let frac_part: BigInt = frac.parse().map_err(|_| invalid())?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let magnitude = int_part.abs() * &scale + frac_part;
            let numer = if negative { -magnitude } else { magnitude };
            return Ok(Rational::new(numer, scale));
        }
        let n: BigInt = s.parse().map_err(|_| invalid())?;
        Ok(Rational::from_integer(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(n: $t) -> Self {
                Rational::from_integer(BigInt::from(n))
            }
        }
    )*};
}
from_int!(i32, i64, u32, u64, usize, i128, u128);

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}
binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}
impl<'a> Div<&'a Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / &rhs.0)
    }
}
impl Div<Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / rhs.0)
    }
}
impl<'b> Div<&'b Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &'b Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// `Rational::from(n)` shorthand used throughout the crate and its tests.
pub fn q(n: i64) -> Rational {
    Rational::from(n)
}

/// `n/d` shorthand.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Greatest common divisor of two non-negative machine integers.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
