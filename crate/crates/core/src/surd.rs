//! Exact square-root values.
//!
//! [`SqrtValue`] is `c·√r` with `c, r ≥ 0`; [`Real`] is the quadratic surd
//! `q + c·√r` with signed `c`. Every comparison is decided by squaring with a
//! sign case analysis; floating point is never consulted.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

/// `coefficient · √radicand`, both non-negative.
#[derive(Clone)]
pub struct SqrtValue {
    coefficient: Rational,
    radicand: Rational,
}

impl SqrtValue {
    pub fn new(coefficient: Rational, radicand: Rational) -> Self {
        assert!(!coefficient.is_negative(), "negative sqrt coefficient");
        assert!(!radicand.is_negative(), "negative radicand");
        SqrtValue {
            coefficient,
            radicand,
        }
    }

    /// `√r`.
    pub fn sqrt(radicand: Rational) -> Self {
        SqrtValue::new(Rational::one(), radicand)
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    /// The square `c²·r`, always rational.
    pub fn squared(&self) -> Rational {
        self.coefficient.square() * &self.radicand
    }

    /// Reduces to a rational when the radicand is a perfect square.
    pub fn to_rational(&self) -> Option<Rational> {
        self.radicand.sqrt_exact().map(|s| &self.coefficient * s)
    }

    pub fn scale(&self, factor: &Rational) -> SqrtValue {
        assert!(!factor.is_negative());
        SqrtValue::new(&self.coefficient * factor, self.radicand.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.coefficient.to_f64() * self.radicand.to_f64().sqrt()
    }

    pub fn cmp_rational(&self, other: &Rational) -> Ordering {
        if other.is_negative() {
            return Ordering::Greater;
        }
        self.squared().cmp(&other.square())
    }
}

/// Exact trichotomy for two square-root values.
pub fn sqrt_compare(u: &SqrtValue, v: &SqrtValue) -> Ordering {
    u.squared().cmp(&v.squared())
}

impl PartialEq for SqrtValue {
    fn eq(&self, other: &Self) -> bool {
        sqrt_compare(self, other) == Ordering::Equal
    }
}
impl Eq for SqrtValue {}

impl PartialOrd for SqrtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for SqrtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        sqrt_compare(self, other)
    }
}

impl fmt::Debug for SqrtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Real::from(self.clone()))
    }
}

impl fmt::Display for SqrtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Real::from(self.clone()))
    }
}

/// A quadratic surd `rational + coeff·√radicand`.
///
/// Normalized so that `radicand` is either zero (pure rational) or not the
/// square of a rational. Values with different radicands compare exactly.
#[derive(Clone)]
pub struct Real {
    rational: Rational,
    coeff: Rational,
    radicand: Rational,
}

impl Real {
    pub fn new(rational: Rational, coeff: Rational, radicand: Rational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if coeff.is_zero() || radicand.is_zero() {
            return Real::rational(rational);
        }
        if let Some(s) = radicand.sqrt_exact() {
            return Real::rational(rational + coeff * s);
        }
        // √(n/d) = √(n·d)/d keeps the radicand integral
        let d = Rational::from(radicand.denom().clone());
        let radicand = &radicand * &d.square();
        let coeff = coeff / d;
        Real {
            rational,
            coeff,
            radicand,
        }
    }

    pub fn rational(q: Rational) -> Self {
        Real {
            rational: q,
            coeff: Rational::zero(),
            radicand: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Real::rational(Rational::zero())
    }

    /// `√r` for a non-negative rational.
    pub fn sqrt_of(r: Rational) -> Self {
        Real::new(Rational::zero(), Rational::one(), r)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeff.is_zero() {
            Some(&self.rational)
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    /// `Some` when `self = c·√r` with `c ≥ 0`.
    pub fn as_sqrt(&self) -> Option<SqrtValue> {
        if self.rational.is_zero() && !self.coeff.is_negative() {
            Some(SqrtValue::new(self.coeff.clone(), self.radicand.clone()))
        } else {
            None
        }
    }

    pub fn signum(&self) -> Ordering {
        sign_of_surd(&self.rational, &self.coeff, &self.radicand)
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn neg(&self) -> Real {
        Real {
            rational: -&self.rational,
            coeff: -&self.coeff,
            radicand: self.radicand.clone(),
        }
    }

    pub fn abs(&self) -> Real {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add_rational(&self, r: &Rational) -> Real {
        Real {
            rational: &self.rational + r,
            coeff: self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Real {
        Real::new(
            &self.rational * r,
            &self.coeff * r,
            self.radicand.clone(),
        )
    }

    /// `√self.radicand` expressed over `other.radicand` when the two radicands
    /// differ by a rational square factor.
    fn compatible_factor(&self, other: &Real) -> Option<Rational> {
        if self.coeff.is_zero() || other.coeff.is_zero() {
            return Some(Rational::one());
        }
        (&self.radicand / &other.radicand).sqrt_exact()
    }

    /// Sum, when both terms live in the same quadratic field.
    pub fn checked_add(&self, other: &Real) -> Option<Real> {
        if other.coeff.is_zero() {
            return Some(self.add_rational(&other.rational));
        }
        if self.coeff.is_zero() {
            return Some(other.add_rational(&self.rational));
        }
        // √r_self = f·√r_other
        let f = self.compatible_factor(other)?;
        Some(Real::new(
            &self.rational + &other.rational,
            &self.coeff * f + &other.coeff,
            other.radicand.clone(),
        ))
    }

    pub fn checked_sub(&self, other: &Real) -> Option<Real> {
        self.checked_add(&other.neg())
    }

    /// Product, when both factors live in the same quadratic field.
    pub fn checked_mul(&self, other: &Real) -> Option<Real> {
        if other.coeff.is_zero() {
            return Some(self.mul_rational(&other.rational));
        }
        if self.coeff.is_zero() {
            return Some(other.mul_rational(&self.rational));
        }
        let f = self.compatible_factor(other)?;
        // (a + b f √r)(c + d √r) = ac + b d f r + (a d + b f c) √r
        let r = &other.radicand;
        let b = &self.coeff * &f;
        let rational = &self.rational * &other.rational + &b * &other.coeff * r;
        let coeff = &self.rational * &other.coeff + &b * &other.rational;
        Some(Real::new(rational, coeff, r.clone()))
    }

    pub fn square(&self) -> Real {
        self.checked_mul(self).expect("a surd is compatible with itself")
    }

    /// Quotient `self / other` within one quadratic field.
    pub fn checked_div(&self, other: &Real) -> Option<Real> {
        if other.coeff.is_zero() {
            assert!(!other.rational.is_zero(), "division by zero");
            return Some(self.mul_rational(&other.rational.recip()));
        }
        // multiply by the conjugate
        let conj = Real::new(
            other.rational.clone(),
            -&other.coeff,
            other.radicand.clone(),
        );
        let norm = other.rational.square() - other.coeff.square() * &other.radicand;
        assert!(!norm.is_zero(), "division by zero");
        Some(self.checked_mul(&conj)?.mul_rational(&norm.recip()))
    }

    /// Rational enclosure `lo ≤ self ≤ hi`, tightening with `bits`.
    pub fn enclosure(&self, bits: u32) -> (Rational, Rational) {
        if self.coeff.is_zero() {
            return (self.rational.clone(), self.rational.clone());
        }
        let (lo, hi) = self.radicand.sqrt_bounds(bits);
        let a = &self.rational + &self.coeff * &lo;
        let b = &self.rational + &self.coeff * &hi;
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// A rational lower bound that is within `2^-bits`-scale of `self`.
    pub fn lower_rational(&self, bits: u32) -> Rational {
        self.enclosure(bits).0
    }

    pub fn upper_rational(&self, bits: u32) -> Rational {
        self.enclosure(bits).1
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64() + self.coeff.to_f64() * self.radicand.to_f64().sqrt()
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Sign of `q + c·√r`.
fn sign_of_surd(q: &Rational, c: &Rational, r: &Rational) -> Ordering {
    let sc = if r.is_zero() {
        Ordering::Equal
    } else {
        c.signum()
    };
    let sq = q.signum();
    if sc == Ordering::Equal {
        return sq;
    }
    if sq == Ordering::Equal || sq == sc {
        return sc;
    }
    match q.square().cmp(&(c.square() * r)) {
        Ordering::Greater => sq,
        Ordering::Less => sc,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of `α + β√u + γ√v` with `u, v ≥ 0`.
fn sign_of_two_surds(
    alpha: &Rational,
    beta: &Rational,
    u: &Rational,
    gamma: &Rational,
    v: &Rational,
) -> Ordering {
    // B = β√u + γ√v
    let sb = {
        let s1 = if u.is_zero() { Ordering::Equal } else { beta.signum() };
        let s2 = if v.is_zero() { Ordering::Equal } else { gamma.signum() };
        if s1 == Ordering::Equal {
            s2
        } else if s2 == Ordering::Equal || s1 == s2 {
            s1
        } else {
            match (beta.square() * u).cmp(&(gamma.square() * v)) {
                Ordering::Greater => s1,
                Ordering::Less => s2,
                Ordering::Equal => Ordering::Equal,
            }
        }
    };
    let sa = alpha.signum();
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: compare α² with B² = β²u + γ²v + 2βγ√(uv)
    let rest = alpha.square() - beta.square() * u - gamma.square() * v;
    let cross = -(Rational::from(2) * beta * gamma);
    match sign_of_surd(&rest, &cross, &(u * v)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let alpha = &self.rational - &other.rational;
        sign_of_two_surds(
            &alpha,
            &self.coeff,
            &self.radicand,
            &-&other.coeff,
            &other.radicand,
        )
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Real {}

impl PartialEq<Rational> for Real {
    fn eq(&self, other: &Rational) -> bool {
        self.as_rational() == Some(other)
    }
}

impl PartialOrd<Rational> for Real {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(sign_of_surd(
            &(&self.rational - other),
            &self.coeff,
            &self.radicand,
        ))
    }
}

impl From<Rational> for Real {
    fn from(q: Rational) -> Self {
        Real::rational(q)
    }
}

impl From<&Rational> for Real {
    fn from(q: &Rational) -> Self {
        Real::rational(q.clone())
    }
}

impl From<SqrtValue> for Real {
    fn from(s: SqrtValue) -> Self {
        Real::new(Rational::zero(), s.coefficient, s.radicand)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let sqrt = if self.coeff == Rational::one() {
            format!("sqrt({})", self.radicand)
        } else if self.coeff == -Rational::one() {
            format!("-sqrt({})", self.radicand)
        } else {
            format!("{}*sqrt({})", self.coeff, self.radicand)
        };
        if self.rational.is_zero() {
            write!(f, "{sqrt}")
        } else if self.coeff.is_negative() {
            write!(f, "{}{}", self.rational, sqrt)
        } else {
            write!(f, "{}+{}", self.rational, sqrt)
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Wire form: `"p/q"` for rationals, `{"c","r"}` for `c·√r`, and
/// `{"q","c","r"}` for a general surd.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RealRepr {
    Rational(Rational),
    Surd { q: Rational, c: Rational, r: Rational },
    Sqrt { c: Rational, r: Rational },
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = if self.coeff.is_zero() {
            RealRepr::Rational(self.rational.clone())
        } else if self.rational.is_zero() {
            RealRepr::Sqrt {
                c: self.coeff.clone(),
                r: self.radicand.clone(),
            }
        } else {
            RealRepr::Surd {
                q: self.rational.clone(),
                c: self.coeff.clone(),
                r: self.radicand.clone(),
            }
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RealRepr::deserialize(deserializer)?;
        let check = |r: &Rational| {
            if r.is_negative() {
                Err(serde::de::Error::custom("negative radicand"))
            } else {
                Ok(())
            }
        };
        Ok(match repr {
            RealRepr::Rational(q) => Real::rational(q),
            RealRepr::Sqrt { c, r } => {
                check(&r)?;
                Real::new(Rational::zero(), c, r)
            }
            RealRepr::Surd { q, c, r } => {
                check(&r)?;
                Real::new(q, c, r)
            }
        })
    }
}

/// A rational strictly between `x < y`, refining enclosures until they
/// separate.
pub fn rational_between(x: &Real, y: &Real) -> Rational {
    assert!(x < y, "rational_between needs x < y");
    if let (Some(a), Some(b)) = (x.as_rational(), y.as_rational()) {
        return (a + b) / Rational::from(2);
    }
    let mut bits = 16;
    loop {
        let (_, xh) = x.enclosure(bits);
        let (yl, _) = y.enclosure(bits);
        if xh < yl {
            let mid = (&xh + &yl) / Rational::from(2);
            // the enclosures bound x and y, so mid is strictly inside
            debug_assert!(x < &Real::from(&mid) && &Real::from(&mid) < y);
            return mid;
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};
    use proptest::prelude::*;

    #[test]
    fn sqrt_compare_examples() {
        // √2 < 3/2
        assert_eq!(SqrtValue::sqrt(q(2)).cmp_rational(&frac(3, 2)), Ordering::Less);
        // 2·√(1/4) = 1
        let v = SqrtValue::new(q(2), frac(1, 4));
        assert_eq!(v.cmp_rational(&q(1)), Ordering::Equal);
        assert_eq!(v.to_rational(), Some(q(1)));
        // √(8/2) = 2
        let w = SqrtValue::sqrt(q(8) / q(2));
        assert_eq!(
            sqrt_compare(&w, &SqrtValue::new(q(2), q(1))),
            Ordering::Equal
        );
    }

    #[test]
    fn perfect_square_reduces() {
        let r = Real::sqrt_of(q(9));
        assert_eq!(r.as_rational(), Some(&q(3)));
        let r = Real::new(q(1), q(2), frac(9, 4));
        assert_eq!(r, Real::from(q(4)));
    }

    #[test]
    fn surd_signs() {
        // 3 − 2√2 > 0
        assert!(Real::new(q(3), q(-2), q(2)).is_positive());
        // 1 − √2 < 0
        assert!(Real::new(q(1), q(-1), q(2)).is_negative());
        // √2 − √3 < 0 via cross comparison
        assert!(Real::sqrt_of(q(2)) < Real::sqrt_of(q(3)));
        // 1 + √2 vs √3 + 1/2: 2.414 > 2.232
        assert!(Real::new(q(1), q(1), q(2)) > Real::new(frac(1, 2), q(1), q(3)));
        // √8 == 2√2
        assert_eq!(Real::sqrt_of(q(8)), Real::new(q(0), q(2), q(2)));
    }

    #[test]
    fn field_arithmetic() {
        let x = Real::new(q(1), q(1), q(2));
        let sq = x.square(); // 3 + 2√2
        assert_eq!(sq, Real::new(q(3), q(2), q(2)));
        let inv = Real::from(q(1)).checked_div(&x).unwrap(); // √2 − 1
        assert_eq!(inv, Real::new(q(-1), q(1), q(2)));
        assert!(Real::sqrt_of(q(2)).checked_add(&Real::sqrt_of(q(3))).is_none());
        assert_eq!(
            Real::sqrt_of(q(8)).checked_add(&Real::sqrt_of(q(2))).unwrap(),
            Real::new(q(0), q(3), q(2))
        );
    }

    #[test]
    fn between() {
        let a = Real::sqrt_of(q(2));
        let b = Real::new(frac(1, 1000000), q(1), q(2));
        let m = rational_between(&a, &b);
        assert!(a < m && b > m);
    }

    #[test]
    fn serde_shapes() {
        let r = Real::from(frac(7, 4));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"7/4\"");
        let s = Real::sqrt_of(q(2));
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"c":"1","r":"2"}"#
        );
        let t = Real::new(q(1), frac(-1, 2), q(3));
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"q":"1","c":"-1/2","r":"3"}"#);
        let back: Real = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    fn arb_sqrt() -> impl Strategy<Value = SqrtValue> {
        (0i64..500, 1i64..50, 0i64..500, 1i64..50)
            .prop_map(|(a, b, c, d)| SqrtValue::new(frac(a, b), frac(c, d)))
    }

    fn arb_real() -> impl Strategy<Value = Real> {
        (-200i64..200, 1i64..30, -200i64..200, 1i64..30, 0i64..60)
            .prop_map(|(a, b, c, d, r)| Real::new(frac(a, b), frac(c, d), q(r)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn sqrt_compare_matches_float(u in arb_sqrt(), v in arb_sqrt()) {
            let (fu, fv) = (u.to_f64(), v.to_f64());
            let exact = sqrt_compare(&u, &v);
            if (fu - fv).abs() > 1e-9 * (1.0 + fu.abs()) {
                prop_assert_eq!(exact, fu.partial_cmp(&fv).unwrap());
            }
        }

        #[test]
        fn real_compare_matches_float(x in arb_real(), y in arb_real()) {
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-9 * (1.0 + fx.abs()) {
                prop_assert_eq!(x.cmp(&y), fx.partial_cmp(&fy).unwrap());
            }
            prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        }

        #[test]
        fn enclosure_contains(x in arb_real()) {
            let (lo, hi) = x.enclosure(40);
            prop_assert!(x >= lo && x <= hi);
        }
    }
}
