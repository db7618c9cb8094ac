//! Termwise dominance of lattice sequences with a certified tail.
//!
//! `E(1, a) ↪ λ·E(1, b)` in dimension four exactly when
//! `N_k(1, a) ≤ λ·N_k(1, b)` for every `k`. Only finitely many indices can be
//! scanned, so the tail is closed off by explicit bounds on the counting
//! function `C_x(t) = #{(m, n) ≥ 0 : m + n·x ≤ t}`. For `x = p/q` in lowest
//! terms and `t ∈ (1/q)ℤ`, `t ≥ 0`,
//!
//! ```text
//! t²/(2x) + c_x·t − q/8  ≤  C_x(t)  ≤  t²/(2x) + c_x·t + (q+1)/(2q) + x/8 + q/8
//! ```
//!
//! with `c_x = 1/2 + (q+1)/(2p)`. `N_k(1, a) ≤ λ·N_k(1, b)` is equivalent to
//! `C_a(λ·N_k(1, b)) ≥ k + 1`, so it suffices that `C_a(λ s) ≥ C_b(s)` on the
//! grid of `b`; the two bounds turn that into a quadratic inequality in `s`
//! which holds beyond an explicit threshold.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::FourDimError;
use crate::capacities::LatticeStream;
use crate::curve::Status;
use crate::rational::Rational;
use crate::surd::Real;

/// Terms scanned by default before giving up on a tail certificate.
pub const DEFAULT_DEPTH: u64 = 50_000;

/// When `λ` is below the volume ratio a violation must exist; the scan keeps
/// looking for it up to this index.
pub const VIOLATION_SEARCH_CAP: u64 = 10_000_000;

const SQRT_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceResult {
    pub holds: bool,
    /// First index with `N_k(1, a) > λ·N_k(1, b)`.
    pub witness_k: Option<u64>,
    /// Last index compared before the tail certificate (or the search) took
    /// over.
    pub certified_through: u64,
    pub status: Status,
}

/// Four-dimensional ellipsoid embedding value with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct C0Value {
    pub value: Real,
    pub status: Status,
    /// Index of the largest ratio `N_k(1, a)/N_k(1, b)`; `None` when the
    /// volume bound is larger.
    pub witness_k: Option<u64>,
    pub checked_through: u64,
}

/// `c_x = 1/2 + (q+1)/(2p)`.
fn linear_coefficient(x: &Rational) -> Rational {
    Rational::new(1, 2) + Rational::from(x.denom() + 1u32) / Rational::from(x.numer() * 2u32)
}

fn denom(x: &Rational) -> Rational {
    Rational::from(x.denom().clone())
}

/// Lower bound for `C_x(t)`, valid for `t ≥ 0` on the grid of `x`.
pub fn count_lower(x: &Rational, t: &Rational) -> Rational {
    t.square() / (x * Rational::from(2)) + linear_coefficient(x) * t - denom(x) / Rational::from(8)
}

/// Upper bound for `C_x(t)`, valid for `t ≥ 0` on the grid of `x`.
pub fn count_upper(x: &Rational, t: &Rational) -> Rational {
    let q = denom(x);
    t.square() / (x * Rational::from(2))
        + linear_coefficient(x) * t
        + (&q + Rational::one()) / (&q * Rational::from(2))
        + x / Rational::from(8)
        + q / Rational::from(8)
}

/// Exact `C_x(t)` by summing over rows; used as an oracle.
pub fn count_exact(x: &Rational, t: &Rational) -> BigInt {
    let mut total = BigInt::from(0);
    let mut offset = Rational::zero();
    while offset <= *t {
        total += (t - &offset).floor() + 1;
        offset += x;
    }
    total
}

/// `λ` split into what the threshold computation needs: `λ²` exactly, a
/// rational lower bound, and the grid denominator of `λ` when rational.
struct Factor {
    square: Rational,
    lower: Rational,
    rational: Option<Rational>,
}

impl Factor {
    fn new(lambda: &Real) -> Result<Factor, FourDimError> {
        if let Some(r) = lambda.as_rational() {
            if !r.is_positive() {
                return Err(FourDimError::InvalidParameter(format!("λ = {r} must be positive")));
            }
            return Ok(Factor {
                square: r.square(),
                lower: r.clone(),
                rational: Some(r.clone()),
            });
        }
        let s = lambda
            .as_sqrt()
            .ok_or_else(|| FourDimError::UnsupportedFactor(lambda.clone()))?;
        Ok(Factor {
            square: s.squared(),
            lower: lambda.lower_rational(SQRT_BITS),
            rational: None,
        })
    }
}

/// A rational `s*` such that `C_a(λ s) ≥ C_b(s)` for every `s ≥ s*` on the
/// grid of `b`, or `None` when the bounds cannot give one (`λ` below the
/// volume ratio, or too close to it).
pub fn tail_threshold(a: &Rational, b: &Rational, lambda: &Real) -> Result<Option<Rational>, FourDimError> {
    let f = Factor::new(lambda)?;
    Ok(threshold_for(a, b, &f))
}

fn threshold_for(a: &Rational, b: &Rational, f: &Factor) -> Option<Rational> {
    let two = Rational::from(2);
    let eight = Rational::from(8);
    let qa = denom(a);
    let qb = denom(b);
    let ca = linear_coefficient(a);
    let cb = linear_coefficient(b);
    // λs is a multiple of 1/(den λ · q_b); flooring it to the grid of a loses
    // at most g
    let g = match &f.rational {
        Some(l) => {
            let fine = a.denom().lcm(&(l.denom() * b.denom()));
            qa.recip() - Rational::from(fine).recip()
        }
        None => qa.recip(),
    };
    let alpha = &f.square / (a * &two) - (b * &two).recip();
    let beta = &f.lower * (&ca - &g / a) - &cb;
    let gamma = g.square() / (a * &two)
        - &g * &ca
        - &qa / &eight
        - (&qb + Rational::one()) / (&qb * &two)
        - b / &eight
        - &qb / &eight;
    let root = match alpha.signum() {
        Ordering::Less => return None,
        Ordering::Equal => {
            if !beta.is_positive() {
                return None;
            }
            -(&gamma / &beta)
        }
        Ordering::Greater => {
            let disc = beta.square() - Rational::from(4) * &alpha * &gamma;
            let (_, hi) = disc.sqrt_bounds(SQRT_BITS);
            (hi - &beta) / (&alpha * &two)
        }
    };
    Some(root.max(&g / &f.lower).max(Rational::zero()))
}

/// Integer form of the lattice sequence: `N_k(1, x) = value / q`.
struct Scaled {
    stream: LatticeStream<u128>,
    q: u128,
}

fn to_u128(x: &BigInt) -> Result<u128, FourDimError> {
    x.to_u128().ok_or(FourDimError::ParameterTooLarge)
}

impl Scaled {
    fn new(x: &Rational) -> Result<Scaled, FourDimError> {
        let q = to_u128(x.denom())?;
        let p = to_u128(x.numer())?;
        if p > u64::MAX as u128 || q > u64::MAX as u128 {
            return Err(FourDimError::ParameterTooLarge);
        }
        let mut stream = LatticeStream::new(q, p);
        stream.next(); // N_0 = 0
        Ok(Scaled { stream, q })
    }

    fn next(&mut self) -> u128 {
        self.stream.next().expect("lattice streams are infinite")
    }
}

/// `x1·x2 cmp y1·y2`, exactly.
fn cmp_products(x1: u128, x2: u128, y1: u128, y2: u128) -> Ordering {
    match (x1.checked_mul(x2), y1.checked_mul(y2)) {
        (Some(l), Some(r)) => l.cmp(&r),
        _ => (BigInt::from(x1) * x2).cmp(&(BigInt::from(y1) * y2)),
    }
}

/// Exact test of `A/q_a ≤ λ·B/q_b` using `λ²` when `λ` is irrational.
struct Comparator {
    // λ rational: A·q_b·d ≤ n·B·q_a; irrational: (A·q_b)²·d ≤ n·(B·q_a)²
    n: BigInt,
    d: BigInt,
    squared: bool,
    qa: BigInt,
    qb: BigInt,
}

impl Comparator {
    fn new(f: &Factor, qa: u128, qb: u128) -> Comparator {
        let (value, squared) = match &f.rational {
            Some(r) => (r.clone(), false),
            None => (f.square.clone(), true),
        };
        Comparator {
            n: value.numer().clone(),
            d: value.denom().clone(),
            squared,
            qa: BigInt::from(qa),
            qb: BigInt::from(qb),
        }
    }

    fn violates(&self, a_val: u128, b_val: u128) -> bool {
        if let Some(v) = self.violates_small(a_val, b_val) {
            return v;
        }
        let mut lhs = BigInt::from(a_val) * &self.qb;
        let mut rhs = BigInt::from(b_val) * &self.qa;
        if self.squared {
            lhs = &lhs * &lhs;
            rhs = &rhs * &rhs;
        }
        lhs * &self.d > rhs * &self.n
    }

    fn violates_small(&self, a_val: u128, b_val: u128) -> Option<bool> {
        let (qa, qb, n, d) = (
            self.qa.to_u128()?,
            self.qb.to_u128()?,
            self.n.to_u128()?,
            self.d.to_u128()?,
        );
        let mut lhs = a_val.checked_mul(qb)?;
        let mut rhs = b_val.checked_mul(qa)?;
        if self.squared {
            lhs = lhs.checked_mul(lhs)?;
            rhs = rhs.checked_mul(rhs)?;
        }
        Some(lhs.checked_mul(d)? > rhs.checked_mul(n)?)
    }
}

/// Smallest scaled `B` (that is `N_k(1, b)·q_b`) beyond which the tail is
/// certified.
fn scaled_threshold(s: &Rational, qb: u128) -> Option<u128> {
    (s * Rational::from(qb)).ceil().to_u128()
}

fn inclusion_applies(a: &Rational, b: &Rational, lambda: &Real) -> bool {
    *lambda >= Rational::one() && lambda.mul_rational(b) >= *a
}

fn check_problem(a: &Rational, b: &Rational) -> Result<(), FourDimError> {
    if *a < Rational::one() || *b < Rational::one() {
        return Err(FourDimError::InvalidParameter(format!(
            "need a, b >= 1, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// Checks `N_k(1, a) ≤ λ·N_k(1, b)` for all `k`.
///
/// The scan stops with an exact answer once a violation appears or the tail
/// certificate applies. Otherwise it stops at `depth` and the answer is
/// conjectural, except that for `λ` below the volume ratio it keeps going
/// until the violation that must exist is found.
pub fn dominance(a: &Rational, b: &Rational, lambda: &Real, depth: u64) -> Result<DominanceResult, FourDimError> {
    check_problem(a, b)?;
    let f = Factor::new(lambda)?;
    if inclusion_applies(a, b, lambda) {
        return Ok(DominanceResult {
            holds: true,
            witness_k: None,
            certified_through: 0,
            status: Status::Exact,
        });
    }
    let mut sa = Scaled::new(a)?;
    let mut sb = Scaled::new(b)?;
    let cmp = Comparator::new(&f, sa.q, sb.q);
    let threshold = threshold_for(a, b, &f).and_then(|s| scaled_threshold(&s, sb.q));
    let below_volume = f.square < a / b;
    let limit = if below_volume { depth.max(VIOLATION_SEARCH_CAP) } else { depth };
    for k in 1..=limit {
        let av = sa.next();
        let bv = sb.next();
        if threshold.is_some_and(|t| bv >= t) {
            return Ok(DominanceResult {
                holds: true,
                witness_k: None,
                certified_through: k - 1,
                status: Status::Exact,
            });
        }
        if cmp.violates(av, bv) {
            return Ok(DominanceResult {
                holds: false,
                witness_k: Some(k),
                certified_through: k,
                status: Status::Exact,
            });
        }
    }
    Ok(DominanceResult {
        holds: true,
        witness_k: None,
        certified_through: limit,
        status: Status::Conjectural,
    })
}

/// `c⁰_{b,ell}(a) = max(√(a/b), sup_k N_k(1, a)/N_k(1, b))`.
///
/// The running supremum `M` is tracked together with the tail threshold for
/// `λ = max(M, √(a/b))`; once `N_k(1, b)` passes the threshold no later ratio
/// can exceed `λ` and the value is exact.
pub fn c0_ell(a: &Rational, b: &Rational, depth: u64) -> Result<C0Value, FourDimError> {
    check_problem(a, b)?;
    let volume = Real::sqrt_of(a / b);
    let mut sa = Scaled::new(a)?;
    let mut sb = Scaled::new(b)?;
    let (qa, qb) = (sa.q, sb.q);
    // best ratio so far as the raw pair (A, B): ratio = A·q_b / (B·q_a)
    let mut best: Option<(u128, u128, u64)> = None;
    let mut lambda = volume.clone();
    let mut threshold: Option<u128> = None;
    let mut fresh = true;
    for k in 1..=depth.max(1) {
        if fresh {
            fresh = false;
            if inclusion_applies(a, b, &lambda) {
                return Ok(finish(lambda, best, Status::Exact, k - 1, &volume));
            }
            let f = Factor::new(&lambda)?;
            threshold = threshold_for(a, b, &f).and_then(|s| scaled_threshold(&s, qb));
        }
        let av = sa.next();
        let bv = sb.next();
        if threshold.is_some_and(|t| bv >= t) {
            return Ok(finish(lambda, best, Status::Exact, k - 1, &volume));
        }
        let better = match best {
            None => true,
            Some((ba, bb, _)) => cmp_products(av, bb, ba, bv) == Ordering::Greater,
        };
        if better {
            best = Some((av, bv, k));
            let ratio = Rational::new(
                BigInt::from(av) * BigInt::from(qb),
                BigInt::from(bv) * BigInt::from(qa),
            );
            let candidate = Real::from(ratio);
            if candidate > lambda {
                lambda = candidate;
                fresh = true;
            }
        }
    }
    Ok(finish(lambda, best, Status::Conjectural, depth, &volume))
}

fn finish(
    value: Real,
    best: Option<(u128, u128, u64)>,
    status: Status,
    checked_through: u64,
    volume: &Real,
) -> C0Value {
    let witness_k = if value == *volume && !volume.is_rational() {
        None
    } else {
        best.map(|(_, _, k)| k)
    };
    C0Value {
        value,
        status,
        witness_k,
        checked_through,
    }
}
