//! Closed-form values of the embedding function where they are established.

use serde::{Deserialize, Serialize};

use super::BoundsError;
use crate::certify::{FAMILY_MAX_A, FAMILY_MIN_A};
use crate::domain::{DomainKind, EmbeddingProblem};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// `2a/(a+b−1)` for integers `b ≥ 2`, `a ≥ b+1` with `a − b` odd.
    EllipsoidParity,
    /// `2a/(a+2b−1)` into `P(1, b)` for odd integers `a ≥ 2b−1`.
    PolydiscOdd,
    /// `1` on `[1, b]` and `a/b` on `[b, b+1]`, also without stabilization.
    FirstStepEllipsoid,
    /// The first step for polydisc targets, also without stabilization.
    FirstStepPolydisc,
    /// `3a/(a+1)` into the ball for integers `a ≡ 2 mod 3`.
    UnitBallCongruence,
    /// `2a/(a+1)` for even `a` in `[6, 100]`, into `E(1, 2)` or `P(1, 1)`.
    CertifiedEven,
}

impl TheoremId {
    pub fn name(self) -> &'static str {
        match self {
            TheoremId::EllipsoidParity => "ellipsoid_parity",
            TheoremId::PolydiscOdd => "polydisc_odd",
            TheoremId::FirstStepEllipsoid => "first_step_ellipsoid",
            TheoremId::FirstStepPolydisc => "first_step_polydisc",
            TheoremId::UnitBallCongruence => "unit_ball_congruence",
            TheoremId::CertifiedEven => "certified_even",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremValue {
    pub value: Rational,
    pub theorem: TheoremId,
    pub hypotheses: String,
}

fn integer(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.to_i64()
    } else {
        None
    }
}

/// Smallest odd integer `≥ 2b − 1`.
pub fn first_odd_at_least(x: &Rational) -> Rational {
    let c = Rational::from(x.ceil());
    if c.is_integer() && c.to_i64().is_some_and(|n| n % 2 != 0) {
        c
    } else {
        c + Rational::one()
    }
}

fn candidates(p: &EmbeddingProblem) -> Vec<TheoremValue> {
    let (a, b) = (p.a(), p.b());
    let one = Rational::one();
    let two = Rational::from(2);
    let stabilized = p.is_stabilized();
    let ai = integer(&a);
    let bi = integer(&b);
    let mut out = Vec::new();
    let mut push = |value: Rational, theorem: TheoremId, hypotheses: String| {
        out.push(TheoremValue {
            value,
            theorem,
            hypotheses,
        })
    };
    match p.target_kind() {
        DomainKind::Ellipsoid => {
            if a <= b {
                push(one.clone(), TheoremId::FirstStepEllipsoid, format!("1 <= a = {a} <= b = {b}"));
            } else if a <= &b + &one {
                push(&a / &b, TheoremId::FirstStepEllipsoid, format!("b = {b} <= a = {a} <= b + 1"));
            }
            if stabilized {
                if let (Some(ai), Some(bi)) = (ai, bi) {
                    if bi > 1 && ai > bi && (ai - bi) % 2 != 0 {
                        push(
                            &two * &a / (&a + &b - &one),
                            TheoremId::EllipsoidParity,
                            format!("integers b = {bi} > 1, a = {ai} >= b + 1, a - b odd, N >= 1"),
                        );
                    }
                    if bi == 1 && ai >= 2 && ai % 3 == 2 {
                        push(
                            Rational::from(3) * &a / (&a + &one),
                            TheoremId::UnitBallCongruence,
                            format!("b = 1, integer a = {ai} = 2 mod 3, N >= 1"),
                        );
                    }
                    if bi == 2 && is_certified_even(ai) {
                        push(
                            &two * &a / (&a + &one),
                            TheoremId::CertifiedEven,
                            format!("b = 2, even a = {ai} in [{FAMILY_MIN_A}, {FAMILY_MAX_A}], N >= 1"),
                        );
                    }
                }
            }
        }
        DomainKind::Polydisc => {
            let a0 = first_odd_at_least(&(&two * &b - &one));
            let flat_end = (&a0 - &one) / &two + &b;
            if a <= flat_end {
                push(
                    one.clone(),
                    TheoremId::FirstStepPolydisc,
                    format!("1 <= a = {a} <= (a0 - 1)/2 + b = {flat_end}, a0 = {a0}"),
                );
            } else if a <= a0 {
                push(
                    &two * &a / (&a0 + &two * &b - &one),
                    TheoremId::FirstStepPolydisc,
                    format!("{flat_end} <= a = {a} <= a0 = {a0}"),
                );
            }
            if stabilized {
                if let Some(ai) = ai {
                    if ai % 2 != 0 && a >= &two * &b - &one {
                        push(
                            &two * &a / (&a + &two * &b - &one),
                            TheoremId::PolydiscOdd,
                            format!("odd integer a = {ai} >= 2b - 1, N >= 1"),
                        );
                    }
                    if bi == Some(1) && is_certified_even(ai) {
                        push(
                            &two * &a / (&a + &one),
                            TheoremId::CertifiedEven,
                            format!("b = 1, even a = {ai} in [{FAMILY_MIN_A}, {FAMILY_MAX_A}], N >= 1"),
                        );
                    }
                }
            }
        }
    }
    let s = p.scale();
    for t in &mut out {
        t.value = &t.value * &s;
    }
    out
}

fn is_certified_even(a: i64) -> bool {
    a % 2 == 0 && (FAMILY_MIN_A as i64..=FAMILY_MAX_A as i64).contains(&a)
}

/// The established value for `p`, if any. When several results apply they
/// must agree, and the most specific one is reported.
pub fn theorem_value(p: &EmbeddingProblem) -> Result<Option<TheoremValue>, BoundsError> {
    let all = candidates(p);
    for w in all.windows(2) {
        if w[0].value != w[1].value {
            return Err(BoundsError::ConflictingTheorems {
                first: w[0].theorem,
                first_value: w[0].value.clone(),
                second: w[1].theorem,
                second_value: w[1].value.clone(),
            });
        }
    }
    Ok(all.into_iter().last())
}
