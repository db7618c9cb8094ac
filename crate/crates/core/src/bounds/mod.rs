//! Lower and upper bounds for the embedding factor `λ`.
//!
//! Every bound is computed for the normalized problem `E(1, a) → T(1, b)` and
//! then multiplied by [`EmbeddingProblem::scale`].

pub mod reconcile;
pub mod theorems;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::capacities::{eh_ellipsoid, gk_ellipsoid, gk_polydisc, CapacityError};
use crate::certify::BetaWord;
use crate::curve::Status;
use crate::domain::{DomainKind, EmbeddingProblem};
use crate::rational::Rational;
use crate::surd::Real;

pub use reconcile::{reconcile, BoundReport, Flag, ReconcileError, ReconcileOptions, Verdict};
pub use theorems::{theorem_value, TheoremId, TheoremValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Ekeland–Hofer ratios are only implemented for ellipsoid targets")]
    PolydiscTargetUnsupported,
    #[error("theorems {first:?} and {second:?} assert different values ({first_value} vs {second_value})")]
    ConflictingTheorems {
        first: TheoremId,
        first_value: Rational,
        second: TheoremId,
        second_value: Rational,
    },
    #[error(transparent)]
    Capacity(#[from] CapacityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Lower,
    Upper,
}

/// Where a bound comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    GkRatio { k: u64 },
    EhRatio { l: u64 },
    Volume,
    FoldEll,
    FoldEllSmallB,
    FoldB1,
    FoldPoly,
    Inclusion,
    /// `E(1, a) ⊂ max(1, a/b)·T(1, b)`.
    ScaledInclusion,
    Subscaling { from: Rational },
    TheoremFormula { id: TheoremId },
    Certificate { word: BetaWord },
    FourDim { status: Status, checked_through: u64 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::GkRatio { k } => write!(f, "gk_ratio(k={k})"),
            Provenance::EhRatio { l } => write!(f, "eh_ratio(l={l})"),
            Provenance::Volume => write!(f, "volume"),
            Provenance::FoldEll => write!(f, "fold_ell"),
            Provenance::FoldEllSmallB => write!(f, "fold_ell_small_b"),
            Provenance::FoldB1 => write!(f, "fold_b1"),
            Provenance::FoldPoly => write!(f, "fold_poly"),
            Provenance::Inclusion => write!(f, "inclusion"),
            Provenance::ScaledInclusion => write!(f, "scaled_inclusion"),
            Provenance::Subscaling { from } => write!(f, "subscaling(from={from})"),
            Provenance::TheoremFormula { id } => write!(f, "theorem({})", id.name()),
            Provenance::Certificate { word } => write!(f, "certificate({word})"),
            Provenance::FourDim {
                status,
                checked_through,
            } => write!(f, "four_dim({status:?}, k<={checked_through})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: Real,
    pub direction: Direction,
    pub provenance: Provenance,
}

impl Bound {
    pub fn lower(value: impl Into<Real>, provenance: Provenance) -> Bound {
        Bound {
            value: value.into(),
            direction: Direction::Lower,
            provenance,
        }
    }

    pub fn upper(value: impl Into<Real>, provenance: Provenance) -> Bound {
        Bound {
            value: value.into(),
            direction: Direction::Upper,
            provenance,
        }
    }

    fn scaled(mut self, c: &Rational) -> Bound {
        self.value = self.value.mul_rational(c);
        self
    }
}

/// `√(a/b)` for ellipsoid targets, `√(a/(2b))` for polydiscs. Only an
/// obstruction without stabilization.
pub fn volume_lower(p: &EmbeddingProblem) -> Bound {
    let (a, b) = (p.a(), p.b());
    let r = match p.target_kind() {
        DomainKind::Ellipsoid => a / b,
        DomainKind::Polydisc => a / (b * Rational::from(2)),
    };
    Bound::lower(Real::sqrt_of(r), Provenance::Volume).scaled(&p.scale())
}

/// Default index ranges `4⌈a⌉` and `8⌈a⌉`.
pub fn default_k_max(a: &Rational) -> u64 {
    4 * ceil_u64(a)
}

pub fn default_l_max(a: &Rational) -> u64 {
    8 * ceil_u64(a)
}

fn ceil_u64(a: &Rational) -> u64 {
    Rational::from(a.ceil()).to_u64().expect("a fits in u64")
}

/// `max_k 𝔤_k(E(1, a)) / 𝔤_k(T(1, b))` over `k ≤ k_max` (odd `k` for polydisc
/// targets). The witness is the smallest maximizing `k`.
pub fn gk_lower(p: &EmbeddingProblem, k_max: u64) -> Result<Bound, BoundsError> {
    if k_max == 0 {
        return Err(BoundsError::InvalidParameter("k_max must be at least 1".into()));
    }
    let (a, b) = (p.a(), p.b());
    let mut best: Option<(Rational, u64)> = None;
    for k in 1..=k_max {
        let target = match p.target_kind() {
            DomainKind::Ellipsoid => gk_ellipsoid(&b, k)?,
            DomainKind::Polydisc if k % 2 == 1 => gk_polydisc(&b, k, false)?,
            DomainKind::Polydisc => continue,
        };
        let ratio = gk_ellipsoid(&a, k)?.value / target.value;
        if best.as_ref().is_none_or(|(v, _)| ratio > *v) {
            best = Some((ratio, k));
        }
    }
    let (value, k) = best.expect("k = 1 is always admissible");
    Ok(Bound::lower(value, Provenance::GkRatio { k }).scaled(&p.scale()))
}

/// `max_l c_l^EH(E(1, a)) / c_l^EH(E(1, b))` over `l ≤ l_max`.
pub fn eh_lower(p: &EmbeddingProblem, l_max: u64) -> Result<Bound, BoundsError> {
    if p.target_kind() != DomainKind::Ellipsoid {
        return Err(BoundsError::PolydiscTargetUnsupported);
    }
    if l_max == 0 {
        return Err(BoundsError::InvalidParameter("l_max must be at least 1".into()));
    }
    let one = Rational::one();
    let dom = crate::capacities::eh_prefix(&one, &p.a(), l_max as usize);
    let tgt = crate::capacities::eh_prefix(&one, &p.b(), l_max as usize);
    let mut best: Option<(Rational, u64)> = None;
    for (i, (x, y)) in dom.iter().zip(&tgt).enumerate() {
        let ratio = x / y;
        if best.as_ref().is_none_or(|(v, _)| ratio > *v) {
            best = Some((ratio, i as u64 + 1));
        }
    }
    debug_assert_eq!(dom.last(), Some(&eh_ellipsoid(&one, &p.a(), l_max)));
    let (value, l) = best.unwrap();
    Ok(Bound::lower(value, Provenance::EhRatio { l }).scaled(&p.scale()))
}

/// Folding constructions; these exist only for stabilized problems.
///
/// Ellipsoid targets: `2a/(a+b−1)` for `b ≥ 2, a ≥ b−1`; `a(b+2)/((a+1)b)`
/// for `1 ≤ b ≤ 2`; `3a/(a+1)` for `b = 1`. Polydisc targets:
/// `2a/(a+2b−1)` for `a ≥ 2b−1`.
pub fn fold_upper(p: &EmbeddingProblem) -> Vec<Bound> {
    if !p.is_stabilized() {
        return Vec::new();
    }
    let (a, b) = (p.a(), p.b());
    let one = Rational::one();
    let two = Rational::from(2);
    let mut out = Vec::new();
    match p.target_kind() {
        DomainKind::Ellipsoid => {
            if b >= two && a >= &b - &one {
                out.push(Bound::upper(&two * &a / (&a + &b - &one), Provenance::FoldEll));
            }
            if b >= one && b <= two {
                let v = &a * (&b + &two) / ((&a + &one) * &b);
                out.push(Bound::upper(v, Provenance::FoldEllSmallB));
            }
            if b == one {
                out.push(Bound::upper(Rational::from(3) * &a / (&a + &one), Provenance::FoldB1));
            }
            if b == two {
                assert_eq!(out[0].value, out[1].value, "folding bounds disagree at b = 2");
            }
        }
        DomainKind::Polydisc => {
            if a >= &two * &b - &one {
                let v = &two * &a / (&a + &two * &b - &one);
                out.push(Bound::upper(v, Provenance::FoldPoly));
            }
        }
    }
    let s = p.scale();
    out.into_iter().map(|b| b.scaled(&s)).collect()
}

/// `1` when `E(1, a) ⊂ T(1, b)`, that is `a ≤ b` for either target kind.
pub fn inclusion_upper(p: &EmbeddingProblem) -> Option<Bound> {
    (p.a() <= p.b()).then(|| Bound::upper(Rational::one(), Provenance::Inclusion).scaled(&p.scale()))
}

/// `E(1, a) ⊂ max(1, a/b)·T(1, b)`; always available.
pub fn scaled_inclusion_upper(p: &EmbeddingProblem) -> Bound {
    let v = (p.a() / p.b()).max(Rational::one());
    Bound::upper(v, Provenance::ScaledInclusion).scaled(&p.scale())
}

/// `c(a) ≤ (a/a0)·c(a0)` for `a ≥ a0`, from `E(1, a) ⊂ (a/a0)·E(1, a0)`.
pub fn subscaling_upper(a0: &Rational, c0: &Real, a: &Rational) -> Result<Bound, BoundsError> {
    if a < a0 || !a0.is_positive() {
        return Err(BoundsError::InvalidParameter(format!(
            "subscaling needs 0 < a0 <= a, got a0 = {a0}, a = {a}"
        )));
    }
    Ok(Bound::upper(
        c0.mul_rational(&(a / a0)),
        Provenance::Subscaling { from: a0.clone() },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn ell(a: Rational, b: Rational, n: u32) -> EmbeddingProblem {
        EmbeddingProblem::standard(a, DomainKind::Ellipsoid, b, n).unwrap()
    }

    fn poly(a: Rational, b: Rational, n: u32) -> EmbeddingProblem {
        EmbeddingProblem::standard(a, DomainKind::Polydisc, b, n).unwrap()
    }

    fn value(b: &Bound) -> Rational {
        b.value.as_rational().cloned().unwrap()
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume_lower(&ell(q(2), q(1), 0)).value, Real::sqrt_of(q(2)));
        assert_eq!(value(&volume_lower(&ell(q(8), q(2), 0))), q(2));
        assert_eq!(value(&volume_lower(&poly(q(9), q(2), 0))), frac(3, 2));
    }

    #[test]
    fn gk_examples() {
        let b = gk_lower(&ell(q(7), q(2), 1), 28).unwrap();
        assert_eq!(value(&b), frac(7, 4));
        assert_eq!(b.provenance, Provenance::GkRatio { k: 7 });
        let p = gk_lower(&poly(q(5), q(1), 1), 20).unwrap();
        assert_eq!(value(&p), frac(5, 3));
        assert_eq!(p.provenance, Provenance::GkRatio { k: 5 });
        assert_eq!(value(&gk_lower(&ell(q(1), q(1), 1), 4).unwrap()), q(1));
    }

    #[test]
    fn gk_monotone_in_k_max() {
        let p = ell(q(11), frac(5, 2), 1);
        let vals: Vec<Real> = (1..40).map(|k| gk_lower(&p, k).unwrap().value).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eh_examples() {
        assert_eq!(value(&eh_lower(&ell(q(5), q(5), 1), 30).unwrap()), q(1));
        assert_eq!(value(&eh_lower(&ell(q(2), q(1), 1), 3).unwrap()), q(2));
        // ratio at l = 13 alone is 12/9; the maximum up to 13 is 3/2
        let b = eh_lower(&ell(q(6), q(2), 1), 13).unwrap();
        assert_eq!(value(&b), frac(3, 2));
        assert_eq!(
            eh_ellipsoid(&q(1), &q(6), 13) / eh_ellipsoid(&q(1), &q(2), 13),
            frac(4, 3)
        );
        assert_eq!(
            eh_lower(&poly(q(2), q(1), 1), 3),
            Err(BoundsError::PolydiscTargetUnsupported)
        );
    }

    #[test]
    fn fold_examples() {
        let f = fold_upper(&ell(q(7), q(2), 1));
        assert_eq!(value(&f[0]), frac(7, 4));
        assert_eq!(f[0].provenance, Provenance::FoldEll);
        assert_eq!(value(&fold_upper(&poly(q(5), q(1), 1))[0]), frac(5, 3));
        let b1 = fold_upper(&ell(q(5), q(1), 1));
        assert!(b1.iter().any(|b| b.provenance == Provenance::FoldB1 && value(b) == frac(5, 2)));
        let small = fold_upper(&ell(q(3), frac(3, 2), 1));
        assert_eq!(small.len(), 1);
        assert_eq!(value(&small[0]), frac(7, 4));
        assert!(fold_upper(&ell(q(7), q(2), 0)).is_empty());
    }

    #[test]
    fn inclusion_examples() {
        assert_eq!(value(&inclusion_upper(&ell(q(2), q(3), 0)).unwrap()), q(1));
        assert!(inclusion_upper(&ell(q(4), q(3), 0)).is_none());
        assert_eq!(value(&inclusion_upper(&poly(q(2), q(2), 0)).unwrap()), q(1));
    }

    #[test]
    fn subscaling_examples() {
        let b = subscaling_upper(&q(5), &Real::from(frac(5, 3)), &q(6)).unwrap();
        assert_eq!(value(&b), q(2));
        let same = subscaling_upper(&q(4), &Real::from(frac(9, 7)), &q(4)).unwrap();
        assert_eq!(value(&same), frac(9, 7));
        let double = subscaling_upper(&q(7), &Real::from(frac(7, 4)), &q(14)).unwrap();
        assert_eq!(value(&double), frac(7, 2));
        assert!(subscaling_upper(&q(7), &Real::from(q(1)), &q(6)).is_err());
    }

    #[test]
    fn scaling_problem_scales_bounds() {
        let p = ell(q(7), q(2), 1);
        let s = p.scaled(&frac(3, 5));
        assert_eq!(gk_lower(&p, 28).unwrap(), gk_lower(&s, 28).unwrap());
        let d = EmbeddingProblem::new(
            crate::domain::ToricDomain::ellipsoid(q(2), q(14)).unwrap(),
            crate::domain::ToricDomain::ellipsoid(q(1), q(2)).unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(value(&gk_lower(&d, 28).unwrap()), frac(7, 2));
    }

    #[test]
    fn crossing_points_exact() {
        let two = Rational::from(2);
        for b in 2..=20i64 {
            let bq = q(b);
            // ellipsoid: a = b + 1 + 2√b
            let a = Real::new(&bq + q(1), two.clone(), bq.clone());
            let fold = a
                .mul_rational(&two)
                .checked_div(&a.add_rational(&(&bq - q(1))))
                .unwrap();
            assert_eq!(fold.square(), a.mul_rational(&bq.recip()));
            // polydisc: a = (√(2b) + 1)²
            let a = Real::new(&two * &bq + q(1), two.clone(), &two * &bq);
            let fold = a
                .mul_rational(&two)
                .checked_div(&a.add_rational(&(&two * &bq - q(1))))
                .unwrap();
            assert_eq!(fold.square(), a.mul_rational(&(&two * &bq).recip()));
        }
    }
}
