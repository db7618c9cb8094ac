//! Toric domains and embedding problems.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("domain parameters must be positive, got ({0}, {1})")]
    NonPositive(Rational, Rational),
    #[error("embedding problems need an ellipsoid domain")]
    DomainNotEllipsoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    #[serde(alias = "ell", alias = "E")]
    Ellipsoid,
    #[serde(alias = "poly", alias = "P")]
    Polydisc,
}

impl DomainKind {
    pub fn letter(self) -> char {
        match self {
            DomainKind::Ellipsoid => 'E',
            DomainKind::Polydisc => 'P',
        }
    }
}

/// `E(x, y)` or `P(x, y)`, stored with `x ≤ y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ToricDomain {
    pub kind: DomainKind,
    pub x: Rational,
    pub y: Rational,
}

impl ToricDomain {
    pub fn new(kind: DomainKind, x: Rational, y: Rational) -> Result<Self, DomainError> {
        if !x.is_positive() || !y.is_positive() {
            return Err(DomainError::NonPositive(x, y));
        }
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        Ok(ToricDomain { kind, x, y })
    }

    pub fn ellipsoid(x: Rational, y: Rational) -> Result<Self, DomainError> {
        ToricDomain::new(DomainKind::Ellipsoid, x, y)
    }

    pub fn polydisc(x: Rational, y: Rational) -> Result<Self, DomainError> {
        ToricDomain::new(DomainKind::Polydisc, x, y)
    }

    /// `c · self`.
    pub fn scale(&self, c: &Rational) -> ToricDomain {
        assert!(c.is_positive(), "scale factor must be positive");
        ToricDomain {
            kind: self.kind,
            x: &self.x * c,
            y: &self.y * c,
        }
    }

    /// Eccentricity `y/x ≥ 1`: `self = x · T(1, y/x)`.
    pub fn aspect(&self) -> Rational {
        &self.y / &self.x
    }

    /// `(x, T(1, y/x))`.
    pub fn normalized(&self) -> (Rational, ToricDomain) {
        let aspect = self.aspect();
        (
            self.x.clone(),
            ToricDomain {
                kind: self.kind,
                x: Rational::one(),
                y: aspect,
            },
        )
    }
}

impl<'de> Deserialize<'de> for ToricDomain {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            kind: DomainKind,
            x: Rational,
            y: Rational,
        }
        let raw = Raw::deserialize(deserializer)?;
        ToricDomain::new(raw.kind, raw.x, raw.y).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ToricDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.kind.letter(), self.x, self.y)
    }
}

/// `domain × ℂ^N ↪ λ · target × ℂ^N`, asking for the infimal `λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingProblem {
    pub domain: ToricDomain,
    pub target: ToricDomain,
    pub stabilization: u32,
}

impl EmbeddingProblem {
    pub fn new(
        domain: ToricDomain,
        target: ToricDomain,
        stabilization: u32,
    ) -> Result<Self, DomainError> {
        if domain.kind != DomainKind::Ellipsoid {
            return Err(DomainError::DomainNotEllipsoid);
        }
        Ok(EmbeddingProblem {
            domain,
            target,
            stabilization,
        })
    }

    /// `E(1, a) × ℂ^n ↪ λ · T(1, b) × ℂ^n`.
    pub fn standard(
        a: Rational,
        target_kind: DomainKind,
        b: Rational,
        n: u32,
    ) -> Result<Self, DomainError> {
        EmbeddingProblem::new(
            ToricDomain::ellipsoid(Rational::one(), a)?,
            ToricDomain::new(target_kind, Rational::one(), b)?,
            n,
        )
    }

    /// Domain eccentricity `a ≥ 1`.
    pub fn a(&self) -> Rational {
        self.domain.aspect()
    }

    /// Target eccentricity `b ≥ 1`.
    pub fn b(&self) -> Rational {
        self.target.aspect()
    }

    pub fn target_kind(&self) -> DomainKind {
        self.target.kind
    }

    /// Converts a bound for the normalized problem `E(1,a) → T(1,b)` into one
    /// for this problem: multiply by `domain.x / target.x`.
    pub fn scale(&self) -> Rational {
        &self.domain.x / &self.target.x
    }

    pub fn is_stabilized(&self) -> bool {
        self.stabilization >= 1
    }

    /// Same problem with domain and target scaled by a common factor.
    pub fn scaled(&self, c: &Rational) -> EmbeddingProblem {
        EmbeddingProblem {
            domain: self.domain.scale(c),
            target: self.target.scale(c),
            stabilization: self.stabilization,
        }
    }
}

impl<'de> Deserialize<'de> for EmbeddingProblem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            domain: ToricDomain,
            target: ToricDomain,
            stabilization: u32,
        }
        let raw = Raw::deserialize(deserializer)?;
        EmbeddingProblem::new(raw.domain, raw.target, raw.stabilization)
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for EmbeddingProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} x C^{} -> lambda {} x C^{}",
            self.domain, self.stabilization, self.target, self.stabilization
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn normalizes_order() {
        let d = ToricDomain::ellipsoid(q(3), q(1)).unwrap();
        assert_eq!((d.x.clone(), d.y.clone()), (q(1), q(3)));
        assert!(ToricDomain::polydisc(q(0), q(1)).is_err());
    }

    #[test]
    fn scaling_round_trip() {
        let d = ToricDomain::polydisc(frac(2, 3), q(5)).unwrap();
        let c = frac(7, 11);
        assert_eq!(d.scale(&c).scale(&c.recip()), d);
    }

    #[test]
    fn problem_scale_factor() {
        let p = EmbeddingProblem::new(
            ToricDomain::ellipsoid(q(2), q(14)).unwrap(),
            ToricDomain::ellipsoid(q(3), q(6)).unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(p.a(), q(7));
        assert_eq!(p.b(), q(2));
        assert_eq!(p.scale(), frac(2, 3));
        assert_eq!(p.scaled(&q(5)).scale(), frac(2, 3));
        let bad = EmbeddingProblem::new(
            ToricDomain::polydisc(q(1), q(2)).unwrap(),
            ToricDomain::ellipsoid(q(1), q(2)).unwrap(),
            0,
        );
        assert_eq!(bad, Err(DomainError::DomainNotEllipsoid));
    }

    #[test]
    fn kind_aliases() {
        let d: ToricDomain =
            serde_json::from_str(r#"{"kind":"poly","x":"1","y":"1"}"#).unwrap();
        assert_eq!(d.kind, DomainKind::Polydisc);
        let e: ToricDomain =
            serde_json::from_str(r#"{"kind":"ellipsoid","x":"2","y":"1"}"#).unwrap();
        assert_eq!(e.x, q(1));
    }
}
