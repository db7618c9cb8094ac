//! Obstruction certificates built from words in the generators `β_{i,j}`.
//!
//! A certificate says: some structure map is nonzero on the word, so an
//! embedding `E(1, a) ↪ λ·T` must satisfy `λ · A_T(word) ≥ c_l^EH(E(1, a))`
//! where `A_T` is the action filtration of the target and `l` the word's
//! output index. Nonvanishing is never computed here; it is an input that
//! must carry a citation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{Bound, Provenance};
use crate::capacities::eh_ellipsoid;
use crate::domain::{DomainKind, ToricDomain};
use crate::rational::Rational;

/// Smallest and largest even `a` for which the certificate families below
/// were verified.
pub const FAMILY_MIN_A: u32 = 6;
pub const FAMILY_MAX_A: u32 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("letter (0, 0) is not a generator")]
    ZeroLetter,
    #[error("letter ({0}, {1}) has multiplicity zero")]
    ZeroMultiplicity(u32, u32),
    #[error("word must contain at least one letter")]
    EmptyWord,
    #[error("certificate has no citation for its nonvanishing assumption")]
    UncitedAssumption,
    #[error("a = {0} is outside the verified range (even a in [6, 100])")]
    OutOfVerifiedRange(Rational),
    #[error("malformed certificate: {0}")]
    Parse(String),
}

/// Multiset of letters `β_{i,j}`, stored canonically so that permutations of
/// the input compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BetaWord {
    letters: BTreeMap<(u32, u32), u64>,
}

impl BetaWord {
    /// From `(i, j, multiplicity)` triples; repeated letters accumulate.
    pub fn new(triples: impl IntoIterator<Item = (u32, u32, u64)>) -> Result<Self, CertifyError> {
        let mut letters = BTreeMap::new();
        for (i, j, m) in triples {
            if i == 0 && j == 0 {
                return Err(CertifyError::ZeroLetter);
            }
            if m == 0 {
                return Err(CertifyError::ZeroMultiplicity(i, j));
            }
            *letters.entry((i, j)).or_insert(0) += m;
        }
        if letters.is_empty() {
            return Err(CertifyError::EmptyWord);
        }
        Ok(BetaWord { letters })
    }

    pub fn letters(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        self.letters.iter().map(|(&(i, j), &m)| (i, j, m))
    }

    /// Number of letters counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.letters.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &BetaWord) -> BetaWord {
        let mut letters = self.letters.clone();
        for (&key, &m) in &other.letters {
            *letters.entry(key).or_insert(0) += m;
        }
        BetaWord { letters }
    }
}

impl fmt::Display for BetaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters()
            .map(|(i, j, m)| {
                if m == 1 {
                    format!("b{i},{j}")
                } else {
                    format!("b{i},{j}^{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for BetaWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let triples: Vec<(u32, u32, u64)> = self.letters().collect();
        triples.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BetaWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let triples = Vec::<(u32, u32, u64)>::deserialize(d)?;
        BetaWord::new(triples).map_err(serde::de::Error::custom)
    }
}

/// Action of a single letter: `x·i + y·j` on `P(x, y)`, `max(x·i, y·j)` on
/// `E(x, y)`.
fn letter_action(i: u32, j: u32, target: &ToricDomain) -> Rational {
    let xi = &target.x * Rational::from(i);
    let yj = &target.y * Rational::from(j);
    match target.kind {
        DomainKind::Polydisc => xi + yj,
        DomainKind::Ellipsoid => xi.max(yj),
    }
}

/// Total action of the word under the target's filtration.
pub fn action(word: &BetaWord, target: &ToricDomain) -> Rational {
    word.letters()
        .map(|(i, j, m)| letter_action(i, j, target) * Rational::from(m))
        .sum()
}

/// Output index `l = Σ (i + j) + k − 1` with `k` the word length.
pub fn eh_index(word: &BetaWord) -> u64 {
    let degree: u64 = word.letters().map(|(i, j, m)| (i as u64 + j as u64) * m).sum();
    degree + word.len() - 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub domain_a: Rational,
    pub target: ToricDomain,
    pub word: BetaWord,
    #[serde(skip)]
    pub assumed_nonvanishing: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

impl Certificate {
    /// A certificate whose nonvanishing assumption is backed by `citation`.
    pub fn cited(
        domain_a: Rational,
        target: ToricDomain,
        word: BetaWord,
        citation: impl Into<String>,
    ) -> Self {
        Certificate {
            domain_a,
            target,
            word,
            assumed_nonvanishing: true,
            citation: Some(citation.into()),
        }
    }

    fn is_cited(&self) -> bool {
        self.assumed_nonvanishing
            && self
                .citation
                .as_deref()
                .is_some_and(|c| !c.trim().is_empty())
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            domain_a: Rational,
            target: ToricDomain,
            word: BetaWord,
            citation: Option<String>,
        }
        let raw = Raw::deserialize(d)?;
        let citation = match raw.citation {
            Some(c) if !c.trim().is_empty() => c,
            _ => return Err(serde::de::Error::custom(CertifyError::UncitedAssumption)),
        };
        if raw.domain_a < Rational::one() {
            return Err(serde::de::Error::custom("domain_a must be at least 1"));
        }
        Ok(Certificate::cited(raw.domain_a, raw.target, raw.word, citation))
    }
}

/// Parses one certificate or an array of them.
pub fn parse_certificates(json: &str) -> Result<Vec<Certificate>, CertifyError> {
    let value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| CertifyError::Parse(e.to_string()))?;
    let parsed = if value.is_array() {
        serde_json::from_value::<Vec<Certificate>>(value)
    } else {
        serde_json::from_value::<Certificate>(value).map(|c| vec![c])
    };
    parsed.map_err(|e| CertifyError::Parse(e.to_string()))
}

/// `λ ≥ c_l^EH(E(1, a)) / A_T(word)`.
pub fn certificate_bound(c: &Certificate) -> Result<Bound, CertifyError> {
    if !c.is_cited() {
        return Err(CertifyError::UncitedAssumption);
    }
    let l = eh_index(&c.word);
    let capacity = eh_ellipsoid(&Rational::one(), &c.domain_a, l);
    let value = capacity / action(&c.word, &c.target);
    Ok(Bound::lower(
        value,
        Provenance::Certificate {
            word: c.word.clone(),
        },
    ))
}

/// The two verified certificate families, named by target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Target `P(1, 1)`.
    PolyTarget,
    /// Target `E(1, 2)`.
    EllTarget,
}

pub const FAMILY_CITATION: &str =
    "computer calculation of the structure coefficient for even a in [6, 100]";

/// Certificate reproducing `λ ≥ 2a/(a+1)` for even `a` in `[6, 100]`.
///
/// Polydisc target: `β_{1,0}^3 β_{0,1}^{a−2}` (length `d = a + 1`). Ellipsoid
/// target: `β_{2,1}^3 β_{1,0}^{d−3}` with `d = a − 2`.
pub fn family_certificate(a: &Rational, kind: FamilyKind) -> Result<Certificate, CertifyError> {
    let n = a
        .to_u64()
        .filter(|n| {
            a.is_integer()
                && n % 2 == 0
                && (FAMILY_MIN_A as u64..=FAMILY_MAX_A as u64).contains(n)
        })
        .ok_or_else(|| CertifyError::OutOfVerifiedRange(a.clone()))?;
    let (target, word) = match kind {
        FamilyKind::PolyTarget => (
            ToricDomain::polydisc(Rational::one(), Rational::one()),
            BetaWord::new([(1, 0, 3), (0, 1, n - 2)]),
        ),
        FamilyKind::EllTarget => (
            ToricDomain::ellipsoid(Rational::one(), Rational::from(2)),
            BetaWord::new([(2, 1, 3), (1, 0, n - 5)]),
        ),
    };
    Ok(Certificate::cited(
        a.clone(),
        target.expect("unit targets are valid"),
        word?,
        FAMILY_CITATION,
    ))
}

/// Both families for every verified `a`, in increasing `a`.
pub fn all_family_certificates() -> Vec<Certificate> {
    (FAMILY_MIN_A..=FAMILY_MAX_A)
        .step_by(2)
        .flat_map(|a| {
            [FamilyKind::PolyTarget, FamilyKind::EllTarget]
                .map(|k| family_certificate(&Rational::from(a), k).unwrap())
        })
        .collect()
}
