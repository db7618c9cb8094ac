//! Piecewise curves with affine and square-root segments.
//!
//! Intervals are closed on the left and open on the right except for the
//! last one, which also contains the right end of the domain. Breakpoints are
//! exact [`Real`]s because crossings of an affine piece with a square-root
//! piece are in general quadratic irrationals.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;
use crate::surd::{rational_between, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("{0} lies outside the curve's domain")]
    OutOfDomain(Rational),
    #[error("curves have disjoint domains")]
    DisjointDomains,
    #[error("breakpoints must be strictly increasing")]
    NotIncreasing,
    #[error("{breakpoints} breakpoints cannot carry {segments} segments")]
    LengthMismatch { breakpoints: usize, segments: usize },
    #[error("adjacent exact segments disagree at {0}")]
    Discontinuity(Real),
    #[error("crossings involving shifted square-root segments are not supported")]
    UnsupportedCrossing,
    #[error("square-root segment evaluated at negative argument {0}")]
    NegativeRadicand(Rational),
}

/// How much is known about a segment's values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    Conjectural,
    LowerBoundOnly,
}

impl Status {
    fn rank(self) -> u8 {
        match self {
            Status::Exact => 0,
            Status::Conjectural => 1,
            Status::LowerBoundOnly => 2,
        }
    }

    /// The weaker of two statuses.
    pub fn weakest(self, other: Status) -> Status {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentKind {
    /// `slope · a + intercept`.
    Affine { slope: Rational, intercept: Rational },
    /// `√(kappa · a)`; `c·√a` is `kappa = c²`.
    SqrtScaled { kappa: Rational },
    /// `offset + scale · √(kappa · (a + shift))`, produced by affine
    /// renormalization of a square-root segment. Evaluation only.
    ShiftedSqrt {
        offset: Rational,
        scale: Rational,
        kappa: Rational,
        shift: Rational,
    },
}

impl SegmentKind {
    pub fn constant(c: Rational) -> Self {
        SegmentKind::Affine {
            slope: Rational::zero(),
            intercept: c,
        }
    }

    pub fn line(slope: Rational) -> Self {
        SegmentKind::Affine {
            slope,
            intercept: Rational::zero(),
        }
    }

    pub fn eval(&self, a: &Rational) -> Result<Real, CurveError> {
        match self {
            SegmentKind::Affine { slope, intercept } => Ok(Real::from(slope * a + intercept)),
            SegmentKind::SqrtScaled { kappa } => {
                let r = kappa * a;
                if r.is_negative() {
                    return Err(CurveError::NegativeRadicand(a.clone()));
                }
                Ok(Real::sqrt_of(r))
            }
            SegmentKind::ShiftedSqrt {
                offset,
                scale,
                kappa,
                shift,
            } => {
                let r = kappa * (a + shift);
                if r.is_negative() {
                    return Err(CurveError::NegativeRadicand(a.clone()));
                }
                Ok(Real::new(offset.clone(), scale.clone(), r))
            }
        }
    }

    /// Exact comparison of two segment formulas at a (possibly irrational)
    /// point. `None` when the comparison would need nested radicals.
    pub fn cmp_at(&self, other: &SegmentKind, x: &Real) -> Option<Ordering> {
        if let Some(r) = x.as_rational() {
            let u = self.eval(r).ok()?;
            let v = other.eval(r).ok()?;
            return Some(u.cmp(&v));
        }
        use SegmentKind::*;
        match (self, other) {
            (Affine { .. }, Affine { .. }) => {
                Some(affine_at(self, x)?.cmp(&affine_at(other, x)?))
            }
            (Affine { .. }, SqrtScaled { kappa }) => {
                Some(cmp_affine_sqrt(&affine_at(self, x)?, &x.mul_rational(kappa)))
            }
            (SqrtScaled { kappa }, Affine { .. }) => Some(
                cmp_affine_sqrt(&affine_at(other, x)?, &x.mul_rational(kappa)).reverse(),
            ),
            (SqrtScaled { kappa: k1 }, SqrtScaled { kappa: k2 }) => {
                Some(x.mul_rational(k1).cmp(&x.mul_rational(k2)))
            }
            _ => None,
        }
    }

    /// Points where the two formulas agree, without domain filtering.
    /// Identical formulas have no isolated crossings.
    fn crossings(&self, other: &SegmentKind) -> Result<Vec<Real>, CurveError> {
        use SegmentKind::*;
        if self == other {
            return Ok(Vec::new());
        }
        match (self, other) {
            (
                Affine {
                    slope: m1,
                    intercept: t1,
                },
                Affine {
                    slope: m2,
                    intercept: t2,
                },
            ) => {
                if m1 == m2 {
                    Ok(Vec::new())
                } else {
                    Ok(vec![Real::from((t2 - t1) / (m1 - m2))])
                }
            }
            (Affine { slope, intercept }, SqrtScaled { kappa })
            | (SqrtScaled { kappa }, Affine { slope, intercept }) => {
                Ok(affine_sqrt_crossings(slope, intercept, kappa))
            }
            (SqrtScaled { .. }, SqrtScaled { .. }) => Ok(vec![Real::zero()]),
            _ => Err(CurveError::UnsupportedCrossing),
        }
    }
}

fn affine_at(kind: &SegmentKind, x: &Real) -> Option<Real> {
    match kind {
        SegmentKind::Affine { slope, intercept } => {
            Some(x.mul_rational(slope).add_rational(intercept))
        }
        _ => None,
    }
}

/// Compares `lhs` with `√radicand` (radicand ≥ 0 is assumed on the domain).
fn cmp_affine_sqrt(lhs: &Real, radicand: &Real) -> Ordering {
    if lhs.is_negative() {
        return Ordering::Less;
    }
    lhs.square().cmp(radicand)
}

/// Roots of `m·a + t = √(κ·a)` with `m·a + t ≥ 0`.
fn affine_sqrt_crossings(m: &Rational, t: &Rational, kappa: &Rational) -> Vec<Real> {
    if kappa.is_zero() {
        if m.is_zero() {
            return Vec::new();
        }
        return vec![Real::from(-(t / m))];
    }
    if m.is_zero() {
        if t.is_negative() {
            return Vec::new();
        }
        return vec![Real::from(t.square() / kappa)];
    }
    // m²a² + (2mt − κ)a + t² = 0, discriminant κ(κ − 4mt)
    let two = Rational::from(2);
    let disc = kappa * (kappa - Rational::from(4) * m * t);
    if disc.is_negative() {
        return Vec::new();
    }
    let denom = &two * m.square();
    let centre = (kappa - &two * m * t) / &denom;
    let half = denom.recip();
    let mut out: Vec<Real> = Vec::new();
    for sign in [-1i64, 1] {
        let root = Real::new(centre.clone(), &half * Rational::from(sign), disc.clone());
        // squaring may introduce a root with m·a + t < 0
        if root.mul_rational(m).add_rational(t).is_negative() {
            continue;
        }
        if !out.contains(&root) {
            out.push(root);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(flatten)]
    pub kind: SegmentKind,
    pub status: Status,
}

impl Segment {
    pub fn new(kind: SegmentKind, status: Status) -> Self {
        Segment { kind, status }
    }

    pub fn exact(kind: SegmentKind) -> Self {
        Segment::new(kind, Status::Exact)
    }
}

/// Value of a curve at a point together with the status of its segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveValue {
    pub value: Real,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseCurve {
    breakpoints: Vec<Real>,
    segments: Vec<Segment>,
}

impl PiecewiseCurve {
    pub fn new(breakpoints: Vec<Real>, segments: Vec<Segment>) -> Result<Self, CurveError> {
        if breakpoints.len() != segments.len() + 1 || segments.is_empty() {
            return Err(CurveError::LengthMismatch {
                breakpoints: breakpoints.len(),
                segments: segments.len(),
            });
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CurveError::NotIncreasing);
        }
        Ok(PiecewiseCurve {
            breakpoints,
            segments,
        })
    }

    pub fn from_rational_breakpoints(
        breakpoints: Vec<Rational>,
        segments: Vec<Segment>,
    ) -> Result<Self, CurveError> {
        PiecewiseCurve::new(breakpoints.into_iter().map(Real::from).collect(), segments)
    }

    /// A single segment on `[lo, hi]`.
    pub fn single(lo: Rational, hi: Rational, segment: Segment) -> Result<Self, CurveError> {
        PiecewiseCurve::from_rational_breakpoints(vec![lo, hi], vec![segment])
    }

    pub fn breakpoints(&self) -> &[Real] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn domain(&self) -> (&Real, &Real) {
        (&self.breakpoints[0], self.breakpoints.last().unwrap())
    }

    pub fn contains(&self, x: &Real) -> bool {
        let (lo, hi) = self.domain();
        lo <= x && x <= hi
    }

    /// Index of the segment whose half-open interval contains `x`.
    fn locate(&self, x: &Real) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        // first breakpoint strictly greater than x
        let upper = self.breakpoints.partition_point(|b| b <= x);
        Some(upper.saturating_sub(1).min(self.segments.len() - 1))
    }

    pub fn segment_at(&self, a: &Rational) -> Result<(usize, &Segment), CurveError> {
        let i = self
            .locate(&Real::from(a))
            .ok_or_else(|| CurveError::OutOfDomain(a.clone()))?;
        Ok((i, &self.segments[i]))
    }

    pub fn eval(&self, a: &Rational) -> Result<CurveValue, CurveError> {
        let (_, seg) = self.segment_at(a)?;
        Ok(CurveValue {
            value: seg.kind.eval(a)?,
            status: seg.status,
        })
    }

    /// Checks agreement at every interior breakpoint whose neighbours are
    /// both exact.
    pub fn check_continuity(&self) -> Result<(), CurveError> {
        for (i, pair) in self.segments.windows(2).enumerate() {
            if pair[0].status != Status::Exact || pair[1].status != Status::Exact {
                continue;
            }
            let x = &self.breakpoints[i + 1];
            match pair[0].kind.cmp_at(&pair[1].kind, x) {
                Some(Ordering::Equal) => {}
                Some(_) => return Err(CurveError::Discontinuity(x.clone())),
                None => return Err(CurveError::UnsupportedCrossing),
            }
        }
        Ok(())
    }

    /// Segment covering the open interval `(x, y)`, which must lie between
    /// two consecutive breakpoints of `self`.
    fn segment_over(&self, x: &Real, y: &Real) -> &Segment {
        let mid = rational_between(x, y);
        let i = self.locate(&Real::from(&mid)).expect("interval inside domain");
        &self.segments[i]
    }

    /// Merges adjacent segments that carry the same formula and status.
    fn coalesce(breakpoints: Vec<Real>, segments: Vec<Segment>) -> PiecewiseCurve {
        let mut bps = vec![breakpoints[0].clone()];
        let mut segs: Vec<Segment> = Vec::new();
        for (i, seg) in segments.into_iter().enumerate() {
            if segs.last() == Some(&seg) {
                *bps.last_mut().unwrap() = breakpoints[i + 1].clone();
            } else {
                segs.push(seg);
                bps.push(breakpoints[i + 1].clone());
            }
        }
        PiecewiseCurve {
            breakpoints: bps,
            segments: segs,
        }
    }

    /// Restriction to `[lo, hi]`.
    pub fn restrict(&self, lo: &Real, hi: &Real) -> Result<PiecewiseCurve, CurveError> {
        let (dlo, dhi) = self.domain();
        let lo = dlo.clone().max(lo.clone());
        let hi = dhi.clone().min(hi.clone());
        if lo >= hi {
            return Err(CurveError::DisjointDomains);
        }
        let mut points = vec![lo.clone()];
        points.extend(
            self.breakpoints
                .iter()
                .filter(|b| **b > lo && **b < hi)
                .cloned(),
        );
        points.push(hi);
        let segments = points
            .windows(2)
            .map(|w| self.segment_over(&w[0], &w[1]).clone())
            .collect();
        Ok(PiecewiseCurve::coalesce(points, segments))
    }
}

/// Pointwise maximum on the common domain. Crossing points of the pieces
/// become breakpoints; where either input is not exact the result carries the
/// weaker status.
pub fn curve_max(c1: &PiecewiseCurve, c2: &PiecewiseCurve) -> Result<PiecewiseCurve, CurveError> {
    let (lo1, hi1) = c1.domain();
    let (lo2, hi2) = c2.domain();
    let lo = lo1.clone().max(lo2.clone());
    let hi = hi1.clone().min(hi2.clone());
    if lo >= hi {
        return Err(CurveError::DisjointDomains);
    }
    let mut points: Vec<Real> = c1
        .breakpoints
        .iter()
        .chain(c2.breakpoints.iter())
        .filter(|b| **b > lo && **b < hi)
        .cloned()
        .collect();
    points.push(lo);
    points.push(hi);
    points.sort();
    points.dedup();

    let mut out_points = vec![points[0].clone()];
    let mut out_segments = Vec::new();
    for w in points.windows(2) {
        let (x, y) = (&w[0], &w[1]);
        let s1 = c1.segment_over(x, y);
        let s2 = c2.segment_over(x, y);
        let status = s1.status.weakest(s2.status);
        let mut cuts: Vec<Real> = s1
            .kind
            .crossings(&s2.kind)?
            .into_iter()
            .filter(|r| r > x && r < y)
            .collect();
        cuts.sort();
        cuts.dedup();
        let mut left = x.clone();
        for right in cuts.into_iter().chain(std::iter::once(y.clone())) {
            let probe = rational_between(&left, &right);
            let v1 = s1.kind.eval(&probe)?;
            let v2 = s2.kind.eval(&probe)?;
            let kind = match v1.cmp(&v2) {
                Ordering::Greater => s1.kind.clone(),
                Ordering::Less => s2.kind.clone(),
                // identical functions on this piece; pick canonically
                Ordering::Equal => s1.kind.clone().min(s2.kind.clone()),
            };
            out_segments.push(Segment::new(kind, status));
            out_points.push(right.clone());
            left = right;
        }
    }
    Ok(PiecewiseCurve::coalesce(out_points, out_segments))
}
