//! Four-dimensional (unstabilized) embedding functions.
//!
//! Ellipsoid targets go through lattice-sequence dominance ([`c0_ell`]).
//! For polydisc targets `P(1, b)` with integer `b`, the embedding problem is
//! equivalent to the one for `E(1, 2b)`, and the function has an explicit
//! description by linear steps ([`c0_poly_piecewise`]).

pub mod dominance;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveError, CurveValue, PiecewiseCurve, Segment, SegmentKind, Status};
use crate::rational::Rational;
use crate::surd::Real;

pub use dominance::{
    c0_ell, count_exact, count_lower, count_upper, dominance, tail_threshold, C0Value,
    DominanceResult, DEFAULT_DEPTH, VIOLATION_SEARCH_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourDimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("b = {0} must be an integer")]
    NonIntegerB(Rational),
    #[error("scaling factor {0} must be rational or a square root of a rational")]
    UnsupportedFactor(Real),
    #[error("parameters too large for the lattice scan")]
    ParameterTooLarge,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// The `k`-th linear step of `c⁰_{b,poly}`: a line through the origin of
/// slope `1/(2b+k)` from `u` to `corner`, then horizontal at `corner_value`
/// until `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDescription {
    pub k: u64,
    pub u: Rational,
    pub v: Rational,
    pub corner: Rational,
    pub corner_value: Rational,
}

impl StepDescription {
    pub fn new(b: u64, k: u64) -> StepDescription {
        let two_b = Rational::from(2 * b);
        let slope_den = Rational::from(2 * b + k);
        let corner = Rational::from(2 * b + 2 * k + 1);
        let corner_value = &corner / &slope_den;
        StepDescription {
            k,
            u: slope_den.square() / &two_b,
            v: &two_b * corner_value.square(),
            corner,
            corner_value,
        }
    }

    pub fn slope(&self) -> Rational {
        &self.corner_value / &self.corner
    }

    /// `u = corner = v`, which happens exactly when `k² = 2b`.
    pub fn is_degenerate(&self) -> bool {
        self.u == self.v
    }
}

fn integer_b(b: &Rational) -> Result<u64, FourDimError> {
    if !b.is_integer() {
        return Err(FourDimError::NonIntegerB(b.clone()));
    }
    b.to_u64().ok_or(FourDimError::ParameterTooLarge)
}

/// Largest step index `⌊√(2b)⌋`.
pub fn last_step_index(b: u64) -> u64 {
    (2 * b).isqrt()
}

/// Steps `k = 0, …, ⌊√(2b)⌋` for integer `b ≥ 2`.
pub fn steps(b: &Rational) -> Result<Vec<StepDescription>, FourDimError> {
    let n = integer_b(b)?;
    if n < 2 {
        return Err(FourDimError::InvalidParameter(format!("b = {b} must be at least 2")));
    }
    Ok((0..=last_step_index(n)).map(|k| StepDescription::new(n, k)).collect())
}

/// `c⁰_{b,poly}` on `[1, upper]` with the default `upper = max(8b, v_b(K) + 1)`.
pub fn c0_poly_piecewise(b: &Rational) -> Result<PiecewiseCurve, FourDimError> {
    let steps = steps(b)?;
    let last = &steps.last().unwrap().v;
    let upper = (b * Rational::from(8)).max(last + Rational::one());
    c0_poly_piecewise_to(b, &upper)
}

/// `c⁰_{b,poly}` on `[1, upper]` for integer `b ≥ 2`.
///
/// Constant 1 up to `2b`, then the linear steps; between steps and after the
/// last one the volume bound `√(a/(2b))` holds. The gap between steps 1 and 2
/// contains `2b + 4` and is the affine step, whose formula is not available:
/// there the volume bound (which dominates the neighbouring horizontal piece)
/// is only a lower bound.
pub fn c0_poly_piecewise_to(b: &Rational, upper: &Rational) -> Result<PiecewiseCurve, FourDimError> {
    let steps = steps(b)?;
    let last_v = steps.last().unwrap().v.clone();
    if *upper < last_v {
        return Err(FourDimError::InvalidParameter(format!(
            "upper end {upper} must be at least v_b(K) = {last_v}"
        )));
    }
    let two_b = b * Rational::from(2);
    let volume = SegmentKind::SqrtScaled { kappa: two_b.recip() };
    let mut points = vec![Rational::one(), two_b.clone()];
    let mut segments = vec![Segment::exact(SegmentKind::constant(Rational::one()))];
    let mut push = |points: &mut Vec<Rational>, end: Rational, seg: Segment| {
        // degenerate pieces have zero width
        if *points.last().unwrap() < end {
            points.push(end);
            segments.push(seg);
        }
    };
    for s in &steps {
        if *points.last().unwrap() < s.u {
            let status = if s.k == 2 { Status::LowerBoundOnly } else { Status::Exact };
            push(&mut points, s.u.clone(), Segment::new(volume.clone(), status));
        }
        push(&mut points, s.corner.clone(), Segment::exact(SegmentKind::line(s.slope())));
        push(
            &mut points,
            s.v.clone(),
            Segment::exact(SegmentKind::constant(s.corner_value.clone())),
        );
    }
    push(&mut points, upper.clone(), Segment::exact(volume));
    Ok(PiecewiseCurve::from_rational_breakpoints(points, segments)?)
}

/// Record of `c⁰_{b,poly}(a) = c⁰_{2b,ell}(a)`, with both sides computed
/// independently when possible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equivalence {
    pub a: Rational,
    pub b: Rational,
    pub ellipsoid_b: Rational,
    pub ellipsoid_value: C0Value,
    /// From the step description; absent for `b = 1` or outside its domain.
    pub polydisc_value: Option<Real>,
    pub polydisc_status: Option<Status>,
    pub consistent: bool,
}

/// Computes both sides of the polydisc/ellipsoid equivalence at `a`.
pub fn equiv_poly_ell(a: &Rational, b: &Rational, depth: u64) -> Result<Equivalence, FourDimError> {
    let n = integer_b(b)?;
    if n < 1 {
        return Err(FourDimError::InvalidParameter(format!("b = {b} must be at least 1")));
    }
    let ellipsoid_b = b * Rational::from(2);
    let ell = c0_ell(a, &ellipsoid_b, depth)?;
    let poly: Option<CurveValue> = if n >= 2 {
        let curve = c0_poly_piecewise(b)?;
        curve.eval(a).ok()
    } else {
        None
    };
    let consistent = match &poly {
        None => true,
        Some(p) => match (p.status, ell.status) {
            (Status::Exact, Status::Exact) => p.value == ell.value,
            (Status::Exact, _) => ell.value <= p.value,
            _ => ell.value >= p.value || ell.status != Status::Exact,
        },
    };
    Ok(Equivalence {
        a: a.clone(),
        b: b.clone(),
        ellipsoid_b,
        ellipsoid_value: ell,
        polydisc_status: poly.as_ref().map(|p| p.status),
        polydisc_value: poly.map(|p| p.value),
        consistent,
    })
}
