//! The rescaled polydisc function `ĉ_b(â) = 2b·c⁰_{b,poly}(â + 2b) − 2b` and
//! its limit staircase `c_∞`.
//!
//! The limit is read off from the step data: the `k`-th step of `c⁰_{b,poly}`
//! rises along a line through the origin to the corner `(2b+2k+1,
//! (2b+2k+1)/(2b+k))` and stays flat until `v_b(k)`. After rescaling the
//! corner sits at `â = 2k+1` with height `2b(k+1)/(2b+k) → k+1`, the rising
//! piece has slope `2b/(2b+k) → 1`, and the flat piece ends at `â = v_b(k) −
//! 2b → 2k+2`. So `c_∞` rises with slope one on `[2k, 2k+1]` and is flat at
//! `k+1` on `[2k+1, 2k+2]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveError, PiecewiseCurve, Segment, SegmentKind, Status};
use crate::fourdim::{c0_poly_piecewise_to, last_step_index, FourDimError};
use crate::rational::Rational;
use crate::surd::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RescaledError {
    #[error("curve domain does not cover [{lo}, {hi}]")]
    DomainTooSmall { lo: Rational, hi: Rational },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    FourDim(#[from] FourDimError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RescaledCurve {
    pub b: Rational,
    pub base: PiecewiseCurve,
    pub transformed: PiecewiseCurve,
}

fn transform_kind(kind: &SegmentKind, two_b: &Rational) -> SegmentKind {
    match kind {
        SegmentKind::Affine { slope, intercept } => SegmentKind::Affine {
            slope: two_b * slope,
            intercept: two_b * (two_b * slope + intercept) - two_b,
        },
        SegmentKind::SqrtScaled { kappa } => SegmentKind::ShiftedSqrt {
            offset: -two_b.clone(),
            scale: two_b.clone(),
            kappa: kappa.clone(),
            shift: two_b.clone(),
        },
        SegmentKind::ShiftedSqrt {
            offset,
            scale,
            kappa,
            shift,
        } => SegmentKind::ShiftedSqrt {
            offset: two_b * offset - two_b,
            scale: two_b * scale,
            kappa: kappa.clone(),
            shift: shift + two_b,
        },
    }
}

/// `â ↦ 2b·curve(â + 2b) − 2b` on `[0, A]`.
pub fn rescale(b: &Rational, curve: &PiecewiseCurve, upper: &Rational) -> Result<RescaledCurve, RescaledError> {
    if !upper.is_positive() {
        return Err(RescaledError::InvalidParameter(format!("A = {upper} must be positive")));
    }
    let two_b = b * Rational::from(2);
    let (lo, hi) = (two_b.clone(), upper + &two_b);
    let (dlo, dhi) = curve.domain();
    if *dlo > lo || *dhi < hi {
        return Err(RescaledError::DomainTooSmall { lo, hi });
    }
    let base = curve.restrict(&Real::from(&lo), &Real::from(&hi))?;
    let shift = -two_b.clone();
    let breakpoints = base.breakpoints().iter().map(|x| x.add_rational(&shift)).collect();
    let segments = base
        .segments()
        .iter()
        .map(|s| Segment::new(transform_kind(&s.kind, &two_b), s.status))
        .collect();
    Ok(RescaledCurve {
        b: b.clone(),
        base,
        transformed: PiecewiseCurve::new(breakpoints, segments)?,
    })
}

/// `ĉ_b` for integer `b ≥ 2` on `[0, A]`.
pub fn rescaled_poly(b: &Rational, upper: &Rational) -> Result<RescaledCurve, RescaledError> {
    let two_b = b * Rational::from(2);
    let base = c0_poly_piecewise_for(b, &(upper + &two_b))?;
    rescale(b, &base, upper)
}

fn c0_poly_piecewise_for(b: &Rational, reach: &Rational) -> Result<PiecewiseCurve, FourDimError> {
    let steps = crate::fourdim::steps(b)?;
    let last = &steps.last().expect("at least one step").v;
    let upper = reach.clone().max(last + Rational::one());
    c0_poly_piecewise_to(b, &upper)
}

/// The limit staircase: `a − k` on `[2k, 2k+1]`, `k + 1` on `[2k+1, 2k+2]`
/// with `k = ⌊a/2⌋`.
pub fn c_infinity(a: &Rational) -> Rational {
    assert!(!a.is_negative(), "c_infinity needs a >= 0, got {a}");
    let k = Rational::from((a / Rational::from(2)).floor());
    let corner = &k * Rational::from(2) + Rational::one();
    if *a <= corner {
        a - &k
    } else {
        k + Rational::one()
    }
}

/// `|ĉ_b − c_∞|` at the rescaled corner `â = 2k+1`: `k(k+1)/(2b+k)`.
pub fn corner_deviation(b: u64, k: u64) -> Rational {
    Rational::from(k * (k + 1)) / Rational::from(2 * b + k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationSample {
    pub a_hat: Rational,
    pub value: Real,
    pub limit: Rational,
    pub deviation: Real,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub b: u64,
    pub sup_deviation: Real,
    pub argmax: Rational,
    /// Grid points compared (those with exact status).
    pub points: u64,
    /// Grid points skipped because the value there is only a lower bound.
    pub excluded_points: u64,
}

/// `ĉ_b` and `c_∞` on the grid `0, h, 2h, …` up to `A`, in grid order.
pub fn deviation_samples(b: u64, upper: &Rational, step: &Rational) -> Result<Vec<DeviationSample>, RescaledError> {
    if !step.is_positive() || upper.is_negative() {
        return Err(RescaledError::InvalidParameter(format!(
            "need A >= 0 and a positive step, got A = {upper}, step = {step}"
        )));
    }
    let bq = Rational::from(b);
    let two_b = Rational::from(2 * b);
    let base = c0_poly_piecewise_for(&bq, &(upper + &two_b))?;
    let n = Rational::from((upper / step).floor()).to_u64().ok_or_else(|| {
        RescaledError::InvalidParameter("grid too large".into())
    })?;
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let a_hat = step * Rational::from(i);
            let v = base.eval(&(&a_hat + &two_b))?;
            let value = v.value.mul_rational(&two_b).add_rational(&-two_b.clone());
            let limit = c_infinity(&a_hat);
            let deviation = value.add_rational(&-limit.clone()).abs();
            Ok(DeviationSample {
                a_hat,
                value,
                limit,
                deviation,
                status: v.status,
            })
        })
        .collect()
}

/// Supremum of `|ĉ_b − c_∞|` over the exact grid points of `[0, A]`, for
/// each `b`.
pub fn convergence_report(bs: &[u64], upper: &Rational, step: &Rational) -> Result<Vec<ConvergenceRow>, RescaledError> {
    bs.iter()
        .map(|&b| {
            let samples = deviation_samples(b, upper, step)?;
            let (exact, excluded): (Vec<_>, Vec<_>) =
                samples.into_iter().partition(|s| s.status == Status::Exact);
            let best = exact
                .iter()
                .reduce(|m, s| if s.deviation > m.deviation { s } else { m })
                .ok_or_else(|| RescaledError::InvalidParameter(format!("no exact grid points for b = {b}")))?;
            Ok(ConvergenceRow {
                b,
                sup_deviation: best.deviation.clone(),
                argmax: best.a_hat.clone(),
                points: exact.len() as u64,
                excluded_points: excluded.len() as u64,
            })
        })
        .collect()
}

/// CSV with header `b,sup_deviation_num,sup_deviation_den_or_float,excluded_points`.
/// Irrational deviations give the exact expression and a decimal.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("b,sup_deviation_num,sup_deviation_den_or_float,excluded_points\n");
    for r in rows {
        let (num, den) = match r.sup_deviation.as_rational() {
            Some(q) => (q.numer().to_string(), q.denom().to_string()),
            None => (
                format!("\"{}\"", r.sup_deviation),
                format!("{:.12}", r.sup_deviation.to_f64()),
            ),
        };
        out.push_str(&format!("{},{},{},{}\n", r.b, num, den, r.excluded_points));
    }
    out
}

/// Corners `â = 2k + 1` for `k ≤ ⌊√(2b)⌋`, with the engine's deviation there.
pub fn corner_deviations(b: u64) -> Result<Vec<(u64, Real)>, RescaledError> {
    let bq = Rational::from(b);
    let two_b = Rational::from(2 * b);
    let kmax = last_step_index(b);
    let base = c0_poly_piecewise_for(&bq, &(&two_b + Rational::from(2 * kmax + 2)))?;
    (0..=kmax)
        .map(|k| {
            let a_hat = Rational::from(2 * k + 1);
            let v = base.eval(&(&a_hat + &two_b))?;
            let value = v.value.mul_rational(&two_b).add_rational(&-two_b.clone());
            Ok((k, value.add_rational(&-c_infinity(&a_hat)).abs()))
        })
        .collect()
}
