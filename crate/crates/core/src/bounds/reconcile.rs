//! Collects every available bound for a problem and decides whether they meet.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::theorems::{first_odd_at_least, theorem_value, TheoremValue};
use super::{
    default_k_max, default_l_max, eh_lower, fold_upper, gk_lower, inclusion_upper,
    scaled_inclusion_upper, subscaling_upper, volume_lower, Bound, BoundsError, Direction,
    Provenance,
};
use crate::certify::{certificate_bound, Certificate, CertifyError};
use crate::curve::Status;
use crate::domain::{DomainKind, EmbeddingProblem};
use crate::fourdim::{c0_ell, C0Value, FourDimError, DEFAULT_DEPTH};
use crate::rational::Rational;
use crate::surd::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconcileError {
    #[error("lower bound {lower} ({lower_source}) exceeds upper bound {upper} ({upper_source})")]
    InconsistentBounds {
        lower: Real,
        lower_source: Provenance,
        upper: Real,
        upper_source: Provenance,
    },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    FourDim(#[from] FourDimError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconcileOptions {
    /// Defaults to `4⌈a⌉`.
    pub k_max: Option<u64>,
    /// Defaults to `8⌈a⌉`.
    pub l_max: Option<u64>,
    /// Term budget for the four-dimensional lattice scan.
    pub depth: u64,
    /// Run the four-dimensional computation; by default only when `N = 0`.
    pub fourdim: Option<bool>,
    /// Include closed-form theorem values as bounds.
    pub theorems: bool,
    pub certificates: Vec<Certificate>,
    /// Capacities and constructions only: no theorems, certificates or
    /// four-dimensional scan.
    pub capacity_only: bool,
}

impl Default for ReconcileOptions {
    fn default() -> Self {
        ReconcileOptions {
            k_max: None,
            l_max: None,
            depth: DEFAULT_DEPTH,
            fourdim: None,
            theorems: true,
            certificates: Vec::new(),
            capacity_only: false,
        }
    }
}

impl ReconcileOptions {
    pub fn capacity_only() -> Self {
        ReconcileOptions {
            capacity_only: true,
            theorems: false,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Determined {
        value: Real,
        lower: Provenance,
        upper: Provenance,
    },
    Gap {
        lower: Real,
        upper: Real,
    },
}

impl Verdict {
    pub fn is_determined(&self) -> bool {
        matches!(self, Verdict::Determined { .. })
    }

    pub fn determined_value(&self) -> Option<&Real> {
        match self {
            Verdict::Determined { value, .. } => Some(value),
            Verdict::Gap { .. } => None,
        }
    }
}

/// Things worth knowing that are not errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum Flag {
    /// The established value is larger than every lower bound computed here.
    LowerShortOfTheorem { theorem: TheoremValue, best_engine_lower: Real },
    /// The lattice scan ran out of depth before its tail certificate applied.
    FourDimConjectural { checked_through: u64 },
    FourDimSkipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub problem: EmbeddingProblem,
    pub lowers: Vec<Bound>,
    pub uppers: Vec<Bound>,
    pub verdict: Verdict,
    pub flags: Vec<Flag>,
    pub theorem: Option<TheoremValue>,
}

impl BoundReport {
    /// Largest lower bound; ties go to the one listed first.
    pub fn best_lower(&self) -> &Bound {
        self.lowers
            .iter()
            .reduce(|best, b| if b.value > best.value { b } else { best })
            .expect("volume or a capacity ratio is always present")
    }

    /// Smallest upper bound; ties go to the one listed first.
    pub fn best_upper(&self) -> &Bound {
        self.uppers
            .iter()
            .reduce(|best, b| if b.value < best.value { b } else { best })
            .expect("scaled inclusion is always present")
    }
}

/// Four-dimensional value of the normalized problem, if the target allows it.
fn fourdim_value(p: &EmbeddingProblem, depth: u64) -> Result<Result<C0Value, String>, FourDimError> {
    let (a, b) = (p.a(), p.b());
    match p.target_kind() {
        DomainKind::Ellipsoid => c0_ell(&a, &b, depth).map(Ok),
        DomainKind::Polydisc if b.is_integer() => c0_ell(&a, &(b * Rational::from(2)), depth).map(Ok),
        DomainKind::Polydisc => Ok(Err(format!("polydisc target with non-integer b = {b}"))),
    }
}

/// Points `a0 < a` with a known value to scale up from.
fn subscaling_points(p: &EmbeddingProblem) -> Vec<Rational> {
    let (a, b) = (p.a(), p.b());
    let floor = Rational::from(a.floor());
    let mut pts: Vec<Rational> = (0..4).map(|i| &floor - Rational::from(i)).collect();
    match p.target_kind() {
        DomainKind::Ellipsoid => pts.extend([b.clone(), &b + Rational::one()]),
        DomainKind::Polydisc => {
            let two = Rational::from(2);
            let a0 = first_odd_at_least(&(&two * &b - Rational::one()));
            pts.push((&a0 - Rational::one()) / &two + &b);
            pts.push(a0);
        }
    }
    pts.retain(|x| *x >= Rational::one() && *x < a);
    pts.sort();
    pts.dedup();
    pts
}

fn subscaling_uppers(p: &EmbeddingProblem) -> Result<Vec<Bound>, BoundsError> {
    let a = p.a();
    let mut out = Vec::new();
    for a0 in subscaling_points(p) {
        let q = EmbeddingProblem::standard(a0.clone(), p.target_kind(), p.b(), p.stabilization)
            .expect("a0 >= 1");
        if let Some(t) = theorem_value(&q)? {
            out.push(subscaling_upper(&a0, &Real::from(t.value), &a)?.scaled(&p.scale()));
        }
    }
    Ok(out)
}

fn certificate_lowers(p: &EmbeddingProblem, certs: &[Certificate]) -> Result<Vec<Bound>, CertifyError> {
    let (a, b) = (p.a(), p.b());
    let mut out = Vec::new();
    for c in certs {
        if c.target.kind != p.target_kind() || c.target.aspect() != b || c.domain_a != a {
            continue;
        }
        // the certificate is for the target x·T(1, b)
        out.push(certificate_bound(c)?.scaled(&(&c.target.x * p.scale())));
    }
    Ok(out)
}

/// Every bound for `p`, with the verdict.
pub fn reconcile(p: &EmbeddingProblem, opts: &ReconcileOptions) -> Result<BoundReport, ReconcileError> {
    let a = p.a();
    let k_max = opts.k_max.unwrap_or_else(|| default_k_max(&a));
    let l_max = opts.l_max.unwrap_or_else(|| default_l_max(&a));
    let use_theorems = opts.theorems && !opts.capacity_only;
    let run_fourdim = !opts.capacity_only && opts.fourdim.unwrap_or(!p.is_stabilized());

    let (capacity, fourdim) = rayon::join(
        || -> Result<Vec<Bound>, BoundsError> {
            let mut lowers = vec![gk_lower(p, k_max)?];
            if p.target_kind() == DomainKind::Ellipsoid {
                lowers.push(eh_lower(p, l_max)?);
            }
            if !p.is_stabilized() {
                lowers.push(volume_lower(p));
            }
            Ok(lowers)
        },
        || {
            if run_fourdim {
                fourdim_value(p, opts.depth).map(Some)
            } else {
                Ok(None)
            }
        },
    );

    let theorem = theorem_value(p)?;
    let mut flags = Vec::new();
    let mut lowers = capacity?;
    if !opts.capacity_only {
        lowers.extend(certificate_lowers(p, &opts.certificates)?);
    }

    let mut uppers = fold_upper(p);
    uppers.extend(inclusion_upper(p));
    uppers.push(scaled_inclusion_upper(p));
    if use_theorems {
        uppers.extend(subscaling_uppers(p)?);
    }

    match fourdim? {
        Some(Ok(v)) => {
            let provenance = Provenance::FourDim {
                status: v.status,
                checked_through: v.checked_through,
            };
            let value = v.value.mul_rational(&p.scale());
            if !p.is_stabilized() {
                lowers.push(Bound::lower(value.clone(), provenance.clone()));
            }
            if v.status == Status::Exact {
                uppers.push(Bound::upper(value, provenance));
            } else {
                flags.push(Flag::FourDimConjectural {
                    checked_through: v.checked_through,
                });
            }
        }
        Some(Err(reason)) => flags.push(Flag::FourDimSkipped { reason }),
        None => {}
    }

    if let Some(t) = &theorem {
        let best_engine = lowers.iter().map(|b| &b.value).max().cloned().expect("nonempty");
        if best_engine < t.value {
            flags.push(Flag::LowerShortOfTheorem {
                theorem: t.clone(),
                best_engine_lower: best_engine,
            });
        }
        if use_theorems {
            let provenance = Provenance::TheoremFormula { id: t.theorem };
            lowers.push(Bound::lower(t.value.clone(), provenance.clone()));
            uppers.push(Bound::upper(t.value.clone(), provenance));
        }
    }

    debug_assert!(lowers.iter().all(|b| b.direction == Direction::Lower));
    debug_assert!(uppers.iter().all(|b| b.direction == Direction::Upper));
    let mut report = BoundReport {
        problem: p.clone(),
        lowers,
        uppers,
        verdict: Verdict::Gap {
            lower: Real::zero(),
            upper: Real::zero(),
        },
        flags,
        theorem,
    };
    let (lo, hi) = (report.best_lower().clone(), report.best_upper().clone());
    if lo.value > hi.value {
        return Err(ReconcileError::InconsistentBounds {
            lower: lo.value,
            lower_source: lo.provenance,
            upper: hi.value,
            upper_source: hi.provenance,
        });
    }
    report.verdict = if lo.value == hi.value {
        Verdict::Determined {
            value: lo.value,
            lower: lo.provenance,
            upper: hi.provenance,
        }
    } else {
        Verdict::Gap {
            lower: lo.value,
            upper: hi.value,
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::TheoremId;
    use crate::certify::{family_certificate, FamilyKind};
    use crate::rational::{frac, q};

    fn ell(a: Rational, b: Rational, n: u32) -> EmbeddingProblem {
        EmbeddingProblem::standard(a, DomainKind::Ellipsoid, b, n).unwrap()
    }

    fn poly(a: Rational, b: Rational, n: u32) -> EmbeddingProblem {
        EmbeddingProblem::standard(a, DomainKind::Polydisc, b, n).unwrap()
    }

    fn determined(r: &BoundReport) -> Rational {
        r.verdict
            .determined_value()
            .and_then(|v| v.as_rational().cloned())
            .unwrap_or_else(|| panic!("not determined: {:?}", r.verdict))
    }

    #[test]
    fn parity_case_determined_by_engine() {
        let r = reconcile(&ell(q(7), q(2), 1), &ReconcileOptions::capacity_only()).unwrap();
        assert_eq!(determined(&r), frac(7, 4));
        let Verdict::Determined { lower, upper, .. } = &r.verdict else { unreachable!() };
        assert_eq!(*lower, Provenance::GkRatio { k: 7 });
        assert_eq!(*upper, Provenance::FoldEll);
    }

    #[test]
    fn polydisc_case() {
        let r = reconcile(&poly(q(9), q(2), 1), &ReconcileOptions::default()).unwrap();
        assert_eq!(determined(&r), frac(3, 2));
        assert!(r.flags.is_empty());
    }

    #[test]
    fn gap_in_even_parity() {
        let r = reconcile(&ell(q(7), q(3), 1), &ReconcileOptions::capacity_only()).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::Gap {
                lower: Real::from(frac(3, 2)),
                upper: Real::from(frac(14, 9)),
            }
        );
        // six happens to be settled by the capacities alone
        let six = reconcile(&ell(q(6), q(3), 1), &ReconcileOptions::capacity_only()).unwrap();
        assert_eq!(determined(&six), frac(3, 2));
    }

    #[test]
    fn certificates_close_the_gap() {
        let p = poly(q(6), q(1), 1);
        let without = reconcile(&p, &ReconcileOptions::capacity_only()).unwrap();
        assert_eq!(without.best_lower().value, Real::from(frac(5, 3)));
        let opts = ReconcileOptions {
            certificates: vec![family_certificate(&q(6), FamilyKind::PolyTarget).unwrap()],
            theorems: false,
            ..Default::default()
        };
        let with = reconcile(&p, &opts).unwrap();
        assert_eq!(determined(&with), frac(12, 7));
    }

    #[test]
    fn congruence_case() {
        for a in (2..=50).filter(|a| a % 3 == 2) {
            let r = reconcile(&ell(q(a), q(1), 1), &ReconcileOptions::capacity_only()).unwrap();
            assert_eq!(determined(&r), frac(3 * a, a + 1), "a = {a}");
        }
    }

    #[test]
    fn unstabilized_uses_fourdim() {
        let r = reconcile(&ell(q(5), q(4), 0), &ReconcileOptions::default()).unwrap();
        assert_eq!(determined(&r), frac(5, 4));
        let r = reconcile(&ell(q(8), q(2), 0), &ReconcileOptions::default()).unwrap();
        assert_eq!(determined(&r), q(2));
        assert!(r.uppers.iter().all(|b| !matches!(b.provenance, Provenance::FoldEll)));
    }

    #[test]
    fn theorem_short_flag() {
        // the first step a/b on [b, b+1] is asserted without a matching engine lower
        let r = reconcile(&ell(frac(7, 2), q(3), 1), &ReconcileOptions::default()).unwrap();
        assert_eq!(r.theorem.as_ref().unwrap().theorem, TheoremId::FirstStepEllipsoid);
        let engine_short = r
            .flags
            .iter()
            .any(|f| matches!(f, Flag::LowerShortOfTheorem { .. }));
        let best_engine = reconcile(&ell(frac(7, 2), q(3), 1), &ReconcileOptions::capacity_only())
            .unwrap()
            .best_lower()
            .value
            .clone();
        assert_eq!(engine_short, best_engine < frac(7, 6));
        assert_eq!(determined(&r), frac(7, 6));
    }

    #[test]
    fn scaling_invariance() {
        let p = ell(q(9), q(4), 1);
        let base = reconcile(&p, &ReconcileOptions::default()).unwrap();
        let scaled = reconcile(&p.scaled(&frac(7, 3)), &ReconcileOptions::default()).unwrap();
        assert_eq!(base.verdict, scaled.verdict);
    }

    #[test]
    fn report_round_trips() {
        let r = reconcile(&poly(q(5), q(1), 1), &ReconcileOptions::default()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: BoundReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
