use capax::{
    reconcile, DomainKind, EmbeddingProblem, Provenance, Rational, Real, ReconcileOptions,
    ToricDomain, Verdict,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn problem(a: Rational, kind: DomainKind, b: Rational, n: u32) -> EmbeddingProblem {
    EmbeddingProblem::standard(a, kind, b, n).unwrap()
}

#[test]
fn determined_stable_ellipsoid() {
    let r = reconcile(&problem(q(7, 1), DomainKind::Ellipsoid, q(2, 1), 1), &ReconcileOptions::default()).unwrap();
    assert_eq!(r.verdict.determined_value(), Some(&Real::from(q(7, 4))));
    assert!(matches!(
        r.verdict,
        Verdict::Determined {
            lower: Provenance::GkRatio { k: 7 },
            upper: Provenance::FoldEll,
            ..
        }
    ));
}

#[test]
fn gap_is_reported() {
    let r = reconcile(&problem(q(7, 1), DomainKind::Ellipsoid, q(3, 1), 1), &ReconcileOptions::default()).unwrap();
    match r.verdict {
        Verdict::Gap { lower, upper } => {
            assert_eq!(lower, Real::from(q(3, 2)));
            assert_eq!(upper, Real::from(q(14, 9)));
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn bounds_scale_with_the_problem() {
    let base = problem(q(11, 1), DomainKind::Polydisc, q(3, 2), 1);
    let scaled = EmbeddingProblem::new(
        ToricDomain::ellipsoid(q(2, 1), q(22, 1)).unwrap(),
        ToricDomain::polydisc(q(1, 3), q(1, 2)).unwrap(),
        1,
    )
    .unwrap();
    let opts = ReconcileOptions::default();
    let (r0, r1) = (reconcile(&base, &opts).unwrap(), reconcile(&scaled, &opts).unwrap());
    assert_eq!(r1.best_lower().value, r0.best_lower().value.mul_rational(&q(6, 1)));
    assert_eq!(r1.best_upper().value, r0.best_upper().value.mul_rational(&q(6, 1)));
}

#[test]
fn unstabilized_ball_gets_fourdim_bounds() {
    let r = reconcile(&problem(q(5, 1), DomainKind::Ellipsoid, q(2, 1), 0), &ReconcileOptions::default()).unwrap();
    assert_eq!(r.verdict.determined_value(), Some(&Real::from(q(5, 3))));
}

#[test]
fn report_serializes() {
    let r = reconcile(&problem(q(9, 1), DomainKind::Ellipsoid, q(4, 1), 2), &ReconcileOptions::default()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["verdict"]["kind"], "determined");
    let back: EmbeddingProblem = serde_json::from_value(v["problem"].clone()).unwrap();
    assert_eq!(back, r.problem);
}
