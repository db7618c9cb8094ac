//! Named verification suites for `capax verify`.

use capax::bounds::{gk_lower, BoundsError};
use capax::capacities::{
    ech_n, eh_ellipsoid, gk_ellipsoid, gk_ellipsoid_thin, gk_ellipsoid_wide, weight_sequence,
};
use capax::certify::{certificate_bound, family_certificate, FamilyKind, FAMILY_MAX_A, FAMILY_MIN_A};
use capax::fourdim::{c0_ell, last_step_index, DEFAULT_DEPTH};
use capax::rescaled::{convergence_report, corner_deviation, corner_deviations};
use capax::{
    reconcile, DomainKind, EmbeddingProblem, Provenance, Rational, Real, ReconcileError,
    ReconcileOptions, Status, Verdict,
};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITES: &[&str] = &[
    "thm11", "thm12", "ex37", "eh-pq", "certs", "boundary", "fourdim", "crossing", "rescaled",
    "props",
];

pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn equal<T: PartialEq + std::fmt::Display>(name: impl Into<String>, got: T, expected: T) -> Check {
        let passed = got == expected;
        Check::new(name, passed, format!("expected {expected}, got {got}"))
    }
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Runs `name`; `None` for an unknown suite.
pub fn run(name: &str, full: bool) -> Option<Vec<Check>> {
    Some(match name {
        "thm11" => thm11(full),
        "thm12" => thm12(full),
        "ex37" => ex37(full),
        "eh-pq" => eh_pq(full),
        "certs" => certs(full),
        "boundary" => boundary(full),
        "fourdim" => fourdim(full),
        "crossing" => crossing(full),
        "rescaled" => rescaled(full),
        "props" => props(full),
        _ => return None,
    })
}

fn stabilized(a: Rational, kind: DomainKind, b: Rational) -> EmbeddingProblem {
    EmbeddingProblem::standard(a, kind, b, 1).expect("valid parameters")
}

fn verdict_check(
    name: String,
    result: Result<capax::BoundReport, ReconcileError>,
    expected: &Rational,
    lower: Option<Provenance>,
    upper: Option<Provenance>,
) -> Check {
    let target = Real::from(expected);
    match result {
        Ok(r) => match &r.verdict {
            Verdict::Determined {
                value,
                lower: lo,
                upper: up,
            } => {
                let ok = *value == target
                    && lower.as_ref().is_none_or(|l| l == lo)
                    && upper.as_ref().is_none_or(|u| u == up);
                Check::new(
                    name,
                    ok,
                    format!("expected {expected} via {lower:?}/{upper:?}, got {value} via {lo}/{up}"),
                )
            }
            Verdict::Gap { lower, upper } => {
                Check::new(name, false, format!("expected {expected}, got gap [{lower}, {upper}]"))
            }
        },
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn thm11(full: bool) -> Vec<Check> {
    let (b_max, a_max) = if full { (12, 60) } else { (5, 20) };
    let mut out = Vec::new();
    for b in 2..=b_max {
        for a in (b + 1..=a_max).filter(|a| (a - b) % 2 != 0) {
            let p = stabilized(q(a), DomainKind::Ellipsoid, q(b));
            let expected = frac(2 * a, a + b - 1);
            out.push(verdict_check(
                format!("b={b} a={a}"),
                reconcile(&p, &ReconcileOptions::default()),
                &expected,
                Some(Provenance::GkRatio { k: a as u64 }),
                Some(Provenance::FoldEll),
            ));
        }
    }
    out
}

fn thm12(full: bool) -> Vec<Check> {
    let (b2_max, a_max) = if full { (20, 61) } else { (6, 21) };
    let mut out = Vec::new();
    for b2 in 2..=b2_max {
        let b = frac(b2, 2);
        let start = Rational::from((&b * q(2) - q(1)).ceil()).to_i64().unwrap();
        for a in (start..=a_max).filter(|a| a % 2 != 0) {
            let p = stabilized(q(a), DomainKind::Polydisc, b.clone());
            let expected = q(2 * a) / (q(a) + q(b2) - q(1));
            out.push(verdict_check(
                format!("b={b} a={a}"),
                reconcile(&p, &ReconcileOptions::default()),
                &expected,
                None,
                Some(Provenance::FoldPoly),
            ));
        }
    }
    out
}

fn ex37(full: bool) -> Vec<Check> {
    let a_max = if full { 50 } else { 20 };
    let mut out = Vec::new();
    for a in (2..=a_max).filter(|a| a % 3 == 2) {
        let g = gk_ellipsoid(&q(1), a as u64).map(|v| v.value);
        out.push(match g {
            Ok(g) => Check::equal(format!("g_{a}(E(1,1))"), g, frac(1 + a, 3)),
            Err(e) => Check::new(format!("g_{a}(E(1,1))"), false, e.to_string()),
        });
        let p = stabilized(q(a), DomainKind::Ellipsoid, q(1));
        out.push(verdict_check(
            format!("a={a}"),
            reconcile(&p, &ReconcileOptions::default()),
            &frac(3 * a, a + 1),
            Some(Provenance::GkRatio { k: a as u64 }),
            // the small-b folding bound coincides with it at b = 1
            None,
        ));
    }
    out
}

/// Sorted `{m + n·p/q}` with multiplicity, by enumeration.
fn brute_eh(p: i64, q_: i64, count: usize) -> Vec<Rational> {
    let mut vals = Vec::new();
    for m in 1..=count as i64 {
        vals.push(q(m));
    }
    for n in 1..=count as i64 {
        vals.push(frac(n * p, q_));
    }
    vals.sort();
    vals.truncate(count);
    vals
}

fn eh_pq(full: bool) -> Vec<Check> {
    let p_max = if full { 60 } else { 20 };
    let mut out = Vec::new();
    for p in 1..=p_max {
        for q_ in (1..=p).filter(|q_| p.gcd(q_) == 1 && (p + q_) % 2 == 0) {
            let l = (p + q_ - 1) as u64;
            let a = frac(p, q_);
            let got = eh_ellipsoid(&q(1), &a, l);
            let oracle = brute_eh(p, q_, l as usize)[l as usize - 1].clone();
            let ok = got == q(p) && oracle == q(p);
            out.push(Check::new(
                format!("a={a} l={l}"),
                ok,
                format!("expected {p}, got {got} (enumeration {oracle})"),
            ));
        }
    }
    out
}

fn certs(full: bool) -> Vec<Check> {
    let step = if full { 2 } else { 8 };
    let mut out = Vec::new();
    for a in (FAMILY_MIN_A..=FAMILY_MAX_A).step_by(step) {
        let aq = Rational::from(a);
        for kind in [FamilyKind::PolyTarget, FamilyKind::EllTarget] {
            let name = format!("a={a} {kind:?}");
            let value = family_certificate(&aq, kind)
                .map_err(|e| e.to_string())
                .and_then(|c| certificate_bound(&c).map_err(|e| e.to_string()));
            out.push(match value {
                Ok(b) => Check::equal(name, b.value, Real::from(frac(2 * a as i64, a as i64 + 1))),
                Err(e) => Check::new(name, false, e),
            });
        }
    }
    let p = stabilized(q(6), DomainKind::Polydisc, q(1));
    let gk = gk_lower(&p, 24).map(|b| b.value);
    let cert = family_certificate(&q(6), FamilyKind::PolyTarget)
        .ok()
        .and_then(|c| certificate_bound(&c).ok())
        .map(|b| b.value);
    out.push(match (gk, cert) {
        (Ok(gk), Some(cert)) => Check::new(
            "a=6 certificate beats capacities",
            gk == frac(5, 3) && cert == frac(12, 7) && cert > gk,
            format!("expected 12/7 > 5/3, got {cert} vs {gk}"),
        ),
        (gk, cert) => Check::new("a=6 certificate beats capacities", false, format!("{gk:?} {cert:?}")),
    });
    out
}

fn boundary(full: bool) -> Vec<Check> {
    let k_max = if full { 200 } else { 50 };
    let a = frac(3, 2);
    (1..=k_max)
        .map(|k| match (gk_ellipsoid_thin(&a, k), gk_ellipsoid_wide(&a, k)) {
            (Ok(t), Ok(w)) => Check::equal(format!("k={k}"), t.value, w.value),
            (t, w) => Check::new(format!("k={k}"), false, format!("{t:?} {w:?}")),
        })
        .collect()
}

fn fourdim(_full: bool) -> Vec<Check> {
    let mut out = Vec::new();
    for b in [2u64, 3] {
        let two_b = Rational::from(2 * b);
        for k in 0..=last_step_index(b) {
            let a = Rational::from(2 * b + 2 * k + 1);
            let expected = &a / Rational::from(2 * b + k);
            let name = format!("c0_ell({a}, {two_b})");
            out.push(match c0_ell(&a, &two_b, DEFAULT_DEPTH) {
                Ok(v) => Check::new(
                    name,
                    v.status == Status::Exact && v.value == expected,
                    format!("expected {expected} (exact), got {} ({:?})", v.value, v.status),
                ),
                Err(e) => Check::new(name, false, e.to_string()),
            });
        }
    }
    for (a, bound) in [(q(2), frac(4, 3)), (q(4), frac(8, 5))] {
        let name = format!("c0_ell({a}, 2) < {bound}");
        out.push(match c0_ell(&a, &q(2), DEFAULT_DEPTH) {
            Ok(v) => Check::new(
                name,
                v.status == Status::Exact && v.value < bound,
                format!("got {} ({:?})", v.value, v.status),
            ),
            Err(e) => Check::new(name, false, e.to_string()),
        });
    }
    out
}

/// `fold(a) == volume(a)` at the crossing, as an identity in `Q(√r)`.
fn crossing_exact(kind: DomainKind, b: i64) -> Result<bool, String> {
    let bq = q(b);
    let (a, c) = match kind {
        // a = b + 1 + 2√b, fold 2a/(a+b−1), volume² a/b
        DomainKind::Ellipsoid => (Real::new(&bq + q(1), q(2), bq.clone()), bq.clone()),
        // a = (√(2b) + 1)², fold 2a/(a+2b−1), volume² a/(2b)
        DomainKind::Polydisc => (Real::new(q(2 * b + 1), q(2), q(2 * b)), q(2 * b)),
    };
    let fold = a
        .mul_rational(&q(2))
        .checked_div(&a.add_rational(&(&c - q(1))))
        .ok_or("division by zero")?;
    Ok(fold.is_positive() && fold.square() == a.mul_rational(&c.recip()))
}

fn crossing_float(kind: DomainKind, b: f64) -> f64 {
    let (a, c) = match kind {
        DomainKind::Ellipsoid => (b + 1.0 + 2.0 * b.sqrt(), b),
        DomainKind::Polydisc => (((2.0 * b).sqrt() + 1.0).powi(2), 2.0 * b),
    };
    (2.0 * a / (a + c - 1.0) - (a / c).sqrt()).abs()
}

fn crossing(full: bool) -> Vec<Check> {
    let b_max = if full { 100 } else { 20 };
    let mut out = Vec::new();
    // rational crossing points: a = 9 and 16 for ellipsoids, 9, 25, 49 for polydiscs
    for (kind, b, a) in [
        (DomainKind::Ellipsoid, 4, 9),
        (DomainKind::Ellipsoid, 9, 16),
        (DomainKind::Polydisc, 2, 9),
        (DomainKind::Polydisc, 8, 25),
        (DomainKind::Polydisc, 18, 49),
    ] {
        let p = stabilized(q(a), kind, q(b));
        let fold = capax::bounds::fold_upper(&p);
        let vol = capax::bounds::volume_lower(&EmbeddingProblem::standard(q(a), kind, q(b), 0).unwrap());
        let ok = fold.first().is_some_and(|f| f.value == vol.value) && vol.value.is_rational();
        out.push(Check::new(
            format!("{kind:?} b={b} a={a} rational"),
            ok,
            format!("fold {:?} volume {}", fold.first().map(|f| f.value.to_string()), vol.value),
        ));
    }
    for kind in [DomainKind::Ellipsoid, DomainKind::Polydisc] {
        for b in 2..=b_max {
            let name = format!("{kind:?} b={b}");
            out.push(match crossing_exact(kind, b) {
                Ok(true) => {
                    let err = crossing_float(kind, b as f64);
                    Check::new(name, err < 1e-9, format!("float residual {err:e}"))
                }
                Ok(false) => Check::new(name, false, "exact identity fails"),
                Err(e) => Check::new(name, false, e),
            });
        }
    }
    out
}

fn rescaled(full: bool) -> Vec<Check> {
    let bs: &[u64] = if full { &[10, 50, 200] } else { &[10, 50] };
    let mut out = Vec::new();
    match convergence_report(bs, &q(10), &frac(1, 8)) {
        Ok(rows) => {
            let devs: Vec<String> = rows.iter().map(|r| format!("b={}: {}", r.b, r.sup_deviation)).collect();
            out.push(Check::new(
                "sup deviation strictly decreasing",
                rows.windows(2).all(|w| w[0].sup_deviation > w[1].sup_deviation),
                devs.join(", "),
            ));
        }
        Err(e) => out.push(Check::new("sup deviation strictly decreasing", false, e.to_string())),
    }
    for &b in bs {
        match corner_deviations(b) {
            Ok(devs) => {
                for (k, dev) in devs {
                    out.push(Check::equal(
                        format!("b={b} corner {}", 2 * k + 1),
                        dev,
                        Real::from(corner_deviation(b, k)),
                    ));
                }
            }
            Err(e) => out.push(Check::new(format!("b={b} corners"), false, e.to_string())),
        }
    }
    out
}

fn random_rational(rng: &mut ChaCha8Rng, max: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(d..=max * d);
    frac(n, d)
}

fn props(full: bool) -> Vec<Check> {
    let scale = if full { 1 } else { 5 };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();

    let mut weight_fail = Vec::new();
    for _ in 0..200 / scale {
        let a = random_rational(&mut rng, 30, 40);
        let w = weight_sequence(&a).expect("a >= 1");
        let qd = Rational::from(a.denom().clone());
        if w.sum_of_squares() != a || w.sum() != &a + q(1) - qd.recip() {
            weight_fail.push(a.to_string());
        }
    }
    out.push(Check::new(
        "weight identities",
        weight_fail.is_empty(),
        format!("failing a: {weight_fail:?}"),
    ));

    let mut ech_fail = Vec::new();
    for _ in 0..100 / scale {
        let x = random_rational(&mut rng, 5, 7);
        let y = random_rational(&mut rng, 9, 7);
        let c = random_rational(&mut rng, 4, 5);
        let k = rng.gen_range(0..60u64);
        if ech_n(&(&x * &c), &(&y * &c), k) != ech_n(&x, &y, k) * &c {
            ech_fail.push(format!("x={x} y={y} c={c} k={k}"));
        }
    }
    out.push(Check::new("ech scaling", ech_fail.is_empty(), ech_fail.join("; ")));

    let mut inconsistent = Vec::new();
    for _ in 0..500 / scale {
        let p = random_problem(&mut rng);
        let opts = ReconcileOptions {
            depth: 2_000,
            ..Default::default()
        };
        match reconcile(&p, &opts) {
            Ok(r) => {
                let lo = &r.best_lower().value;
                let hi = &r.best_upper().value;
                if lo > hi {
                    inconsistent.push(format!("{:?}: {lo} > {hi}", p));
                }
            }
            Err(ReconcileError::Bounds(BoundsError::InvalidParameter(_))) => {}
            Err(e) => inconsistent.push(format!("{}: {e}", describe(&p))),
        }
    }
    out.push(Check::new(
        "reconcile lower <= upper",
        inconsistent.is_empty(),
        inconsistent.join("; "),
    ));
    out
}

/// Random problem with small parameters, biased toward the integer cases the
/// closed forms cover.
pub fn random_problem(rng: &mut ChaCha8Rng) -> EmbeddingProblem {
    let kind = if rng.gen_bool(0.5) {
        DomainKind::Ellipsoid
    } else {
        DomainKind::Polydisc
    };
    let a = if rng.gen_bool(0.6) {
        q(rng.gen_range(1..=40))
    } else {
        random_rational(rng, 30, 6)
    };
    let b = if rng.gen_bool(0.6) {
        q(rng.gen_range(1..=8))
    } else {
        frac(rng.gen_range(2..=16), 2)
    };
    let n = rng.gen_range(0..=2);
    EmbeddingProblem::standard(a, kind, b, n).expect("positive parameters")
}

pub fn describe(p: &EmbeddingProblem) -> String {
    format!("{} x C^{} -> {}", p.domain, p.stabilization, p.target)
}
