//! One line per acceptance criterion. Values are compared exactly; the only
//! floating-point comparison is the crossing cross-check.

use std::process::Command;
use std::time::{Duration, Instant};

use capax::bounds::{fold_upper, volume_lower};
use capax::capacities::{
    ech_n, eh_ellipsoid, gk_ellipsoid, gk_ellipsoid_thin, gk_ellipsoid_wide, weight_sequence,
};
use capax::certify::{certificate_bound, family_certificate, FamilyKind};
use capax::fourdim::{c0_ell, last_step_index, DEFAULT_DEPTH};
use capax::rescaled::{convergence_report, corner_deviation, corner_deviations};
use capax::{
    reconcile, DomainKind, EmbeddingProblem, Provenance, Rational, Real, ReconcileOptions, Status,
    Verdict,
};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FLOAT_TOL: f64 = 1e-9;
const LIMIT_PARITY: Duration = Duration::from_secs(5);
const LIMIT_POLYDISC: Duration = Duration::from_secs(5);
const LIMIT_FOURDIM: Duration = Duration::from_secs(60);
const LIMIT_RESCALED: Duration = Duration::from_secs(120);

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    Outcome {
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            summary
        } else {
            format!("{summary}; failures: {}", failures.join("; "))
        },
    }
}

fn determined(p: &EmbeddingProblem) -> Result<(Real, Provenance, Provenance), String> {
    match reconcile(p, &ReconcileOptions::default()).map_err(|e| e.to_string())?.verdict {
        Verdict::Determined { value, lower, upper } => Ok((value, lower, upper)),
        Verdict::Gap { lower, upper } => Err(format!("gap [{lower}, {upper}]")),
    }
}

fn parity_family() -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for b in 2..=12i64 {
        for a in (b + 1..=60).filter(|a| (a - b) % 2 != 0) {
            n += 1;
            let p = EmbeddingProblem::standard(q(a), DomainKind::Ellipsoid, q(b), 1).unwrap();
            let expected = Real::from(frac(2 * a, a + b - 1));
            match determined(&p) {
                Ok((v, Provenance::GkRatio { k }, Provenance::FoldEll)) if v == expected && k == a as u64 => {}
                other => failures.push(format!("b={b} a={a}: {other:?}")),
            }
        }
    }
    outcome(failures, format!("{n} problems exact with witnesses k = a and fold_ell"))
}

fn polydisc_family() -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for b2 in 2..=20i64 {
        let b = frac(b2, 2);
        let start = (b2 - 1).max(1);
        for a in (start..=61).filter(|a| a % 2 != 0) {
            n += 1;
            let p = EmbeddingProblem::standard(q(a), DomainKind::Polydisc, b.clone(), 1).unwrap();
            let expected = Real::from(frac(2 * a, a + b2 - 1));
            match determined(&p) {
                Ok((v, _, Provenance::FoldPoly)) if v == expected => {}
                other => failures.push(format!("b={b} a={a}: {other:?}")),
            }
        }
    }
    outcome(failures, format!("{n} problems exact"))
}

fn ball_congruence() -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for a in (2..=50i64).filter(|a| a % 3 == 2) {
        n += 1;
        let g = gk_ellipsoid(&q(1), a as u64).unwrap().value;
        if g != frac(1 + a, 3) {
            failures.push(format!("g_{a}(E(1,1)) = {g}"));
        }
        let p = EmbeddingProblem::standard(q(a), DomainKind::Ellipsoid, q(1), 1).unwrap();
        match determined(&p) {
            Ok((v, _, _)) if v == frac(3 * a, a + 1) => {}
            other => failures.push(format!("a={a}: {other:?}")),
        }
    }
    outcome(failures, format!("{n} values of a exact"))
}

/// `l`-th smallest of `{m, n·p/q : m, n ≥ 1}` as a numerator over `q`.
fn eh_oracle(p: i64, den: i64, l: usize) -> i64 {
    let mut v: Vec<i64> = (1..=l as i64).map(|m| m * den).chain((1..=l as i64).map(|n| n * p)).collect();
    v.sort_unstable();
    v[l - 1]
}

fn eh_odd_index() -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for p in 1..=60i64 {
        for d in (1..=p).filter(|d| p.gcd(d) == 1 && (p + d) % 2 == 0) {
            n += 1;
            let l = (p + d - 1) as usize;
            let got = eh_ellipsoid(&q(1), &frac(p, d), l as u64);
            let oracle = eh_oracle(p, d, l);
            if got != q(p) || oracle != p * d {
                failures.push(format!("p/q={p}/{d}: got {got}, enumeration {oracle}/{d}"));
            }
        }
    }
    outcome(failures, format!("{n} pairs match enumeration"))
}

fn certificate_families() -> Outcome {
    let mut failures = Vec::new();
    for a in (6..=100i64).step_by(2) {
        let expected = Real::from(frac(2 * a, a + 1));
        // the word has index 2a+1 and action a+1 in both families
        let c = eh_oracle(a, 1, (2 * a + 1) as usize);
        if frac(c, a + 1) != frac(2 * a, a + 1) {
            failures.push(format!("oracle at a={a}"));
        }
        for kind in [FamilyKind::PolyTarget, FamilyKind::EllTarget] {
            let v = certificate_bound(&family_certificate(&q(a), kind).unwrap()).unwrap().value;
            if v != expected {
                failures.push(format!("a={a} {kind:?}: {v}"));
            }
        }
    }
    let p = EmbeddingProblem::standard(q(6), DomainKind::Polydisc, q(1), 1).unwrap();
    let gk = reconcile(&p, &ReconcileOptions::capacity_only()).unwrap().best_lower().value.clone();
    let cert = certificate_bound(&family_certificate(&q(6), FamilyKind::PolyTarget).unwrap()).unwrap().value;
    if !(cert == frac(12, 7) && gk == frac(5, 3) && cert > gk) {
        failures.push(format!("a=6: certificate {cert}, capacities {gk}"));
    }
    outcome(failures, "2a/(a+1) for both families, 12/7 > 5/3 at a = 6".into())
}

fn boundary_agreement() -> Outcome {
    let a = frac(3, 2);
    let failures = (1..=200)
        .filter_map(|k| {
            let (t, w) = (gk_ellipsoid_thin(&a, k).unwrap(), gk_ellipsoid_wide(&a, k).unwrap());
            (t.value != w.value).then(|| format!("k={k}: {} vs {}", t.value, w.value))
        })
        .collect();
    outcome(failures, "both closed forms agree for k <= 200".into())
}

/// Sorted `{m·x + n·y}` for integers x, y, first `count` terms.
fn lattice_oracle(x: i64, y: i64, count: usize) -> Vec<i64> {
    let bound = (count as i64) * x.max(y);
    let mut v = Vec::new();
    for m in 0..=bound / x {
        for n in 0..=(bound - m * x) / y {
            v.push(m * x + n * y);
        }
    }
    v.sort_unstable();
    v.truncate(count);
    v
}

fn fourdim_corners() -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for b in [2i64, 3] {
        for k in 0..=last_step_index(b as u64) as i64 {
            n += 1;
            let a = 2 * b + 2 * k + 1;
            let expected = frac(a, 2 * b + k);
            let v = c0_ell(&q(a), &q(2 * b), DEFAULT_DEPTH).unwrap();
            if v.status != Status::Exact || v.value != expected {
                failures.push(format!("b={b} k={k}: {} ({:?})", v.value, v.status));
            }
            // the value is attained by some ratio of the sequences
            let (na, nb) = (lattice_oracle(1, a, 4000), lattice_oracle(1, 2 * b, 4000));
            let best = na
                .iter()
                .zip(&nb)
                .skip(1)
                .map(|(x, y)| frac(*x, *y))
                .max()
                .unwrap();
            if best != expected {
                failures.push(format!("b={b} k={k}: enumeration sup {best}"));
            }
        }
    }
    for (a, bound) in [(2, frac(4, 3)), (4, frac(8, 5))] {
        let v = c0_ell(&q(a), &q(2), DEFAULT_DEPTH).unwrap();
        if v.status != Status::Exact || v.value >= bound {
            failures.push(format!("c0_ell({a}, 2) = {} ({:?})", v.value, v.status));
        }
    }
    outcome(failures, format!("{n} corners exact, c0_ell(2,2) < 4/3 and c0_ell(4,2) < 8/5"))
}

fn crossings() -> Outcome {
    let mut failures = Vec::new();
    // crossing points that are rational
    for (kind, b, a) in [
        (DomainKind::Ellipsoid, 4, 9),
        (DomainKind::Ellipsoid, 9, 16),
        (DomainKind::Polydisc, 2, 9),
        (DomainKind::Polydisc, 8, 25),
        (DomainKind::Polydisc, 18, 49),
    ] {
        let fold = &fold_upper(&EmbeddingProblem::standard(q(a), kind, q(b), 1).unwrap())[0].value;
        let vol = volume_lower(&EmbeddingProblem::standard(q(a), kind, q(b), 0).unwrap()).value;
        if *fold != vol || !vol.is_rational() {
            failures.push(format!("{kind:?} b={b}: fold {fold}, volume {vol}"));
        }
    }
    // all other b: exact identity in Q(√r) and a float cross-check
    for b in 2..=50i64 {
        for kind in [DomainKind::Ellipsoid, DomainKind::Polydisc] {
            let (a, c) = match kind {
                DomainKind::Ellipsoid => (Real::new(q(b + 1), q(2), q(b)), q(b)),
                DomainKind::Polydisc => (Real::new(q(2 * b + 1), q(2), q(2 * b)), q(2 * b)),
            };
            let fold = a.mul_rational(&q(2)).checked_div(&a.add_rational(&(&c - q(1)))).unwrap();
            if fold.square() != a.mul_rational(&c.recip()) || !fold.is_positive() {
                failures.push(format!("{kind:?} b={b}: exact identity"));
            }
            let (af, cf) = (a.to_f64(), c.to_f64());
            let err = (2.0 * af / (af + cf - 1.0) - (af / cf).sqrt()).abs();
            if err > FLOAT_TOL {
                failures.push(format!("{kind:?} b={b}: float residual {err:e}"));
            }
        }
    }
    outcome(failures, format!("exact for rational cases and all b <= 50, float tol {FLOAT_TOL:e}"))
}

fn rescaled_convergence() -> Outcome {
    let mut failures = Vec::new();
    let rows = convergence_report(&[10, 50, 200], &q(10), &frac(1, 8)).unwrap();
    if !rows.windows(2).all(|w| w[0].sup_deviation > w[1].sup_deviation) {
        failures.push("not strictly decreasing".into());
    }
    for b in [10u64, 50, 200] {
        for (k, dev) in corner_deviations(b).unwrap() {
            let oracle = frac((k * (k + 1)) as i64, (2 * b + k) as i64);
            if dev != oracle || oracle != corner_deviation(b, k) {
                failures.push(format!("b={b} k={k}: {dev}"));
            }
        }
    }
    let sups: Vec<String> = rows.iter().map(|r| format!("{}", r.sup_deviation)).collect();
    outcome(failures, format!("sup deviations {}", sups.join(" > ")))
}

fn random_rational(rng: &mut ChaCha8Rng, max: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    frac(rng.gen_range(d..=max * d), d)
}

fn properties() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let a = random_rational(&mut rng, 40, 50);
        let w = weight_sequence(&a).unwrap();
        let den = Rational::from(a.denom().clone());
        if w.sum_of_squares() != a || w.sum() != &a + q(1) - den.recip() {
            failures.push(format!("weights of {a}"));
        }
    }
    for _ in 0..200 {
        let (x, y, c) = (random_rational(&mut rng, 6, 9), random_rational(&mut rng, 9, 9), random_rational(&mut rng, 5, 7));
        let k = rng.gen_range(0..80);
        if ech_n(&(&x * &c), &(&y * &c), k) != ech_n(&x, &y, k) * &c {
            failures.push(format!("ech scaling x={x} y={y} c={c} k={k}"));
        }
    }
    let opts = ReconcileOptions {
        depth: 2_000,
        ..Default::default()
    };
    for _ in 0..500 {
        let kind = if rng.gen_bool(0.5) { DomainKind::Ellipsoid } else { DomainKind::Polydisc };
        let a = if rng.gen_bool(0.6) { q(rng.gen_range(1..=40)) } else { random_rational(&mut rng, 30, 6) };
        let b = if rng.gen_bool(0.6) { q(rng.gen_range(1..=8)) } else { frac(rng.gen_range(2..=16), 2) };
        let p = EmbeddingProblem::standard(a, kind, b, rng.gen_range(0..=2)).unwrap();
        match reconcile(&p, &opts) {
            Ok(r) => {
                let lo = r.lowers.iter().map(|b| &b.value).max().unwrap();
                let hi = r.uppers.iter().map(|b| &b.value).min().unwrap();
                if lo > hi {
                    failures.push(format!("{p:?}"));
                }
            }
            Err(e) => failures.push(format!("{p:?}: {e}")),
        }
    }
    let bin = env!("CARGO_BIN_EXE_capax");
    let runs: [&[&str]; 3] = [
        &["curve", "c0-poly", "--b", "3", "--to", "20", "--step", "1/8"],
        &["bounds", "--domain-a", "11", "--target", "ell", "--target-b", "4", "--n", "1"],
        &["curve", "c-infinity", "--to", "12", "--svg", "/dev/stdout"],
    ];
    for args in runs {
        let out = || Command::new(bin).args(args).output().unwrap().stdout;
        if out() != out() {
            failures.push(format!("nondeterministic output for {args:?}"));
        }
    }
    outcome(failures, "weights, ech scaling, 500 reconciles, repeated CLI runs".into())
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("ellipsoid parity family", parity_family, Some(LIMIT_PARITY)),
        ("polydisc odd family", polydisc_family, Some(LIMIT_POLYDISC)),
        ("ball target, a = 2 mod 3", ball_congruence, None),
        ("odd-index Ekeland-Hofer identity", eh_odd_index, None),
        ("certificate families", certificate_families, None),
        ("closed forms agree at a = 3/2", boundary_agreement, None),
        ("four-dimensional corners", fourdim_corners, Some(LIMIT_FOURDIM)),
        ("fold/volume crossings", crossings, None),
        ("rescaled convergence", rescaled_convergence, Some(LIMIT_RESCALED)),
        ("property suites", properties, None),
    ];
    let mut all = true;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let t = start.elapsed();
        let in_time = limit.is_none_or(|l| t < l);
        let passed = o.passed && in_time;
        all &= passed;
        let budget = limit.map(|l| format!(" (limit {} s)", l.as_secs())).unwrap_or_default();
        println!(
            "{} criterion {:2} {name}: {} [{:.2} s{budget}]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t.as_secs_f64()
        );
    }
    assert!(all, "some acceptance criteria failed");
}
