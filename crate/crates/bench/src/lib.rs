//! Shared fixtures for the engine benchmarks.

use capax::{DomainKind, EmbeddingProblem, Rational};

/// A fixed mix of stable and four-dimensional problems.
pub fn problems() -> Vec<(&'static str, EmbeddingProblem)> {
    let p = |a: i64, kind, b: Rational, n| EmbeddingProblem::standard(Rational::from(a), kind, b, n).unwrap();
    vec![
        ("ell_a25_b4_n1", p(25, DomainKind::Ellipsoid, Rational::from(4), 1)),
        ("poly_a31_b5/2_n1", p(31, DomainKind::Polydisc, Rational::new(5, 2), 1)),
        ("ell_a9_b2_n0", p(9, DomainKind::Ellipsoid, Rational::from(2), 0)),
    ]
}

/// Grid spacing used by curve sweeps.
pub fn step() -> Rational {
    Rational::new(1, 8)
}
