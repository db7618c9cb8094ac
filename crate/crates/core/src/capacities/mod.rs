//! Capacity sequences of ellipsoids and polydiscs.
//!
//! `gk_*` are the closed forms of the higher capacities `𝔤_k`, `eh_*` the
//! Ekeland–Hofer sequences, `ech_*` the lattice sequences `N(x, y)`, and
//! [`weight_sequence`] the ball-packing weights of `E(1, a)`.

pub mod merge;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::Status;
use crate::domain::{DomainKind, ToricDomain};
use crate::rational::Rational;

pub use merge::{LatticeStream, MultiplesStream};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CapacityError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("polydisc capacity for even index {0} is not established")]
    EvenIndexNotProven(u64),
}

/// Which closed-form case produced a capacity value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaBranch {
    /// `k` for `k ≤ a`.
    IndexBelowA,
    /// `a + i` for `k = ⌈a⌉ + 2i`.
    CeilPlusEven,
    /// `⌈a⌉ + i` for `k = ⌈a⌉ + 2i + 1`.
    CeilPlusOdd,
    /// `1 + ia` for `k = 1 + 3i`, small `a`.
    ThinResidueOne,
    /// `a + ia` for `k = 2 + 3i`, small `a`.
    ThinResidueTwo,
    /// `2 + ia` for `k = 3 + 3i`, small `a`.
    ThinResidueZero,
    /// Polydisc minimum attained by `k`.
    PolyIndex,
    /// Polydisc minimum attained by `a + ⌈(k−1)/2⌉`.
    PolyShift,
}

impl FormulaBranch {
    pub fn name(self) -> &'static str {
        match self {
            FormulaBranch::IndexBelowA => "index_below_a",
            FormulaBranch::CeilPlusEven => "ceil_plus_even",
            FormulaBranch::CeilPlusOdd => "ceil_plus_odd",
            FormulaBranch::ThinResidueOne => "thin_residue_one",
            FormulaBranch::ThinResidueTwo => "thin_residue_two",
            FormulaBranch::ThinResidueZero => "thin_residue_zero",
            FormulaBranch::PolyIndex => "poly_index",
            FormulaBranch::PolyShift => "poly_shift",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityValue {
    pub value: Rational,
    pub branch: FormulaBranch,
    pub status: Status,
}

impl CapacityValue {
    fn exact(value: Rational, branch: FormulaBranch) -> Self {
        CapacityValue {
            value,
            branch,
            status: Status::Exact,
        }
    }
}

fn check_a(a: &Rational) -> Result<(), CapacityError> {
    if *a < Rational::one() {
        return Err(CapacityError::InvalidParameter(format!("a = {a} < 1")));
    }
    Ok(())
}

fn check_k(k: u64) -> Result<(), CapacityError> {
    if k == 0 {
        return Err(CapacityError::InvalidParameter("k must be at least 1".into()));
    }
    Ok(())
}

/// `𝔤_k(E(1, a))` from the residue of `k` mod 3. Valid for `1 ≤ a ≤ 3/2`.
pub fn gk_ellipsoid_thin(a: &Rational, k: u64) -> Result<CapacityValue, CapacityError> {
    check_a(a)?;
    check_k(k)?;
    if *a > Rational::new(3, 2) {
        return Err(CapacityError::InvalidParameter(format!(
            "residue formula needs a <= 3/2, got {a}"
        )));
    }
    let i = Rational::from((k - 1) / 3);
    let ia = &i * a;
    let (value, branch) = match k % 3 {
        1 => (Rational::one() + ia, FormulaBranch::ThinResidueOne),
        2 => (a + &ia, FormulaBranch::ThinResidueTwo),
        _ => (Rational::from(2) + ia, FormulaBranch::ThinResidueZero),
    };
    Ok(CapacityValue::exact(value, branch))
}

/// `𝔤_k(E(1, a))` from the parity of `k − ⌈a⌉`. Valid for `a ≥ 3/2`.
pub fn gk_ellipsoid_wide(a: &Rational, k: u64) -> Result<CapacityValue, CapacityError> {
    check_a(a)?;
    check_k(k)?;
    if *a < Rational::new(3, 2) {
        return Err(CapacityError::InvalidParameter(format!(
            "parity formula needs a >= 3/2, got {a}"
        )));
    }
    let kq = Rational::from(k);
    if kq <= *a {
        return Ok(CapacityValue::exact(kq, FormulaBranch::IndexBelowA));
    }
    let ceil = Rational::from(a.ceil());
    let offset = &kq - &ceil;
    let i = Rational::from(offset.floor().div_floor(&BigInt::from(2)));
    if offset.numer().is_even() {
        Ok(CapacityValue::exact(a + &i, FormulaBranch::CeilPlusEven))
    } else {
        Ok(CapacityValue::exact(ceil + i, FormulaBranch::CeilPlusOdd))
    }
}

/// `𝔤_k(E(1, a))` for `a ≥ 1`, `k ≥ 1`. At `a = 3/2` both closed forms apply
/// and are checked against each other.
pub fn gk_ellipsoid(a: &Rational, k: u64) -> Result<CapacityValue, CapacityError> {
    check_a(a)?;
    check_k(k)?;
    let boundary = Rational::new(3, 2);
    if *a < boundary {
        gk_ellipsoid_thin(a, k)
    } else if *a > boundary {
        gk_ellipsoid_wide(a, k)
    } else {
        let thin = gk_ellipsoid_thin(a, k)?;
        let wide = gk_ellipsoid_wide(a, k)?;
        assert_eq!(thin.value, wide.value, "closed forms disagree at a = 3/2, k = {k}");
        Ok(wide)
    }
}

/// `𝔤_k(P(1, a)) = min(k, a + ⌈(k−1)/2⌉)`. Only odd `k` is established;
/// `allow_even` returns the same formula tagged conjectural.
pub fn gk_polydisc(
    a: &Rational,
    k: u64,
    allow_even: bool,
) -> Result<CapacityValue, CapacityError> {
    check_a(a)?;
    check_k(k)?;
    let even = k.is_multiple_of(2);
    if even && !allow_even {
        return Err(CapacityError::EvenIndexNotProven(k));
    }
    let kq = Rational::from(k);
    let shift = a + Rational::from(k / 2);
    let mut out = if kq <= shift {
        CapacityValue::exact(kq, FormulaBranch::PolyIndex)
    } else {
        CapacityValue::exact(shift, FormulaBranch::PolyShift)
    };
    if even {
        out.status = Status::Conjectural;
    }
    Ok(out)
}

/// `𝔤_k` of an arbitrary toric domain through scaling: `𝔤_k(c·X) = c·𝔤_k(X)`.
pub fn gk_domain(domain: &ToricDomain, k: u64) -> Result<CapacityValue, CapacityError> {
    let (scale, unit) = domain.normalized();
    let mut v = match domain.kind {
        DomainKind::Ellipsoid => gk_ellipsoid(&unit.y, k)?,
        DomainKind::Polydisc => gk_polydisc(&unit.y, k, false)?,
    };
    v.value = v.value * scale;
    Ok(v)
}

/// Common denominator scaling: `(x·D, y·D, D)` with integer first entries.
fn integer_steps(x: &Rational, y: &Rational) -> (BigInt, BigInt, BigInt) {
    let d = x.denom().lcm(y.denom());
    let xs = (x * Rational::from(d.clone())).numer().clone();
    let ys = (y * Rational::from(d.clone())).numer().clone();
    (xs, ys, d)
}

fn check_positive(x: &Rational, y: &Rational) {
    assert!(
        x.is_positive() && y.is_positive(),
        "stream parameters must be positive"
    );
}

/// First `count` Ekeland–Hofer capacities of `E(x, y)`: the positive
/// multiples of `x` and `y` merged with multiplicity.
pub fn eh_prefix(x: &Rational, y: &Rational, count: usize) -> Vec<Rational> {
    check_positive(x, y);
    let (xs, ys, d) = integer_steps(x, y);
    MultiplesStream::new(xs, ys)
        .take(count)
        .map(|v| Rational::new(v, d.clone()))
        .collect()
}

/// `c_l^EH(E(x, y))` for `l ≥ 1`.
pub fn eh_ellipsoid(x: &Rational, y: &Rational, l: u64) -> Rational {
    assert!(l >= 1, "Ekeland–Hofer index starts at 1");
    eh_prefix(x, y, l as usize).pop().unwrap()
}

/// First `count` terms of `N(x, y)`: the values `m·x + n·y`, `m, n ≥ 0`,
/// sorted with multiplicity.
pub fn ech_n_prefix(x: &Rational, y: &Rational, count: usize) -> Vec<Rational> {
    check_positive(x, y);
    let (xs, ys, d) = integer_steps(x, y);
    LatticeStream::new(xs, ys)
        .take(count)
        .map(|v| Rational::new(v, d.clone()))
        .collect()
}

/// `N_k(x, y)`, the `(k+1)`-st smallest lattice value; `N_0 = 0`.
pub fn ech_n(x: &Rational, y: &Rational, k: u64) -> Rational {
    ech_n_prefix(x, y, k as usize + 1).pop().unwrap()
}

/// Ball-packing weights of `E(1, a)`, non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSequence {
    pub weights: Vec<Rational>,
}

impl WeightSequence {
    pub fn sum(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn sum_of_squares(&self) -> Rational {
        self.weights.iter().map(|w| w.square()).sum()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Weight sequence of `E(1, a)` by the subtractive Euclidean algorithm on
/// `(a, 1)`: take `⌊big/small⌋` copies of `small` and recurse on the
/// remainder. Integer `a` gives `a` ones.
pub fn weight_sequence(a: &Rational) -> Result<WeightSequence, CapacityError> {
    check_a(a)?;
    let mut big = a.clone();
    let mut small = Rational::one();
    let mut weights = Vec::new();
    while !small.is_zero() {
        let n = (&big / &small).floor();
        let nq = Rational::from(n.clone());
        let count = n.to_usize().expect("weight count fits in usize");
        weights.extend(std::iter::repeat_n(small.clone(), count));
        let rem = &big - &nq * &small;
        big = small;
        small = rem;
    }
    let seq = WeightSequence { weights };
    debug_assert_eq!(seq.sum_of_squares(), *a);
    debug_assert_eq!(
        seq.sum(),
        a + Rational::one() - Rational::new(1, a.denom().clone())
    );
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};
    use proptest::prelude::*;

    #[test]
    fn ellipsoid_examples() {
        assert_eq!(gk_ellipsoid(&q(4), 3).unwrap().value, q(3));
        let v = gk_ellipsoid(&q(5), 7).unwrap();
        assert_eq!((v.value, v.branch), (q(6), FormulaBranch::CeilPlusEven));
        let w = gk_ellipsoid(&frac(5, 4), 5).unwrap();
        assert_eq!((w.value, w.branch), (frac(5, 2), FormulaBranch::ThinResidueTwo));
        assert_eq!(gk_ellipsoid(&frac(3, 2), 6).unwrap().value, frac(7, 2));
        assert_eq!(gk_ellipsoid_thin(&frac(3, 2), 6).unwrap().value, frac(7, 2));
        assert!(gk_ellipsoid(&frac(1, 2), 1).is_err());
        assert!(gk_ellipsoid(&q(2), 0).is_err());
    }

    #[test]
    fn odd_index_for_integer_pairs() {
        // k = a with a − b odd: (a + b − 1)/2
        for b in 2..9i64 {
            for a in (b + 1..40).step_by(2) {
                let v = gk_ellipsoid(&q(b), a as u64).unwrap();
                assert_eq!(v.value, frac(a + b - 1, 2));
                assert_eq!(v.branch, FormulaBranch::CeilPlusOdd);
            }
        }
    }

    #[test]
    fn boundary_agreement() {
        let a = frac(3, 2);
        for k in 1..=200 {
            assert_eq!(
                gk_ellipsoid_thin(&a, k).unwrap().value,
                gk_ellipsoid_wide(&a, k).unwrap().value
            );
        }
    }

    #[test]
    fn polydisc_examples() {
        assert_eq!(gk_polydisc(&q(2), 5, false).unwrap().value, q(4));
        assert_eq!(gk_polydisc(&q(3), 7, false).unwrap().value, q(6));
        assert_eq!(gk_polydisc(&q(1), 1, false).unwrap().value, q(1));
        assert_eq!(
            gk_polydisc(&q(1), 4, false),
            Err(CapacityError::EvenIndexNotProven(4))
        );
        let even = gk_polydisc(&q(1), 4, true).unwrap();
        assert_eq!(even.status, Status::Conjectural);
        assert_eq!(even.value, q(3));
    }

    #[test]
    fn domain_scaling() {
        let d = ToricDomain::ellipsoid(q(2), q(10)).unwrap();
        assert_eq!(gk_domain(&d, 7).unwrap().value, q(12));
        let p = ToricDomain::polydisc(q(3), q(3)).unwrap();
        assert_eq!(gk_domain(&p, 5).unwrap().value, q(9));
    }

    #[test]
    fn eh_examples() {
        assert_eq!(eh_ellipsoid(&q(1), &q(1), 3), q(2));
        assert_eq!(eh_ellipsoid(&q(1), &q(6), 13), q(12));
        assert_eq!(eh_ellipsoid(&q(1), &q(3), 5), q(4));
        assert_eq!(eh_ellipsoid(&q(1), &frac(5, 3), 7), q(5));
    }

    #[test]
    fn ech_examples() {
        assert_eq!(ech_n(&q(1), &q(1), 0), q(0));
        assert_eq!(ech_n(&q(1), &q(1), 4), q(2));
        assert_eq!(ech_n(&q(1), &q(2), 3), q(2));
        assert_eq!(
            ech_n_prefix(&q(1), &q(1), 5),
            vec![q(0), q(1), q(1), q(2), q(2)]
        );
        assert_eq!(
            ech_n_prefix(&q(1), &q(4), 6),
            vec![q(0), q(1), q(2), q(3), q(4), q(4)]
        );
        assert_eq!(ech_n(&frac(1, 2), &frac(1, 3), 3), frac(2, 3));
    }

    #[test]
    fn ech_unit_closed_form() {
        let prefix = ech_n_prefix(&q(1), &q(1), 300);
        let expected: Vec<Rational> = (0..30i64)
            .flat_map(|m| std::iter::repeat_n(q(m), m as usize + 1))
            .take(300)
            .collect();
        assert_eq!(prefix, expected);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_sequence(&q(3)).unwrap().weights, vec![q(1); 3]);
        assert_eq!(weight_sequence(&q(1)).unwrap().weights, vec![q(1)]);
        assert_eq!(
            weight_sequence(&frac(5, 2)).unwrap().weights,
            vec![q(1), q(1), frac(1, 2), frac(1, 2)]
        );
        assert!(weight_sequence(&frac(1, 3)).is_err());
    }

    proptest! {
        #[test]
        fn weights_identities(p in 1i64..400, qd in 1i64..20) {
            prop_assume!(p >= qd);
            let a = frac(p, qd);
            let w = weight_sequence(&a).unwrap();
            prop_assert_eq!(w.sum_of_squares(), a.clone());
            prop_assert_eq!(w.sum(), &a + q(1) - Rational::from(a.denom().clone()).recip());
            prop_assert!(w.weights.windows(2).all(|p| p[0] >= p[1]));
        }

        #[test]
        fn ech_scales(x in 1i64..7, y in 1i64..7, cn in 1i64..9, cd in 1i64..9, k in 0u64..60) {
            let c = frac(cn, cd);
            let (x, y) = (q(x), q(y));
            prop_assert_eq!(ech_n(&(&c * &x), &(&c * &y), k), &c * ech_n(&x, &y, k));
        }

        #[test]
        fn sequences_monotone(x in 1i64..9, y in 1i64..9, d in 1i64..5) {
            let e = eh_prefix(&q(x), &frac(y, d), 80);
            prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
            let n = ech_n_prefix(&q(x), &frac(y, d), 80);
            prop_assert!(n.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn gk_monotone_in_domain(n1 in 4i64..64, n2 in 4i64..64, k in 1u64..40) {
            let (a1, a2) = (frac(n1.min(n2), 4), frac(n1.max(n2), 4));
            prop_assert!(gk_ellipsoid(&a1, k).unwrap().value <= gk_ellipsoid(&a2, k).unwrap().value);
        }
    }
}
