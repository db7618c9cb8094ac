//! Exact computation of capacity sequences and embedding-function bounds for
//! four-dimensional ellipsoids and polydiscs, with stabilized variants.
//!
//! Every value is an exact [`Rational`] or a quadratic surd [`Real`]; nothing
//! is decided by floating point.

#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod bounds;
pub mod capacities;
pub mod certify;
pub mod curve;
pub mod domain;
pub mod fourdim;
pub mod rational;
pub mod rescaled;
pub mod surd;

pub use bounds::{
    reconcile, Bound, BoundReport, BoundsError, Direction, Provenance, ReconcileError,
    ReconcileOptions, TheoremId, TheoremValue, Verdict,
};
pub use capacities::{CapacityError, CapacityValue, FormulaBranch, WeightSequence};
pub use certify::{BetaWord, Certificate, CertifyError};
pub use curve::{curve_max, CurveError, CurveValue, PiecewiseCurve, Segment, SegmentKind, Status};
pub use domain::{DomainError, DomainKind, EmbeddingProblem, ToricDomain};
pub use fourdim::{C0Value, FourDimError};
pub use rational::{ParseRationalError, Rational};
pub use surd::{rational_between, sqrt_compare, Real, SqrtValue};
