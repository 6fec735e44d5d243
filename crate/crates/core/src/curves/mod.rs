//! Genus-one curves attached to coefficient tuples.

pub mod backsub;
pub mod catalog;
pub mod delta;
pub mod family;
pub mod local;
pub mod quartic;
pub mod rank0;
pub mod relation;
pub mod torsion;

use thiserror::Error;

use crate::arith::ArithError;

pub use backsub::{backsubstitute, BackSubstitution};
pub use delta::delta_candidates;
pub use family::{CurveFamily, LinearFactor, QuadraticFactor};
pub use catalog::{by_name, catalog, catalog_fixture_records, jinv_check, spec_for, FamilySpec, JCheck, TabulatedCase};
pub use local::{is_qp_square, local_solubility, LocalPrime, Place};
pub use quartic::{neg_delta_map, GenusOneQuartic, Poly, QuarticInvariants, WeierstrassModel};
pub use rank0::{
    quadruple_keys, quadruple_quartic, rank0_eliminate_tuple, rank0_points, realizations, QuadrupleVerdict, Rank0Cache,
    Rank0Outcome, RankZeroEnumeration, SearchOptions,
};
pub use relation::{pivot_system, TernaryRelation};
pub use torsion::{torsion_bound, torsion_order, RationalCurve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("coefficients from different fields")]
    FieldMismatch,
    #[error("degenerate quartic: {0}")]
    Degenerate(String),
    #[error("singular curve")]
    Singular,
    #[error("malformed curve key {0:?}")]
    BadKey(String),
    #[error("the negation map needs the Gaussian field")]
    NeedsGaussian,
    #[error("relation for term {m} does not factor as required: {why}")]
    BadFamily { m: usize, why: String },
    #[error("curve over Q({0}) where a rational curve is required")]
    NotRational(i64),
    #[error("too few good primes below {0} for a torsion bound")]
    TooFewPrimes(u64),
    #[error("no fixture answer for {key} ({question})")]
    MissingFixture { key: String, question: String },
    #[error("oracle: {0}")]
    Oracle(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
