//! Exact computation of Seshadri constants and Seshadri functions on
//! principally polarized abelian surfaces with real multiplication.
//!
//! The Néron–Severi lattice of such a surface has rank two; fixing the basis
//! (L₀, L∞) given by the endomorphism ring Z[√e] or Z[½+½√e], every ample
//! ray is represented by a point L_t = L₀ + t·L∞ of a bounded interval.
//! Each rational point λ of that interval with √(L_λ²) irrational carries a
//! Pell bound: a linear function that beats the general upper bound √(L_t²)
//! on an explicit interval around λ. Seshadri constants are exact minima of
//! finitely many such bounds, and the whole Seshadri function is assembled
//! from certified bounds, all in exact arithmetic over Q(√e).
//!
//! No floating point is used in any computational path; `f64` appears only
//! in optional human-readable renderings.

pub mod bounds;
pub mod envelope;
pub mod epsilon;
pub mod error;
pub mod farey;
pub mod lattice;
pub mod pell;
pub mod rat;
pub mod scan;
pub mod surd;
pub mod symmetry;

pub use bounds::{candidate_set, pell_bound, qbound_from_length, Candidate, PellBound, SubmaxInterval};
pub use envelope::{sample_function, segment_csv_row, Segment, SEGMENT_CSV_HEADER};
pub use epsilon::{
    certify_curve, epsilon, epsilon_class, epsilon_irrational, submax_curves_at, CurveCertificate,
    CurveClassOption, EpsilonKind, EpsilonValue, SeshadriResult,
};
pub use error::{Error, Result};
pub use lattice::{normalize, primitive_and_denominator, BundleClass, OrderSpec, RingCase};
pub use pell::{pell1, pell4, PellSolution};
pub use rat::Rat;
pub use scan::{
    check_en, classify_e, guaranteed_single, has_two_submax_witness, scan_range,
    verify_witness_pair, witness_at, EClassification, TwoCurveWitness,
};
pub use surd::{cmp_rat_sqrt, SqrtRat, Surd, SurdOp};
pub use symmetry::{
    apply_isometry, apply_word, fundamental_interval, generators, principal_polarizations,
    reduce_to_fundamental, FundamentalInterval, GenStep, IsometryMatrix,
};
