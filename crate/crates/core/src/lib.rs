//! Exchangeable random partitions built from the two-parameter Chinese
//! restaurant process, together with its balanced and even generalizations.
//!
//! The crate is split into four layers:
//!
//! * [`combinatorics`]: set partitions, permutations, integer partitions, the
//!   projection maps between them and the assembly maps that build balanced
//!   and even partitions out of group-level data.
//! * [`distributions`]: closed-form probability mass functions, evaluated
//!   exactly over the rationals or in log space.
//! * [`samplers`]: seeded sequential samplers (CRP, balanced CRP, even CRP
//!   and the two-step constructions).
//! * [`oracle`]: exhaustive enumeration, exact expansion of the seating
//!   processes, projective-consistency checks and the claims audit.

pub mod combinatorics;
pub mod distributions;
mod error;
pub mod oracle;
pub mod samplers;

pub use combinatorics::{
    GroupIndexing, IntegerPartition, ModelParams, Permutation, Rational, SetPartition,
};
pub use distributions::{ExactDist, LogWeight, ProbValue, Weight};
pub use error::{Error, Result};
pub use oracle::EnumerationBudget;
pub use samplers::{RngHandle, SeatingRule, SeatingTrace};
