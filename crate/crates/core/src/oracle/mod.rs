//! Exhaustive, exact ground truth.
//!
//! Everything here runs over the rationals: supports are enumerated, the
//! seating plans are expanded choice by choice, and laws are compared by
//! exact total variation. Floating point enters only through the
//! chi-square tail of [`empirical_vs_exact`].

mod audit;
mod compare;
mod consistency;
mod enumerate;
mod laws;
mod pushforward;
mod seating_tree;
mod suites;

pub use audit::{
    claims_audit, AuditGrid, AuditReport, ClaimRecord, Comparison, CrossCheck, ExactValue,
    NamedValue, Quantity, ValueRow, Verdict,
};
pub use compare::{
    conditioned_distribution, empirical_counts_vs_exact, empirical_vs_exact, total_variation,
    total_variation_f64, EmpiricalReport, FrequencyRow,
};
pub use consistency::{
    consistency_check, ConsistencyReport, JointBalancedFamily, JointEvenFamily, Mismatch,
    PartitionFamily, PermutationFamily, ProjectiveFamily, Tagged,
};
pub use enumerate::{
    enumerate_balanced, enumerate_even, enumerate_integer_partitions, enumerate_partitions,
    enumerate_permutations, EnumerationBudget,
};
pub use laws::{
    exchangeability_check, integer_mass, partition_mass, ExchangeabilityReport, IntegerLaw,
    PartitionLaw,
};
pub use pushforward::AssemblyCounts;
pub use seating_tree::seating_tree_exact;
pub use suites::{
    consistency_suite, identity_suite, normalization_suite, run_suite, sampler_suite,
    sampler_target, seating_params, seating_tree_suite, tally, CheckRecord, Suite, SuiteReport,
    VerifyConfig,
};

use crate::{ModelParams, Rational};

/// The default parameter grid: `(1/2, 1)`, `(0, 1)` and
/// `alpha = -1/2, theta = 3/2` (`kappa = 1/2, m = 3`).
pub fn default_params() -> Vec<ModelParams> {
    vec![
        ModelParams::ratio((1, 2), (1, 1)).expect("valid"),
        ModelParams::ratio((0, 1), (1, 1)).expect("valid"),
        ModelParams::negative_kappa(Rational::new(1.into(), 2.into()), 3).expect("valid"),
    ]
}
