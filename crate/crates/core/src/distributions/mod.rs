//! Closed-form probability mass functions.
//!
//! Every law has a generic `*_weight::<W>` evaluator, usable with
//! [`Rational`](crate::Rational) for exact values or [`LogWeight`] for log
//! space, and a `*_pmf` wrapper that runs both paths and returns a
//! [`ProbValue`] holding the pair.
//!
//! Two-parameter formulas contain `(theta/alpha)^{(k)}` next to a factor
//! `alpha^k` coming from the block weights; the evaluators always use the
//! product `prod_{i<k} (theta + i alpha)` instead, which is the continuous
//! extension to `alpha = 0`, and cancel the common leading `theta` against
//! the normalizer so that `theta = 0` is handled as well.

mod balanced;
mod even;
mod identity;
mod joint;
mod laws;
mod prob;
mod terms;
mod weight;

pub use balanced::{
    balanced_integer_pmf, balanced_integer_weight, balanced_partition_limit_pmf,
    balanced_partition_limit_weight, balanced_partition_pmf, balanced_partition_weight,
    two_step_balanced_pmf, two_step_balanced_weight,
};
pub(crate) use balanced::{group_level_integer_weight, group_parts};
pub use even::{
    even_integer_pmf, even_integer_weight, even_partition_limit_pmf, even_partition_limit_weight,
    even_partition_pmf, even_partition_weight, two_step_even_pmf, two_step_even_weight,
};
pub use identity::{even_identity_lhs, even_identity_rhs};
pub use joint::{
    balanced_permutation_pmf, balanced_permutation_weight, even_permutation_pair_pmf,
    even_permutation_pair_weight, even_permutation_pmf, even_permutation_weight,
    joint_balanced_pmf, joint_balanced_weight, joint_even_pmf, joint_even_weight,
};
pub use laws::{
    ewens_integer_pmf, ewens_integer_weight, ewens_partition_pmf, ewens_partition_weight,
    ewens_permutation_pmf, ewens_permutation_weight, two_param_partition_pmf,
    two_param_partition_weight,
};
pub(crate) use prob::ser_rational;
pub use prob::{DistRecord, ExactDist, ProbValue};
pub use weight::{ln_abs_rational, ln_biguint, LogWeight, Weight};

/// Generates a `*_pmf` wrapper evaluating a `*_weight` function on both the
/// exact and the log-space path.
macro_rules! dual_pmf {
    ($(#[$meta:meta])* $name:ident => $weight:ident ( $($arg:ident : $ty:ty),* $(,)? )) => {
        $(#[$meta])*
        pub fn $name($($arg: $ty),*) -> $crate::Result<$crate::ProbValue> {
            let exact = $weight::<$crate::Rational>($($arg),*)?;
            let log = $weight::<$crate::LogWeight>($($arg),*)?;
            Ok($crate::ProbValue::dual(exact, log))
        }
    };
}
pub(crate) use dual_pmf;
