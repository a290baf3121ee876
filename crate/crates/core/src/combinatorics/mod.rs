//! Canonical combinatorial objects and the maps between them.

mod counting;
mod groups;
mod integer_partition;
mod params;
mod partition;
mod permutation;

pub use counting::{
    bell_number, count_balanced_for, count_even_for, count_permutations_for,
    count_set_partitions_for, factorial, gamma_int, neg_rising_block_factor, rising_factorial,
};
pub use groups::{
    assemble_balanced, assemble_even, is_j_balanced, is_j_balanced_with, is_j_even, GroupIndexing,
};
pub use integer_partition::IntegerPartition;
pub use params::ModelParams;
pub use partition::SetPartition;
pub use permutation::Permutation;

/// Exact rational numbers over arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

pub(crate) fn parse_rational(s: &str) -> crate::Result<Rational> {
    use num_bigint::BigInt;
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| crate::Error::Parse(format!("not a rational literal: {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den == BigInt::from(0) {
                return Err(crate::Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(p)?, den))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Parses `"p/q"` or an integer literal into an exact rational.
pub fn rational_from_str(s: &str) -> crate::Result<Rational> {
    parse_rational(s)
}
