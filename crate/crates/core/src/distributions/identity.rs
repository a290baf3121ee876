//! The rising-factorial identity over `k`-even partitions.

use num_traits::{One, Zero};

use super::terms::int;
use crate::combinatorics::{factorial, gamma_int, rising_factorial};
use crate::oracle::{enumerate_even, EnumerationBudget};
use crate::{Rational, Result};

/// `1/(nk)! sum_{B k-even} alpha^{#B} prod_b Gamma(#b)`, summed by
/// enumerating the `k`-even partitions of `[nk]`.
pub fn even_identity_lhs(
    n: usize,
    k: usize,
    alpha: &Rational,
    budget: &EnumerationBudget,
) -> Result<Rational> {
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut total = Rational::zero();
    for b in enumerate_even(n, k, budget)? {
        let mut term = Rational::one();
        for s in b.block_sizes() {
            term *= alpha * Rational::from_integer(gamma_int(s).into());
        }
        total += term;
    }
    Ok(total / Rational::from_integer(factorial(n * k).into()))
}

/// `(alpha/k)^{(n)} / n!`.
pub fn even_identity_rhs(n: usize, k: usize, alpha: &Rational) -> Rational {
    rising_factorial(&(alpha / int(k)), n) / Rational::from_integer(factorial(n).into())
}
