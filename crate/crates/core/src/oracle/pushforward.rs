use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::enumerate::{enumerate_partitions, enumerate_permutations};
use super::EnumerationBudget;
use crate::combinatorics::{assemble_balanced, assemble_even, factorial};
use crate::distributions::two_param_partition_weight;
use crate::{
    ExactDist, GroupIndexing, ModelParams, Permutation, Rational, Result, SeatingRule, SetPartition,
};

/// For every group-level partition `pi`, how many of the equally likely
/// auxiliary draws (matchings, or permutations of `[nj]`) assemble each
/// partition of `[nj]`.
#[derive(Clone, Debug)]
pub struct AssemblyCounts {
    pub rule: SeatingRule,
    pub g: GroupIndexing,
    per_pi: Vec<(SetPartition, BTreeMap<SetPartition, u64>)>,
    draws: BigUint,
}

impl AssemblyCounts {
    /// Tallies every `(pi, auxiliary draw)` pair.
    pub fn new(rule: SeatingRule, g: GroupIndexing, budget: &EnumerationBudget) -> Result<Self> {
        let (n, j) = (g.n(), g.j());
        let parts = enumerate_partitions(n, budget)?;
        let (draws, aux): (BigUint, Vec<Vec<Permutation>>) = match rule {
            SeatingRule::Balanced => {
                let perms = enumerate_permutations(n, budget)?;
                let total = factorial(n).pow((j - 1) as u32);
                budget.check(g.size(), (&total * BigUint::from(parts.len())).to_usize())?;
                let mut tuples: Vec<Vec<Permutation>> = vec![Vec::new()];
                for _ in 1..j {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| {
                            perms.iter().map(move |s| {
                                let mut t = t.clone();
                                t.push(s.clone());
                                t
                            })
                        })
                        .collect();
                }
                (total, tuples)
            }
            SeatingRule::Even => {
                let total = factorial(g.size());
                budget.check(g.size(), (&total * BigUint::from(parts.len())).to_usize())?;
                let perms = enumerate_permutations(g.size(), budget)?;
                (total, perms.into_iter().map(|s| vec![s]).collect())
            }
        };
        let mut per_pi = Vec::with_capacity(parts.len());
        for pi in parts {
            let mut counts: BTreeMap<SetPartition, u64> = BTreeMap::new();
            for a in &aux {
                let b = match rule {
                    SeatingRule::Balanced => assemble_balanced(&pi, a, &g)?,
                    SeatingRule::Even => assemble_even(&pi, &a[0], &g)?,
                };
                *counts.entry(b).or_insert(0) += 1;
            }
            per_pi.push((pi, counts));
        }
        Ok(Self {
            rule,
            g,
            per_pi,
            draws,
        })
    }

    /// Law of the assembled partition when `pi` is a two-parameter
    /// partition at `params`.
    pub fn law(&self, params: &ModelParams) -> Result<ExactDist<SetPartition>> {
        let draws = Rational::from_integer(self.draws.clone().into());
        let mut acc: BTreeMap<SetPartition, Rational> = BTreeMap::new();
        for (pi, counts) in &self.per_pi {
            let p: Rational = two_param_partition_weight(pi, params)?;
            if p.is_zero() {
                continue;
            }
            let p = p / &draws;
            for (b, &c) in counts {
                *acc.entry(b.clone()).or_insert_with(Rational::zero) +=
                    &p * Rational::from_integer(c.into());
            }
        }
        Ok(ExactDist::from_exact(acc))
    }
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::distributions::{two_step_balanced_pmf, two_step_even_pmf};

    #[test]
    fn pushforward_matches_the_closed_forms() {
        let budget = EnumerationBudget::default();
        let p = ModelParams::ratio((1, 4), (2, 3)).unwrap();
        for (n, j) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
            let g = GroupIndexing::new(n, j).unwrap();
            for rule in [SeatingRule::Balanced, SeatingRule::Even] {
                let law = AssemblyCounts::new(rule, g, &budget)
                    .unwrap()
                    .law(&p)
                    .unwrap();
                assert!(law.total_mass().unwrap().is_one());
                for (b, v) in law.exact_entries().unwrap() {
                    let closed = match rule {
                        SeatingRule::Balanced => two_step_balanced_pmf(b, &g, &p),
                        SeatingRule::Even => two_step_even_pmf(b, &g, &p),
                    };
                    assert_eq!(closed.unwrap().exact_value().unwrap(), v, "{rule:?} {b}");
                }
            }
        }
    }
}
