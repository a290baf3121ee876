use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::enumerate::{
    enumerate_balanced, enumerate_even, enumerate_integer_partitions, enumerate_partitions,
    enumerate_permutations,
};
use super::EnumerationBudget;
use crate::distributions::{
    balanced_integer_weight, balanced_partition_limit_weight, balanced_partition_weight,
    even_integer_weight, even_partition_limit_weight, even_partition_weight, ewens_integer_weight,
    ewens_partition_weight, two_param_partition_weight, two_step_balanced_weight,
    two_step_even_weight,
};
use crate::{
    Error, GroupIndexing, IntegerPartition, ModelParams, Permutation, Rational, Result,
    SetPartition,
};

/// The laws on set partitions, addressed uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionLaw {
    /// Ewens law on `[n]`.
    Ewens,
    /// Two-parameter law on `[n]`.
    TwoParam,
    /// Balanced CRP law on `[nj]`.
    Balanced,
    /// Limit of the balanced law as `alpha = -kappa -> 0`.
    BalancedLimit,
    /// Assembled law of the two-step balanced construction.
    TwoStepBalanced,
    /// Even CRP law on `[nj]`.
    Even,
    /// Limit of the even law as `alpha = -kappa -> 0`.
    EvenLimit,
    /// Assembled law of the two-step even construction.
    TwoStepEven,
}

impl PartitionLaw {
    pub const ALL: [PartitionLaw; 8] = [
        PartitionLaw::Ewens,
        PartitionLaw::TwoParam,
        PartitionLaw::Balanced,
        PartitionLaw::BalancedLimit,
        PartitionLaw::TwoStepBalanced,
        PartitionLaw::Even,
        PartitionLaw::EvenLimit,
        PartitionLaw::TwoStepEven,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PartitionLaw::Ewens => "ewens",
            PartitionLaw::TwoParam => "two-param",
            PartitionLaw::Balanced => "balanced",
            PartitionLaw::BalancedLimit => "balanced-limit",
            PartitionLaw::TwoStepBalanced => "two-step-balanced",
            PartitionLaw::Even => "even",
            PartitionLaw::EvenLimit => "even-limit",
            PartitionLaw::TwoStepEven => "two-step-even",
        }
    }

    /// Whether the law lives on `[nj]` rather than `[n]`.
    pub fn is_grouped(self) -> bool {
        !matches!(self, PartitionLaw::Ewens | PartitionLaw::TwoParam)
    }

    pub fn is_balanced_class(self) -> bool {
        matches!(
            self,
            PartitionLaw::Balanced | PartitionLaw::BalancedLimit | PartitionLaw::TwoStepBalanced
        )
    }

    /// Whether the law takes a one-parameter (Ewens) model.
    pub fn is_one_parameter(self) -> bool {
        matches!(
            self,
            PartitionLaw::Ewens | PartitionLaw::BalancedLimit | PartitionLaw::EvenLimit
        )
    }

    /// Size of the ground set.
    pub fn ground(self, n: usize, j: usize) -> usize {
        if self.is_grouped() {
            n * j
        } else {
            n
        }
    }

    /// Every partition of the law's class, in restricted-growth order.
    pub fn support(
        self,
        n: usize,
        j: usize,
        budget: &EnumerationBudget,
    ) -> Result<Vec<SetPartition>> {
        if !self.is_grouped() {
            enumerate_partitions(n, budget)
        } else if self.is_balanced_class() {
            enumerate_balanced(n, &GroupIndexing::new(n, j)?, budget)
        } else {
            enumerate_even(n, j, budget)
        }
    }

    /// Exact probability of `b`.
    pub fn exact(
        self,
        b: &SetPartition,
        n: usize,
        j: usize,
        params: &ModelParams,
    ) -> Result<Rational> {
        if !self.is_grouped() {
            if b.n() != n {
                return Err(Error::Domain(format!(
                    "partition of [{}] for n = {n}",
                    b.n()
                )));
            }
            return match self {
                PartitionLaw::Ewens => ewens_partition_weight(b, params),
                _ => two_param_partition_weight(b, params),
            };
        }
        let g = GroupIndexing::new(n, j)?;
        match self {
            PartitionLaw::Balanced => balanced_partition_weight(b, &g, params),
            PartitionLaw::BalancedLimit => balanced_partition_limit_weight(b, &g, params),
            PartitionLaw::TwoStepBalanced => two_step_balanced_weight(b, &g, params),
            PartitionLaw::Even => even_partition_weight(b, &g, params),
            PartitionLaw::EvenLimit => even_partition_limit_weight(b, &g, params),
            PartitionLaw::TwoStepEven => two_step_even_weight(b, &g, params),
            PartitionLaw::Ewens | PartitionLaw::TwoParam => unreachable!(),
        }
    }

    /// The full exact law over the support.
    pub fn distribution(
        self,
        n: usize,
        j: usize,
        params: &ModelParams,
        budget: &EnumerationBudget,
    ) -> Result<crate::ExactDist<SetPartition>> {
        let support = self.support(n, j, budget)?;
        let mut entries = Vec::with_capacity(support.len());
        for b in support {
            let p = self.exact(&b, n, j, params)?;
            entries.push((b, p));
        }
        Ok(crate::ExactDist::from_exact(entries))
    }

    /// The relabelings the law must be invariant under: all of `S_{[nj]}`,
    /// or the type-preserving ones (permute within types, then permute the
    /// types) for balanced laws.
    pub fn relabelings(
        self,
        n: usize,
        j: usize,
        budget: &EnumerationBudget,
    ) -> Result<Vec<Permutation>> {
        if !self.is_balanced_class() {
            return enumerate_permutations(self.ground(n, j), budget);
        }
        let g = GroupIndexing::new(n, j)?;
        let within = enumerate_permutations(n, budget)?;
        let types = enumerate_permutations(j, budget)?;
        let total = within
            .len()
            .checked_pow(j as u32)
            .and_then(|w| w.checked_mul(types.len()));
        budget.check(g.size(), total)?;
        let mut choices: Vec<Vec<&Permutation>> = vec![Vec::new()];
        for _ in 0..j {
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    within.iter().map(move |s| {
                        let mut c = c.clone();
                        c.push(s);
                        c
                    })
                })
                .collect();
        }
        let mut out = Vec::with_capacity(choices.len() * types.len());
        for c in &choices {
            for tau in &types {
                let image = (1..=g.size())
                    .map(|e| {
                        let (m, k) = (g.group_of(e), g.type_of(e));
                        g.embed(c[k - 1].apply(m), tau.apply(k))
                    })
                    .collect();
                out.push(Permutation::new(image)?);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PartitionLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PartitionLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PartitionLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown partition law {s:?}")))
    }
}

/// The laws on integer partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegerLaw {
    /// Ewens sampling formula on integer partitions of `n`.
    Ewens,
    /// Block sizes of balanced partitions of `[nj]`.
    Balanced,
    /// Block sizes of even partitions of `[nj]`.
    Even,
}

impl IntegerLaw {
    pub const ALL: [IntegerLaw; 3] = [IntegerLaw::Ewens, IntegerLaw::Balanced, IntegerLaw::Even];

    pub fn name(self) -> &'static str {
        match self {
            IntegerLaw::Ewens => "ewens-integer",
            IntegerLaw::Balanced => "balanced-integer",
            IntegerLaw::Even => "even-integer",
        }
    }

    /// Integer partitions of `n` (Ewens) or of `nj` into multiples of `j`.
    pub fn support(
        self,
        n: usize,
        j: usize,
        budget: &EnumerationBudget,
    ) -> Result<Vec<IntegerPartition>> {
        let base = enumerate_integer_partitions(n, budget)?;
        match self {
            IntegerLaw::Ewens => Ok(base),
            _ => base.iter().map(|m| m.scale_parts(j)).collect(),
        }
    }

    pub fn exact(self, m: &IntegerPartition, j: usize, params: &ModelParams) -> Result<Rational> {
        match self {
            IntegerLaw::Ewens => ewens_integer_weight(m, params),
            IntegerLaw::Balanced => balanced_integer_weight(m, j, params),
            IntegerLaw::Even => even_integer_weight(m, j, params),
        }
    }
}

impl fmt::Display for IntegerLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of an exhaustive exchangeability check.
#[derive(Clone, Debug, Serialize)]
pub struct ExchangeabilityReport {
    pub law: PartitionLaw,
    pub n: usize,
    pub j: usize,
    pub objects: usize,
    pub group_size: usize,
    pub violations: usize,
    pub passed: bool,
}

/// Checks `p(relabel(b)) = p(b)` for every `b` in the support and every
/// relabeling in the law's group.
pub fn exchangeability_check(
    law: PartitionLaw,
    n: usize,
    j: usize,
    params: &ModelParams,
    budget: &EnumerationBudget,
) -> Result<ExchangeabilityReport> {
    let mut values: BTreeMap<SetPartition, Rational> = BTreeMap::new();
    for b in law.support(n, j, budget)? {
        let p = law.exact(&b, n, j, params)?;
        values.insert(b, p);
    }
    let group = law.relabelings(n, j, budget)?;
    let mut violations = 0;
    for (b, p) in &values {
        for sigma in &group {
            match values.get(&b.relabel(sigma)?) {
                Some(q) if q == p => {}
                _ => violations += 1,
            }
        }
    }
    Ok(ExchangeabilityReport {
        law,
        n,
        j,
        objects: values.len(),
        group_size: group.len(),
        violations,
        passed: violations == 0,
    })
}

/// Total mass of a partition law over its enumerated support.
pub fn partition_mass(
    law: PartitionLaw,
    n: usize,
    j: usize,
    params: &ModelParams,
    budget: &EnumerationBudget,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for b in law.support(n, j, budget)? {
        total += law.exact(&b, n, j, params)?;
    }
    Ok(total)
}

/// Total mass of an integer-partition law over its enumerated support.
pub fn integer_mass(
    law: IntegerLaw,
    n: usize,
    j: usize,
    params: &ModelParams,
    budget: &EnumerationBudget,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for m in law.support(n, j, budget)? {
        total += law.exact(&m, j, params)?;
    }
    Ok(total)
}
