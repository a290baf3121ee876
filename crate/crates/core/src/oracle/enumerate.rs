use num_traits::ToPrimitive;

use crate::combinatorics::{bell_number, factorial, is_j_balanced, is_j_even};
use crate::{Error, GroupIndexing, IntegerPartition, Permutation, Result, SetPartition};

/// Limits on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EnumerationBudget {
    /// Most objects a single enumeration may visit.
    pub max_objects: usize,
    /// Largest ground set `[n]` that may be enumerated.
    pub max_ground_set: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_objects: 1_000_000,
            max_ground_set: 10,
        }
    }
}

impl EnumerationBudget {
    /// Fails with a resource error unless a ground set of size `n` holding
    /// `count` objects fits.
    pub fn check(&self, n: usize, count: Option<usize>) -> Result<()> {
        if n > self.max_ground_set {
            return Err(Error::Resource(format!(
                "ground set of size {n} exceeds the budget of {}",
                self.max_ground_set
            )));
        }
        match count {
            Some(c) if c <= self.max_objects => Ok(()),
            _ => Err(Error::Resource(format!(
                "enumeration over [{n}] exceeds the budget of {} objects",
                self.max_objects
            ))),
        }
    }
}

/// All partitions of `[n]` in restricted-growth-string order.
pub fn enumerate_partitions(n: usize, budget: &EnumerationBudget) -> Result<Vec<SetPartition>> {
    budget.check(n, bell_number(n).to_usize())?;
    if n == 0 {
        return Err(Error::Domain("ground set must be non-empty".into()));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    let mut max = vec![0usize; n];
    loop {
        out.push(SetPartition::from_labels(&rgs)?);
        // Rightmost position that can still grow.
        let Some(i) = (1..n).rev().find(|&i| rgs[i] <= max[i - 1]) else {
            break;
        };
        rgs[i] += 1;
        max[i] = max[i - 1].max(rgs[i]);
        for k in i + 1..n {
            rgs[k] = 0;
            max[k] = max[i];
        }
    }
    Ok(out)
}

/// All permutations of `[n]` in lexicographic order of their one-line form.
pub fn enumerate_permutations(n: usize, budget: &EnumerationBudget) -> Result<Vec<Permutation>> {
    budget.check(n, factorial(n).to_usize())?;
    if n == 0 {
        return Err(Error::Domain("ground set must be non-empty".into()));
    }
    let mut out = Vec::new();
    let mut a: Vec<usize> = (1..=n).collect();
    loop {
        out.push(Permutation::new(a.clone())?);
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| a[i] < a[i + 1]) else {
            break;
        };
        let k = (i + 1..n)
            .rev()
            .find(|&k| a[k] > a[i])
            .expect("a successor exists");
        a.swap(i, k);
        a[i + 1..].reverse();
    }
    Ok(out)
}

/// All integer partitions of `n`, parts listed in decreasing lexicographic
/// order (`n`, `n-1 1`, ...).
pub fn enumerate_integer_partitions(
    n: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<IntegerPartition>> {
    if n == 0 {
        return Err(Error::Domain("cannot partition 0".into()));
    }
    let mut out = Vec::new();
    let mut parts = vec![n];
    loop {
        if out.len() == budget.max_objects {
            return Err(Error::Resource(format!(
                "integer partitions of {n} exceed the budget of {} objects",
                budget.max_objects
            )));
        }
        out.push(IntegerPartition::from_parts(&parts)?);
        // Strip trailing ones, decrement the last larger part and refill.
        let mut rem = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            rem += 1;
        }
        let Some(last) = parts.last_mut() else {
            break;
        };
        *last -= 1;
        let cap = *last;
        rem += 1;
        while rem > 0 {
            let p = rem.min(cap);
            parts.push(p);
            rem -= p;
        }
    }
    Ok(out)
}

/// The `j`-even partitions of `[nj]`, filtered from
/// [`enumerate_partitions`].
pub fn enumerate_even(n: usize, j: usize, budget: &EnumerationBudget) -> Result<Vec<SetPartition>> {
    let g = GroupIndexing::new(n, j)?;
    let mut out = Vec::new();
    for b in enumerate_partitions(g.size(), budget)? {
        if is_j_even(&b, j)? {
            out.push(b);
        }
    }
    Ok(out)
}

/// The `j`-balanced partitions of `[nj]` under the canonical typing.
pub fn enumerate_balanced(
    n: usize,
    g: &GroupIndexing,
    budget: &EnumerationBudget,
) -> Result<Vec<SetPartition>> {
    if n != g.n() {
        return Err(Error::Domain(format!(
            "n = {n} does not match the indexing with n = {}",
            g.n()
        )));
    }
    let mut out = Vec::new();
    for b in enumerate_partitions(g.size(), budget)? {
        if is_j_balanced(&b, g)? {
            out.push(b);
        }
    }
    Ok(out)
}
