use serde::Serialize;

use crate::{Error, Permutation, Result, SetPartition};

/// Ground set `[nj]` split into `n` consecutive groups of `j` units.
///
/// Group `i` is `{(i - 1) j + 1, ..., i j}` and unit `e` has type
/// `((e - 1) mod j) + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupIndexing {
    n: usize,
    j: usize,
}

impl GroupIndexing {
    pub fn new(n: usize, j: usize) -> Result<Self> {
        if n == 0 || j == 0 {
            return Err(Error::Domain(format!(
                "group indexing needs n, j >= 1 (got n={n}, j={j})"
            )));
        }
        Ok(Self { n, j })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Size of the ground set, `nj`.
    pub fn size(&self) -> usize {
        self.n * self.j
    }

    pub fn type_of(&self, e: usize) -> usize {
        (e - 1) % self.j + 1
    }

    /// 1-based index of the group holding `e`.
    pub fn group_of(&self, e: usize) -> usize {
        (e - 1) / self.j + 1
    }

    /// Units of group `i`.
    pub fn group(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        (i - 1) * self.j + 1..=i * self.j
    }

    /// Global label of the type-`k` copy of within-type index `m`.
    pub fn embed(&self, m: usize, k: usize) -> usize {
        (m - 1) * self.j + k
    }
}

/// True iff every block size of `b` is a multiple of `j`.
pub fn is_j_even(b: &SetPartition, j: usize) -> Result<bool> {
    if j == 0 || !b.n().is_multiple_of(j) {
        return Err(Error::Domain(format!("{j} does not divide n = {}", b.n())));
    }
    Ok(b.block_sizes().all(|s| s % j == 0))
}

/// True iff every block of `b` holds equally many units of each type under
/// the canonical typing of `g`.
pub fn is_j_balanced(b: &SetPartition, g: &GroupIndexing) -> Result<bool> {
    if b.n() != g.size() {
        return Err(Error::Domain(format!(
            "partition of [{}] checked against groups of size {}",
            b.n(),
            g.size()
        )));
    }
    is_j_balanced_with(b, g.j(), |e| g.type_of(e))
}

/// Balance check under an explicit typing `e -> type in 1..=j`.
pub fn is_j_balanced_with(
    b: &SetPartition,
    j: usize,
    typing: impl Fn(usize) -> usize,
) -> Result<bool> {
    if j == 0 || !b.n().is_multiple_of(j) {
        return Err(Error::Domain(format!("{j} does not divide n = {}", b.n())));
    }
    let mut per_type = vec![0usize; j];
    let mut totals = vec![0usize; j];
    for e in 1..=b.n() {
        let t = typing(e);
        if t == 0 || t > j {
            return Err(Error::Domain(format!(
                "type {t} of element {e} outside [1, {j}]"
            )));
        }
        totals[t - 1] += 1;
    }
    if totals.iter().any(|&c| c != b.n() / j) {
        return Err(Error::Domain(
            "typing does not use every type equally often".into(),
        ));
    }
    for block in b.blocks() {
        per_type.iter_mut().for_each(|c| *c = 0);
        for &e in block {
            per_type[typing(e) - 1] += 1;
        }
        if per_type.iter().any(|&c| c != per_type[0]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Assembles a balanced partition of `[nj]` from a partition `pi` of `[n]`
/// and `j - 1` matchings `sigma_2, ..., sigma_j` of `[n]`.
///
/// The type-`k` copy of index `m` is labelled `(m - 1) j + k`; block
/// `b` of `pi` becomes `{ (sigma_k(m) - 1) j + k : m in b, k = 1..j }` with
/// `sigma_1` the identity.
pub fn assemble_balanced(
    pi: &SetPartition,
    matchings: &[Permutation],
    g: &GroupIndexing,
) -> Result<SetPartition> {
    if pi.n() != g.n() {
        return Err(Error::Domain(format!(
            "partition of [{}] with {} groups",
            pi.n(),
            g.n()
        )));
    }
    if matchings.len() + 1 != g.j() {
        return Err(Error::Domain(format!(
            "{} matchings supplied, {} required",
            matchings.len(),
            g.j() - 1
        )));
    }
    if let Some(bad) = matchings.iter().find(|s| s.n() != g.n()) {
        return Err(Error::Domain(format!(
            "matching of size {} for n = {}",
            bad.n(),
            g.n()
        )));
    }
    let blocks = pi
        .blocks()
        .iter()
        .map(|block| {
            let mut out = Vec::with_capacity(block.len() * g.j());
            for &m in block {
                out.push(g.embed(m, 1));
                for (k, sigma) in matchings.iter().enumerate() {
                    out.push(g.embed(sigma.apply(m), k + 2));
                }
            }
            out
        })
        .collect();
    SetPartition::from_blocks(g.size(), blocks)
}

/// Assembles a `j`-even partition of `[nj]`: block `b` of `pi` becomes the
/// image under `sigma` of the union of the groups indexed by `b`.
pub fn assemble_even(
    pi: &SetPartition,
    sigma: &Permutation,
    g: &GroupIndexing,
) -> Result<SetPartition> {
    if pi.n() != g.n() || sigma.n() != g.size() {
        return Err(Error::Domain(format!(
            "partition of [{}] and permutation of [{}] do not fit n = {}, j = {}",
            pi.n(),
            sigma.n(),
            g.n(),
            g.j()
        )));
    }
    let blocks = pi
        .blocks()
        .iter()
        .map(|block| {
            block
                .iter()
                .flat_map(|&k| g.group(k))
                .map(|l| sigma.apply(l))
                .collect()
        })
        .collect();
    SetPartition::from_blocks(g.size(), blocks)
}
