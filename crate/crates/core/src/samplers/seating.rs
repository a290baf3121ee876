//! One arrival step of the balanced and even seating plans.
//!
//! The first `nj` units sit at tables (`labels[u - 1]` is the table of unit
//! `u`). When group `n + 1` arrives, each unit `nj + i`, `i = 2..j`, picks a
//! unit and trades places with it: the arriver takes the seat, the picked
//! unit takes the arriver's place in the group. The group then sits down
//! together at one table.

use serde::Serialize;

use crate::{Error, Rational, Result};

/// Which displacement rule the seating plan uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeatingRule {
    /// Unit `nj + i` picks uniformly among the type-`i` units
    /// `i, j + i, ..., nj + i` (itself included).
    Balanced,
    /// Unit `nj + i` picks uniformly among all earlier units
    /// `1, ..., nj + i - 1`.
    Even,
}

impl SeatingRule {
    /// Units that unit `nj + i` may pick, `i >= 2`.
    pub fn candidates(self, n: usize, j: usize, i: usize) -> Vec<usize> {
        match self {
            SeatingRule::Balanced => (0..=n).map(|m| m * j + i).collect(),
            SeatingRule::Even => (1..n * j + i).collect(),
        }
    }

    /// Number of candidates for unit `nj + i`.
    pub fn num_candidates(self, n: usize, j: usize, i: usize) -> usize {
        match self {
            SeatingRule::Balanced => n + 1,
            SeatingRule::Even => n * j + i - 1,
        }
    }
}

/// Seating of the first `nj` units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SeatingState {
    pub(crate) j: usize,
    pub(crate) labels: Vec<usize>,
    pub(crate) sizes: Vec<usize>,
}

impl SeatingState {
    /// The first group, seated at a single table.
    pub(crate) fn first(j: usize) -> Self {
        Self {
            j,
            labels: vec![0; j],
            sizes: vec![j],
        }
    }

    pub(crate) fn from_labels(j: usize, labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        let mut sizes = vec![0; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        Self { j, labels, sizes }
    }

    pub(crate) fn groups(&self) -> usize {
        self.labels.len() / self.j
    }

    /// Seats group `n + 1` after the displacement `picks` (one per unit
    /// `nj + 2, ..., nj + j`) at `table`, or at a new table for `None`.
    pub(crate) fn seat(
        &mut self,
        rule: SeatingRule,
        picks: &[usize],
        table: Option<usize>,
    ) -> Result<()> {
        let (n, j) = (self.groups(), self.j);
        if picks.len() + 1 != j {
            return Err(Error::Domain(format!(
                "{} displacement picks for j = {j}",
                picks.len()
            )));
        }
        let base = n * j;
        let mut pos: Vec<Option<usize>> = self.labels.iter().copied().map(Some).collect();
        pos.resize(base + j, None);
        for (idx, &p) in picks.iter().enumerate() {
            let i = idx + 2;
            let ok = match rule {
                SeatingRule::Balanced => p >= 1 && p <= base + i && (p - 1) % j + 1 == i,
                SeatingRule::Even => p >= 1 && p < base + i,
            };
            if !ok {
                return Err(Error::Domain(format!(
                    "unit {} cannot pick unit {p}",
                    base + i
                )));
            }
            pos.swap(base + i - 1, p - 1);
        }
        let t = match table {
            Some(t) if t < self.sizes.len() => t,
            Some(t) => {
                return Err(Error::Domain(format!(
                    "no table {t} among {}",
                    self.sizes.len()
                )))
            }
            None => {
                self.sizes.push(0);
                self.sizes.len() - 1
            }
        };
        self.sizes[t] += j;
        self.labels = pos.into_iter().map(|p| p.unwrap_or(t)).collect();
        Ok(())
    }
}

/// Exact seating weights `#b - alpha` (join) and `theta + alpha k` (open),
/// to be normalized by `size + theta`.
pub(crate) fn exact_join(alpha: &Rational, size: usize) -> Rational {
    Rational::from_integer(size.into()) - alpha
}

pub(crate) fn exact_open(alpha: &Rational, theta: &Rational, k: usize) -> Rational {
    theta + alpha * Rational::from_integer(k.into())
}
