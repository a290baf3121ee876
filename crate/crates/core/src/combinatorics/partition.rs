use std::fmt;
use std::str::FromStr;

use crate::{Error, Permutation, Result};

/// A partition of `[n] = {1, ..., n}` into disjoint non-empty blocks.
///
/// Always held in canonical form: elements ascend within each block and
/// blocks are ordered by their least element, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds a partition from blocks given in any order; the result is
    /// canonicalized.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("ground set must be non-empty".into()));
        }
        let mut seen = vec![false; n + 1];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::Domain("empty block".into()));
            }
            for &e in block.iter() {
                if e == 0 || e > n {
                    return Err(Error::Domain(format!("element {e} outside [1, {n}]")));
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(Error::Domain(format!("element {e} appears twice")));
                }
            }
            block.sort_unstable();
        }
        if let Some(missing) = (1..=n).find(|&e| !seen[e]) {
            return Err(Error::Domain(format!("element {missing} is not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    /// Builds a partition of `[labels.len()]` where elements `i + 1` and
    /// `k + 1` share a block iff `labels[i] == labels[k]`.
    pub fn from_labels<L: Eq + Copy>(labels: &[L]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Domain("ground set must be non-empty".into()));
        }
        let mut keys: Vec<L> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match keys.iter().position(|&k| k == l) {
                Some(b) => blocks[b].push(i + 1),
                None => {
                    keys.push(l);
                    blocks.push(vec![i + 1]);
                }
            }
        }
        Ok(Self {
            n: labels.len(),
            blocks,
        })
    }

    pub fn single_block(n: usize) -> Result<Self> {
        Self::from_blocks(n, vec![(1..=n).collect()])
    }

    pub fn singletons(n: usize) -> Result<Self> {
        Self::from_blocks(n, (1..=n).map(|e| vec![e]).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(Vec::len)
    }

    /// Restricted growth string: `labels()[e - 1]` is the index of the block
    /// holding `e`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &e in block {
                labels[e - 1] = b;
            }
        }
        labels
    }

    /// Index of the block containing `e`.
    pub fn block_of(&self, e: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&e).is_ok())
    }

    /// Restriction to `[m]`: every block is intersected with `{1, ..., m}`
    /// and empty intersections are dropped.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n {
            return Err(Error::Range(format!(
                "cannot restrict a partition of [{}] to [{m}]",
                self.n
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .copied()
                    .take_while(|&e| e <= m)
                    .collect::<Vec<_>>()
            })
            .filter(|b| !b.is_empty())
            .collect();
        Ok(Self { n: m, blocks })
    }

    /// Removes element `k` and relabels the survivors to `[n - 1]`,
    /// preserving their order.
    pub fn delete_element(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.n {
            return Err(Error::Range(format!("element {k} outside [1, {}]", self.n)));
        }
        if self.n == 1 {
            return Err(Error::Range("cannot delete the only element".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .filter(|&&e| e != k)
                    .map(|&e| if e > k { e - 1 } else { e })
                    .collect::<Vec<_>>()
            })
            .filter(|b| !b.is_empty())
            .collect();
        Self::from_blocks(self.n - 1, blocks)
    }

    /// Image of the partition under a relabeling `e -> sigma(e)`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.n() != self.n {
            return Err(Error::Domain(format!(
                "relabeling of size {} applied to a partition of [{}]",
                sigma.n(),
                self.n
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&e| sigma.apply(e)).collect())
            .collect();
        Self::from_blocks(self.n, blocks)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (k, e) in block.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses `"1 3 5|2 4"`. Input must already be canonical.
    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.trim().split('|') {
            let block = part
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad element {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if block.is_empty() {
                return Err(Error::Parse(format!("empty block in {s:?}")));
            }
            blocks.push(block);
        }
        let n = blocks.iter().map(Vec::len).sum();
        let parsed = Self::from_blocks(n, blocks.clone())
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if parsed.blocks != blocks {
            return Err(Error::Parse(format!(
                "{s:?} is not canonical (expected {parsed})"
            )));
        }
        Ok(parsed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(p("1 3 5|2 4").restrict(3).unwrap(), p("1 3|2"));
        assert_eq!(p("1 2|3").restrict(2).unwrap(), p("1 2"));
        let b = p("1 4|2|3 5");
        assert_eq!(b.restrict(5).unwrap(), b);
    }

    #[test]
    fn restrict_out_of_range() {
        assert!(matches!(p("1 2").restrict(0), Err(Error::Range(_))));
        assert!(matches!(p("1 2").restrict(3), Err(Error::Range(_))));
    }

    #[test]
    fn parser_rejects_non_canonical() {
        assert!("2 4|1 3 5".parse::<SetPartition>().is_err());
        assert!("1 3 2".parse::<SetPartition>().is_err());
        assert!("1 2|2 3".parse::<SetPartition>().is_err());
        assert!("1 3".parse::<SetPartition>().is_err());
        assert!("1||2".parse::<SetPartition>().is_err());
        assert!("1 x".parse::<SetPartition>().is_err());
    }

    #[test]
    fn display_round_trip() {
        let b = SetPartition::from_blocks(5, vec![vec![4, 2], vec![5, 3, 1]]).unwrap();
        assert_eq!(b.to_string(), "1 3 5|2 4");
        assert_eq!(p(&b.to_string()), b);
    }

    #[test]
    fn labels_are_restricted_growth() {
        assert_eq!(p("1 3 5|2 4").labels(), vec![0, 1, 0, 1, 0]);
        assert_eq!(
            SetPartition::from_labels(&[7, 3, 7, 3, 7]).unwrap(),
            p("1 3 5|2 4")
        );
    }

    #[test]
    fn delete_relabels() {
        assert_eq!(p("1 3 5|2 4").delete_element(3).unwrap(), p("1 4|2 3"));
        assert_eq!(p("1|2 3").delete_element(1).unwrap(), p("1 2"));
    }
}
