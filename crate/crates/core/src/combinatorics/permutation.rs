use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, SetPartition};

/// A bijection of `[n]`, stored in one-line notation: `image()[i - 1]` is
/// `sigma(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::Domain("permutation of an empty set".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v == 0 || v > n {
                return Err(Error::Domain(format!("image value {v} outside [1, {n}]")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::Domain(format!("image value {v} repeated")));
            }
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (1..=n).collect(),
        }
    }

    /// Builds a permutation of `[n]` from disjoint cycles; unlisted elements
    /// are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n + 1];
        for cycle in cycles {
            for (i, &e) in cycle.iter().enumerate() {
                if e == 0 || e > n || std::mem::replace(&mut touched[e], true) {
                    return Err(Error::Domain(format!("bad cycle element {e}")));
                }
                image[e - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::new(image)
    }

    /// Transposition of `a` and `b` on `[n]`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::from_cycles(n, &[&[a, b]])
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { image: inv }
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::Domain(
                "composing permutations of different sizes".into(),
            ));
        }
        Ok(Self {
            image: other.image.iter().map(|&i| self.apply(i)).collect(),
        })
    }

    /// Cycles, each starting at its least element, ordered by least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut cycles = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut e = start;
            while !seen[e] {
                seen[e] = true;
                cycle.push(e);
                e = self.apply(e);
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().len()
    }

    /// The partition of `[n]` whose blocks are the cycles.
    pub fn cycle_partition(&self) -> SetPartition {
        SetPartition::from_blocks(self.n(), self.cycles())
            .expect("cycles of a permutation partition its ground set")
    }

    /// Deletes `k` from its cycle, splicing its predecessor to its successor,
    /// then relabels the survivors to `[n - 1]` preserving order.
    pub fn delete_and_repair(&self, k: usize) -> Result<Self> {
        let n = self.n();
        if n == 1 {
            return Err(Error::Underflow(n));
        }
        if k == 0 || k > n {
            return Err(Error::Range(format!("element {k} outside [1, {n}]")));
        }
        let succ = self.apply(k);
        let relabel = |e: usize| if e > k { e - 1 } else { e };
        let image = (1..=n)
            .filter(|&i| i != k)
            .map(|i| {
                let target = self.apply(i);
                relabel(if target == k { succ } else { target })
            })
            .collect();
        Ok(Self { image })
    }

    /// True iff this is a single cycle through all of `[n]`.
    pub fn is_full_cycle(&self) -> bool {
        self.num_cycles() == 1
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses one-line notation, e.g. `"2 3 1"`.
    fn from_str(s: &str) -> Result<Self> {
        let image = s
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad image value {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(image).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delete_and_repair_three_cycle() {
        let sigma = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let expected = Permutation::transposition(2, 1, 2).unwrap();
        assert_eq!(sigma.delete_and_repair(3).unwrap(), expected);
    }

    #[test]
    fn delete_and_repair_identity() {
        for n in 2..6 {
            assert_eq!(
                Permutation::identity(n).delete_and_repair(n).unwrap(),
                Permutation::identity(n - 1)
            );
        }
    }

    #[test]
    fn delete_and_repair_fixed_point() {
        // (1 3 4)(2)(5): deleting the fixed point 2 leaves (1 2 3)(4) after relabeling.
        let sigma = Permutation::from_cycles(5, &[&[1, 3, 4]]).unwrap();
        let expected = Permutation::from_cycles(4, &[&[1, 2, 3]]).unwrap();
        assert_eq!(sigma.delete_and_repair(2).unwrap(), expected);
    }

    #[test]
    fn delete_and_repair_matches_successor_formula() {
        // sigma'(sigma^{-1}(n+1)) = sigma(n+1)
        let sigma: Permutation = "3 4 1 2".parse().unwrap();
        let d = sigma.delete_and_repair(4).unwrap();
        assert_eq!(d.apply(sigma.inverse().apply(4)), sigma.apply(4));
        assert_eq!(d, "3 2 1".parse().unwrap());
    }

    #[test]
    fn delete_and_repair_underflow() {
        assert_eq!(
            Permutation::identity(1).delete_and_repair(1),
            Err(Error::Underflow(1))
        );
    }

    #[test]
    fn cycle_partition_examples() {
        let t = Permutation::transposition(3, 1, 2).unwrap();
        assert_eq!(t.cycle_partition(), "1 2|3".parse().unwrap());
        assert_eq!(
            Permutation::identity(4).cycle_partition(),
            SetPartition::singletons(4).unwrap()
        );
        let c = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        assert_eq!(c.cycle_partition(), "1 2 3".parse().unwrap());
    }

    #[test]
    fn parse_rejects_non_bijection() {
        assert!("1 1 2".parse::<Permutation>().is_err());
        assert!("0 1".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
    }
}
