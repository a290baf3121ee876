use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, SetPartition};

/// An integer partition of `n` as a multiplicity vector: `multiplicity(j)`
/// is the number of parts equal to `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerPartition {
    mult: Vec<usize>,
}

impl IntegerPartition {
    /// `mult[j - 1]` is the multiplicity of part `j`; `n` is implied by
    /// `sum j * mult[j - 1]` and the vector is padded or trimmed to length `n`.
    pub fn from_multiplicities(mut mult: Vec<usize>) -> Result<Self> {
        let n: usize = mult.iter().enumerate().map(|(i, &m)| (i + 1) * m).sum();
        if n == 0 {
            return Err(Error::Domain("integer partition of zero".into()));
        }
        mult.resize(n, 0);
        Ok(Self { mult })
    }

    pub fn from_parts(parts: &[usize]) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Domain("parts must be positive".into()));
        }
        let n: usize = parts.iter().sum();
        let mut mult = vec![0; n];
        for &p in parts {
            mult[p - 1] += 1;
        }
        Self::from_multiplicities(mult)
    }

    /// The integer partition induced by block sizes.
    pub fn of_blocks(b: &SetPartition) -> Self {
        let mut mult = vec![0; b.n()];
        for s in b.block_sizes() {
            mult[s - 1] += 1;
        }
        Self { mult }
    }

    pub fn n(&self) -> usize {
        self.mult.len()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.mult
    }

    /// Multiplicity of part `j` (zero outside `1..=n`).
    pub fn multiplicity(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.mult.get(j - 1).copied().unwrap_or(0)
        }
    }

    pub fn num_parts(&self) -> usize {
        self.mult.iter().sum()
    }

    /// Parts in descending order.
    pub fn parts(&self) -> Vec<usize> {
        let mut parts = Vec::with_capacity(self.num_parts());
        for (i, &m) in self.mult.iter().enumerate().rev() {
            parts.extend(std::iter::repeat_n(i + 1, m));
        }
        parts
    }

    /// For a partition of `nj` whose parts are all multiples of `j`, the
    /// partition of `n` obtained by dividing every part by `j`.
    pub fn divide_parts(&self, j: usize) -> Result<Self> {
        if j == 0 || !self.n().is_multiple_of(j) {
            return Err(Error::Domain(format!("{j} does not divide {}", self.n())));
        }
        if let Some(bad) = self.parts().into_iter().find(|p| p % j != 0) {
            return Err(Error::Domain(format!(
                "part {bad} is not a multiple of {j}"
            )));
        }
        let parts: Vec<usize> = self.parts().into_iter().map(|p| p / j).collect();
        Self::from_parts(&parts)
    }

    /// Every part multiplied by `j`.
    pub fn scale_parts(&self, j: usize) -> Result<Self> {
        let parts: Vec<usize> = self.parts().into_iter().map(|p| p * j).collect();
        Self::from_parts(&parts)
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for IntegerPartition {
    type Err = Error;

    /// Parses a whitespace-separated list of parts, e.g. `"3 1 1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(&parts).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }
}
