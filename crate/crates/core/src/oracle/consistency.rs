use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{enumerate_partitions, enumerate_permutations};
use super::EnumerationBudget;
use crate::distributions::{
    ewens_partition_weight, ewens_permutation_weight, joint_balanced_weight, joint_even_weight,
    two_param_partition_weight,
};
use crate::{Error, GroupIndexing, ModelParams, Permutation, Rational, Result, SetPartition};

/// A family of laws `mu_n` on finite spaces with projections from size
/// `n + 1` to size `n`.
pub trait ProjectiveFamily: Sync {
    type Object: Clone + Ord + fmt::Display + Send + Sync;

    fn name(&self) -> String;
    /// The whole space at size `n`.
    fn objects(&self, n: usize, budget: &EnumerationBudget) -> Result<Vec<Self::Object>>;
    fn pmf(&self, n: usize, x: &Self::Object) -> Result<Rational>;
    /// Projection of an object of size `n + 1` down to size `n`.
    fn project(&self, n: usize, x: &Self::Object) -> Result<Self::Object>;
}

/// An object at which the pushed-forward law disagrees with the family.
#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub object: String,
    pub expected: String,
    pub marginal: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub family: String,
    pub n: usize,
    pub objects: usize,
    pub preimages: usize,
    pub mismatches: Vec<Mismatch>,
    pub passed: bool,
}

/// Checks that `mu_{n+1}` pushed forward by the projection is exactly
/// `mu_n`, object by object.
pub fn consistency_check<F: ProjectiveFamily>(
    family: &F,
    n: usize,
    budget: &EnumerationBudget,
) -> Result<ConsistencyReport> {
    if n == 0 {
        return Err(Error::Domain("consistency needs n >= 1".into()));
    }
    let larger = family.objects(n + 1, budget)?;
    let marginal = larger
        .par_chunks(1024)
        .map(|chunk| -> Result<BTreeMap<F::Object, Rational>> {
            let mut acc = BTreeMap::new();
            for x in chunk {
                let p = family.pmf(n + 1, x)?;
                *acc.entry(family.project(n, x)?)
                    .or_insert_with(Rational::zero) += p;
            }
            Ok(acc)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert_with(Rational::zero) += v;
            }
            Ok(a)
        })?;
    let mut smaller = family.objects(n, budget)?;
    smaller.sort();
    let mut mismatches = Vec::new();
    for x in &smaller {
        let expected = family.pmf(n, x)?;
        let got = marginal.get(x).cloned().unwrap_or_else(Rational::zero);
        if got != expected {
            mismatches.push(Mismatch {
                object: x.to_string(),
                expected: expected.to_string(),
                marginal: got.to_string(),
            });
        }
    }
    let stray = marginal
        .keys()
        .filter(|k| smaller.binary_search(k).is_err())
        .count();
    if stray > 0 {
        mismatches.push(Mismatch {
            object: format!("{stray} projected objects outside the size-{n} space"),
            expected: "0".into(),
            marginal: "nonzero".into(),
        });
    }
    Ok(ConsistencyReport {
        family: family.name(),
        n,
        objects: smaller.len(),
        preimages: larger.len(),
        passed: mismatches.is_empty(),
        mismatches,
    })
}

/// Partition laws on `[n]` under restriction.
#[derive(Clone, Debug)]
pub enum PartitionFamily {
    /// Ewens law on set partitions.
    Ewens(ModelParams),
    /// Two-parameter law on set partitions.
    TwoParam(ModelParams),
}

impl ProjectiveFamily for PartitionFamily {
    type Object = SetPartition;

    fn name(&self) -> String {
        match self {
            PartitionFamily::Ewens(p) => format!("ewens-partition under restriction [{p}]"),
            PartitionFamily::TwoParam(p) => format!("two-param-partition under restriction [{p}]"),
        }
    }

    fn objects(&self, n: usize, budget: &EnumerationBudget) -> Result<Vec<SetPartition>> {
        enumerate_partitions(n, budget)
    }

    fn pmf(&self, _n: usize, x: &SetPartition) -> Result<Rational> {
        match self {
            PartitionFamily::Ewens(p) => ewens_partition_weight(x, p),
            PartitionFamily::TwoParam(p) => two_param_partition_weight(x, p),
        }
    }

    fn project(&self, n: usize, x: &SetPartition) -> Result<SetPartition> {
        x.restrict(n)
    }
}

/// Ewens law on permutations (power form) under delete-and-repair of the
/// largest element.
#[derive(Clone, Debug)]
pub struct PermutationFamily(pub ModelParams);

impl ProjectiveFamily for PermutationFamily {
    type Object = Permutation;

    fn name(&self) -> String {
        format!("ewens-permutation under delete-and-repair [{}]", self.0)
    }

    fn objects(&self, n: usize, budget: &EnumerationBudget) -> Result<Vec<Permutation>> {
        enumerate_permutations(n, budget)
    }

    fn pmf(&self, _n: usize, x: &Permutation) -> Result<Rational> {
        ewens_permutation_weight(x, &self.0)
    }

    fn project(&self, n: usize, x: &Permutation) -> Result<Permutation> {
        x.delete_and_repair(n + 1)
    }
}

/// A partition together with one or more permutations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tagged {
    pub pi: SetPartition,
    pub perms: Vec<Permutation>,
}

impl fmt::Display for Tagged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pi)?;
        for s in &self.perms {
            write!(f, " ; {s}")?;
        }
        Ok(())
    }
}

/// Joint law of a two-parameter partition of `[n]` and `j - 1` matchings of
/// `[n]`, projected by restriction and delete-and-repair componentwise.
#[derive(Clone, Debug)]
pub struct JointBalancedFamily {
    pub j: usize,
    pub params: ModelParams,
}

impl ProjectiveFamily for JointBalancedFamily {
    type Object = Tagged;

    fn name(&self) -> String {
        format!(
            "joint-balanced (j = {}) under componentwise projection [{}]",
            self.j, self.params
        )
    }

    fn objects(&self, n: usize, budget: &EnumerationBudget) -> Result<Vec<Tagged>> {
        let parts = enumerate_partitions(n, budget)?;
        let perms = enumerate_permutations(n, budget)?;
        let per = perms.len().checked_pow((self.j - 1) as u32);
        budget.check(n, per.and_then(|p| p.checked_mul(parts.len())))?;
        let mut tuples: Vec<Vec<Permutation>> = vec![Vec::new()];
        for _ in 1..self.j {
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
        Ok(parts
            .iter()
            .flat_map(|pi| {
                tuples.iter().map(move |t| Tagged {
                    pi: pi.clone(),
                    perms: t.clone(),
                })
            })
            .collect())
    }

    fn pmf(&self, n: usize, x: &Tagged) -> Result<Rational> {
        joint_balanced_weight(
            &x.pi,
            &x.perms,
            &GroupIndexing::new(n, self.j)?,
            &self.params,
        )
    }

    fn project(&self, n: usize, x: &Tagged) -> Result<Tagged> {
        Ok(Tagged {
            pi: x.pi.restrict(n)?,
            perms: x
                .perms
                .iter()
                .map(|s| s.delete_and_repair(n + 1))
                .collect::<Result<_>>()?,
        })
    }
}

/// Joint law of a two-parameter partition of `[n]` and a uniform
/// permutation of `[nj]`, projected by restriction and by delete-and-repair
/// of the last `j` elements.
#[derive(Clone, Debug)]
pub struct JointEvenFamily {
    pub j: usize,
    pub params: ModelParams,
}

impl ProjectiveFamily for JointEvenFamily {
    type Object = Tagged;

    fn name(&self) -> String {
        format!(
            "joint-even (j = {}) under componentwise projection [{}]",
            self.j, self.params
        )
    }

    fn objects(&self, n: usize, budget: &EnumerationBudget) -> Result<Vec<Tagged>> {
        let parts = enumerate_partitions(n, budget)?;
        let perms = enumerate_permutations(n * self.j, budget)?;
        budget.check(n * self.j, perms.len().checked_mul(parts.len()))?;
        Ok(parts
            .iter()
            .flat_map(|pi| {
                perms.iter().map(move |s| Tagged {
                    pi: pi.clone(),
                    perms: vec![s.clone()],
                })
            })
            .collect())
    }

    fn pmf(&self, _n: usize, x: &Tagged) -> Result<Rational> {
        joint_even_weight(&x.pi, &x.perms[0], &self.params)
    }

    fn project(&self, n: usize, x: &Tagged) -> Result<Tagged> {
        let mut s = x.perms[0].clone();
        for k in (n * self.j + 1..=(n + 1) * self.j).rev() {
            s = s.delete_and_repair(k)?;
        }
        Ok(Tagged {
            pi: x.pi.restrict(n)?,
            perms: vec![s],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    #[test]
    fn partitions_of_two_marginalize_to_one() {
        let f = PartitionFamily::TwoParam(ModelParams::ratio((1, 2), (1, 1)).unwrap());
        let rep = consistency_check(&f, 1, &budget()).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.preimages, 2);
    }

    #[test]
    fn small_families_are_consistent() {
        let p = ModelParams::ratio((1, 3), (1, 2)).unwrap();
        let e = ModelParams::ewens(Rational::new(3.into(), 2.into())).unwrap();
        for n in 1..=3 {
            assert!(
                consistency_check(&PartitionFamily::TwoParam(p.clone()), n, &budget())
                    .unwrap()
                    .passed
            );
            assert!(
                consistency_check(&PartitionFamily::Ewens(e.clone()), n, &budget())
                    .unwrap()
                    .passed
            );
            assert!(
                consistency_check(&PermutationFamily(e.clone()), n, &budget())
                    .unwrap()
                    .passed
            );
        }
        let jb = JointBalancedFamily {
            j: 2,
            params: p.clone(),
        };
        let je = JointEvenFamily { j: 2, params: p };
        for n in 1..=2 {
            assert!(consistency_check(&jb, n, &budget()).unwrap().passed);
            assert!(consistency_check(&je, n, &budget()).unwrap().passed);
        }
    }

    #[test]
    fn a_wrong_projection_is_caught() {
        struct Broken;
        impl ProjectiveFamily for Broken {
            type Object = SetPartition;
            fn name(&self) -> String {
                "broken".into()
            }
            fn objects(&self, n: usize, b: &EnumerationBudget) -> Result<Vec<SetPartition>> {
                enumerate_partitions(n, b)
            }
            fn pmf(&self, _n: usize, x: &SetPartition) -> Result<Rational> {
                let _ = x;
                Ok(Rational::new(1.into(), 2.into()))
            }
            fn project(&self, n: usize, x: &SetPartition) -> Result<SetPartition> {
                x.restrict(n)
            }
        }
        assert!(!consistency_check(&Broken, 2, &budget()).unwrap().passed);
    }
}
