use std::collections::BTreeMap;
use std::fmt::Display;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::distributions::ser_rational;
use crate::{Error, ExactDist, Rational, Result};

/// `base` restricted to `keep` and renormalized.
pub fn conditioned_distribution<T: Ord + Clone>(
    base: &ExactDist<T>,
    mut keep: impl FnMut(&T) -> bool,
) -> Result<ExactDist<T>> {
    let kept: Vec<(T, Rational)> = base
        .exact_entries()?
        .into_iter()
        .filter(|(x, _)| keep(x))
        .map(|(x, p)| (x.clone(), p.clone()))
        .collect();
    let mass: Rational = kept.iter().map(|(_, p)| p).sum();
    if mass.is_zero() {
        return Err(Error::Domain(
            "conditioning event has probability zero".into(),
        ));
    }
    Ok(ExactDist::from_exact(
        kept.into_iter().map(|(x, p)| (x, p / &mass)),
    ))
}

/// `(1/2) sum_x |p(x) - q(x)|`, absent entries counting as zero.
pub fn total_variation<T: Ord + Clone>(p: &ExactDist<T>, q: &ExactDist<T>) -> Result<Rational> {
    let mut diff: BTreeMap<&T, Rational> = BTreeMap::new();
    for (x, v) in p.exact_entries()? {
        *diff.entry(x).or_insert_with(Rational::zero) += v;
    }
    for (x, v) in q.exact_entries()? {
        *diff.entry(x).or_insert_with(Rational::zero) -= v;
    }
    let sum: Rational = diff.values().map(|d| d.abs()).sum();
    Ok(sum / Rational::from_integer(2.into()))
}

/// Total variation between two tables of floating-point probabilities.
pub fn total_variation_f64<T: Ord>(p: &BTreeMap<T, f64>, q: &BTreeMap<T, f64>) -> f64 {
    let mut sum = 0.0;
    for (x, a) in p {
        sum += (a - q.get(x).copied().unwrap_or(0.0)).abs();
    }
    for (x, b) in q {
        if !p.contains_key(x) {
            sum += b.abs();
        }
    }
    sum / 2.0
}

/// One row of an empirical frequency table.
#[derive(Clone, Debug, Serialize)]
pub struct FrequencyRow {
    pub object: String,
    pub observed: u64,
    #[serde(serialize_with = "ser_rational")]
    pub expected: Rational,
}

/// Goodness of fit of a sample against an exact law.
#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalReport {
    pub samples: u64,
    pub support: usize,
    /// Samples falling outside the support of the exact law.
    pub outside: u64,
    #[serde(serialize_with = "ser_rational")]
    pub tv: Rational,
    pub chi_square: f64,
    /// Degrees of freedom after pooling cells with expected count below 5.
    pub dof: usize,
    pub p_value: f64,
    pub table: Vec<FrequencyRow>,
}

impl EmpiricalReport {
    pub fn tv_f64(&self) -> f64 {
        self.tv.to_f64().unwrap_or(f64::NAN)
    }
}

/// Compares observed counts against `exact`: exact total variation and a
/// Pearson chi-square test with support - 1 degrees of freedom (cells with
/// expected count below 5 are pooled).
pub fn empirical_vs_exact<T: Ord + Clone + Display>(
    samples: impl IntoIterator<Item = T>,
    exact: &ExactDist<T>,
) -> Result<EmpiricalReport> {
    let mut counts: BTreeMap<T, u64> = BTreeMap::new();
    let mut total = 0u64;
    for x in samples {
        *counts.entry(x).or_insert(0) += 1;
        total += 1;
    }
    empirical_counts_vs_exact(&counts, exact).inspect(|r| {
        debug_assert_eq!(r.samples, total);
    })
}

/// [`empirical_vs_exact`] on pre-tallied counts.
pub fn empirical_counts_vs_exact<T: Ord + Clone + Display>(
    counts: &BTreeMap<T, u64>,
    exact: &ExactDist<T>,
) -> Result<EmpiricalReport> {
    let total: u64 = counts.values().sum();
    let support = exact.len();
    if total < 10 * support as u64 {
        return Err(Error::Domain(format!(
            "{total} samples for a support of {support}; at least {} needed",
            10 * support
        )));
    }
    let n = Rational::from_integer(total.into());
    let mut tv = Rational::zero();
    let mut table = Vec::with_capacity(support);
    let mut cells: Vec<(f64, f64)> = Vec::with_capacity(support);
    for (x, p) in exact.exact_entries()? {
        let observed = counts.get(x).copied().unwrap_or(0);
        tv += (Rational::from_integer(observed.into()) / &n - p).abs();
        cells.push((observed as f64, p.to_f64().unwrap_or(0.0) * total as f64));
        table.push(FrequencyRow {
            object: x.to_string(),
            observed,
            expected: p.clone(),
        });
    }
    let outside: u64 = counts
        .iter()
        .filter(|(x, _)| exact.prob(x).is_none())
        .map(|(_, c)| c)
        .sum();
    tv += Rational::from_integer(outside.into()) / &n;
    tv /= Rational::from_integer(2.into());
    let (chi_square, dof, p_value) = if outside > 0 {
        (f64::INFINITY, support.saturating_sub(1), 0.0)
    } else {
        pearson(pool(cells))
    };
    Ok(EmpiricalReport {
        samples: total,
        support,
        outside,
        tv,
        chi_square,
        dof,
        p_value,
        table,
    })
}

/// Merges cells, smallest expectation first, until every cell expects at
/// least 5.
fn pool(mut cells: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    cells.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (o, e) in cells {
        acc = (acc.0 + o, acc.1 + e);
        if acc.1 >= 5.0 {
            out.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match out.last_mut() {
            Some(last) => *last = (last.0 + acc.0, last.1 + acc.1),
            None => out.push(acc),
        }
    }
    out
}

fn pearson(cells: Vec<(f64, f64)>) -> (f64, usize, f64) {
    let dof = cells.len().saturating_sub(1);
    let stat: f64 = cells
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let p = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(stat)
    };
    (stat, dof, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn dist(entries: &[(u8, Rational)]) -> ExactDist<u8> {
        ExactDist::from_exact(entries.iter().cloned())
    }

    #[test]
    fn tv_examples() {
        let p = dist(&[(0, r(1, 1))]);
        let q = dist(&[(0, r(1, 2)), (1, r(1, 2))]);
        assert_eq!(total_variation(&p, &p).unwrap(), r(0, 1));
        assert_eq!(total_variation(&p, &q).unwrap(), r(1, 2));
        let d = dist(&[(2, r(1, 1))]);
        assert_eq!(total_variation(&p, &d).unwrap(), r(1, 1));
    }

    #[test]
    fn conditioning() {
        let q = dist(&[(0, r(1, 4)), (1, r(1, 4)), (2, r(1, 2))]);
        assert_eq!(
            total_variation(&conditioned_distribution(&q, |_| true).unwrap(), &q).unwrap(),
            r(0, 1)
        );
        let c = conditioned_distribution(&q, |&x| x < 2).unwrap();
        assert_eq!(c.exact_prob(&0).unwrap(), r(1, 2));
        let pm = dist(&[(7, r(1, 1))]);
        assert_eq!(
            conditioned_distribution(&pm, |&x| x == 7)
                .unwrap()
                .exact_prob(&7)
                .unwrap(),
            r(1, 1)
        );
        assert!(matches!(
            conditioned_distribution(&q, |_| false),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn empirical_point_mass() {
        let pm = dist(&[(3, r(1, 1))]);
        let rep = empirical_vs_exact(std::iter::repeat_n(3u8, 20), &pm).unwrap();
        assert!(rep.tv.is_zero());
        assert_eq!(rep.p_value, 1.0);
    }

    #[test]
    fn empirical_detects_mismatch_and_undersize() {
        let q = dist(&[(0, r(1, 2)), (1, r(1, 2))]);
        assert!(matches!(
            empirical_vs_exact(vec![0u8; 5], &q),
            Err(Error::Domain(_))
        ));
        let rep = empirical_vs_exact(vec![0u8; 1000], &q).unwrap();
        assert_eq!(rep.tv, r(1, 2));
        assert!(rep.p_value < 1e-6);
        let rep = empirical_vs_exact((0..1000).map(|i| (i % 2) as u8), &q).unwrap();
        assert!(rep.tv.is_zero());
        assert!(rep.p_value > 0.99);
        let rep = empirical_vs_exact(vec![9u8; 100], &q).unwrap();
        assert_eq!(rep.outside, 100);
        assert_eq!(rep.tv, r(1, 1));
    }
}
