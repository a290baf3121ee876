use std::fmt::Display;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::weight::{ln_abs_rational, LogWeight};
use crate::{Error, Rational, Result};

/// A probability, held exactly, in log space, or both.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbValue {
    exact: Option<Rational>,
    log_value: Option<f64>,
}

impl ProbValue {
    pub fn exact(value: Rational) -> Self {
        Self {
            exact: Some(value),
            log_value: None,
        }
    }

    pub fn from_log(log_value: f64) -> Self {
        Self {
            exact: None,
            log_value: Some(log_value),
        }
    }

    /// Pairs an exact value with an independently computed log-space value.
    pub fn dual(exact: Rational, log: LogWeight) -> Self {
        debug_assert!(log.sign() >= 0, "negative probability in log-space path");
        Self {
            exact: Some(exact),
            log_value: Some(log.ln_abs()),
        }
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.exact.as_ref()
    }

    /// Exact value or a domain error when only a log value is held.
    pub fn require_exact(&self) -> Result<&Rational> {
        self.exact
            .as_ref()
            .ok_or_else(|| Error::Domain("probability is only known in log space".into()))
    }

    /// Stored log value, or `ln` of the exact value.
    pub fn ln(&self) -> f64 {
        match (&self.log_value, &self.exact) {
            (Some(l), _) => *l,
            (None, Some(x)) if x.is_zero() => f64::NEG_INFINITY,
            (None, Some(x)) => ln_abs_rational(x),
            (None, None) => unreachable!("ProbValue always holds a value"),
        }
    }

    pub fn stored_log(&self) -> Option<f64> {
        self.log_value
    }

    pub fn to_f64(&self) -> f64 {
        match &self.exact {
            Some(x) => num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN),
            None => self.ln().exp(),
        }
    }
}

#[derive(Serialize)]
struct RationalRecord {
    num: String,
    den: String,
}

pub(crate) fn ser_rational<S: Serializer>(
    x: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    RationalRecord {
        num: x.numer().to_string(),
        den: x.denom().to_string(),
    }
    .serialize(s)
}

impl Serialize for ProbValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record<'a> {
            #[serde(
                skip_serializing_if = "Option::is_none",
                serialize_with = "ser_opt_rational_ref"
            )]
            prob: Option<&'a Rational>,
            #[serde(skip_serializing_if = "Option::is_none")]
            log_prob: Option<f64>,
        }
        fn ser_opt_rational_ref<S: Serializer>(
            x: &Option<&Rational>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            match x {
                Some(x) => ser_rational(x, s),
                None => s.serialize_none(),
            }
        }
        let log_prob = match (&self.exact, self.log_value) {
            (Some(_), _) => None,
            (None, l) => l,
        };
        Record {
            prob: self.exact.as_ref(),
            log_prob,
        }
        .serialize(s)
    }
}

/// A finite probability table over canonical combinatorial objects.
///
/// Entries are distinct and sorted by the object's `Ord`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDist<T> {
    entries: Vec<(T, ProbValue)>,
}

/// One serialized row of an [`ExactDist`].
#[derive(Clone, Debug, Serialize)]
pub struct DistRecord {
    pub object: String,
    #[serde(flatten)]
    pub prob: ProbValue,
}

impl<T: Ord + Clone> ExactDist<T> {
    /// Builds a table from exact weights, summing the weights of repeated
    /// objects.
    pub fn from_exact(items: impl IntoIterator<Item = (T, Rational)>) -> Self {
        let mut items: Vec<(T, Rational)> = items.into_iter().collect();
        items.sort_by(|a, b| a.0.cmp(&b.0));
        let mut entries: Vec<(T, Rational)> = Vec::with_capacity(items.len());
        for (x, w) in items {
            match entries.last_mut() {
                Some((last, acc)) if *last == x => *acc += w,
                _ => entries.push((x, w)),
            }
        }
        Self {
            entries: entries
                .into_iter()
                .map(|(x, w)| (x, ProbValue::exact(w)))
                .collect(),
        }
    }

    /// Builds a table from arbitrary weights; objects must be distinct.
    pub fn from_weights(items: impl IntoIterator<Item = (T, ProbValue)>) -> Result<Self> {
        let mut entries: Vec<(T, ProbValue)> = items.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("duplicate support entries".into()));
        }
        if entries
            .iter()
            .any(|(_, p)| p.exact_value().is_some_and(|x| x.is_negative()))
        {
            return Err(Error::Domain("negative probability".into()));
        }
        Ok(Self { entries })
    }

    pub fn point_mass(x: T) -> Self {
        Self::from_exact([(x, Rational::from_integer(1.into()))])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &ProbValue)> {
        self.entries.iter().map(|(x, p)| (x, p))
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|(x, _)| x)
    }

    pub fn prob(&self, x: &T) -> Option<&ProbValue> {
        self.entries
            .binary_search_by(|(y, _)| y.cmp(x))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// Exact probability of `x`, zero when `x` is outside the support.
    pub fn exact_prob(&self, x: &T) -> Result<Rational> {
        match self.prob(x) {
            Some(p) => p.require_exact().cloned(),
            None => Ok(Rational::zero()),
        }
    }

    /// `(object, exact weight)` pairs; fails if any weight is log-only.
    pub fn exact_entries(&self) -> Result<Vec<(&T, &Rational)>> {
        self.entries
            .iter()
            .map(|(x, p)| p.require_exact().map(|w| (x, w)))
            .collect()
    }

    pub fn total_mass(&self) -> Result<Rational> {
        Ok(self
            .exact_entries()?
            .into_iter()
            .map(|(_, w)| w.clone())
            .sum())
    }

    /// Pushforward under `f`.
    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Result<ExactDist<U>> {
        let items = self
            .exact_entries()?
            .into_iter()
            .map(|(x, w)| (f(x), w.clone()))
            .collect::<Vec<_>>();
        Ok(ExactDist::from_exact(items))
    }

    /// Fallible pushforward.
    pub fn try_map<U: Ord + Clone>(
        &self,
        mut f: impl FnMut(&T) -> Result<U>,
    ) -> Result<ExactDist<U>> {
        let items = self
            .exact_entries()?
            .into_iter()
            .map(|(x, w)| Ok((f(x)?, w.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactDist::from_exact(items))
    }

    /// Rows ordered by the canonical text form of the object.
    pub fn records(&self) -> Vec<DistRecord>
    where
        T: Display,
    {
        let mut rows: Vec<DistRecord> = self
            .entries
            .iter()
            .map(|(x, p)| DistRecord {
                object: x.to_string(),
                prob: p.clone(),
            })
            .collect();
        rows.sort_by(|a, b| a.object.cmp(&b.object));
        rows
    }
}
