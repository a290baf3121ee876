use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use super::EnumerationBudget;
use crate::combinatorics::bell_number;
use crate::samplers::{exact_join, exact_open, SeatingState};
use crate::{ExactDist, GroupIndexing, ModelParams, Rational, Result, SeatingRule, SetPartition};

/// Exact law of the seating plan, obtained by expanding every displacement
/// pick and every table choice with its rational probability.
pub fn seating_tree_exact(
    n: usize,
    g: &GroupIndexing,
    params: &ModelParams,
    rule: SeatingRule,
    budget: &EnumerationBudget,
) -> Result<ExactDist<SetPartition>> {
    let j = g.j();
    if n != g.n() {
        return Err(crate::Error::Domain(format!(
            "n = {n} does not match the indexing with n = {}",
            g.n()
        )));
    }
    budget.check(g.size(), bell_number(g.size()).to_usize())?;
    let (alpha, theta) = params.alpha_theta()?;
    let mut layer: BTreeMap<SetPartition, Rational> = BTreeMap::new();
    layer.insert(
        SetPartition::single_block(j)?,
        Rational::from_integer(1.into()),
    );
    for m in 1..n {
        let picks = pick_combinations(rule, m, j);
        let pick_prob = Rational::new(1.into(), picks.len().into());
        let denom = Rational::from_integer((m * j).into()) + &theta;
        let mut next: BTreeMap<SetPartition, Rational> = BTreeMap::new();
        for (b, p) in &layer {
            let state = SeatingState::from_labels(j, b.labels());
            let k = state.sizes.len();
            let mut tables: Vec<(Option<usize>, Rational)> = state
                .sizes
                .iter()
                .enumerate()
                .map(|(t, &s)| (Some(t), exact_join(&alpha, s) / &denom))
                .collect();
            tables.push((None, exact_open(&alpha, &theta, k) / &denom));
            for (table, tp) in tables.iter().filter(|(_, tp)| !tp.is_zero()) {
                let weight = p * tp * &pick_prob;
                for choice in &picks {
                    let mut s = state.clone();
                    s.seat(rule, choice, *table)?;
                    *next
                        .entry(SetPartition::from_labels(&s.labels)?)
                        .or_insert_with(Rational::zero) += &weight;
                }
            }
        }
        layer = next;
    }
    Ok(ExactDist::from_exact(layer))
}

/// Every joint choice of picks for units `mj + 2, ..., mj + j`.
fn pick_combinations(rule: SeatingRule, m: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 2..=j {
        let cands = rule.candidates(m, j, i);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                cands.iter().map(move |&c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}
