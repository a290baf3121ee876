use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crp_core::combinatorics::{is_j_balanced, is_j_even};
use crp_core::distributions::joint_even_pmf;
use crp_core::oracle::{
    empirical_counts_vs_exact, enumerate_partitions, enumerate_permutations, total_variation_f64,
    PartitionLaw, Tagged,
};
use crp_core::samplers::{two_step_even_sample, Sampler, SamplerModel};
use crp_core::{EnumerationBudget, ExactDist, GroupIndexing, ModelParams, Rational, RngHandle};

const DRAWS: u64 = 1_000_000;

fn exact_f64<T: Ord + Clone>(d: &ExactDist<T>) -> BTreeMap<T, f64> {
    d.exact_entries()
        .unwrap()
        .into_iter()
        .map(|(x, p)| (x.clone(), p.to_f64().unwrap()))
        .collect()
}

#[test]
fn two_step_even_at_scaled_params_matches_even_law() {
    let budget = EnumerationBudget::default();
    let (n, j) = (2, 2);
    let small = ModelParams::ratio((1, 4), (1, 2)).unwrap();
    let big = ModelParams::ratio((1, 2), (1, 1)).unwrap();
    let sampler = Sampler::new(SamplerModel::TwoStepEven, n, j, &small).unwrap();
    let mut rng = RngHandle::new(11, 0);
    let mut counts = BTreeMap::new();
    for _ in 0..DRAWS {
        *counts.entry(sampler.sample(&mut rng)).or_insert(0u64) += 1;
    }
    let freq: BTreeMap<_, f64> = counts
        .iter()
        .map(|(k, &c)| (k.clone(), c as f64 / DRAWS as f64))
        .collect();
    let even = PartitionLaw::Even
        .distribution(n, j, &big, &budget)
        .unwrap();
    let tv = total_variation_f64(&freq, &exact_f64(&even));
    assert!(tv < 0.01, "tv {tv}");
    let rep = empirical_counts_vs_exact(&counts, &even).unwrap();
    assert!(rep.p_value > 1e-3, "p {}", rep.p_value);
}

#[test]
fn joint_partition_and_permutation_frequencies_match_joint_pmf() {
    let budget = EnumerationBudget::default();
    let p = ModelParams::ratio((1, 2), (1, 1)).unwrap();
    let (n, j) = (2, 1);
    let g = GroupIndexing::new(n, j).unwrap();
    let mut exact = Vec::new();
    for pi in enumerate_partitions(n, &budget).unwrap() {
        for sigma in enumerate_permutations(n * j, &budget).unwrap() {
            let v = joint_even_pmf(&pi, &sigma, &p)
                .unwrap()
                .exact_value()
                .unwrap()
                .clone();
            exact.push((
                Tagged {
                    pi: pi.clone(),
                    perms: vec![sigma],
                },
                v,
            ));
        }
    }
    let exact = ExactDist::from_exact(exact);
    assert_eq!(
        exact.total_mass().unwrap(),
        Rational::from_integer(1.into())
    );
    let mut rng = RngHandle::new(12, 0);
    let mut counts = BTreeMap::new();
    for _ in 0..DRAWS {
        let (pi, sigma, _) = two_step_even_sample(n, &g, &p, &mut rng).unwrap();
        *counts
            .entry(Tagged {
                pi,
                perms: vec![sigma],
            })
            .or_insert(0u64) += 1;
    }
    let rep = empirical_counts_vs_exact(&counts, &exact).unwrap();
    assert!(rep.p_value > 1e-3, "p {}", rep.p_value);
    assert!(rep.tv_f64() < 0.01);
}

#[test]
fn two_step_group_marginal_is_the_crp_law() {
    let budget = EnumerationBudget::default();
    let p = ModelParams::negative_kappa(Rational::new(1.into(), 2.into()), 3).unwrap();
    let (n, j) = (3, 2);
    let sampler = Sampler::new(SamplerModel::TwoStepBalanced, n, j, &p).unwrap();
    let mut rng = RngHandle::new(13, 0);
    let mut counts = BTreeMap::new();
    for _ in 0..200_000 {
        let d = sampler.draw(&mut rng);
        *counts.entry(d.groups.unwrap()).or_insert(0u64) += 1;
    }
    let crp = PartitionLaw::TwoParam
        .distribution(n, 1, &p, &budget)
        .unwrap();
    let rep = empirical_counts_vs_exact(&counts, &crp).unwrap();
    assert!(rep.p_value > 1e-3, "p {}", rep.p_value);
}

#[test]
fn every_draw_is_structurally_valid_and_replays() {
    let p = ModelParams::ratio((1, 2), (1, 1)).unwrap();
    let mut rng = RngHandle::new(14, 0);
    for (model, n, j) in [
        (SamplerModel::Balanced, 3, 3),
        (SamplerModel::Even, 3, 3),
        (SamplerModel::TwoStepBalanced, 4, 2),
        (SamplerModel::TwoStepEven, 4, 2),
    ] {
        let g = GroupIndexing::new(n, j).unwrap();
        let sampler = Sampler::new(model, n, j, &p).unwrap();
        for _ in 0..5_000 {
            let d = sampler.draw(&mut rng);
            assert!(is_j_even(&d.partition, j).unwrap());
            if matches!(
                model,
                SamplerModel::Balanced | SamplerModel::TwoStepBalanced
            ) {
                assert!(is_j_balanced(&d.partition, &g).unwrap());
            }
            if let Some(t) = &d.trace {
                assert_eq!(t.replay().unwrap(), d.partition);
            }
        }
    }
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let p = ModelParams::ratio((0, 1), (2, 1)).unwrap();
    let sampler = Sampler::new(SamplerModel::Even, 3, 2, &p).unwrap();
    let run = |stream| {
        let mut rng = RngHandle::new(99, stream);
        (0..500).map(|_| sampler.draw(&mut rng)).collect::<Vec<_>>()
    };
    assert_eq!(run(0), run(0));
    assert_ne!(run(0), run(1));
}
