use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::audit::{claims_audit, AuditGrid, AuditReport};
use super::compare::{empirical_counts_vs_exact, total_variation};
use super::consistency::{
    consistency_check, ConsistencyReport, JointBalancedFamily, JointEvenFamily, PartitionFamily,
    PermutationFamily,
};
use super::laws::{exchangeability_check, integer_mass, partition_mass, IntegerLaw, PartitionLaw};
use super::seating_tree::seating_tree_exact;
use super::EnumerationBudget;
use crate::distributions::{even_identity_lhs, even_identity_rhs};
use crate::samplers::{Sampler, SamplerModel};
use crate::{
    Error, GroupIndexing, ModelParams, Rational, Result, RngHandle, SeatingRule, SetPartition,
};

/// The verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Normalization,
    Consistency,
    Identity,
    SeatingTree,
    Sampler,
    ClaimsAudit,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Normalization,
        Suite::Consistency,
        Suite::Identity,
        Suite::SeatingTree,
        Suite::Sampler,
        Suite::ClaimsAudit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Normalization => "normalization",
            Suite::Consistency => "consistency",
            Suite::Identity => "identity",
            Suite::SeatingTree => "seating-tree",
            Suite::Sampler => "sampler",
            Suite::ClaimsAudit => "claims-audit",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// One binding check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub inputs: String,
    pub value: String,
    pub expected: String,
    pub passed: bool,
}

impl CheckRecord {
    fn new(
        suite: Suite,
        check: impl Into<String>,
        inputs: impl Into<String>,
        value: impl fmt::Display,
        expected: impl fmt::Display,
        passed: bool,
    ) -> Self {
        Self {
            suite: suite.name().into(),
            check: check.into(),
            inputs: inputs.into(),
            value: value.to_string(),
            expected: expected.to_string(),
            passed,
        }
    }

    fn exact(
        suite: Suite,
        check: impl Into<String>,
        inputs: impl Into<String>,
        value: &Rational,
        expected: &Rational,
    ) -> Self {
        Self::new(suite, check, inputs, value, expected, value == expected)
    }

    fn from_consistency(rep: &ConsistencyReport) -> Self {
        Self::new(
            Suite::Consistency,
            format!("marginal of {}", rep.family),
            format!("n={}", rep.n),
            format!(
                "{} mismatches over {} objects",
                rep.mismatches.len(),
                rep.objects
            ),
            "0 mismatches",
            rep.passed,
        )
    }
}

/// Results of one or more suites.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditReport>,
    /// True iff every binding check passed. Claim verdicts are not binding.
    pub passed: bool,
}

impl SuiteReport {
    /// Human-readable table.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<13} {:<58} {:<28} {} (expected {})\n",
                if c.passed { "pass" } else { "FAIL" },
                c.suite,
                c.check,
                c.inputs,
                c.value,
                c.expected
            ));
        }
        if let Some(a) = &self.audit {
            out.push_str(&a.summary());
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "suite {}: {} checks, {} failed: {}\n",
            self.suite,
            self.checks.len(),
            failed,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Inputs shared by the suites.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub grid: AuditGrid,
    pub budget: EnumerationBudget,
    pub seed: u64,
    pub samples: u64,
    /// Largest ground set for the sampler suite.
    pub sampler_max_ground: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid: AuditGrid::default(),
            budget: EnumerationBudget::default(),
            seed: 20_240_601,
            samples: 1_000_000,
            sampler_max_ground: 6,
        }
    }
}

type Task<'a> = Box<dyn Fn() -> Result<CheckRecord> + Send + Sync + 'a>;

fn run_tasks(tasks: Vec<Task<'_>>) -> Result<Vec<CheckRecord>> {
    tasks.par_iter().map(|t| t()).collect()
}

fn lambdas(params: &[ModelParams]) -> Vec<ModelParams> {
    let mut thetas: Vec<Rational> = params.iter().map(ModelParams::theta).collect();
    thetas.sort();
    thetas.dedup();
    thetas
        .into_iter()
        .filter_map(|t| ModelParams::ewens(t).ok())
        .collect()
}

fn point(n: usize, j: usize, p: &ModelParams) -> String {
    format!("n={n} j={j} {p}")
}

/// Every partition and integer-partition law sums to one over its support,
/// and the limit laws are approached by the finite ones.
pub fn normalization_suite(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let s = Suite::Normalization;
    let b = &cfg.budget;
    let one = Rational::one();
    let ones = lambdas(&cfg.grid.params);
    let mut tasks: Vec<Task> = Vec::new();
    for size in 1..=cfg.grid.max_ground {
        for p in &cfg.grid.params {
            let one = one.clone();
            tasks.push(Box::new(move || {
                let m = partition_mass(PartitionLaw::TwoParam, size, 1, p, b)?;
                Ok(CheckRecord::exact(
                    s,
                    "mass of two-param",
                    format!("n={size} {p}"),
                    &m,
                    &one,
                ))
            }));
        }
        for p in &ones {
            let one = one.clone();
            tasks.push(Box::new(move || {
                let m = partition_mass(PartitionLaw::Ewens, size, 1, p, b)?;
                Ok(CheckRecord::exact(
                    s,
                    "mass of ewens",
                    format!("n={size} {p}"),
                    &m,
                    &one,
                ))
            }));
            let one2 = Rational::one();
            tasks.push(Box::new(move || {
                let m = integer_mass(IntegerLaw::Ewens, size, 1, p, b)?;
                Ok(CheckRecord::exact(
                    s,
                    "mass of ewens-integer",
                    format!("n={size} {p}"),
                    &m,
                    &one2,
                ))
            }));
        }
    }
    for (n, j) in cfg.grid.points() {
        for p in &cfg.grid.params {
            for law in PartitionLaw::ALL
                .into_iter()
                .filter(|l| l.is_grouped() && !l.is_one_parameter())
            {
                let one = one.clone();
                tasks.push(Box::new(move || {
                    let m = partition_mass(law, n, j, p, b)?;
                    Ok(CheckRecord::exact(
                        s,
                        format!("mass of {law}"),
                        point(n, j, p),
                        &m,
                        &one,
                    ))
                }));
            }
            for law in [IntegerLaw::Balanced, IntegerLaw::Even] {
                let one = one.clone();
                tasks.push(Box::new(move || {
                    let m = integer_mass(law, n, j, p, b)?;
                    Ok(CheckRecord::exact(
                        s,
                        format!("mass of {law}"),
                        point(n, j, p),
                        &m,
                        &one,
                    ))
                }));
            }
        }
        for p in &ones {
            for law in [PartitionLaw::BalancedLimit, PartitionLaw::EvenLimit] {
                let one = one.clone();
                tasks.push(Box::new(move || {
                    let m = partition_mass(law, n, j, p, b)?;
                    Ok(CheckRecord::exact(
                        s,
                        format!("mass of {law}"),
                        point(n, j, p),
                        &m,
                        &one,
                    ))
                }));
            }
        }
    }
    tasks.extend(limit_tasks(cfg));
    run_tasks(tasks)
}

/// Total variation between each limit law and its finite counterpart at
/// `kappa = lambda / 10^4`, `m = 10^4`, for `lambda in {1/2, 1, 2}`.
fn limit_tasks(cfg: &VerifyConfig) -> Vec<Task<'_>> {
    let s = Suite::Normalization;
    let b = &cfg.budget;
    let mut tasks: Vec<Task> = Vec::new();
    for lambda in [(1, 2), (1, 1), (2, 1)] {
        let lambda = Rational::new(lambda.0.into(), lambda.1.into());
        for size in 1..=6usize {
            let lambda = lambda.clone();
            tasks.push(Box::new(move || {
                let (ewens, near) = limit_params(&lambda)?;
                let tv = total_variation(
                    &PartitionLaw::Ewens.distribution(size, 1, &ewens, b)?,
                    &PartitionLaw::TwoParam.distribution(size, 1, &near, b)?,
                )?;
                Ok(tv_record(
                    s,
                    "two-param at kappa = lambda/10^4 vs ewens",
                    format!("n={size} lambda={lambda}"),
                    &tv,
                ))
            }));
        }
        for (n, j) in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)] {
            for (finite, limit) in [
                (PartitionLaw::Balanced, PartitionLaw::BalancedLimit),
                (PartitionLaw::Even, PartitionLaw::EvenLimit),
            ] {
                let lambda = lambda.clone();
                tasks.push(Box::new(move || {
                    let (ewens, near) = limit_params(&lambda)?;
                    let tv = total_variation(
                        &limit.distribution(n, j, &ewens, b)?,
                        &finite.distribution(n, j, &near, b)?,
                    )?;
                    Ok(tv_record(
                        s,
                        format!("{finite} at kappa = lambda/10^4 vs {limit}"),
                        format!("n={n} j={j} lambda={lambda}"),
                        &tv,
                    ))
                }));
            }
        }
    }
    tasks
}

fn limit_params(lambda: &Rational) -> Result<(ModelParams, ModelParams)> {
    let m = 10_000u64;
    Ok((
        ModelParams::ewens(lambda.clone())?,
        ModelParams::negative_kappa(lambda / Rational::from_integer(m.into()), m)?,
    ))
}

fn tv_record(s: Suite, check: impl Into<String>, inputs: String, tv: &Rational) -> CheckRecord {
    let v = tv.to_f64().unwrap_or(f64::NAN);
    CheckRecord::new(
        s,
        check,
        inputs,
        format!("tv {v:.3e}"),
        "tv < 1e-3",
        v < 1e-3,
    )
}

/// Projective consistency of the consistent families, and exchangeability
/// of every partition law.
pub fn consistency_suite(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let b = &cfg.budget;
    let params = &cfg.grid.params;
    let ones = lambdas(params);
    let mut tasks: Vec<Task> = Vec::new();
    for n in 1..=5 {
        for p in params {
            tasks.push(Box::new(move || {
                Ok(CheckRecord::from_consistency(&consistency_check(
                    &PartitionFamily::TwoParam(p.clone()),
                    n,
                    b,
                )?))
            }));
        }
        for p in &ones {
            tasks.push(Box::new(move || {
                Ok(CheckRecord::from_consistency(&consistency_check(
                    &PartitionFamily::Ewens(p.clone()),
                    n,
                    b,
                )?))
            }));
        }
    }
    for n in 1..=4 {
        for p in &ones {
            tasks.push(Box::new(move || {
                Ok(CheckRecord::from_consistency(&consistency_check(
                    &PermutationFamily(p.clone()),
                    n,
                    b,
                )?))
            }));
        }
    }
    for n in 1..=3 {
        for p in params {
            tasks.push(Box::new(move || {
                let f = JointBalancedFamily {
                    j: 2,
                    params: p.clone(),
                };
                Ok(CheckRecord::from_consistency(&consistency_check(&f, n, b)?))
            }));
            tasks.push(Box::new(move || {
                let f = JointEvenFamily {
                    j: 2,
                    params: p.clone(),
                };
                Ok(CheckRecord::from_consistency(&consistency_check(&f, n, b)?))
            }));
        }
    }
    tasks.extend(exchangeability_tasks(cfg, 6));
    run_tasks(tasks)
}

fn exchangeability_tasks(cfg: &VerifyConfig, max_ground: usize) -> Vec<Task<'_>> {
    let b = &cfg.budget;
    let ones = lambdas(&cfg.grid.params);
    let mut tasks: Vec<Task> = Vec::new();
    let mut add = |law: PartitionLaw, n: usize, j: usize, p: ModelParams| {
        tasks.push(Box::new(move || {
            let rep = exchangeability_check(law, n, j, &p, b)?;
            Ok(CheckRecord::new(
                Suite::Consistency,
                format!("exchangeability of {law}"),
                point(n, j, &p),
                format!(
                    "{} violations over {} objects x {} relabelings",
                    rep.violations, rep.objects, rep.group_size
                ),
                "0 violations",
                rep.passed,
            ))
        }));
    };
    for law in PartitionLaw::ALL {
        let ps: Vec<ModelParams> = if law.is_one_parameter() {
            ones.clone()
        } else {
            cfg.grid.params.clone()
        };
        for p in ps {
            if law.is_grouped() {
                for j in [2, 3] {
                    for n in 1..=max_ground / j {
                        add(law, n, j, p.clone());
                    }
                }
            } else {
                for n in 1..=max_ground {
                    add(law, n, 1, p.clone());
                }
            }
        }
    }
    tasks
}

/// The rising-factorial identity over `k`-even partitions, for `nk <= 8`
/// and `nk + 1` distinct values of `alpha`.
pub fn identity_suite(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let b = &cfg.budget;
    let mut tasks: Vec<Task> = Vec::new();
    for k in 1..=cfg.grid.max_ground {
        for n in 1..=cfg.grid.max_ground / k {
            let size = n * k;
            for i in 0..=size {
                tasks.push(Box::new(move || {
                    let alpha = Rational::new((2 * i as i64 - size as i64).into(), 3.into());
                    let lhs = even_identity_lhs(n, k, &alpha, b)?;
                    let rhs = even_identity_rhs(n, k, &alpha);
                    Ok(CheckRecord::exact(
                        Suite::Identity,
                        "sum over k-even partitions equals (alpha/k)^(n)/n!",
                        format!("n={n} k={k} alpha={alpha}"),
                        &lhs,
                        &rhs,
                    ))
                }));
            }
        }
    }
    run_tasks(tasks)
}

/// Three parameter points per regime for the seating-plan checks.
pub fn seating_params() -> Vec<ModelParams> {
    let kappa = |p: i64, q: i64, m: u64| {
        ModelParams::negative_kappa(Rational::new(p.into(), q.into()), m).unwrap()
    };
    vec![
        ModelParams::ratio((1, 2), (1, 1)).unwrap(),
        ModelParams::ratio((0, 1), (1, 1)).unwrap(),
        ModelParams::ratio((1, 3), (-1, 4)).unwrap(),
        kappa(1, 2, 3),
        kappa(1, 1, 2),
        kappa(1, 4, 5),
    ]
}

/// The fully expanded seating plans equal the closed-form laws.
pub fn seating_tree_suite(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let b = &cfg.budget;
    let mut tasks: Vec<Task> = Vec::new();
    for (n, j) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
        for p in seating_params() {
            for (rule, law) in [
                (SeatingRule::Balanced, PartitionLaw::Balanced),
                (SeatingRule::Even, PartitionLaw::Even),
            ] {
                let p = p.clone();
                tasks.push(Box::new(move || {
                    let g = GroupIndexing::new(n, j)?;
                    let tree = seating_tree_exact(n, &g, &p, rule, b)?;
                    let closed = law.distribution(n, j, &p, b)?;
                    let tv = total_variation(&tree, &closed)?;
                    Ok(CheckRecord::exact(
                        Suite::SeatingTree,
                        format!("{law} seating plan vs closed form (tv)"),
                        point(n, j, &p),
                        &tv,
                        &Rational::zero(),
                    ))
                }));
            }
        }
    }
    run_tasks(tasks)
}

/// The exact law a sampler targets.
pub fn sampler_target(
    model: SamplerModel,
    n: usize,
    j: usize,
    params: &ModelParams,
    budget: &EnumerationBudget,
) -> Result<crate::ExactDist<SetPartition>> {
    let law = match model {
        SamplerModel::Crp => PartitionLaw::TwoParam,
        SamplerModel::Balanced => PartitionLaw::Balanced,
        SamplerModel::Even => PartitionLaw::Even,
        SamplerModel::TwoStepBalanced => PartitionLaw::TwoStepBalanced,
        SamplerModel::TwoStepEven => PartitionLaw::TwoStepEven,
    };
    law.distribution(n, j, params, budget)
}

/// Draws `samples` partitions on one stream and tallies them.
pub fn tally(sampler: &Sampler, samples: u64, rng: &mut RngHandle) -> HashMap<SetPartition, u64> {
    let mut counts: HashMap<SetPartition, u64> = HashMap::new();
    for _ in 0..samples {
        *counts.entry(sampler.sample(rng)).or_insert(0) += 1;
    }
    counts
}

/// Every sampler against its exact law at `nj <= 6`: total variation below
/// 0.01 and a chi-square p-value above 0.001.
pub fn sampler_suite(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let b = &cfg.budget;
    let mut runs: Vec<(SamplerModel, usize, usize, ModelParams)> = Vec::new();
    for p in &cfg.grid.params {
        for n in 1..=cfg.sampler_max_ground {
            runs.push((SamplerModel::Crp, n, 1, p.clone()));
        }
        for model in [
            SamplerModel::Balanced,
            SamplerModel::Even,
            SamplerModel::TwoStepBalanced,
            SamplerModel::TwoStepEven,
        ] {
            for j in [2, 3] {
                for n in 1..=cfg.sampler_max_ground / j {
                    runs.push((model, n, j, p.clone()));
                }
            }
        }
    }
    let tasks: Vec<Task> = runs
        .into_iter()
        .enumerate()
        .map(|(stream, (model, n, j, p))| -> Task {
            Box::new(move || {
                let sampler = Sampler::new(model, n, j, &p)?;
                let exact = sampler_target(model, n, j, &p, b)?;
                let mut rng = RngHandle::new(cfg.seed, stream as u64);
                let counts = tally(&sampler, cfg.samples, &mut rng);
                let rep = empirical_counts_vs_exact(&counts.into_iter().collect(), &exact)?;
                let tv = rep.tv_f64();
                Ok(CheckRecord::new(
                    Suite::Sampler,
                    format!("{} sampler vs exact law", serde_name(model)),
                    format!("{} samples={}", point(n, j, &p), cfg.samples),
                    format!(
                        "tv {tv:.2e} chi2 {:.1} dof {} p {:.3}",
                        rep.chi_square, rep.dof, rep.p_value
                    ),
                    "tv < 0.01, p > 0.001",
                    tv < 0.01 && rep.p_value > 1e-3,
                ))
            })
        })
        .collect();
    run_tasks(tasks)
}

fn serde_name(model: SamplerModel) -> &'static str {
    match model {
        SamplerModel::Crp => "crp",
        SamplerModel::Balanced => "balanced",
        SamplerModel::Even => "even",
        SamplerModel::TwoStepBalanced => "two-step-balanced",
        SamplerModel::TwoStepEven => "two-step-even",
    }
}

/// Runs one suite, or all of them.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let (checks, audit) = match suite {
        Suite::Normalization => (normalization_suite(cfg)?, None),
        Suite::Consistency => (consistency_suite(cfg)?, None),
        Suite::Identity => (identity_suite(cfg)?, None),
        Suite::SeatingTree => (seating_tree_suite(cfg)?, None),
        Suite::Sampler => (sampler_suite(cfg)?, None),
        Suite::ClaimsAudit => (Vec::new(), Some(claims_audit(&cfg.grid, &cfg.budget)?)),
        Suite::All => {
            let mut checks = Vec::new();
            let mut audit = None;
            for s in Suite::EACH {
                let rep = run_suite(s, cfg)?;
                checks.extend(rep.checks);
                audit = audit.or(rep.audit);
            }
            (checks, audit)
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite,
        checks,
        audit,
        passed,
    })
}
