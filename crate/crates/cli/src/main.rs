//! `crp`: sample, evaluate, enumerate and verify exchangeable random partitions.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crp_core::combinatorics::rational_from_str;
use crp_core::distributions::{
    balanced_integer_pmf, even_integer_pmf, ewens_integer_pmf, ewens_permutation_pmf,
    joint_balanced_pmf, joint_even_pmf,
};
use crp_core::oracle::{
    enumerate_integer_partitions, enumerate_permutations, run_suite, AuditGrid, IntegerLaw,
    PartitionLaw, Suite, VerifyConfig,
};
use crp_core::samplers::{Sampler, SamplerModel};
use crp_core::{
    EnumerationBudget, Error, GroupIndexing, IntegerPartition, ModelParams, Permutation, ProbValue,
    Rational, Result, RngHandle, SetPartition,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "crp",
    version,
    about = "Exchangeable random partitions: CRP, balanced and even"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw partitions from a sampler.
    Sample(SampleArgs),
    /// Exact probability of one object.
    Pmf(PmfArgs),
    /// List a support, optionally with exact probabilities.
    Enumerate(EnumerateArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct ParamArgs {
    /// Discount, as `p/q` or an integer.
    #[arg(long, value_parser = rational_from_str, allow_hyphen_values = true)]
    alpha: Option<Rational>,
    /// Concentration, as `p/q` or an integer.
    #[arg(long, value_parser = rational_from_str, allow_hyphen_values = true)]
    theta: Option<Rational>,
    /// Negative regime: `alpha = -kappa`, `theta = m kappa`.
    #[arg(long, value_parser = rational_from_str, requires = "m", conflicts_with_all = ["alpha", "theta", "lambda"])]
    kappa: Option<Rational>,
    #[arg(long, requires = "kappa")]
    m: Option<u64>,
    /// Ewens parameter.
    #[arg(long, value_parser = rational_from_str, conflicts_with_all = ["alpha", "theta"])]
    lambda: Option<Rational>,
}

impl ParamArgs {
    fn given(&self) -> bool {
        self.alpha.is_some()
            || self.theta.is_some()
            || self.kappa.is_some()
            || self.lambda.is_some()
    }

    fn params(&self) -> Result<ModelParams> {
        if let (Some(kappa), Some(m)) = (&self.kappa, self.m) {
            return ModelParams::negative_kappa(kappa.clone(), m);
        }
        if let Some(lambda) = &self.lambda {
            return ModelParams::ewens(lambda.clone());
        }
        let theta = self.theta.clone().ok_or_else(|| {
            Error::Parameter("give --theta (with --alpha), --kappa with --m, or --lambda".into())
        })?;
        let alpha = self.alpha.clone().unwrap_or_default();
        ModelParams::two_param(alpha, theta)
    }
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = EnumerationBudget::default().max_objects)]
    max_objects: usize,
    #[arg(long, default_value_t = EnumerationBudget::default().max_ground_set)]
    max_ground: usize,
}

impl BudgetArgs {
    fn budget(&self) -> EnumerationBudget {
        EnumerationBudget {
            max_objects: self.max_objects,
            max_ground_set: self.max_ground,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_error(p, e))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn io_error(p: &std::path::Path, e: io::Error) -> Error {
    Error::Domain(format!("{}: {e}", p.display()))
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleModel {
    Crp,
    Balanced,
    Even,
    TwoStepBalanced,
    TwoStepEven,
}

impl From<SampleModel> for SamplerModel {
    fn from(m: SampleModel) -> Self {
        match m {
            SampleModel::Crp => SamplerModel::Crp,
            SampleModel::Balanced => SamplerModel::Balanced,
            SampleModel::Even => SamplerModel::Even,
            SampleModel::TwoStepBalanced => SamplerModel::TwoStepBalanced,
            SampleModel::TwoStepEven => SamplerModel::TwoStepEven,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    model: SampleModel,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    j: usize,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stream of the generator; distinct streams are independent.
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Also write one seating trace per draw (line-delimited) to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum PmfModel {
    Crp,
    Ewens,
    Balanced,
    BalancedLimit,
    TwoStepBalanced,
    Even,
    EvenLimit,
    TwoStepEven,
    EwensInteger,
    BalancedInteger,
    EvenInteger,
    Permutation,
    JointBalanced,
    JointEven,
}

impl PmfModel {
    fn partition_law(self) -> Option<PartitionLaw> {
        Some(match self {
            PmfModel::Crp => PartitionLaw::TwoParam,
            PmfModel::Ewens => PartitionLaw::Ewens,
            PmfModel::Balanced => PartitionLaw::Balanced,
            PmfModel::BalancedLimit => PartitionLaw::BalancedLimit,
            PmfModel::TwoStepBalanced => PartitionLaw::TwoStepBalanced,
            PmfModel::Even => PartitionLaw::Even,
            PmfModel::EvenLimit => PartitionLaw::EvenLimit,
            PmfModel::TwoStepEven => PartitionLaw::TwoStepEven,
            _ => return None,
        })
    }

    fn integer_law(self) -> Option<IntegerLaw> {
        Some(match self {
            PmfModel::EwensInteger => IntegerLaw::Ewens,
            PmfModel::BalancedInteger => IntegerLaw::Balanced,
            PmfModel::EvenInteger => IntegerLaw::Even,
            _ => return None,
        })
    }
}

#[derive(Args)]
struct PmfArgs {
    #[arg(long, value_enum)]
    model: PmfModel,
    /// Partition ("1 3|2 4"), permutation ("2 3 1") or integer partition ("3 1").
    #[arg(long)]
    object: String,
    /// Group count; inferred from the object when omitted.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    j: usize,
    /// Matchings of the joint balanced law, separated by ';'.
    #[arg(long)]
    matchings: Option<String>,
    /// Permutation of the joint even law.
    #[arg(long)]
    sigma: Option<String>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Partitions,
    Balanced,
    Even,
    Permutations,
    IntegerPartitions,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, value_enum)]
    class: Class,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    j: usize,
    /// Attach exact probabilities under this law.
    #[arg(long, value_enum)]
    model: Option<PmfModel>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = |s: &str| s.parse::<Suite>())]
    suite: Suite,
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = VerifyConfig::default().samples, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Largest `nj` on the exact grid.
    #[arg(long, default_value_t = AuditGrid::default().max_ground)]
    grid_max: usize,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    output: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => cmd_sample(&a),
        Command::Pmf(a) => cmd_pmf(&a),
        Command::Enumerate(a) => cmd_enumerate(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("crp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn write_err(e: io::Error) -> Error {
    Error::Domain(format!("write failed: {e}"))
}

fn cmd_sample(a: &SampleArgs) -> Result<u8> {
    let params = a.params.params()?;
    let sampler = Sampler::new(a.model.into(), a.n, a.j, &params)?;
    let mut rng = RngHandle::new(a.seed, a.stream);
    let mut out = a.output.writer()?;
    let mut trace = match &a.trace {
        Some(p) => Some(BufWriter::new(File::create(p).map_err(|e| io_error(p, e))?)),
        None => None,
    };
    for index in 0..a.samples {
        let draw = sampler.draw(&mut rng);
        match a.output.format {
            Format::Text => writeln!(out, "{}", draw.partition),
            Format::Structured => writeln!(
                out,
                "{}",
                json!({ "index": index, "partition": draw.partition.to_string() })
            ),
        }
        .map_err(write_err)?;
        if let Some(t) = trace.as_mut() {
            let record = json!({
                "index": index,
                "trace": draw.trace,
                "groups": draw.groups.as_ref().map(ToString::to_string),
                "matchings": draw.matchings.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "sigma": draw.sigma.as_ref().map(ToString::to_string),
            });
            writeln!(t, "{record}").map_err(write_err)?;
        }
    }
    out.flush().map_err(write_err)?;
    if let Some(mut t) = trace {
        t.flush().map_err(write_err)?;
    }
    Ok(0)
}

fn parse_list<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<Vec<T>> {
    s.split(';').map(|x| x.trim().parse()).collect()
}

fn infer_n(given: Option<usize>, ground: usize, j: usize) -> Result<usize> {
    if j == 0 {
        return Err(Error::Domain("j must be positive".into()));
    }
    let n = given.unwrap_or(ground / j);
    if n * j != ground {
        return Err(Error::Domain(format!(
            "object on [{ground}] does not match n = {n}, j = {j}"
        )));
    }
    Ok(n)
}

fn cmd_pmf(a: &PmfArgs) -> Result<u8> {
    let params = a.params.params()?;
    let j = a.j;
    let (prob, n): (ProbValue, usize) = if let Some(law) = a.model.partition_law() {
        let b: SetPartition = a.object.parse()?;
        let j = if law.is_grouped() { j } else { 1 };
        let n = infer_n(a.n, b.n(), j)?;
        (law_pmf(law, &b, n, j, &params)?, n)
    } else if let Some(law) = a.model.integer_law() {
        let m: IntegerPartition = a.object.parse()?;
        let p = match law {
            IntegerLaw::Ewens => ewens_integer_pmf(&m, &params)?,
            IntegerLaw::Balanced => balanced_integer_pmf(&m, j, &params)?,
            IntegerLaw::Even => even_integer_pmf(&m, j, &params)?,
        };
        let n = if law == IntegerLaw::Ewens {
            m.n()
        } else {
            infer_n(a.n, m.n(), j)?
        };
        (p, n)
    } else {
        match a.model {
            PmfModel::Permutation => {
                let sigma: Permutation = a.object.parse()?;
                let n = infer_n(a.n, sigma.n(), 1)?;
                (ewens_permutation_pmf(&sigma, &params)?, n)
            }
            PmfModel::JointBalanced => {
                let pi: SetPartition = a.object.parse()?;
                let matchings: Vec<Permutation> = match &a.matchings {
                    Some(s) => parse_list(s)?,
                    None => return Err(Error::Domain("joint-balanced needs --matchings".into())),
                };
                let g = GroupIndexing::new(pi.n(), j)?;
                (joint_balanced_pmf(&pi, &matchings, &g, &params)?, pi.n())
            }
            PmfModel::JointEven => {
                let pi: SetPartition = a.object.parse()?;
                let sigma: Permutation = match &a.sigma {
                    Some(s) => s.parse()?,
                    None => return Err(Error::Domain("joint-even needs --sigma".into())),
                };
                if sigma.n() != pi.n() * j {
                    return Err(Error::Domain(format!(
                        "sigma on [{}] for nj = {}",
                        sigma.n(),
                        pi.n() * j
                    )));
                }
                (joint_even_pmf(&pi, &sigma, &params)?, pi.n())
            }
            _ => unreachable!("partition and integer laws handled above"),
        }
    };
    let mut out = a.output.writer()?;
    match a.output.format {
        Format::Text => {
            if let Some(x) = prob.exact_value() {
                writeln!(out, "prob {x}").map_err(write_err)?;
            }
            writeln!(out, "log_prob {}", prob.ln()).map_err(write_err)?;
        }
        Format::Structured => {
            let record = json!({
                "model": a.model.to_possible_value().map(|v| v.get_name().to_string()),
                "object": a.object,
                "n": n,
                "j": j,
                "params": params,
                "value": prob,
                "log_prob": prob.ln(),
            });
            writeln!(out, "{record}").map_err(write_err)?;
        }
    }
    out.flush().map_err(write_err)?;
    Ok(0)
}

fn law_pmf(
    law: PartitionLaw,
    b: &SetPartition,
    n: usize,
    j: usize,
    params: &ModelParams,
) -> Result<ProbValue> {
    use crp_core::distributions::*;
    if !law.is_grouped() {
        return match law {
            PartitionLaw::Ewens => ewens_partition_pmf(b, params),
            _ => two_param_partition_pmf(b, params),
        };
    }
    let g = GroupIndexing::new(n, j)?;
    match law {
        PartitionLaw::Balanced => balanced_partition_pmf(b, &g, params),
        PartitionLaw::BalancedLimit => balanced_partition_limit_pmf(b, &g, params),
        PartitionLaw::TwoStepBalanced => two_step_balanced_pmf(b, &g, params),
        PartitionLaw::Even => even_partition_pmf(b, &g, params),
        PartitionLaw::EvenLimit => even_partition_limit_pmf(b, &g, params),
        _ => two_step_even_pmf(b, &g, params),
    }
}

fn cmd_enumerate(a: &EnumerateArgs) -> Result<u8> {
    let budget = a.budget.budget();
    let params = if a.params.given() {
        Some(a.params.params()?)
    } else {
        None
    };
    if a.model.is_some() && params.is_none() {
        return Err(Error::Parameter("--model needs parameters".into()));
    }
    let mut probs: Vec<Option<Rational>> = Vec::new();
    let objects: Vec<String> = match a.class {
        Class::Partitions | Class::Balanced | Class::Even => {
            let law = match a.class {
                Class::Partitions => PartitionLaw::TwoParam,
                Class::Balanced => PartitionLaw::Balanced,
                _ => PartitionLaw::Even,
            };
            let support = law.support(a.n, a.j, &budget)?;
            if let (Some(model), Some(p)) = (a.model, &params) {
                let target = model
                    .partition_law()
                    .filter(|m| {
                        m.support(a.n, a.j, &budget)
                            .map(|s| s == support)
                            .unwrap_or(false)
                    })
                    .ok_or_else(|| Error::Domain("model does not live on this class".into()))?;
                for b in &support {
                    probs.push(Some(target.exact(b, a.n, a.j, p)?));
                }
            }
            support.iter().map(ToString::to_string).collect()
        }
        Class::Permutations => {
            let support = enumerate_permutations(a.n, &budget)?;
            if let (Some(model), Some(p)) = (a.model, &params) {
                if !matches!(model, PmfModel::Permutation) {
                    return Err(Error::Domain("model does not live on this class".into()));
                }
                for s in &support {
                    probs.push(ewens_permutation_pmf(s, p)?.exact_value().cloned());
                }
            }
            support.iter().map(ToString::to_string).collect()
        }
        Class::IntegerPartitions => {
            let support = enumerate_integer_partitions(a.n, &budget)?;
            let law = a
                .model
                .map(|m| {
                    m.integer_law()
                        .ok_or_else(|| Error::Domain("model does not live on this class".into()))
                })
                .transpose()?;
            let support: Vec<IntegerPartition> = match law {
                Some(IntegerLaw::Balanced | IntegerLaw::Even) => support
                    .iter()
                    .map(|m| m.scale_parts(a.j))
                    .collect::<Result<_>>()?,
                _ => support,
            };
            if let (Some(law), Some(p)) = (law, &params) {
                for m in &support {
                    probs.push(Some(law.exact(m, a.j, p)?));
                }
            }
            support.iter().map(ToString::to_string).collect()
        }
    };
    let mut out = a.output.writer()?;
    for (i, o) in objects.iter().enumerate() {
        let p = probs.get(i).cloned().flatten();
        match a.output.format {
            Format::Text => match &p {
                Some(p) => writeln!(out, "{o}\t{p}"),
                None => writeln!(out, "{o}"),
            },
            Format::Structured => {
                let mut record = json!({ "object": o });
                if let Some(p) = &p {
                    record["prob"] =
                        json!({ "num": p.numer().to_string(), "den": p.denom().to_string() });
                }
                writeln!(out, "{record}")
            }
        }
        .map_err(write_err)?;
    }
    out.flush().map_err(write_err)?;
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let cfg = VerifyConfig {
        grid: AuditGrid {
            max_ground: a.grid_max,
            ..AuditGrid::default()
        },
        budget: a.budget.budget(),
        seed: a.seed,
        samples: a.samples,
        ..VerifyConfig::default()
    };
    let report = run_suite(a.suite, &cfg)?;
    let mut out = a.output.writer()?;
    match a.output.format {
        Format::Text => write!(out, "{}", report.summary()),
        Format::Structured => (|| {
            for c in &report.checks {
                writeln!(out, "{}", json!(c))?;
            }
            if let Some(audit) = &report.audit {
                for r in &audit.records {
                    writeln!(out, "{}", json!(r))?;
                }
            }
            writeln!(
                out,
                "{}",
                json!({ "suite": report.suite, "passed": report.passed })
            )
        })(),
    }
    .map_err(write_err)?;
    out.flush().map_err(write_err)?;
    if a.suite == Suite::ClaimsAudit {
        return Ok(0);
    }
    Ok(if report.passed { 0 } else { 1 })
}
