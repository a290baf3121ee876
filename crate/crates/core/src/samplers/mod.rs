//! Seeded sequential samplers.
//!
//! Every sampler takes its randomness from an explicit generator; with an
//! [`RngHandle`] the output is a pure function of `(seed, stream)`.

mod seating;

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{assemble_balanced, assemble_even, is_j_balanced, is_j_even};
use crate::{Error, GroupIndexing, ModelParams, Permutation, Result, SetPartition};

pub use seating::SeatingRule;
pub(crate) use seating::{exact_join, exact_open, SeatingState};

/// A ChaCha8 generator addressed by `(seed, stream)`.
///
/// Distinct streams of one seed are independent, so parallel workers can
/// each take their own stream and still reproduce.
#[derive(Clone, Debug)]
pub struct RngHandle {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngHandle {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A fresh handle on another stream of the same seed.
    pub fn split(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }
}

impl RngCore for RngHandle {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// One arrival of the seating plan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeatingStep {
    /// The unit picked by each of `nj + 2, ..., nj + j`.
    pub displaced: Vec<usize>,
    /// Table index in order of opening, `None` for a new table.
    pub table: Option<usize>,
}

/// Every random choice made by a balanced or even sampler.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeatingTrace {
    pub rule: SeatingRule,
    pub j: usize,
    pub steps: Vec<SeatingStep>,
}

impl SeatingTrace {
    /// Rebuilds the sampled partition from the recorded choices.
    pub fn replay(&self) -> Result<SetPartition> {
        if self.j == 0 {
            return Err(Error::Domain("j must be positive".into()));
        }
        let mut state = SeatingState::first(self.j);
        for step in &self.steps {
            state.seat(self.rule, &step.displaced, step.table)?;
        }
        SetPartition::from_labels(&state.labels)
    }
}

/// Seating weights as floats, computed exactly and then rounded, so that a
/// weight that vanishes (`theta + alpha k = 0` at `k = m`) is exactly zero.
#[derive(Clone, Debug)]
struct CrpWeights {
    join: Vec<f64>,
    open: Vec<f64>,
}

impl CrpWeights {
    fn new(params: &ModelParams, max: usize) -> Result<Self> {
        let (alpha, theta) = params.alpha_theta()?;
        let f = |x: crate::Rational| x.to_f64().unwrap_or(0.0).max(0.0);
        Ok(Self {
            join: (0..=max).map(|s| f(exact_join(&alpha, s))).collect(),
            open: (0..=max)
                .map(|k| f(exact_open(&alpha, &theta, k)))
                .collect(),
        })
    }

    /// Draws a table for a newcomer given the current table sizes.
    fn choose<R: Rng + ?Sized>(&self, sizes: &[usize], rng: &mut R) -> Option<usize> {
        let open = if sizes.is_empty() {
            1.0
        } else {
            self.open[sizes.len()]
        };
        let total: f64 = sizes.iter().map(|&s| self.join[s]).sum::<f64>() + open;
        let mut u = rng.random::<f64>() * total;
        let mut last = None;
        for (t, &s) in sizes.iter().enumerate() {
            let w = self.join[s];
            if w > 0.0 {
                if u < w {
                    return Some(t);
                }
                u -= w;
                last = Some(t);
            }
        }
        if open > 0.0 {
            None
        } else {
            last
        }
    }
}

fn crp_labels<R: Rng + ?Sized>(n: usize, weights: &CrpWeights, rng: &mut R) -> Vec<usize> {
    let mut sizes: Vec<usize> = Vec::new();
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let t = match weights.choose(&sizes, rng) {
            Some(t) => t,
            None => {
                sizes.push(0);
                sizes.len() - 1
            }
        };
        sizes[t] += 1;
        labels.push(t);
    }
    labels
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(())
}

/// A uniformly random permutation of `[n]`.
pub fn uniform_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut image: Vec<usize> = (1..=n).collect();
    image.shuffle(rng);
    Permutation::new(image).expect("a shuffle is a permutation")
}

/// Which construction a [`Sampler`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerModel {
    Crp,
    Balanced,
    Even,
    TwoStepBalanced,
    TwoStepEven,
}

/// Full output of one draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Draw {
    /// The sampled partition (of `[n]` for the CRP, of `[nj]` otherwise).
    pub partition: SetPartition,
    /// Seating choices, for the balanced and even seating plans.
    pub trace: Option<SeatingTrace>,
    /// Group-level partition of the two-step constructions.
    pub groups: Option<SetPartition>,
    /// Matchings of the two-step balanced construction.
    pub matchings: Vec<Permutation>,
    /// Permutation of `[nj]` of the two-step even construction.
    pub sigma: Option<Permutation>,
}

impl Draw {
    fn plain(partition: SetPartition) -> Self {
        Self {
            partition,
            trace: None,
            groups: None,
            matchings: Vec::new(),
            sigma: None,
        }
    }
}

/// A sampler with its seating weights prepared once, for repeated draws.
#[derive(Clone, Debug)]
pub struct Sampler {
    model: SamplerModel,
    g: GroupIndexing,
    weights: CrpWeights,
}

impl Sampler {
    /// `j` is ignored by [`SamplerModel::Crp`].
    pub fn new(model: SamplerModel, n: usize, j: usize, params: &ModelParams) -> Result<Self> {
        require_positive(n)?;
        let j = if model == SamplerModel::Crp { 1 } else { j };
        let g = GroupIndexing::new(n, j)?;
        let weights = CrpWeights::new(params, g.size())?;
        Ok(Self { model, g, weights })
    }

    pub fn model(&self) -> SamplerModel {
        self.model
    }

    pub fn groups(&self) -> GroupIndexing {
        self.g
    }

    /// Draws only the partition.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SetPartition {
        self.draw(rng).partition
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Draw {
        let (n, j) = (self.g.n(), self.g.j());
        match self.model {
            SamplerModel::Crp => Draw::plain(from_labels(&crp_labels(n, &self.weights, rng))),
            SamplerModel::Balanced | SamplerModel::Even => {
                let rule = if self.model == SamplerModel::Balanced {
                    SeatingRule::Balanced
                } else {
                    SeatingRule::Even
                };
                let (partition, trace) = self.seat(rule, rng);
                Draw {
                    trace: Some(trace),
                    ..Draw::plain(partition)
                }
            }
            SamplerModel::TwoStepBalanced => {
                let pi = from_labels(&crp_labels(n, &self.weights, rng));
                let matchings: Vec<Permutation> =
                    (1..j).map(|_| uniform_permutation(n, rng)).collect();
                let partition = assemble_balanced(&pi, &matchings, &self.g).expect("shapes agree");
                debug_assert!(is_j_balanced(&partition, &self.g).unwrap());
                Draw {
                    groups: Some(pi),
                    matchings,
                    ..Draw::plain(partition)
                }
            }
            SamplerModel::TwoStepEven => {
                let pi = from_labels(&crp_labels(n, &self.weights, rng));
                let sigma = uniform_permutation(n * j, rng);
                let partition = assemble_even(&pi, &sigma, &self.g).expect("shapes agree");
                debug_assert!(is_j_even(&partition, j).unwrap());
                Draw {
                    groups: Some(pi),
                    sigma: Some(sigma),
                    ..Draw::plain(partition)
                }
            }
        }
    }

    fn seat<R: Rng + ?Sized>(
        &self,
        rule: SeatingRule,
        rng: &mut R,
    ) -> (SetPartition, SeatingTrace) {
        let (n, j) = (self.g.n(), self.g.j());
        let mut state = SeatingState::first(j);
        let mut steps = Vec::with_capacity(n.saturating_sub(1));
        for m in 1..n {
            let displaced: Vec<usize> = (2..=j)
                .map(|i| {
                    let k = rng.random_range(0..rule.num_candidates(m, j, i));
                    match rule {
                        SeatingRule::Balanced => k * j + i,
                        SeatingRule::Even => k + 1,
                    }
                })
                .collect();
            let table = self.weights.choose(&state.sizes, rng);
            state
                .seat(rule, &displaced, table)
                .expect("picks drawn from the candidate sets");
            steps.push(SeatingStep { displaced, table });
        }
        let partition = from_labels(&state.labels);
        debug_assert!(match rule {
            SeatingRule::Balanced => is_j_balanced(&partition, &self.g).unwrap(),
            SeatingRule::Even => is_j_even(&partition, j).unwrap(),
        });
        (partition, SeatingTrace { rule, j, steps })
    }
}

fn from_labels(labels: &[usize]) -> SetPartition {
    SetPartition::from_labels(labels).expect("non-empty ground set")
}

/// Two-parameter CRP on `[n]`: element `k + 1` joins block `b` with
/// probability `(#b - alpha)/(k + theta)` and opens a new block with
/// probability `(theta + alpha #B)/(k + theta)`.
pub fn crp_sample<R: Rng + ?Sized>(
    n: usize,
    params: &ModelParams,
    rng: &mut R,
) -> Result<SetPartition> {
    Ok(Sampler::new(SamplerModel::Crp, n, 1, params)?.sample(rng))
}

/// Balanced CRP on `[nj]`: groups of `j` units arrive together.
pub fn balanced_crp_sample<R: Rng + ?Sized>(
    n: usize,
    g: &GroupIndexing,
    params: &ModelParams,
    rng: &mut R,
) -> Result<(SetPartition, SeatingTrace)> {
    let d = Sampler::new(SamplerModel::Balanced, check_n(n, g)?, g.j(), params)?.draw(rng);
    Ok((d.partition, d.trace.expect("seating plans record a trace")))
}

/// Even CRP on `[nj]`.
pub fn even_crp_sample<R: Rng + ?Sized>(
    n: usize,
    g: &GroupIndexing,
    params: &ModelParams,
    rng: &mut R,
) -> Result<(SetPartition, SeatingTrace)> {
    let d = Sampler::new(SamplerModel::Even, check_n(n, g)?, g.j(), params)?.draw(rng);
    Ok((d.partition, d.trace.expect("seating plans record a trace")))
}

/// A two-parameter partition of the groups, `j - 1` uniform matchings and
/// the balanced partition they assemble.
pub fn two_step_balanced_sample<R: Rng + ?Sized>(
    n: usize,
    g: &GroupIndexing,
    params: &ModelParams,
    rng: &mut R,
) -> Result<(SetPartition, Vec<Permutation>, SetPartition)> {
    let d = Sampler::new(SamplerModel::TwoStepBalanced, check_n(n, g)?, g.j(), params)?.draw(rng);
    Ok((d.groups.expect("two-step draw"), d.matchings, d.partition))
}

/// A two-parameter partition of the groups, a uniform permutation of `[nj]`
/// and the even partition they assemble.
pub fn two_step_even_sample<R: Rng + ?Sized>(
    n: usize,
    g: &GroupIndexing,
    params: &ModelParams,
    rng: &mut R,
) -> Result<(SetPartition, Permutation, SetPartition)> {
    let d = Sampler::new(SamplerModel::TwoStepEven, check_n(n, g)?, g.j(), params)?.draw(rng);
    Ok((
        d.groups.expect("two-step draw"),
        d.sigma.expect("two-step draw"),
        d.partition,
    ))
}

fn check_n(n: usize, g: &GroupIndexing) -> Result<usize> {
    if n != g.n() {
        return Err(Error::Domain(format!(
            "n = {n} does not match the indexing with n = {}",
            g.n()
        )));
    }
    Ok(n)
}
