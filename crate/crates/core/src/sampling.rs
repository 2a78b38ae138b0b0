//! Edge-query sampling over a hidden similarity graph.
//!
//! A [`QueryOracle`] owns the hidden graph and reveals single entries on
//! request. The samplers here decide which entries to reveal:
//!
//! * [`uniform_without_replacement`]: `m` distinct edges, each observed weight
//!   rescaled by `1/p` with `p = m / C(n,2)` so that `E[W̃] = W`.
//! * [`mixed_adaptive_without_replacement`]: at every step a fair coin picks
//!   either a uniform unseen edge or one drawn from a state-dependent
//!   [`Proposal`]. Weights are stored raw (the scheme is biased).
//! * [`unbiased_with_replacement`]: independent draws from the mixture
//!   `p̃(e) = ½ q(e) + ½ / C(n,2)` over all edges, with importance weights
//!   `w_e / p̃(e)` averaged over the `m` draws.
//!
//! Uniform draws consume a partial Fisher–Yates shuffle over the edge list, so
//! the first `m` edges of a run never depend on how many edges are drawn
//! afterwards.

use std::fmt;
use std::io::Write;

use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{connected_components, num_pairs, Graph, PairIndex, UnionFind};
use crate::rng::{self, streams, Rng};

/// Reveals entries of a hidden graph and counts queries.
#[derive(Debug, Clone)]
pub struct QueryOracle {
    hidden: Graph,
    index: PairIndex,
    queried: Vec<bool>,
    used: usize,
    budget: Option<usize>,
}

impl QueryOracle {
    /// The hidden graph must have weights in `[0, 1]`.
    pub fn new(hidden: Graph) -> Result<Self> {
        if !hidden.is_unit_bounded() {
            return Err(Error::InvalidGraph(
                "hidden similarity weights must lie in [0, 1]".into(),
            ));
        }
        let index = PairIndex::new(hidden.n());
        Ok(Self {
            queried: vec![false; index.len()],
            hidden,
            index,
            used: 0,
            budget: None,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    pub fn queries_used(&self) -> usize {
        self.used
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    pub fn remaining_budget(&self) -> Option<usize> {
        self.budget.map(|b| b - self.used)
    }

    pub fn is_queried(&self, i: usize, j: usize) -> bool {
        self.queried[self.index.index(i, j)]
    }

    fn charge(&mut self, i: usize, j: usize) -> Result<usize> {
        let n = self.n();
        if i >= n || j >= n {
            return Err(Error::VertexOutOfRange { index: i.max(j), n });
        }
        if i == j {
            return Err(Error::InvalidArgument(format!("({i}, {i}) is not an edge")));
        }
        if let Some(budget) = self.budget {
            if self.used >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
        }
        Ok(self.index.index(i, j))
    }

    /// Reveals `w_ij`; asking for an already revealed edge is an error.
    pub fn query(&mut self, i: usize, j: usize) -> Result<f64> {
        let e = self.charge(i, j)?;
        if self.queried[e] {
            return Err(Error::RepeatedQuery(i.min(j), i.max(j)));
        }
        self.queried[e] = true;
        self.used += 1;
        Ok(self.hidden.weight(i, j))
    }

    /// Reveals `w_ij` for sampling with replacement; every call is charged.
    pub fn requery(&mut self, i: usize, j: usize) -> Result<f64> {
        let e = self.charge(i, j)?;
        self.queried[e] = true;
        self.used += 1;
        Ok(self.hidden.weight(i, j))
    }

    fn ensure_budget(&self, m: usize) -> Result<()> {
        match self.remaining_budget() {
            Some(left) if m > left => Err(Error::TooManyEdges {
                requested: m,
                available: left,
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    UniformRescaled,
    MixedAdaptive,
    Clus2k,
    WithReplacement,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::UniformRescaled => "uniform-rescaled",
            Scheme::MixedAdaptive => "mixed-adaptive",
            Scheme::Clus2k => "clus2k",
            Scheme::WithReplacement => "with-replacement",
        })
    }
}

/// The observed approximation `W̃` together with what was queried.
///
/// Unobserved entries of `W̃` are zero.
#[derive(Debug, Clone)]
pub struct SampledGraph {
    graph: Graph,
    index: PairIndex,
    observed: Vec<bool>,
    num_observed: usize,
    m: usize,
    p: Option<f64>,
    scheme: Scheme,
}

impl SampledGraph {
    pub(crate) fn new(n: usize, scheme: Scheme) -> Self {
        let index = PairIndex::new(n);
        Self {
            graph: Graph::empty(n),
            index,
            observed: vec![false; index.len()],
            num_observed: 0,
            m: 0,
            p: None,
            scheme,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Number of queries spent.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `m / C(n,2)` for uniformly rescaled samples.
    pub fn p(&self) -> Option<f64> {
        self.p
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        i != j && self.observed[self.index.index(i, j)]
    }

    pub(crate) fn is_observed_index(&self, e: usize) -> bool {
        self.observed[e]
    }

    pub fn num_observed(&self) -> usize {
        self.num_observed
    }

    pub fn num_unseen(&self) -> usize {
        self.index.len() - self.num_observed
    }

    pub fn pair_index(&self) -> PairIndex {
        self.index
    }

    pub fn observed_edges(&self) -> Vec<(usize, usize)> {
        self.observed
            .iter()
            .enumerate()
            .filter(|(_, &seen)| seen)
            .map(|(e, _)| self.index.pair(e))
            .collect()
    }

    /// Stores a raw observation.
    pub(crate) fn record(&mut self, i: usize, j: usize, w: f64) {
        let e = self.index.index(i, j);
        if !self.observed[e] {
            self.observed[e] = true;
            self.num_observed += 1;
        }
        self.m += 1;
        self.graph.set_symmetric(i, j, w);
    }

    /// Adds an importance-weighted contribution (with-replacement sampling).
    pub(crate) fn accumulate(&mut self, i: usize, j: usize, w: f64) {
        let e = self.index.index(i, j);
        if !self.observed[e] {
            self.observed[e] = true;
            self.num_observed += 1;
        }
        self.m += 1;
        self.graph.add_symmetric(i, j, w);
    }

    pub(crate) fn rescaled(&self, factor: f64, p: Option<f64>) -> Self {
        let mut out = self.clone();
        out.graph = Graph::from_matrix_unchecked(self.graph.weights() * factor);
        out.p = p;
        out
    }
}

/// Unseen edges in a partial Fisher–Yates shuffle of `0..C(n,2)`.
#[derive(Debug, Clone)]
pub(crate) struct EdgePool {
    order: Vec<usize>,
    position: Vec<usize>,
    next: usize,
}

impl EdgePool {
    pub(crate) fn new(total: usize) -> Self {
        Self {
            order: (0..total).collect(),
            position: (0..total).collect(),
            next: 0,
        }
    }

    pub(crate) fn remaining(&self) -> usize {
        self.order.len() - self.next
    }

    pub(crate) fn is_unseen(&self, e: usize) -> bool {
        self.position[e] >= self.next
    }

    pub(crate) fn draw_uniform(&mut self, rng: &mut Rng) -> usize {
        debug_assert!(self.remaining() > 0);
        let pos = rng.random_range(self.next..self.order.len());
        self.take_at(pos)
    }

    pub(crate) fn take(&mut self, e: usize) -> usize {
        debug_assert!(self.is_unseen(e));
        self.take_at(self.position[e])
    }

    fn take_at(&mut self, pos: usize) -> usize {
        let e = self.order[pos];
        let displaced = self.order[self.next];
        self.order.swap(pos, self.next);
        self.position[displaced] = pos;
        self.position[e] = self.next;
        self.next += 1;
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepSource {
    Uniform,
    Proposal,
    Fallback,
}

impl fmt::Display for StepSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepSource::Uniform => "uniform",
            StepSource::Proposal => "proposal",
            StepSource::Fallback => "fallback",
        })
    }
}

/// One query. `step` counts from 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryStep {
    pub step: usize,
    pub source: StepSource,
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    /// Over-clustering epoch in effect (CLUS2K only).
    pub epoch: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    steps: Vec<TrajectoryStep>,
}

impl Trajectory {
    pub fn steps(&self) -> &[TrajectoryStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub(crate) fn push(&mut self, step: TrajectoryStep) {
        self.steps.push(step);
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.steps.iter().map(|s| (s.i.min(s.j), s.i.max(s.j)))
    }

    pub fn count_source(&self, source: StepSource) -> usize {
        self.steps.iter().filter(|s| s.source == source).count()
    }

    /// Rebuilds the raw observed matrix after the first `steps` queries.
    pub fn replay(&self, n: usize, steps: usize) -> Graph {
        let mut g = Graph::empty(n);
        for s in &self.steps[..steps.min(self.steps.len())] {
            g.set_symmetric(s.i, s.j, s.weight);
        }
        g
    }

    /// First step after which the positive-weight observed graph has at most
    /// `target` connected components.
    pub fn first_step_with_components(&self, n: usize, target: usize) -> Option<usize> {
        let mut uf = UnionFind::new(n);
        if uf.set_count() <= target {
            return Some(0);
        }
        for s in &self.steps {
            if s.weight > 0.0 {
                uf.union(s.i, s.j);
            }
            if uf.set_count() <= target {
                return Some(s.step);
            }
        }
        None
    }

    /// CSV with header `step,source,i,j,w`, plus `clusterEpoch` when requested.
    pub fn write_csv<W: Write>(&self, out: W, with_epoch: bool) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        if with_epoch {
            wtr.write_record(["step", "source", "i", "j", "w", "clusterEpoch"])?;
        } else {
            wtr.write_record(["step", "source", "i", "j", "w"])?;
        }
        for s in &self.steps {
            let mut row = vec![
                s.step.to_string(),
                s.source.to_string(),
                s.i.to_string(),
                s.j.to_string(),
                format!("{}", s.weight),
            ];
            if with_epoch {
                row.push(s.epoch.map(|e| e.to_string()).unwrap_or_default());
            }
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, with_epoch: bool) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, with_epoch).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }
}

/// A distribution over edges proposed from the current sample.
///
/// Without-replacement schemes renormalize it over unseen edges; mass on
/// seen edges is dropped.
#[derive(Debug, Clone, PartialEq)]
pub enum ProposalDistribution {
    /// Uniform over the scheme's candidate edges.
    Uniform,
    /// Nonnegative (unnormalized) masses on edges.
    Weighted(Vec<((usize, usize), f64)>),
}

impl ProposalDistribution {
    pub fn weighted(entries: Vec<((usize, usize), f64)>) -> Result<Self> {
        if let Some(&(e, w)) = entries.iter().find(|(_, w)| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "proposal mass {w} on edge {e:?} is not a finite nonnegative number"
            )));
        }
        Ok(Self::Weighted(entries))
    }

    pub fn point_mass(i: usize, j: usize) -> Self {
        Self::Weighted(vec![((i, j), 1.0)])
    }

    /// Normalized masses restricted to unseen edges, keyed by pair index.
    /// `None` when nothing unseen carries positive mass.
    pub(crate) fn over_unseen(&self, state: &SampledGraph) -> Option<Vec<(usize, f64)>> {
        let index = state.pair_index();
        let entries: Vec<(usize, f64)> = match self {
            ProposalDistribution::Uniform => (0..index.len())
                .filter(|&e| !state.is_observed_index(e))
                .map(|e| (e, 1.0))
                .collect(),
            ProposalDistribution::Weighted(list) => list
                .iter()
                .filter(|&&((i, j), w)| i != j && w > 0.0 && !state.is_observed(i, j))
                .map(|&((i, j), w)| (index.index(i, j), w))
                .collect(),
        };
        normalize(entries)
    }

    /// Normalized masses over all edges, keyed by pair index.
    pub(crate) fn over_all(&self, index: PairIndex) -> Option<Vec<(usize, f64)>> {
        let entries: Vec<(usize, f64)> = match self {
            ProposalDistribution::Uniform => (0..index.len()).map(|e| (e, 1.0)).collect(),
            ProposalDistribution::Weighted(list) => list
                .iter()
                .filter(|&&((i, j), w)| i != j && w > 0.0)
                .map(|&((i, j), w)| (index.index(i, j), w))
                .collect(),
        };
        normalize(entries)
    }
}

fn normalize(mut entries: Vec<(usize, f64)>) -> Option<Vec<(usize, f64)>> {
    if entries.is_empty() {
        return None;
    }
    entries.sort_unstable_by_key(|&(e, _)| e);
    entries.dedup_by(|b, a| {
        if a.0 == b.0 {
            a.1 += b.1;
            true
        } else {
            false
        }
    });
    let total: f64 = entries.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return None;
    }
    for (_, w) in &mut entries {
        *w /= total;
    }
    Some(entries)
}

fn draw_weighted(entries: &[(usize, f64)], rng: &mut Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(e, w) in entries {
        acc += w;
        if u < acc {
            return e;
        }
    }
    entries.last().expect("nonempty support").0
}

/// Maps the current sample to a proposal over edges; `None` means "no
/// proposal" and the caller falls back to uniform.
///
/// For [`unbiased_with_replacement`] the state's weights are the running sums
/// of importance-weighted observations.
pub trait Proposal {
    fn propose(&self, state: &SampledGraph) -> Option<ProposalDistribution>;
}

impl<F> Proposal for F
where
    F: Fn(&SampledGraph) -> Option<ProposalDistribution>,
{
    fn propose(&self, state: &SampledGraph) -> Option<ProposalDistribution> {
        self(state)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UniformProposal;

impl Proposal for UniformProposal {
    fn propose(&self, _: &SampledGraph) -> Option<ProposalDistribution> {
        Some(ProposalDistribution::Uniform)
    }
}

/// The smallest-component joining proposal; see [`component_join_proposal`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ComponentJoin;

impl Proposal for ComponentJoin {
    fn propose(&self, state: &SampledGraph) -> Option<ProposalDistribution> {
        component_join_proposal(state)
    }
}

/// Uniform over unseen edges leaving a smallest connected component of the
/// positive-weight observed graph (ties: the component holding the lowest
/// vertex). If every such edge is already seen, uniform over all unseen
/// edges. `None` when the observed graph is connected.
pub fn component_join_proposal(state: &SampledGraph) -> Option<ProposalDistribution> {
    let comps = connected_components(state.graph());
    if comps.count() < 2 {
        return None;
    }
    let sizes = comps.sizes();
    let smallest = (0..comps.count())
        .min_by_key(|&c| (sizes[c], c))
        .expect("at least two components");
    let labels = comps.labels();
    let inside: Vec<usize> = (0..state.n()).filter(|&v| labels[v] == smallest).collect();
    let mut support = Vec::new();
    for &u in &inside {
        for v in 0..state.n() {
            if labels[v] != smallest && !state.is_observed(u, v) {
                support.push(((u.min(v), u.max(v)), 1.0));
            }
        }
    }
    if support.is_empty() {
        return Some(ProposalDistribution::Uniform);
    }
    support.sort_by_key(|&(e, _)| e);
    Some(ProposalDistribution::Weighted(support))
}

/// How the mixture coin behaves. `Fair` is the algorithm; the forced variants
/// exist for testing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coin {
    #[default]
    Fair,
    AlwaysUniform,
    AlwaysProposal,
}

impl Coin {
    pub(crate) fn flip_uniform(self, rng: &mut Rng) -> bool {
        match self {
            Coin::Fair => rng.random_bool(0.5),
            Coin::AlwaysUniform => true,
            Coin::AlwaysProposal => false,
        }
    }
}

/// Step-wise uniform sampling without replacement. Weights are held raw and
/// rescaled in [`UniformSampler::snapshot`].
#[derive(Debug, Clone)]
pub struct UniformSampler {
    pool: EdgePool,
    rng: Rng,
    raw: SampledGraph,
    trajectory: Trajectory,
}

impl UniformSampler {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            pool: EdgePool::new(num_pairs(n)),
            rng: rng::stream(seed, streams::UNIFORM_EDGES),
            raw: SampledGraph::new(n, Scheme::UniformRescaled),
            trajectory: Trajectory::default(),
        }
    }

    pub fn step(&mut self, oracle: &mut QueryOracle) -> Result<&TrajectoryStep> {
        if self.pool.remaining() == 0 {
            return Err(Error::TooManyEdges {
                requested: self.raw.m() + 1,
                available: self.raw.m(),
            });
        }
        let e = self.pool.draw_uniform(&mut self.rng);
        let (i, j) = self.raw.pair_index().pair(e);
        let w = oracle.query(i, j)?;
        self.raw.record(i, j, w);
        self.trajectory.push(TrajectoryStep {
            step: self.raw.m(),
            source: StepSource::Uniform,
            i,
            j,
            weight: w,
            epoch: None,
        });
        Ok(self.trajectory.steps.last().expect("just pushed"))
    }

    pub fn queries(&self) -> usize {
        self.raw.m()
    }

    /// `W̃` with observed entries divided by `p = m / C(n,2)`.
    pub fn snapshot(&self) -> SampledGraph {
        let total = num_pairs(self.raw.n());
        let m = self.raw.m();
        if m == 0 {
            return self.raw.rescaled(1.0, Some(0.0));
        }
        let p = m as f64 / total as f64;
        self.raw.rescaled(1.0 / p, Some(p))
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }
}

/// `m` distinct uniformly chosen edges, observed weights rescaled by `1/p`.
pub fn uniform_without_replacement(
    oracle: &mut QueryOracle,
    m: usize,
    seed: u64,
) -> Result<SampledGraph> {
    let total = num_pairs(oracle.n());
    if m > total {
        return Err(Error::TooManyEdges {
            requested: m,
            available: total,
        });
    }
    oracle.ensure_budget(m)?;
    let mut sampler = UniformSampler::new(oracle.n(), seed);
    for _ in 0..m {
        sampler.step(oracle)?;
    }
    Ok(sampler.snapshot())
}

/// Per-step selection probabilities of the ½-uniform / ½-proposal mixture over
/// the currently unseen edges. Proposal mass on seen edges is renormalized
/// away; an empty proposal support leaves the pure uniform distribution.
pub fn mixture_distribution(
    state: &SampledGraph,
    proposal: Option<&ProposalDistribution>,
) -> Vec<((usize, usize), f64)> {
    let index = state.pair_index();
    let unseen: Vec<usize> = (0..index.len()).filter(|&e| !state.is_observed_index(e)).collect();
    if unseen.is_empty() {
        return Vec::new();
    }
    let uniform = 1.0 / unseen.len() as f64;
    let q = proposal.and_then(|p| p.over_unseen(state));
    let mut probs: Vec<f64> = vec![if q.is_some() { 0.5 * uniform } else { uniform }; unseen.len()];
    if let Some(q) = q {
        for (e, mass) in q {
            let k = unseen.binary_search(&e).expect("proposal restricted to unseen edges");
            probs[k] += 0.5 * mass;
        }
    }
    unseen.into_iter().map(|e| index.pair(e)).zip(probs).collect()
}

/// Step-wise biased mixed adaptive sampler (no rescaling).
pub struct MixedAdaptiveSampler<P> {
    proposal: P,
    coin: Coin,
    pool: EdgePool,
    uniform_rng: Rng,
    coin_rng: Rng,
    proposal_rng: Rng,
    state: SampledGraph,
    trajectory: Trajectory,
}

impl<P: Proposal> MixedAdaptiveSampler<P> {
    pub fn new(n: usize, proposal: P, seed: u64) -> Self {
        Self {
            proposal,
            coin: Coin::Fair,
            pool: EdgePool::new(num_pairs(n)),
            uniform_rng: rng::stream(seed, streams::UNIFORM_EDGES),
            coin_rng: rng::stream(seed, streams::COIN),
            proposal_rng: rng::stream(seed, streams::PROPOSAL),
            state: SampledGraph::new(n, Scheme::MixedAdaptive),
            trajectory: Trajectory::default(),
        }
    }

    pub fn with_coin(mut self, coin: Coin) -> Self {
        self.coin = coin;
        self
    }

    pub fn state(&self) -> &SampledGraph {
        &self.state
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }

    pub fn into_parts(self) -> (SampledGraph, Trajectory) {
        (self.state, self.trajectory)
    }

    pub fn step(&mut self, oracle: &mut QueryOracle) -> Result<&TrajectoryStep> {
        if self.pool.remaining() == 0 {
            return Err(Error::TooManyEdges {
                requested: self.state.m() + 1,
                available: self.state.m(),
            });
        }
        let (e, source) = if self.coin.flip_uniform(&mut self.coin_rng) {
            (self.pool.draw_uniform(&mut self.uniform_rng), StepSource::Uniform)
        } else {
            match self
                .proposal
                .propose(&self.state)
                .and_then(|q| q.over_unseen(&self.state))
            {
                Some(q) => {
                    let e = draw_weighted(&q, &mut self.proposal_rng);
                    (self.pool.take(e), StepSource::Proposal)
                }
                None => (self.pool.draw_uniform(&mut self.uniform_rng), StepSource::Fallback),
            }
        };
        let (i, j) = self.state.pair_index().pair(e);
        let w = oracle.query(i, j)?;
        self.state.record(i, j, w);
        self.trajectory.push(TrajectoryStep {
            step: self.state.m(),
            source,
            i,
            j,
            weight: w,
            epoch: None,
        });
        Ok(self.trajectory.steps.last().expect("just pushed"))
    }
}

/// Biased adaptive sampling without replacement: each step takes a uniform
/// unseen edge or, with probability ½, one drawn from `proposal`. Raw weights.
pub fn mixed_adaptive_without_replacement<P: Proposal>(
    oracle: &mut QueryOracle,
    proposal: P,
    m: usize,
    seed: u64,
) -> Result<(SampledGraph, Trajectory)> {
    let total = num_pairs(oracle.n());
    if m > total {
        return Err(Error::TooManyEdges {
            requested: m,
            available: total,
        });
    }
    oracle.ensure_budget(m)?;
    let mut sampler = MixedAdaptiveSampler::new(oracle.n(), proposal, seed);
    for _ in 0..m {
        sampler.step(oracle)?;
    }
    Ok(sampler.into_parts())
}

/// Step-wise with-replacement sampler; see [`unbiased_with_replacement`].
pub struct WithReplacementSampler<P> {
    proposal: P,
    uniform_rng: Rng,
    coin_rng: Rng,
    proposal_rng: Rng,
    sums: SampledGraph,
    trajectory: Trajectory,
}

impl<P: Proposal> WithReplacementSampler<P> {
    pub fn new(n: usize, proposal: P, seed: u64) -> Self {
        Self {
            proposal,
            uniform_rng: rng::stream(seed, streams::UNIFORM_EDGES),
            coin_rng: rng::stream(seed, streams::COIN),
            proposal_rng: rng::stream(seed, streams::PROPOSAL),
            sums: SampledGraph::new(n, Scheme::WithReplacement),
            trajectory: Trajectory::default(),
        }
    }

    pub fn step(&mut self, oracle: &mut QueryOracle) -> Result<&TrajectoryStep> {
        let index = self.sums.pair_index();
        let total = index.len();
        if total == 0 {
            return Err(Error::InvalidArgument("graph has no vertex pairs".into()));
        }
        let q = self
            .proposal
            .propose(&self.sums)
            .and_then(|q| q.over_all(index));
        let (e, source) = if self.coin_rng.random_bool(0.5) {
            (self.uniform_rng.random_range(0..total), StepSource::Uniform)
        } else {
            match &q {
                Some(q) => (draw_weighted(q, &mut self.proposal_rng), StepSource::Proposal),
                None => (self.uniform_rng.random_range(0..total), StepSource::Fallback),
            }
        };
        let q_e = match &q {
            Some(q) => q
                .binary_search_by_key(&e, |&(k, _)| k)
                .map(|k| q[k].1)
                .unwrap_or(0.0),
            None => 1.0 / total as f64,
        };
        let mixed = 0.5 * q_e + 0.5 / total as f64;
        let (i, j) = index.pair(e);
        let w = oracle.requery(i, j)?;
        self.sums.accumulate(i, j, w / mixed);
        self.trajectory.push(TrajectoryStep {
            step: self.sums.m(),
            source,
            i,
            j,
            weight: w,
            epoch: None,
        });
        Ok(self.trajectory.steps.last().expect("just pushed"))
    }

    /// `W̃ = (1/m) Σ_k w_{e_k} / p̃_k(e_k)`.
    pub fn snapshot(&self) -> SampledGraph {
        let m = self.sums.m();
        if m == 0 {
            return self.sums.clone();
        }
        self.sums.rescaled(1.0 / m as f64, None)
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }
}

/// Unbiased adaptive sampling with replacement. Each of the `m` draws comes
/// from `p̃(e) = ½ q(e) + 1/(n(n-1))`, where `q` is the proposal normalized
/// over all edges (uniform if absent), and contributes `w_e / (m p̃(e))` to
/// `W̃`. Repeated draws accumulate.
pub fn unbiased_with_replacement<P: Proposal>(
    oracle: &mut QueryOracle,
    proposal: P,
    m: usize,
    seed: u64,
) -> Result<SampledGraph> {
    if m == 0 {
        return Err(Error::InvalidArgument("with-replacement sampling needs m >= 1".into()));
    }
    if oracle.n() < 2 {
        return Err(Error::InvalidArgument("graph has no vertex pairs".into()));
    }
    oracle.ensure_budget(m)?;
    let mut sampler = WithReplacementSampler::new(oracle.n(), proposal, seed);
    for _ in 0..m {
        sampler.step(oracle)?;
    }
    Ok(sampler.snapshot())
}
