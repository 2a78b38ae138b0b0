//! CLUS2K: biased adaptive sampling that mixes uniform queries with queries
//! between two clusters of an over-clustering of the current sample.
//!
//! Each query is, with probability ½, a uniformly random unseen edge.
//! Otherwise the observed matrix is over-clustered into `overcluster_factor·k`
//! parts, two distinct parts are drawn uniformly, and an unseen edge between
//! them is drawn uniformly. Observed weights are stored raw.
//!
//! The over-clustering is recomputed once per epoch of `recluster_period`
//! queries, from the observed matrix at the start of the epoch. Before the
//! observed graph has fewer connected components than the requested number of
//! parts, the parts are its components grouped into contiguous blocks (by
//! lowest vertex), since the spectral embedding of such a graph is
//! undetermined.

use std::rc::Rc;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{connected_components, num_pairs, Graph};
use crate::rng::{self, streams, Rng};
use crate::sampling::{
    Coin, EdgePool, QueryOracle, SampledGraph, Scheme, StepSource, Trajectory, TrajectoryStep,
};
use crate::spectral::{spectral_clustering, Clustering, LaplacianMode};

/// Cluster pairs tried before falling back to a uniform draw.
pub const PAIR_REDRAWS: usize = 10;

const EPOCH_SALT: u64 = 0xC1u64 << 56;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Clus2kConfig {
    pub k: usize,
    pub overcluster_factor: usize,
    pub recluster_period: usize,
    pub mode: LaplacianMode,
    pub batch_size: usize,
    pub seed: u64,
    pub coin: Coin,
}

impl Clus2kConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            overcluster_factor: 2,
            recluster_period: 1,
            mode: LaplacianMode::Unnormalized,
            batch_size: 1,
            seed,
            coin: Coin::Fair,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidArgument("CLUS2K needs k >= 2".into()));
        }
        if self.overcluster_factor < 1 || self.recluster_period < 1 || self.batch_size < 1 {
            return Err(Error::InvalidArgument(
                "overcluster factor, recluster period and batch size must be >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn num_overclusters(&self) -> usize {
        self.overcluster_factor * self.k
    }

    fn epoch_seed(&self, epoch: usize) -> u64 {
        rng::mix(self.seed ^ EPOCH_SALT, epoch as u64)
    }
}

/// Partition of the observed graph into `parts` clusters (fewer only when
/// `parts > n`): singletons when `parts >= n`, grouped components while the
/// graph has at least `parts` components, spectral clustering otherwise.
pub fn overcluster(g: &Graph, parts: usize, mode: LaplacianMode, seed: u64) -> Result<Clustering> {
    let n = g.n();
    if parts == 0 {
        return Err(Error::InvalidArgument("need at least one cluster".into()));
    }
    if parts >= n {
        return Clustering::new((0..n).collect(), n.max(1));
    }
    let comps = connected_components(g);
    if comps.count() >= parts {
        let count = comps.count();
        let labels = comps.labels().iter().map(|&c| c * parts / count).collect();
        return Clustering::new(labels, parts);
    }
    spectral_clustering(g, parts, mode, seed)
}

/// Step-wise CLUS2K sampler.
pub struct Clus2kSampler {
    config: Clus2kConfig,
    pool: EdgePool,
    uniform_rng: Rng,
    coin_rng: Rng,
    proposal_rng: Rng,
    state: SampledGraph,
    trajectory: Trajectory,
    epoch_start: Option<(usize, Graph)>,
    cache: Option<(usize, Rc<Vec<Vec<usize>>>)>,
    batch: Option<(usize, Rc<Vec<Vec<usize>>>, usize)>,
    clusterings_computed: usize,
}

impl Clus2kSampler {
    pub fn new(n: usize, config: Clus2kConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            pool: EdgePool::new(num_pairs(n)),
            uniform_rng: rng::stream(config.seed, streams::UNIFORM_EDGES),
            coin_rng: rng::stream(config.seed, streams::COIN),
            proposal_rng: rng::stream(config.seed, streams::PROPOSAL),
            state: SampledGraph::new(n, Scheme::Clus2k),
            trajectory: Trajectory::default(),
            epoch_start: None,
            cache: None,
            batch: None,
            clusterings_computed: 0,
        })
    }

    pub fn state(&self) -> &SampledGraph {
        &self.state
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }

    pub fn queries(&self) -> usize {
        self.state.m()
    }

    pub fn clusterings_computed(&self) -> usize {
        self.clusterings_computed
    }

    fn groups_for(&mut self, epoch: usize) -> Result<Rc<Vec<Vec<usize>>>> {
        if let Some((e, groups)) = &self.cache {
            if *e == epoch {
                return Ok(groups.clone());
            }
        }
        let (start_epoch, graph) = self.epoch_start.as_ref().expect("epoch snapshot taken");
        debug_assert_eq!(*start_epoch, epoch);
        let clustering = overcluster(
            graph,
            self.config.num_overclusters(),
            self.config.mode,
            self.config.epoch_seed(epoch),
        )?;
        self.clusterings_computed += 1;
        let groups: Vec<Vec<usize>> = clustering
            .members()
            .into_iter()
            .filter(|g| !g.is_empty())
            .collect();
        let groups = Rc::new(groups);
        self.cache = Some((epoch, groups.clone()));
        Ok(groups)
    }

    fn draw_between(&mut self, groups: &[Vec<usize>]) -> Option<usize> {
        if groups.len() < 2 {
            return None;
        }
        let index = self.state.pair_index();
        for _ in 0..PAIR_REDRAWS {
            let a = self.proposal_rng.random_range(0..groups.len());
            let mut b = self.proposal_rng.random_range(0..groups.len() - 1);
            if b >= a {
                b += 1;
            }
            let candidates: Vec<usize> = groups[a]
                .iter()
                .flat_map(|&u| groups[b].iter().map(move |&v| index.index(u, v)))
                .filter(|&e| self.pool.is_unseen(e))
                .collect();
            if !candidates.is_empty() {
                let e = candidates[self.proposal_rng.random_range(0..candidates.len())];
                return Some(self.pool.take(e));
            }
        }
        None
    }

    pub fn step(&mut self, oracle: &mut QueryOracle) -> Result<&TrajectoryStep> {
        if self.pool.remaining() == 0 {
            return Err(Error::TooManyEdges {
                requested: self.state.m() + 1,
                available: self.state.m(),
            });
        }
        let s = self.state.m();
        let period = self.config.recluster_period;
        if s % period == 0 {
            self.epoch_start = Some((s / period, self.state.graph().clone()));
        }
        let current_epoch = s / period;

        let (e, source, epoch) = if let Some((epoch, groups, left)) = self.batch.take() {
            if left > 1 {
                self.batch = Some((epoch, groups.clone(), left - 1));
            }
            match self.draw_between(&groups) {
                Some(e) => (e, StepSource::Proposal, epoch),
                None => (self.pool.draw_uniform(&mut self.uniform_rng), StepSource::Fallback, epoch),
            }
        } else if self.config.coin.flip_uniform(&mut self.coin_rng) {
            (
                self.pool.draw_uniform(&mut self.uniform_rng),
                StepSource::Uniform,
                current_epoch,
            )
        } else {
            let groups = self.groups_for(current_epoch)?;
            if self.config.batch_size > 1 {
                self.batch = Some((current_epoch, groups.clone(), self.config.batch_size - 1));
            }
            match self.draw_between(&groups) {
                Some(e) => (e, StepSource::Proposal, current_epoch),
                None => (
                    self.pool.draw_uniform(&mut self.uniform_rng),
                    StepSource::Fallback,
                    current_epoch,
                ),
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
            epoch: Some(epoch),
        });
        Ok(self.trajectory.steps().last().expect("just pushed"))
    }

    pub fn finish(self) -> Clus2kRun {
        Clus2kRun {
            n: self.state.n(),
            config: self.config,
            sample: self.state,
            trajectory: self.trajectory,
        }
    }
}

/// Outcome of [`clus2k_run`].
#[derive(Debug, Clone)]
pub struct Clus2kRun {
    pub n: usize,
    pub config: Clus2kConfig,
    pub sample: SampledGraph,
    pub trajectory: Trajectory,
}

impl Clus2kRun {
    /// Over-clustering in effect for the query after `step` queries
    /// (`0..=len`), rebuilt from the trajectory.
    pub fn cluster_state(&self, step: usize) -> Result<Clustering> {
        clus2k_cluster_state(&self.trajectory, self.n, &self.config, step)
    }
}

/// Runs `b` CLUS2K queries.
pub fn clus2k_run(oracle: &mut QueryOracle, b: usize, config: Clus2kConfig) -> Result<Clus2kRun> {
    let total = num_pairs(oracle.n());
    let unseen = (0..oracle.n())
        .flat_map(|i| ((i + 1)..oracle.n()).map(move |j| (i, j)))
        .filter(|&(i, j)| !oracle.is_queried(i, j))
        .count();
    if b > unseen {
        return Err(Error::TooManyEdges {
            requested: b,
            available: unseen.min(total),
        });
    }
    if let Some(left) = oracle.remaining_budget() {
        if b > left {
            return Err(Error::TooManyEdges {
                requested: b,
                available: left,
            });
        }
    }
    let mut sampler = Clus2kSampler::new(oracle.n(), config)?;
    for _ in 0..b {
        sampler.step(oracle)?;
    }
    Ok(sampler.finish())
}

/// Over-clustering used for the query following the first `step` queries of
/// a CLUS2K trajectory; `step == trajectory.len()` gives the clustering the
/// next query would use.
pub fn clus2k_cluster_state(
    trajectory: &Trajectory,
    n: usize,
    config: &Clus2kConfig,
    step: usize,
) -> Result<Clustering> {
    if step > trajectory.len() {
        return Err(Error::StepOutOfRange {
            step,
            len: trajectory.len(),
        });
    }
    let period = config.recluster_period;
    let epoch = trajectory
        .steps()
        .get(step)
        .and_then(|s| s.epoch)
        .unwrap_or(step / period);
    let observed = trajectory.replay(n, epoch * period);
    overcluster(
        &observed,
        config.num_overclusters(),
        config.mode,
        config.epoch_seed(epoch),
    )
}
