//! Budget sweeps: sample the hidden similarity graph under each scheme,
//! cluster the sample and record purity against the ground truth.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::clus2k::{Clus2kConfig, Clus2kSampler};
use crate::data::{
    circle_centers, gaussian_blobs, load_points_csv, purity, rbf_similarity, rbf_similarity_median,
    two_half_circles, LabeledPoints,
};
use crate::error::{Error, Result};
use crate::graph::{num_pairs, Graph};
use crate::rng::mix;
use crate::sampling::{ComponentJoin, MixedAdaptiveSampler, QueryOracle, UniformSampler, WithReplacementSampler};
use crate::spectral::{spectral_clustering, Clustering, LaplacianMode};

/// Spacing between repetition seeds.
pub const REP_SEED_STRIDE: u64 = 10_007;

const CLUSTERING_SALT: u64 = 0x5EED_C105;

pub const CSV_HEADER: &str = "scheme,budget,rep,seed,purity,wallMillis";
pub const SUMMARY_HEADER: &str = "scheme,budget,reps,meanPurity,stdPurity";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeId {
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "clus2k")]
    Clus2k,
    #[serde(rename = "cjoin")]
    ComponentJoin,
    #[serde(rename = "replacement")]
    WithReplacement,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [
        SchemeId::Uniform,
        SchemeId::Clus2k,
        SchemeId::ComponentJoin,
        SchemeId::WithReplacement,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Uniform => "uniform",
            SchemeId::Clus2k => "clus2k",
            SchemeId::ComponentJoin => "cjoin",
            SchemeId::WithReplacement => "replacement",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    HalfCircles,
    Gaussians,
    Csv,
}

/// Flat experiment configuration, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetKind,
    /// Points per class for the synthetic generators.
    pub n_per_class: usize,
    /// Noise standard deviation of the half circles.
    pub noise: f64,
    /// Number of Gaussian blobs, centered on a circle.
    pub centers: usize,
    pub center_radius: f64,
    pub blob_std: f64,
    pub csv_path: Option<PathBuf>,
    pub data_seed: u64,
    /// RBF bandwidth; when absent, `sigma_scale` times the median pairwise
    /// distance.
    pub sigma: Option<f64>,
    pub sigma_scale: f64,
    pub schemes: Vec<SchemeId>,
    /// Absolute edge budgets. When empty, `budget_fractions` of `C(n,2)`.
    pub budgets: Vec<usize>,
    pub budget_fractions: Vec<f64>,
    pub k: usize,
    pub mode: LaplacianMode,
    pub repetitions: usize,
    pub seed_base: u64,
    pub output: Option<PathBuf>,
    /// Aggregated output; defaults to `<output stem>.summary.csv`.
    pub summary: Option<PathBuf>,
    /// Fill the `wallMillis` column (makes output nondeterministic).
    pub timing: bool,
    pub clus2k_overcluster_factor: usize,
    pub clus2k_recluster_period: usize,
    pub clus2k_batch_size: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetKind::HalfCircles,
            n_per_class: 100,
            noise: 0.05,
            centers: 4,
            center_radius: 10.0,
            blob_std: 1.0,
            csv_path: None,
            data_seed: 0,
            sigma: None,
            sigma_scale: 0.1,
            schemes: vec![SchemeId::Uniform, SchemeId::Clus2k],
            budgets: Vec::new(),
            budget_fractions: default_fractions(),
            k: 2,
            mode: LaplacianMode::Unnormalized,
            repetitions: 5,
            seed_base: 0,
            output: None,
            summary: None,
            timing: false,
            clus2k_overcluster_factor: 2,
            clus2k_recluster_period: 25,
            clus2k_batch_size: 1,
        }
    }
}

/// 1% to 20% in 10 steps.
pub fn default_fractions() -> Vec<f64> {
    (0..10).map(|i| 0.01 + 0.19 * i as f64 / 9.0).collect()
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut cfg = Self::from_toml_str(&text)?;
        // relative dataset paths are taken relative to the config file
        if let (Some(csv), Some(dir)) = (&cfg.csv_path, path.as_ref().parent()) {
            if csv.is_relative() {
                cfg.csv_path = Some(dir.join(csv));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn rep_seed(&self, rep: usize) -> u64 {
        self.seed_base.wrapping_add(rep as u64 * REP_SEED_STRIDE)
    }

    pub fn summary_path(&self) -> Option<PathBuf> {
        self.summary.clone().or_else(|| {
            self.output.as_ref().map(|out| {
                let stem = out.file_stem().map_or("results".into(), |s| s.to_string_lossy().into_owned());
                out.with_file_name(format!("{stem}.summary.csv"))
            })
        })
    }

    pub fn clus2k_config(&self, seed: u64) -> Clus2kConfig {
        let mut c = Clus2kConfig::new(self.k, seed);
        c.overcluster_factor = self.clus2k_overcluster_factor;
        c.recluster_period = self.clus2k_recluster_period;
        c.batch_size = self.clus2k_batch_size;
        c.mode = self.mode;
        c
    }

    /// Budgets for a hidden graph on `n` vertices, validated.
    pub fn resolve_budgets(&self, n: usize) -> Result<Vec<usize>> {
        let total = num_pairs(n);
        let budgets: Vec<usize> = if self.budgets.is_empty() {
            self.budget_fractions
                .iter()
                .map(|f| {
                    if !(*f > 0.0 && *f <= 1.0) {
                        return Err(Error::Config(format!("budget fraction {f} outside (0, 1]")));
                    }
                    Ok(((f * total as f64).round() as usize).max(1))
                })
                .collect::<Result<_>>()?
        } else {
            self.budgets.clone()
        };
        if budgets.is_empty() {
            return Err(Error::Config("no budgets given".into()));
        }
        if budgets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!("budgets must be strictly ascending: {budgets:?}")));
        }
        if budgets[0] == 0 {
            return Err(Error::Config("budgets must be positive".into()));
        }
        let last = *budgets.last().expect("nonempty");
        if last > total {
            return Err(Error::TooManyEdges {
                requested: last,
                available: total,
            });
        }
        Ok(budgets)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("no schemes given".into()));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.schemes.contains(&SchemeId::Clus2k) {
            self.clus2k_config(0).validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn load_dataset(&self) -> Result<LabeledPoints> {
        match self.dataset {
            DatasetKind::HalfCircles => two_half_circles(self.n_per_class, self.noise, self.data_seed),
            DatasetKind::Gaussians => gaussian_blobs(
                self.n_per_class,
                &circle_centers(self.centers, self.center_radius),
                self.blob_std,
                self.data_seed,
            ),
            DatasetKind::Csv => {
                let path = self
                    .csv_path
                    .as_ref()
                    .ok_or_else(|| Error::Config("dataset = \"csv\" needs csv_path".into()))?;
                load_points_csv(path)
            }
        }
    }

    pub fn similarity(&self, points: &LabeledPoints) -> Result<Graph> {
        match self.sigma {
            Some(sigma) => rbf_similarity(&points.points, sigma),
            None => rbf_similarity_median(&points.points, self.sigma_scale),
        }
    }
}

/// One measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultRow {
    pub scheme: SchemeId,
    pub budget: usize,
    pub rep: usize,
    pub seed: u64,
    pub purity: f64,
    pub wall_millis: Option<f64>,
    #[serde(skip)]
    pub queries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryRow {
    pub scheme: SchemeId,
    pub budget: usize,
    pub reps: usize,
    pub mean_purity: f64,
    pub std_purity: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub rows: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
    pub n: usize,
}

enum Sampler {
    Uniform(UniformSampler),
    Clus2k(Box<Clus2kSampler>),
    Join(MixedAdaptiveSampler<ComponentJoin>),
    Replacement(WithReplacementSampler<ComponentJoin>),
}

impl Sampler {
    fn new(scheme: SchemeId, n: usize, seed: u64, cfg: &ExperimentConfig) -> Result<Self> {
        Ok(match scheme {
            SchemeId::Uniform => Sampler::Uniform(UniformSampler::new(n, seed)),
            SchemeId::Clus2k => Sampler::Clus2k(Box::new(Clus2kSampler::new(n, cfg.clus2k_config(seed))?)),
            SchemeId::ComponentJoin => Sampler::Join(MixedAdaptiveSampler::new(n, ComponentJoin, seed)),
            SchemeId::WithReplacement => Sampler::Replacement(WithReplacementSampler::new(n, ComponentJoin, seed)),
        })
    }

    fn step(&mut self, oracle: &mut QueryOracle) -> Result<()> {
        match self {
            Sampler::Uniform(s) => s.step(oracle).map(|_| ()),
            Sampler::Clus2k(s) => s.step(oracle).map(|_| ()),
            Sampler::Join(s) => s.step(oracle).map(|_| ()),
            Sampler::Replacement(s) => s.step(oracle).map(|_| ()),
        }
    }

    fn snapshot(&self) -> Graph {
        match self {
            Sampler::Uniform(s) => s.snapshot().into_graph(),
            Sampler::Clus2k(s) => s.state().graph().clone(),
            Sampler::Join(s) => s.state().graph().clone(),
            Sampler::Replacement(s) => s.snapshot().into_graph(),
        }
    }
}

/// Purity after each budget for one scheme and seed. Budgets must be
/// ascending; all budgets are served from a single sampling run, so the
/// sample at a smaller budget is the prefix of the larger one.
pub fn purity_curve(
    hidden: &Graph,
    truth: &[usize],
    scheme: SchemeId,
    budgets: &[usize],
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<Vec<(usize, f64, usize)>> {
    let n = hidden.n();
    let mut oracle = QueryOracle::new(hidden.clone())?;
    let mut sampler = Sampler::new(scheme, n, seed, cfg)?;
    let clustering_seed = mix(seed, CLUSTERING_SALT);
    let mut out = Vec::with_capacity(budgets.len());
    let mut taken = 0;
    for &b in budgets {
        while taken < b {
            sampler.step(&mut oracle)?;
            taken += 1;
        }
        let sample = sampler.snapshot();
        let clusters = spectral_clustering(&sample, cfg.k.min(n), cfg.mode, clustering_seed)?;
        out.push((b, purity(&clusters, truth)?, oracle.queries_used()));
    }
    Ok(out)
}

/// One run of `budget` queries followed by spectral clustering of the sample,
/// seeded as in [`purity_curve`].
pub fn sample_and_cluster(
    hidden: &Graph,
    scheme: SchemeId,
    budget: usize,
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<(Graph, Clustering)> {
    let n = hidden.n();
    let mut oracle = QueryOracle::new(hidden.clone())?;
    let mut sampler = Sampler::new(scheme, n, seed, cfg)?;
    for _ in 0..budget {
        sampler.step(&mut oracle)?;
    }
    let sample = sampler.snapshot();
    let clusters = spectral_clustering(&sample, cfg.k.min(n), cfg.mode, mix(seed, CLUSTERING_SALT))?;
    Ok((sample, clusters))
}

fn run_job(
    hidden: &Graph,
    truth: &[usize],
    scheme: SchemeId,
    rep: usize,
    budgets: &[usize],
    cfg: &ExperimentConfig,
) -> Result<Vec<ResultRow>> {
    let seed = cfg.rep_seed(rep);
    let start = cfg.timing.then(Instant::now);
    let curve = purity_curve(hidden, truth, scheme, budgets, seed, cfg)?;
    let elapsed = start.map(|t| t.elapsed().as_secs_f64() * 1e3);
    Ok(curve
        .into_iter()
        .map(|(budget, purity, queries)| ResultRow {
            scheme,
            budget,
            rep,
            seed,
            purity,
            wall_millis: elapsed,
            queries,
        })
        .collect())
}

#[cfg(feature = "parallel")]
fn run_jobs(
    jobs: &[(SchemeId, usize)],
    hidden: &Graph,
    truth: &[usize],
    budgets: &[usize],
    cfg: &ExperimentConfig,
) -> Result<Vec<ResultRow>> {
    use rayon::prelude::*;
    let parts: Vec<Vec<ResultRow>> = jobs
        .par_iter()
        .map(|&(scheme, rep)| run_job(hidden, truth, scheme, rep, budgets, cfg))
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

#[cfg(not(feature = "parallel"))]
fn run_jobs(
    jobs: &[(SchemeId, usize)],
    hidden: &Graph,
    truth: &[usize],
    budgets: &[usize],
    cfg: &ExperimentConfig,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for &(scheme, rep) in jobs {
        rows.extend(run_job(hidden, truth, scheme, rep, budgets, cfg)?);
    }
    Ok(rows)
}

/// Runs the sweep on an explicit hidden graph and ground truth.
pub fn run_on_graph(hidden: &Graph, truth: &[usize], cfg: &ExperimentConfig) -> Result<ExperimentResults> {
    cfg.validate()?;
    if truth.len() != hidden.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {} vertices",
            truth.len(),
            hidden.n()
        )));
    }
    let budgets = cfg.resolve_budgets(hidden.n())?;
    let jobs: Vec<(SchemeId, usize)> = cfg
        .schemes
        .iter()
        .flat_map(|&s| (0..cfg.repetitions).map(move |r| (s, r)))
        .collect();
    let mut rows = run_jobs(&jobs, hidden, truth, &budgets, cfg)?;
    let order = |s: SchemeId| cfg.schemes.iter().position(|&x| x == s).unwrap_or(usize::MAX);
    rows.sort_by(|a, b| {
        (order(a.scheme), a.budget, a.rep).cmp(&(order(b.scheme), b.budget, b.rep))
    });
    let summary = summarize(&rows);
    Ok(ExperimentResults {
        rows,
        summary,
        n: hidden.n(),
    })
}

/// Loads the dataset, builds the similarity graph and runs the sweep.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResults> {
    cfg.validate()?;
    let points = cfg.load_dataset()?;
    let hidden = cfg.similarity(&points)?;
    run_on_graph(&hidden, &points.labels, cfg)
}

/// Mean and sample standard deviation per (scheme, budget), in row order.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut out: Vec<SummaryRow> = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let key = (rows[i].scheme, rows[i].budget);
        let group: Vec<f64> = rows[i..]
            .iter()
            .take_while(|r| (r.scheme, r.budget) == key)
            .map(|r| r.purity)
            .collect();
        let count = group.len();
        let mean = group.iter().sum::<f64>() / count as f64;
        let std = if count > 1 {
            (group.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        out.push(SummaryRow {
            scheme: key.0,
            budget: key.1,
            reps: count,
            mean_purity: mean,
            std_purity: std,
        });
        i += count;
    }
    out
}

impl ExperimentResults {
    pub fn write_rows<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER.split(','))?;
        for r in &self.rows {
            let wall = r.wall_millis.map(|v| format!("{v:.3}")).unwrap_or_default();
            w.write_record([
                r.scheme.as_str().to_string(),
                r.budget.to_string(),
                r.rep.to_string(),
                r.seed.to_string(),
                format!("{}", r.purity),
                wall,
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_summary<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SUMMARY_HEADER.split(','))?;
        for s in &self.summary {
            w.write_record([
                s.scheme.as_str().to_string(),
                s.budget.to_string(),
                s.reps.to_string(),
                format!("{}", s.mean_purity),
                format!("{}", s.std_purity),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn rows_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_rows(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn summary_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_summary(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn mean_purity(&self, scheme: SchemeId, budget: usize) -> Option<f64> {
        self.summary
            .iter()
            .find(|s| s.scheme == scheme && s.budget == budget)
            .map(|s| s.mean_purity)
    }

    pub fn budgets(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.summary.iter().map(|s| s.budget).collect();
        b.sort_unstable();
        b.dedup();
        b
    }
}
