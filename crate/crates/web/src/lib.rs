//! WebAssembly bindings for the browser demo. Every export returns a JSON
//! string; the plain functions underneath are usable natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use simquery::bounds::{
    appendix_c_cmin_lower, appendix_c_cut_budget, theorem1_budget, theorem2_lower_budget, theorem4_cluster_budget,
    ClusterBudgetInputs, CutBudgetInputs, SpectralBudgetInputs,
};
use simquery::clus2k::{Clus2kConfig, Clus2kSampler};
use simquery::data::{purity, rbf_similarity_median, two_half_circles};
use simquery::experiment::{sample_and_cluster, ExperimentConfig, SchemeId};
use simquery::graph::{num_pairs, Graph, UnionFind};
use simquery::sampling::{ComponentJoin, MixedAdaptiveSampler, QueryOracle, TrajectoryStep, UniformSampler};

/// Largest two-clique race the demo accepts.
pub const MAX_RACE_HALF: usize = 64;
/// Largest half-circle dataset the demo accepts, per class.
pub const MAX_POINTS_PER_CLASS: usize = 150;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClusteringDemo {
    pub points: Vec<[f64; 2]>,
    pub truth: Vec<usize>,
    pub predicted: Vec<usize>,
    pub purity: f64,
    pub budget: usize,
    pub total_pairs: usize,
    /// Sampled pairs with positive weight.
    pub edges: Vec<[usize; 2]>,
}

/// Samples the half-circles similarity graph with `scheme` under a budget of
/// `fraction · C(n,2)` queries and clusters the sample into two groups.
pub fn half_circles(
    n_per_class: usize,
    noise: f64,
    fraction: f64,
    scheme: &str,
    seed: u64,
) -> simquery::Result<ClusteringDemo> {
    if n_per_class == 0 || n_per_class > MAX_POINTS_PER_CLASS {
        return Err(simquery::Error::InvalidArgument(format!(
            "points per class must lie in 1..={MAX_POINTS_PER_CLASS}"
        )));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(simquery::Error::InvalidArgument(format!("budget fraction {fraction} outside (0, 1]")));
    }
    let scheme: SchemeId = scheme.parse()?;
    let cfg = ExperimentConfig::default();
    let data = two_half_circles(n_per_class, noise, seed)?;
    let hidden = rbf_similarity_median(&data.points, cfg.sigma_scale)?;
    let total = num_pairs(hidden.n());
    let budget = ((fraction * total as f64).round() as usize).clamp(1, total);
    let (sample, clusters) = sample_and_cluster(&hidden, scheme, budget, seed, &cfg)?;
    Ok(ClusteringDemo {
        points: data.points.row_iter().map(|r| [r[0], r[1]]).collect(),
        purity: purity(&clusters, &data.labels)?,
        truth: data.labels,
        predicted: clusters.labels().to_vec(),
        budget,
        total_pairs: total,
        edges: sample.edges().map(|(i, j, _)| [i, j]).collect(),
    })
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RaceCurve {
    pub scheme: &'static str,
    /// Component count after each query, until two components remain.
    pub components: Vec<usize>,
}

fn race(n: usize, mut step: impl FnMut() -> simquery::Result<TrajectoryStep>) -> simquery::Result<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    let mut counts = Vec::new();
    while uf.set_count() > 2 {
        let s = step()?;
        if s.weight > 0.0 {
            uf.union(s.i, s.j);
        }
        counts.push(uf.set_count());
    }
    Ok(counts)
}

/// Two disjoint cliques of `half` vertices, sampled by each scheme until the
/// observed graph has exactly two connected components.
pub fn component_race(half: usize, seed: u64) -> simquery::Result<Vec<RaceCurve>> {
    if !(2..=MAX_RACE_HALF).contains(&half) {
        return Err(simquery::Error::InvalidArgument(format!("clique size must lie in 2..={MAX_RACE_HALF}")));
    }
    let n = 2 * half;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if (i < half) == (j < half) {
                edges.push((i, j, 1.0));
            }
        }
    }
    let hidden = Graph::from_edges(n, &edges)?;

    let mut oracle = QueryOracle::new(hidden.clone())?;
    let mut s = UniformSampler::new(n, seed);
    let uniform = race(n, || s.step(&mut oracle).cloned())?;

    let mut oracle = QueryOracle::new(hidden.clone())?;
    let mut s = MixedAdaptiveSampler::new(n, ComponentJoin, seed);
    let cjoin = race(n, || s.step(&mut oracle).cloned())?;

    let mut oracle = QueryOracle::new(hidden)?;
    let mut s = Clus2kSampler::new(n, Clus2kConfig::new(2, seed))?;
    let clus = race(n, || s.step(&mut oracle).cloned())?;

    Ok(vec![
        RaceCurve {
            scheme: "uniform",
            components: uniform,
        },
        RaceCurve {
            scheme: "cjoin",
            components: cjoin,
        },
        RaceCurve {
            scheme: "clus2k",
            components: clus,
        },
    ])
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundValue {
    pub value: f64,
    pub total_pairs: Option<usize>,
}

/// Evaluates one bound. `kind` is `theorem1`, `theorem2`, `theorem4`,
/// `cut` or `cmin`; parameters not used by that bound are ignored.
#[allow(clippy::too_many_arguments)]
pub fn bound(
    kind: &str,
    n: usize,
    epsilon: f64,
    delta: f64,
    c: f64,
    c_out: f64,
    lambda2: f64,
    min_degree: f64,
    clusters: usize,
    p: f64,
) -> simquery::Result<BoundValue> {
    let with_pairs = |value: f64| BoundValue {
        value,
        total_pairs: Some(num_pairs(n)),
    };
    Ok(match kind {
        "theorem1" => with_pairs(
            theorem1_budget(&SpectralBudgetInputs {
                n,
                min_degree,
                lambda2,
                epsilon,
                delta,
            })?
            .value,
        ),
        "theorem2" => with_pairs(theorem2_lower_budget(n, c, delta)?),
        "theorem4" => with_pairs(
            theorem4_cluster_budget(&ClusterBudgetInputs {
                n,
                c_in: c,
                c_out,
                clusters,
                delta,
            })?
            .value,
        ),
        "cut" => with_pairs(appendix_c_cut_budget(&CutBudgetInputs { n, epsilon, delta, c })?.value),
        "cmin" => BoundValue {
            value: appendix_c_cmin_lower(p, c, delta)?,
            total_pairs: None,
        },
        other => return Err(simquery::Error::InvalidArgument(format!("unknown bound {other:?}"))),
    })
}

fn to_js<T: Serialize>(r: simquery::Result<T>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = halfCircles)]
pub fn half_circles_js(n_per_class: usize, noise: f64, fraction: f64, scheme: &str, seed: u32) -> Result<String, JsError> {
    to_js(half_circles(n_per_class, noise, fraction, scheme, seed.into()))
}

#[wasm_bindgen(js_name = componentRace)]
pub fn component_race_js(half: usize, seed: u32) -> Result<String, JsError> {
    to_js(component_race(half, seed.into()))
}

#[wasm_bindgen(js_name = bound)]
#[allow(clippy::too_many_arguments)]
pub fn bound_js(
    kind: &str,
    n: usize,
    epsilon: f64,
    delta: f64,
    c: f64,
    c_out: f64,
    lambda2: f64,
    min_degree: f64,
    clusters: usize,
    p: f64,
) -> Result<String, JsError> {
    to_js(bound(kind, n, epsilon, delta, c, c_out, lambda2, min_degree, clusters, p))
}
