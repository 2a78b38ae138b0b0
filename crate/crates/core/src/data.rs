//! Synthetic datasets, similarity graphs, planted cluster models and purity.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cut_weight, laplacian, CutSpec, Graph};
use crate::mincut::min_cut;
use crate::rng::{mix, stream, streams};
use crate::spectral::{full_eigen, Clustering};

/// Points as rows with ground-truth class ids.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoints {
    pub points: DMatrix<f64>,
    pub labels: Vec<usize>,
    /// Original class names when labels were read as text.
    pub class_names: Vec<String>,
}

impl LabeledPoints {
    pub fn new(points: DMatrix<f64>, labels: Vec<usize>) -> Result<Self> {
        if points.nrows() == 0 {
            return Err(Error::EmptyInput);
        }
        if labels.len() != points.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} points",
                labels.len(),
                points.nrows()
            )));
        }
        let k = labels.iter().max().map_or(0, |m| m + 1);
        Ok(Self {
            points,
            labels,
            class_names: (0..k).map(|c| c.to_string()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn num_classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Header `x0,…,x{d-1},label`, then one row per point.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (0..self.dim()).map(|j| format!("x{j}")).collect();
        header.push("label".into());
        w.write_record(&header)?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut row: Vec<String> = self.points.row(i).iter().map(|v| format!("{v}")).collect();
            row.push(label.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn noise(std: f64) -> Result<Normal<f64>> {
    Normal::new(0.0, std).map_err(|e| Error::InvalidArgument(format!("noise std {std}: {e}")))
}

/// Two interleaved unit semicircles. Class 0 is `(cos t, sin t)`, class 1 is
/// `(1 - cos t, 0.5 - sin t)`, `t` evenly spaced over `[0, π]`.
pub fn two_half_circles(n_per_class: usize, noise_std: f64, seed: u64) -> Result<LabeledPoints> {
    if n_per_class == 0 {
        return Err(Error::InvalidArgument("need at least one point per class".into()));
    }
    let normal = noise(noise_std)?;
    let mut rng = stream(seed, streams::DATA);
    let n = 2 * n_per_class;
    let mut points = DMatrix::zeros(n, 2);
    let step = if n_per_class > 1 { PI / (n_per_class - 1) as f64 } else { 0.0 };
    for i in 0..n_per_class {
        let t = step * i as f64;
        points[(i, 0)] = t.cos();
        points[(i, 1)] = t.sin();
        points[(n_per_class + i, 0)] = 1.0 - t.cos();
        points[(n_per_class + i, 1)] = 0.5 - t.sin();
    }
    if noise_std > 0.0 {
        for v in points.iter_mut() {
            *v += normal.sample(&mut rng);
        }
    }
    let labels = (0..n).map(|i| i / n_per_class).collect();
    LabeledPoints::new(points, labels)
}

/// Isotropic Gaussian blobs, `n_per_class` points around each center, in
/// class order.
pub fn gaussian_blobs(n_per_class: usize, centers: &DMatrix<f64>, std: f64, seed: u64) -> Result<LabeledPoints> {
    if n_per_class == 0 || centers.nrows() == 0 {
        return Err(Error::InvalidArgument("need at least one center and one point per class".into()));
    }
    let normal = noise(std)?;
    let mut rng = stream(seed, streams::DATA);
    let (k, d) = centers.shape();
    let mut points = DMatrix::zeros(k * n_per_class, d);
    for c in 0..k {
        for i in 0..n_per_class {
            for j in 0..d {
                let jitter = if std > 0.0 { normal.sample(&mut rng) } else { 0.0 };
                points[(c * n_per_class + i, j)] = centers[(c, j)] + jitter;
            }
        }
    }
    LabeledPoints::new(points, (0..k * n_per_class).map(|i| i / n_per_class).collect())
}

/// `k` centers on a circle of the given radius in the plane.
pub fn circle_centers(k: usize, radius: f64) -> DMatrix<f64> {
    DMatrix::from_fn(k, 2, |c, j| {
        let a = 2.0 * PI * c as f64 / k as f64;
        radius * if j == 0 { a.cos() } else { a.sin() }
    })
}

fn squared_distances(points: &DMatrix<f64>) -> DMatrix<f64> {
    let n = points.nrows();
    let mut d2 = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = (points.row(i) - points.row(j)).norm_squared();
            d2[(i, j)] = v;
            d2[(j, i)] = v;
        }
    }
    d2
}

/// `W_ij = exp(-‖x_i - x_j‖² / (2σ²))` with zero diagonal.
pub fn rbf_similarity(points: &DMatrix<f64>, sigma: f64) -> Result<Graph> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} must be positive")));
    }
    let mut w = squared_distances(points).map(|d2| (-d2 / (2.0 * sigma * sigma)).exp());
    w.fill_diagonal(0.0);
    Graph::new_unit(w)
}

/// Median over all pairs `i < j` of `‖x_i - x_j‖`.
pub fn median_pairwise_distance(points: &DMatrix<f64>) -> f64 {
    let n = points.nrows();
    let d2 = squared_distances(points);
    let mut all: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| d2[(i, j)].sqrt())
        .collect();
    if all.is_empty() {
        return 0.0;
    }
    all.sort_by(f64::total_cmp);
    let mid = all.len() / 2;
    if all.len() % 2 == 1 {
        all[mid]
    } else {
        0.5 * (all[mid - 1] + all[mid])
    }
}

/// RBF graph with `σ = scale · median pairwise distance`.
pub fn rbf_similarity_median(points: &DMatrix<f64>, scale: f64) -> Result<Graph> {
    let median = median_pairwise_distance(points);
    if median <= 0.0 {
        return Err(Error::InvalidArgument("all points coincide; median distance is zero".into()));
    }
    rbf_similarity(points, scale * median)
}

/// Fraction of points that carry their cluster's most frequent class.
pub fn purity(predicted: &Clustering, truth: &[usize]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predicted labels against {} true labels",
            predicted.len(),
            truth.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for (&c, &t) in predicted.labels().iter().zip(truth) {
        *counts.entry((c, t)).or_default() += 1;
    }
    let mut best = vec![0usize; predicted.k()];
    for (&(c, _), &count) in &counts {
        best[c] = best[c].max(count);
    }
    Ok(best.iter().sum::<usize>() as f64 / truth.len() as f64)
}

/// Reads points from CSV: numeric feature columns followed by a class label.
///
/// A first row whose feature fields are all non-numeric is taken as a header.
/// Labels may be integers or names; names are numbered in order of first
/// appearance, integers keep their value.
pub fn read_points_csv<R: Read>(input: R) -> Result<LabeledPoints> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows: Vec<(usize, Vec<f64>, String)> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(idx + 1, |p| p.line() as usize);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if record.len() < 2 {
            return Err(Error::MalformedRow {
                line,
                reason: "need at least one feature and a label".into(),
            });
        }
        let fields: Vec<&str> = record.iter().collect();
        let (label, feats) = fields.split_last().expect("len >= 2");
        if rows.is_empty() && width.is_none() && feats.iter().all(|f| f.parse::<f64>().is_err()) {
            width = Some(fields.len());
            continue;
        }
        match width {
            Some(w) if w != fields.len() => {
                return Err(Error::MalformedRow {
                    line,
                    reason: format!("expected {w} fields, found {}", fields.len()),
                })
            }
            _ => width = Some(fields.len()),
        }
        let mut values = Vec::with_capacity(feats.len());
        for (column, f) in feats.iter().enumerate() {
            match f.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::NonNumeric {
                        line,
                        column: column + 1,
                        value: f.to_string(),
                    })
                }
            }
        }
        if label.is_empty() {
            return Err(Error::MalformedRow {
                line,
                reason: "missing label".into(),
            });
        }
        rows.push((line, values, label.to_string()));
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = rows[0].1.len();
    let points = DMatrix::from_fn(rows.len(), d, |i, j| rows[i].1[j]);
    let numeric = rows.iter().all(|(_, _, l)| l.parse::<usize>().is_ok());
    let (labels, class_names) = if numeric {
        let labels: Vec<usize> = rows.iter().map(|(_, _, l)| l.parse().expect("checked")).collect();
        let k = labels.iter().max().map_or(0, |m| m + 1);
        (labels, (0..k).map(|c| c.to_string()).collect())
    } else {
        let mut names: Vec<String> = Vec::new();
        let labels = rows
            .iter()
            .map(|(_, _, l)| match names.iter().position(|n| n == l) {
                Some(p) => p,
                None => {
                    names.push(l.clone());
                    names.len() - 1
                }
            })
            .collect();
        (labels, names)
    };
    let mut out = LabeledPoints::new(points, labels)?;
    out.class_names = class_names;
    Ok(out)
}

pub fn load_points_csv(path: impl AsRef<Path>) -> Result<LabeledPoints> {
    read_points_csv(std::fs::File::open(path)?)
}

/// How edges between clusters are planted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "model")]
pub enum CrossModel {
    None,
    /// `edges` distinct cross pairs for every pair of clusters, each of the
    /// given weight.
    PerPair { edges: usize, weight: f64 },
    /// `edges` distinct cross-cluster pairs chosen uniformly among all of
    /// them, each of the given weight (weight 1 gives the binary noise model).
    Uniform { edges: usize, weight: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlantedGraphSpec {
    pub cluster_sizes: Vec<usize>,
    /// Probability of each within-cluster edge.
    pub within_prob: f64,
    /// Weight of each within-cluster edge.
    pub within_weight: f64,
    pub cross: CrossModel,
    /// Regenerate until every within-cluster minimum cut reaches this value.
    pub min_c_in: Option<f64>,
    /// Regenerate until every cut separating whole clusters is at most this.
    pub max_c_out: Option<f64>,
    pub seed: u64,
}

impl PlantedGraphSpec {
    pub fn new(cluster_sizes: Vec<usize>, within_prob: f64, cross: CrossModel, seed: u64) -> Self {
        Self {
            cluster_sizes,
            within_prob,
            within_weight: 1.0,
            cross,
            min_c_in: None,
            max_c_out: None,
            seed,
        }
    }

    pub fn n(&self) -> usize {
        self.cluster_sizes.iter().sum()
    }

    fn labels(&self) -> Vec<usize> {
        self.cluster_sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.cluster_sizes.is_empty() || self.cluster_sizes.contains(&0) {
            return Err(Error::InvalidArgument("cluster sizes must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.within_prob) {
            return Err(Error::InvalidArgument(format!("within_prob = {} outside [0, 1]", self.within_prob)));
        }
        let unit = |w: f64| w > 0.0 && w <= 1.0;
        if !unit(self.within_weight) {
            return Err(Error::InvalidArgument("within_weight must lie in (0, 1]".into()));
        }
        if self.cluster_sizes.len() > 20 {
            return Err(Error::InvalidArgument("at most 20 clusters are supported".into()));
        }
        let n = self.n();
        let cross_pairs = (n * n - self.cluster_sizes.iter().map(|s| s * s).sum::<usize>()) / 2;
        match self.cross {
            CrossModel::None => {}
            CrossModel::PerPair { edges, weight } => {
                if !unit(weight) {
                    return Err(Error::InvalidArgument("cross weight must lie in (0, 1]".into()));
                }
                for (a, sa) in self.cluster_sizes.iter().enumerate() {
                    for sb in &self.cluster_sizes[a + 1..] {
                        if edges > sa * sb {
                            return Err(Error::TooManyEdges {
                                requested: edges,
                                available: sa * sb,
                            });
                        }
                    }
                }
            }
            CrossModel::Uniform { edges, weight } => {
                if !unit(weight) {
                    return Err(Error::InvalidArgument("cross weight must lie in (0, 1]".into()));
                }
                if edges > cross_pairs {
                    return Err(Error::TooManyEdges {
                        requested: edges,
                        available: cross_pairs,
                    });
                }
            }
        }
        Ok(())
    }

    fn generate_once(&self, seed: u64) -> Result<Graph> {
        let mut rng = stream(seed, streams::DATA);
        let labels = self.labels();
        let n = labels.len();
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                if labels[i] == labels[j] && rng.random_bool(self.within_prob) {
                    w[(i, j)] = self.within_weight;
                    w[(j, i)] = self.within_weight;
                }
            }
        }
        let starts: Vec<usize> = self
            .cluster_sizes
            .iter()
            .scan(0, |acc, &s| {
                let start = *acc;
                *acc += s;
                Some(start)
            })
            .collect();
        match self.cross {
            CrossModel::None => {}
            CrossModel::PerPair { edges, weight } => {
                for a in 0..self.cluster_sizes.len() {
                    for b in a + 1..self.cluster_sizes.len() {
                        let (sa, sb) = (self.cluster_sizes[a], self.cluster_sizes[b]);
                        for idx in sample(&mut rng, sa * sb, edges) {
                            let (i, j) = (starts[a] + idx / sb, starts[b] + idx % sb);
                            w[(i, j)] = weight;
                            w[(j, i)] = weight;
                        }
                    }
                }
            }
            CrossModel::Uniform { edges, weight } => {
                let cross: Vec<(usize, usize)> = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| labels[i] != labels[j])
                    .collect();
                for idx in sample(&mut rng, cross.len(), edges) {
                    let (i, j) = cross[idx];
                    w[(i, j)] = weight;
                    w[(j, i)] = weight;
                }
            }
        }
        Graph::new_unit(w)
    }
}

/// Ground truth of a clusterable graph, `W = W^in + W^out`.
#[derive(Debug, Clone)]
pub struct ClusterStructure {
    pub truth: Clustering,
    pub w_in: Graph,
    pub w_out: Graph,
    /// Smallest minimum cut inside a cluster (`∞` when every cluster is a
    /// single vertex).
    pub c_in: f64,
    /// Largest weight of a cut separating a union of clusters from the rest.
    pub c_out: f64,
    /// Smallest second normalized-Laplacian eigenvalue over the clusters.
    pub lambda_in: f64,
    /// Smallest within-cluster degree.
    pub min_degree_in: f64,
}

impl ClusterStructure {
    /// Decomposes `g` along the given clustering and measures its constants.
    pub fn measure(g: &Graph, truth: Clustering) -> Result<Self> {
        if truth.len() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "clustering of {} vertices for graph of {}",
                truth.len(),
                g.n()
            )));
        }
        let n = g.n();
        let labels = truth.labels();
        let w_in = DMatrix::from_fn(n, n, |i, j| if labels[i] == labels[j] { g.weight(i, j) } else { 0.0 });
        let w_out = g.weights() - &w_in;
        let w_in = Graph::new(w_in)?;
        let w_out = Graph::new(w_out)?;
        let groups: Vec<Vec<usize>> = truth.members().into_iter().filter(|m| !m.is_empty()).collect();

        let mut c_in = f64::INFINITY;
        let mut lambda_in = f64::INFINITY;
        for members in groups.iter().filter(|m| m.len() >= 2) {
            let block = g.induced(members);
            c_in = c_in.min(min_cut(&block)?.0);
            let eig = full_eigen(&laplacian(&block).normalized);
            lambda_in = lambda_in.min(eig.eigenvalues[1]);
        }
        let min_degree_in = w_in.min_degree();

        let mut c_out: f64 = 0.0;
        let count = groups.len();
        if count >= 2 {
            if count > 21 {
                return Err(Error::TooLargeForExhaustive { n: count, limit: 21 });
            }
            for mask in 1u64..(1 << (count - 1)) {
                let side = (0..count).filter(|&c| mask >> c & 1 == 1).flat_map(|c| groups[c].iter().copied());
                let cut = CutSpec::new(n, side)?;
                c_out = c_out.max(cut_weight(&w_out, &cut)?);
            }
        }
        Ok(Self {
            truth,
            w_in,
            w_out,
            c_in,
            c_out,
            lambda_in,
            min_degree_in,
        })
    }

    pub fn satisfies_separation(&self) -> bool {
        self.c_in > 4.0 * self.c_out
    }
}

/// A planted graph and its verified structure.
#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: Graph,
    pub structure: ClusterStructure,
    /// Number of generation attempts used (1 when the first draw passed).
    pub attempts: usize,
}

/// Maximum regenerations before [`planted_clusterable`] gives up.
pub const PLANTED_ATTEMPTS: usize = 100;

/// Draws a planted clusterable graph, regenerating until the declared
/// `min_c_in` / `max_c_out` bounds hold.
pub fn planted_clusterable(spec: &PlantedGraphSpec) -> Result<PlantedGraph> {
    spec.validate()?;
    let truth = Clustering::new(spec.labels(), spec.cluster_sizes.len())?;
    for attempt in 0..PLANTED_ATTEMPTS {
        let seed = if attempt == 0 { spec.seed } else { mix(spec.seed, attempt as u64) };
        let graph = spec.generate_once(seed)?;
        let structure = ClusterStructure::measure(&graph, truth.clone())?;
        let in_ok = spec.min_c_in.is_none_or(|c| structure.c_in >= c);
        let out_ok = spec.max_c_out.is_none_or(|c| structure.c_out <= c);
        if in_ok && out_ok {
            return Ok(PlantedGraph {
                graph,
                structure,
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::Unsatisfiable {
        attempts: PLANTED_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_circles_on_arcs_without_noise() {
        let p = two_half_circles(50, 0.0, 1).unwrap();
        assert_eq!(p.len(), 100);
        assert_eq!(p.class_counts(), vec![50, 50]);
        for i in 0..100 {
            let (x, y) = (p.points[(i, 0)], p.points[(i, 1)]);
            let r2 = if i < 50 { x * x + y * y } else { (x - 1.0).powi(2) + (y - 0.5).powi(2) };
            assert!((r2 - 1.0).abs() < 1e-12);
            assert_eq!(p.labels[i], usize::from(i >= 50));
        }
    }

    #[test]
    fn blobs_without_noise_sit_on_centers() {
        let centers = circle_centers(4, 10.0);
        let p = gaussian_blobs(7, &centers, 0.0, 3).unwrap();
        assert_eq!(p.class_counts(), vec![7; 4]);
        for i in 0..28 {
            assert_eq!(p.points.row(i), centers.row(i / 7));
        }
        let a = gaussian_blobs(7, &centers, 0.5, 3).unwrap();
        let b = gaussian_blobs(7, &centers, 0.5, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rbf_values() {
        let pts = DMatrix::from_row_slice(3, 1, &[0.0, 1.0, 1.0]);
        let g = rbf_similarity(&pts, 1.0).unwrap();
        assert!((g.weight(0, 1) - (-0.5f64).exp()).abs() < 1e-15);
        assert!((g.weight(0, 1) - 0.606_530_659_712_633).abs() < 1e-12);
        assert_eq!(g.weight(1, 2), 1.0);
        assert_eq!(g.weight(0, 0), 0.0);
        assert!(rbf_similarity(&pts, 0.0).is_err());
        assert_eq!(median_pairwise_distance(&pts), 1.0);
    }

    #[test]
    fn purity_examples() {
        let one = Clustering::from_labels(vec![0, 0, 0, 0]).unwrap();
        assert_eq!(purity(&one, &[0, 0, 0, 1]).unwrap(), 0.75);
        let two = Clustering::from_labels(vec![0, 0, 1, 1]).unwrap();
        assert_eq!(purity(&two, &[0, 0, 0, 1]).unwrap(), 0.75);
        assert_eq!(purity(&two, &[5, 5, 2, 2]).unwrap(), 1.0);
        let singles = Clustering::from_labels(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(purity(&singles, &[0, 0, 1, 0]).unwrap(), 1.0);
        assert!(purity(&two, &[0, 0]).is_err());
    }

    #[test]
    fn csv_points() {
        let p = read_points_csv("1.5,2,0\n3,4,1\n-1,0.25,1\n".as_bytes()).unwrap();
        assert_eq!(p.points, DMatrix::from_row_slice(3, 2, &[1.5, 2.0, 3.0, 4.0, -1.0, 0.25]));
        assert_eq!(p.labels, vec![0, 1, 1]);
        let named = read_points_csv("a,b,class\n1,2,x\n3,4,y\n5,6,x\n".as_bytes()).unwrap();
        assert_eq!(named.labels, vec![0, 1, 0]);
        assert_eq!(named.class_names, vec!["x", "y"]);
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "x0,x1,label\n1.5,2,0\n3,4,1\n-1,0.25,1\n");
        assert_eq!(read_points_csv(buf.as_slice()).unwrap(), p);
    }

    #[test]
    fn csv_errors_are_distinct() {
        assert!(matches!(read_points_csv("".as_bytes()), Err(Error::EmptyInput)));
        assert_eq!(read_points_csv("".as_bytes()).unwrap_err().to_string(), "empty input");
        assert!(matches!(
            read_points_csv("1,2,0\n3,0\n".as_bytes()),
            Err(Error::MalformedRow { line: 2, .. })
        ));
        assert!(matches!(
            read_points_csv("1,2,0\n3,q,0\n".as_bytes()),
            Err(Error::NonNumeric { line: 2, column: 2, .. })
        ));
    }

    #[test]
    fn two_cliques_with_bridge() {
        let spec = PlantedGraphSpec::new(vec![8, 8], 1.0, CrossModel::PerPair { edges: 1, weight: 1.0 }, 0);
        let planted = planted_clusterable(&spec).unwrap();
        assert_eq!(planted.structure.c_in, 7.0);
        assert_eq!(planted.structure.c_out, 1.0);
        assert_eq!(planted.structure.w_out.edges().count(), 1);
        assert!(planted.structure.satisfies_separation());
    }

    #[test]
    fn no_cross_edges() {
        let spec = PlantedGraphSpec::new(vec![5, 6, 4], 0.8, CrossModel::None, 9);
        let planted = planted_clusterable(&spec).unwrap();
        assert_eq!(planted.structure.c_out, 0.0);
        assert_eq!(planted.structure.w_out.edges().count(), 0);
    }

    #[test]
    fn unsatisfiable_spec() {
        let mut spec = PlantedGraphSpec::new(vec![4, 4], 0.5, CrossModel::None, 1);
        spec.min_c_in = Some(10.0);
        assert!(matches!(planted_clusterable(&spec), Err(Error::Unsatisfiable { attempts: 100 })));
    }
}
