//! Dense eigensolves, spectral clustering and subspace distances.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph};
use crate::kmeans::KMeans;

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

/// All eigenpairs of a symmetric matrix, ascending. Each eigenvector's
/// largest-magnitude entry is made positive.
pub fn full_eigen(m: &DMatrix<f64>) -> SpectralSummary {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(i).into_owned();
        let pivot = v.iamax();
        if v[pivot] < 0.0 {
            v.neg_mut();
        }
        eigenvectors.set_column(col, &v);
    }
    SpectralSummary {
        eigenvalues,
        eigenvectors,
    }
}

/// The `k` smallest eigenpairs of a symmetric matrix.
pub fn smallest_eigenpairs(m: &DMatrix<f64>, k: usize) -> Result<SpectralSummary> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    let n = m.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={n}")));
    }
    let full = full_eigen(m);
    Ok(SpectralSummary {
        eigenvalues: full.eigenvalues[..k].to_vec(),
        eigenvectors: full.eigenvectors.columns(0, k).into_owned(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianMode {
    Normalized,
    #[default]
    Unnormalized,
}

impl fmt::Display for LaplacianMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LaplacianMode::Normalized => "normalized",
            LaplacianMode::Unnormalized => "unnormalized",
        })
    }
}

impl FromStr for LaplacianMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normalized" => Ok(Self::Normalized),
            "unnormalized" => Ok(Self::Unnormalized),
            other => Err(Error::InvalidArgument(format!("unknown Laplacian mode {other:?}"))),
        }
    }
}

/// A hard partition into clusters `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    labels: Vec<usize>,
    k: usize,
}

impl Clustering {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("a clustering needs k >= 1".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidArgument(format!("label {bad} out of range for k = {k}")));
        }
        Ok(Self { labels, k })
    }

    /// `k` is taken as one more than the largest label.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(1, |m| m + 1);
        Self::new(labels, k)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.k];
        for (v, &c) in self.labels.iter().enumerate() {
            groups[c].push(v);
        }
        groups
    }

    pub fn num_nonempty(&self) -> usize {
        self.members().iter().filter(|g| !g.is_empty()).count()
    }

    /// Labels renumbered by first occurrence; equal partitions compare equal.
    pub fn canonical_labels(&self) -> Vec<usize> {
        let mut remap = vec![usize::MAX; self.k];
        let mut next = 0;
        self.labels
            .iter()
            .map(|&l| {
                if remap[l] == usize::MAX {
                    remap[l] = next;
                    next += 1;
                }
                remap[l]
            })
            .collect()
    }

    pub fn same_partition(&self, other: &Clustering) -> bool {
        self.canonical_labels() == other.canonical_labels()
    }
}

/// Rows of the `k` smallest Laplacian eigenvectors. In normalized mode the
/// eigenvectors come from `D^{-1/2} L D^{-1/2}` and rows are scaled to unit
/// length (zero rows stay zero).
pub fn spectral_embedding(g: &Graph, k: usize, mode: LaplacianMode) -> Result<DMatrix<f64>> {
    let lp = laplacian(g);
    let m = match mode {
        LaplacianMode::Normalized => &lp.normalized,
        LaplacianMode::Unnormalized => &lp.laplacian,
    };
    let mut emb = smallest_eigenpairs(m, k)?.eigenvectors;
    if mode == LaplacianMode::Normalized {
        for mut row in emb.row_iter_mut() {
            let norm = row.norm();
            if norm > 0.0 {
                row /= norm;
            }
        }
    }
    Ok(emb)
}

/// k-means (10 seeded restarts, at most 100 iterations) on embedding rows.
pub fn cluster_embedding(embedding: &DMatrix<f64>, k: usize, seed: u64) -> Result<Clustering> {
    let fit = KMeans::new(k).fit(embedding, seed)?;
    Clustering::new(fit.labels, k.min(embedding.nrows()))
}

pub fn spectral_clustering(g: &Graph, k: usize, mode: LaplacianMode, seed: u64) -> Result<Clustering> {
    if k == 0 || k > g.n() {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={}", g.n())));
    }
    let emb = spectral_embedding(g, k, mode)?;
    cluster_embedding(&emb, k, seed)
}

/// Largest deviation of `BᵀB` from the identity.
pub fn orthonormality_error(basis: &DMatrix<f64>) -> f64 {
    let gram = basis.transpose() * basis;
    let k = gram.nrows();
    (gram - DMatrix::<f64>::identity(k, k)).amax()
}

/// `‖sin Θ(P, Q)‖₂ = sqrt(1 - σ_min(PᵀQ)²)` for orthonormal bases of equal rank.
pub fn sin_theta_distance(p: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<f64> {
    if p.nrows() != q.nrows() || p.ncols() != q.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "bases are {}x{} and {}x{}",
            p.nrows(),
            p.ncols(),
            q.nrows(),
            q.ncols()
        )));
    }
    if p.ncols() == 0 {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    for basis in [p, q] {
        let deviation = orthonormality_error(basis);
        if deviation > 1e-6 {
            return Err(Error::NotOrthonormal { deviation });
        }
    }
    let cross = p.transpose() * q;
    let sigma_min = cross.singular_values().min().clamp(0.0, 1.0);
    Ok((1.0 - sigma_min * sigma_min).max(0.0).sqrt())
}

fn second_smallest(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() < 2 {
        return Err(Error::InvalidArgument("need at least 2 vertices".into()));
    }
    Ok(smallest_eigenpairs(m, 2)?.eigenvalues[1])
}

/// `λ₂` of the normalized Laplacian.
pub fn second_smallest_normalized_eigenvalue(g: &Graph) -> Result<f64> {
    second_smallest(&laplacian(g).normalized)
}

/// `μ₂` of the unnormalized Laplacian.
pub fn second_smallest_unnormalized_eigenvalue(g: &Graph) -> Result<f64> {
    second_smallest(&laplacian(g).laplacian)
}

/// Orthonormal basis of cluster indicator vectors `1_C / sqrt(|C|)`, one
/// column per nonempty cluster.
pub fn indicator_basis(clustering: &Clustering) -> DMatrix<f64> {
    let groups: Vec<Vec<usize>> = clustering
        .members()
        .into_iter()
        .filter(|g| !g.is_empty())
        .collect();
    let mut basis = DMatrix::zeros(clustering.len(), groups.len());
    for (c, group) in groups.iter().enumerate() {
        let v = 1.0 / (group.len() as f64).sqrt();
        for &i in group {
            basis[(i, c)] = v;
        }
    }
    basis
}

pub fn residual_norm(m: &DMatrix<f64>, value: f64, vector: &DVector<f64>) -> f64 {
    (m * vector - vector * value).norm()
}

/// Subspace perturbation check for a (sampled) graph against a planted
/// clustering, splitting `L̃ = L̃^in + L̃^out` along the clusters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SinThetaCheck {
    /// `‖sin Θ(P, Q)‖` between the cluster indicators and the bottom-`k`
    /// eigenvectors of `L̃`.
    pub sin_theta: f64,
    /// Spectral norm of `L̃^out`.
    pub out_norm: f64,
    /// `(k+1)`-th smallest eigenvalue of `L̃^in`.
    pub mu2_in: f64,
    /// `out_norm / mu2_in`, infinite when `mu2_in` vanishes.
    pub bound: f64,
}

impl SinThetaCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.sin_theta <= self.bound + slack
    }
}

pub fn sin_theta_check(g: &Graph, truth: &Clustering) -> Result<SinThetaCheck> {
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
    let l_in = crate::graph::laplacian_matrix(&Graph::from_matrix_unchecked(w_in));
    let l_out = crate::graph::laplacian_matrix(&Graph::from_matrix_unchecked(w_out));
    let p = indicator_basis(truth);
    let k = p.ncols();
    if k >= n {
        return Err(Error::InvalidArgument("need fewer clusters than vertices".into()));
    }
    let q = smallest_eigenpairs(&(&l_in + &l_out), k)?.eigenvectors;
    let sin_theta = sin_theta_distance(&p, &q)?;
    let out_norm = full_eigen(&l_out).eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mu2_in = full_eigen(&l_in).eigenvalues[k].max(0.0);
    let bound = if mu2_in > crate::graph::ZERO_EIGEN_TOL { out_norm / mu2_in } else { f64::INFINITY };
    Ok(SinThetaCheck {
        sin_theta,
        out_norm,
        mu2_in,
        bound,
    })
}
