//! Seeded Lloyd k-means with k-means++ seeding and restarts.

use nalgebra::DMatrix;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::{self, streams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeans {
    pub k: usize,
    pub restarts: usize,
    pub max_iter: usize,
}

#[derive(Debug, Clone)]
pub struct KMeansFit {
    /// Cluster ids numbered by first occurrence.
    pub labels: Vec<usize>,
    /// One centroid per row, in label order.
    pub centroids: DMatrix<f64>,
    /// Within-cluster sum of squared distances.
    pub inertia: f64,
}

impl KMeans {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            restarts: 10,
            max_iter: 100,
        }
    }

    /// Clusters the rows of `points`. With fewer than `k` points every point
    /// gets its own cluster. Every returned cluster is nonempty.
    ///
    /// The best restart by inertia wins; ties go to the earliest restart.
    pub fn fit(&self, points: &DMatrix<f64>, seed: u64) -> Result<KMeansFit> {
        if self.k == 0 || self.restarts == 0 {
            return Err(Error::InvalidArgument("k-means needs k >= 1 and restarts >= 1".into()));
        }
        let n = points.nrows();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let k = self.k.min(n);
        let mut best: Option<KMeansFit> = None;
        for restart in 0..self.restarts {
            let fit = self.fit_once(points, k, rng::mix(seed, restart as u64));
            if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
                best = Some(fit);
            }
        }
        Ok(best.expect("at least one restart"))
    }

    fn fit_once(&self, points: &DMatrix<f64>, k: usize, seed: u64) -> KMeansFit {
        let n = points.nrows();
        let d = points.ncols();
        let mut centroids = plus_plus_init(points, k, seed);
        let mut labels = vec![usize::MAX; n];
        for _ in 0..self.max_iter {
            let mut next = assign(points, &centroids);
            repair_empty(points, &centroids, &mut next, k);
            let converged = next == labels;
            labels = next;
            centroids = update_centroids(points, &labels, k, d);
            if converged {
                break;
            }
        }
        let inertia = (0..n)
            .map(|i| sq_dist_rows(points, i, &centroids, labels[i]))
            .sum();
        canonicalize(labels, centroids, inertia)
    }
}

fn sq_dist_rows(points: &DMatrix<f64>, i: usize, centroids: &DMatrix<f64>, c: usize) -> f64 {
    (0..points.ncols())
        .map(|t| {
            let diff = points[(i, t)] - centroids[(c, t)];
            diff * diff
        })
        .sum()
}

fn plus_plus_init(points: &DMatrix<f64>, k: usize, seed: u64) -> DMatrix<f64> {
    let n = points.nrows();
    let mut rng = rng::stream(seed, streams::CLUSTERING);
    let mut chosen = vec![rng.random_range(0..n)];
    let mut dist: Vec<f64> = (0..n)
        .map(|i| sq_dist_points(points, i, chosen[0]))
        .collect();
    while chosen.len() < k {
        let total: f64 = dist.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in dist.iter().enumerate() {
                acc += w;
                if w > 0.0 && target < acc {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or_else(|| dist.iter().rposition(|&w| w > 0.0).expect("positive mass"))
        } else {
            // all remaining points coincide with chosen centers
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen.push(next);
        for (i, slot) in dist.iter_mut().enumerate() {
            *slot = slot.min(sq_dist_points(points, i, next));
        }
    }
    DMatrix::from_fn(k, points.ncols(), |c, t| points[(chosen[c], t)])
}

fn sq_dist_points(points: &DMatrix<f64>, a: usize, b: usize) -> f64 {
    (0..points.ncols())
        .map(|t| {
            let diff = points[(a, t)] - points[(b, t)];
            diff * diff
        })
        .sum()
}

fn assign(points: &DMatrix<f64>, centroids: &DMatrix<f64>) -> Vec<usize> {
    (0..points.nrows())
        .map(|i| {
            let mut best = (f64::INFINITY, 0);
            for c in 0..centroids.nrows() {
                let dist = sq_dist_rows(points, i, centroids, c);
                if dist < best.0 {
                    best = (dist, c);
                }
            }
            best.1
        })
        .collect()
}

/// Moves the point farthest from its centroid (taken from a cluster with at
/// least two members) into each empty cluster.
fn repair_empty(points: &DMatrix<f64>, centroids: &DMatrix<f64>, labels: &mut [usize], k: usize) {
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    for c in 0..k {
        if sizes[c] > 0 {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for i in 0..labels.len() {
            if sizes[labels[i]] < 2 {
                continue;
            }
            let dist = sq_dist_rows(points, i, centroids, labels[i]);
            if best.is_none_or(|(bd, _)| dist > bd) {
                best = Some((dist, i));
            }
        }
        let (_, i) = best.expect("n >= k leaves a cluster with two members");
        sizes[labels[i]] -= 1;
        labels[i] = c;
        sizes[c] = 1;
    }
}

fn update_centroids(points: &DMatrix<f64>, labels: &[usize], k: usize, d: usize) -> DMatrix<f64> {
    let mut sums = DMatrix::zeros(k, d);
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for t in 0..d {
            sums[(l, t)] += points[(i, t)];
        }
    }
    for c in 0..k {
        let count = counts[c].max(1) as f64;
        for t in 0..d {
            sums[(c, t)] /= count;
        }
    }
    sums
}

fn canonicalize(labels: Vec<usize>, centroids: DMatrix<f64>, inertia: f64) -> KMeansFit {
    let k = centroids.nrows();
    let mut remap = vec![usize::MAX; k];
    let mut next = 0;
    for &l in &labels {
        if remap[l] == usize::MAX {
            remap[l] = next;
            next += 1;
        }
    }
    let mut order = vec![0; k];
    for (old, &new) in remap.iter().enumerate() {
        if new != usize::MAX {
            order[new] = old;
        }
    }
    let centroids = DMatrix::from_fn(next, centroids.ncols(), |c, t| centroids[(order[c], t)]);
    KMeansFit {
        labels: labels.into_iter().map(|l| remap[l]).collect(),
        centroids,
        inertia,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> DMatrix<f64> {
        DMatrix::from_row_slice(
            6,
            2,
            &[0.0, 0.0, 0.1, 0.0, 0.0, 0.1, 5.0, 5.0, 5.1, 5.0, 5.0, 5.1],
        )
    }

    #[test]
    fn separates_two_blobs() {
        let fit = KMeans::new(2).fit(&blobs(), 3).unwrap();
        assert_eq!(fit.labels, vec![0, 0, 0, 1, 1, 1]);
        assert!(fit.inertia < 0.1);
    }

    #[test]
    fn k_equal_n_gives_singletons_even_with_duplicates() {
        let pts = DMatrix::from_row_slice(4, 1, &[1.0, 1.0, 1.0, 2.0]);
        let fit = KMeans::new(4).fit(&pts, 0).unwrap();
        let mut sorted = fit.labels.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
    }

    #[test]
    fn more_clusters_than_points_is_capped() {
        let fit = KMeans::new(10).fit(&blobs(), 1).unwrap();
        assert_eq!(fit.centroids.nrows(), 6);
    }

    #[test]
    fn deterministic_given_seed() {
        let pts = DMatrix::from_fn(40, 3, |i, t| ((i * 7 + t * 13) % 11) as f64);
        let a = KMeans::new(4).fit(&pts, 42).unwrap();
        let b = KMeans::new(4).fit(&pts, 42).unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.inertia, b.inertia);
    }

    #[test]
    fn rejects_zero_k() {
        assert!(KMeans::new(0).fit(&blobs(), 0).is_err());
    }
}
