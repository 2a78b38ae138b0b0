//! Checkers compared against independent brute-force computations.

use nalgebra::{DMatrix, DVector};
use rand::Rng as _;

use simquery::approx::{check_cut_approximation, check_spectral_approximation, rayleigh_spectrum};
use simquery::graph::{laplacian_matrix, Graph};
use simquery::mincut::{min_cut_exhaustive, min_cut_stoer_wagner};
use simquery::rng::stream;

fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = stream(seed, 0);
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < density {
                let v = rng.random_range(0.05..2.0);
                w[(i, j)] = v;
                w[(j, i)] = v;
            }
        }
    }
    Graph::new(w).unwrap()
}

/// Every bipartition by bitmask, cut weights summed pair by pair.
fn naive_cut_ratios(g: &Graph, gt: &Graph) -> (f64, f64) {
    let n = g.n();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for mask in 1u32..(1 << (n - 1)) {
        let (mut a, mut b) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                if mask >> i & 1 == 1 && mask >> j & 1 == 0 {
                    a += g.weight(i, j);
                    b += gt.weight(i, j);
                }
            }
        }
        let r = b / a;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

/// Generalized eigenvalues of `(L_G, L_G̃)` on `1⊥` via a Cholesky factor of
/// the projected `L_G̃`; needs `G̃` connected.
fn cholesky_ratios(g: &Graph, gt: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut basis = DMatrix::zeros(n, n - 1);
    for c in 0..n - 1 {
        // Helmert basis of the complement of the all-ones vector
        let k = (c + 1) as f64;
        let norm = (k * (k + 1.0)).sqrt();
        for r in 0..=c {
            basis[(r, c)] = 1.0 / norm;
        }
        basis[(c + 1, c)] = -k / norm;
    }
    let a = basis.transpose() * laplacian_matrix(g) * &basis;
    let b = basis.transpose() * laplacian_matrix(gt) * &basis;
    let chol = b.cholesky().expect("connected G̃ gives a positive definite block");
    let l_inv = chol.l().try_inverse().unwrap();
    let m = &l_inv * a * l_inv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn cut_checker_matches_naive_enumeration() {
    for seed in 0..40 {
        let n = 4 + (seed as usize % 9);
        let g = random_graph(n, 1.0, seed);
        let gt = random_graph(n, 1.0, 1000 + seed);
        let (lo, hi) = naive_cut_ratios(&g, &gt);
        let worst = if (1.0 - lo).abs() >= (hi - 1.0).abs() { lo } else { hi };
        let eps = (1.0 - lo).max(hi - 1.0);
        let report = check_cut_approximation(&g, &gt, eps * 1.001).unwrap();
        assert!(report.holds);
        assert!((report.worst_ratio - worst).abs() <= 1e-12 * worst, "seed {seed}");
        assert!(!check_cut_approximation(&g, &gt, eps * 0.99).unwrap().holds);
    }
}

#[test]
fn spectral_ratios_match_cholesky_oracle() {
    for seed in 0..40 {
        let n = 3 + (seed as usize % 20);
        let g = random_graph(n, 1.0, 2000 + seed);
        let gt = random_graph(n, 1.0, 3000 + seed);
        let oracle = cholesky_ratios(&g, &gt);
        let spec = rayleigh_spectrum(&g, &gt).unwrap();
        assert!(spec.null_mismatch.is_none());
        assert_eq!(spec.ratios.len(), oracle.len());
        for (a, b) in spec.ratios.iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "seed {seed}: {a} vs {b}");
        }
        let lo = oracle[0];
        let hi = oracle[oracle.len() - 1];
        let report = check_spectral_approximation(&g, &gt, 0.0).unwrap();
        let expected = if (1.0 - lo).abs() >= (hi - 1.0).abs() { lo } else { hi };
        assert!((report.worst_ratio - expected).abs() <= 1e-9 * expected.max(1.0));
    }
}

#[test]
fn spectral_witness_attains_ratio() {
    let g = random_graph(10, 0.8, 7);
    let gt = random_graph(10, 1.0, 8);
    let report = check_spectral_approximation(&g, &gt, 0.1).unwrap();
    let x = match report.witness {
        Some(simquery::approx::Witness::Direction(ref v)) => DVector::from_vec(v.clone()),
        _ => panic!("expected a direction"),
    };
    let num = (x.transpose() * laplacian_matrix(&g) * &x)[(0, 0)];
    let den = (x.transpose() * laplacian_matrix(&gt) * &x)[(0, 0)];
    assert!((num / den - report.worst_ratio).abs() <= 1e-8 * report.worst_ratio);
}

#[test]
fn disconnected_approximation_has_infinite_ratio() {
    let g = Graph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
    let gt = Graph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
    let report = check_spectral_approximation(&g, &gt, 0.5).unwrap();
    assert!(!report.holds);
    assert_eq!(report.worst_ratio, f64::INFINITY);
    assert!(report.to_json().contains("\"inf\""));
}

#[test]
fn stoer_wagner_matches_exhaustive() {
    for seed in 0..60 {
        let n = 2 + (seed as usize % 12);
        let g = random_graph(n, 0.5, 4000 + seed);
        let (a, _) = min_cut_exhaustive(&g).unwrap();
        let (b, cut) = min_cut_stoer_wagner(&g).unwrap();
        assert!((a - b).abs() <= 1e-9 * a.max(1.0), "seed {seed}: {a} vs {b}");
        let w = simquery::graph::cut_weight(&g, &cut).unwrap();
        assert!((w - b).abs() <= 1e-9 * b.max(1.0));
    }
}
