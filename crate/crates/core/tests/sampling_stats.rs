use nalgebra::DMatrix;
use rand::Rng as _;

use simquery::data::{planted_clusterable, CrossModel, PlantedGraphSpec};
use simquery::graph::{connected_components, Graph};
use simquery::mincut::min_cut;
use simquery::rng::stream;
use simquery::sampling::{
    unbiased_with_replacement, uniform_without_replacement, ComponentJoin, QueryOracle, UniformSampler,
};

fn random_unit_graph(n: usize, seed: u64) -> Graph {
    let mut rng = stream(seed, 0);
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = rng.random();
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
    }
    Graph::new_unit(w).unwrap()
}

/// Largest `|mean - w| / se` over the entries of `W̃` across `seeds` draws.
fn worst_z(hidden: &Graph, seeds: u64, mut draw: impl FnMut(u64) -> Graph) -> f64 {
    let n = hidden.n();
    let mut sum = DMatrix::<f64>::zeros(n, n);
    let mut sum_sq = DMatrix::<f64>::zeros(n, n);
    for seed in 0..seeds {
        let w = draw(seed).into_weights();
        sum_sq += w.component_mul(&w);
        sum += w;
    }
    let s = seeds as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let mean = sum[(i, j)] / s;
            let var = (sum_sq[(i, j)] / s - mean * mean).max(0.0) * s / (s - 1.0);
            let se = (var / s).sqrt();
            if se > 0.0 {
                worst = worst.max((mean - hidden.weight(i, j)).abs() / se);
            }
        }
    }
    worst
}

#[test]
fn uniform_rescaled_sample_is_unbiased() {
    let hidden = random_unit_graph(7, 1);
    let z = worst_z(&hidden, 10_000, |seed| {
        let mut oracle = QueryOracle::new(hidden.clone()).unwrap();
        uniform_without_replacement(&mut oracle, 6, seed).unwrap().into_graph()
    });
    assert!(z < 4.0, "z = {z}");
}

#[test]
fn with_replacement_sample_is_unbiased() {
    let hidden = random_unit_graph(6, 2);
    let z = worst_z(&hidden, 10_000, |seed| {
        let mut oracle = QueryOracle::new(hidden.clone()).unwrap();
        unbiased_with_replacement(&mut oracle, ComponentJoin, 8, seed).unwrap().into_graph()
    });
    assert!(z < 4.0, "z = {z}");
}

#[test]
fn uniform_prefix_matches_shorter_run() {
    let hidden = random_unit_graph(12, 3);
    let mut long_oracle = QueryOracle::new(hidden.clone()).unwrap();
    let mut long = UniformSampler::new(12, 5);
    for _ in 0..40 {
        long.step(&mut long_oracle).unwrap();
    }
    let mut short_oracle = QueryOracle::new(hidden).unwrap();
    let short = uniform_without_replacement(&mut short_oracle, 25, 5).unwrap();
    let prefix: Vec<_> = long.trajectory().edges().take(25).collect();
    let mut a = prefix.clone();
    a.sort_unstable();
    let mut b = short.observed_edges();
    b.sort_unstable();
    assert_eq!(a, b);
}

#[test]
fn planted_graphs_meet_declared_bounds() {
    for seed in 0..10 {
        let spec = PlantedGraphSpec {
            min_c_in: Some(6.0),
            max_c_out: Some(1.5),
            ..PlantedGraphSpec::new(
                vec![10, 12, 9],
                0.85,
                CrossModel::PerPair {
                    edges: 1,
                    weight: 0.5,
                },
                seed,
            )
        };
        let planted = planted_clusterable(&spec).unwrap();
        let s = &planted.structure;
        assert!(s.c_in >= 6.0 && s.c_out <= 1.5);
        assert!(s.satisfies_separation());
        for members in s.truth.members() {
            let block = planted.graph.induced(&members);
            assert!(min_cut(&block).unwrap().0 >= s.c_in - 1e-9);
            assert_eq!(connected_components(&block).count(), 1);
        }
        assert_eq!(s.c_out, 1.0);
    }
}
