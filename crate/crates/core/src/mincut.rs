//! Global minimum cuts: exhaustive Gray-code enumeration for small graphs and
//! Stoer–Wagner minimum-cut-phase contraction otherwise.

use crate::error::{Error, Result};
use crate::graph::{connected_components, cut_weight, CutSpec, Graph};

/// Largest vertex count for which [`min_cut`] enumerates every cut.
pub const EXHAUSTIVE_MIN_CUT_LIMIT: usize = 20;

/// Walks every cut `S ⊆ {0, …, n-2}` (vertex `n-1` always outside) in Gray-code
/// order, maintaining each graph's cut weight incrementally.
///
/// Every unordered bipartition is visited exactly once. The callback receives
/// the membership mask and the current cut weight in each graph.
pub(crate) fn for_each_cut<F>(graphs: &[&Graph], mut visit: F)
where
    F: FnMut(u64, &[f64]),
{
    let n = graphs[0].n();
    debug_assert!(graphs.iter().all(|g| g.n() == n));
    if n < 2 {
        return;
    }
    assert!(n <= 63, "cut enumeration limited to 63 vertices");
    let degrees: Vec<Vec<f64>> = graphs.iter().map(|g| g.degrees().iter().copied().collect()).collect();
    // into_s[g][u] = weight from u into S in graph g
    let mut into_s = vec![vec![0.0; n]; graphs.len()];
    let mut cut = vec![0.0; graphs.len()];
    let mut mask: u64 = 0;
    let total: u64 = 1 << (n - 1);
    for step in 1..total {
        let v = step.trailing_zeros() as usize;
        mask ^= 1 << v;
        let entering = mask >> v & 1 == 1;
        for (k, g) in graphs.iter().enumerate() {
            let delta = degrees[k][v] - 2.0 * into_s[k][v];
            let sign = if entering { 1.0 } else { -1.0 };
            cut[k] += sign * delta;
            let row = g.weights().row(v);
            for (u, acc) in into_s[k].iter_mut().enumerate() {
                *acc += sign * row[u];
            }
        }
        visit(mask, &cut);
    }
}

/// Exact minimum cut by enumerating all `2^(n-1) - 1` bipartitions.
pub fn min_cut_exhaustive(g: &Graph) -> Result<(f64, CutSpec)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument("minimum cut needs at least 2 vertices".into()));
    }
    if n > 30 {
        return Err(Error::TooLargeForExhaustive { n, limit: 30 });
    }
    let mut best = (f64::INFINITY, 0u64);
    for_each_cut(&[g], |mask, cuts| {
        if cuts[0] < best.0 {
            best = (cuts[0], mask);
        }
    });
    let cut = CutSpec::from_mask(n, best.1)?;
    // recompute to drop incremental rounding
    let weight = cut_weight(g, &cut)?;
    Ok((weight, cut))
}

/// Stoer–Wagner on the dense weight matrix, `O(n^3)`.
pub fn min_cut_stoer_wagner(g: &Graph) -> Result<(f64, CutSpec)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument("minimum cut needs at least 2 vertices".into()));
    }
    let mut w = g.weights().clone();
    let mut groups: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best_weight = f64::INFINITY;
    let mut best_set = Vec::new();

    while active.len() > 1 {
        let mut added = vec![false; n];
        let mut key = vec![0.0; n];
        let mut prev = active[0];
        added[prev] = true;
        for &v in &active {
            key[v] = w[(prev, v)];
        }
        for round in 1..active.len() {
            let mut sel = usize::MAX;
            for &v in &active {
                if !added[v] && (sel == usize::MAX || key[v] > key[sel]) {
                    sel = v;
                }
            }
            added[sel] = true;
            if round == active.len() - 1 {
                if key[sel] < best_weight {
                    best_weight = key[sel];
                    best_set = groups[sel].clone();
                }
                let moved = std::mem::take(&mut groups[sel]);
                groups[prev].extend(moved);
                for &v in &active {
                    let merged = w[(prev, v)] + w[(sel, v)];
                    w[(prev, v)] = merged;
                    w[(v, prev)] = merged;
                }
                w[(prev, prev)] = 0.0;
                active.retain(|&v| v != sel);
                break;
            }
            for &v in &active {
                if !added[v] {
                    key[v] += w[(sel, v)];
                }
            }
            prev = sel;
        }
    }
    let cut = CutSpec::new(n, best_set)?;
    let weight = cut_weight(g, &cut)?;
    Ok((weight, cut))
}

/// Global minimum cut weight and a witnessing subset.
///
/// Disconnected graphs return weight 0 with the component containing vertex 0
/// as the witness.
pub fn min_cut(g: &Graph) -> Result<(f64, CutSpec)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument("minimum cut needs at least 2 vertices".into()));
    }
    let comps = connected_components(g);
    if comps.count() > 1 {
        let first = comps.groups().swap_remove(0);
        return Ok((0.0, CutSpec::new(n, first)?));
    }
    if n <= EXHAUSTIVE_MIN_CUT_LIMIT {
        min_cut_exhaustive(g)
    } else {
        min_cut_stoer_wagner(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bridged_triangles() -> Graph {
        Graph::from_edges(
            6,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
                (2, 3, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bridge_is_the_min_cut() {
        for f in [min_cut, min_cut_exhaustive, min_cut_stoer_wagner] {
            let (w, cut) = f(&bridged_triangles()).unwrap();
            assert_eq!(w, 1.0);
            let m = cut.members();
            assert!(m == [0, 1, 2] || m == [3, 4, 5], "{m:?}");
        }
    }

    #[test]
    fn k4_min_cut_isolates_a_vertex() {
        for f in [min_cut, min_cut_exhaustive, min_cut_stoer_wagner] {
            let (w, cut) = f(&Graph::complete(4)).unwrap();
            assert_eq!(w, 3.0);
            assert!(cut.members().len() == 1 || cut.members().len() == 3);
        }
    }

    #[test]
    fn disconnected_graph_has_zero_cut() {
        let g = Graph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let (w, cut) = min_cut(&g).unwrap();
        assert_eq!(w, 0.0);
        assert_eq!(cut.members(), &[0, 1]);
    }

    #[test]
    fn enumeration_visits_every_bipartition_once() {
        let g = Graph::complete(5);
        let mut seen = std::collections::HashSet::new();
        for_each_cut(&[&g], |mask, cuts| {
            assert!(seen.insert(mask));
            let s = mask.count_ones() as f64;
            assert!((cuts[0] - s * (5.0 - s)).abs() < 1e-12);
        });
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn too_small_graphs_are_rejected() {
        assert!(min_cut(&Graph::empty(1)).is_err());
    }
}
