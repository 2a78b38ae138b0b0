//! Weighted undirected graphs held as dense symmetric weight matrices.
//!
//! Every graph is treated as complete: a missing edge is an entry of weight
//! zero. The types here are immutable once built and are shared by the
//! sampling, spectral and verification code.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Absolute tolerance used when deciding that an eigenvalue is zero.
pub const ZERO_EIGEN_TOL: f64 = 1e-8;

/// A weighted undirected graph on `n` vertices.
///
/// Weights are finite, nonnegative and symmetric with a zero diagonal. Hidden
/// similarity graphs additionally keep every weight in `[0, 1]` (see
/// [`Graph::is_unit_bounded`]); rescaled sample graphs may exceed 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    weights: DMatrix<f64>,
}

impl Graph {
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        if !weights.is_square() {
            return Err(Error::InvalidGraph(format!(
                "weight matrix is {}x{}, expected square",
                weights.nrows(),
                weights.ncols()
            )));
        }
        let n = weights.nrows();
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(Error::InvalidGraph(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let w = weights[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidGraph(format!(
                        "weight ({i}, {j}) = {w} is not a finite nonnegative number"
                    )));
                }
                if weights[(j, i)] != w {
                    return Err(Error::InvalidGraph(format!("asymmetric entry ({i}, {j})")));
                }
            }
        }
        Ok(Self { weights })
    }

    /// Graph with weights in `[0, 1]`, as required for hidden similarity graphs.
    pub fn new_unit(weights: DMatrix<f64>) -> Result<Self> {
        let g = Self::new(weights)?;
        if !g.is_unit_bounded() {
            return Err(Error::InvalidGraph("weights must lie in [0, 1]".into()));
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Self {
            weights: DMatrix::zeros(n, n),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut w = DMatrix::zeros(n, n);
        for &(i, j, weight) in edges {
            if i >= n || j >= n {
                return Err(Error::VertexOutOfRange { index: i.max(j), n });
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self loop at {i}")));
            }
            w[(i, j)] = weight;
            w[(j, i)] = weight;
        }
        Self::new(w)
    }

    /// Complete graph with unit weights.
    pub fn complete(n: usize) -> Self {
        let mut w = DMatrix::from_element(n, n, 1.0);
        w.fill_diagonal(0.0);
        Self { weights: w }
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn num_pairs(&self) -> usize {
        num_pairs(self.n())
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn into_weights(self) -> DMatrix<f64> {
        self.weights
    }

    pub fn is_unit_bounded(&self) -> bool {
        self.weights.iter().all(|&w| w <= 1.0)
    }

    pub fn degrees(&self) -> DVector<f64> {
        DVector::from_iterator(self.n(), self.weights.row_iter().map(|r| r.sum()))
    }

    pub fn min_degree(&self) -> f64 {
        self.degrees().min()
    }

    /// Positive-weight edges `(i, j, w)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| {
            ((i + 1)..n).filter_map(move |j| {
                let w = self.weights[(i, j)];
                (w > 0.0).then_some((i, j, w))
            })
        })
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(&self.weights * factor)
    }

    /// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let k = vertices.len();
        let w = DMatrix::from_fn(k, k, |a, b| self.weights[(vertices[a], vertices[b])]);
        Self { weights: w }
    }

    pub(crate) fn set_symmetric(&mut self, i: usize, j: usize, w: f64) {
        self.weights[(i, j)] = w;
        self.weights[(j, i)] = w;
    }

    pub(crate) fn add_symmetric(&mut self, i: usize, j: usize, w: f64) {
        self.weights[(i, j)] += w;
        self.weights[(j, i)] += w;
    }

    pub(crate) fn from_matrix_unchecked(weights: DMatrix<f64>) -> Self {
        debug_assert!(weights.is_square());
        Self { weights }
    }

    /// Writes the `n=<count>` header followed by one `i,j,w` row per positive
    /// upper-triangular entry.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n={}", self.n())?;
        let mut wtr = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(out);
        for (i, j, w) in self.edges() {
            wtr.write_record([i.to_string(), j.to_string(), format!("{w}")])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    pub fn read_csv<R: BufRead>(mut input: R) -> Result<Self> {
        let mut header = String::new();
        if input.read_line(&mut header)? == 0 {
            return Err(Error::EmptyInput);
        }
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::MalformedRow {
                line: 1,
                reason: format!("expected header \"n=<count>\", found {:?}", header.trim()),
            })?;
        let mut w = DMatrix::zeros(n, n);
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(input);
        for (row, record) in rdr.records().enumerate() {
            let line = row + 2;
            let record = record?;
            if record.len() != 3 {
                return Err(Error::MalformedRow {
                    line,
                    reason: format!("expected 3 fields, found {}", record.len()),
                });
            }
            let parse_index = |column: usize| -> Result<usize> {
                record[column].parse().map_err(|_| Error::NonNumeric {
                    line,
                    column: column + 1,
                    value: record[column].to_string(),
                })
            };
            let i = parse_index(0)?;
            let j = parse_index(1)?;
            let weight: f64 = record[2].parse().map_err(|_| Error::NonNumeric {
                line,
                column: 3,
                value: record[2].to_string(),
            })?;
            if i >= n || j >= n {
                return Err(Error::VertexOutOfRange { index: i.max(j), n });
            }
            if i >= j {
                return Err(Error::MalformedRow {
                    line,
                    reason: format!("entry ({i}, {j}) is not strictly upper-triangular"),
                });
            }
            if w[(i, j)] != 0.0 {
                return Err(Error::MalformedRow {
                    line,
                    reason: format!("duplicate entry ({i}, {j})"),
                });
            }
            w[(i, j)] = weight;
            w[(j, i)] = weight;
        }
        Self::new(w)
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Self::read_csv(s.as_bytes())
    }
}

/// `C(n, 2)`.
pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Bijection between unordered vertex pairs `i < j` and `0..C(n, 2)`.
#[derive(Debug, Clone, Copy)]
pub struct PairIndex {
    n: usize,
}

impl PairIndex {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn len(&self) -> usize {
        num_pairs(self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(i != j && j < self.n);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    #[inline]
    pub fn pair(&self, mut idx: usize) -> (usize, usize) {
        let mut i = 0;
        loop {
            let row = self.n - i - 1;
            if idx < row {
                return (i, i + 1 + idx);
            }
            idx -= row;
            i += 1;
        }
    }
}

/// Unnormalized and normalized Laplacians together with the degree vector.
#[derive(Debug, Clone)]
pub struct LaplacianPair {
    pub laplacian: DMatrix<f64>,
    pub normalized: DMatrix<f64>,
    pub degrees: DVector<f64>,
}

/// `L = D - W` and `D^{-1/2} L D^{-1/2}`. Rows and columns of zero-degree
/// vertices are zero in the normalized Laplacian (pseudo-inverse of `D^{1/2}`).
pub fn laplacian(g: &Graph) -> LaplacianPair {
    let degrees = g.degrees();
    let laplacian = laplacian_matrix(g);
    let inv_sqrt = degrees.map(|d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 });
    let normalized = DMatrix::from_fn(g.n(), g.n(), |i, j| {
        laplacian[(i, j)] * inv_sqrt[i] * inv_sqrt[j]
    });
    LaplacianPair {
        laplacian,
        normalized,
        degrees,
    }
}

pub fn laplacian_matrix(g: &Graph) -> DMatrix<f64> {
    let mut l = -g.weights();
    for (i, d) in g.degrees().iter().enumerate() {
        l[(i, i)] = *d;
    }
    l
}

pub fn quadratic_form(m: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    x.dot(&(m * x))
}

/// A cut given by a nonempty proper vertex subset `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutSpec {
    n: usize,
    members: Vec<usize>,
}

impl CutSpec {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&last) = members.last() {
            if last >= n {
                return Err(Error::VertexOutOfRange { index: last, n });
            }
        }
        if members.is_empty() || members.len() == n {
            return Err(Error::InvalidCut(format!(
                "subset of size {} is not a nonempty proper subset of {n} vertices",
                members.len()
            )));
        }
        Ok(Self { n, members })
    }

    /// Cut `{i : bit i of mask set}`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        Self::new(n, (0..n).filter(|&i| mask >> i & 1 == 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn complement(&self) -> Self {
        let inside = self.indicator_bools();
        Self {
            n: self.n,
            members: (0..self.n).filter(|&i| !inside[i]).collect(),
        }
    }

    pub fn indicator_bools(&self) -> Vec<bool> {
        let mut v = vec![false; self.n];
        for &i in &self.members {
            v[i] = true;
        }
        v
    }

    pub fn indicator(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.n,
            self.indicator_bools().into_iter().map(|b| if b { 1.0 } else { 0.0 }),
        )
    }
}

/// Total weight of edges with exactly one endpoint in the cut's subset.
pub fn cut_weight(g: &Graph, cut: &CutSpec) -> Result<f64> {
    if cut.n() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "cut over {} vertices applied to graph with {}",
            cut.n(),
            g.n()
        )));
    }
    let inside = cut.indicator_bools();
    let outside: Vec<usize> = (0..g.n()).filter(|&j| !inside[j]).collect();
    Ok(cut
        .members()
        .iter()
        .map(|&i| outside.iter().map(|&j| g.weight(i, j)).sum::<f64>())
        .sum())
}

/// A partition of the vertices into connected components.
///
/// Components are numbered by their lowest vertex, so component 0 always
/// contains vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    labels: Vec<usize>,
    count: usize,
}

impl Components {
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.count];
        for (v, &c) in self.labels.iter().enumerate() {
            groups[c].push(v);
        }
        groups
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &c in &self.labels {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Connected components over positive-weight edges.
pub fn connected_components(g: &Graph) -> Components {
    let n = g.n();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if g.weight(i, j) > 0.0 {
                uf.union(i, j);
            }
        }
    }
    uf.components()
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn components(&mut self) -> Components {
        let n = self.parent.len();
        let mut root_label = vec![usize::MAX; n];
        let mut labels = vec![0; n];
        let mut count = 0;
        for v in 0..n {
            let r = self.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = count;
                count += 1;
            }
            labels[v] = root_label[r];
        }
        Components { labels, count }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn single_edge_laplacian() {
        let g = Graph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let lp = laplacian(&g);
        assert_eq!(lp.laplacian, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn path_degrees() {
        let lp = laplacian(&path3());
        assert_eq!(lp.degrees.as_slice(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn isolated_vertex_has_zero_normalized_row() {
        let g = Graph::from_edges(3, &[(0, 1, 0.5)]).unwrap();
        let lp = laplacian(&g);
        for j in 0..3 {
            assert_eq!(lp.normalized[(2, j)], 0.0);
            assert_eq!(lp.normalized[(j, 2)], 0.0);
        }
        assert!((lp.normalized[(0, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_weights() {
        let mut w = DMatrix::zeros(2, 2);
        w[(0, 1)] = 0.3;
        assert!(Graph::new(w.clone()).is_err());
        w[(1, 0)] = 0.3;
        assert!(Graph::new(w.clone()).is_ok());
        w[(0, 1)] = -0.3;
        w[(1, 0)] = -0.3;
        assert!(Graph::new(w).is_err());
        assert!(Graph::from_edges(2, &[(0, 1, 1.5)]).unwrap().is_unit_bounded() == false);
        assert!(Graph::new_unit(DMatrix::from_row_slice(2, 2, &[0.0, 1.5, 1.5, 0.0])).is_err());
    }

    #[test]
    fn k4_cut_of_two() {
        let g = Graph::complete(4);
        let cut = CutSpec::new(4, [0, 1]).unwrap();
        assert_eq!(cut_weight(&g, &cut).unwrap(), 4.0);
    }

    #[test]
    fn cut_rejects_trivial_subsets() {
        assert!(matches!(CutSpec::new(3, []), Err(Error::InvalidCut(_))));
        assert!(matches!(CutSpec::new(3, [0, 1, 2]), Err(Error::InvalidCut(_))));
        assert!(matches!(
            CutSpec::new(3, [3]),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn components_of_empty_and_triangles() {
        assert_eq!(connected_components(&Graph::empty(5)).count(), 5);
        let g = Graph::from_edges(
            6,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
            ],
        )
        .unwrap();
        let c = connected_components(&g);
        assert_eq!(c.count(), 2);
        assert_eq!(c.sizes(), vec![3, 3]);
        assert_eq!(c.labels(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn pair_index_is_a_bijection() {
        for n in 2..9 {
            let idx = PairIndex::new(n);
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    assert_eq!(idx.index(i, j), k);
                    assert_eq!(idx.index(j, i), k);
                    assert_eq!(idx.pair(k), (i, j));
                    k += 1;
                }
            }
            assert_eq!(k, idx.len());
        }
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let g = Graph::from_edges(4, &[(0, 1, 0.125), (2, 3, 1.0 / 3.0), (0, 3, 1.0)]).unwrap();
        let text = g.to_csv_string();
        assert!(text.starts_with("n=4\n0,1,0.125\n"));
        assert_eq!(Graph::from_csv_str(&text).unwrap(), g);

        assert!(matches!(Graph::from_csv_str(""), Err(Error::EmptyInput)));
        assert!(matches!(
            Graph::from_csv_str("4\n0,1,1\n"),
            Err(Error::MalformedRow { line: 1, .. })
        ));
        assert!(matches!(
            Graph::from_csv_str("n=3\n0,x,1\n"),
            Err(Error::NonNumeric { line: 2, column: 2, .. })
        ));
        assert!(matches!(
            Graph::from_csv_str("n=3\n1,0,1\n"),
            Err(Error::MalformedRow { line: 2, .. })
        ));
        assert!(matches!(
            Graph::from_csv_str("n=3\n0,5,1\n"),
            Err(Error::VertexOutOfRange { .. })
        ));
    }
}
