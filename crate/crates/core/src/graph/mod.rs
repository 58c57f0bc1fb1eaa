//! Graph representation, structural distances and the dual-graph transform.

mod distance;
mod dual;
mod io;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

pub use distance::DistanceMatrix;
pub(crate) use distance::check_unit;
pub use dual::dual_graph;
pub use io::GraphFile;

use crate::attributes::AttributeBundle;
use crate::error::{Error, Result};

const MEASURE_TOL: f64 = 1e-9;

/// Undirected weighted edge `(i, j, length)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub length: f64,
}

/// Weighted undirected graph carrying a probability measure on its nodes and
/// optional per-node attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    n: usize,
    edges: Vec<Edge>,
    mu: Vec<f64>,
    attributes: Option<Vec<AttributeBundle>>,
}

impl AttributedGraph {
    /// Graph with a uniform node measure and no attributes.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mu = uniform_measure(n);
        Self::with_parts(n, edges, mu, None)
    }

    pub fn with_parts(
        n: usize,
        edges: Vec<Edge>,
        mu: Vec<f64>,
        attributes: Option<Vec<AttributeBundle>>,
    ) -> Result<Self> {
        for e in &edges {
            if e.i >= n || e.j >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) references a node outside 0..{n}",
                    e.i, e.j
                )));
            }
            if e.i == e.j {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", e.i)));
            }
            if !(e.length > 0.0 && e.length.is_finite()) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has length {}",
                    e.i, e.j, e.length
                )));
            }
        }
        validate_measure(&mu, n)?;
        if let Some(attrs) = &attributes {
            if attrs.len() != n {
                return Err(Error::InvalidGraph(format!(
                    "{} attribute bundles for {n} nodes",
                    attrs.len()
                )));
            }
        }
        Ok(Self {
            n,
            edges,
            mu,
            attributes,
        })
    }

    pub fn with_mu(mut self, mu: Vec<f64>) -> Result<Self> {
        validate_measure(&mu, self.n)?;
        self.mu = mu;
        Ok(self)
    }

    pub fn with_attributes(mut self, attributes: Vec<AttributeBundle>) -> Result<Self> {
        if attributes.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} attribute bundles for {} nodes",
                attributes.len(),
                self.n
            )));
        }
        self.attributes = Some(attributes);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn attributes(&self) -> Option<&[AttributeBundle]> {
        self.attributes.as_deref()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }

    fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push((e.j, e.length));
            adj[e.j].push((e.i, e.length));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// All-pairs shortest-path lengths.
    pub fn geodesic_distances(&self) -> Result<DistanceMatrix> {
        let adj = self.adjacency();
        let mut out = Array2::zeros((self.n, self.n));
        for source in 0..self.n {
            let dist = dijkstra(&adj, source);
            for (target, d) in dist.into_iter().enumerate() {
                if !d.is_finite() {
                    return Err(Error::DisconnectedGraph {
                        from: source,
                        to: target,
                    });
                }
                out[[source, target]] = d;
            }
        }
        // Both directions come from independent runs; copy the upper triangle so
        // the result is exactly symmetric.
        for i in 0..self.n {
            for j in 0..i {
                out[[i, j]] = out[[j, i]];
            }
        }
        Ok(DistanceMatrix::from_trusted(out))
    }
}

pub fn uniform_measure(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

fn validate_measure(mu: &[f64], n: usize) -> Result<()> {
    if mu.len() != n {
        return Err(Error::InvalidGraph(format!("measure has {} entries for {n} nodes", mu.len())));
    }
    if mu.iter().any(|&m| !m.is_finite() || m < 0.0) {
        return Err(Error::InvalidGraph("measure has a negative or non-finite entry".into()));
    }
    let total: f64 = mu.iter().sum();
    if n > 0 && (total - 1.0).abs() > MEASURE_TOL {
        return Err(Error::InvalidGraph(format!("measure sums to {total}")));
    }
    Ok(())
}

#[derive(PartialEq)]
struct Candidate {
    dist: f64,
    node: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Candidate {
        dist: 0.0,
        node: source,
    });
    while let Some(Candidate { dist: d, node: u }) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, len) in &adj[u] {
            let nd = d + len;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Candidate { dist: nd, node: v });
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn edge(i: usize, j: usize, length: f64) -> Edge {
        Edge { i, j, length }
    }

    /// Minimum length over all simple paths, by exhaustive DFS.
    fn brute_force_shortest(adj: &[Vec<(usize, f64)>], from: usize, to: usize) -> f64 {
        fn walk(
            adj: &[Vec<(usize, f64)>],
            at: usize,
            to: usize,
            len: f64,
            seen: &mut Vec<bool>,
            best: &mut f64,
        ) {
            if at == to {
                *best = best.min(len);
                return;
            }
            for &(v, l) in &adj[at] {
                if !seen[v] {
                    seen[v] = true;
                    walk(adj, v, to, len + l, seen, best);
                    seen[v] = false;
                }
            }
        }
        let mut seen = vec![false; adj.len()];
        seen[from] = true;
        let mut best = f64::INFINITY;
        walk(adj, from, to, 0.0, &mut seen, &mut best);
        best
    }

    fn random_connected(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> AttributedGraph {
        // random spanning tree plus extra random edges
        let mut edges = Vec::new();
        for v in 1..n {
            let u = rng.random_range(0..v);
            edges.push(edge(u, v, rng.random_range(0.1..5.0)));
        }
        for _ in 0..extra {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if i != j {
                edges.push(edge(i, j, rng.random_range(0.1..5.0)));
            }
        }
        AttributedGraph::new(n, edges).unwrap()
    }

    #[test]
    fn path_graph_distances() {
        let g = AttributedGraph::new(3, vec![edge(0, 1, 1.0), edge(1, 2, 1.0)]).unwrap();
        let d = g.geodesic_distances().unwrap();
        assert_eq!(d.get(0, 2), 2.0);
        for i in 0..3 {
            assert_eq!(d.get(i, i), 0.0);
        }
    }

    #[test]
    fn geodesic_matches_exhaustive_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let g = random_connected(8, 6, &mut rng);
            let d = g.geodesic_distances().unwrap();
            let adj = g.adjacency();
            for i in 0..8 {
                for j in 0..8 {
                    let expected = brute_force_shortest(&adj, i, j);
                    assert!((d.get(i, j) - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn geodesic_is_a_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [2, 5, 12, 20] {
            let g = random_connected(n, n, &mut rng);
            let d = g.geodesic_distances().unwrap();
            assert!(d.satisfies_triangle_inequality(1e-12));
        }
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = AttributedGraph::new(4, vec![edge(0, 1, 1.0), edge(2, 3, 1.0)]).unwrap();
        assert!(matches!(
            g.geodesic_distances(),
            Err(Error::DisconnectedGraph { .. })
        ));
        assert!(!g.is_connected());
    }

    #[test]
    fn construction_validates_invariants() {
        assert!(AttributedGraph::new(2, vec![edge(0, 0, 1.0)]).is_err());
        assert!(AttributedGraph::new(2, vec![edge(0, 2, 1.0)]).is_err());
        assert!(AttributedGraph::new(2, vec![edge(0, 1, 0.0)]).is_err());
        let g = AttributedGraph::new(2, vec![edge(0, 1, 1.0)]).unwrap();
        assert!(g.clone().with_mu(vec![0.7, 0.2]).is_err());
        assert!(g.clone().with_mu(vec![1.2, -0.2]).is_err());
        assert!(g.with_mu(vec![0.25, 0.75]).is_ok());
    }
}
