//! Simple undirected graphs, generators, file formats and distance
//! machinery.

mod distance;
pub mod generators;
pub mod io;

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use distance::{
    bipartition, distance_profile, girth, side_distance_averages, Bipartition, DistanceAverages,
    DistanceProfile, Side,
};
pub use generators::{default_families, generate, subdivide, GraphFamily};
pub use io::{from_edge_list, from_graph6, to_edge_list, to_graph6};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is disconnected: vertex {unreachable} is unreachable from vertex {start}")]
    Disconnected { start: usize, unreachable: usize },
    #[error("graph is not bipartite: odd cycle {cycle:?}")]
    NotBipartite { cycle: Vec<usize> },
    #[error("graph has no vertices")]
    Empty,
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameters for `{family}`: {reason}")]
    BadParams { family: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
}

/// An immutable simple undirected graph on vertices `0..n`.
///
/// Neighbor lists are sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Repeated edges (in either
    /// orientation) are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut twice = 0;
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
            twice += nbrs.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: twice / 2,
        })
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Returns `true` when every vertex has the same degree.
    pub fn is_regular(&self) -> bool {
        let mut degrees = self.adjacency.iter().map(Vec::len);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.check_connected().is_ok()
    }

    /// Fails with [`GraphError::Disconnected`] naming the first vertex not
    /// reached from vertex 0, or [`GraphError::Empty`] on the null graph.
    pub fn check_connected(&self) -> Result<(), GraphError> {
        let n = self.order();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(unreachable) => Err(GraphError::Disconnected {
                start: 0,
                unreachable,
            }),
            None => Ok(()),
        }
    }

    /// Renames vertex `i` to `perm[i]`.
    ///
    /// # Panics
    ///
    /// If `perm` is not a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let n = self.order();
        assert_eq!(perm.len(), n, "permutation length mismatch");
        let mut seen = vec![false; n];
        for &p in perm {
            assert!(p < n && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::from_edges(n, &edges).expect("relabeling preserves simplicity")
    }

    /// Copy of the graph with the edge `uv` removed if present, added
    /// otherwise.
    pub fn toggle_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let n = self.order();
        if u >= n || v >= n {
            return Err(GraphError::VertexOutOfRange {
                vertex: u.max(v),
                n,
            });
        }
        if u == v {
            return Err(GraphError::LoopEdge(u));
        }
        let (a, b) = (u.min(v), u.max(v));
        let mut edges = self.edges();
        match edges.binary_search(&(a, b)) {
            Ok(pos) => {
                edges.remove(pos);
            }
            Err(_) => edges.push((a, b)),
        }
        Graph::from_edges(n, &edges)
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.order();
        let mut a = DMatrix::zeros(n, n);
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                a[(u, v)] = 1.0;
            }
        }
        a
    }
}
