//! Named graph families.
//!
//! Vertex numbering is fixed so that graph6 output is byte-stable:
//!
//! | family | parameters | numbering |
//! |--------|------------|-----------|
//! | `cycle` | `n ≥ 3` | `i ~ i+1 (mod n)` |
//! | `path` | `n ≥ 1` | `i ~ i+1` |
//! | `complete` | `n ≥ 1` | all pairs |
//! | `complete_bipartite` | `m n ≥ 1` | sides `0..m` and `m..m+n` |
//! | `hypercube` | `k ≥ 1` | vertices are `k`-bit words, adjacent when they differ in one bit |
//! | `petersen` | none | outer 5-cycle `0..5`, spokes `i ~ i+5`, inner pentagram `5+i ~ 5+(i+2 mod 5)` |
//!
//! [`subdivide`] keeps the original vertices `0..n` and appends one vertex
//! per edge, `n + k` for the `k`-th edge in lexicographic order.

use crate::registry::{Named, Registry};

use super::{Graph, GraphError};

/// A parameterized family of graphs, selectable by name.
pub trait GraphFamily: Named + Send + Sync {
    /// Short parameter synopsis, e.g. `"<m> <n>"`.
    fn usage(&self) -> &'static str;

    fn build(&self, params: &[usize]) -> Result<Graph, GraphError>;
}

fn bad(family: &str, reason: impl Into<String>) -> GraphError {
    GraphError::BadParams {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn expect_params<const N: usize>(family: &str, params: &[usize]) -> Result<[usize; N], GraphError> {
    params.try_into().map_err(|_| {
        bad(
            family,
            format!("expected {N} parameter(s), got {}", params.len()),
        )
    })
}

pub struct Cycle;

impl Named for Cycle {
    fn name(&self) -> &'static str {
        "cycle"
    }
}

impl GraphFamily for Cycle {
    fn usage(&self) -> &'static str {
        "<n>"
    }

    fn build(&self, params: &[usize]) -> Result<Graph, GraphError> {
        let [n] = expect_params(self.name(), params)?;
        if n < 3 {
            return Err(bad(self.name(), "a cycle needs n >= 3"));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }
}

pub struct Path;

impl Named for Path {
    fn name(&self) -> &'static str {
        "path"
    }
}

impl GraphFamily for Path {
    fn usage(&self) -> &'static str {
        "<n>"
    }

    fn build(&self, params: &[usize]) -> Result<Graph, GraphError> {
        let [n] = expect_params(self.name(), params)?;
        if n < 1 {
            return Err(bad(self.name(), "a path needs n >= 1"));
        }
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }
}

pub struct Complete;

impl Named for Complete {
    fn name(&self) -> &'static str {
        "complete"
    }
}

impl GraphFamily for Complete {
    fn usage(&self) -> &'static str {
        "<n>"
    }

    fn build(&self, params: &[usize]) -> Result<Graph, GraphError> {
        let [n] = expect_params(self.name(), params)?;
        if n < 1 {
            return Err(bad(self.name(), "n >= 1 required"));
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges)
    }
}

pub struct CompleteBipartite;

impl Named for CompleteBipartite {
    fn name(&self) -> &'static str {
        "complete_bipartite"
    }
}

impl GraphFamily for CompleteBipartite {
    fn usage(&self) -> &'static str {
        "<m> <n>"
    }

    fn build(&self, params: &[usize]) -> Result<Graph, GraphError> {
        let [m, n] = expect_params(self.name(), params)?;
        if m < 1 || n < 1 {
            return Err(bad(self.name(), "both sides need at least one vertex"));
        }
        let mut edges = Vec::with_capacity(m * n);
        for u in 0..m {
            for v in 0..n {
                edges.push((u, m + v));
            }
        }
        Graph::from_edges(m + n, &edges)
    }
}

pub struct Hypercube;

impl Named for Hypercube {
    fn name(&self) -> &'static str {
        "hypercube"
    }
}

impl GraphFamily for Hypercube {
    fn usage(&self) -> &'static str {
        "<k>"
    }

    fn build(&self, params: &[usize]) -> Result<Graph, GraphError> {
        let [k] = expect_params(self.name(), params)?;
        if !(1..=16).contains(&k) {
            return Err(bad(self.name(), "dimension must be in 1..=16"));
        }
        let n = 1usize << k;
        let mut edges = Vec::with_capacity(n * k / 2);
        for u in 0..n {
            for bit in 0..k {
                let v = u ^ (1 << bit);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges)
    }
}

pub struct Petersen;

impl Named for Petersen {
    fn name(&self) -> &'static str {
        "petersen"
    }
}

impl GraphFamily for Petersen {
    fn usage(&self) -> &'static str {
        ""
    }

    fn build(&self, params: &[usize]) -> Result<Graph, GraphError> {
        let [] = expect_params(self.name(), params)?;
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges)
    }
}

/// Registry holding every built-in family.
pub fn default_families() -> Registry<dyn GraphFamily> {
    let mut reg: Registry<dyn GraphFamily> = Registry::new();
    reg.register(Box::new(Cycle))
        .register(Box::new(Path))
        .register(Box::new(Complete))
        .register(Box::new(CompleteBipartite))
        .register(Box::new(Hypercube))
        .register(Box::new(Petersen));
    reg
}

/// Builds a member of a built-in family by name.
pub fn generate(family: &str, params: &[usize]) -> Result<Graph, GraphError> {
    default_families()
        .get(family)
        .ok_or_else(|| GraphError::UnknownFamily(family.to_string()))?
        .build(params)
}

/// Replaces every edge by a path of length two through a new vertex.
///
/// The result is bipartite with the appended vertices on one side and the
/// original vertices on the other.
pub fn subdivide(g: &Graph) -> Graph {
    let n = g.order();
    let mut edges = Vec::with_capacity(2 * g.edge_count());
    for (k, (u, v)) in g.edges().into_iter().enumerate() {
        edges.push((u, n + k));
        edges.push((v, n + k));
    }
    Graph::from_edges(n + g.edge_count(), &edges).expect("subdivision of a simple graph is simple")
}
