use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// BFS layers around a source vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    pub source: usize,
    /// Distance from the source to each vertex.
    pub dist: Vec<usize>,
    /// `shells[i]` holds the vertices at distance `i`, in increasing order.
    pub shells: Vec<Vec<usize>>,
}

impl DistanceProfile {
    pub fn eccentricity(&self) -> usize {
        self.shells.len() - 1
    }

    /// `k_i(u)`, zero beyond the eccentricity.
    pub fn count(&self, i: usize) -> usize {
        self.shells.get(i).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.shells.iter().map(Vec::len).collect()
    }

    /// Vertices at distance at most `j`.
    pub fn ball(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.shells.iter().take(j + 1).flatten().copied()
    }
}

fn bfs(g: &Graph, source: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let n = g.order();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// BFS distance layers from `u`.
pub fn distance_profile(g: &Graph, u: usize) -> Result<DistanceProfile, GraphError> {
    let n = g.order();
    if u >= n {
        return Err(GraphError::VertexOutOfRange { vertex: u, n });
    }
    let (dist, _) = bfs(g, u);
    let mut out = Vec::with_capacity(n);
    for (v, d) in dist.into_iter().enumerate() {
        match d {
            Some(d) => out.push(d),
            None => {
                return Err(GraphError::Disconnected {
                    start: u,
                    unreachable: v,
                })
            }
        }
    }
    let ecc = out.iter().copied().max().unwrap_or(0);
    let mut shells = vec![Vec::new(); ecc + 1];
    for (v, &d) in out.iter().enumerate() {
        shells[d].push(v);
    }
    Ok(DistanceProfile {
        source: u,
        dist: out,
        shells,
    })
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in 0..g.order() {
        let (dist, parent) = bfs(g, s);
        for u in 0..g.order() {
            let Some(du) = dist[u] else { continue };
            for &v in g.neighbors(u) {
                let Some(dv) = dist[v] else { continue };
                if parent[u] != Some(v) && parent[v] != Some(u) && u < v {
                    let len = du + dv + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }
}

/// The two stable sets of a connected bipartite graph.
///
/// Sides are labeled so that `d1 >= d2`; ties go to the larger side, then to
/// the side containing vertex 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub side1: Vec<usize>,
    pub side2: Vec<usize>,
    /// Maximum eccentricity over each side.
    pub d1: usize,
    pub d2: usize,
    /// Common degree on each side, when the side is degree-homogeneous.
    pub delta1: Option<usize>,
    pub delta2: Option<usize>,
    side_of: Vec<Side>,
    eccentricity: Vec<usize>,
}

impl Bipartition {
    pub fn n1(&self) -> usize {
        self.side1.len()
    }

    pub fn n2(&self) -> usize {
        self.side2.len()
    }

    pub fn side_of(&self, u: usize) -> Side {
        self.side_of[u]
    }

    pub fn side(&self, s: Side) -> &[usize] {
        match s {
            Side::One => &self.side1,
            Side::Two => &self.side2,
        }
    }

    pub fn eccentricity(&self, u: usize) -> usize {
        self.eccentricity[u]
    }

    pub fn diameter(&self) -> usize {
        self.d1.max(self.d2)
    }

    /// `(δ1, δ2)` when both sides are degree-homogeneous.
    pub fn semiregular_degrees(&self) -> Option<(usize, usize)> {
        Some((self.delta1?, self.delta2?))
    }

    /// Same partition with the side labels exchanged.
    pub fn swapped(&self) -> Bipartition {
        Bipartition {
            side1: self.side2.clone(),
            side2: self.side1.clone(),
            d1: self.d2,
            d2: self.d1,
            delta1: self.delta2,
            delta2: self.delta1,
            side_of: self.side_of.iter().map(|s| s.other()).collect(),
            eccentricity: self.eccentricity.clone(),
        }
    }
}

fn odd_cycle(parent: &[Option<usize>], dist: &[Option<usize>], x: usize, y: usize) -> Vec<usize> {
    // climb from both endpoints of the offending edge to their common ancestor
    let (mut a, mut b) = (x, y);
    let mut left = vec![a];
    let mut right = vec![b];
    while dist[a] > dist[b] {
        a = parent[a].unwrap();
        left.push(a);
    }
    while dist[b] > dist[a] {
        b = parent[b].unwrap();
        right.push(b);
    }
    while a != b {
        a = parent[a].unwrap();
        b = parent[b].unwrap();
        left.push(a);
        right.push(b);
    }
    right.pop();
    left.extend(right.into_iter().rev());
    left
}

fn homogeneous_degree(g: &Graph, side: &[usize]) -> Option<usize> {
    let first = g.degree(*side.first()?);
    side.iter().all(|&u| g.degree(u) == first).then_some(first)
}

/// Two-colors `g` by BFS parity.
pub fn bipartition(g: &Graph) -> Result<Bipartition, GraphError> {
    g.check_connected()?;
    let (dist, parent) = bfs(g, 0);
    for u in 0..g.order() {
        for &v in g.neighbors(u) {
            if dist[u].unwrap() % 2 == dist[v].unwrap() % 2 {
                return Err(GraphError::NotBipartite {
                    cycle: odd_cycle(&parent, &dist, u, v),
                });
            }
        }
    }
    let eccentricity: Vec<usize> = (0..g.order())
        .map(|u| distance_profile(g, u).expect("connected").eccentricity())
        .collect();
    let (even, odd): (Vec<usize>, Vec<usize>) =
        (0..g.order()).partition(|&u| dist[u].unwrap() % 2 == 0);
    let max_ecc = |side: &[usize]| side.iter().map(|&u| eccentricity[u]).max().unwrap_or(0);

    // `even` holds vertex 0, so it wins the final tie-break
    let key = |side: &[usize]| (max_ecc(side), side.len());
    let (side1, side2) = if key(&odd) > key(&even) {
        (odd, even)
    } else {
        (even, odd)
    };
    let mut side_of = vec![Side::One; g.order()];
    for &v in &side2 {
        side_of[v] = Side::Two;
    }
    Ok(Bipartition {
        d1: max_ecc(&side1),
        d2: max_ecc(&side2),
        delta1: homogeneous_degree(g, &side1),
        delta2: homogeneous_degree(g, &side2),
        side1,
        side2,
        side_of,
        eccentricity,
    })
}

/// Distance-layer sizes summed over all vertices and over each side.
///
/// Totals are exact integers; the averages `k̄_i`, `k̄_{1,i}`, `k̄_{2,i}`
/// are derived from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceAverages {
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    /// `Σ_u k_i(u)` for `i = 0..=D`.
    pub total: Vec<u64>,
    /// `Σ_{u∈V1} k_i(u)` for `i = 0..=D1`.
    pub total1: Vec<u64>,
    /// `Σ_{v∈V2} k_i(v)` for `i = 0..=D2`.
    pub total2: Vec<u64>,
}

fn average(totals: &[u64], i: usize, count: usize) -> f64 {
    totals.get(i).map_or(0.0, |&t| t as f64 / count as f64)
}

impl DistanceAverages {
    /// `k̄_i`.
    pub fn global(&self, i: usize) -> f64 {
        average(&self.total, i, self.n)
    }

    /// `k̄_{1,i}`.
    pub fn side1(&self, i: usize) -> f64 {
        average(&self.total1, i, self.n1)
    }

    /// `k̄_{2,i}`.
    pub fn side2(&self, i: usize) -> f64 {
        average(&self.total2, i, self.n2)
    }

    pub fn side(&self, s: Side, i: usize) -> f64 {
        match s {
            Side::One => self.side1(i),
            Side::Two => self.side2(i),
        }
    }
}

pub fn side_distance_averages(g: &Graph, b: &Bipartition) -> Result<DistanceAverages, GraphError> {
    let accumulate = |vertices: &mut dyn Iterator<Item = usize>| -> Result<Vec<u64>, GraphError> {
        let mut totals: Vec<u64> = Vec::new();
        for u in vertices {
            let profile = distance_profile(g, u)?;
            if totals.len() < profile.shells.len() {
                totals.resize(profile.shells.len(), 0);
            }
            for (i, shell) in profile.shells.iter().enumerate() {
                totals[i] += shell.len() as u64;
            }
        }
        Ok(totals)
    };
    let total1 = accumulate(&mut b.side1.iter().copied())?;
    let total2 = accumulate(&mut b.side2.iter().copied())?;
    let mut total = vec![0; total1.len().max(total2.len())];
    for (i, t) in total.iter_mut().enumerate() {
        *t = total1.get(i).unwrap_or(&0) + total2.get(i).unwrap_or(&0);
    }
    Ok(DistanceAverages {
        n: g.order(),
        n1: b.n1(),
        n2: b.n2(),
        total,
        total1,
        total2,
    })
}
