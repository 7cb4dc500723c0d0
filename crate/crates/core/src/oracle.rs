//! Combinatorial ground truth: intersection numbers counted straight from
//! BFS layers, with no spectral input.

use serde::{Deserialize, Serialize};

use crate::graphs::{bipartition, distance_profile, Graph, GraphError, Side};
use crate::spectra::PerronWeights;

/// Absolute tolerance for deciding that α-weighted numbers are constant on
/// a layer.
pub const PSEUDO_TOL: f64 = 1e-9;

/// `c_i`, `a_i`, `b_i` at one distance level. `c_0` and `b_ecc` are absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub c: Option<usize>,
    pub a: usize,
    pub b: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArray {
    pub levels: Vec<Level>,
    pub side: Option<Side>,
}

impl IntersectionArray {
    /// The usual `{b_0, …, b_{D-1}; c_1, …, c_D}` listing.
    pub fn bc(&self) -> (Vec<usize>, Vec<usize>) {
        let b = self.levels.iter().filter_map(|l| l.b).collect();
        let c = self.levels.iter().filter_map(|l| l.c).collect();
        (b, c)
    }

    fn same_levels(&self, other: &IntersectionArray) -> bool {
        self.levels == other.levels
    }
}

/// Neighbor counts of one vertex `v ∈ Γ_i(u)` toward layers `i-1`, `i`, `i+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexCounts {
    pub vertex: usize,
    pub level: usize,
    pub c: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalIntersection {
    pub source: usize,
    pub rows: Vec<VertexCounts>,
    /// Present exactly when the counts depend only on the level.
    pub array: Option<IntersectionArray>,
}

impl LocalIntersection {
    pub fn is_constant(&self) -> bool {
        self.array.is_some()
    }
}

pub fn intersection_numbers_around(g: &Graph, u: usize) -> Result<LocalIntersection, GraphError> {
    let profile = distance_profile(g, u)?;
    let ecc = profile.eccentricity();
    let mut rows = Vec::with_capacity(g.order());
    let mut levels: Vec<Option<Level>> = vec![None; ecc + 1];
    let mut constant = true;
    for (i, shell) in profile.shells.iter().enumerate() {
        for &v in shell {
            let (mut c, mut a, mut b) = (0, 0, 0);
            for &w in g.neighbors(v) {
                match profile.dist[w] {
                    d if d + 1 == i => c += 1,
                    d if d == i => a += 1,
                    _ => b += 1,
                }
            }
            rows.push(VertexCounts {
                vertex: v,
                level: i,
                c,
                a,
                b,
            });
            let level = Level {
                c: (i > 0).then_some(c),
                a,
                b: (i < ecc).then_some(b),
            };
            match levels[i] {
                None => levels[i] = Some(level),
                Some(seen) if seen != level => constant = false,
                Some(_) => {}
            }
        }
    }
    let array = constant.then(|| IntersectionArray {
        levels: levels.into_iter().map(Option::unwrap).collect(),
        side: None,
    });
    Ok(LocalIntersection {
        source: u,
        rows,
        array,
    })
}

/// α-weighted counts of one vertex `v ∈ Γ_i(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoRow {
    pub vertex: usize,
    pub level: usize,
    pub c: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoNumbers {
    pub source: usize,
    pub rows: Vec<PseudoRow>,
    /// `(c*_i, a*_i, b*_i)` per level when constant within [`PSEUDO_TOL`].
    pub levels: Option<Vec<(f64, f64, f64)>>,
}

impl PseudoNumbers {
    /// Pseudo-distance-regularity around the source.
    pub fn is_constant(&self) -> bool {
        self.levels.is_some()
    }
}

/// `c*_i(v) = (1/α_v) Σ_{w ∈ Γ_{i-1}(u) ∩ Γ(v)} α_w`, and likewise `a*_i`,
/// `b*_i` over layers `i` and `i+1`.
pub fn pseudo_intersection_numbers(
    g: &Graph,
    u: usize,
    alpha: &PerronWeights,
) -> Result<PseudoNumbers, GraphError> {
    let profile = distance_profile(g, u)?;
    let mut rows = Vec::with_capacity(g.order());
    let mut levels = Vec::with_capacity(profile.shells.len());
    let mut constant = true;
    for (i, shell) in profile.shells.iter().enumerate() {
        let mut first: Option<(f64, f64, f64)> = None;
        for &v in shell {
            let (mut c, mut a, mut b) = (0.0, 0.0, 0.0);
            for &w in g.neighbors(v) {
                let aw = alpha.get(w);
                match profile.dist[w] {
                    d if d + 1 == i => c += aw,
                    d if d == i => a += aw,
                    _ => b += aw,
                }
            }
            let av = alpha.get(v);
            let row = (c / av, a / av, b / av);
            rows.push(PseudoRow {
                vertex: v,
                level: i,
                c: row.0,
                a: row.1,
                b: row.2,
            });
            match first {
                None => first = Some(row),
                Some(f) => {
                    let close = (f.0 - row.0).abs() <= PSEUDO_TOL
                        && (f.1 - row.1).abs() <= PSEUDO_TOL
                        && (f.2 - row.2).abs() <= PSEUDO_TOL;
                    constant &= close;
                }
            }
        }
        levels.push(first.expect("BFS layers are nonempty"));
    }
    Ok(PseudoNumbers {
        source: u,
        rows,
        levels: constant.then_some(levels),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceRegularity {
    pub distance_regular: bool,
    pub array: Option<IntersectionArray>,
}

pub fn is_distance_regular(g: &Graph) -> Result<DistanceRegularity, GraphError> {
    g.check_connected()?;
    let mut common: Option<IntersectionArray> = None;
    for u in 0..g.order() {
        let local = intersection_numbers_around(g, u)?;
        let Some(array) = local.array else {
            return Ok(DistanceRegularity {
                distance_regular: false,
                array: None,
            });
        };
        match &common {
            None => common = Some(array),
            Some(c) if !c.same_levels(&array) => {
                return Ok(DistanceRegularity {
                    distance_regular: false,
                    array: None,
                })
            }
            Some(_) => {}
        }
    }
    Ok(DistanceRegularity {
        distance_regular: true,
        array: common,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biregularity {
    pub distance_biregular: bool,
    /// Arrays for the sides `V1` and `V2` of [`bipartition`], on success.
    pub arrays: Option<(IntersectionArray, IntersectionArray)>,
}

impl Biregularity {
    fn no() -> Biregularity {
        Biregularity {
            distance_biregular: false,
            arrays: None,
        }
    }
}

/// Decides distance-biregularity by direct counting. Non-bipartite graphs
/// are simply not distance-biregular.
pub fn is_distance_biregular(g: &Graph) -> Result<Biregularity, GraphError> {
    let b = match bipartition(g) {
        Ok(b) => b,
        Err(GraphError::NotBipartite { .. }) => return Ok(Biregularity::no()),
        Err(e) => return Err(e),
    };
    let mut side_arrays = Vec::with_capacity(2);
    for side in [Side::One, Side::Two] {
        let mut common: Option<IntersectionArray> = None;
        for &u in b.side(side) {
            let Some(array) = intersection_numbers_around(g, u)?.array else {
                return Ok(Biregularity::no());
            };
            match &common {
                None => common = Some(array),
                Some(c) if !c.same_levels(&array) => return Ok(Biregularity::no()),
                Some(_) => {}
            }
        }
        let mut array = common.expect("both sides of a connected bipartite graph are nonempty");
        array.side = Some(side);
        side_arrays.push(array);
    }
    let second = side_arrays.pop().unwrap();
    let first = side_arrays.pop().unwrap();
    Ok(Biregularity {
        distance_biregular: true,
        arrays: Some((first, second)),
    })
}
