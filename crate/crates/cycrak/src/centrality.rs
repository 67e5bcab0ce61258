//! The six node centralities and deterministic ranking.
//!
//! Ranking order is the node sequence sorted by descending score with
//! ties broken by ascending internal id, so every measure yields one
//! reproducible sequence.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Error)]
pub enum CentralityError {
    #[error("{0} requires a connected graph")]
    Disconnected(&'static str),
    #[error("power iteration did not converge within {max_iter} iterations")]
    NonConvergence { max_iter: usize },
    #[error("collective influence radius must be at least 1")]
    BadRadius,
    #[error("linear solver stalled: residual {residual:e} above tolerance {tolerance:e}")]
    Solver { residual: f64, tolerance: f64 },
    #[error("current-flow betweenness needs at least 3 nodes, got {0}")]
    TooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralityKind {
    #[serde(alias = "degree")]
    Dc,
    #[serde(alias = "h-index")]
    Hc,
    #[serde(alias = "semi-local")]
    Lc,
    #[serde(alias = "collective-influence")]
    Ci,
    #[serde(alias = "eigenvector")]
    Ec,
    #[serde(alias = "closeness")]
    Cc,
}

impl CentralityKind {
    pub const ALL: [CentralityKind; 6] = [
        CentralityKind::Dc,
        CentralityKind::Hc,
        CentralityKind::Lc,
        CentralityKind::Ci,
        CentralityKind::Ec,
        CentralityKind::Cc,
    ];

    pub fn code(self) -> &'static str {
        match self {
            CentralityKind::Dc => "DC",
            CentralityKind::Hc => "HC",
            CentralityKind::Lc => "LC",
            CentralityKind::Ci => "CI",
            CentralityKind::Ec => "EC",
            CentralityKind::Cc => "CC",
        }
    }
}

impl fmt::Display for CentralityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for CentralityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dc" | "degree" => Ok(CentralityKind::Dc),
            "hc" | "h-index" | "hindex" => Ok(CentralityKind::Hc),
            "lc" | "semi-local" | "semilocal" => Ok(CentralityKind::Lc),
            "ci" | "collective-influence" => Ok(CentralityKind::Ci),
            "ec" | "eigenvector" => Ok(CentralityKind::Ec),
            "cc" | "closeness" => Ok(CentralityKind::Cc),
            other => Err(format!("unknown centrality kind: {other}")),
        }
    }
}

/// Per-node scores for one centrality measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityMap {
    pub kind: CentralityKind,
    pub values: Vec<f64>,
    /// Kind-specific parameter: the radius `l` for collective influence.
    pub radius: Option<usize>,
}

/// Node sequence in descending score order, ties broken by ascending id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub order: Vec<NodeId>,
}

impl Ranking {
    pub const TIE_RULE: &'static str = "descending score, ties ascending internal id";
}

/// Degree of each node.
pub fn degree_centrality(g: &Graph) -> CentralityMap {
    CentralityMap {
        kind: CentralityKind::Dc,
        values: (0..g.node_count()).map(|v| g.degree(v) as f64).collect(),
        radius: None,
    }
}

/// H-index of the neighbor-degree multiset: the largest `h` such that at
/// least `h` neighbors have degree at least `h`.
pub fn h_index_centrality(g: &Graph) -> CentralityMap {
    let values = (0..g.node_count())
        .map(|v| {
            let mut degrees: Vec<usize> = g.neighbors(v).iter().map(|&u| g.degree(u)).collect();
            degrees.sort_unstable_by(|a, b| b.cmp(a));
            let mut h = 0;
            for (idx, &d) in degrees.iter().enumerate() {
                if d > idx {
                    h = idx + 1;
                } else {
                    break;
                }
            }
            h as f64
        })
        .collect();
    CentralityMap {
        kind: CentralityKind::Hc,
        values,
        radius: None,
    }
}

/// Semi-local centrality: with `N(u)` the number of distinct nodes within
/// distance two of `u` (excluding `u`), score each node as the sum of
/// `N(u)` over its neighbors' neighbors.
pub fn semi_local_centrality(g: &Graph) -> CentralityMap {
    let n = g.node_count();
    let two_ball: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut seen = vec![false; n];
            seen[u] = true;
            let mut count = 0u64;
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                }
            }
            for &v in g.neighbors(u) {
                for &w in g.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                    }
                }
            }
            count as f64
        })
        .collect();
    let inner: Vec<f64> = (0..n)
        .map(|j| g.neighbors(j).iter().map(|&u| two_ball[u]).sum())
        .collect();
    let values = (0..n)
        .map(|i| g.neighbors(i).iter().map(|&j| inner[j]).sum())
        .collect();
    CentralityMap {
        kind: CentralityKind::Lc,
        values,
        radius: None,
    }
}

/// Collective influence at radius `l`: `(k_i - 1)` times the sum of
/// `(k_j - 1)` over nodes at exact breadth-first distance `l`.
pub fn collective_influence(g: &Graph, l: usize) -> Result<CentralityMap, CentralityError> {
    if l < 1 {
        return Err(CentralityError::BadRadius);
    }
    let n = g.node_count();
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let ki = g.degree(i);
            if ki <= 1 {
                return 0.0;
            }
            // Bounded BFS out to depth l.
            let mut dist = vec![u32::MAX; n];
            dist[i] = 0;
            let mut frontier = vec![i];
            let mut ring_sum = 0.0;
            for depth in 1..=l as u32 {
                let mut next = Vec::new();
                for &u in &frontier {
                    for &v in g.neighbors(u) {
                        if dist[v] == u32::MAX {
                            dist[v] = depth;
                            next.push(v);
                            if depth == l as u32 {
                                ring_sum += (g.degree(v) as f64) - 1.0;
                            }
                        }
                    }
                }
                frontier = next;
                if frontier.is_empty() {
                    break;
                }
            }
            (ki as f64 - 1.0) * ring_sum
        })
        .collect();
    Ok(CentralityMap {
        kind: CentralityKind::Ci,
        values,
        radius: Some(l),
    })
}

/// Principal eigenvector of the adjacency matrix, entries non-negative and
/// normalized to unit Euclidean length. Power iteration runs on `A + I`
/// so it also converges on bipartite graphs, where the raw spectrum is
/// symmetric; the fixed point is the same eigenvector.
pub fn eigenvector_centrality(
    g: &Graph,
    tol: f64,
    max_iter: usize,
) -> Result<CentralityMap, CentralityError> {
    if !g.is_connected() {
        return Err(CentralityError::Disconnected("eigenvector centrality"));
    }
    let n = g.node_count();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    for _ in 0..max_iter {
        for v in 0..n {
            let mut acc = x[v];
            for &u in g.neighbors(v) {
                acc += x[u];
            }
            y[v] = acc;
        }
        let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in y.iter_mut() {
            *a /= norm;
        }
        let diff = x
            .iter()
            .zip(y.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut y);
        if diff < tol {
            return Ok(CentralityMap {
                kind: CentralityKind::Ec,
                values: x,
                radius: None,
            });
        }
    }
    Err(CentralityError::NonConvergence { max_iter })
}

pub const EIGENVECTOR_TOL: f64 = 1e-10;
pub const EIGENVECTOR_MAX_ITER: usize = 100_000;

/// Harmonic closeness: mean of inverse distances to every other node.
pub fn closeness_centrality(g: &Graph) -> Result<CentralityMap, CentralityError> {
    if !g.is_connected() {
        return Err(CentralityError::Disconnected("closeness centrality"));
    }
    let n = g.node_count();
    if n == 1 {
        return Ok(CentralityMap {
            kind: CentralityKind::Cc,
            values: vec![0.0],
            radius: None,
        });
    }
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let dist = g.bfs(i);
            let sum: f64 = dist
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, d)| 1.0 / f64::from(d.expect("connected")))
                .sum();
            sum / (n as f64 - 1.0)
        })
        .collect();
    Ok(CentralityMap {
        kind: CentralityKind::Cc,
        values,
        radius: None,
    })
}

/// Dispatch helper used by the harness and CLI.
pub fn compute_centrality(
    g: &Graph,
    kind: CentralityKind,
    ci_radius: usize,
) -> Result<CentralityMap, CentralityError> {
    match kind {
        CentralityKind::Dc => Ok(degree_centrality(g)),
        CentralityKind::Hc => Ok(h_index_centrality(g)),
        CentralityKind::Lc => Ok(semi_local_centrality(g)),
        CentralityKind::Ci => collective_influence(g, ci_radius),
        CentralityKind::Ec => eigenvector_centrality(g, EIGENVECTOR_TOL, EIGENVECTOR_MAX_ITER),
        CentralityKind::Cc => closeness_centrality(g),
    }
}

/// Sorts nodes by descending score, ties broken by ascending internal id.
pub fn rank_nodes(c: &CentralityMap) -> Ranking {
    let mut order: Vec<NodeId> = (0..c.values.len()).collect();
    order.sort_by(|&a, &b| {
        c.values[b]
            .partial_cmp(&c.values[a])
            .expect("centrality scores are finite")
            .then(a.cmp(&b))
    });
    Ranking { order }
}

/// Writes `node_label,score` CSV.
pub fn write_centrality_csv<W: Write>(
    g: &Graph,
    c: &CentralityMap,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "node_label,score")?;
    for v in 0..g.node_count() {
        writeln!(out, "{},{}", g.label(v), c.values[v])?;
    }
    Ok(())
}
