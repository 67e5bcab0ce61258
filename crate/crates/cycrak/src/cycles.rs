//! Basic (fundamental) cycles and their three-level importance scores.
//!
//! A spanning tree of a connected graph yields one basic cycle per
//! non-tree edge: the tree path between its endpoints plus the edge
//! itself. The resulting `M - N + 1` cycles form a basis of the cycle
//! space over GF(2). Each cycle is scored on three levels: community
//! articulation (distinct communities among its nodes and among its
//! external neighborhood), mean current-flow betweenness of its edges,
//! and the cycle-participation counts of its nodes; the overall
//! importance is the product of the three.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::community::Partition;
use crate::flow::EdgeBetweennessMap;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Error)]
pub enum CycleError {
    #[error("cycle basis requires a connected graph")]
    Disconnected,
    #[error("graph has no cycles (M - N + 1 = 0)")]
    EmptyBasis,
}

/// Simple cycle given as its node sequence; consecutive nodes are
/// adjacent and the last node closes back to the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicCycle {
    pub nodes: Vec<NodeId>,
}

impl BasicCycle {
    /// Number of nodes, which equals the number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Edges in traversal order, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        let n = self.nodes.len();
        (0..n).map(move |i| (self.nodes[i], self.nodes[(i + 1) % n]))
    }
}

/// How the spanning tree behind a basis is grown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeStrategy {
    /// Breadth-first from the minimum internal id, neighbors in id order.
    #[default]
    BfsMinId,
    /// Breadth-first from a seeded random root with seeded neighbor order.
    SeededRandom,
}

/// Spanning-tree provenance of a basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSpec {
    pub strategy: TreeStrategy,
    pub root: NodeId,
    pub seed: u64,
}

/// Ordered cycle basis with its spanning-tree provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub cycles: Vec<BasicCycle>,
    pub tree_spec: TreeSpec,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// Extracts the fundamental-cycle basis of a connected graph. Every
/// non-tree edge contributes the cycle closed by its tree path, in
/// canonical edge order, so the basis is deterministic for a given
/// strategy and seed.
pub fn basic_cycles(g: &Graph, strategy: TreeStrategy, seed: u64) -> Result<CycleBasis, CycleError> {
    let n = g.node_count();
    if n == 0 || !g.is_connected() {
        return Err(CycleError::Disconnected);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = match strategy {
        TreeStrategy::BfsMinId => 0,
        TreeStrategy::SeededRandom => rng.gen_range(0..n),
    };

    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0u32; n];
    parent[root] = root;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut scratch: Vec<NodeId> = Vec::new();
    while let Some(u) = queue.pop_front() {
        match strategy {
            TreeStrategy::BfsMinId => {
                for &v in g.neighbors(u) {
                    if parent[v] == usize::MAX {
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            TreeStrategy::SeededRandom => {
                scratch.clear();
                scratch.extend_from_slice(g.neighbors(u));
                scratch.shuffle(&mut rng);
                for &v in &scratch {
                    if parent[v] == usize::MAX {
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
    }

    let mut cycles = Vec::with_capacity(g.edge_count() + 1 - n);
    for (u, v) in g.edges() {
        if parent[v] == u || parent[u] == v {
            continue; // tree edge
        }
        cycles.push(close_tree_path(u, v, &parent, &depth));
    }
    debug_assert_eq!(cycles.len(), g.edge_count() + 1 - n);
    Ok(CycleBasis {
        cycles,
        tree_spec: TreeSpec {
            strategy,
            root,
            seed,
        },
    })
}

/// Cycle formed by the tree path from `u` to `v` plus the edge `(v, u)`.
fn close_tree_path(u: NodeId, v: NodeId, parent: &[usize], depth: &[u32]) -> BasicCycle {
    let mut up = vec![u];
    let mut down = vec![v];
    let (mut a, mut b) = (u, v);
    while depth[a] > depth[b] {
        a = parent[a];
        up.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        down.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        up.push(a);
        down.push(b);
    }
    // `up` ends at the meeting point, `down` also contains it; walk back
    // down the v side, skipping the duplicate.
    down.pop();
    up.extend(down.into_iter().rev());
    BasicCycle { nodes: up }
}

/// Number of basis cycles containing each node.
pub fn node_cycle_participation(n: usize, basis: &CycleBasis) -> Vec<usize> {
    let mut counts = vec![0usize; n];
    for cycle in &basis.cycles {
        for &v in &cycle.nodes {
            counts[v] += 1;
        }
    }
    counts
}

/// Importance components of one basic cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleScore {
    /// Community articulation: (distinct communities among the cycle's
    /// nodes / n) x (distinct communities among its external neighbors /
    /// neighbor count); the second factor is zero when the cycle has no
    /// external neighbors.
    pub i_com: f64,
    /// Mean current-flow betweenness over the cycle's edges.
    pub i_pth: f64,
    /// Mean cycle-participation count of the cycle's nodes, divided by
    /// the basis size.
    pub i_lc: f64,
    /// The same mean without the basis-size normalization.
    pub i_lc_raw: f64,
    /// Overall importance: `i_com * i_pth * i_lc`.
    pub i_b: f64,
}

fn score_one(
    g: &Graph,
    cycle: &BasicCycle,
    participation: &[usize],
    basis_size: usize,
    partition: &Partition,
    eb: &EdgeBetweennessMap,
) -> CycleScore {
    let n = cycle.len() as f64;

    let mut communities: Vec<usize> = cycle.nodes.iter().map(|&v| partition.assignment[v]).collect();
    communities.sort_unstable();
    communities.dedup();
    let n_c = communities.len() as f64;

    // External neighborhood: union of neighbor sets minus the cycle itself.
    let mut in_cycle = vec![false; g.node_count()];
    for &v in &cycle.nodes {
        in_cycle[v] = true;
    }
    let mut neighborhood: Vec<NodeId> = cycle
        .nodes
        .iter()
        .flat_map(|&v| g.neighbors(v).iter().copied())
        .filter(|&u| !in_cycle[u])
        .collect();
    neighborhood.sort_unstable();
    neighborhood.dedup();
    let n_cn = neighborhood.len() as f64;
    let neighbor_factor = if neighborhood.is_empty() {
        0.0
    } else {
        let mut comms: Vec<usize> = neighborhood.iter().map(|&v| partition.assignment[v]).collect();
        comms.sort_unstable();
        comms.dedup();
        comms.len() as f64 / n_cn
    };
    let i_com = (n_c / n) * neighbor_factor;

    let eta_sum: f64 = cycle
        .edges()
        .map(|(u, v)| eb.get(g, u, v).expect("cycle edges exist in graph"))
        .sum();
    let i_pth = eta_sum / n;

    let part_sum: f64 = cycle.nodes.iter().map(|&v| participation[v] as f64).sum();
    let i_lc_raw = part_sum / n;
    let i_lc = i_lc_raw / basis_size as f64;

    CycleScore {
        i_com,
        i_pth,
        i_lc,
        i_lc_raw,
        i_b: i_com * i_pth * i_lc,
    }
}

/// Scores a single basis cycle.
pub fn cycle_score(
    g: &Graph,
    basis: &CycleBasis,
    cycle: &BasicCycle,
    partition: &Partition,
    eb: &EdgeBetweennessMap,
) -> CycleScore {
    let participation = node_cycle_participation(g.node_count(), basis);
    score_one(g, cycle, &participation, basis.len(), partition, eb)
}

/// Scores every cycle of the basis, sharing the participation counts.
pub fn score_all_cycles(
    g: &Graph,
    basis: &CycleBasis,
    partition: &Partition,
    eb: &EdgeBetweennessMap,
) -> Vec<CycleScore> {
    let participation = node_cycle_participation(g.node_count(), basis);
    basis
        .cycles
        .par_iter()
        .map(|cycle| score_one(g, cycle, &participation, basis.len(), partition, eb))
        .collect()
}

/// Basis indices sorted by descending importance. Ties go to the shorter
/// cycle, then to the lexicographically smallest sorted node sequence.
pub fn rank_cycles(basis: &CycleBasis, scores: &[CycleScore]) -> Vec<usize> {
    assert_eq!(basis.len(), scores.len(), "one score per basis cycle");
    let sorted_nodes: Vec<Vec<NodeId>> = basis
        .cycles
        .iter()
        .map(|c| {
            let mut nodes = c.nodes.clone();
            nodes.sort_unstable();
            nodes
        })
        .collect();
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .i_b
            .partial_cmp(&scores[a].i_b)
            .expect("finite scores")
            .then(basis.cycles[a].len().cmp(&basis.cycles[b].len()))
            .then_with(|| sorted_nodes[a].cmp(&sorted_nodes[b]))
    });
    order
}

/// One `(length, importance)` record per cycle, in basis order.
pub fn length_importance_profile(basis: &CycleBasis, scores: &[CycleScore]) -> Vec<(usize, f64)> {
    basis
        .cycles
        .iter()
        .zip(scores)
        .map(|(c, s)| (c.len(), s.i_b))
        .collect()
}

/// Writes one line per cycle: comma-separated node labels.
pub fn write_basis<W: Write>(g: &Graph, basis: &CycleBasis, mut out: W) -> std::io::Result<()> {
    for cycle in &basis.cycles {
        let labels: Vec<&str> = cycle.nodes.iter().map(|&v| g.label(v)).collect();
        writeln!(out, "{}", labels.join(","))?;
    }
    Ok(())
}

/// Writes `cycle_index,length,i_com,i_pth,i_lc,i_lc_raw,i_b` rows in the
/// given order (basis order or rank order).
pub fn write_scores_csv<W: Write>(
    basis: &CycleBasis,
    scores: &[CycleScore],
    order: &[usize],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "cycle_index,length,i_com,i_pth,i_lc,i_lc_raw,i_b")?;
    for &idx in order {
        let s = &scores[idx];
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            idx,
            basis.cycles[idx].len(),
            s.i_com,
            s.i_pth,
            s.i_lc,
            s.i_lc_raw,
            s.i_b
        )?;
    }
    Ok(())
}
