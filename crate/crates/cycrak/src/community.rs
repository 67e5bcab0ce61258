//! Louvain community detection and Newman-Girvan modularity.
//!
//! The sweep order of the local-moving phase is a seeded shuffle drawn
//! once per level, so the same seed always yields the same partition.
//! After the multi-level pass a final local-moving polish runs on the
//! original graph, which makes the returned partition a genuine
//! single-node-move local optimum of Q.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;

/// A sweep whose total modularity gain falls below this terminates the phase.
const GAIN_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CommunityError {
    #[error("partition covers {got} nodes but graph has {expected}")]
    IncompleteCover { expected: usize, got: usize },
    #[error("modularity is undefined on a graph with no edges")]
    NoEdges,
}

/// Hard partition of the node set with its cached modularity.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community id per node; ids are contiguous `0..community_count`.
    pub assignment: Vec<usize>,
    /// Modularity of `assignment` on the source graph.
    pub q: f64,
    /// Seed the partition was produced with.
    pub seed: u64,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.assignment.iter().copied().max().map_or(0, |c| c + 1)
    }
}

/// Newman-Girvan modularity: sum over communities of
/// `e_c / m - (d_c / 2m)^2`.
pub fn modularity(g: &Graph, assignment: &[usize]) -> Result<f64, CommunityError> {
    if assignment.len() != g.node_count() {
        return Err(CommunityError::IncompleteCover {
            expected: g.node_count(),
            got: assignment.len(),
        });
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(CommunityError::NoEdges);
    }
    let communities = assignment.iter().copied().max().map_or(0, |c| c + 1);
    let mut intra = vec![0usize; communities];
    let mut degree_sum = vec![0usize; communities];
    for v in 0..g.node_count() {
        degree_sum[assignment[v]] += g.degree(v);
    }
    for (u, v) in g.edges() {
        if assignment[u] == assignment[v] {
            intra[assignment[u]] += 1;
        }
    }
    let m = m as f64;
    let mut q = 0.0;
    for c in 0..communities {
        let frac = intra[c] as f64 / m;
        let dc = degree_sum[c] as f64 / (2.0 * m);
        q += frac - dc * dc;
    }
    Ok(q)
}

/// Working graph for a Louvain level: weighted adjacency plus self-loop
/// weights produced by aggregation.
struct LevelGraph {
    adj: Vec<Vec<(usize, f64)>>,
    self_weight: Vec<f64>,
    /// Weighted degree, counting self-loops twice.
    strength: Vec<f64>,
    total: f64, // 2m
}

impl LevelGraph {
    fn from_graph(g: &Graph) -> LevelGraph {
        let n = g.node_count();
        let mut adj = vec![Vec::new(); n];
        for (u, list) in adj.iter_mut().enumerate() {
            list.extend(g.neighbors(u).iter().map(|&v| (v, 1.0)));
        }
        let strength: Vec<f64> = adj.iter().map(|l| l.len() as f64).collect();
        let total = strength.iter().sum();
        LevelGraph {
            adj,
            self_weight: vec![0.0; n],
            strength,
            total,
        }
    }

    fn node_count(&self) -> usize {
        self.adj.len()
    }
}

/// One local-moving phase; returns (assignment, moved_any). `assignment`
/// ids are not contiguous.
fn local_moving(level: &LevelGraph, init: &[usize], rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = level.node_count();
    let m = level.total / 2.0;
    let mut assignment = init.to_vec();
    let mut community_strength = vec![0.0; n];
    for v in 0..n {
        community_strength[assignment[v]] += level.strength[v];
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    // Scratch: weight from the current node to each community.
    let mut weight_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();

    let mut moved_any = false;
    loop {
        let mut sweep_gain = 0.0;
        for &v in &order {
            let own = assignment[v];
            for &(u, w) in &level.adj[v] {
                let c = assignment[u];
                if weight_to[c] == 0.0 && !touched.contains(&c) {
                    touched.push(c);
                }
                weight_to[c] += w;
            }
            // Gain of placing v (removed from its community) into c, in Q units.
            let k_v = level.strength[v];
            let gain = |c: usize, strength_without_v: f64| -> f64 {
                (weight_to[c] - k_v * strength_without_v / level.total) / m
            };
            let own_without = community_strength[own] - k_v;
            let stay = gain(own, own_without);
            let mut best_c = own;
            let mut best_gain = stay;
            for &c in &touched {
                if c == own {
                    continue;
                }
                let g = gain(c, community_strength[c]);
                if g > best_gain {
                    best_gain = g;
                    best_c = c;
                }
            }
            if best_c != own && best_gain - stay > 0.0 {
                community_strength[own] -= k_v;
                community_strength[best_c] += k_v;
                assignment[v] = best_c;
                sweep_gain += best_gain - stay;
                moved_any = true;
            }
            for &c in &touched {
                weight_to[c] = 0.0;
            }
            touched.clear();
        }
        if sweep_gain <= GAIN_EPS {
            break;
        }
    }
    (assignment, moved_any)
}

/// Collapses communities into supernodes, summing edge weights.
fn aggregate(level: &LevelGraph, assignment: &[usize]) -> (LevelGraph, Vec<usize>) {
    let n = level.node_count();
    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        let c = assignment[v];
        if remap[c] == usize::MAX {
            remap[c] = next;
            next += 1;
        }
    }
    let compact: Vec<usize> = assignment.iter().map(|&c| remap[c]).collect();

    let mut self_weight = vec![0.0; next];
    let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); next];
    for v in 0..n {
        let cv = compact[v];
        self_weight[cv] += level.self_weight[v];
        for &(u, w) in &level.adj[v] {
            let cu = compact[u];
            if cu == cv {
                // Seen from both endpoints; halve to count each edge once.
                self_weight[cv] += w / 2.0;
            } else {
                *maps[cv].entry(cu).or_insert(0.0) += w;
            }
        }
    }
    let adj: Vec<Vec<(usize, f64)>> = maps.into_iter().map(|m| m.into_iter().collect()).collect();
    let strength: Vec<f64> = (0..next)
        .map(|c| adj[c].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_weight[c])
        .collect();
    let total = level.total;
    (
        LevelGraph {
            adj,
            self_weight,
            strength,
            total,
        },
        compact,
    )
}

/// Louvain modularity maximization, deterministic for a given seed.
pub fn louvain(g: &Graph, seed: u64) -> Partition {
    let n = g.node_count();
    if g.edge_count() == 0 {
        // Degenerate input: modularity is undefined, return singletons.
        return Partition {
            assignment: (0..n).collect(),
            q: 0.0,
            seed,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // node_to_super[v] = supernode of v in the current level graph.
    let mut node_to_super: Vec<usize> = (0..n).collect();
    let mut level = LevelGraph::from_graph(g);

    loop {
        let init: Vec<usize> = (0..level.node_count()).collect();
        let (assignment, moved) = local_moving(&level, &init, &mut rng);
        if !moved {
            break;
        }
        let (next_level, compact) = aggregate(&level, &assignment);
        for entry in node_to_super.iter_mut() {
            *entry = compact[*entry];
        }
        let stalled = next_level.node_count() == level.node_count();
        level = next_level;
        if stalled {
            break;
        }
    }

    // Polish: single-node moves on the original graph until none improves.
    let base = LevelGraph::from_graph(g);
    let (polished, _) = local_moving(&base, &node_to_super, &mut rng);

    // Contiguous ids in order of first appearance by node id.
    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    let mut assignment = vec![0; n];
    for v in 0..n {
        let c = polished[v];
        if remap[c] == usize::MAX {
            remap[c] = next;
            next += 1;
        }
        assignment[v] = remap[c];
    }
    let q = modularity(g, &assignment).expect("graph has edges");
    Partition {
        assignment,
        q,
        seed,
    }
}

/// Writes `node_label,community_id` CSV with a header comment carrying Q
/// and the seed.
pub fn write_partition_csv<W: Write>(
    g: &Graph,
    p: &Partition,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "# q={} seed={}", p.q, p.seed)?;
    writeln!(out, "node_label,community_id")?;
    for v in 0..g.node_count() {
        writeln!(out, "{},{}", g.label(v), p.assignment[v])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn modularity_single_edge() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        assert_eq!(modularity(&g, &[0, 0]).unwrap(), 0.0);
        assert_eq!(modularity(&g, &[0, 1]).unwrap(), -0.5);
    }

    #[test]
    fn modularity_all_in_one_is_zero() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]);
        let q = modularity(&g, &[0; 5]).unwrap();
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn modularity_rejects_bad_cover() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(matches!(
            modularity(&g, &[0, 0]),
            Err(CommunityError::IncompleteCover { .. })
        ));
    }

    fn two_cliques() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for u in 0..5 {
                for v in (u + 1)..5 {
                    edges.push((base + u, base + v));
                }
            }
        }
        edges.push((0, 5));
        Graph::from_edges(10, &edges)
    }

    /// Enumerates all set partitions of `n` items as restricted-growth
    /// strings and returns the maximal modularity over them.
    fn best_partition_exhaustive(g: &Graph) -> (f64, Vec<usize>) {
        let n = g.node_count();
        let mut best = (f64::NEG_INFINITY, Vec::new());
        let mut rgs = vec![0usize; n];
        loop {
            let q = modularity(g, &rgs).unwrap();
            if q > best.0 {
                best = (q, rgs.clone());
            }
            // Next restricted-growth string.
            let mut i = n;
            loop {
                if i == 1 {
                    return best;
                }
                i -= 1;
                let cap = rgs[..i].iter().copied().max().unwrap() + 1;
                if rgs[i] < cap {
                    rgs[i] += 1;
                    for slot in rgs.iter_mut().skip(i + 1) {
                        *slot = 0;
                    }
                    break;
                }
                rgs[i] = 0;
            }
        }
    }

    #[test]
    fn louvain_splits_two_cliques() {
        let g = two_cliques();
        let (best_q, best_assignment) = best_partition_exhaustive(&g);
        // The exhaustive optimum is the two cliques.
        assert_eq!(best_assignment, vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);

        let p = louvain(&g, 7);
        assert_eq!(p.assignment, best_assignment);
        assert!((p.q - best_q).abs() < 1e-12);
        assert!((p.q - modularity(&g, &p.assignment).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn louvain_merges_triangle_and_k2() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let p = louvain(&g, 1);
        assert_eq!(p.community_count(), 1);

        let g = Graph::from_edges(2, &[(0, 1)]);
        let p = louvain(&g, 1);
        assert_eq!(p.community_count(), 1);
        assert_eq!(p.q, 0.0);
    }

    #[test]
    fn louvain_is_seed_deterministic() {
        let g = two_cliques();
        let a = louvain(&g, 123);
        let b = louvain(&g, 123);
        assert_eq!(a, b);
    }

    #[test]
    fn louvain_output_is_local_optimum() {
        let g = two_cliques();
        let p = louvain(&g, 5);
        assert_no_improving_move(&g, &p);
    }

    fn assert_no_improving_move(g: &Graph, p: &Partition) {
        let communities = p.community_count();
        for v in 0..g.node_count() {
            let mut assignment = p.assignment.clone();
            for c in 0..communities + 1 {
                if c == p.assignment[v] {
                    continue;
                }
                assignment[v] = c;
                let q = modularity(g, &assignment).unwrap();
                assert!(
                    q <= p.q + 1e-9,
                    "moving node {v} to community {c} improves Q: {q} > {}",
                    p.q
                );
            }
        }
    }

    #[test]
    fn partition_csv_shape() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let p = louvain(&g, 9);
        let mut buf = Vec::new();
        write_partition_csv(&g, &p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# q=0 seed=9\n"));
        assert!(text.contains("node_label,community_id\n"));
    }
}
