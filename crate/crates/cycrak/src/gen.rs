//! Synthetic network generators: Barabasi-Albert preferential attachment,
//! Watts-Strogatz rewired ring lattices, and Erdos-Renyi random graphs.
//!
//! The BA construction starts from `m` edgeless core nodes; the first
//! arrival wires to all of them and every later arrival attaches to `m`
//! distinct degree-proportional targets, so the edge count is exactly
//! `(n - m) * m`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("barabasi-albert requires 1 <= m < n, got n={n}, m={m}")]
    BadBaParams { n: usize, m: usize },
    #[error("watts-strogatz requires even k < n with k >= 2, got n={n}, k={k}")]
    BadWsParams { n: usize, k: usize },
    #[error("probability must be in [0, 1], got {0}")]
    BadProbability(f64),
}

/// Preferential-attachment graph on `n` nodes with `m` edges per arrival.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    if m < 1 || m >= n {
        return Err(GenError::BadBaParams { n, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity((n - m) * m);
    // One entry per unit of degree; sampling an index uniformly picks a
    // node with probability proportional to its current degree.
    let mut repeated: Vec<NodeId> = Vec::with_capacity(2 * (n - m) * m);

    for core in 0..m {
        edges.push((m, core));
        repeated.push(m);
        repeated.push(core);
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for arrival in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let pick = repeated[rng.gen_range(0..repeated.len())];
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        for &t in &targets {
            edges.push((arrival, t));
            repeated.push(arrival);
            repeated.push(t);
        }
    }
    Ok(Graph::from_edges(n, &edges))
}

/// Ring lattice with `k/2` neighbors per side, each lattice edge rewired
/// with probability `p`. The far endpoint is replaced by a uniform target
/// that is neither the node itself nor a current neighbor, re-drawing on
/// collisions; the edge count stays `n * k / 2`.
pub fn watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if k < 2 || k % 2 != 0 || k >= n {
        return Err(GenError::BadWsParams { n, k });
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(GenError::BadProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present = std::collections::HashSet::with_capacity(n * k / 2);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(n * k / 2);
    let norm = |u: NodeId, v: NodeId| if u < v { (u, v) } else { (v, u) };
    for offset in 1..=(k / 2) {
        for u in 0..n {
            let v = (u + offset) % n;
            edges.push((u, v));
            present.insert(norm(u, v));
        }
    }
    let mut degree = vec![k; n];
    for edge in edges.iter_mut() {
        if rng.gen::<f64>() >= p {
            continue;
        }
        let (u, old_v) = *edge;
        if degree[u] >= n - 1 {
            continue; // no valid target left
        }
        let new_v = loop {
            let t = rng.gen_range(0..n);
            if t != u && !present.contains(&norm(u, t)) {
                break t;
            }
        };
        present.remove(&norm(u, old_v));
        present.insert(norm(u, new_v));
        degree[old_v] -= 1;
        degree[new_v] += 1;
        *edge = (u, new_v);
    }
    Ok(Graph::from_edges(n, &edges))
}

/// Independent edge inclusion with probability `p` for each node pair.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(GenError::BadProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges))
}

/// A generator configuration, as named in experiment configs and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Ba { n: usize, m: usize, seed: u64 },
    Ws { n: usize, k: usize, p: f64, seed: u64 },
    Er { n: usize, p: f64, seed: u64 },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Graph, GenError> {
        match *self {
            GeneratorSpec::Ba { n, m, seed } => barabasi_albert(n, m, seed),
            GeneratorSpec::Ws { n, k, p, seed } => watts_strogatz(n, k, p, seed),
            GeneratorSpec::Er { n, p, seed } => erdos_renyi(n, p, seed),
        }
    }

    /// Stable identifier used in result rows and seed derivation.
    pub fn id_string(&self) -> String {
        match *self {
            GeneratorSpec::Ba { n, m, seed } => format!("ba-n{n}-m{m}-s{seed}"),
            GeneratorSpec::Ws { n, k, p, seed } => format!("ws-n{n}-k{k}-p{p}-s{seed}"),
            GeneratorSpec::Er { n, p, seed } => format!("er-n{n}-p{p}-s{seed}"),
        }
    }
}
