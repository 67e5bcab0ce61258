//! Current-flow (random-walk) betweenness of edges.
//!
//! For each unordered node pair {s, t}, a unit current is injected at s
//! and extracted at t; the throughput of an edge is the absolute current
//! it carries, obtained by solving the graph Laplacian for potentials.
//! Edge betweenness is the pair-sum of throughputs divided by
//! `(N-1)(N-2)`.
//!
//! The exact mode solves one grounded Laplacian system per node
//! (conjugate gradients, Jacobi-preconditioned, node 0 fixed at zero
//! potential) and then aggregates per edge over all pairs in
//! `O(N log N)` with a sorted prefix sum, instead of iterating the
//! `O(N^2)` pairs per edge. A pair-sampling mode estimates the same
//! quantity from uniformly sampled source/target pairs for graphs where
//! the dense potential table is too large.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::centrality::CentralityError;
use crate::graph::{Graph, NodeId};

/// Current-flow betweenness per edge, indexed by [`Graph::edge_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeBetweennessMap {
    values: Vec<f64>,
}

impl EdgeBetweennessMap {
    pub fn get(&self, g: &Graph, u: NodeId, v: NodeId) -> Option<f64> {
        g.edge_index(u, v).map(|i| self.values[i])
    }

    /// Value at a canonical edge index.
    pub fn at(&self, edge_index: usize) -> f64 {
        self.values[edge_index]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowMode {
    /// All unordered pairs; the default, used by every acceptance check.
    Exact,
    /// Unbiased estimate from uniformly sampled source/target pairs.
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "FlowOptionsSerde", into = "FlowOptionsSerde")]
pub struct FlowOptions {
    pub mode: FlowMode,
    /// Relative residual tolerance for the conjugate-gradient solves.
    pub tolerance: f64,
    pub max_iter: usize,
}

/// Flat key-value shape of [`FlowOptions`] in config files:
/// `mode = "exact" | "sampled"` plus `pairs`/`seed` for the latter.
#[derive(serde::Serialize, serde::Deserialize)]
struct FlowOptionsSerde {
    #[serde(default = "default_mode_name")]
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default = "default_tolerance")]
    tolerance: f64,
    #[serde(default = "default_max_iter")]
    max_iter: usize,
}

fn default_mode_name() -> String {
    "exact".to_string()
}

fn default_tolerance() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    20_000
}

impl TryFrom<FlowOptionsSerde> for FlowOptions {
    type Error = String;

    fn try_from(raw: FlowOptionsSerde) -> Result<Self, Self::Error> {
        let mode = match raw.mode.as_str() {
            "exact" => FlowMode::Exact,
            "sampled" => FlowMode::Sampled {
                pairs: raw.pairs.unwrap_or(10_000),
                seed: raw.seed.unwrap_or(0),
            },
            other => return Err(format!("unknown solver mode: {other}")),
        };
        Ok(FlowOptions {
            mode,
            tolerance: raw.tolerance,
            max_iter: raw.max_iter,
        })
    }
}

impl From<FlowOptions> for FlowOptionsSerde {
    fn from(opts: FlowOptions) -> Self {
        let (mode, pairs, seed) = match opts.mode {
            FlowMode::Exact => ("exact".to_string(), None, None),
            FlowMode::Sampled { pairs, seed } => ("sampled".to_string(), Some(pairs), Some(seed)),
        };
        FlowOptionsSerde {
            mode,
            pairs,
            seed,
            tolerance: opts.tolerance,
            max_iter: opts.max_iter,
        }
    }
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            mode: FlowMode::Exact,
            tolerance: 1e-10,
            max_iter: 20_000,
        }
    }
}

const GROUND: NodeId = 0;

/// Solves the grounded Laplacian system `L~ x = b` by preconditioned
/// conjugate gradients. `b` and the returned `x` have full length n with
/// the ground entry pinned to zero.
fn solve_grounded(
    g: &Graph,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, CentralityError> {
    let n = g.node_count();
    let apply = |x: &[f64], out: &mut [f64]| {
        for v in 0..n {
            if v == GROUND {
                out[v] = 0.0;
                continue;
            }
            let mut acc = g.degree(v) as f64 * x[v];
            for &u in g.neighbors(v) {
                acc -= x[u];
            }
            out[v] = acc;
        }
    };

    let b_norm = b.iter().map(|a| a * a).sum::<f64>().sqrt();
    if b_norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = tol * b_norm;

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    r[GROUND] = 0.0;
    // Jacobi preconditioner: divide by degree.
    let precond = |r: &[f64], z: &mut [f64]| {
        for v in 0..n {
            z[v] = if v == GROUND { 0.0 } else { r[v] / g.degree(v) as f64 };
        }
    };
    let mut z = vec![0.0; n];
    precond(&r, &mut z);
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];

    for _ in 0..max_iter {
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        let alpha = rz / pap;
        for v in 0..n {
            x[v] += alpha * p[v];
            r[v] -= alpha * ap[v];
        }
        let r_norm = r.iter().map(|a| a * a).sum::<f64>().sqrt();
        if r_norm <= target {
            return Ok(x);
        }
        precond(&r, &mut z);
        let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_next / rz;
        rz = rz_next;
        for v in 0..n {
            p[v] = z[v] + beta * p[v];
        }
    }
    let residual = r.iter().map(|a| a * a).sum::<f64>().sqrt() / b_norm;
    Err(CentralityError::Solver {
        residual,
        tolerance: tol,
    })
}

/// Current-flow betweenness of every edge.
pub fn current_flow_edge_betweenness(
    g: &Graph,
    opts: &FlowOptions,
) -> Result<EdgeBetweennessMap, CentralityError> {
    let n = g.node_count();
    if n < 3 {
        return Err(CentralityError::TooSmall(n));
    }
    if !g.is_connected() {
        return Err(CentralityError::Disconnected("current-flow betweenness"));
    }
    match opts.mode {
        FlowMode::Exact => exact(g, opts),
        FlowMode::Sampled { pairs, seed } => sampled(g, opts, pairs, seed),
    }
}

fn exact(g: &Graph, opts: &FlowOptions) -> Result<EdgeBetweennessMap, CentralityError> {
    let n = g.node_count();
    // potentials[w][v] = potential at v for unit injection at w, ground
    // extraction. Column w = ground is identically zero.
    let potentials: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|w| {
            if w == GROUND {
                return Ok(vec![0.0; n]);
            }
            let mut b = vec![0.0; n];
            b[w] = 1.0;
            solve_grounded(g, &b, opts.tolerance, opts.max_iter)
        })
        .collect::<Result<_, _>>()?;

    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let norm = ((n - 1) * (n - 2)) as f64;
    let values: Vec<f64> = edges
        .par_iter()
        .map(|&(u, v)| {
            // For pair {s, t} the edge current is y[s] - y[t] where
            // y[w] = potentials[w][u] - potentials[w][v]; summing
            // |y[s] - y[t]| over unordered pairs reduces to a sorted
            // positional sum.
            let mut y: Vec<f64> = (0..n).map(|w| potentials[w][u] - potentials[w][v]).collect();
            y.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite potentials"));
            let mut total = 0.0;
            for (idx, &val) in y.iter().enumerate() {
                total += (2.0 * idx as f64 - (n as f64 - 1.0)) * val;
            }
            total / norm
        })
        .collect();
    Ok(EdgeBetweennessMap { values })
}

fn sampled(
    g: &Graph,
    opts: &FlowOptions,
    pairs: usize,
    seed: u64,
) -> Result<EdgeBetweennessMap, CentralityError> {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<(NodeId, NodeId)> = (0..pairs.max(1))
        .map(|_| loop {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            if s != t {
                break (s, t);
            }
        })
        .collect();

    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let per_pair: Vec<Vec<f64>> = sample
        .par_iter()
        .map(|&(s, t)| {
            let mut b = vec![0.0; n];
            b[s] += 1.0;
            b[t] -= 1.0;
            let phi = solve_grounded(g, &b, opts.tolerance, opts.max_iter)?;
            Ok(edges.iter().map(|&(u, v)| (phi[u] - phi[v]).abs()).collect())
        })
        .collect::<Result<_, CentralityError>>()?;

    let total_pairs = (n * (n - 1) / 2) as f64;
    let scale = total_pairs / sample.len() as f64 / ((n - 1) * (n - 2)) as f64;
    let mut values = vec![0.0; edges.len()];
    for row in &per_pair {
        for (acc, tau) in values.iter_mut().zip(row) {
            *acc += tau;
        }
    }
    for v in values.iter_mut() {
        *v *= scale;
    }
    Ok(EdgeBetweennessMap { values })
}

/// Writes `u,v,eta` CSV with external labels.
pub fn write_edge_betweenness_csv<W: std::io::Write>(
    g: &Graph,
    eb: &EdgeBetweennessMap,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "u,v,eta")?;
    for (idx, (u, v)) in g.edges().enumerate() {
        writeln!(out, "{},{},{}", g.label(u), g.label(v), eb.values[idx])?;
    }
    Ok(())
}
