//! Discrete-time SIR Monte Carlo simulation.
//!
//! Synchronous updating: in every step each currently infectious node
//! first draws an independent infection attempt against each neighbor
//! that was susceptible at the start of the step, then draws its own
//! recovery. Nodes infected during a step become infectious in the next
//! one. The dynamics stop when no infectious node remains.
//!
//! Randomness comes from a counter-based stream cipher generator:
//! realization `i` of an ensemble runs on stream `i` of the same key, so
//! ensembles are reproducible independent of scheduling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Error)]
pub enum SirError {
    #[error("infection probability must be in [0, 1], got {0}")]
    BadGamma(f64),
    #[error("recovery probability must be in (0, 1], got {0}")]
    BadMu(f64),
    #[error("seed set is empty")]
    EmptySeeds,
    #[error("seed node {0} out of range")]
    InvalidSeed(NodeId),
    #[error("epidemic threshold degenerate: <k^2> = {k2} <= <k> = {k}")]
    DegenerateThreshold { k: f64, k2: f64 },
}

/// Transmission/recovery probabilities plus the rng key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirParams {
    /// Per-edge per-step infection probability.
    pub gamma: f64,
    /// Per-step recovery probability.
    pub mu: f64,
    pub seed: u64,
}

impl SirParams {
    pub fn validate(&self) -> Result<(), SirError> {
        if !(0.0..=1.0).contains(&self.gamma) || self.gamma.is_nan() {
            return Err(SirError::BadGamma(self.gamma));
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(SirError::BadMu(self.mu));
        }
        Ok(())
    }
}

/// Result of one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirOutcome {
    /// Number of recovered nodes at termination.
    pub recovered: usize,
    /// Number of synchronous update rounds executed.
    pub steps: usize,
    /// Recovered fraction `N_R / N`.
    pub fraction: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Susceptible,
    Infected,
    Recovered,
}

fn check_seeds(g: &Graph, seeds: &[NodeId]) -> Result<(), SirError> {
    if seeds.is_empty() {
        return Err(SirError::EmptySeeds);
    }
    if let Some(&bad) = seeds.iter().find(|&&v| v >= g.node_count()) {
        return Err(SirError::InvalidSeed(bad));
    }
    Ok(())
}

/// One realization on stream 0 of the given seed.
pub fn sir_run(g: &Graph, seeds: &[NodeId], params: &SirParams) -> Result<SirOutcome, SirError> {
    params.validate()?;
    check_seeds(g, seeds)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(0);
    Ok(run_with_rng(g, seeds, params.gamma, params.mu, &mut rng))
}

fn run_with_rng(g: &Graph, seeds: &[NodeId], gamma: f64, mu: f64, rng: &mut ChaCha8Rng) -> SirOutcome {
    let n = g.node_count();
    let mut state = vec![State::Susceptible; n];
    let mut infected: Vec<NodeId> = seeds.to_vec();
    infected.sort_unstable();
    infected.dedup();
    for &v in &infected {
        state[v] = State::Infected;
    }
    let mut recovered_count = 0usize;
    let mut steps = 0usize;
    let mut hit = vec![false; n];

    while !infected.is_empty() {
        steps += 1;
        let mut newly_infected: Vec<NodeId> = Vec::new();
        let mut still_infected: Vec<NodeId> = Vec::new();
        for &v in &infected {
            for &u in g.neighbors(v) {
                // Condition on the state at step start: nodes marked this
                // step keep drawing attempts from other attackers.
                if state[u] == State::Susceptible && rng.gen::<f64>() < gamma && !hit[u] {
                    hit[u] = true;
                    newly_infected.push(u);
                }
            }
            if rng.gen::<f64>() < mu {
                state[v] = State::Recovered;
                recovered_count += 1;
            } else {
                still_infected.push(v);
            }
        }
        newly_infected.sort_unstable();
        for &u in &newly_infected {
            state[u] = State::Infected;
            hit[u] = false;
        }
        still_infected.extend(newly_infected);
        still_infected.sort_unstable();
        infected = still_infected;

        debug_assert_eq!(
            state.iter().filter(|&&s| s == State::Recovered).count(),
            recovered_count
        );
    }

    SirOutcome {
        recovered: recovered_count,
        steps,
        fraction: recovered_count as f64 / n as f64,
    }
}

/// Ensemble statistics over independent realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct SirSummary {
    pub mean: f64,
    /// Sample standard deviation of the recovered fraction.
    pub std: f64,
    pub runs: Vec<SirOutcome>,
}

/// Independent realizations on per-run rng streams of the same seed.
/// Run `i` equals [`sir_run`]'s output when `i = 0`.
pub fn sir_influence(
    g: &Graph,
    seeds: &[NodeId],
    gamma: f64,
    mu: f64,
    realizations: usize,
    seed: u64,
) -> Result<SirSummary, SirError> {
    let params = SirParams { gamma, mu, seed };
    params.validate()?;
    check_seeds(g, seeds)?;
    let runs: Vec<SirOutcome> = (0..realizations.max(1) as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            run_with_rng(g, seeds, gamma, mu, &mut rng)
        })
        .collect();
    let mean = runs.iter().map(|r| r.fraction).sum::<f64>() / runs.len() as f64;
    let std = if runs.len() < 2 {
        0.0
    } else {
        let var = runs
            .iter()
            .map(|r| (r.fraction - mean).powi(2))
            .sum::<f64>()
            / (runs.len() - 1) as f64;
        var.sqrt()
    };
    Ok(SirSummary { mean, std, runs })
}

/// Heterogeneous-mean-field propagation threshold `<k> / (<k^2> - <k>)`.
pub fn epidemic_threshold(g: &Graph) -> Result<f64, SirError> {
    let (k, k2) = g.degree_moments();
    if k2 <= k {
        return Err(SirError::DegenerateThreshold { k, k2 });
    }
    Ok(k / (k2 - k))
}

/// Writes per-run `run_index,F,steps` CSV.
pub fn write_runs_csv<W: std::io::Write>(summary: &SirSummary, mut out: W) -> std::io::Result<()> {
    writeln!(out, "run_index,F,steps")?;
    for (idx, run) in summary.runs.iter().enumerate() {
        writeln!(out, "{},{},{}", idx, run.fraction, run.steps)?;
    }
    Ok(())
}

/// Writes the one-line `gamma,mu,k,mean_F,std_F,n_runs` summary CSV.
pub fn write_summary_csv<W: std::io::Write>(
    gamma: f64,
    mu: f64,
    k: usize,
    summary: &SirSummary,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "gamma,mu,k,mean_F,std_F,n_runs")?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        gamma,
        mu,
        k,
        summary.mean,
        summary.std,
        summary.runs.len()
    )?;
    Ok(())
}
