//! The five influencer-selection frameworks.
//!
//! TopK takes a ranking prefix; NotCon walks the ranking skipping nodes
//! adjacent to the current set; IncDis and DecSim accept a candidate only
//! if it strictly improves the set's average pairwise distance or
//! similarity; CycRak walks the ranked basic cycles and takes the
//! highest-centrality unpicked node of each, under the same
//! non-adjacency constraint.
//!
//! The strict frameworks can run out of candidates before reaching k.
//! NotCon/IncDis/DecSim surface that as a typed error carrying the
//! partial set; CycRak (and [`apply_fallback`], which the harness uses
//! for the others) fills the remainder in two stages: first NotCon over
//! the centrality ranking, then plain top-ranked nodes ignoring
//! adjacency. Every step is logged in the audit trail.

use std::fmt;
use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::centrality::{rank_nodes, CentralityMap, Ranking};
use crate::cycles::CycleBasis;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Framework {
    TopK,
    NotCon,
    IncDis,
    DecSim,
    CycRak,
}

impl Framework {
    pub const ALL: [Framework; 5] = [
        Framework::TopK,
        Framework::NotCon,
        Framework::IncDis,
        Framework::DecSim,
        Framework::CycRak,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Framework::TopK => "TopK",
            Framework::NotCon => "NotCon",
            Framework::IncDis => "IncDis",
            Framework::DecSim => "DecSim",
            Framework::CycRak => "CycRak",
        }
    }
}

impl fmt::Display for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for Framework {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "topk" => Ok(Framework::TopK),
            "notcon" => Ok(Framework::NotCon),
            "incdis" => Ok(Framework::IncDis),
            "decsim" => Ok(Framework::DecSim),
            "cycrak" => Ok(Framework::CycRak),
            other => Err(format!("unknown framework: {other}")),
        }
    }
}

/// Which stage completed the set when the framework's own rule ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FallbackStage {
    /// NotCon walk over the centrality ranking.
    Stage1,
    /// Top-ranked unselected nodes, ignoring adjacency.
    Stage2,
}

/// Where a member (or rejected candidate) came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SelectionSource {
    Framework,
    Fallback1,
    Fallback2,
}

impl SelectionSource {
    pub fn code(self) -> &'static str {
        match self {
            SelectionSource::Framework => "framework",
            SelectionSource::Fallback1 => "fallback1",
            SelectionSource::Fallback2 => "fallback2",
        }
    }
}

/// One candidate decision in the selection walk.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    pub candidate: NodeId,
    pub accepted: bool,
    pub reason: String,
    pub source: SelectionSource,
    /// Running metric after an acceptance: average distance for IncDis,
    /// average similarity for DecSim.
    pub metric: Option<f64>,
}

/// Selected seed set with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluencerSet {
    /// Members in selection order.
    pub members: Vec<NodeId>,
    pub framework: Framework,
    pub fallback_used: Option<FallbackStage>,
    pub audit: Vec<AuditRecord>,
}

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("k must be in 1..={n}, got {k}")]
    KOutOfRange { k: usize, n: usize },
    #[error("{framework} exhausted its candidates with {got} of {k} influencers")]
    Exhausted {
        framework: Framework,
        k: usize,
        got: usize,
        partial: Box<InfluencerSet>,
    },
    #[error("CycRak needs a non-empty cycle ranking")]
    NoCycles,
}

fn check_k(k: usize, n: usize) -> Result<(), SelectionError> {
    if k < 1 || k > n {
        return Err(SelectionError::KOutOfRange { k, n });
    }
    Ok(())
}

fn accept(audit: &mut Vec<AuditRecord>, candidate: NodeId, source: SelectionSource, reason: &str, metric: Option<f64>) {
    audit.push(AuditRecord {
        candidate,
        accepted: true,
        reason: reason.to_string(),
        source,
        metric,
    });
}

fn reject(audit: &mut Vec<AuditRecord>, candidate: NodeId, source: SelectionSource, reason: &str) {
    audit.push(AuditRecord {
        candidate,
        accepted: false,
        reason: reason.to_string(),
        source,
        metric: None,
    });
}

/// First k nodes of the ranking.
pub fn select_topk(r: &Ranking, k: usize) -> Result<InfluencerSet, SelectionError> {
    check_k(k, r.order.len())?;
    let members: Vec<NodeId> = r.order[..k].to_vec();
    let audit = members
        .iter()
        .map(|&v| AuditRecord {
            candidate: v,
            accepted: true,
            reason: "top of ranking".to_string(),
            source: SelectionSource::Framework,
            metric: None,
        })
        .collect();
    Ok(InfluencerSet {
        members,
        framework: Framework::TopK,
        fallback_used: None,
        audit,
    })
}

fn adjacent_to_set(g: &Graph, in_set: &[bool], v: NodeId) -> bool {
    g.neighbors(v).iter().any(|&u| in_set[u])
}

/// Walks the ranking, skipping nodes adjacent to the current set.
pub fn select_notcon(g: &Graph, r: &Ranking, k: usize) -> Result<InfluencerSet, SelectionError> {
    check_k(k, g.node_count())?;
    let mut members = Vec::with_capacity(k);
    let mut in_set = vec![false; g.node_count()];
    let mut audit = Vec::new();
    for &v in &r.order {
        if members.len() == k {
            break;
        }
        if adjacent_to_set(g, &in_set, v) {
            reject(&mut audit, v, SelectionSource::Framework, "adjacent to selected node");
            continue;
        }
        in_set[v] = true;
        members.push(v);
        accept(&mut audit, v, SelectionSource::Framework, "not connected to set", None);
    }
    let set = InfluencerSet {
        members,
        framework: Framework::NotCon,
        fallback_used: None,
        audit,
    };
    if set.members.len() < k {
        let got = set.members.len();
        return Err(SelectionError::Exhausted {
            framework: Framework::NotCon,
            k,
            got,
            partial: Box::new(set),
        });
    }
    Ok(set)
}

/// Pairwise-distance bookkeeping for IncDis: one BFS per accepted member.
struct DistanceState {
    member_dist: Vec<Vec<Option<u32>>>,
    pair_sum: f64,
}

impl DistanceState {
    fn new() -> Self {
        DistanceState {
            member_dist: Vec::new(),
            pair_sum: 0.0,
        }
    }

    /// Sum of distances from `v` to every member; None if any pair is
    /// unreachable.
    fn sum_to(&self, v: NodeId) -> Option<f64> {
        let mut acc = 0.0;
        for dist in &self.member_dist {
            acc += f64::from(dist[v]?);
        }
        Some(acc)
    }

    fn push(&mut self, g: &Graph, v: NodeId, added_sum: f64) {
        self.pair_sum += added_sum;
        self.member_dist.push(g.bfs(v));
    }

    fn average_with(&self, count: usize, extra: f64) -> f64 {
        let pairs = count * (count - 1) / 2;
        (self.pair_sum + extra) / pairs as f64
    }
}

/// Accepts candidates that strictly increase the average pairwise
/// distance; an empty set starts from distance zero, so the first two
/// candidates always pass.
pub fn select_incdis(g: &Graph, r: &Ranking, k: usize) -> Result<InfluencerSet, SelectionError> {
    check_k(k, g.node_count())?;
    let mut members: Vec<NodeId> = Vec::with_capacity(k);
    let mut audit = Vec::new();
    let mut state = DistanceState::new();
    let mut current = 0.0;
    for &v in &r.order {
        if members.len() == k {
            break;
        }
        if members.is_empty() {
            state.push(g, v, 0.0);
            members.push(v);
            accept(&mut audit, v, SelectionSource::Framework, "first member", Some(0.0));
            continue;
        }
        let Some(added) = state.sum_to(v) else {
            reject(&mut audit, v, SelectionSource::Framework, "unreachable from set");
            continue;
        };
        let candidate_avg = state.average_with(members.len() + 1, added);
        if candidate_avg > current {
            state.push(g, v, added);
            members.push(v);
            current = candidate_avg;
            accept(
                &mut audit,
                v,
                SelectionSource::Framework,
                "increases average distance",
                Some(current),
            );
        } else {
            reject(&mut audit, v, SelectionSource::Framework, "does not increase average distance");
        }
    }
    let set = InfluencerSet {
        members,
        framework: Framework::IncDis,
        fallback_used: None,
        audit,
    };
    if set.members.len() < k {
        let got = set.members.len();
        return Err(SelectionError::Exhausted {
            framework: Framework::IncDis,
            k,
            got,
            partial: Box::new(set),
        });
    }
    Ok(set)
}

/// Accepts candidates that strictly decrease the average pairwise Jaccard
/// similarity; a singleton set counts as maximally similar, so the second
/// candidate always passes.
pub fn select_decsim(g: &Graph, r: &Ranking, k: usize) -> Result<InfluencerSet, SelectionError> {
    check_k(k, g.node_count())?;
    let mut members: Vec<NodeId> = Vec::with_capacity(k);
    let mut audit = Vec::new();
    let mut pair_sum = 0.0;
    let mut current = f64::INFINITY;
    for &v in &r.order {
        if members.len() == k {
            break;
        }
        if members.is_empty() {
            members.push(v);
            accept(&mut audit, v, SelectionSource::Framework, "first member", None);
            continue;
        }
        let added: f64 = members
            .iter()
            .map(|&u| g.jaccard_similarity(u, v).expect("distinct valid nodes"))
            .sum();
        let count = members.len() + 1;
        let candidate_avg = (pair_sum + added) / (count * (count - 1) / 2) as f64;
        if candidate_avg < current {
            members.push(v);
            pair_sum += added;
            current = candidate_avg;
            accept(
                &mut audit,
                v,
                SelectionSource::Framework,
                "decreases average similarity",
                Some(current),
            );
        } else {
            reject(&mut audit, v, SelectionSource::Framework, "does not decrease average similarity");
        }
    }
    let set = InfluencerSet {
        members,
        framework: Framework::DecSim,
        fallback_used: None,
        audit,
    };
    if set.members.len() < k {
        let got = set.members.len();
        return Err(SelectionError::Exhausted {
            framework: Framework::DecSim,
            k,
            got,
            partial: Box::new(set),
        });
    }
    Ok(set)
}

/// Tie handling when several cycle nodes share the maximal centrality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieMode {
    /// Lowest internal id wins.
    #[default]
    Deterministic,
    /// Seeded uniform choice among the tied maxima.
    Random,
}

/// Cycle-ranking framework: walk the ranked cycles, take the
/// highest-centrality node not yet selected from each, insist on
/// non-adjacency to the current set, and fall back to the centrality
/// ranking once the cycles run out.
pub fn select_cycrak(
    g: &Graph,
    basis: &CycleBasis,
    cycle_order: &[usize],
    centrality: &CentralityMap,
    k: usize,
    tie_mode: TieMode,
    seed: u64,
) -> Result<InfluencerSet, SelectionError> {
    check_k(k, g.node_count())?;
    if cycle_order.is_empty() {
        return Err(SelectionError::NoCycles);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members: Vec<NodeId> = Vec::with_capacity(k);
    let mut in_set = vec![false; g.node_count()];
    let mut audit = Vec::new();

    for &cycle_idx in cycle_order {
        if members.len() == k {
            break;
        }
        let cycle = &basis.cycles[cycle_idx];
        // b' = cycle minus already-selected nodes.
        let remaining: Vec<NodeId> = cycle.nodes.iter().copied().filter(|&v| !in_set[v]).collect();
        let Some(pick) = argmax_node(&remaining, centrality, tie_mode, &mut rng) else {
            continue; // every node of the cycle is already selected
        };
        if adjacent_to_set(g, &in_set, pick) {
            reject(&mut audit, pick, SelectionSource::Framework, "adjacent to selected node");
            continue;
        }
        in_set[pick] = true;
        members.push(pick);
        accept(
            &mut audit,
            pick,
            SelectionSource::Framework,
            "highest centrality in cycle",
            None,
        );
    }

    let mut set = InfluencerSet {
        members,
        framework: Framework::CycRak,
        fallback_used: None,
        audit,
    };
    if set.members.len() < k {
        set = fill_from_ranking(g, &rank_nodes(centrality), set, k);
    }
    Ok(set)
}

/// Highest-centrality node of a candidate list under the tie rule.
fn argmax_node(
    candidates: &[NodeId],
    centrality: &CentralityMap,
    tie_mode: TieMode,
    rng: &mut ChaCha8Rng,
) -> Option<NodeId> {
    let best = candidates
        .iter()
        .map(|&v| centrality.values[v])
        .fold(f64::NEG_INFINITY, f64::max);
    let mut tied: Vec<NodeId> = candidates
        .iter()
        .copied()
        .filter(|&v| centrality.values[v] == best)
        .collect();
    if tied.is_empty() {
        return None;
    }
    tied.sort_unstable();
    match tie_mode {
        TieMode::Deterministic => Some(tied[0]),
        TieMode::Random => Some(tied[rng.gen_range(0..tied.len())]),
    }
}

/// Two-stage completion of a partial set: a NotCon walk over the ranking,
/// then top-ranked nodes ignoring adjacency.
pub fn apply_fallback(g: &Graph, r: &Ranking, partial: InfluencerSet, k: usize) -> InfluencerSet {
    fill_from_ranking(g, r, partial, k)
}

fn fill_from_ranking(g: &Graph, r: &Ranking, mut set: InfluencerSet, k: usize) -> InfluencerSet {
    if set.members.len() >= k {
        return set;
    }
    let mut in_set = vec![false; g.node_count()];
    for &v in &set.members {
        in_set[v] = true;
    }
    // Stage 1: NotCon over the ranking, excluding current members.
    for &v in &r.order {
        if set.members.len() == k {
            break;
        }
        if in_set[v] {
            continue;
        }
        if adjacent_to_set(g, &in_set, v) {
            reject(&mut set.audit, v, SelectionSource::Fallback1, "adjacent to selected node");
            continue;
        }
        in_set[v] = true;
        set.members.push(v);
        set.fallback_used = Some(FallbackStage::Stage1);
        accept(&mut set.audit, v, SelectionSource::Fallback1, "not connected to set", None);
    }
    // Stage 2: highest-ranked unselected nodes, adjacency ignored.
    for &v in &r.order {
        if set.members.len() == k {
            break;
        }
        if in_set[v] {
            continue;
        }
        in_set[v] = true;
        set.members.push(v);
        set.fallback_used = Some(FallbackStage::Stage2);
        accept(&mut set.audit, v, SelectionSource::Fallback2, "top-ranked remainder", None);
    }
    set
}

/// Runs a benchmark framework (everything except CycRak), returning the
/// typed exhaustion error untouched.
pub fn select_benchmark(
    g: &Graph,
    framework: Framework,
    r: &Ranking,
    k: usize,
) -> Result<InfluencerSet, SelectionError> {
    match framework {
        Framework::TopK => select_topk(r, k),
        Framework::NotCon => select_notcon(g, r, k),
        Framework::IncDis => select_incdis(g, r, k),
        Framework::DecSim => select_decsim(g, r, k),
        Framework::CycRak => panic!("CycRak needs cycle inputs; use select_cycrak"),
    }
}

/// Benchmark selection with the two-stage fallback applied on exhaustion,
/// as the experiment harness runs it.
pub fn select_benchmark_with_fallback(
    g: &Graph,
    framework: Framework,
    r: &Ranking,
    k: usize,
) -> Result<InfluencerSet, SelectionError> {
    match select_benchmark(g, framework, r, k) {
        Ok(set) => Ok(set),
        Err(SelectionError::Exhausted { partial, .. }) => Ok(apply_fallback(g, r, *partial, k)),
        Err(other) => Err(other),
    }
}

/// Writes `rank,node_label,centrality_value,source` CSV.
pub fn write_influencers_csv<W: Write>(
    g: &Graph,
    set: &InfluencerSet,
    centrality: &CentralityMap,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "rank,node_label,centrality_value,source")?;
    let mut source_of = std::collections::HashMap::new();
    for rec in &set.audit {
        if rec.accepted {
            source_of.insert(rec.candidate, rec.source);
        }
    }
    for (idx, &v) in set.members.iter().enumerate() {
        let source = source_of.get(&v).copied().unwrap_or(SelectionSource::Framework);
        writeln!(
            out,
            "{},{},{},{}",
            idx + 1,
            g.label(v),
            centrality.values[v],
            source.code()
        )?;
    }
    Ok(())
}
