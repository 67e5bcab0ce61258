//! Influencer selection in undirected networks via basic-cycle ranking.
//!
//! The crate ranks the basic (fundamental) cycles of a network by a
//! three-level importance score combining community participation,
//! current-flow edge betweenness, and cycle-participation counts, then
//! selects influencer seed sets from the ranked cycles (the CycRak
//! framework). Four centrality-ranking baselines (TopK, NotCon, IncDis,
//! DecSim), six node centralities, BA/WS/ER generators, and a
//! discrete-time SIR Monte Carlo engine round out the experiment
//! pipeline; [`harness`] orchestrates full runs and writes deterministic
//! CSV/JSON artifacts.
//!
//! ```
//! use cycrak::centrality::{degree_centrality, rank_nodes};
//! use cycrak::graph::Graph;
//! use cycrak::select::{select_benchmark_with_fallback, Framework};
//! use cycrak::sir::sir_influence;
//!
//! let (g, _) = Graph::from_edge_list_text("a b\nb c\nc a\nc d\nd e\ne f\nf d").unwrap();
//! let lcc = g.largest_connected_component().unwrap();
//! let ranking = rank_nodes(&degree_centrality(&lcc));
//! let seeds = select_benchmark_with_fallback(&lcc, Framework::NotCon, &ranking, 2).unwrap();
//! let ensemble = sir_influence(&lcc, &seeds.members, 0.4, 1.0, 100, 7).unwrap();
//! assert!(ensemble.mean >= 2.0 / 6.0);
//! ```

pub mod centrality;
pub mod community;
pub mod cycles;
pub mod flow;
pub mod gen;
pub mod graph;
pub mod harness;
pub mod select;
pub mod sir;

pub use graph::{Graph, GraphError, LoadReport, NodeId};
