//! Undirected simple graph: ingestion, connectivity, distances, and
//! set-level dispersion/similarity metrics.
//!
//! Graphs are immutable after construction. Internal node ids are
//! contiguous `0..n`, assigned in first-seen label order, with the
//! original labels retained for export. Self-loops and parallel edges
//! are rejected at construction (dropped with a count when parsing
//! edge-list text).

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Internal node identifier, contiguous from zero.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: malformed edge record: {reason}")]
    Parse { line: usize, reason: String },
    #[error("edge list contains no edges")]
    EmptyGraph,
    #[error("node id {0} out of range")]
    InvalidNode(NodeId),
    #[error("node pair must be distinct, got ({0}, {0})")]
    SamePair(NodeId),
    #[error("nodes {0} and {1} are not connected")]
    DisconnectedPair(NodeId, NodeId),
    #[error("node set must contain at least {required} nodes, got {got}")]
    SetTooSmall { required: usize, got: usize },
    #[error("node set contains duplicate node {0}")]
    DuplicateNode(NodeId),
}

/// Counts of records dropped while parsing an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
}

/// Immutable undirected simple graph with sorted per-node neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    labels: Vec<String>,
    edge_count: usize,
    /// Prefix sums of per-node upper-neighbor counts: edge `(u, v)` with
    /// `u < v` gets canonical index `edge_offsets[u] + rank of v among
    /// neighbors of u greater than u`.
    edge_offsets: Vec<usize>,
    /// For each node, index into its adjacency list where neighbors
    /// greater than the node itself begin.
    upper_start: Vec<usize>,
}

impl Graph {
    /// Builds a graph from deduplicated internal edges. Self-loops and
    /// duplicates are dropped silently; use [`Graph::from_edge_list_text`]
    /// to get drop counts.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::build(labels, edges).0
    }

    /// Parses line-oriented edge records: two labels per line separated by
    /// whitespace or commas, `#`-prefixed comment lines and blank lines
    /// ignored. Duplicate edges and self-loops are dropped and counted.
    pub fn from_edge_list_text(text: &str) -> Result<(Graph, LoadReport), GraphError> {
        let mut labels: Vec<String> = Vec::new();
        let mut ids: HashMap<String, NodeId> = HashMap::new();
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();

        let intern = |tok: &str, labels: &mut Vec<String>, ids: &mut HashMap<String, NodeId>| {
            if let Some(&id) = ids.get(tok) {
                id
            } else {
                let id = labels.len();
                labels.push(tok.to_string());
                ids.insert(tok.to_string(), id);
                id
            }
        };

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
            let a = toks.next();
            let b = toks.next();
            let extra = toks.next();
            match (a, b, extra) {
                (Some(a), Some(b), None) => {
                    let u = intern(a, &mut labels, &mut ids);
                    let v = intern(b, &mut labels, &mut ids);
                    edges.push((u, v));
                }
                _ => {
                    return Err(GraphError::Parse {
                        line: lineno + 1,
                        reason: format!("expected exactly two tokens, got {:?}", line),
                    })
                }
            }
        }

        let (graph, report) = Self::build(labels, &edges);
        if graph.edge_count == 0 {
            return Err(GraphError::EmptyGraph);
        }
        Ok((graph, report))
    }

    fn build(labels: Vec<String>, edges: &[(NodeId, NodeId)]) -> (Graph, LoadReport) {
        let n = labels.len();
        let mut report = LoadReport::default();
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge endpoint out of range");
            if u == v {
                report.self_loops_dropped += 1;
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut edge_count = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            // Each duplicate undirected edge shows up in two lists.
            report.duplicate_edges_dropped += before - list.len();
            edge_count += list.len();
        }
        report.duplicate_edges_dropped /= 2;
        debug_assert_eq!(edge_count % 2, 0);
        edge_count /= 2;

        let mut edge_offsets = Vec::with_capacity(n + 1);
        let mut upper_start = Vec::with_capacity(n);
        let mut acc = 0;
        for (u, list) in adj.iter().enumerate() {
            edge_offsets.push(acc);
            let start = list.partition_point(|&v| v < u);
            upper_start.push(start);
            acc += list.len() - start;
        }
        edge_offsets.push(acc);
        debug_assert_eq!(acc, edge_count);

        (
            Graph {
                adj,
                labels,
                edge_count,
                edge_offsets,
                upper_start,
            },
            report,
        )
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    /// Internal id for an external label, if present.
    pub fn id_of(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges in canonical order: ascending `u`, then ascending `v`, with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(u, list)| {
            list[self.upper_start[u]..].iter().map(move |&v| (u, v))
        })
    }

    /// Canonical index of edge `{u, v}` in the order produced by [`Graph::edges`].
    pub fn edge_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let pos = self.adj[a].binary_search(&b).ok()?;
        Some(self.edge_offsets[a] + pos - self.upper_start[a])
    }

    /// Unweighted breadth-first distances from `source`; `None` marks
    /// unreachable nodes.
    pub fn shortest_path_lengths(&self, source: NodeId) -> Result<Vec<Option<u32>>, GraphError> {
        if source >= self.node_count() {
            return Err(GraphError::InvalidNode(source));
        }
        Ok(self.bfs(source))
    }

    pub(crate) fn bfs(&self, source: NodeId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count() == 0 {
            return false;
        }
        self.bfs(0).iter().all(|d| d.is_some())
    }

    /// Induced subgraph on the largest connected component, relabeled
    /// contiguously in ascending original-id order. Size ties go to the
    /// component containing the smallest original id.
    pub fn largest_connected_component(&self) -> Result<Graph, GraphError> {
        let n = self.node_count();
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut seen = vec![false; n];
        let mut best: Vec<NodeId> = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            // Components are discovered in order of their smallest member,
            // so strict `>` keeps the earliest one on ties.
            if comp.len() > best.len() {
                best = comp;
            }
        }
        best.sort_unstable();
        let mut remap = vec![usize::MAX; n];
        for (new, &old) in best.iter().enumerate() {
            remap[old] = new;
        }
        let labels = best.iter().map(|&old| self.labels[old].clone()).collect();
        let mut edges = Vec::new();
        for (u, v) in self.edges() {
            if remap[u] != usize::MAX && remap[v] != usize::MAX {
                edges.push((remap[u], remap[v]));
            }
        }
        Ok(Self::build(labels, &edges).0)
    }

    /// Arithmetic means of node degree and squared degree.
    pub fn degree_moments(&self) -> (f64, f64) {
        let n = self.node_count() as f64;
        let mut k = 0.0;
        let mut k2 = 0.0;
        for list in &self.adj {
            let d = list.len() as f64;
            k += d;
            k2 += d * d;
        }
        (k / n, k2 / n)
    }

    fn check_set(&self, set: &[NodeId], required: usize) -> Result<(), GraphError> {
        if set.len() < required {
            return Err(GraphError::SetTooSmall {
                required,
                got: set.len(),
            });
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateNode(pair[0]));
            }
        }
        if let Some(&v) = sorted.last() {
            if v >= self.node_count() {
                return Err(GraphError::InvalidNode(v));
            }
        }
        Ok(())
    }

    /// Mean shortest-path length over unordered pairs of `set`.
    pub fn average_pairwise_distance(&self, set: &[NodeId]) -> Result<f64, GraphError> {
        self.check_set(set, 2)?;
        let mut total = 0u64;
        for (idx, &u) in set.iter().enumerate() {
            let dist = self.bfs(u);
            for &v in &set[idx + 1..] {
                match dist[v] {
                    Some(d) => total += u64::from(d),
                    None => return Err(GraphError::DisconnectedPair(u, v)),
                }
            }
        }
        let pairs = set.len() * (set.len() - 1) / 2;
        Ok(total as f64 / pairs as f64)
    }

    /// Neighbor-set Jaccard overlap; zero when the union is empty.
    pub fn jaccard_similarity(&self, i: NodeId, j: NodeId) -> Result<f64, GraphError> {
        if i >= self.node_count() {
            return Err(GraphError::InvalidNode(i));
        }
        if j >= self.node_count() {
            return Err(GraphError::InvalidNode(j));
        }
        if i == j {
            return Err(GraphError::SamePair(i));
        }
        let (a, b) = (&self.adj[i], &self.adj[j]);
        let mut inter = 0usize;
        let (mut x, mut y) = (0usize, 0usize);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    inter += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        let union = a.len() + b.len() - inter;
        if union == 0 {
            Ok(0.0)
        } else {
            Ok(inter as f64 / union as f64)
        }
    }

    /// Mean Jaccard similarity over unordered pairs of `set`.
    pub fn average_pairwise_similarity(&self, set: &[NodeId]) -> Result<f64, GraphError> {
        self.check_set(set, 2)?;
        let mut total = 0.0;
        for (idx, &u) in set.iter().enumerate() {
            for &v in &set[idx + 1..] {
                total += self.jaccard_similarity(u, v)?;
            }
        }
        let pairs = set.len() * (set.len() - 1) / 2;
        Ok(total / pairs as f64)
    }

    /// Edge-list text with original labels, one edge per line.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }
}
