//! Undirected simple graphs over contiguous node indices, edge-list ingestion
//! and basic dataset statistics.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};

/// Contiguous node index in `[0, n)`.
pub type NodeId = usize;

/// Compares two node labels: integer labels numerically (and before any
/// non-integer label), everything else lexicographically.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Bijection between original labels and contiguous indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    /// Position of each node when all labels are sorted with [`label_cmp`].
    rank: Vec<usize>,
}

impl LabelMap {
    /// Labels `"0"`, `"1"`, ... for an unlabeled graph.
    pub fn identity(n: usize) -> Self {
        Self::from_labels((0..n).map(|i| i.to_string()).collect()).expect("integer labels are distinct")
    }

    pub fn from_labels(labels: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidParameter {
                    name: "labels",
                    message: format!("duplicate label {l:?}"),
                });
            }
        }
        let mut sorted: Vec<NodeId> = (0..labels.len()).collect();
        sorted.sort_by(|&a, &b| label_cmp(&labels[a], &labels[b]));
        let mut rank = vec![0; labels.len()];
        for (pos, &node) in sorted.iter().enumerate() {
            rank[node] = pos;
        }
        Ok(Self { labels, index, rank })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node]
    }

    pub fn get(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    /// Tie-break key: smaller rank means smaller label.
    pub fn rank(&self, node: NodeId) -> usize {
        self.rank[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn select(&self, nodes: &[NodeId]) -> Self {
        Self::from_labels(nodes.iter().map(|&v| self.labels[v].clone()).collect()).expect("subset of distinct labels")
    }
}

/// Undirected simple graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
    labels: LabelMap,
}

impl Graph {
    /// Builds a graph on `n` nodes labeled by their index. Self-loops and
    /// repeated edges are dropped.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::with_labels(LabelMap::identity(n), edges)
    }

    /// Builds a graph whose node `i` carries `labels.label(i)`.
    pub fn with_labels<I>(labels: LabelMap, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range for {n} nodes");
            if a != b {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        let mut edge_count = 0;
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
            edge_count += nbrs.len();
        }
        Self {
            adjacency,
            edge_count: edge_count / 2,
            labels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbors of `node`.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Every edge once, as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| nbrs.iter().copied().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    pub fn labels(&self) -> &LabelMap {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> &str {
        self.labels.label(node)
    }

    /// Subgraph induced by `nodes` (which must be sorted and distinct). The
    /// second value maps each new index back to its index in `self`.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> (Graph, Vec<NodeId>) {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let mut new_index = vec![usize::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            new_index[v] = i;
        }
        let edges = self
            .edges()
            .filter(|&(a, b)| new_index[a] != usize::MAX && new_index[b] != usize::MAX)
            .map(|(a, b)| (new_index[a], new_index[b]));
        let graph = Graph::with_labels(self.labels.select(nodes), edges);
        (graph, nodes.to_vec())
    }

    /// Connected components, each sorted, ordered by their smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.components().len() == 1
    }

    /// Errors with [`Error::Disconnected`] unless the graph is connected.
    pub fn require_connected(&self) -> Result<()> {
        if self.node_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let components = self.components().len();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(())
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.node_count();
        let mut side = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[v];
                        queue.push_back(w);
                    } else if side[w] == side[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Number of triangles through each node.
    pub fn triangle_counts(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut counts = vec![0usize; n];
        for (i, j) in self.edges() {
            let common = sorted_intersection_count(&self.adjacency[i], &self.adjacency[j]);
            counts[i] += common;
            counts[j] += common;
        }
        // each triangle at i is seen from both of its edges at i
        counts.iter_mut().for_each(|c| *c /= 2);
        counts
    }
}

pub(crate) fn sorted_intersection_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Token separator used by [`load_edge_list`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Separator {
    /// Whitespace and commas both separate tokens.
    #[default]
    Auto,
    Whitespace,
    Comma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeListFormat {
    pub separator: Separator,
    /// Skip the first non-comment line (e.g. a `node_1,node_2` CSV header).
    pub skip_header: bool,
}

/// Normalizations applied while reading an edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct IngestReport {
    pub edge_lines: usize,
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

/// Reads an edge list: one edge per line, two tokens per line, lines starting
/// with `#` or `%` ignored. Self-loops and duplicate edges are dropped and
/// counted. Nodes are indexed in order of first appearance.
pub fn load_edge_list<R: BufRead>(mut reader: R, format: &EdgeListFormat) -> Result<(Graph, IngestReport)> {
    let mut builder = EdgeListBuilder::new(*format);
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = std::str::from_utf8(&buf).map_err(|_| Error::Parse {
            line: line_no,
            message: "invalid UTF-8".into(),
        })?;
        builder.push_line(line_no, line)?;
    }
    builder.finish()
}

/// [`load_edge_list`] over an in-memory buffer.
pub fn parse_edge_list(bytes: &[u8], format: &EdgeListFormat) -> Result<(Graph, IngestReport)> {
    load_edge_list(bytes, format)
}

struct EdgeListBuilder {
    format: EdgeListFormat,
    header_pending: bool,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    seen: HashSet<(NodeId, NodeId)>,
    edges: Vec<(NodeId, NodeId)>,
    report: IngestReport,
}

impl EdgeListBuilder {
    fn new(format: EdgeListFormat) -> Self {
        Self {
            format,
            header_pending: format.skip_header,
            labels: Vec::new(),
            index: HashMap::new(),
            seen: HashSet::new(),
            edges: Vec::new(),
            report: IngestReport::default(),
        }
    }

    fn push_line(&mut self, line_no: usize, line: &str) -> Result<()> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            return Ok(());
        }
        if self.header_pending {
            self.header_pending = false;
            return Ok(());
        }
        let tokens: Vec<&str> = match self.format.separator {
            Separator::Auto => line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .collect(),
            Separator::Whitespace => line.split_whitespace().collect(),
            Separator::Comma => line.split(',').map(str::trim).collect(),
        };
        let [a, b] = tokens.as_slice() else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 tokens, found {}", tokens.len()),
            });
        };
        if a.is_empty() || b.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty node label".into(),
            });
        }
        self.report.edge_lines += 1;
        if a == b {
            self.report.self_loops += 1;
            return Ok(());
        }
        let u = self.intern(a);
        let v = self.intern(b);
        if self.seen.insert((u.min(v), u.max(v))) {
            self.edges.push((u, v));
        } else {
            self.report.duplicate_edges += 1;
        }
        Ok(())
    }

    fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        i
    }

    fn finish(self) -> Result<(Graph, IngestReport)> {
        if self.edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let labels = LabelMap::from_labels(self.labels)?;
        Ok((Graph::with_labels(labels, self.edges), self.report))
    }
}

/// Subgraph induced by the largest connected component, plus the map from new
/// indices to indices in `g`. Ties go to the component holding the smallest
/// index.
pub fn giant_component(g: &Graph) -> (Graph, Vec<NodeId>) {
    let mut best: Option<Vec<NodeId>> = None;
    for comp in g.components() {
        if best.as_ref().is_none_or(|b| comp.len() > b.len()) {
            best = Some(comp);
        }
    }
    g.induced_subgraph(&best.unwrap_or_default())
}

/// Size and degree statistics of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub mean_degree: f64,
    pub mean_sq_degree: f64,
    /// Mean local clustering coefficient, zero for nodes of degree < 2.
    pub clustering: f64,
}

/// Local clustering of every node: triangles through `i` over `k_i (k_i - 1) / 2`.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    g.triangle_counts()
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let k = g.degree(i);
            if k < 2 {
                0.0
            } else {
                t as f64 / (k * (k - 1) / 2) as f64
            }
        })
        .collect()
}

pub fn stats(g: &Graph) -> GraphStats {
    let n = g.node_count();
    let m = g.edge_count();
    if n == 0 {
        return GraphStats {
            n,
            m,
            mean_degree: 0.0,
            mean_sq_degree: 0.0,
            clustering: 0.0,
        };
    }
    let sq: usize = (0..n).map(|i| g.degree(i) * g.degree(i)).sum();
    let clustering = local_clustering(g).iter().sum::<f64>() / n as f64;
    GraphStats {
        n,
        m,
        mean_degree: 2.0 * m as f64 / n as f64,
        mean_sq_degree: sq as f64 / n as f64,
        clustering,
    }
}
