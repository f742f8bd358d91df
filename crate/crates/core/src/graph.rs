//! Signed graph model, ingestion from raw sentiments, and components.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Dense vertex index, `0..n`.
pub type VertexId = usize;
/// Index into [`SignedGraph::edges`].
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn from_value(value: i64) -> Option<Sign> {
        match value.cmp(&0) {
            Ordering::Greater => Some(Sign::Positive),
            Ordering::Less => Some(Sign::Negative),
            Ordering::Equal => None,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// An undirected signed edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub sign: Sign,
}

impl SignedEdge {
    pub fn new(a: VertexId, b: VertexId, sign: Sign) -> Self {
        SignedEdge {
            u: a.min(b),
            v: a.max(b),
            sign,
        }
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Orders labels numerically when both parse as integers, textually
/// otherwise. Numeric labels sort before non-numeric ones.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Bidirectional map between dense vertex ids and source labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMap {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
}

impl LabelMap {
    pub fn from_labels(labels: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (id, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), id).is_some() {
                return Err(Error::LabelCollision(label.clone()));
            }
        }
        Ok(LabelMap { labels, index })
    }

    /// Labels `"0"`, `"1"`, ... for graphs built directly from ids.
    pub fn numeric(n: usize) -> Self {
        Self::from_labels((0..n).map(|i| i.to_string()).collect())
            .expect("numeric labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: VertexId) -> &str {
        &self.labels[id]
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Simple undirected graph with ±1 edge signs.
///
/// Edges are stored with `u < v` and sorted by `(u, v)`; an edge's index is
/// its identity everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    edges: Vec<SignedEdge>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    labels: LabelMap,
}

impl SignedGraph {
    pub fn new(labels: LabelMap, edges: impl IntoIterator<Item = SignedEdge>) -> Result<Self> {
        let n = labels.len();
        let mut edges: Vec<SignedEdge> = edges
            .into_iter()
            .map(|e| SignedEdge::new(e.u, e.v, e.sign))
            .collect();
        for e in &edges {
            if e.v >= n {
                return Err(Error::Config(format!(
                    "edge ({}, {}) references a vertex outside 0..{n}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::Config(format!("self-loop at vertex {}", e.u)));
            }
        }
        edges.sort_by_key(|e| (e.u, e.v));
        if let Some(w) = edges
            .windows(2)
            .find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v))
        {
            return Err(Error::Config(format!(
                "parallel edges between {} and {}",
                w[0].u, w[0].v
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
        }
        Ok(SignedGraph {
            edges,
            adjacency,
            labels,
        })
    }

    /// Builds a graph on vertices `0..n` labelled by their ids.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId, Sign)]) -> Result<Self> {
        Self::new(
            LabelMap::numeric(n),
            edges.iter().map(|&(u, v, s)| SignedEdge::new(u, v, s)),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &SignedEdge {
        &self.edges[id]
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn labels(&self) -> &LabelMap {
        &self.labels
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.adjacency[a]
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, e)| e)
    }

    pub fn positive_edge_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.sign == Sign::Positive)
            .count()
    }

    pub fn negative_edge_count(&self) -> usize {
        self.edge_count() - self.positive_edge_count()
    }

    /// Component index for every vertex, numbered in order of first vertex.
    pub fn component_ids(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adjacency[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn component_count(&self) -> usize {
        self.component_ids().1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        match self.component_count() {
            0 | 1 => Ok(()),
            components => Err(Error::Disconnected { components }),
        }
    }

    /// Edge list `u v sign` with original labels, sorted by `(u, v)`.
    pub fn export_edge_list(&self) -> String {
        let mut rows: Vec<(&str, &str, Sign)> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (self.labels.label(e.u), self.labels.label(e.v));
                if label_cmp(a, b) == Ordering::Greater {
                    (b, a, e.sign)
                } else {
                    (a, b, e.sign)
                }
            })
            .collect();
        rows.sort_by(|x, y| label_cmp(x.0, y.0).then_with(|| label_cmp(x.1, y.1)));
        let mut out = String::new();
        for (a, b, s) in rows {
            out.push_str(&format!("{a} {b} {s}\n"));
        }
        out
    }
}

/// `|E| - |V| + components`.
pub fn cyclomatic_number(g: &SignedGraph) -> usize {
    g.edge_count() + g.component_count() - g.vertex_count()
}

/// One directed sentiment as read from a source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSentiment {
    pub source: String,
    pub target: String,
    pub value: i64,
}

impl RawSentiment {
    pub fn new(source: impl Into<String>, target: impl Into<String>, value: i64) -> Self {
        RawSentiment {
            source: source.into(),
            target: target.into(),
            value,
        }
    }
}

/// How several sentiments on one unordered pair collapse to one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymmetrizationPolicy {
    /// Sum the values, keep the sign of the sum, drop zero sums.
    #[default]
    SumThenSign,
    /// Drop the pair whenever its sentiments disagree in sign.
    DropConflicts,
}

/// Counters describing what ingestion discarded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub raw: usize,
    pub neutral: usize,
    pub self_loops: usize,
    pub pairs: usize,
    pub dropped_pairs: usize,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub graph: SignedGraph,
    pub stats: IngestStats,
}

#[derive(Default)]
struct PairTally {
    sum: i64,
    positive: bool,
    negative: bool,
}

/// Collapses directed sentiments into a simple signed graph.
///
/// Vertex ids follow [`label_cmp`] order over the labels that end up with at
/// least one edge.
pub fn build_graph(raw: &[RawSentiment], policy: SymmetrizationPolicy) -> Result<Ingested> {
    let mut stats = IngestStats {
        raw: raw.len(),
        ..Default::default()
    };
    let mut pairs: BTreeMap<(&str, &str), PairTally> = BTreeMap::new();
    for r in raw {
        if r.value == 0 {
            stats.neutral += 1;
            continue;
        }
        if r.source == r.target {
            stats.self_loops += 1;
            continue;
        }
        let key = if r.source <= r.target {
            (r.source.as_str(), r.target.as_str())
        } else {
            (r.target.as_str(), r.source.as_str())
        };
        let t = pairs.entry(key).or_default();
        t.sum += r.value;
        t.positive |= r.value > 0;
        t.negative |= r.value < 0;
    }
    if stats.self_loops > 0 {
        log::warn!("dropped {} self-loop sentiments", stats.self_loops);
    }
    stats.pairs = pairs.len();

    let surviving: Vec<(&str, &str, Sign)> = pairs
        .into_iter()
        .filter_map(|((a, b), t)| {
            let sign = match policy {
                SymmetrizationPolicy::SumThenSign => Sign::from_value(t.sum),
                SymmetrizationPolicy::DropConflicts if t.positive && t.negative => None,
                SymmetrizationPolicy::DropConflicts => Sign::from_value(t.sum),
            };
            sign.map(|s| (a, b, s))
        })
        .collect();
    stats.dropped_pairs = stats.pairs - surviving.len();
    if surviving.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut labels: Vec<&str> = surviving.iter().flat_map(|&(a, b, _)| [a, b]).collect();
    labels.sort_by(|a, b| label_cmp(a, b));
    labels.dedup();
    let labels = LabelMap::from_labels(labels.into_iter().map(str::to_owned).collect())?;
    let edges: Vec<SignedEdge> = surviving
        .iter()
        .map(|&(a, b, s)| {
            let u = labels.id(a).expect("label registered");
            let v = labels.id(b).expect("label registered");
            SignedEdge::new(u, v, s)
        })
        .collect();
    let graph = SignedGraph::new(labels, edges)?;
    Ok(Ingested { graph, stats })
}

/// Splits `g` into maximal connected subgraphs, each densely re-indexed.
///
/// Components are ordered by descending vertex count, ties by smallest
/// original label. Within a component vertices keep their relative order.
pub fn connected_components(g: &SignedGraph) -> Vec<SignedGraph> {
    let (comp, count) = g.component_ids();
    let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); count];
    for v in 0..g.vertex_count() {
        members[comp[v]].push(v);
    }
    let mut component_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); count];
    for (id, e) in g.edges().iter().enumerate() {
        component_edges[comp[e.u]].push(id);
    }

    let mut local = vec![0usize; g.vertex_count()];
    let mut parts: Vec<(Vec<VertexId>, SignedGraph)> = members
        .into_iter()
        .zip(component_edges)
        .map(|(vertices, edge_ids)| {
            for (i, &v) in vertices.iter().enumerate() {
                local[v] = i;
            }
            let labels = LabelMap::from_labels(
                vertices
                    .iter()
                    .map(|&v| g.labels().label(v).to_owned())
                    .collect(),
            )
            .expect("labels of a valid graph are distinct");
            let edges = edge_ids.iter().map(|&id| {
                let e = g.edge(id);
                SignedEdge::new(local[e.u], local[e.v], e.sign)
            });
            let sub = SignedGraph::new(labels, edges).expect("subgraph of a valid graph");
            (vertices, sub)
        })
        .collect();

    let smallest_label = |sub: &SignedGraph| -> String {
        sub.labels()
            .labels()
            .iter()
            .min_by(|a, b| label_cmp(a, b))
            .cloned()
            .unwrap_or_default()
    };
    parts.sort_by(|(_, a), (_, b)| {
        b.vertex_count()
            .cmp(&a.vertex_count())
            .then_with(|| label_cmp(&smallest_label(a), &smallest_label(b)))
    });
    parts.into_iter().map(|(_, sub)| sub).collect()
}
