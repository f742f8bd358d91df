//! Spanning trees and the three tree samplers.
//!
//! Every tree is a pure function of `(graph, kind, seed, index)`: tree `i`
//! draws from its own ChaCha stream (`seed` selects the key, `i` the
//! stream), so trees can be produced in any order on any number of threads.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Sign, SignedGraph, VertexId};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerKind {
    /// Minimum spanning tree under fresh uniform random edge weights.
    RandomMst,
    /// Breadth-first tree from a random root, shuffled neighbor order.
    BreadthFirst,
    /// Depth-first tree from a random root, shuffled neighbor order.
    DepthFirst,
}

impl SamplerKind {
    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::RandomMst => "random-mst",
            SamplerKind::BreadthFirst => "bfs",
            SamplerKind::DepthFirst => "dfs",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-mst" | "random" => Ok(SamplerKind::RandomMst),
            "bfs" | "breadth-first" => Ok(SamplerKind::BreadthFirst),
            "dfs" | "depth-first" => Ok(SamplerKind::DepthFirst),
            other => Err(Error::Config(format!("unknown sampler `{other}`"))),
        }
    }
}

/// A rooted spanning tree with root-to-vertex sign labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: VertexId,
    parent: Vec<Option<(VertexId, EdgeId)>>,
    path_sign: Vec<Sign>,
    depth: Vec<usize>,
    in_tree: Vec<bool>,
}

impl SpanningTree {
    /// Roots the tree formed by `edges` at `root`.
    pub fn from_edges(g: &SignedGraph, edges: &[EdgeId], root: VertexId) -> Result<Self> {
        let n = g.vertex_count();
        if root >= n {
            return Err(Error::TreeMismatch(format!("root {root} outside graph")));
        }
        if edges.len() + 1 != n {
            return Err(Error::TreeMismatch(format!(
                "{} edges for {n} vertices",
                edges.len()
            )));
        }
        let mut tree_adj: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
        for &id in edges {
            if id >= g.edge_count() {
                return Err(Error::TreeMismatch(format!("edge {id} not in graph")));
            }
            let e = g.edge(id);
            tree_adj[e.u].push((e.v, id));
            tree_adj[e.v].push((e.u, id));
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &(y, id) in &tree_adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, id));
                    queue.push_back(y);
                }
            }
        }
        if order.len() != n {
            return Err(Error::TreeMismatch(
                "edges do not connect every vertex".into(),
            ));
        }
        Ok(Self::assemble(g, root, parent, &order))
    }

    /// `order` must list every vertex after its parent.
    fn assemble(
        g: &SignedGraph,
        root: VertexId,
        parent: Vec<Option<(VertexId, EdgeId)>>,
        order: &[VertexId],
    ) -> Self {
        let n = g.vertex_count();
        let mut path_sign = vec![Sign::Positive; n];
        let mut depth = vec![0; n];
        let mut in_tree = vec![false; g.edge_count()];
        for &v in order {
            if let Some((p, id)) = parent[v] {
                path_sign[v] = path_sign[p] * g.edge(id).sign;
                depth[v] = depth[p] + 1;
                in_tree[id] = true;
            }
        }
        SpanningTree {
            root,
            parent,
            path_sign,
            depth,
            in_tree,
        }
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: VertexId) -> Option<(VertexId, EdgeId)> {
        self.parent[v]
    }

    /// Product of tree-edge signs on the path from the root to `v`.
    pub fn path_sign(&self, v: VertexId) -> Sign {
        self.path_sign[v]
    }

    pub fn path_signs(&self) -> &[Sign] {
        &self.path_sign
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v]
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.in_tree.get(e).copied().unwrap_or(false)
    }

    /// Tree edge ids in increasing order.
    pub fn edge_ids(&self) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self.parent.iter().flatten().map(|&(_, e)| e).collect();
        ids.sort_unstable();
        ids
    }

    /// Tree edges on the path between `a` and `b`.
    pub fn path_edges(&self, mut a: VertexId, mut b: VertexId) -> Vec<EdgeId> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (p, e) = self.parent[a].expect("non-root has a parent");
                up.push(e);
                a = p;
            } else {
                let (p, e) = self.parent[b].expect("non-root has a parent");
                down.push(e);
                b = p;
            }
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// Vertices of tree degree one.
    pub fn leaf_count(&self) -> usize {
        let mut degree = vec![0usize; self.vertex_count()];
        for &(p, _) in self.parent.iter().flatten() {
            degree[p] += 1;
        }
        for (v, d) in degree.iter_mut().enumerate() {
            if self.parent[v].is_some() {
                *d += 1;
            }
        }
        degree.iter().filter(|&&d| d == 1).count()
    }

    /// Checks that this is a spanning tree of `g` with consistent labels.
    pub fn validate(&self, g: &SignedGraph) -> Result<()> {
        let n = g.vertex_count();
        if self.parent.len() != n || self.in_tree.len() != g.edge_count() {
            return Err(Error::TreeMismatch(
                "tree built for a different graph".into(),
            ));
        }
        if self.parent[self.root].is_some() || self.path_sign[self.root] != Sign::Positive {
            return Err(Error::TreeMismatch(
                "root has a parent or negative label".into(),
            ));
        }
        let mut tree_edges = 0;
        for v in 0..n {
            let Some((p, id)) = self.parent[v] else {
                if v != self.root {
                    return Err(Error::TreeMismatch(format!("vertex {v} has no parent")));
                }
                continue;
            };
            tree_edges += 1;
            let e = g.edge(id);
            if !((e.u == v && e.v == p) || (e.v == v && e.u == p)) {
                return Err(Error::TreeMismatch(format!(
                    "edge {id} does not join {v} and {p}"
                )));
            }
            if self.depth[v] != self.depth[p] + 1 {
                return Err(Error::TreeMismatch(format!("depth of {v} inconsistent")));
            }
            if self.path_sign[v] != self.path_sign[p] * e.sign {
                return Err(Error::TreeMismatch(format!(
                    "path sign of {v} inconsistent"
                )));
            }
        }
        if tree_edges + 1 != n.max(1) {
            return Err(Error::TreeMismatch("wrong number of tree edges".into()));
        }
        Ok(())
    }
}

/// Random stream for tree `index` under `seed`.
pub fn tree_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Samples spanning trees from a connected graph.
#[derive(Debug, Clone, Copy)]
pub struct TreeSampler<'g> {
    graph: &'g SignedGraph,
    kind: SamplerKind,
    seed: u64,
}

impl<'g> TreeSampler<'g> {
    pub fn new(graph: &'g SignedGraph, kind: SamplerKind, seed: u64) -> Result<Self> {
        graph.require_connected()?;
        if graph.vertex_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(TreeSampler { graph, kind, seed })
    }

    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tree(&self, index: u64) -> SpanningTree {
        let mut rng = tree_rng(self.seed, index);
        match self.kind {
            SamplerKind::RandomMst => random_mst(self.graph, &mut rng),
            SamplerKind::BreadthFirst => breadth_first(self.graph, &mut rng),
            SamplerKind::DepthFirst => depth_first(self.graph, &mut rng),
        }
    }
}

pub fn sample_tree(
    g: &SignedGraph,
    kind: SamplerKind,
    seed: u64,
    index: u64,
) -> Result<SpanningTree> {
    Ok(TreeSampler::new(g, kind, seed)?.tree(index))
}

fn random_mst(g: &SignedGraph, rng: &mut ChaCha8Rng) -> SpanningTree {
    let weights: Vec<u64> = (0..g.edge_count()).map(|_| rng.random()).collect();
    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.sort_unstable_by_key(|&id| (weights[id], id));
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    for id in order {
        let e = g.edge(id);
        if uf.union(e.u, e.v) {
            chosen.push(id);
            if chosen.len() + 1 == n {
                break;
            }
        }
    }
    SpanningTree::from_edges(g, &chosen, 0).expect("Kruskal on a connected graph spans it")
}

fn shuffled(g: &SignedGraph, v: VertexId, rng: &mut ChaCha8Rng) -> Vec<(VertexId, EdgeId)> {
    let mut nbrs = g.neighbors(v).to_vec();
    nbrs.shuffle(rng);
    nbrs
}

fn breadth_first(g: &SignedGraph, rng: &mut ChaCha8Rng) -> SpanningTree {
    let n = g.vertex_count();
    let root = rng.random_range(0..n);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for (y, id) in shuffled(g, x, rng) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, id));
                queue.push_back(y);
            }
        }
    }
    SpanningTree::assemble(g, root, parent, &order)
}

fn depth_first(g: &SignedGraph, rng: &mut ChaCha8Rng) -> SpanningTree {
    let n = g.vertex_count();
    let root = rng.random_range(0..n);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    seen[root] = true;
    order.push(root);
    let mut stack = vec![(root, shuffled(g, root, rng), 0usize)];
    while let Some((x, nbrs, next)) = stack.last_mut() {
        if *next == nbrs.len() {
            stack.pop();
            continue;
        }
        let (y, id) = nbrs[*next];
        *next += 1;
        if !seen[y] {
            seen[y] = true;
            parent[y] = Some((*x, id));
            order.push(y);
            let nbrs = shuffled(g, y, rng);
            stack.push((y, nbrs, 0));
        }
    }
    SpanningTree::assemble(g, root, parent, &order)
}
