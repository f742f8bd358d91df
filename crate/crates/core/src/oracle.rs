//! Brute-force ground truth for small graphs.
//!
//! Nothing here shares code with the sampling engine beyond the graph and
//! tree types: trees are enumerated exhaustively, balancing walks explicit
//! tree paths, and metrics are summed straight from their definitions in
//! big rationals.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::balance::SideVector;
use crate::error::{Error, Result};
use crate::graph::{cyclomatic_number, EdgeId, Sign, SignedGraph, VertexId};
use crate::kirchhoff::count_spanning_trees;
use crate::metrics::{MetricsReport, Provenance, TieAgreement};
use crate::sampler::SpanningTree;
use crate::unionfind::UnionFind;

/// Default cap on enumerated spanning trees.
pub const TREE_CAP: u64 = 1_000_000;
/// Default cap on vertices for bipartition enumeration.
pub const VERTEX_CAP: usize = 20;

/// Every spanning tree of `g` exactly once, each rooted at vertex 0.
///
/// Edges are decided in index order: an edge is either contracted into the
/// partial tree or deleted, and deletion is only explored when the edge is
/// not a bridge of what remains, so every branch ends in a tree.
pub fn enumerate_spanning_trees(g: &SignedGraph, cap: u64) -> Result<Vec<SpanningTree>> {
    let count = count_spanning_trees(g)?;
    if count > BigUint::from(cap) {
        return Err(Error::TooManyTrees {
            count: count.to_string(),
            cap,
        });
    }
    let mut search = TreeSearch {
        g,
        chosen: Vec::new(),
        deleted: vec![false; g.edge_count()],
        out: Vec::new(),
    };
    search.descend(0)?;
    if BigUint::from(search.out.len()) != count {
        return Err(Error::OracleMismatch(format!(
            "enumerated {} trees, matrix-tree count is {count}",
            search.out.len()
        )));
    }
    Ok(search.out)
}

struct TreeSearch<'g> {
    g: &'g SignedGraph,
    chosen: Vec<EdgeId>,
    deleted: Vec<bool>,
    out: Vec<SpanningTree>,
}

impl TreeSearch<'_> {
    fn descend(&mut self, next: EdgeId) -> Result<()> {
        let n = self.g.vertex_count();
        if self.chosen.len() + 1 == n {
            self.out
                .push(SpanningTree::from_edges(self.g, &self.chosen, 0)?);
            return Ok(());
        }
        let e = self.g.edge(next);
        let mut forest = UnionFind::new(n);
        for &id in &self.chosen {
            let c = self.g.edge(id);
            forest.union(c.u, c.v);
        }
        if forest.find(e.u) == forest.find(e.v) {
            // Would close a cycle with the partial tree.
            self.deleted[next] = true;
            self.descend(next + 1)?;
            self.deleted[next] = false;
            return Ok(());
        }
        self.chosen.push(next);
        self.descend(next + 1)?;
        self.chosen.pop();

        self.deleted[next] = true;
        if self.remaining_connected() {
            self.descend(next + 1)?;
        }
        self.deleted[next] = false;
        Ok(())
    }

    fn remaining_connected(&self) -> bool {
        let n = self.g.vertex_count();
        let mut uf = UnionFind::new(n);
        let mut joins = 0;
        for (id, e) in self.g.edges().iter().enumerate() {
            if !self.deleted[id] && uf.union(e.u, e.v) {
                joins += 1;
            }
        }
        joins + 1 == n
    }
}

/// Canonical side vectors of all `2^(|V|-1)` bipartitions of a connected
/// graph. Each induces a distinct balanced signing.
pub fn enumerate_balanced_states(g: &SignedGraph, cap: usize) -> Result<Vec<SideVector>> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::TooLarge {
            what: "vertex count",
            size: n,
            cap,
        });
    }
    g.require_connected()?;
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok((0u64..1 << (n - 1))
        .map(|mask| SideVector::from_bits((0..n).map(|v| v > 0 && mask >> (v - 1) & 1 == 1)))
        .collect())
}

/// Set of edges, used to address signings by their negative edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeMask(Vec<u64>);

impl EdgeMask {
    pub fn empty(edge_count: usize) -> Self {
        EdgeMask(vec![0; edge_count.div_ceil(64)])
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.0[e / 64] |= 1 << (e % 64);
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn symmetric_difference(&self, other: &EdgeMask) -> EdgeMask {
        EdgeMask(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }
}

/// The signings of a fixed underlying graph, ordered by containment of
/// their negative edge sets.
#[derive(Debug, Clone, Copy)]
pub struct SigningLattice<'g> {
    graph: &'g SignedGraph,
}

impl<'g> SigningLattice<'g> {
    pub fn new(graph: &'g SignedGraph) -> Self {
        SigningLattice { graph }
    }

    pub fn graph(&self) -> &'g SignedGraph {
        self.graph
    }

    pub fn mask_of(&self, signs: &[Sign]) -> EdgeMask {
        let mut mask = EdgeMask::empty(self.graph.edge_count());
        for (e, s) in signs.iter().enumerate() {
            if s.is_negative() {
                mask.insert(e);
            }
        }
        mask
    }

    /// Negative edges of the input signing.
    pub fn input_mask(&self) -> EdgeMask {
        let signs: Vec<Sign> = self.graph.edges().iter().map(|e| e.sign).collect();
        self.mask_of(&signs)
    }

    /// Negative edges of the signing induced by a bipartition: exactly the
    /// edges crossing it.
    pub fn induced_mask(&self, side: &SideVector) -> EdgeMask {
        let mut mask = EdgeMask::empty(self.graph.edge_count());
        for (e, edge) in self.graph.edges().iter().enumerate() {
            if side.get(edge.u) != side.get(edge.v) {
                mask.insert(e);
            }
        }
        mask
    }

    /// Hamming distance between two signings.
    pub fn distance(&self, a: &EdgeMask, b: &EdgeMask) -> usize {
        a.symmetric_difference(b).len()
    }

    /// Edges on which the input and the state induced by `side` differ.
    pub fn difference(&self, side: &SideVector) -> EdgeMask {
        self.input_mask()
            .symmetric_difference(&self.induced_mask(side))
    }
}

/// Fewest sign changes that make `g` balanced.
pub fn frustration_index(g: &SignedGraph) -> Result<usize> {
    let lattice = SigningLattice::new(g);
    let input = lattice.input_mask();
    enumerate_balanced_states(g, VERTEX_CAP)?
        .iter()
        .map(|side| lattice.distance(&input, &lattice.induced_mask(side)))
        .min()
        .ok_or(Error::EmptyGraph)
}

/// Sign of the fundamental cycle of non-tree edge `e`, multiplied out along
/// the explicit tree path.
pub fn path_product_sign(g: &SignedGraph, t: &SpanningTree, e: EdgeId) -> Sign {
    let edge = g.edge(e);
    t.path_edges(edge.u, edge.v)
        .into_iter()
        .fold(edge.sign, |acc, id| acc * g.edge(id).sign)
}

/// Balances `g` along tree `t` by walking every fundamental cycle, then
/// two-colours the resulting signing over all edges.
fn balance_by_path_walk(g: &SignedGraph, t: &SpanningTree) -> Result<SideVector> {
    let mut signs: Vec<Sign> = g.edges().iter().map(|e| e.sign).collect();
    for e in 0..g.edge_count() {
        if !t.contains_edge(e) && path_product_sign(g, t, e).is_negative() {
            signs[e] = signs[e].flip();
        }
    }
    let n = g.vertex_count();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    colour[0] = Some(false);
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        let cx = colour[x].expect("coloured when queued");
        for &(y, id) in g.neighbors(x) {
            let cy = cx ^ signs[id].is_negative();
            match colour[y] {
                None => {
                    colour[y] = Some(cy);
                    queue.push_back(y);
                }
                Some(c) if c != cy => {
                    return Err(Error::OracleMismatch(format!(
                        "path-walk balancing left edge {id} inconsistent"
                    )))
                }
                Some(_) => {}
            }
        }
    }
    Ok(SideVector::from_bits(colour.into_iter().map(|c| c.expect("connected"))).canonical())
}

/// States produced by balancing along every spanning tree, with the number
/// of trees producing each.
pub fn cloud_by_trees(g: &SignedGraph) -> Result<BTreeMap<SideVector, u64>> {
    let mut weights = BTreeMap::new();
    for t in enumerate_spanning_trees(g, TREE_CAP)? {
        *weights.entry(balance_by_path_walk(g, &t)?).or_insert(0) += 1;
    }
    Ok(weights)
}

/// Balanced states whose difference set `D` from the input is a minimal
/// balancing set no larger than the cyclomatic number.
///
/// A state lies in the cloud iff some spanning tree avoids all of `D`,
/// i.e. iff `g` minus `D` is still connected.
pub fn cloud_by_lattice(g: &SignedGraph) -> Result<BTreeSet<SideVector>> {
    let lattice = SigningLattice::new(g);
    let bound = cyclomatic_number(g);
    let n = g.vertex_count();
    let mut members = BTreeSet::new();
    for side in enumerate_balanced_states(g, VERTEX_CAP)? {
        let diff = lattice.difference(&side);
        if diff.len() > bound {
            continue;
        }
        let mut uf = UnionFind::new(n);
        let mut joins = 0;
        for (e, edge) in g.edges().iter().enumerate() {
            if !diff.contains(e) && uf.union(edge.u, edge.v) {
                joins += 1;
            }
        }
        if joins + 1 == n {
            members.insert(side);
        }
    }
    Ok(members)
}

/// One state of the frustration cloud.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloudState {
    pub side: SideVector,
    /// Number of spanning trees that balance the input into this state.
    pub weight: u64,
    /// Sign changes separating this state from the input.
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrustrationCloud {
    pub states: Vec<CloudState>,
    pub tree_count: u64,
    /// Number of balanced signings of the underlying graph.
    pub balanced_state_count: usize,
}

impl FrustrationCloud {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Weights in decreasing order.
    pub fn weights(&self) -> Vec<u64> {
        let mut w: Vec<u64> = self.states.iter().map(|s| s.weight).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w
    }

    pub fn min_distance(&self) -> Option<usize> {
        self.states.iter().map(|s| s.distance).min()
    }
}

/// The full frustration cloud, computed by tree enumeration and checked
/// against the lattice characterisation.
pub fn frustration_cloud_exact(g: &SignedGraph) -> Result<FrustrationCloud> {
    let n = g.vertex_count();
    if n > VERTEX_CAP {
        return Err(Error::TooLarge {
            what: "vertex count",
            size: n,
            cap: VERTEX_CAP,
        });
    }
    let by_trees = cloud_by_trees(g)?;
    let by_lattice = cloud_by_lattice(g)?;
    let produced: BTreeSet<SideVector> = by_trees.keys().cloned().collect();
    if produced != by_lattice {
        return Err(Error::OracleMismatch(format!(
            "tree enumeration gives {} states, lattice gives {}",
            produced.len(),
            by_lattice.len()
        )));
    }
    let lattice = SigningLattice::new(g);
    let tree_count: u64 = by_trees.values().sum();
    let states = by_trees
        .into_iter()
        .map(|(side, weight)| CloudState {
            distance: lattice.difference(&side).len(),
            side,
            weight,
        })
        .collect();
    Ok(FrustrationCloud {
        states,
        tree_count,
        balanced_state_count: 1 << (n - 1),
    })
}

/// Status, agreement, influence, vertical status and controversy over all
/// spanning trees, summed directly from their definitions.
pub fn exact_metrics(
    g: &SignedGraph,
    tie_break: Option<VertexId>,
    rule: TieAgreement,
    normalized_influence: bool,
) -> Result<MetricsReport<BigRational>> {
    let n = g.vertex_count();
    if let Some(t) = tie_break {
        if t >= n {
            return Err(Error::Config(format!("tie-break vertex {t} out of range")));
        }
    }
    let trees = enumerate_spanning_trees(g, TREE_CAP)?;
    let one = BigRational::one();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let zero = BigRational::zero();
    let mut status = vec![zero.clone(); n];
    let mut vertical = vec![zero.clone(); n];
    let mut agreement = vec![zero.clone(); g.edge_count()];
    let mut ties = 0u64;
    for t in &trees {
        let side = balance_by_path_walk(g, t)?;
        let on_one = side.count_ones();
        let tie = 2 * on_one == n;
        let majority = 2 * on_one > n;
        if tie {
            ties += 1;
        }
        for v in 0..n {
            let in_majority = !tie && side.get(v) == majority;
            if tie {
                status[v] += &half;
            } else if in_majority {
                status[v] += &one;
            }
            let wins_tie = tie_break.is_some_and(|tb| tie && side.get(v) == side.get(tb));
            if in_majority || wins_tie {
                vertical[v] += &one;
            }
        }
        for (e, edge) in g.edges().iter().enumerate() {
            let same = side.get(edge.u) == side.get(edge.v);
            if tie {
                if same || rule == TieAgreement::Half {
                    agreement[e] += &half;
                }
            } else if same && side.get(edge.u) == majority {
                agreement[e] += &one;
            }
        }
    }
    let total = BigRational::from_integer(BigInt::from(trees.len()));
    for x in status
        .iter_mut()
        .chain(vertical.iter_mut())
        .chain(agreement.iter_mut())
    {
        *x = &*x / &total;
    }
    let mut influence = Vec::with_capacity(n);
    for v in 0..n {
        let degree = g.degree(v);
        if degree == 0 {
            return Err(Error::ZeroDegree(v));
        }
        let sum = g
            .neighbors(v)
            .iter()
            .fold(zero.clone(), |acc, &(_, e)| acc + &agreement[e]);
        influence.push(if normalized_influence {
            sum / BigRational::from_integer(BigInt::from(degree))
        } else {
            sum
        });
    }
    let controversy = status.iter().fold(zero.clone(), |acc, s| acc + s)
        / BigRational::from_integer(BigInt::from(n));
    let label = tie_break.map(|t| g.labels().label(t).to_string());
    Ok(MetricsReport {
        status,
        agreement,
        influence,
        vertical_status: tie_break.map(|_| vertical),
        controversy,
        normalized_influence,
        tie_count: ties,
        provenance: Provenance::exhaustive(trees.len() as u64)
            .with_tie_break(label)
            .with_tie_agreement(rule),
    })
}
