//! Tree balancing: one spanning tree yields one nearest balanced state.
//!
//! Tree edges are never re-signed, so the Harary bipartition is fixed by
//! the tree alone: `v` sits on side 1 iff its root path is negative. The
//! re-signed non-tree edges are exactly those whose sign disagrees with
//! that bipartition, i.e. those closing a negative fundamental cycle.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Sign, SignedGraph, VertexId};
use crate::sampler::SpanningTree;

/// Packed per-vertex side bits of a bipartition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideVector {
    len: usize,
    words: Vec<u64>,
}

impl SideVector {
    pub fn zeros(len: usize) -> Self {
        SideVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut out = SideVector::zeros(0);
        for (i, b) in bits.into_iter().enumerate() {
            if i % 64 == 0 {
                out.words.push(0);
            }
            if b {
                out.words[i / 64] |= 1 << (i % 64);
            }
            out.len = i + 1;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, v: VertexId) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn set(&mut self, v: VertexId, value: bool) {
        if value {
            self.words[v / 64] |= 1 << (v % 64);
        } else {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    /// Number of vertices on side 1.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|v| self.get(v))
    }

    /// Swaps the two sides so that vertex 0 is on side 0.
    pub fn canonical(mut self) -> Self {
        if self.len > 0 && self.get(0) {
            for w in &mut self.words {
                *w = !*w;
            }
            let tail = self.len % 64;
            if tail != 0 {
                *self.words.last_mut().expect("non-empty") &= (1u64 << tail) - 1;
            }
        }
        self
    }
}

impl fmt::Debug for SideVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SideVector({self})")
    }
}

impl fmt::Display for SideVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A balanced signing of the input, represented by its Harary bipartition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedState {
    side: SideVector,
    flipped_edges: Vec<EdgeId>,
    majority_size: usize,
}

impl BalancedState {
    /// `side` is canonicalised; `flipped_edges` is sorted.
    pub fn new(side: SideVector, mut flipped_edges: Vec<EdgeId>) -> Self {
        let side = side.canonical();
        let ones = side.count_ones();
        let majority_size = ones.max(side.len() - ones);
        flipped_edges.sort_unstable();
        BalancedState {
            side,
            flipped_edges,
            majority_size,
        }
    }

    pub fn side(&self) -> &SideVector {
        &self.side
    }

    pub fn flipped_edges(&self) -> &[EdgeId] {
        &self.flipped_edges
    }

    pub fn majority_size(&self) -> usize {
        self.majority_size
    }

    pub fn vertex_count(&self) -> usize {
        self.side.len()
    }

    pub fn is_tie(&self) -> bool {
        2 * self.majority_size == self.side.len()
    }

    /// The side holding the strict majority, `None` on a tie.
    pub fn majority_side(&self) -> Option<bool> {
        if self.is_tie() {
            None
        } else {
            Some(2 * self.side.count_ones() > self.side.len())
        }
    }

    /// Sign the state assigns to edge `e`: positive within a side,
    /// negative across.
    pub fn induced_sign(&self, g: &SignedGraph, e: EdgeId) -> Sign {
        let edge = g.edge(e);
        if self.side.get(edge.u) == self.side.get(edge.v) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// The input signing with `flipped_edges` re-signed.
    pub fn signing(&self, g: &SignedGraph) -> Vec<Sign> {
        let mut signs: Vec<Sign> = g.edges().iter().map(|e| e.sign).collect();
        for &e in &self.flipped_edges {
            signs[e] = signs[e].flip();
        }
        signs
    }
}

/// Sign of the fundamental cycle that non-tree edge `e` closes in `t`.
pub fn fundamental_cycle_sign(g: &SignedGraph, t: &SpanningTree, e: EdgeId) -> Result<Sign> {
    if t.contains_edge(e) {
        return Err(Error::EdgeInTree(e));
    }
    let edge = g.edge(e);
    Ok(edge.sign * t.path_sign(edge.u) * t.path_sign(edge.v))
}

pub fn balance_with_tree(g: &SignedGraph, t: &SpanningTree) -> Result<BalancedState> {
    t.validate(g)?;
    Ok(balance_unchecked(g, t))
}

/// [`balance_with_tree`] for trees already known to span `g`.
pub(crate) fn balance_unchecked(g: &SignedGraph, t: &SpanningTree) -> BalancedState {
    let side = SideVector::from_bits(t.path_signs().iter().map(|s| s.is_negative()));
    let flipped = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(id, e)| {
            !t.contains_edge(id) && (e.sign * t.path_sign(e.u) * t.path_sign(e.v)).is_negative()
        })
        .map(|(id, _)| id)
        .collect();
    BalancedState::new(side, flipped)
}

/// Whether every cycle of `g` is positive under `signs`.
///
/// Checks the fundamental cycles of a breadth-first forest; they generate
/// the cycle space, so all cycles are positive iff these are.
pub fn is_balanced_signing(g: &SignedGraph, signs: &[Sign]) -> bool {
    let n = g.vertex_count();
    let mut label: Vec<Option<Sign>> = vec![None; n];
    let mut via: Vec<Option<EdgeId>> = vec![None; n];
    for start in 0..n {
        if label[start].is_some() {
            continue;
        }
        label[start] = Some(Sign::Positive);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let lx = label[x].expect("labelled when queued");
            for &(y, id) in g.neighbors(x) {
                if label[y].is_none() {
                    label[y] = Some(lx * signs[id]);
                    via[y] = Some(id);
                    queue.push_back(y);
                }
            }
        }
    }
    g.edges().iter().enumerate().all(|(id, e)| {
        via[e.u] == Some(id)
            || via[e.v] == Some(id)
            || (label[e.u].expect("all labelled") * label[e.v].expect("all labelled") * signs[id])
                == Sign::Positive
    })
}

/// Whether `s` describes a balanced signing of `g`.
///
/// The state's signing (input signs with its flips applied) must agree with
/// the sign its bipartition induces on every edge, and must pass the
/// cycle-space check of [`is_balanced_signing`].
pub fn verify_balanced(g: &SignedGraph, s: &BalancedState) -> bool {
    if s.vertex_count() != g.vertex_count() || s.flipped_edges.iter().any(|&e| e >= g.edge_count())
    {
        return false;
    }
    let signing = s.signing(g);
    let consistent = (0..g.edge_count()).all(|e| signing[e] == s.induced_sign(g, e));
    consistent && is_balanced_signing(g, &signing)
}
