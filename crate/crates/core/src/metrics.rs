//! Status, agreement, influence, vertical status and controversy.
//!
//! Tallies are integers in half-units: a vertex on the strict majority side
//! of a state earns 2, every vertex of a tied state earns 1. Each metric is
//! then a tally over `2 * trees_seen`, kept exact until the caller picks a
//! [`Scalar`] to report in.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::balance::{BalancedState, SideVector};
use crate::error::{Error, Result};
use crate::graph::{SignedGraph, VertexId};
use crate::sampler::SamplerKind;
use crate::scalar::{format_fraction, Scalar};

/// A non-negative ratio of two integers, compared by value.
#[derive(Debug, Clone, Copy)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Fraction { num, den }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_scalar<S: Scalar>(&self) -> S {
        S::from_ratio(self.num, self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_fraction(self.num, self.den))
    }
}

/// How edges are credited in states whose two sides have equal size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieAgreement {
    /// Edges inside either side earn a half, edges across the cut earn 0.
    #[default]
    ZeroCut,
    /// Every edge earns a half, the same as every vertex.
    Half,
}

impl TieAgreement {
    pub fn name(self) -> &'static str {
        match self {
            TieAgreement::ZeroCut => "zero-cut",
            TieAgreement::Half => "half",
        }
    }
}

impl fmt::Display for TieAgreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TieAgreement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero-cut" => Ok(TieAgreement::ZeroCut),
            "half" => Ok(TieAgreement::Half),
            other => Err(Error::Config(format!(
                "unknown tie-agreement rule `{other}` (expected zero-cut or half)"
            ))),
        }
    }
}

/// Mergeable per-vertex and per-edge tallies over a sequence of states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsensusAccumulator {
    vertex_count: usize,
    edge_count: usize,
    tie_agreement: TieAgreement,
    tie_break: Option<VertexId>,
    trees_seen: u64,
    tie_count: u64,
    vertex_tally: Vec<u64>,
    edge_tally: Vec<u64>,
    vertical_tally: Vec<u64>,
    state_weights: BTreeMap<SideVector, u64>,
}

impl ConsensusAccumulator {
    pub fn new(g: &SignedGraph) -> Self {
        ConsensusAccumulator {
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            tie_agreement: TieAgreement::default(),
            tie_break: None,
            trees_seen: 0,
            tie_count: 0,
            vertex_tally: vec![0; g.vertex_count()],
            edge_tally: vec![0; g.edge_count()],
            vertical_tally: Vec::new(),
            state_weights: BTreeMap::new(),
        }
    }

    pub fn with_tie_agreement(mut self, rule: TieAgreement) -> Self {
        self.tie_agreement = rule;
        self
    }

    /// Fixes the vertex that wins every tie for vertical status. Must be
    /// called before any state is accumulated.
    pub fn with_tie_break(mut self, t: VertexId) -> Result<Self> {
        if t >= self.vertex_count {
            return Err(Error::Config(format!(
                "tie-break vertex {t} out of range for {} vertices",
                self.vertex_count
            )));
        }
        if self.trees_seen > 0 {
            return Err(Error::Config(
                "tie-break vertex must be fixed before accumulation".into(),
            ));
        }
        self.tie_break = Some(t);
        self.vertical_tally = vec![0; self.vertex_count];
        Ok(self)
    }

    pub fn trees_seen(&self) -> u64 {
        self.trees_seen
    }

    pub fn tie_count(&self) -> u64 {
        self.tie_count
    }

    pub fn tie_break(&self) -> Option<VertexId> {
        self.tie_break
    }

    pub fn tie_agreement(&self) -> TieAgreement {
        self.tie_agreement
    }

    pub fn vertex_tally(&self) -> &[u64] {
        &self.vertex_tally
    }

    pub fn edge_tally(&self) -> &[u64] {
        &self.edge_tally
    }

    pub fn vertical_tally(&self) -> Option<&[u64]> {
        self.tie_break.map(|_| self.vertical_tally.as_slice())
    }

    /// Canonical side vector of each distinct state and how many trees
    /// produced it.
    pub fn state_weights(&self) -> &BTreeMap<SideVector, u64> {
        &self.state_weights
    }

    pub fn accumulate(&mut self, g: &SignedGraph, s: &BalancedState) -> Result<()> {
        if g.vertex_count() != self.vertex_count || g.edge_count() != self.edge_count {
            return Err(Error::GraphMismatch(format!(
                "accumulator has {} vertices and {} edges, graph has {} and {}",
                self.vertex_count,
                self.edge_count,
                g.vertex_count(),
                g.edge_count()
            )));
        }
        if s.vertex_count() != self.vertex_count {
            return Err(Error::GraphMismatch(format!(
                "state has {} vertices, accumulator has {}",
                s.vertex_count(),
                self.vertex_count
            )));
        }
        let side = s.side();
        match s.majority_side() {
            Some(majority) => {
                for v in 0..self.vertex_count {
                    if side.get(v) == majority {
                        self.vertex_tally[v] += 2;
                        if self.tie_break.is_some() {
                            self.vertical_tally[v] += 2;
                        }
                    }
                }
                for (e, edge) in g.edges().iter().enumerate() {
                    if side.get(edge.u) == majority && side.get(edge.v) == majority {
                        self.edge_tally[e] += 2;
                    }
                }
            }
            None => {
                self.tie_count += 1;
                for t in &mut self.vertex_tally {
                    *t += 1;
                }
                if let Some(t) = self.tie_break {
                    let winner = side.get(t);
                    for v in 0..self.vertex_count {
                        if side.get(v) == winner {
                            self.vertical_tally[v] += 2;
                        }
                    }
                }
                for (e, edge) in g.edges().iter().enumerate() {
                    let credited = match self.tie_agreement {
                        TieAgreement::Half => true,
                        TieAgreement::ZeroCut => side.get(edge.u) == side.get(edge.v),
                    };
                    if credited {
                        self.edge_tally[e] += 1;
                    }
                }
            }
        }
        *self.state_weights.entry(side.clone()).or_insert(0) += 1;
        self.trees_seen += 1;
        Ok(())
    }

    /// Adds `other`'s tallies to `self`. The result does not depend on how
    /// a tree sequence was split or in which order parts are merged.
    pub fn merge(&mut self, other: &ConsensusAccumulator) -> Result<()> {
        if self.vertex_count != other.vertex_count
            || self.edge_count != other.edge_count
            || self.tie_agreement != other.tie_agreement
            || self.tie_break != other.tie_break
        {
            return Err(Error::GraphMismatch(
                "accumulators differ in graph or configuration".into(),
            ));
        }
        self.trees_seen += other.trees_seen;
        self.tie_count += other.tie_count;
        for (a, b) in self.vertex_tally.iter_mut().zip(&other.vertex_tally) {
            *a += b;
        }
        for (a, b) in self.edge_tally.iter_mut().zip(&other.edge_tally) {
            *a += b;
        }
        for (a, b) in self.vertical_tally.iter_mut().zip(&other.vertical_tally) {
            *a += b;
        }
        for (side, w) in &other.state_weights {
            *self.state_weights.entry(side.clone()).or_insert(0) += w;
        }
        Ok(())
    }

    fn denominator(&self) -> Result<u64> {
        if self.trees_seen == 0 {
            Err(Error::EmptyAccumulator)
        } else {
            Ok(2 * self.trees_seen)
        }
    }

    pub fn status(&self) -> Result<Vec<Fraction>> {
        let den = self.denominator()?;
        Ok(self
            .vertex_tally
            .iter()
            .map(|&t| Fraction::new(t, den))
            .collect())
    }

    pub fn agreement(&self) -> Result<Vec<Fraction>> {
        let den = self.denominator()?;
        Ok(self
            .edge_tally
            .iter()
            .map(|&t| Fraction::new(t, den))
            .collect())
    }

    /// Mean agreement of each vertex's incident edges, or their sum when
    /// `normalized` is false.
    pub fn influence(&self, g: &SignedGraph, normalized: bool) -> Result<Vec<Fraction>> {
        let den = self.denominator()?;
        if g.edge_count() != self.edge_count || g.vertex_count() != self.vertex_count {
            return Err(Error::GraphMismatch("influence graph differs".into()));
        }
        (0..self.vertex_count)
            .map(|v| {
                let degree = g.degree(v) as u64;
                if degree == 0 {
                    return Err(Error::ZeroDegree(v));
                }
                let sum: u64 = g
                    .neighbors(v)
                    .iter()
                    .map(|&(_, e)| self.edge_tally[e])
                    .sum();
                Ok(if normalized {
                    Fraction::new(sum, den * degree)
                } else {
                    Fraction::new(sum, den)
                })
            })
            .collect()
    }

    /// Status with the fixed tie-break vertex winning every tie.
    pub fn vertical_status(&self) -> Result<Vec<Fraction>> {
        let den = self.denominator()?;
        if self.tie_break.is_none() {
            return Err(Error::NoTieBreak);
        }
        Ok(self
            .vertical_tally
            .iter()
            .map(|&t| Fraction::new(t, den))
            .collect())
    }

    /// Vertical status for any tie-break vertex, recomputed from the
    /// retained state weights.
    pub fn vertical_status_for(&self, t: VertexId) -> Result<Vec<Fraction>> {
        let den = self.denominator()?;
        if t >= self.vertex_count {
            return Err(Error::Config(format!("vertex {t} out of range")));
        }
        let mut tally = vec![0u64; self.vertex_count];
        for (side, &w) in &self.state_weights {
            let ones = side.count_ones();
            let winner = match (2 * ones).cmp(&self.vertex_count) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => side.get(t),
            };
            for (v, slot) in tally.iter_mut().enumerate() {
                if side.get(v) == winner {
                    *slot += 2 * w;
                }
            }
        }
        Ok(tally.into_iter().map(|t| Fraction::new(t, den)).collect())
    }

    /// Status summed over distinct states weighted by multiplicity instead
    /// of over individual trees.
    pub fn status_from_states(&self) -> Result<Vec<Fraction>> {
        let den = self.denominator()?;
        let mut tally = vec![0u64; self.vertex_count];
        for (side, &w) in &self.state_weights {
            let ones = side.count_ones();
            for (v, slot) in tally.iter_mut().enumerate() {
                *slot += w * match (2 * ones).cmp(&self.vertex_count) {
                    Ordering::Equal => 1,
                    Ordering::Greater => 2 * side.get(v) as u64,
                    Ordering::Less => 2 * !side.get(v) as u64,
                };
            }
        }
        Ok(tally.into_iter().map(|t| Fraction::new(t, den)).collect())
    }

    /// Mean status over all vertices.
    pub fn controversy(&self) -> Result<Fraction> {
        let den = self.denominator()?;
        let sum: u64 = self.vertex_tally.iter().sum();
        Ok(Fraction::new(sum, den * self.vertex_count as u64))
    }

    /// Mean vertical status over all vertices.
    pub fn vertical_controversy(&self) -> Result<Fraction> {
        let den = self.denominator()?;
        if self.tie_break.is_none() {
            return Err(Error::NoTieBreak);
        }
        let sum: u64 = self.vertical_tally.iter().sum();
        Ok(Fraction::new(sum, den * self.vertex_count as u64))
    }

    pub fn report<S: Scalar>(
        &self,
        g: &SignedGraph,
        provenance: Provenance,
        normalized_influence: bool,
    ) -> Result<MetricsReport<S>> {
        let convert = |xs: Vec<Fraction>| xs.iter().map(Fraction::to_scalar).collect::<Vec<S>>();
        Ok(MetricsReport {
            status: convert(self.status()?),
            agreement: convert(self.agreement()?),
            influence: convert(self.influence(g, normalized_influence)?),
            vertical_status: match self.tie_break {
                Some(_) => Some(convert(self.vertical_status()?)),
                None => None,
            },
            controversy: self.controversy()?.to_scalar(),
            normalized_influence,
            tie_count: self.tie_count,
            provenance,
        })
    }
}

/// Where a report's trees came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// Sampler name, or `exhaustive` for full enumeration.
    pub method: String,
    pub seed: Option<u64>,
    pub trees: u64,
    pub tie_break: Option<String>,
    pub tie_agreement: TieAgreement,
}

impl Provenance {
    pub fn sampled(kind: SamplerKind, seed: u64, trees: u64) -> Self {
        Provenance {
            method: kind.name().to_string(),
            seed: Some(seed),
            trees,
            tie_break: None,
            tie_agreement: TieAgreement::default(),
        }
    }

    pub fn exhaustive(trees: u64) -> Self {
        Provenance {
            method: "exhaustive".to_string(),
            seed: None,
            trees,
            tie_break: None,
            tie_agreement: TieAgreement::default(),
        }
    }

    pub fn with_tie_break(mut self, label: Option<String>) -> Self {
        self.tie_break = label;
        self
    }

    pub fn with_tie_agreement(mut self, rule: TieAgreement) -> Self {
        self.tie_agreement = rule;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport<S> {
    pub status: Vec<S>,
    pub agreement: Vec<S>,
    pub influence: Vec<S>,
    pub vertical_status: Option<Vec<S>>,
    pub controversy: S,
    pub normalized_influence: bool,
    pub tie_count: u64,
    pub provenance: Provenance,
}
