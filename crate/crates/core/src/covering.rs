//! Dimer coverings (perfect matchings) of finite subgraphs of Γ and their
//! impurity bookkeeping.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::lattice::{Edge, LatticeGraph, Vertex};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CoveringError {
    #[error("vertex {0} is not covered by any dimer")]
    UncoveredVertex(Vertex),
    #[error("vertex {0} is covered by more than one dimer")]
    DoublyCoveredVertex(Vertex),
    #[error("dimer {0} is not an edge of the graph")]
    ForeignEdge(Edge),
    #[error("graph has {white} white and {black} black vertices; the difference must be even and nonnegative")]
    OddImbalance { white: usize, black: usize },
}

/// A validated perfect matching. Dimers are stored sorted, so equality,
/// ordering and hashing are structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimerCovering {
    dimers: Vec<Edge>,
}

impl DimerCovering {
    /// Wraps an already sorted and validated dimer list.
    pub(crate) fn from_sorted(dimers: Vec<Edge>) -> Self {
        debug_assert!(dimers.windows(2).all(|w| w[0] < w[1]));
        DimerCovering { dimers }
    }

    pub fn dimers(&self) -> &[Edge] {
        &self.dimers
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.dimers.binary_search(&e).is_ok()
    }

    /// Vertex → matched vertex, both directions.
    pub fn partner_map(&self) -> BTreeMap<Vertex, Vertex> {
        let mut map = BTreeMap::new();
        for e in &self.dimers {
            let (a, b) = e.endpoints();
            map.insert(a, b);
            map.insert(b, a);
        }
        map
    }

    /// The diagonal dimers.
    pub fn impurities(&self) -> Vec<Edge> {
        impurities(self)
    }

    /// Replaces the dimers in `removes` with those in `adds`, without
    /// re-validating against a graph.
    pub(crate) fn exchange(&self, removes: &[Edge], adds: &[Edge]) -> DimerCovering {
        let mut dimers: Vec<Edge> = self
            .dimers
            .iter()
            .copied()
            .filter(|e| !removes.contains(e))
            .collect();
        dimers.extend_from_slice(adds);
        dimers.sort_unstable();
        DimerCovering { dimers }
    }

    /// The same dimers without `e`; no longer a covering of the original graph.
    pub(crate) fn without(&self, e: Edge) -> DimerCovering {
        DimerCovering {
            dimers: self.dimers.iter().copied().filter(|&d| d != e).collect(),
        }
    }
}

/// Checks that `dimers` is a perfect matching of `g`.
pub fn validate_covering<I>(g: &LatticeGraph, dimers: I) -> Result<DimerCovering, CoveringError>
where
    I: IntoIterator<Item = Edge>,
{
    let mut covered = vec![false; g.len()];
    let mut list = Vec::new();
    for e in dimers {
        if !g.contains_edge(e) {
            return Err(CoveringError::ForeignEdge(e));
        }
        let (a, b) = e.endpoints();
        for v in [a, b] {
            let i = g.index_of(v).expect("edge of graph");
            if covered[i] {
                return Err(CoveringError::DoublyCoveredVertex(v));
            }
            covered[i] = true;
        }
        list.push(e);
    }
    if let Some(i) = covered.iter().position(|c| !c) {
        return Err(CoveringError::UncoveredVertex(g.vertex(i)));
    }
    list.sort_unstable();
    Ok(DimerCovering { dimers: list })
}

/// Number of diagonal dimers every covering of `g` must carry:
/// `(|W| − |B|) / 2`.
pub fn expected_impurity_count(g: &LatticeGraph) -> Result<usize, CoveringError> {
    let (white, black) = (g.white_count(), g.black_count());
    if white < black || (white - black) % 2 == 1 {
        return Err(CoveringError::OddImbalance { white, black });
    }
    Ok((white - black) / 2)
}

pub fn impurities(m: &DimerCovering) -> Vec<Edge> {
    m.dimers.iter().copied().filter(|e| e.is_diagonal()).collect()
}
