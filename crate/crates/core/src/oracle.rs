//! Brute-force ground truth: every perfect matching of a small lattice graph,
//! and every spanning tree of a small multigraph.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::covering::DimerCovering;
use crate::lattice::{Edge, LatticeGraph};

/// Default vertex limit for covering enumeration.
pub const DEFAULT_MAX_VERTICES: usize = 40;
/// Default cap on the number of spanning trees listed.
pub const DEFAULT_MAX_TREES: usize = 1_000_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for brute force: {size} exceeds limit {limit}")]
    TooLarge { size: usize, limit: usize },
}

/// All dimer coverings of `g`, in lexicographic branching order, with the
/// default size limit.
pub fn enumerate_coverings(g: &LatticeGraph) -> Result<Vec<DimerCovering>, OracleError> {
    enumerate_coverings_with_limit(g, DEFAULT_MAX_VERTICES)
}

pub fn enumerate_coverings_with_limit(
    g: &LatticeGraph,
    max_vertices: usize,
) -> Result<Vec<DimerCovering>, OracleError> {
    if g.len() > max_vertices {
        return Err(OracleError::TooLarge { size: g.len(), limit: max_vertices });
    }
    let mut out = Vec::new();
    if g.len() % 2 == 1 {
        return Ok(out);
    }
    let mut partner: Vec<Option<usize>> = vec![None; g.len()];
    let mut stack = Vec::with_capacity(g.len() / 2);
    extend(g, &mut partner, &mut stack, &mut out);
    Ok(out)
}

fn extend(
    g: &LatticeGraph,
    partner: &mut [Option<usize>],
    stack: &mut Vec<Edge>,
    out: &mut Vec<DimerCovering>,
) {
    let Some(i) = partner.iter().position(Option::is_none) else {
        let mut dimers = stack.clone();
        dimers.sort_unstable();
        out.push(DimerCovering::from_sorted(dimers));
        return;
    };
    for &j in g.neighbors(i) {
        if partner[j].is_some() {
            continue;
        }
        partner[i] = Some(j);
        partner[j] = Some(i);
        stack.push(Edge::new(g.vertex(i), g.vertex(j)).expect("adjacent"));
        extend(g, partner, stack, out);
        stack.pop();
        partner[i] = None;
        partner[j] = None;
    }
}

/// For every diagonal edge occurring as a dimer, the number of coverings
/// containing it.
pub fn impurity_histogram(g: &LatticeGraph) -> Result<BTreeMap<Edge, u64>, OracleError> {
    Ok(histogram_of(&enumerate_coverings(g)?))
}

pub fn histogram_of(coverings: &[DimerCovering]) -> BTreeMap<Edge, u64> {
    let mut hist = BTreeMap::new();
    for m in coverings {
        for e in m.impurities() {
            *hist.entry(e).or_insert(0) += 1;
        }
    }
    hist
}

/// An undirected multigraph on `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

/// All spanning trees of `graph`, each as a sorted list of edge indices, in
/// lexicographic include-first order.
pub fn enumerate_spanning_trees(graph: &SmallGraph) -> Result<Vec<Vec<usize>>, OracleError> {
    enumerate_spanning_trees_with_limit(graph, DEFAULT_MAX_TREES)
}

pub fn enumerate_spanning_trees_with_limit(
    graph: &SmallGraph,
    max_trees: usize,
) -> Result<Vec<Vec<usize>>, OracleError> {
    let mut out = Vec::new();
    if graph.vertex_count == 0 {
        return Ok(out);
    }
    let mut state = TreeSearch {
        graph,
        excluded: vec![false; graph.edges.len()],
        chosen: Vec::new(),
        out: &mut out,
        max_trees,
    };
    state.search(0)?;
    Ok(out)
}

struct TreeSearch<'a> {
    graph: &'a SmallGraph,
    excluded: Vec<bool>,
    chosen: Vec<usize>,
    out: &'a mut Vec<Vec<usize>>,
    max_trees: usize,
}

impl TreeSearch<'_> {
    fn components(&self, edges: impl Iterator<Item = usize>) -> (Vec<usize>, usize) {
        let mut parent: Vec<usize> = (0..self.graph.vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut count = self.graph.vertex_count;
        for k in edges {
            let (u, v) = self.graph.edges[k];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                count -= 1;
            }
        }
        for x in 0..parent.len() {
            let r = find(&mut parent, x);
            parent[x] = r;
        }
        (parent, count)
    }

    fn search(&mut self, next: usize) -> Result<(), OracleError> {
        if self.chosen.len() + 1 == self.graph.vertex_count {
            if self.out.len() == self.max_trees {
                return Err(OracleError::TooLarge { size: self.max_trees + 1, limit: self.max_trees });
            }
            self.out.push(self.chosen.clone());
            return Ok(());
        }
        if next == self.graph.edges.len() {
            return Ok(());
        }
        let (u, v) = self.graph.edges[next];
        let (roots, _) = self.components(self.chosen.iter().copied());
        if roots[u] != roots[v] {
            self.chosen.push(next);
            self.search(next + 1)?;
            self.chosen.pop();
        }
        // Exclude `next` only if the graph stays connected without it.
        self.excluded[next] = true;
        let still_connected = {
            let usable = (0..self.graph.edges.len()).filter(|&k| !self.excluded[k]);
            self.components(usable).1 == 1
        };
        if still_connected {
            self.search(next + 1)?;
        }
        self.excluded[next] = false;
        Ok(())
    }
}
