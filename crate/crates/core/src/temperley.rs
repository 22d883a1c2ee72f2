//! Temperley's correspondence between dimer coverings of `N` and spanning
//! trees of `H`, and its quotient by t-moves for coverings of `G`.
//!
//! A spanning tree `T` of `H` rooted at `v*` and its dual `T⊥` rooted at
//! `f*` give a covering of `N`: every non-root vertex is matched to the black
//! point where its edge towards the root crosses the other tree.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use thiserror::Error;

use crate::covering::{validate_covering, CoveringError, DimerCovering};
use crate::lattice::{Edge, TemperleyTriple, Vertex};
use crate::moves::{t_class, t_partition};
use crate::oracle::{enumerate_coverings, enumerate_spanning_trees, OracleError, SmallGraph};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TemperleyError {
    #[error("edges do not form a spanning tree")]
    NotATree,
    #[error("tree lives on the wrong host graph")]
    WrongHost,
    #[error("not a covering of N: {0}")]
    Covering(#[from] CoveringError),
    #[error("no t-equivalent covering contains e*1")]
    NoRepresentative,
    #[error("{0} t-equivalent coverings contain e*1")]
    MultipleRepresentatives(usize),
    #[error("projection is not constant on a t-class")]
    NotConstantOnClass,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Host {
    H,
    HPerp,
}

/// A spanning tree with every edge oriented towards `root`. Edges are
/// identified by the black point they pass through, which also tells
/// parallel edges of `H⊥` apart.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTree {
    pub host: Host,
    pub root: Vertex,
    pub vertices: Vec<Vertex>,
    /// Non-root vertex → (parent, crossing black).
    pub out: BTreeMap<Vertex, (Vertex, Vertex)>,
}

impl RootedTree {
    /// `(child, parent)` pairs, sorted by child.
    pub fn oriented_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.out.iter().map(|(&c, &(p, _))| (c, p)).collect()
    }

    /// Black points of the tree's edges, sorted.
    pub fn crossings(&self) -> BTreeSet<Vertex> {
        self.out.values().map(|&(_, b)| b).collect()
    }
}

/// One edge of `H` or `H⊥`: endpoints and crossing black.
type HostEdge = (Vertex, Vertex, Vertex);

fn host_edges(t: &TemperleyTriple, host: Host) -> (Vec<Vertex>, Vec<HostEdge>) {
    match host {
        Host::H => {
            let edges = t
                .h
                .bonds
                .iter()
                .map(|b| {
                    let (u, v) = b.endpoints();
                    (u, v, b.crossing())
                })
                .collect();
            (t.h.vertices.clone(), edges)
        }
        Host::HPerp => {
            let edges = t
                .h_perp
                .edges
                .iter()
                .map(|e| (e.ends.0, e.ends.1, e.crossing))
                .collect();
            (t.h_perp.vertices(), edges)
        }
    }
}

fn root_of(t: &TemperleyTriple, host: Host) -> Vertex {
    match host {
        Host::H => t.v_star(),
        Host::HPerp => t.f_star(),
    }
}

/// `H` or `H⊥` as an indexed multigraph, with vertex and crossing lookups.
pub fn host_graph(t: &TemperleyTriple, host: Host) -> (SmallGraph, Vec<Vertex>, Vec<Vertex>) {
    let (vertices, edges) = host_edges(t, host);
    let index: BTreeMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let small = SmallGraph {
        vertex_count: vertices.len(),
        edges: edges.iter().map(|&(u, v, _)| (index[&u], index[&v])).collect(),
    };
    let crossings = edges.iter().map(|&(_, _, b)| b).collect();
    (small, vertices, crossings)
}

/// Orients the edges with the given crossings towards the host's root.
pub fn rooted_from_crossings(
    t: &TemperleyTriple,
    host: Host,
    crossings: &BTreeSet<Vertex>,
) -> Result<RootedTree, TemperleyError> {
    let (vertices, edges) = host_edges(t, host);
    let chosen: Vec<HostEdge> = edges.into_iter().filter(|e| crossings.contains(&e.2)).collect();
    if chosen.len() != crossings.len() || chosen.len() + 1 != vertices.len() {
        return Err(TemperleyError::NotATree);
    }
    let mut adjacent: BTreeMap<Vertex, Vec<(Vertex, Vertex)>> = BTreeMap::new();
    for &(u, v, b) in &chosen {
        adjacent.entry(u).or_default().push((v, b));
        adjacent.entry(v).or_default().push((u, b));
    }
    let root = root_of(t, host);
    let mut out = BTreeMap::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &(y, b) in adjacent.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(y) {
                out.insert(y, (x, b));
                queue.push_back(y);
            }
        }
    }
    if seen.len() != vertices.len() {
        return Err(TemperleyError::NotATree);
    }
    Ok(RootedTree { host, root, vertices, out })
}

/// Every spanning tree of the host graph, rooted, in enumeration order.
pub fn spanning_trees(t: &TemperleyTriple, host: Host) -> Result<Vec<RootedTree>, TemperleyError> {
    let (small, _, crossings) = host_graph(t, host);
    enumerate_spanning_trees(&small)?
        .into_iter()
        .map(|edges| {
            let set: BTreeSet<Vertex> = edges.iter().map(|&k| crossings[k]).collect();
            rooted_from_crossings(t, host, &set)
        })
        .collect()
}

/// The complementary tree on the other host: its edges are those crossing
/// no edge of `tree`.
pub fn dual_tree(t: &TemperleyTriple, tree: &RootedTree) -> Result<RootedTree, TemperleyError> {
    let other = match tree.host {
        Host::H => Host::HPerp,
        Host::HPerp => Host::H,
    };
    let used = tree.crossings();
    let (_, edges) = host_edges(t, other);
    let rest: BTreeSet<Vertex> = edges
        .iter()
        .map(|e| e.2)
        .filter(|b| !used.contains(b))
        .collect();
    rooted_from_crossings(t, other, &rest)
}

/// The covering of `N` built from a spanning tree of `H` and its dual.
pub fn temperley_forward(t: &TemperleyTriple, tree: &RootedTree) -> Result<DimerCovering, TemperleyError> {
    if tree.host != Host::H {
        return Err(TemperleyError::WrongHost);
    }
    let dual = dual_tree(t, tree)?;
    let dimers = tree
        .out
        .iter()
        .chain(dual.out.iter())
        .map(|(&x, &(_, b))| Edge::new(x, b).expect("vertex next to its crossing"));
    Ok(validate_covering(&t.n, dimers)?)
}

/// Inverse of [`temperley_forward`]: reads the tree on `H` off the dimers at
/// its vertices.
pub fn phi(t: &TemperleyTriple, m: &DimerCovering) -> Result<RootedTree, TemperleyError> {
    let h: BTreeSet<Vertex> = t.h.vertices.iter().copied().collect();
    let crossings: BTreeSet<Vertex> = m
        .dimers()
        .iter()
        .filter_map(|e| {
            let (u, v) = e.endpoints();
            if h.contains(&u) && v.is_black() {
                Some(v)
            } else if h.contains(&v) && u.is_black() {
                Some(u)
            } else {
                None
            }
        })
        .collect();
    let tree = rooted_from_crossings(t, Host::H, &crossings)?;
    // Each vertex must point at the far end of the bond through its partner.
    for (&x, &(p, b)) in &tree.out {
        if p != Vertex::new(2 * b.x - x.x, 2 * b.y - x.y) || !m.contains(Edge::new(x, b).expect("adjacent")) {
            return Err(TemperleyError::NotATree);
        }
    }
    Ok(tree)
}

/// The unique t-equivalent covering containing `e*₁`, with that dimer
/// removed: a covering of `N`.
pub fn pi(t: &TemperleyTriple, m: &DimerCovering) -> Result<DimerCovering, TemperleyError> {
    let class = t_class(&t.g, m);
    let reps: Vec<&DimerCovering> = class.iter().filter(|c| c.contains(t.e_star1)).collect();
    match reps[..] {
        [] => Err(TemperleyError::NoRepresentative),
        [rep] => Ok(validate_covering(&t.n, rep.without(t.e_star1).dimers().iter().copied())?),
        _ => Err(TemperleyError::MultipleRepresentatives(reps.len())),
    }
}

/// One t-class of coverings of `G` together with the tree it maps to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassImage {
    pub class: Vec<DimerCovering>,
    pub tree: RootedTree,
}

/// Partitions all coverings of `G` into t-classes and sends each to
/// `φ(π(M))`, checking that every member of a class lands on the same tree.
pub fn class_bijection(t: &TemperleyTriple) -> Result<Vec<ClassImage>, TemperleyError> {
    let all = enumerate_coverings(&t.g)?;
    let mut out = Vec::new();
    for class in t_partition(&t.g, &all) {
        let tree = phi(t, &pi(t, &class[0])?)?;
        for m in &class[1..] {
            if phi(t, &pi(t, m)?)? != tree {
                return Err(TemperleyError::NotConstantOnClass);
            }
        }
        out.push(ClassImage { class, tree });
    }
    Ok(out)
}

/// The `W1` points where the impurity may sit within the class of `tree`:
/// the component of `f*` in the dual tree once its non-lattice edges at
/// `f*` are cut.
pub fn impurity_support(t: &TemperleyTriple, tree: &RootedTree) -> Result<BTreeSet<Vertex>, TemperleyError> {
    let dual = match tree.host {
        Host::H => dual_tree(t, tree)?,
        Host::HPerp => return Err(TemperleyError::WrongHost),
    };
    let f_star = t.f_star();
    let lattice: BTreeMap<Vertex, bool> = t.h_perp.edges.iter().map(|e| (e.crossing, e.lattice)).collect();
    let mut adjacent: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for (&x, &(p, b)) in &dual.out {
        if p == f_star && !lattice[&b] {
            continue;
        }
        adjacent.entry(x).or_default().push(p);
        adjacent.entry(p).or_default().push(x);
    }
    let mut seen = BTreeSet::from([f_star]);
    let mut queue = VecDeque::from([f_star]);
    while let Some(x) = queue.pop_front() {
        for &y in adjacent.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// The covering of `G` obtained by adding `e*₁` to the Temperley covering
/// of `tree`.
pub fn lift(t: &TemperleyTriple, tree: &RootedTree) -> Result<DimerCovering, TemperleyError> {
    let m = temperley_forward(t, tree)?;
    let dimers = m.dimers().iter().copied().chain([t.e_star1]);
    Ok(validate_covering(&t.g, dimers)?)
}
