//! Slit-curves of a dimer covering and the forests they cut out.
//!
//! Every black vertex `b` is matched along a unit edge to some white `w`.
//! The two whites `p` beside `b`, perpendicular to the dimer, each get arcs
//! centred at `p`: one from the midpoint of the diagonal `{p, w}` to the
//! midpoint of `{p, b}`, and one from the midpoint of the diagonal
//! `{p, 2b − w}` to the same point. Arcs whose diagonal end would leave the
//! graph are not drawn. Chaining arcs through shared midpoints gives the
//! slit-curves; the edges they cross are removed, and what remains is a
//! pair of forests on the two white sublattices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use thiserror::Error;

use crate::covering::DimerCovering;
use crate::lattice::{Bond, Edge, LatticeGraph, Midpoint, Vertex, VertexClass};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SlitError {
    #[error("edges left after cutting along slit-curves contain a cycle through {0}")]
    CycleDetected(Vertex),
    #[error("path bends at black vertex {0}")]
    BentAtBlack(Vertex),
    #[error("edge {0} is not an impurity of the covering")]
    NotAnImpurity(Edge),
    #[error("no slit-curve crosses impurity {0}")]
    NoCurve(Edge),
    #[error("curve crosses no dual tree")]
    NotEnclosing,
}

/// A piece of slit-curve around the white `center`, running from the
/// midpoint of the diagonal `diagonal` to the midpoint of the unit edge
/// `{center, black}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub center: Vertex,
    pub black: Vertex,
    pub diagonal: Edge,
}

impl Arc {
    pub fn from_mid(&self) -> Midpoint {
        self.diagonal.midpoint()
    }

    pub fn to_mid(&self) -> Midpoint {
        self.center.midpoint(self.black)
    }

    /// The unit edge this arc crosses at its end.
    pub fn unit_edge(&self) -> Edge {
        Edge::new(self.center, self.black).expect("unit neighbours")
    }

    fn ends(&self) -> [Midpoint; 2] {
        [self.from_mid(), self.to_mid()]
    }
}

/// A maximal chain of arcs. `points` lists the crossed-edge midpoints in
/// order, so `points.len() == arcs.len() + 1` for an open curve; a closed
/// curve does not repeat its first point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlitCurve {
    pub points: Vec<Midpoint>,
    pub arcs: Vec<Arc>,
    pub closed: bool,
}

impl SlitCurve {
    pub fn endpoints(&self) -> Option<(Midpoint, Midpoint)> {
        if self.closed {
            return None;
        }
        Some((self.points[0], *self.points.last().expect("nonempty curve")))
    }

    pub fn crosses(&self, e: Edge) -> bool {
        self.points.contains(&e.midpoint())
    }

    /// Every edge of Γ the curve passes through, sorted.
    pub fn crossed_edges(&self) -> Vec<Edge> {
        let mut out: BTreeSet<Edge> = BTreeSet::new();
        for a in &self.arcs {
            out.insert(a.diagonal);
            out.insert(a.unit_edge());
        }
        out.into_iter().collect()
    }

    /// `W1` endpoints of the diagonals the curve crosses.
    pub fn dual_points(&self) -> BTreeSet<Vertex> {
        self.arcs
            .iter()
            .filter_map(|a| a.diagonal.w1_endpoint())
            .collect()
    }
}

/// Arcs of `m`, in generation order (by black vertex, then centre).
pub fn arcs(g: &LatticeGraph, m: &DimerCovering) -> Vec<Arc> {
    let partners = m.partner_map();
    let mut out = Vec::new();
    for &b in g.vertices().iter().filter(|v| v.is_black()) {
        let Some(&w) = partners.get(&b) else { continue };
        let (ux, uy) = (w.x - b.x, w.y - b.y);
        let ends = [w, b.offset(-ux, -uy)];
        for center in [b.offset(-uy, ux), b.offset(uy, -ux)] {
            if !g.contains(center) {
                continue;
            }
            for q in ends {
                if g.contains(q) {
                    let diagonal = Edge::new(center, q).expect("diagonal between whites");
                    out.push(Arc { center, black: b, diagonal });
                }
            }
        }
    }
    out
}

/// All slit-curves of `m`, sorted. Open curves start at their
/// lexicographically smaller endpoint.
pub fn slit_curves(g: &LatticeGraph, m: &DimerCovering) -> Vec<SlitCurve> {
    chain(&arcs(g, m))
}

fn chain(arcs: &[Arc]) -> Vec<SlitCurve> {
    let mut at: BTreeMap<Midpoint, Vec<usize>> = BTreeMap::new();
    for (i, a) in arcs.iter().enumerate() {
        for p in a.ends() {
            at.entry(p).or_default().push(i);
        }
    }
    let mut used = vec![false; arcs.len()];
    let mut curves = Vec::new();

    let walk = |start: Midpoint, used: &mut Vec<bool>| -> (Vec<Midpoint>, Vec<Arc>) {
        let mut points = vec![start];
        let mut chain = Vec::new();
        let mut here = start;
        while let Some(&i) = at[&here].iter().find(|&&i| !used[i]) {
            used[i] = true;
            let [p, q] = arcs[i].ends();
            here = if p == here { q } else { p };
            chain.push(arcs[i]);
            points.push(here);
        }
        (points, chain)
    };

    // Open curves start at points touched by a single arc.
    let ends: Vec<Midpoint> = at
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(&p, _)| p)
        .collect();
    for p in ends {
        if at[&p].iter().all(|&i| used[i]) {
            continue;
        }
        let (points, arcs) = walk(p, &mut used);
        curves.push(SlitCurve { points, arcs, closed: false });
    }
    // Whatever is left lies on closed loops.
    let starts: Vec<Midpoint> = at.keys().copied().collect();
    for p in starts {
        if at[&p].iter().all(|&i| used[i]) {
            continue;
        }
        let (mut points, mut arcs) = walk(p, &mut used);
        points.pop();
        // Orient so the second point is the smaller neighbour of the start.
        if points.len() > 2 && points[points.len() - 1] < points[1] {
            points[1..].reverse();
            arcs.reverse();
        }
        curves.push(SlitCurve { points, arcs, closed: true });
    }
    curves.sort();
    curves
}

/// A tree on one white sublattice, made of bonds through black vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub vertices: Vec<Vertex>,
    pub bonds: Vec<Bond>,
}

impl Tree {
    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// The primary forest on `W0` and the dual forest on `W1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestPair {
    pub primary: Vec<Tree>,
    pub dual: Vec<Tree>,
}

impl ForestPair {
    pub fn tree_containing(&self, v: Vertex) -> Option<&Tree> {
        self.primary
            .iter()
            .chain(self.dual.iter())
            .find(|t| t.contains(v))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Cuts `g` along the slit-curves of `m` and returns the two forests.
pub fn forests(g: &LatticeGraph, m: &DimerCovering) -> Result<ForestPair, SlitError> {
    let crossed: BTreeSet<Midpoint> = arcs(g, m).iter().flat_map(Arc::ends).collect();
    let kept: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|e| !crossed.contains(&e.midpoint()))
        .collect();

    let mut uf = UnionFind::new(g.len());
    let mut at_black: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in &kept {
        let (u, v) = e.endpoints();
        let (i, j) = (g.index_of(u).expect("vertex"), g.index_of(v).expect("vertex"));
        if !uf.union(i, j) {
            return Err(SlitError::CycleDetected(u));
        }
        for (x, y) in [(u, v), (v, u)] {
            if x.is_black() {
                at_black.entry(x).or_default().push(y);
            }
        }
    }

    // Black leaves drop out; blacks of degree two become sublattice bonds.
    let mut bonds = Vec::new();
    for (&b, whites) in &at_black {
        match whites.as_slice() {
            [_] => {}
            [u, v] => {
                let bond = Bond::new(*u, *v).ok_or(SlitError::BentAtBlack(b))?;
                bonds.push(bond);
            }
            _ => return Err(SlitError::BentAtBlack(b)),
        }
    }

    let whites: Vec<Vertex> = g.vertices().iter().copied().filter(|v| v.is_white()).collect();
    let index: BTreeMap<Vertex, usize> = whites.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(whites.len());
    for bond in &bonds {
        let (u, v) = bond.endpoints();
        uf.union(index[&u], index[&v]);
    }
    let mut groups: BTreeMap<usize, Tree> = BTreeMap::new();
    for (i, &v) in whites.iter().enumerate() {
        let r = uf.find(i);
        groups
            .entry(r)
            .or_insert_with(|| Tree { vertices: Vec::new(), bonds: Vec::new() })
            .vertices
            .push(v);
    }
    for bond in bonds {
        let r = uf.find(index[&bond.endpoints().0]);
        groups.get_mut(&r).expect("group").bonds.push(bond);
    }

    let mut primary = Vec::new();
    let mut dual = Vec::new();
    for (_, mut t) in groups {
        t.vertices.sort_unstable();
        t.bonds.sort_unstable();
        if t.vertices[0].class() == VertexClass::WhiteW0 {
            primary.push(t);
        } else {
            dual.push(t);
        }
    }
    primary.sort();
    dual.sort();
    Ok(ForestPair { primary, dual })
}

/// The slit-curve crossing impurity `e` of `m`.
pub fn impurity_curve(g: &LatticeGraph, m: &DimerCovering, e: Edge) -> Result<SlitCurve, SlitError> {
    if !e.is_diagonal() || !m.contains(e) {
        return Err(SlitError::NotAnImpurity(e));
    }
    slit_curves(g, m)
        .into_iter()
        .find(|c| c.crosses(e))
        .ok_or(SlitError::NoCurve(e))
}

/// The dual tree surrounded by `c`: the one holding the `W1` ends of the
/// diagonals `c` crosses.
pub fn enclosed_dual_tree<'a>(c: &SlitCurve, fp: &'a ForestPair) -> Result<&'a Tree, SlitError> {
    let points = c.dual_points();
    let first = points.iter().next().ok_or(SlitError::NotEnclosing)?;
    let tree = fp
        .dual
        .iter()
        .find(|t| t.contains(*first))
        .ok_or(SlitError::NotEnclosing)?;
    if points.iter().all(|&p| tree.contains(p)) {
        Ok(tree)
    } else {
        Err(SlitError::NotEnclosing)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::validate_covering;
    use crate::lattice::build_normal_graph;

    fn v(x: i32, y: i32) -> Vertex {
        Vertex::new(x, y)
    }

    fn e(a: (i32, i32), b: (i32, i32)) -> Edge {
        Edge::new(v(a.0, a.1), v(b.0, b.1)).unwrap()
    }

    #[test]
    fn single_black_between_two_whites() {
        // Whites (0,0),(2,0),(1,1) around black (1,0); impurity {(0,0),(1,1)}.
        let g = build_normal_graph([v(0, 0), v(1, 0), v(2, 0), v(1, 1)]).unwrap();
        let m = validate_covering(&g, [e((0, 0), (1, 1)), e((1, 0), (2, 0))]).unwrap();
        let curves = slit_curves(&g, &m);
        // Dimer {(1,0),(2,0)} is horizontal; the only perpendicular white is
        // (1,1), with arcs from both diagonals to the edge {(1,0),(1,1)}.
        assert_eq!(curves.len(), 1);
        let c = &curves[0];
        assert!(!c.closed);
        assert_eq!(c.points, vec![Midpoint::new(1, 1), Midpoint::new(2, 1), Midpoint::new(3, 1)]);
        assert!(c.crosses(e((0, 0), (1, 1))));
        let fp = forests(&g, &m).unwrap();
        // The bond (0,0)-(2,0) survives through (1,0); (1,1) is alone.
        assert_eq!(fp.primary.len(), 1);
        assert_eq!(fp.primary[0].bonds, vec![Bond::new(v(0, 0), v(2, 0)).unwrap()]);
        assert_eq!(fp.dual.len(), 1);
        assert_eq!(fp.dual[0].vertices, vec![v(1, 1)]);
        let imp = impurity_curve(&g, &m, e((0, 0), (1, 1))).unwrap();
        assert_eq!(&imp, c);
        assert_eq!(enclosed_dual_tree(&imp, &fp).unwrap().vertices, vec![v(1, 1)]);
        assert_eq!(
            impurity_curve(&g, &m, e((1, 0), (2, 0))),
            Err(SlitError::NotAnImpurity(e((1, 0), (2, 0))))
        );
    }

    #[test]
    fn unit_square_has_no_arcs_off_graph() {
        let g = build_normal_graph([v(0, 0), v(1, 0), v(0, 1), v(1, 1)]).unwrap();
        let m = validate_covering(&g, [e((0, 0), (1, 0)), e((0, 1), (1, 1))]).unwrap();
        // Each dimer's opposite end is outside the graph but its partner is
        // the diagonal end, so each black gets one arc.
        let curves = slit_curves(&g, &m);
        assert_eq!(curves.len(), 1);
        assert_eq!(curves[0].arcs.len(), 2);
        assert!(forests(&g, &m).is_ok());
    }
}
