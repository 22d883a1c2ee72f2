//! Local moves on dimer coverings and the t-equivalence relation.
//!
//! Both kinds of move take dimers `{a,b}` and `{c,d}` and replace them by
//! `{b,c}` and `{d,a}`:
//!
//! * an s-move rotates two parallel dimers around a unit square;
//! * a t-move slides an impurity: `{a,b}` and `{b,c}` are diagonal and
//!   `{c,d}`, `{d,a}` are unit edges, so `d` is the black point between the
//!   two same-class whites `a` and `c`, and the impurity pivots about `b`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use thiserror::Error;

use crate::covering::DimerCovering;
use crate::lattice::{Edge, LatticeGraph, Vertex};
use crate::oracle::{enumerate_coverings, OracleError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    S,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalMove {
    pub kind: MoveKind,
    pub a: Vertex,
    pub b: Vertex,
    pub c: Vertex,
    pub d: Vertex,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("move does not apply to this covering")]
    InapplicableMove,
}

impl LocalMove {
    pub fn removes(&self) -> [Edge; 2] {
        [edge(self.a, self.b), edge(self.c, self.d)]
    }

    pub fn adds(&self) -> [Edge; 2] {
        [edge(self.b, self.c), edge(self.d, self.a)]
    }

    /// The move that undoes this one.
    pub fn reverse(&self) -> LocalMove {
        match self.kind {
            MoveKind::S => LocalMove { kind: MoveKind::S, a: self.b, b: self.c, c: self.d, d: self.a },
            MoveKind::T => LocalMove { kind: MoveKind::T, a: self.c, b: self.b, c: self.a, d: self.d },
        }
    }

    pub fn sorted_vertices(&self) -> [Vertex; 4] {
        let mut v = [self.a, self.b, self.c, self.d];
        v.sort_unstable();
        v
    }

    fn sort_key(&self) -> (MoveKind, [Vertex; 4], [Edge; 2], [Vertex; 4]) {
        let mut removes = self.removes();
        removes.sort_unstable();
        (self.kind, self.sorted_vertices(), removes, [self.a, self.b, self.c, self.d])
    }

    /// The static site this move belongs to.
    pub fn site(&self) -> MoveSite {
        match self.kind {
            MoveKind::S => {
                let v = self.sorted_vertices();
                MoveSite::Square { corner: v[0] }
            }
            MoveKind::T => MoveSite::Pivot { pivot: self.b, hinge: self.d },
        }
    }
}

impl PartialOrd for LocalMove {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LocalMove {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

fn edge(u: Vertex, v: Vertex) -> Edge {
    Edge::new(u, v).expect("move vertices are adjacent")
}

/// A place where a move may happen, independent of the current covering.
///
/// Each site toggles between exactly two local dimer patterns, so applying
/// the same site twice is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveSite {
    /// Unit square with lower-left corner `corner`.
    Square { corner: Vertex },
    /// White `pivot` carrying the impurity, with black `hinge` adjacent to it;
    /// the impurity swings between the two whites flanking `hinge`.
    Pivot { pivot: Vertex, hinge: Vertex },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::Square { .. } => MoveKind::S,
            MoveSite::Pivot { .. } => MoveKind::T,
        }
    }

    /// Site vertices in cyclic order `[a, b, c, d]` for one of the two
    /// patterns (`{a,b},{c,d}` present).
    pub fn cycle(&self) -> [Vertex; 4] {
        match *self {
            MoveSite::Square { corner } => [
                corner,
                corner.offset(1, 0),
                corner.offset(1, 1),
                corner.offset(0, 1),
            ],
            MoveSite::Pivot { pivot, hinge } => {
                let (ux, uy) = (pivot.x - hinge.x, pivot.y - hinge.y);
                let (a, c) = (hinge.offset(-uy, ux), hinge.offset(uy, -ux));
                let (a, c) = if a < c { (a, c) } else { (c, a) };
                [a, pivot, c, hinge]
            }
        }
    }

    /// The move this site performs on a covering with the given partner
    /// lookup, if either pattern is present.
    pub fn move_for(&self, partner: impl Fn(Vertex) -> Option<Vertex>) -> Option<LocalMove> {
        let [p, q, r, s] = self.cycle();
        let kind = self.kind();
        let paired = |u: Vertex, v: Vertex| partner(u) == Some(v);
        if paired(p, q) && paired(r, s) {
            return Some(LocalMove { kind, a: p, b: q, c: r, d: s });
        }
        let alt = match kind {
            MoveKind::S => LocalMove { kind, a: q, b: r, c: s, d: p },
            MoveKind::T => LocalMove { kind, a: r, b: q, c: p, d: s },
        };
        if paired(alt.a, alt.b) && paired(alt.c, alt.d) {
            return Some(alt);
        }
        None
    }
}

/// Every geometrically possible move site of `g`, deterministically ordered:
/// all unit squares, then all pivot sites.
pub fn static_sites(g: &LatticeGraph) -> Vec<MoveSite> {
    let mut sites = Vec::new();
    for &v in g.vertices() {
        let square = [v, v.offset(1, 0), v.offset(1, 1), v.offset(0, 1)];
        if square.iter().all(|&w| g.contains(w)) {
            sites.push(MoveSite::Square { corner: v });
        }
    }
    for &hinge in g.vertices().iter().filter(|v| v.is_black()) {
        for pivot in hinge.unit_neighbors() {
            if !g.contains(pivot) {
                continue;
            }
            let site = MoveSite::Pivot { pivot, hinge };
            if site.cycle().iter().all(|&w| g.contains(w)) {
                sites.push(site);
            }
        }
    }
    sites.sort_by_key(|s| {
        let mut v = s.cycle();
        v.sort_unstable();
        (s.kind(), v)
    });
    sites
}

/// All s- and t-moves applicable to `m`, found from its dimers and sorted by
/// kind, then by sorted vertex set.
pub fn find_moves(g: &LatticeGraph, m: &DimerCovering) -> Vec<LocalMove> {
    let partners = m.partner_map();
    let lookup = |v: Vertex| partners.get(&v).copied();
    let mut candidates = BTreeSet::new();
    for &e in m.dimers() {
        let (u, v) = e.endpoints();
        if e.is_diagonal() {
            for pivot in [u, v] {
                let tip = if pivot == u { v } else { u };
                // Blacks adjacent to both ends of the impurity.
                for hinge in [Vertex::new(pivot.x, tip.y), Vertex::new(tip.x, pivot.y)] {
                    candidates.insert(MoveSite::Pivot { pivot, hinge });
                }
            }
        } else {
            // The two unit squares having `e` as a side.
            let (dx, dy) = (v.x - u.x, v.y - u.y);
            for side in [1, -1] {
                let (px, py) = (-dy * side, dx * side);
                let corners = [u, v, v.offset(px, py), u.offset(px, py)];
                let corner = *corners.iter().min().expect("four corners");
                candidates.insert(MoveSite::Square { corner });
            }
        }
    }
    let mut moves: Vec<LocalMove> = candidates
        .into_iter()
        .filter(|s| s.cycle().iter().all(|&w| g.contains(w)))
        .filter_map(|s| s.move_for(lookup))
        .collect();
    moves.sort_unstable();
    moves.dedup();
    moves
}

pub fn apply_move(m: &DimerCovering, mv: &LocalMove) -> Result<DimerCovering, MoveError> {
    let removes = mv.removes();
    if !removes.iter().all(|&e| m.contains(e)) {
        return Err(MoveError::InapplicableMove);
    }
    Ok(m.exchange(&removes, &mv.adds()))
}

/// The t-equivalence class of `m`: everything reachable by t-moves.
pub fn t_class(g: &LatticeGraph, m: &DimerCovering) -> BTreeSet<DimerCovering> {
    let mut seen = BTreeSet::from([m.clone()]);
    let mut queue = VecDeque::from([m.clone()]);
    while let Some(cur) = queue.pop_front() {
        for mv in find_moves(g, &cur).into_iter().filter(|mv| mv.kind == MoveKind::T) {
            let next = apply_move(&cur, &mv).expect("found moves apply");
            if !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Partition of `coverings` into t-classes, in order of first appearance.
pub fn t_partition(g: &LatticeGraph, coverings: &[DimerCovering]) -> Vec<Vec<DimerCovering>> {
    let mut assigned: BTreeMap<&DimerCovering, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<DimerCovering>> = Vec::new();
    for m in coverings {
        if assigned.contains_key(m) {
            continue;
        }
        let class: Vec<DimerCovering> = t_class(g, m).into_iter().collect();
        for member in &class {
            if let Some(found) = coverings.iter().find(|c| *c == member) {
                assigned.insert(found, classes.len());
            }
        }
        classes.push(class);
    }
    classes
}

/// Whether the graph on all coverings of `g`, joined by s- and t-moves, is
/// connected.
pub fn move_graph_connected(g: &LatticeGraph) -> Result<bool, OracleError> {
    let all = enumerate_coverings(g)?;
    let Some(first) = all.first() else {
        return Ok(true);
    };
    let mut seen = BTreeSet::from([first.clone()]);
    let mut queue = VecDeque::from([first.clone()]);
    while let Some(cur) = queue.pop_front() {
        for mv in find_moves(g, &cur) {
            let next = apply_move(&cur, &mv).expect("found moves apply");
            if !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len() == all.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::validate_covering;
    use crate::lattice::build_normal_graph;

    fn v(x: i32, y: i32) -> Vertex {
        Vertex::new(x, y)
    }

    fn square() -> LatticeGraph {
        build_normal_graph([v(0, 0), v(1, 0), v(0, 1), v(1, 1)]).unwrap().graph().clone()
    }

    #[test]
    fn unit_square_has_one_s_move() {
        let g = square();
        let m = validate_covering(&g, [edge(v(0, 0), v(1, 0)), edge(v(0, 1), v(1, 1))]).unwrap();
        let moves = find_moves(&g, &m);
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].kind, MoveKind::S);
        let flipped = apply_move(&m, &moves[0]).unwrap();
        assert!(flipped.contains(edge(v(0, 0), v(0, 1))));
        assert!(flipped.contains(edge(v(1, 0), v(1, 1))));
        assert_eq!(apply_move(&flipped, &moves[0].reverse()).unwrap(), m);
        assert_eq!(apply_move(&flipped, &moves[0]), Err(MoveError::InapplicableMove));
        assert_eq!(t_class(&g, &m).len(), 1);
        assert_eq!(static_sites(&g), vec![MoveSite::Square { corner: v(0, 0) }]);
        assert_eq!(move_graph_connected(&g), Ok(true));
    }

    #[test]
    fn t_move_pivots_impurity() {
        // a=(0,0), b=(1,1), c=(2,0), d=(1,0) plus (0,1),(2,1) to close up.
        let g = LatticeGraph::induced([v(0, 0), v(1, 0), v(2, 0), v(1, 1)]);
        let m = validate_covering(&g, [edge(v(0, 0), v(1, 1)), edge(v(1, 0), v(2, 0))]).unwrap();
        let moves = find_moves(&g, &m);
        assert_eq!(moves.len(), 1);
        let mv = moves[0];
        assert_eq!((mv.kind, mv.a, mv.b, mv.c, mv.d), (MoveKind::T, v(0, 0), v(1, 1), v(2, 0), v(1, 0)));
        let moved = apply_move(&m, &mv).unwrap();
        assert_eq!(moved.impurities(), vec![edge(v(1, 1), v(2, 0))]);
        assert_eq!(apply_move(&moved, &mv.reverse()).unwrap(), m);
        assert_eq!(mv.site(), mv.reverse().site());
        assert_eq!(t_class(&g, &m).len(), 2);
    }
}
