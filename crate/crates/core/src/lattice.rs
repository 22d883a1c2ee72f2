//! The dual square-octagon lattice Γ, its sublattices, and finite subgraphs.
//!
//! Γ has vertex set ℤ². A vertex is white when `x + y` is even and black
//! otherwise. Unit edges join points at distance one; diagonal edges join two
//! white points differing by `(±1, ±1)`. White points split into `W0`
//! (`2ℤ × 2ℤ`) and `W1` (`W0 + (1, 1)`), which carry the square sublattices
//! Λ and Λ⊥ with spacing two.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use thiserror::Error;

/// A point of ℤ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

/// Colour class of a lattice point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexClass {
    WhiteW0,
    WhiteW1,
    Black,
}

impl Vertex {
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    pub const fn offset(self, dx: i32, dy: i32) -> Self {
        Vertex::new(self.x + dx, self.y + dy)
    }

    pub fn is_white(self) -> bool {
        (self.x + self.y).rem_euclid(2) == 0
    }

    pub fn is_black(self) -> bool {
        !self.is_white()
    }

    pub fn class(self) -> VertexClass {
        classify_vertex(self)
    }

    /// The four unit neighbours, in counter-clockwise order starting east.
    pub fn unit_neighbors(self) -> [Vertex; 4] {
        [
            self.offset(1, 0),
            self.offset(0, 1),
            self.offset(-1, 0),
            self.offset(0, -1),
        ]
    }

    /// The four diagonal points, in counter-clockwise order starting north-east.
    /// Only meaningful as Γ-neighbours when `self` is white.
    pub fn diagonal_points(self) -> [Vertex; 4] {
        [
            self.offset(1, 1),
            self.offset(-1, 1),
            self.offset(-1, -1),
            self.offset(1, -1),
        ]
    }

    /// Midpoint of the segment to `other`, in doubled coordinates.
    pub fn midpoint(self, other: Vertex) -> Midpoint {
        Midpoint::new(self.x + other.x, self.y + other.y)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn classify_vertex(v: Vertex) -> VertexClass {
    if !v.is_white() {
        VertexClass::Black
    } else if v.x.rem_euclid(2) == 0 {
        VertexClass::WhiteW0
    } else {
        VertexClass::WhiteW1
    }
}

/// All Γ-neighbours of `v`, sorted: 4 for a black point, 8 for a white one.
pub fn gamma_neighbors(v: Vertex) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = v.unit_neighbors().to_vec();
    if v.is_white() {
        out.extend_from_slice(&v.diagonal_points());
    }
    out.sort_unstable();
    out
}

/// A point with half-integer coordinates, stored doubled so that all
/// geometry stays in integers. Edge midpoints of Γ are exactly the doubled
/// points with at least one odd coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Midpoint {
    pub x2: i32,
    pub y2: i32,
}

impl Midpoint {
    pub const fn new(x2: i32, y2: i32) -> Self {
        Midpoint { x2, y2 }
    }

    /// True for the midpoint of a diagonal edge (both doubled coordinates odd).
    pub fn is_diagonal(self) -> bool {
        self.x2.rem_euclid(2) == 1 && self.y2.rem_euclid(2) == 1
    }

    pub fn as_f64(self) -> (f64, f64) {
        (f64::from(self.x2) / 2.0, f64::from(self.y2) / 2.0)
    }
}

impl fmt::Display for Midpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}/2, {}/2>", self.x2, self.y2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Unit,
    Diagonal,
}

/// An unordered edge of Γ. Endpoints are stored sorted so that derived
/// ordering is lexicographic on the endpoint pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: Vertex,
    b: Vertex,
}

impl Edge {
    /// Returns `None` unless `u` and `v` are adjacent in Γ.
    pub fn new(u: Vertex, v: Vertex) -> Option<Edge> {
        let (dx, dy) = ((u.x - v.x).abs(), (u.y - v.y).abs());
        let adjacent = matches!((dx, dy), (1, 0) | (0, 1))
            || (dx == 1 && dy == 1 && u.is_white() && v.is_white());
        if !adjacent {
            return None;
        }
        Some(if u < v { Edge { a: u, b: v } } else { Edge { a: v, b: u } })
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.a, self.b)
    }

    pub fn kind(self) -> EdgeKind {
        if self.a.x != self.b.x && self.a.y != self.b.y {
            EdgeKind::Diagonal
        } else {
            EdgeKind::Unit
        }
    }

    pub fn is_diagonal(self) -> bool {
        self.kind() == EdgeKind::Diagonal
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if self.a == v {
            Some(self.b)
        } else if self.b == v {
            Some(self.a)
        } else {
            None
        }
    }

    pub fn midpoint(self) -> Midpoint {
        self.a.midpoint(self.b)
    }

    /// For a diagonal edge, its `W1` endpoint (the endpoint lying on Λ⊥).
    pub fn w1_endpoint(self) -> Option<Vertex> {
        if !self.is_diagonal() {
            return None;
        }
        [self.a, self.b]
            .into_iter()
            .find(|v| v.class() == VertexClass::WhiteW1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

/// An edge of Λ or Λ⊥: two same-class white points at distance two along an
/// axis. Its midpoint is a black point of Γ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bond {
    a: Vertex,
    b: Vertex,
}

impl Bond {
    pub fn new(u: Vertex, v: Vertex) -> Option<Bond> {
        let (dx, dy) = ((u.x - v.x).abs(), (u.y - v.y).abs());
        if !matches!((dx, dy), (2, 0) | (0, 2)) || !u.is_white() || u.class() != v.class() {
            return None;
        }
        Some(if u < v { Bond { a: u, b: v } } else { Bond { a: v, b: u } })
    }

    /// The bond through black point `b` whose endpoints lie in `class`.
    pub fn through(black: Vertex, class: VertexClass) -> Option<Bond> {
        if !black.is_black() || class == VertexClass::Black {
            return None;
        }
        let [e, n, w, s] = black.unit_neighbors();
        if e.class() == class {
            Bond::new(w, e)
        } else {
            Bond::new(s, n)
        }
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.a, self.b)
    }

    /// The black point halfway along the bond.
    pub fn crossing(self) -> Vertex {
        Vertex::new((self.a.x + self.b.x) / 2, (self.a.y + self.b.y) / 2)
    }

    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if self.a == v {
            Some(self.b)
        } else if self.b == v {
            Some(self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex set is empty")]
    Empty,
    #[error("graph is not connected")]
    NotConnected,
    #[error("complement of the graph is not connected (the vertex set has a hole)")]
    ComplementNotConnected,
}

/// A finite subgraph of Γ with indexed vertices.
///
/// Vertices are kept sorted; `index_of` maps back to positions and
/// `neighbors` lists adjacent indices in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeGraph {
    vertices: Vec<Vertex>,
    index: BTreeMap<Vertex, usize>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl LatticeGraph {
    /// Subgraph of Γ induced by `vertices` (unit and diagonal edges).
    pub fn induced<I: IntoIterator<Item = Vertex>>(vertices: I) -> Self {
        Self::build(vertices, true)
    }

    /// Subgraph induced by `vertices` keeping unit edges only. This is the
    /// bipartite square-lattice part.
    pub fn unit_induced<I: IntoIterator<Item = Vertex>>(vertices: I) -> Self {
        Self::build(vertices, false)
    }

    fn build<I: IntoIterator<Item = Vertex>>(vertices: I, diagonals: bool) -> Self {
        let set: BTreeSet<Vertex> = vertices.into_iter().collect();
        let vertices: Vec<Vertex> = set.into_iter().collect();
        let index: BTreeMap<Vertex, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for w in gamma_neighbors(v) {
                let Some(&j) = index.get(&w) else { continue };
                let e = Edge::new(v, w).expect("gamma neighbours are adjacent");
                if e.is_diagonal() && !diagonals {
                    continue;
                }
                adjacency[i].push(j);
                if i < j {
                    edges.push(e);
                }
            }
            adjacency[i].sort_unstable();
        }
        edges.sort_unstable();
        LatticeGraph { vertices, index, adjacency, edges }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index.contains_key(&v)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.vertices[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn white_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_white()).count()
    }

    pub fn black_count(&self) -> usize {
        self.len() - self.white_count()
    }

    /// True when the graph has at least one vertex and is connected.
    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            for &j in &self.adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    queue.push_back(j);
                }
            }
        }
        reached == self.len()
    }

    /// True when Γ minus this vertex set is connected.
    pub fn complement_connected(&self) -> bool {
        let Some((lo, hi)) = bounding_box(self.vertices.iter().copied()) else {
            return true;
        };
        let (x0, y0, x1, y1) = (lo.x - 1, lo.y - 1, hi.x + 1, hi.y + 1);
        let inside = |v: Vertex| v.x >= x0 && v.x <= x1 && v.y >= y0 && v.y <= y1;
        // The padded frame lies in the complement and is connected, so the
        // complement is connected iff every box point outside the set reaches it.
        let start = Vertex::new(x0, y0);
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in gamma_neighbors(v) {
                if inside(w) && !self.contains(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        let box_points = ((x1 - x0 + 1) as usize) * ((y1 - y0 + 1) as usize);
        seen.len() + self.len() == box_points
    }
}

pub(crate) fn bounding_box<I: IntoIterator<Item = Vertex>>(points: I) -> Option<(Vertex, Vertex)> {
    points.into_iter().fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((
            Vertex::new(lo.x.min(v.x), lo.y.min(v.y)),
            Vertex::new(hi.x.max(v.x), hi.y.max(v.y)),
        )),
    })
}

/// A finite, induced, simply connected subgraph of Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalGraph {
    graph: LatticeGraph,
    white_count: usize,
    black_count: usize,
}

impl NormalGraph {
    pub fn white_count(&self) -> usize {
        self.white_count
    }

    pub fn black_count(&self) -> usize {
        self.black_count
    }

    pub fn graph(&self) -> &LatticeGraph {
        &self.graph
    }
}

impl Deref for NormalGraph {
    type Target = LatticeGraph;

    fn deref(&self) -> &LatticeGraph {
        &self.graph
    }
}

pub fn build_normal_graph<I: IntoIterator<Item = Vertex>>(vertices: I) -> Result<NormalGraph, GraphError> {
    let graph = LatticeGraph::induced(vertices);
    if graph.is_empty() {
        return Err(GraphError::Empty);
    }
    if !graph.is_connected() {
        return Err(GraphError::NotConnected);
    }
    if !graph.complement_connected() {
        return Err(GraphError::ComplementNotConnected);
    }
    let white_count = graph.white_count();
    let black_count = graph.len() - white_count;
    Ok(NormalGraph { graph, white_count, black_count })
}

/// All diagonal edges of `g`, sorted by `W1` endpoint and then by edge.
pub fn diagonal_edges(g: &LatticeGraph) -> Vec<Edge> {
    let mut out: Vec<Edge> = g.edges().iter().copied().filter(|e| e.is_diagonal()).collect();
    out.sort_unstable_by_key(|e| (e.w1_endpoint(), *e));
    out
}

/// The polyomino of faces of `H` together with the distinguished points
/// `f*` (a `W1` point outside the faces) and `v*` (a `W0` corner of `f*`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub faces: Vec<Vertex>,
    pub f_star: Vertex,
    pub v_star: Vertex,
}

impl Region {
    pub fn new(faces: Vec<Vertex>, f_star: Vertex, v_star: Vertex) -> Self {
        Region { faces, f_star, v_star }
    }

    /// The horizontal strip of `n` unit squares of Λ with `f*` just past the
    /// right end and `v*` its upper-left corner.
    pub fn strip(n: u32) -> Self {
        let n = n as i32;
        let faces = (0..n).map(|j| Vertex::new(2 * j + 1, 1)).collect();
        Region::new(faces, Vertex::new(2 * n + 1, 1), Vertex::new(2 * n, 2))
    }

    /// Three faces in an L, with `f*` filling the missing corner.
    pub fn l_shape() -> Self {
        Region::new(
            vec![Vertex::new(1, 1), Vertex::new(3, 1), Vertex::new(1, 3)],
            Vertex::new(3, 3),
            Vertex::new(2, 4),
        )
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RegionError {
    #[error("region has no faces")]
    NoFaces,
    #[error("face {0} is not a W1 point")]
    FaceNotW1(Vertex),
    #[error("face {0} is listed twice")]
    DuplicateFace(Vertex),
    #[error("faces do not form a simply connected polyomino")]
    FacesNotSimplyConnected,
    #[error("invalid f*: {0}")]
    InvalidFStar(&'static str),
    #[error("invalid v*: {0}")]
    InvalidVStar(&'static str),
    #[error("derived graph G is not normal: {0}")]
    Graph(#[from] GraphError),
}

/// The primal graph `H` on `W0`: all corners and sides of the faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalGraph {
    pub vertices: Vec<Vertex>,
    pub bonds: Vec<Bond>,
}

/// An edge of `H⊥`. Every edge of `H` has exactly one dual edge, identified
/// by the black point where the two cross. Boundary edges of `H` dualise to
/// edges running to `f*`, which stands in for the outer face; only those
/// whose far side really is the lattice point `f*` are lattice edges
/// (the `l`-edges).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualEdge {
    pub crossing: Vertex,
    pub ends: (Vertex, Vertex),
    pub lattice: bool,
}

impl DualEdge {
    pub fn other(&self, v: Vertex) -> Option<Vertex> {
        if self.ends.0 == v {
            Some(self.ends.1)
        } else if self.ends.1 == v {
            Some(self.ends.0)
        } else {
            None
        }
    }

    pub fn touches(&self, v: Vertex) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }
}

/// The dual graph `H⊥` on `faces ∪ {f*}` (a multigraph at `f*`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub f_star: Vertex,
    pub faces: Vec<Vertex>,
    pub edges: Vec<DualEdge>,
    pub d_star: usize,
    pub l_edges: Vec<DualEdge>,
}

impl DualGraph {
    /// `faces ∪ {f*}`, sorted.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v = self.faces.clone();
        v.push(self.f_star);
        v.sort_unstable();
        v
    }
}

/// Everything derived from a [`Region`]: `H`, `H⊥`, the balanced bipartite
/// graph `N`, and the normal graph `G = N + {f*, v*}`.
#[derive(Clone, Debug)]
pub struct TemperleyTriple {
    pub region: Region,
    pub h: PrimalGraph,
    pub h_perp: DualGraph,
    pub n: LatticeGraph,
    pub g: NormalGraph,
    /// `{f*, v*}`.
    pub e_star1: Edge,
    /// The other diagonal at `f*` on the boundary of `G`.
    pub e_star2: Edge,
}

impl TemperleyTriple {
    pub fn f_star(&self) -> Vertex {
        self.region.f_star
    }

    pub fn v_star(&self) -> Vertex {
        self.region.v_star
    }

    pub fn d_star(&self) -> usize {
        self.h_perp.d_star
    }
}

/// Λ⊥-neighbours (spacing two) of a point.
fn sublattice_neighbors(v: Vertex) -> [Vertex; 4] {
    [v.offset(2, 0), v.offset(0, 2), v.offset(-2, 0), v.offset(0, -2)]
}

/// Connected and hole-free as a set of cells on a spacing-two lattice.
fn cells_simply_connected(cells: &BTreeSet<Vertex>) -> bool {
    let Some(&first) = cells.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(v) = queue.pop_front() {
        for w in sublattice_neighbors(v) {
            if cells.contains(&w) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    if seen.len() != cells.len() {
        return false;
    }
    let (lo, hi) = bounding_box(cells.iter().copied()).expect("nonempty");
    let (x0, y0, x1, y1) = (lo.x - 2, lo.y - 2, hi.x + 2, hi.y + 2);
    let start = Vertex::new(x0, y0);
    let mut outside = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for w in sublattice_neighbors(v) {
            let in_box = w.x >= x0 && w.x <= x1 && w.y >= y0 && w.y <= y1;
            if in_box && !cells.contains(&w) && outside.insert(w) {
                queue.push_back(w);
            }
        }
    }
    let box_cells = (((x1 - x0) / 2 + 1) * ((y1 - y0) / 2 + 1)) as usize;
    outside.len() + cells.len() == box_cells
}

/// Black points flanking the diagonal `{u, v}` (the two blacks adjacent to both).
pub(crate) fn flanking_blacks(u: Vertex, v: Vertex) -> [Vertex; 2] {
    [Vertex::new(u.x, v.y), Vertex::new(v.x, u.y)]
}

pub fn build_region(region: &Region) -> Result<TemperleyTriple, RegionError> {
    if region.faces.is_empty() {
        return Err(RegionError::NoFaces);
    }
    let mut faces = BTreeSet::new();
    for &f in &region.faces {
        if f.class() != VertexClass::WhiteW1 {
            return Err(RegionError::FaceNotW1(f));
        }
        if !faces.insert(f) {
            return Err(RegionError::DuplicateFace(f));
        }
    }
    if !cells_simply_connected(&faces) {
        return Err(RegionError::FacesNotSimplyConnected);
    }

    let f_star = region.f_star;
    if f_star.class() != VertexClass::WhiteW1 {
        return Err(RegionError::InvalidFStar("not a W1 point"));
    }
    if faces.contains(&f_star) {
        return Err(RegionError::InvalidFStar("coincides with a face"));
    }
    let d_star = sublattice_neighbors(f_star)
        .iter()
        .filter(|w| faces.contains(w))
        .count();
    if !(1..=3).contains(&d_star) {
        return Err(RegionError::InvalidFStar("must be Λ⊥-adjacent to between one and three faces"));
    }
    let mut with_f_star = faces.clone();
    with_f_star.insert(f_star);
    if !cells_simply_connected(&with_f_star) {
        return Err(RegionError::InvalidFStar("faces together with f* are not simply connected"));
    }

    // H: corners and sides of every face.
    let mut h_vertices = BTreeSet::new();
    let mut bonds = BTreeSet::new();
    for &f in &faces {
        let corners = f.diagonal_points();
        h_vertices.extend(corners);
        for k in 0..4 {
            bonds.insert(Bond::new(corners[k], corners[(k + 1) % 4]).expect("face side"));
        }
    }

    // H⊥: one dual edge per side.
    let mut dual_edges = Vec::new();
    for bond in &bonds {
        let m = bond.crossing();
        let across = Bond::through(m, VertexClass::WhiteW1).expect("black midpoint");
        let (p, q) = across.endpoints();
        let edge = match (faces.contains(&p), faces.contains(&q)) {
            (true, true) => DualEdge { crossing: m, ends: (p, q), lattice: true },
            (true, false) => DualEdge { crossing: m, ends: (p, f_star), lattice: q == f_star },
            (false, true) => DualEdge { crossing: m, ends: (q, f_star), lattice: p == f_star },
            (false, false) => unreachable!("every side bounds a face"),
        };
        dual_edges.push(edge);
    }
    let l_edges: Vec<DualEdge> = dual_edges
        .iter()
        .copied()
        .filter(|e| e.lattice && e.touches(f_star))
        .collect();
    debug_assert_eq!(l_edges.len(), d_star);

    let v_star = region.v_star;
    if v_star.class() != VertexClass::WhiteW0 {
        return Err(RegionError::InvalidVStar("not a W0 point"));
    }
    if !h_vertices.contains(&v_star) {
        return Err(RegionError::InvalidVStar("not a vertex of H"));
    }
    if (v_star.x - f_star.x).abs() != 1 || (v_star.y - f_star.y).abs() != 1 {
        return Err(RegionError::InvalidVStar("not adjacent to f* in Γ"));
    }
    let midpoints: BTreeSet<Vertex> = bonds.iter().map(|b| b.crossing()).collect();
    let on_boundary = |w: Vertex| {
        flanking_blacks(f_star, w)
            .iter()
            .filter(|b| midpoints.contains(b))
            .count()
            == 1
    };
    if !on_boundary(v_star) {
        return Err(RegionError::InvalidVStar("{f*, v*} is not a boundary diagonal"));
    }

    let mut n_vertices: Vec<Vertex> = h_vertices.iter().copied().filter(|&v| v != v_star).collect();
    n_vertices.extend(faces.iter().copied());
    n_vertices.extend(midpoints.iter().copied());
    let n = LatticeGraph::unit_induced(n_vertices.iter().copied());
    debug_assert_eq!(n.white_count(), n.black_count());

    let g = build_normal_graph(n_vertices.iter().copied().chain([f_star, v_star]))?;

    let f_star_diagonals: Vec<Vertex> = f_star
        .diagonal_points()
        .into_iter()
        .filter(|&w| g.contains(w))
        .collect();
    if f_star_diagonals.len() != d_star + 1 {
        return Err(RegionError::InvalidFStar("f* does not carry d*+1 diagonal edges in G"));
    }
    let boundary: Vec<Vertex> = f_star_diagonals
        .iter()
        .copied()
        .filter(|&w| w != v_star && on_boundary(w))
        .collect();
    let [other] = boundary[..] else {
        return Err(RegionError::InvalidFStar("expected exactly two boundary diagonals at f*"));
    };

    Ok(TemperleyTriple {
        region: Region::new(faces.iter().copied().collect(), f_star, v_star),
        h: PrimalGraph {
            vertices: h_vertices.into_iter().collect(),
            bonds: bonds.into_iter().collect(),
        },
        h_perp: DualGraph {
            f_star,
            faces: faces.into_iter().collect(),
            edges: dual_edges,
            d_star,
            l_edges,
        },
        n,
        g,
        e_star1: Edge::new(f_star, v_star).expect("diagonal"),
        e_star2: Edge::new(f_star, other).expect("diagonal"),
    })
}
