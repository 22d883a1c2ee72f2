#![allow(dead_code)]

use diagdimer_core::lattice::{build_normal_graph, build_region, NormalGraph, Region, TemperleyTriple};
use diagdimer_core::{validate_covering, DimerCovering, Edge, Vertex};

pub fn v(x: i32, y: i32) -> Vertex {
    Vertex::new(x, y)
}

pub fn e(a: (i32, i32), b: (i32, i32)) -> Edge {
    Edge::new(v(a.0, a.1), v(b.0, b.1)).expect("adjacent")
}

pub fn l_shape() -> TemperleyTriple {
    build_region(&Region::l_shape()).unwrap()
}

pub fn strip(n: u32) -> TemperleyTriple {
    build_region(&Region::strip(n)).unwrap()
}

/// Grows a polyomino of faces from `(1, 1)` by the given steps, then tries
/// every `(f*, v*)` choice and returns the `pick`-th valid region.
pub fn random_region(steps: &[u8], pick: usize) -> Option<TemperleyTriple> {
    let mut faces = vec![v(1, 1)];
    for &s in steps {
        let base = faces[(s as usize / 4) % faces.len()];
        let (dx, dy) = [(2, 0), (0, 2), (-2, 0), (0, -2)][s as usize % 4];
        let next = base.offset(dx, dy);
        if !faces.contains(&next) {
            faces.push(next);
        }
    }
    let mut candidates = Vec::new();
    for f in &faces {
        for (dx, dy) in [(2, 0), (0, 2), (-2, 0), (0, -2)] {
            let f_star = f.offset(dx, dy);
            if faces.contains(&f_star) {
                continue;
            }
            for v_star in f_star.diagonal_points() {
                let region = Region::new(faces.clone(), f_star, v_star);
                if let Ok(t) = build_region(&region) {
                    if !candidates.iter().any(|c: &TemperleyTriple| c.region == t.region) {
                        candidates.push(t);
                    }
                }
            }
        }
    }
    if candidates.is_empty() {
        return None;
    }
    let k = pick % candidates.len();
    Some(candidates.swap_remove(k))
}

/// The graph `{(x, y) : 0 ≤ x+y ≤ 6, 0 ≤ x−y ≤ 8}` with a fixed covering
/// carrying four impurities.
pub fn four_impurity_example() -> (NormalGraph, DimerCovering) {
    let mut points = Vec::new();
    for x in -5..=8 {
        for y in -5..=8 {
            if (0..=6).contains(&(x + y)) && (0..=8).contains(&(x - y)) {
                points.push(v(x, y));
            }
        }
    }
    let g = build_normal_graph(points).unwrap();
    let dimers = [
        e((0, 0), (1, 1)),
        e((3, 3), (4, 2)),
        e((5, -1), (4, -2)),
        e((4, -4), (5, -3)),
        e((1, 0), (2, 0)),
        e((4, 0), (4, -1)),
        e((5, 0), (6, 0)),
        e((2, 1), (2, 2)),
        e((3, 1), (3, 2)),
        e((4, 1), (5, 1)),
        e((2, -1), (1, -1)),
        e((3, 0), (3, -1)),
        e((6, -1), (7, -1)),
        e((6, -2), (5, -2)),
        e((3, -3), (4, -3)),
        e((2, -2), (3, -2)),
    ];
    let m = validate_covering(&g, dimers).unwrap();
    (g, m)
}
