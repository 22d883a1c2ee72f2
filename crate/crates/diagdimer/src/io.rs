//! JSON file formats. Points are `[x, y]` integer pairs; slit-curve points
//! are edge midpoints in doubled coordinates.

use std::fs;
use std::path::Path;

use diagdimer_core::lattice::{build_normal_graph, NormalGraph, Region};
use diagdimer_core::slits::SlitCurve;
use diagdimer_core::{validate_covering, DimerCovering, Edge, Midpoint, Vertex};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub type Point = [i32; 2];

pub fn point(v: Vertex) -> Point {
    [v.x, v.y]
}

pub fn vertex(p: Point) -> Vertex {
    Vertex::new(p[0], p[1])
}

pub fn edge_json(e: Edge) -> [Point; 2] {
    let (a, b) = e.endpoints();
    [point(a), point(b)]
}

pub fn edge_from_json(pair: [Point; 2]) -> Result<Edge, CliError> {
    let (a, b) = (vertex(pair[0]), vertex(pair[1]));
    Edge::new(a, b).ok_or_else(|| CliError::Invalid(format!("{a} and {b} are not adjacent")))
}

pub fn midpoint_json(m: Midpoint) -> Point {
    [m.x2, m.y2]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionJson {
    pub faces: Vec<Point>,
    pub f_star: Point,
    pub v_star: Point,
}

impl RegionJson {
    pub fn to_region(&self) -> Region {
        Region::new(self.faces.iter().copied().map(vertex).collect(), vertex(self.f_star), vertex(self.v_star))
    }
}

impl From<&Region> for RegionJson {
    fn from(r: &Region) -> Self {
        RegionJson {
            faces: r.faces.iter().copied().map(point).collect(),
            f_star: point(r.f_star),
            v_star: point(r.v_star),
        }
    }
}

/// A covering file. The graph is the subgraph of Γ induced by the covered
/// points. Closed slit-curves repeat their first point at the end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringJson {
    pub dimers: Vec<[Point; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slit_curves: Option<Vec<Vec<Point>>>,
}

impl CoveringJson {
    pub fn new(m: &DimerCovering) -> Self {
        CoveringJson { dimers: m.dimers().iter().copied().map(edge_json).collect(), slit_curves: None }
    }

    pub fn with_curves(m: &DimerCovering, curves: &[SlitCurve]) -> Self {
        let lists = curves
            .iter()
            .map(|c| {
                let mut pts: Vec<Point> = c.points.iter().copied().map(midpoint_json).collect();
                if c.closed {
                    pts.push(pts[0]);
                }
                pts
            })
            .collect();
        CoveringJson { slit_curves: Some(lists), ..CoveringJson::new(m) }
    }

    pub fn edges(&self) -> Result<Vec<Edge>, CliError> {
        self.dimers.iter().copied().map(edge_from_json).collect()
    }

    /// The induced graph on the covered points and the validated covering.
    pub fn load(&self) -> Result<(NormalGraph, DimerCovering), CliError> {
        let edges = self.edges()?;
        let g = build_normal_graph(edges.iter().flat_map(|e| {
            let (a, b) = e.endpoints();
            [a, b]
        }))?;
        let m = validate_covering(&g, edges)?;
        Ok((g, m))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_region(path: &Path) -> Result<Region, CliError> {
    Ok(read_json::<RegionJson>(path)?.to_region())
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}
