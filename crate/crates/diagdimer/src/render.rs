//! Deterministic SVG 1.1 output.
//!
//! All geometry is computed in doubled integer coordinates, so the output
//! contains integers only and depends on nothing but the input.

use std::fmt::Write;

use diagdimer_core::slits::{forests, slit_curves, SlitCurve, Tree};
use diagdimer_core::{DimerCovering, LatticeGraph, Midpoint, Vertex};

use crate::error::CliError;

/// Pixels per half lattice unit.
const SCALE: i32 = 20;
/// Blank border, in half units.
const MARGIN: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RenderOptions {
    pub slits: bool,
    pub forests: bool,
}

struct Frame {
    min_x2: i32,
    max_y2: i32,
    width: i32,
    height: i32,
}

impl Frame {
    fn new(g: &LatticeGraph) -> Self {
        let xs = g.vertices().iter().map(|v| v.x);
        let (min_x, max_x) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
        let ys = g.vertices().iter().map(|v| v.y);
        let (min_y, max_y) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
        Frame {
            min_x2: 2 * min_x,
            max_y2: 2 * max_y,
            width: (2 * (max_x - min_x) + 2 * MARGIN) * SCALE,
            height: (2 * (max_y - min_y) + 2 * MARGIN) * SCALE,
        }
    }

    /// Screen position of a doubled-coordinate point; y grows downwards.
    fn at(&self, x2: i32, y2: i32) -> (i32, i32) {
        ((x2 - self.min_x2 + MARGIN) * SCALE, (self.max_y2 - y2 + MARGIN) * SCALE)
    }

    fn vertex(&self, v: Vertex) -> (i32, i32) {
        self.at(2 * v.x, 2 * v.y)
    }

    fn mid(&self, m: Midpoint) -> (i32, i32) {
        self.at(m.x2, m.y2)
    }
}

fn line(out: &mut String, f: &Frame, a: Vertex, b: Vertex, attrs: &str) {
    let ((x1, y1), (x2, y2)) = (f.vertex(a), f.vertex(b));
    writeln!(out, r#"    <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{attrs}/>"#).unwrap();
}

fn tree(out: &mut String, f: &Frame, t: &Tree, class: &str) {
    writeln!(out, r#"    <g class="{class}">"#).unwrap();
    for b in &t.bonds {
        let (u, v) = b.endpoints();
        out.push_str("  ");
        line(out, f, u, v, "");
    }
    for &v in &t.vertices {
        let (x, y) = f.vertex(v);
        writeln!(out, r#"      <circle cx="{x}" cy="{y}" r="4"/>"#).unwrap();
    }
    out.push_str("    </g>\n");
}

fn curve(out: &mut String, f: &Frame, c: &SlitCurve) {
    let pts: Vec<String> = c
        .points
        .iter()
        .map(|&m| {
            let (x, y) = f.mid(m);
            format!("{x},{y}")
        })
        .collect();
    let tag = if c.closed { "polygon" } else { "polyline" };
    writeln!(out, r#"    <{tag} points="{}"/>"#, pts.join(" ")).unwrap();
}

/// Draws `m` on `g`: the graph in grey, dimers on top (impurities in red),
/// optionally the slit-curves and the two forests (primary solid, dual
/// dashed).
pub fn render_svg(g: &LatticeGraph, m: &DimerCovering, opts: RenderOptions) -> Result<String, CliError> {
    let f = Frame::new(g);
    let forest_pair = if opts.forests { Some(forests(g, m)?) } else { None };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = f.width,
        h = f.height
    )
    .unwrap();
    writeln!(out, r#"  <rect width="{}" height="{}" fill="white"/>"#, f.width, f.height).unwrap();

    out.push_str(r##"  <g class="graph" stroke="#c8c8c8" stroke-width="1">"##);
    out.push('\n');
    for e in g.edges() {
        let (a, b) = e.endpoints();
        line(&mut out, &f, a, b, "");
    }
    out.push_str("  </g>\n");

    if let Some(fp) = &forest_pair {
        out.push_str(r##"  <g class="forests" stroke-width="3" stroke-linecap="round">"##);
        out.push('\n');
        out.push_str(r##"   <g class="primary" stroke="#2b6cb0" fill="#2b6cb0">"##);
        out.push('\n');
        for t in &fp.primary {
            tree(&mut out, &f, t, "tree");
        }
        out.push_str("   </g>\n");
        out.push_str(r##"   <g class="dual" stroke="#c05621" fill="#c05621" stroke-dasharray="8 6">"##);
        out.push('\n');
        for t in &fp.dual {
            tree(&mut out, &f, t, "tree");
        }
        out.push_str("   </g>\n");
        out.push_str("  </g>\n");
    }

    out.push_str(r#"  <g class="dimers" stroke="black" stroke-width="6" stroke-linecap="round">"#);
    out.push('\n');
    for e in m.dimers() {
        let (a, b) = e.endpoints();
        let attrs = if e.is_diagonal() { r##" class="impurity" stroke="#d62728""## } else { "" };
        line(&mut out, &f, a, b, attrs);
    }
    out.push_str("  </g>\n");

    if opts.slits {
        out.push_str(r##"  <g class="slits" stroke="#2ca02c" stroke-width="3" fill="none">"##);
        out.push('\n');
        for c in slit_curves(g, m) {
            curve(&mut out, &f, &c);
        }
        out.push_str("  </g>\n");
    }

    out.push_str(r#"  <g class="vertices" stroke="black" stroke-width="1">"#);
    out.push('\n');
    for &v in g.vertices() {
        let (x, y) = f.vertex(v);
        let fill = if v.is_white() { "white" } else { "black" };
        writeln!(out, r#"    <circle cx="{x}" cy="{y}" r="5" fill="{fill}"/>"#).unwrap();
    }
    out.push_str("  </g>\n</svg>\n");
    Ok(out)
}
