use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use diagdimer::commands;
use diagdimer::io::{CoveringJson, RegionJson};
use diagdimer_core::lattice::Region;
use diagdimer_core::oracle::enumerate_coverings;
use diagdimer_core::{build_region, Vertex};
use proptest::prelude::*;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diagdimer"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_region(dir: &Path, name: &str, r: &Region) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(&RegionJson::from(r)).unwrap()).unwrap();
    path
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Parses `"x1,y1 x2,y2 ..."`.
fn polyline_points(svg: &str) -> Vec<Vec<(i32, i32)>> {
    svg.lines()
        .filter_map(|l| l.trim().strip_prefix(r#"<polyline points=""#))
        .map(|rest| {
            rest.trim_end_matches("\"/>")
                .split(' ')
                .map(|xy| {
                    let (x, y) = xy.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect()
        })
        .collect()
}

#[test]
fn build_reports_graph_sizes() {
    let dir = TempDir::new().unwrap();
    let l = json(&run(&["build", s(&write_region(dir.path(), "l.json", &Region::l_shape()))]));
    assert_eq!(l["vertices"], 22);
    assert_eq!(l["d_star"], 2);
    assert_eq!(l["diagonal_edges"], 15);
    assert_eq!(l["diagonals"].as_array().unwrap().len(), 15);
    assert_eq!(l["e_star1"], serde_json::json!([[2, 4], [3, 3]]));
    assert_eq!(l["e_star2"], serde_json::json!([[3, 3], [4, 2]]));
    let strip = json(&run(&["build", s(&write_region(dir.path(), "s.json", &Region::strip(1)))]));
    assert_eq!(strip["d_star"], 1);
}

#[test]
fn bad_input_exits_with_validation_code() {
    let dir = TempDir::new().unwrap();
    let malformed = dir.path().join("bad.json");
    fs::write(&malformed, "{\"faces\": [").unwrap();
    let out = run(&["build", s(&malformed)]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "json");

    let bad_face = Region::new(vec![Vertex::new(0, 0)], Vertex::new(3, 1), Vertex::new(2, 2));
    let out = run(&["prob", s(&write_region(dir.path(), "face.json", &bad_face))]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "region");

    let out = run(&["build", s(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_enumeration_exits_with_size_code() {
    let dir = TempDir::new().unwrap();
    let out = run(&["enumerate", s(&write_region(dir.path(), "big.json", &Region::strip(12)))]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "too_large");
}

fn is_exact_number(s: &str) -> bool {
    let mut parts = s.splitn(2, '/');
    let int = |p: &str| {
        let p = p.strip_prefix('-').unwrap_or(p);
        !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit())
    };
    parts.next().is_some_and(int) && parts.next().is_none_or(int)
}

#[test]
fn prob_is_exact_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let path = write_region(dir.path(), "l.json", &Region::l_shape());
    let a = run(&["prob", s(&path)]);
    let b = run(&["prob", s(&path)]);
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(report["det_A"], "56");
    assert_eq!(report["total"], "328");
    assert_eq!(report["p"]["[3,3]"], "1");
    let rows = report["edge_probabilities"].as_array().unwrap();
    assert_eq!(rows.len(), 15);
    let at_corner: Vec<_> = rows
        .iter()
        .filter(|r| r["edge"].as_array().unwrap().iter().any(|p| p == &serde_json::json!([1, 3])))
        .collect();
    assert_eq!(at_corner.len(), 4);
    assert!(at_corner.iter().all(|r| r["probability"] == "2/41" && r["count"] == "16"));
    for r in rows {
        assert!(is_exact_number(r["count"].as_str().unwrap()));
        assert!(is_exact_number(r["probability"].as_str().unwrap()));
    }
    for v in report["p"].as_object().unwrap().values() {
        assert!(is_exact_number(v.as_str().unwrap()));
    }
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(!text.contains('.'), "no floating point in prob output");
}

#[test]
fn prob_totals_match_enumeration() {
    for n in 1..=3 {
        let region = Region::strip(n);
        let report = commands::prob_report(&region).unwrap();
        let t = build_region(&region).unwrap();
        assert_eq!(report.total, enumerate_coverings(&t.g).unwrap().len().to_string());
        let hist = commands::histogram(&region).unwrap();
        let counts: Vec<String> = hist.edges.iter().map(|r| r.count.to_string()).collect();
        let exact: Vec<String> = report.edge_probabilities.iter().map(|r| r.count.clone()).collect();
        assert_eq!(counts, exact);
    }
}

#[test]
fn render_unit_square() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sq.json");
    fs::write(&path, r#"{"dimers": [[[0,0],[1,0]], [[0,1],[1,1]]]}"#).unwrap();
    let out = run(&["render", s(&path)]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    let dimers = svg.split(r#"<g class="dimers""#).nth(1).unwrap().split("</g>").next().unwrap();
    assert_eq!(dimers.matches("<line").count(), 2);
    assert_eq!(run(&["render", s(&path)]).stdout, svg.as_bytes());
}

#[test]
fn render_rejects_invalid_covering() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"dimers": [[[0,0],[1,0]], [[0,0],[0,1]]]}"#).unwrap();
    assert_eq!(run(&["render", s(&path)]).status.code(), Some(2));
}

#[test]
fn render_slits_and_forests() {
    let dir = TempDir::new().unwrap();
    let t = build_region(&Region::l_shape()).unwrap();
    let m = enumerate_coverings(&t.g).unwrap().into_iter().find(|m| m.contains(t.e_star1)).unwrap();
    let path = dir.path().join("m.json");
    fs::write(&path, serde_json::to_string(&CoveringJson::new(&m)).unwrap()).unwrap();

    let svg = String::from_utf8(run(&["render", "--slits", s(&path)]).stdout).unwrap();
    // Frame for the L-region: x from 0, y up to 4, margin 2 half-units, 20 px each.
    let screen = |x2: i32, y2: i32| ((x2 + 2) * 20, (8 - y2 + 2) * 20);
    let (m1, m2) = (t.e_star1.midpoint(), t.e_star2.midpoint());
    let want = [screen(m1.x2, m1.y2), screen(m2.x2, m2.y2)];
    let c_star = polyline_points(&svg)
        .into_iter()
        .find(|pts| pts.contains(&want[0]))
        .expect("a curve through e*1");
    let ends = [c_star[0], *c_star.last().unwrap()];
    assert!(ends == want || ends == [want[1], want[0]], "{ends:?}");
    assert!(!svg.contains(r#"class="forests""#));

    let svg = String::from_utf8(run(&["render", "--forests", s(&path)]).stdout).unwrap();
    let primary = svg.split(r#"<g class="primary""#).nth(1).unwrap().lines().next().unwrap();
    let dual = svg.split(r#"<g class="dual""#).nth(1).unwrap().lines().next().unwrap();
    assert!(!primary.contains("dasharray"));
    assert!(dual.contains("stroke-dasharray"));
}

#[test]
fn enumerate_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = run(&["enumerate", s(&write_region(dir.path(), "s.json", &Region::strip(1)))]);
    let list: Vec<CoveringJson> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(list.len(), 12);
    let t = build_region(&Region::strip(1)).unwrap();
    for c in &list {
        let (g, m) = c.load().unwrap();
        assert_eq!(&*g, &*t.g);
        let again = CoveringJson::with_curves(&m, &diagdimer_core::slits::slit_curves(&g, &m));
        assert_eq!(&again, c);
        let curves = c.slit_curves.as_ref().unwrap();
        assert!(curves.iter().flatten().all(|p| p[0] % 2 != 0 || p[1] % 2 != 0));
        let moves = commands::moves_list(c).unwrap();
        assert_eq!(moves.impurities.len(), 1);
        assert!(!moves.moves.is_empty());
    }
}

#[test]
fn moves_list_for_unit_square() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sq.json");
    fs::write(&path, r#"{"dimers": [[[0,1],[1,1]], [[0,0],[1,0]]]}"#).unwrap();
    let v = json(&run(&["moves", "list", s(&path)]));
    assert_eq!(v["moves"].as_array().unwrap().len(), 1);
    assert_eq!(v["moves"][0]["kind"], "s");
    assert_eq!(v["moves"][0]["adds"], serde_json::json!([[[1, 0], [1, 1]], [[0, 0], [0, 1]]]));
}

#[test]
fn sample_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let region = write_region(dir.path(), "l.json", &Region::l_shape());
    let args = ["sample", "--seed", "7", "--steps", "20000", "--burn-in", "100", "--every", "5", "--chains", "3"];
    let a = run(&[&args[..], &[s(&region)]].concat());
    let b = run(&[&args[..], &[s(&region)]].concat());
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["kernel"], "metropolis");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["chains"].as_array().unwrap().len(), 3);
    assert_eq!(r["samples"], 3 * 4000);
    assert_eq!(r["total_steps"], 3 * 20100);
    assert_eq!(r["final_coverings"].as_array().unwrap().len(), 3);
    let counted: u64 = r["edges"].as_array().unwrap().iter().map(|e| e["count"].as_u64().unwrap()).sum();
    assert_eq!(counted, 3 * 4000);

    let lazy = json(&run(&[&args[..], &["--kernel", "lazy", s(&region)]].concat()));
    assert_eq!(lazy["kernel"], "lazy");

    let report = dir.path().join("report.json");
    fs::write(&report, &a.stdout).unwrap();
    let svg = run(&["render", "--chain", "2", s(&report)]);
    assert!(svg.status.success());
    assert_eq!(run(&["render", "--chain", "3", s(&report)]).status.code(), Some(2));
}

#[test]
fn sample_accepts_start_and_frames() {
    let dir = TempDir::new().unwrap();
    let region = write_region(dir.path(), "s.json", &Region::strip(2));
    let t = build_region(&Region::strip(2)).unwrap();
    let m0 = enumerate_coverings(&t.g).unwrap().remove(5);
    let start = dir.path().join("m0.json");
    fs::write(&start, serde_json::to_string(&CoveringJson::new(&m0)).unwrap()).unwrap();
    let frames = dir.path().join("frames");
    let out = run(&[
        "sample", "--seed", "1", "--steps", "100", "--every", "10", "--frames", s(&frames), "--frame-every", "2",
        s(&region), s(&start),
    ]);
    let r = json(&out);
    assert_eq!(r["samples"], 10);
    let mut names: Vec<_> = fs::read_dir(&frames).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 5);
    assert_eq!(names[0], "frame_000000.svg");

    let plain = run(&["sample", "--seed", "1", "--steps", "10", s(&region)]);
    let r0 = json(&plain);
    assert_eq!(r0["samples"], 10);

    // A covering of a different graph is rejected.
    let sq = dir.path().join("sq.json");
    fs::write(&sq, r#"{"dimers": [[[0,0],[1,0]], [[0,1],[1,1]]]}"#).unwrap();
    assert_eq!(run(&["sample", "--seed", "1", "--steps", "10", s(&region), s(&sq)]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--seed", "1", "--steps", "10", "--chains", "0", s(&region)]).status.code(), Some(2));
}

#[test]
fn default_start_is_a_covering_of_g() {
    for region in [Region::l_shape(), Region::strip(4)] {
        let t = build_region(&region).unwrap();
        let m = commands::initial_covering(&t).unwrap();
        assert!(m.contains(t.e_star1));
        assert_eq!(m.impurities(), vec![t.e_star1]);
    }
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let region = write_region(dir.path(), "l.json", &Region::l_shape());
    let target = dir.path().join("out.json");
    let out = run(&["prob", s(&region), "-o", s(&target)]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(fs::read(&target).unwrap(), run(&["prob", s(&region)]).stdout);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn region_json_round_trips(faces in proptest::collection::vec((-20i32..20, -20i32..20), 0..8), f in (-20i32..20, -20i32..20), v in (-20i32..20, -20i32..20)) {
        let r = Region::new(
            faces.into_iter().map(|(x, y)| Vertex::new(x, y)).collect(),
            Vertex::new(f.0, f.1),
            Vertex::new(v.0, v.1),
        );
        let text = serde_json::to_string(&RegionJson::from(&r)).unwrap();
        let back: RegionJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_region(), r);
    }

    #[test]
    fn covering_json_round_trips(n in 1u32..3, k in any::<prop::sample::Index>()) {
        let t = build_region(&Region::strip(n)).unwrap();
        let all = enumerate_coverings(&t.g).unwrap();
        let m = &all[k.index(all.len())];
        let text = serde_json::to_string(&CoveringJson::new(m)).unwrap();
        let back: CoveringJson = serde_json::from_str(&text).unwrap();
        let (_, m2) = back.load().unwrap();
        prop_assert_eq!(&m2, m);
    }
}
