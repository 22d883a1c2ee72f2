//! The work behind each subcommand, separated from argument parsing so
//! that it can be tested directly.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use diagdimer_core::kirchhoff::solve;
use diagdimer_core::lattice::{diagonal_edges, Region};
use diagdimer_core::moves::find_moves;
use diagdimer_core::oracle::{enumerate_coverings, histogram_of};
use diagdimer_core::sampler::{run_stream, ChainConfig, Kernel, SampleReport, RNG_ALGORITHM};
use diagdimer_core::slits::slit_curves;
use diagdimer_core::temperley::{class_bijection, host_graph, lift, rooted_from_crossings, Host};
use diagdimer_core::{build_region, validate_covering, DimerCovering, LatticeGraph, MoveKind, TemperleyTriple};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::io::{edge_json, point, read_json, CoveringJson, Point};
use crate::render::{render_svg, RenderOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildSummary {
    pub vertices: usize,
    pub white: usize,
    pub black: usize,
    pub edges: usize,
    pub unit_edges: usize,
    pub diagonal_edges: usize,
    pub d_star: usize,
    pub f_star: Point,
    pub v_star: Point,
    pub e_star1: [Point; 2],
    pub e_star2: [Point; 2],
    pub diagonals: Vec<[Point; 2]>,
    pub h: Counts,
    pub h_perp: Counts,
}

pub fn build_summary(region: &Region) -> Result<BuildSummary, CliError> {
    let t = build_region(region)?;
    let g: &LatticeGraph = &t.g;
    let diagonals = diagonal_edges(g);
    Ok(BuildSummary {
        vertices: g.len(),
        white: t.g.white_count(),
        black: t.g.black_count(),
        edges: g.edges().len(),
        unit_edges: g.edges().len() - diagonals.len(),
        diagonal_edges: diagonals.len(),
        d_star: t.d_star(),
        f_star: point(t.f_star()),
        v_star: point(t.v_star()),
        e_star1: edge_json(t.e_star1),
        e_star2: edge_json(t.e_star2),
        diagonals: diagonals.into_iter().map(edge_json).collect(),
        h: Counts { vertices: t.h.vertices.len(), edges: t.h.bonds.len() },
        h_perp: Counts { vertices: t.h_perp.faces.len() + 1, edges: t.h_perp.edges.len() },
    })
}

/// Every covering of `G`, with its slit-curves.
pub fn enumerate(region: &Region) -> Result<Vec<CoveringJson>, CliError> {
    let t = build_region(region)?;
    let all = enumerate_coverings(&t.g)?;
    Ok(all.iter().map(|m| CoveringJson::with_curves(m, &slit_curves(&t.g, m))).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCount {
    pub edge: [Point; 2],
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub coverings: usize,
    /// One row per diagonal edge of `G`, including those never occupied.
    pub edges: Vec<EdgeCount>,
}

pub fn histogram(region: &Region) -> Result<Histogram, CliError> {
    let t = build_region(region)?;
    let all = enumerate_coverings(&t.g)?;
    let counts = histogram_of(&all);
    let edges = diagonal_edges(&t.g)
        .into_iter()
        .map(|e| EdgeCount { edge: edge_json(e), count: counts.get(&e).copied().unwrap_or(0) })
        .collect();
    Ok(Histogram { coverings: all.len(), edges })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeProbability {
    pub edge: [Point; 2],
    pub count: String,
    pub probability: String,
}

/// Exact report; every number is a decimal integer or `num/den` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbReport {
    #[serde(rename = "det_A")]
    pub det_a: String,
    pub p: BTreeMap<String, String>,
    pub normaliser: String,
    pub total: String,
    pub edge_probabilities: Vec<EdgeProbability>,
}

fn key(v: diagdimer_core::Vertex) -> String {
    format!("[{},{}]", v.x, v.y)
}

pub fn prob_report(region: &Region) -> Result<ProbReport, CliError> {
    let t = build_region(region)?;
    let s = solve(&t)?;
    let edge_probabilities = diagonal_edges(&t.g)
        .into_iter()
        .map(|e| {
            Ok(EdgeProbability {
                edge: edge_json(e),
                count: s.count(e)?.to_string(),
                probability: s.probability(e)?.to_string(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(ProbReport {
        det_a: s.det.to_string(),
        p: s.p.iter().map(|(&v, q)| (key(v), q.to_string())).collect(),
        normaliser: s.normaliser().to_string(),
        total: s.total().to_string(),
        edge_probabilities,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveJson {
    pub kind: String,
    pub removes: [[Point; 2]; 2],
    pub adds: [[Point; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveList {
    pub impurities: Vec<[Point; 2]>,
    pub moves: Vec<MoveJson>,
}

pub fn moves_list(covering: &CoveringJson) -> Result<MoveList, CliError> {
    let (g, m) = covering.load()?;
    let moves = find_moves(&g, &m)
        .into_iter()
        .map(|mv| MoveJson {
            kind: match mv.kind {
                MoveKind::S => "s".into(),
                MoveKind::T => "t".into(),
            },
            removes: mv.removes().map(edge_json),
            adds: mv.adds().map(edge_json),
        })
        .collect();
    Ok(MoveList { impurities: m.impurities().into_iter().map(edge_json).collect(), moves })
}

/// A covering of `G` built from a breadth-first spanning tree of `H`.
pub fn initial_covering(t: &TemperleyTriple) -> Result<DimerCovering, CliError> {
    let (small, vertices, crossings) = host_graph(t, Host::H);
    let root = vertices.iter().position(|&v| v == t.v_star()).expect("v* is a vertex of H");
    let mut adjacent = vec![Vec::new(); small.vertex_count];
    for (k, &(u, v)) in small.edges.iter().enumerate() {
        adjacent[u].push((v, k));
        adjacent[v].push((u, k));
    }
    let mut seen = vec![false; small.vertex_count];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut chosen = BTreeSet::new();
    while let Some(x) = queue.pop_front() {
        for &(y, k) in &adjacent[x] {
            if !seen[y] {
                seen[y] = true;
                chosen.insert(crossings[k]);
                queue.push_back(y);
            }
        }
    }
    let tree = rooted_from_crossings(t, Host::H, &chosen)?;
    Ok(lift(t, &tree)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleArgs {
    pub seed: u64,
    pub steps: u64,
    pub burn_in: u64,
    pub every: u64,
    pub chains: u64,
    pub kernel: Kernel,
    /// Directory for SVG snapshots of chain 0.
    pub frames: Option<PathBuf>,
    /// Write a frame at every `frame_every`-th sample.
    pub frame_every: u64,
}

impl SampleArgs {
    pub fn new(seed: u64, steps: u64) -> Self {
        SampleArgs { seed, steps, burn_in: 0, every: 1, chains: 1, kernel: Kernel::default(), frames: None, frame_every: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainId {
    pub seed: u64,
    pub stream: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeFrequency {
    pub edge: [Point; 2],
    pub count: u64,
    pub frequency: f64,
    pub exact: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReportJson {
    pub rng: String,
    pub kernel: String,
    pub seed: u64,
    pub chains: Vec<ChainId>,
    pub burn_in: u64,
    pub steps: u64,
    pub every: u64,
    pub total_steps: u64,
    pub accepted: u64,
    pub acceptance_rate: f64,
    pub samples: u64,
    pub edges: Vec<EdgeFrequency>,
    pub final_coverings: Vec<CoveringJson>,
}

fn report_json(t: &TemperleyTriple, args: &SampleArgs, r: &SampleReport) -> Result<SampleReportJson, CliError> {
    let s = solve(t)?;
    let edges = diagonal_edges(&t.g)
        .into_iter()
        .map(|e| {
            Ok(EdgeFrequency {
                edge: edge_json(e),
                count: r.edge_counts.get(&e).copied().unwrap_or(0),
                frequency: r.frequency(e),
                exact: s.probability(e)?.to_string(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(SampleReportJson {
        rng: RNG_ALGORITHM.into(),
        kernel: r.kernel.name().into(),
        seed: args.seed,
        chains: r.chains.iter().map(|&(seed, stream)| ChainId { seed, stream }).collect(),
        burn_in: args.burn_in,
        steps: args.steps,
        every: args.every,
        total_steps: r.steps,
        accepted: r.accepted,
        acceptance_rate: r.acceptance_rate(),
        samples: r.samples,
        edges,
        final_coverings: r.final_coverings.iter().map(CoveringJson::new).collect(),
    })
}

/// Runs `args.chains` independent chains on separate threads (stream `k`
/// for chain `k`) and merges their reports in stream order.
pub fn sample(region: &Region, m0: Option<&CoveringJson>, args: &SampleArgs) -> Result<SampleReportJson, CliError> {
    if args.chains == 0 {
        return Err(CliError::Invalid("at least one chain is required".into()));
    }
    if args.every == 0 || args.frame_every == 0 {
        return Err(CliError::Invalid("sampling intervals must be positive".into()));
    }
    let t = build_region(region)?;
    let start = match m0 {
        Some(c) => validate_covering(&t.g, c.edges()?)?,
        None => initial_covering(&t)?,
    };
    let cfg = ChainConfig {
        seed: args.seed,
        steps: args.steps,
        burn_in: args.burn_in,
        sample_every: args.every,
        kernel: args.kernel,
    };
    let g: &LatticeGraph = &t.g;
    let mut frames = Vec::new();
    let reports: Vec<SampleReport> = thread::scope(|scope| {
        let handles: Vec<_> = (1..args.chains)
            .map(|k| {
                let (start, cfg) = (&start, &cfg);
                scope.spawn(move || run_stream(g, start, cfg, k, |_| {}))
            })
            .collect();
        let mut seen = 0u64;
        let first = run_stream(g, &start, &cfg, 0, |c| {
            if args.frames.is_some() && seen.is_multiple_of(args.frame_every) {
                frames.push(c.covering());
            }
            seen += 1;
        });
        let mut all = vec![first];
        all.extend(handles.into_iter().map(|h| h.join().expect("chain thread panicked")));
        all
    });
    let merged = reports.into_iter().reduce(SampleReport::merge).expect("one chain");
    if let Some(dir) = &args.frames {
        fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.clone(), source })?;
        for (k, m) in frames.iter().enumerate() {
            let path = dir.join(format!("frame_{k:06}.svg"));
            let svg = render_svg(g, m, RenderOptions::default())?;
            fs::write(&path, svg).map_err(|source| CliError::Write { path, source })?;
        }
    }
    report_json(&t, args, &merged)
}

/// Renders a covering file, or covering number `chain` of a sample report.
pub fn render(path: &Path, chain: usize, opts: RenderOptions) -> Result<String, CliError> {
    let value: serde_json::Value = read_json(path)?;
    let covering: CoveringJson = match value.get("final_coverings") {
        Some(list) => {
            let list: Vec<CoveringJson> = serde_json::from_value(list.clone())?;
            list.into_iter()
                .nth(chain)
                .ok_or_else(|| CliError::Invalid(format!("report has no chain {chain}")))?
        }
        None => serde_json::from_value(value)?,
    };
    let (g, m) = covering.load()?;
    render_svg(&g, &m, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// Regression checks on the L-shaped region and short strips.
pub fn selftest() -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let l = Region::l_shape();
    let b = build_summary(&l)?;
    out.push(check(
        "l-shape graph",
        b.vertices == 22 && b.d_star == 2 && b.diagonal_edges == 15,
        format!("{} vertices, d* = {}, {} diagonal edges", b.vertices, b.d_star, b.diagonal_edges),
    ));
    let strip1 = build_summary(&Region::strip(1))?;
    out.push(check("strip of one face", strip1.d_star == 1, format!("d* = {}", strip1.d_star)));

    let t = build_region(&l)?;
    let s = solve(&t)?;
    out.push(check(
        "l-shape counts",
        s.det == BigInt::from(56) && s.total() == BigInt::from(328),
        format!("det A = {}, total = {}", s.det, s.total()),
    ));
    let corner = diagdimer_core::Vertex::new(1, 3);
    let at_corner: Vec<BigRational> = diagonal_edges(&t.g)
        .into_iter()
        .filter(|e| e.w1_endpoint() == Some(corner))
        .map(|e| s.probability(e))
        .collect::<Result<_, _>>()?;
    let expected = BigRational::new(2.into(), 41.into());
    out.push(check(
        "l-shape corner probability",
        at_corner.len() == 4 && at_corner.iter().all(|p| *p == expected),
        format!("{} edges at (1, 3), each {}", at_corner.len(), at_corner.first().map(ToString::to_string).unwrap_or_default()),
    ));
    let classes = class_bijection(&t)?;
    out.push(check(
        "t-classes match spanning trees",
        BigInt::from(classes.len()) == s.det,
        format!("{} classes", classes.len()),
    ));

    for (name, region) in [("l-shape", l), ("strip 1", Region::strip(1)), ("strip 2", Region::strip(2)), ("strip 3", Region::strip(3))] {
        let t = build_region(&region)?;
        let s = solve(&t)?;
        let brute = enumerate_coverings(&t.g)?.len();
        let sum: BigRational = diagonal_edges(&t.g).into_iter().map(|e| s.probability(e)).sum::<Result<_, _>>()?;
        out.push(check(
            &format!("{name} exact count"),
            s.total() == BigInt::from(brute) && sum == BigRational::from_integer(1.into()),
            format!("formula {}, enumeration {}, probabilities sum to {}", s.total(), brute, sum),
        ));
    }
    Ok(out)
}
