//! Markov chains on dimer coverings whose stationary law is uniform.
//!
//! Two kernels are available, both reversible for the uniform distribution
//! on each connected component of the move graph:
//!
//! * [`Kernel::Lazy`] picks one static move site uniformly and flips it if
//!   one of its two patterns is present, otherwise stays put. Every site is
//!   an involution, so the kernel is symmetric.
//! * [`Kernel::Metropolis`] picks uniformly among the moves applicable to
//!   the current covering `M` and accepts the result `M'` with probability
//!   `min(1, |A(M)| / |A(M')|)`, where `A` is the applicable set. Transition
//!   probabilities are `min(1/|A(M)|, 1/|A(M')|)`, again symmetric, and far
//!   fewer steps are wasted.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covering::DimerCovering;
use crate::lattice::{Edge, LatticeGraph};
use crate::moves::{apply_move, find_moves, static_sites, MoveSite};

/// Identifier of the pseudorandom generator, recorded in every report.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64, stream = chain index";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Kernel {
    Lazy,
    #[default]
    Metropolis,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::Lazy => "lazy",
            Kernel::Metropolis => "metropolis",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainConfig {
    pub seed: u64,
    /// Steps after burn-in.
    pub steps: u64,
    pub burn_in: u64,
    pub sample_every: u64,
    pub kernel: Kernel,
}

impl ChainConfig {
    pub fn new(seed: u64, steps: u64) -> Self {
        ChainConfig { seed, steps, burn_in: 0, sample_every: 1, kernel: Kernel::default() }
    }
}

/// The state-independent proposal list.
pub fn proposal_sites(g: &LatticeGraph) -> Vec<MoveSite> {
    static_sites(g)
}

/// Seeded generator for chain number `stream`.
pub fn chain_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One lazy step on an explicit covering.
pub fn step<R: Rng + ?Sized>(sites: &[MoveSite], m: &DimerCovering, rng: &mut R) -> DimerCovering {
    if sites.is_empty() {
        return m.clone();
    }
    let site = sites[rng.random_range(0..sites.len())];
    let partners = m.partner_map();
    match site.move_for(|v| partners.get(&v).copied()) {
        Some(mv) => apply_move(m, &mv).expect("pattern present"),
        None => m.clone(),
    }
}

/// One Metropolis step on an explicit covering, choosing among
/// [`find_moves`] in its sorted order.
pub fn metropolis_step<R: Rng + ?Sized>(g: &LatticeGraph, m: &DimerCovering, rng: &mut R) -> DimerCovering {
    let moves = find_moves(g, m);
    if moves.is_empty() {
        return m.clone();
    }
    let next = apply_move(m, &moves[rng.random_range(0..moves.len())]).expect("found moves apply");
    let back = find_moves(g, &next).len();
    if back <= moves.len() || rng.random::<f64>() * (back as f64) < moves.len() as f64 {
        next
    } else {
        m.clone()
    }
}

/// Chain state kept as a partner array over vertex indices, with the set of
/// currently applicable sites maintained incrementally.
#[derive(Clone, Debug)]
pub struct Chain<'g> {
    g: &'g LatticeGraph,
    sites: Vec<[usize; 4]>,
    partner: Vec<usize>,
    /// Sites touching each vertex.
    touching: Vec<Vec<usize>>,
    /// Applicable sites, in no particular order.
    live: Vec<usize>,
    /// Position of each site in `live`.
    slot: Vec<Option<usize>>,
}

impl<'g> Chain<'g> {
    pub fn new(g: &'g LatticeGraph, m0: &DimerCovering) -> Self {
        let sites: Vec<[usize; 4]> = proposal_sites(g)
            .iter()
            .map(|s| s.cycle().map(|v| g.index_of(v).expect("site inside graph")))
            .collect();
        let mut partner = vec![usize::MAX; g.len()];
        for e in m0.dimers() {
            let (u, v) = e.endpoints();
            let (i, j) = (g.index_of(u).expect("vertex"), g.index_of(v).expect("vertex"));
            partner[i] = j;
            partner[j] = i;
        }
        let mut touching = vec![Vec::new(); g.len()];
        for (k, s) in sites.iter().enumerate() {
            for &i in s {
                touching[i].push(k);
            }
        }
        let mut chain = Chain {
            g,
            slot: vec![None; sites.len()],
            sites,
            partner,
            touching,
            live: Vec::new(),
        };
        for k in 0..chain.sites.len() {
            chain.refresh(k);
        }
        chain
    }

    pub fn site_count(&self) -> usize {
        self.sites.len()
    }

    /// Number of moves applicable to the current covering.
    pub fn applicable_count(&self) -> usize {
        self.live.len()
    }

    fn fires(&self, site: usize) -> bool {
        let [a, b, c, d] = self.sites[site];
        let p = &self.partner;
        (p[a] == b && p[c] == d) || (p[b] == c && p[d] == a)
    }

    fn refresh(&mut self, site: usize) {
        match (self.fires(site), self.slot[site]) {
            (true, None) => {
                self.slot[site] = Some(self.live.len());
                self.live.push(site);
            }
            (false, Some(pos)) => {
                self.live.swap_remove(pos);
                if let Some(&moved) = self.live.get(pos) {
                    self.slot[moved] = Some(pos);
                }
                self.slot[site] = None;
            }
            _ => {}
        }
    }

    /// Flips the chosen site if possible; returns whether it moved.
    pub fn flip(&mut self, site: usize) -> bool {
        let [a, b, c, d] = self.sites[site];
        let p = &mut self.partner;
        if p[a] == b && p[c] == d {
            p[b] = c;
            p[c] = b;
            p[d] = a;
            p[a] = d;
        } else if p[b] == c && p[d] == a {
            p[a] = b;
            p[b] = a;
            p[c] = d;
            p[d] = c;
        } else {
            return false;
        }
        for v in [a, b, c, d] {
            for k in 0..self.touching[v].len() {
                let s = self.touching[v][k];
                self.refresh(s);
            }
        }
        true
    }

    pub fn step<R: Rng + ?Sized>(&mut self, kernel: Kernel, rng: &mut R) -> bool {
        match kernel {
            Kernel::Lazy => {
                if self.sites.is_empty() {
                    return false;
                }
                let k = rng.random_range(0..self.sites.len());
                self.flip(k)
            }
            Kernel::Metropolis => {
                let here = self.live.len();
                if here == 0 {
                    return false;
                }
                let site = self.live[rng.random_range(0..here)];
                self.flip(site);
                let there = self.live.len();
                if there <= here || rng.random::<f64>() * (there as f64) < here as f64 {
                    true
                } else {
                    self.flip(site);
                    false
                }
            }
        }
    }

    pub fn impurities(&self) -> impl Iterator<Item = Edge> + '_ {
        self.partner.iter().enumerate().filter_map(|(i, &j)| {
            if i < j {
                let e = Edge::new(self.g.vertex(i), self.g.vertex(j)).expect("dimer");
                e.is_diagonal().then_some(e)
            } else {
                None
            }
        })
    }

    pub fn covering(&self) -> DimerCovering {
        let mut dimers: Vec<Edge> = self
            .partner
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j)
            .map(|(i, &j)| Edge::new(self.g.vertex(i), self.g.vertex(j)).expect("dimer"))
            .collect();
        dimers.sort_unstable();
        DimerCovering::from_sorted(dimers)
    }

    /// The applicable sites, as static sites of the graph, sorted.
    pub fn applicable_sites(&self) -> Vec<MoveSite> {
        let all = proposal_sites(self.g);
        let mut out: Vec<MoveSite> = self.live.iter().map(|&k| all[k]).collect();
        out.sort();
        out
    }
}

/// Summary of one or more chains. Merging adds counts and concatenates the
/// per-chain fields, so it is associative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub rng: &'static str,
    pub kernel: Kernel,
    /// `(seed, stream)` per chain.
    pub chains: Vec<(u64, u64)>,
    pub steps: u64,
    pub accepted: u64,
    pub samples: u64,
    /// How many samples had an impurity on each edge.
    pub edge_counts: BTreeMap<Edge, u64>,
    pub final_coverings: Vec<DimerCovering>,
}

impl SampleReport {
    pub fn acceptance_rate(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }

    /// Fraction of samples with an impurity on `e`.
    pub fn frequency(&self, e: Edge) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        *self.edge_counts.get(&e).unwrap_or(&0) as f64 / self.samples as f64
    }

    pub fn merge(mut self, other: SampleReport) -> SampleReport {
        self.chains.extend(other.chains);
        self.steps += other.steps;
        self.accepted += other.accepted;
        self.samples += other.samples;
        for (e, c) in other.edge_counts {
            *self.edge_counts.entry(e).or_insert(0) += c;
        }
        self.final_coverings.extend(other.final_coverings);
        self
    }
}

/// Runs one chain (stream 0) from `m0`.
pub fn run(g: &LatticeGraph, m0: &DimerCovering, cfg: &ChainConfig) -> SampleReport {
    run_stream(g, m0, cfg, 0, |_| {})
}

/// Runs chain number `stream`, calling `observe` on every thinned sample.
pub fn run_stream<F: FnMut(&Chain<'_>)>(
    g: &LatticeGraph,
    m0: &DimerCovering,
    cfg: &ChainConfig,
    stream: u64,
    mut observe: F,
) -> SampleReport {
    let mut rng = chain_rng(cfg.seed, stream);
    let mut chain = Chain::new(g, m0);
    let every = cfg.sample_every.max(1);
    let mut accepted = 0;
    for _ in 0..cfg.burn_in {
        accepted += u64::from(chain.step(cfg.kernel, &mut rng));
    }
    let mut samples = 0;
    let mut edge_counts = BTreeMap::new();
    for t in 1..=cfg.steps {
        accepted += u64::from(chain.step(cfg.kernel, &mut rng));
        if t % every == 0 {
            samples += 1;
            for e in chain.impurities() {
                *edge_counts.entry(e).or_insert(0) += 1;
            }
            observe(&chain);
        }
    }
    SampleReport {
        rng: RNG_ALGORITHM,
        kernel: cfg.kernel,
        chains: vec![(cfg.seed, stream)],
        steps: cfg.burn_in + cfg.steps,
        accepted,
        samples,
        edge_counts,
        final_coverings: vec![chain.covering()],
    }
}
