//! Graph families for tests and experiments, plus the high-girth-times-
//! biclique lower-bound construction and its candidate edge blocking sets.

use std::collections::BTreeMap;
use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::blocking::{coverage_by_edge_sets, verify_blocking_set, BlockingKind, BlockingSet};
use crate::error::{Error, Result};
use crate::graph::{
    cartesian_product, girth, tensor_product, Edge, Graph, ProductGraph, ProductKind, VertexId, VertexPair,
};
use crate::seed::rng_from;

pub fn complete_graph(n: usize) -> Graph {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| Edge::unit(i, j)));
    Graph::new(n, edges).expect("complete graph is simple")
}

pub fn path_graph(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| Edge::unit(i - 1, i))).expect("path is simple")
}

pub fn star_graph(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| Edge::unit(0, i))).expect("star is simple")
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParams(format!(
            "a cycle needs at least 3 vertices, got {n}"
        )));
    }
    Graph::new(n, (0..n).map(|i| Edge::unit(i, (i + 1) % n)))
}

/// Complete bipartite `K_{a,b}`: vertices `0..a` on one side, `a..a+b` on the other.
pub fn biclique(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|i| (a..a + b).map(move |j| Edge::unit(i, j)));
    Graph::new(a + b, edges).expect("biclique is simple")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push(Edge::unit(i, (i + 1) % 5));
        edges.push(Edge::unit(i, i + 5));
        edges.push(Edge::unit(5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, edges).expect("Petersen graph is simple")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDist {
    Unit,
    /// Uniform on `[lo, hi)`.
    Uniform {
        lo: f64,
        hi: f64,
    },
}

impl WeightDist {
    fn validate(&self) -> Result<()> {
        match *self {
            WeightDist::Unit => Ok(()),
            WeightDist::Uniform { lo, hi } if lo > 0.0 && lo <= hi && hi.is_finite() => Ok(()),
            WeightDist::Uniform { lo, hi } => Err(Error::InvalidParams(format!(
                "uniform weights need 0 < lo <= hi, got [{lo}, {hi})"
            ))),
        }
    }

    fn draw(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            WeightDist::Unit => 1.0,
            WeightDist::Uniform { lo, hi } if lo == hi => lo,
            WeightDist::Uniform { lo, hi } => rng.gen_range(lo..hi),
        }
    }
}

impl fmt::Display for WeightDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightDist::Unit => f.write_str("unit"),
            WeightDist::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
        }
    }
}

impl std::str::FromStr for WeightDist {
    type Err = Error;

    /// `unit` or `uniform:<lo>:<hi>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("weight distribution `{s}`; expected `unit` or `uniform:lo:hi`"));
        let w = match s.split(':').collect::<Vec<_>>().as_slice() {
            ["unit"] => WeightDist::Unit,
            ["uniform", lo, hi] => WeightDist::Uniform {
                lo: lo.parse().map_err(|_| bad())?,
                hi: hi.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        w.validate()?;
        Ok(w)
    }
}

/// Complete graph with weights drawn from `weights`.
pub fn weighted_complete_graph(n: usize, seed: u64, weights: WeightDist) -> Result<Graph> {
    random_graph(n, 1.0, seed, weights)
}

/// Erdős–Rényi `G(n, p)`; pairs are visited in lexicographic order, so the
/// output is a pure function of the seed.
pub fn random_graph(n: usize, p: f64, seed: u64, weights: WeightDist) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!(
            "edge probability must be in [0, 1], got {p}"
        )));
    }
    weights.validate()?;
    let mut rng = rng_from(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push(Edge::new(i, j, weights.draw(&mut rng)));
            }
        }
    }
    Graph::new(n, edges)
}

#[derive(Debug, Clone)]
pub struct HighGirth {
    pub graph: Graph,
    /// Set when the random construction gave up and a cycle was returned.
    pub fallback: bool,
}

const HIGH_GIRTH_ATTEMPTS: usize = 64;

/// A graph with girth at least `min_girth` on at least `target_n` vertices.
///
/// Tries random greedy cubic graphs (an edge is only added between vertices
/// at distance `>= min_girth - 1`); if no attempt reaches 3-regularity the
/// cycle `C_max(min_girth, target_n)` is returned and flagged.
pub fn high_girth_graph(min_girth: usize, target_n: usize, seed: u64) -> Result<HighGirth> {
    if min_girth < 4 {
        return Err(Error::InvalidParams(format!(
            "minimum girth must be >= 4, got {min_girth}"
        )));
    }
    if min_girth <= 5 && target_n <= 10 {
        return Ok(HighGirth {
            graph: petersen(),
            fallback: false,
        });
    }
    let n = target_n.max(4).next_multiple_of(2);
    let mut rng = rng_from(seed);
    for _ in 0..HIGH_GIRTH_ATTEMPTS {
        if let Some(g) = greedy_cubic(n, min_girth, &mut rng) {
            if girth(&g).is_none_or(|len| len >= min_girth) {
                return Ok(HighGirth {
                    graph: g,
                    fallback: false,
                });
            }
        }
    }
    Ok(HighGirth {
        graph: cycle_graph(min_girth.max(target_n))?,
        fallback: true,
    })
}

fn greedy_cubic(n: usize, min_girth: usize, rng: &mut impl Rng) -> Option<Graph> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut open: Vec<usize> = (0..n).collect();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    while !open.is_empty() {
        let a = open[rng.gen_range(0..open.len())];
        // vertices within min_girth - 2 hops of a are off limits
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[a] = 0;
        queue.clear();
        queue.push_back(a);
        while let Some(x) = queue.pop_front() {
            if dist[x] + 1 > min_girth - 2 {
                continue;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let partners: Vec<usize> = open.iter().copied().filter(|&b| dist[b] == usize::MAX).collect();
        let b = *partners.choose(rng)?;
        adj[a].push(b);
        adj[b].push(a);
        open.retain(|&x| adj[x].len() < 3);
    }
    let edges = (0..n).flat_map(|a| adj[a].iter().filter(move |&&b| a < b).map(move |&b| Edge::unit(a, b)));
    Graph::new(n, edges.collect::<Vec<_>>()).ok()
}

/// Which product edges a lower-bound edge blocking set pairs up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockingReading {
    /// Edges sharing a product endpoint and projecting to the same base edge.
    SharedEndpoint,
    /// Edges projecting to the same base edge, adjacent or not.
    SameBaseEdge,
}

impl fmt::Display for BlockingReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockingReading::SharedEndpoint => "shared-endpoint",
            BlockingReading::SameBaseEdge => "same-base-edge",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeProjection {
    Base(VertexPair),
    /// A Cartesian edge inside one biclique fibre.
    Mixer,
}

#[derive(Debug, Clone)]
pub struct LowerBoundInstance {
    pub product: ProductGraph,
    pub base: Graph,
    pub f: usize,
    pub biclique_size: usize,
    /// Indexed by product edge id.
    pub projection: Vec<EdgeProjection>,
    /// Shared-endpoint reading of the claimed edge blocking set.
    pub claimed_blocking: BlockingSet,
    /// Cycle length the claim is checked at: `girth(base) - 1`.
    pub blocking_length: usize,
    pub claimed_verified: bool,
    pub claimed_size_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub kind: ProductKind,
    pub reading: BlockingReading,
    pub vertices: usize,
    pub edges: usize,
    pub pairs: usize,
    pub size_bound: usize,
    pub size_ok: bool,
    pub verified: bool,
    /// Result of the independent edge-set coverage check.
    pub cross_checked: bool,
    pub first_uncovered: Option<String>,
}

impl AuditRow {
    pub const CSV_HEADER: &'static str =
        "product,reading,vertices,edges,pairs,f_times_edges,size_ok,blocking_verified,cross_checked,first_uncovered";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.reading,
            self.vertices,
            self.edges,
            self.pairs,
            self.size_bound,
            self.size_ok,
            self.verified,
            self.cross_checked,
            self.first_uncovered.as_deref().unwrap_or("-")
        )
    }
}

/// Base graph times a biclique on `floor(f/2)` vertices, split as evenly as
/// possible, with the candidate blocking set.
pub fn lower_bound_product(base: &Graph, f: usize, kind: ProductKind) -> Result<LowerBoundInstance> {
    if f < 2 {
        return Err(Error::InvalidParams(format!(
            "lower-bound biclique is empty for f = {f}"
        )));
    }
    if base.n() == 0 {
        return Err(Error::InvalidParams("base graph is empty".into()));
    }
    let size = f / 2;
    let bic = biclique(size.div_ceil(2), size / 2);
    let product = match kind {
        ProductKind::Cartesian => cartesian_product(base, &bic)?,
        ProductKind::Tensor => tensor_product(base, &bic)?,
    };
    let projection = product
        .graph
        .edges()
        .iter()
        .map(|e| {
            let (a, _) = product.project(e.u);
            let (b, _) = product.project(e.v);
            if a == b {
                EdgeProjection::Mixer
            } else {
                EdgeProjection::Base(VertexPair::new(a, b))
            }
        })
        .collect();
    let blocking_length = match girth(base) {
        Some(g) => g - 1,
        None => product.graph.n().max(3),
    };
    let mut inst = LowerBoundInstance {
        product,
        base: base.clone(),
        f,
        biclique_size: size,
        projection,
        claimed_blocking: BlockingSet::empty(BlockingKind::Edge),
        blocking_length,
        claimed_verified: false,
        claimed_size_ok: false,
    };
    inst.claimed_blocking = inst.claimed(BlockingReading::SharedEndpoint)?;
    inst.claimed_size_ok = inst.claimed_blocking.len() <= f * inst.product.graph.edge_count();
    inst.claimed_verified = blocking_length >= 3
        && verify_blocking_set(&inst.product.graph, &inst.claimed_blocking, blocking_length)?.covered;
    Ok(inst)
}

impl LowerBoundInstance {
    pub fn graph(&self) -> &Graph {
        &self.product.graph
    }

    /// Candidate edge blocking set under `reading`.
    pub fn claimed(&self, reading: BlockingReading) -> Result<BlockingSet> {
        let g = &self.product.graph;
        // group product edges by (base edge, optional shared endpoint)
        let mut groups: BTreeMap<(VertexPair, Option<VertexId>), Vec<VertexPair>> = BTreeMap::new();
        for (e, proj) in g.edges().iter().zip(&self.projection) {
            let EdgeProjection::Base(base_edge) = *proj else {
                continue;
            };
            match reading {
                BlockingReading::SameBaseEdge => groups.entry((base_edge, None)).or_default().push(e.pair()),
                BlockingReading::SharedEndpoint => {
                    for end in [e.u, e.v] {
                        groups.entry((base_edge, Some(end))).or_default().push(e.pair());
                    }
                }
            }
        }
        let mut set = BlockingSet::empty(BlockingKind::Edge);
        for members in groups.values() {
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    set.insert_edge_pair(a, b)?;
                }
            }
        }
        Ok(set)
    }

    /// Verdict for one reading at this instance's blocking length.
    pub fn audit(&self, reading: BlockingReading) -> Result<AuditRow> {
        let g = &self.product.graph;
        let set = self.claimed(reading)?;
        let len = self.blocking_length;
        let verdict = verify_blocking_set(g, &set, len)?;
        Ok(AuditRow {
            kind: self.product.kind,
            reading,
            vertices: g.n(),
            edges: g.edge_count(),
            pairs: set.len(),
            size_bound: self.f * g.edge_count(),
            size_ok: set.len() <= self.f * g.edge_count(),
            verified: verdict.covered,
            cross_checked: coverage_by_edge_sets(g, &set, len)?,
            first_uncovered: verdict.first_uncovered.map(|c| c.to_string()),
        })
    }
}

/// Audit table over both product kinds and both readings.
pub fn audit_lower_bound(base: &Graph, f: usize) -> Result<Vec<AuditRow>> {
    let mut rows = Vec::with_capacity(4);
    for kind in [ProductKind::Cartesian, ProductKind::Tensor] {
        let inst = lower_bound_product(base, f, kind)?;
        for reading in [BlockingReading::SharedEndpoint, BlockingReading::SameBaseEdge] {
            rows.push(inst.audit(reading)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        assert_eq!(complete_graph(4).edge_count(), 6);
        let b = biclique(2, 3);
        assert_eq!(b.edge_count(), 6);
        assert_eq!(girth(&b), Some(4));
        let p = petersen();
        assert_eq!((p.n(), p.edge_count(), girth(&p)), (10, 15, Some(5)));
        assert!(p.vertices().all(|v| p.degree(v) == 3));
        assert_eq!(path_graph(5).edge_count(), 4);
        assert_eq!(star_graph(5).edge_count(), 4);
        assert!(cycle_graph(2).is_err());
    }

    #[test]
    fn random_graph_extremes() {
        assert_eq!(random_graph(10, 0.0, 1, WeightDist::Unit).unwrap().edge_count(), 0);
        assert_eq!(random_graph(10, 1.0, 1, WeightDist::Unit).unwrap(), complete_graph(10));
        assert!(random_graph(10, 1.5, 1, WeightDist::Unit).is_err());
        assert!(random_graph(10, 0.5, 1, WeightDist::Uniform { lo: 0.0, hi: 1.0 }).is_err());
    }

    #[test]
    fn random_graph_is_seeded() {
        let w = WeightDist::Uniform { lo: 1.0, hi: 2.0 };
        let a = random_graph(30, 0.3, 5, w).unwrap();
        let b = random_graph(30, 0.3, 5, w).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert!(a.edges().iter().all(|e| (1.0..2.0).contains(&e.weight)));
        assert_ne!(random_graph(30, 0.3, 6, w).unwrap().edges(), a.edges());
    }

    #[test]
    fn random_graph_density() {
        // binomial(1225, 0.2): mean 245, sd 14
        let counts: Vec<f64> = (0..100)
            .map(|s| random_graph(50, 0.2, s, WeightDist::Unit).unwrap().edge_count() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / 100.0;
        let sd = (1225.0f64 * 0.2 * 0.8).sqrt();
        assert!((mean - 245.0).abs() < 3.0 * sd / 10.0, "mean {mean}");
        assert!(counts.iter().all(|&c| (c - 245.0).abs() < 5.0 * sd));
    }

    #[test]
    fn high_girth_outputs() {
        for (g, n) in [(4, 8), (5, 10), (6, 6), (6, 30), (7, 40), (8, 12)] {
            let out = high_girth_graph(g, n, 1).unwrap();
            assert!(out.graph.n() >= n);
            assert!(girth(&out.graph).is_none_or(|len| len >= g), "g={g} n={n}");
        }
        let c6 = high_girth_graph(6, 6, 0).unwrap();
        assert!(c6.fallback);
        assert_eq!(girth(&c6.graph), Some(6));
        assert_eq!(high_girth_graph(5, 10, 0).unwrap().graph, petersen());
        assert!(!high_girth_graph(6, 40, 3).unwrap().fallback);
        assert!(high_girth_graph(3, 10, 0).is_err());
    }

    #[test]
    fn c6_cartesian_instance() {
        let inst = lower_bound_product(&cycle_graph(6).unwrap(), 4, ProductKind::Cartesian).unwrap();
        assert_eq!(inst.graph().n(), 12);
        assert_eq!(inst.graph().edge_count(), 18);
        assert_eq!(inst.biclique_size, 2);
        assert_eq!(inst.blocking_length, 5);
        let mixers = inst.projection.iter().filter(|p| **p == EdgeProjection::Mixer).count();
        assert_eq!(mixers, 6);
        // copies of a base edge are vertex-disjoint in the Cartesian product
        assert!(inst.claimed_blocking.is_empty());
        assert!(!inst.claimed_verified);
        let relaxed = inst.audit(BlockingReading::SameBaseEdge).unwrap();
        assert_eq!(relaxed.pairs, 6);
        assert!(relaxed.verified && relaxed.cross_checked);
    }

    #[test]
    fn c6_tensor_instance() {
        let inst = lower_bound_product(&cycle_graph(6).unwrap(), 4, ProductKind::Tensor).unwrap();
        assert_eq!((inst.graph().n(), inst.graph().edge_count()), (12, 12));
        assert!(inst.projection.iter().all(|p| matches!(p, EdgeProjection::Base(_))));
        // two disjoint hexagons: nothing to cover at length 5
        assert!(inst.claimed_verified);
        assert!(inst.claimed_size_ok);
    }

    #[test]
    fn f_too_small() {
        assert!(lower_bound_product(&cycle_graph(6).unwrap(), 1, ProductKind::Cartesian).is_err());
    }

    #[test]
    fn product_size_grows_with_f() {
        let base = cycle_graph(6).unwrap();
        let mut last = 0;
        for f in [2, 4, 8, 16] {
            let inst = lower_bound_product(&base, f, ProductKind::Tensor).unwrap();
            let m = inst.graph().edge_count();
            let a = (f / 2).div_ceil(2);
            let b = f / 2 / 2;
            assert_eq!(m, 2 * base.edge_count() * a * b);
            assert!(m >= last);
            last = m;
        }
    }
}
