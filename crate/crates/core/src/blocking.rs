//! Blocking sets: extraction from greedy witnesses, coverage checks against
//! all short cycles, and the random-subsample experiment that turns a small
//! blocking set into a dense high-girth subgraph.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{for_each_short_cycle, girth, Cycle, FaultMode, FaultSet, Graph, VertexId, VertexPair};
use crate::seed::{derive_seed, rng_from};
use crate::spanner::GreedyTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockingKind {
    Vertex,
    Edge,
}

impl fmt::Display for BlockingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockingKind::Vertex => "vertex",
            BlockingKind::Edge => "edge",
        })
    }
}

/// `(v, e)` with `v` not an endpoint of `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockingPair {
    blocker: VertexId,
    edge: VertexPair,
}

impl BlockingPair {
    pub fn new(blocker: VertexId, edge: VertexPair) -> Result<Self> {
        if edge.contains(blocker) {
            return Err(Error::InvalidBlocking(format!(
                "blocker {blocker} is an endpoint of {edge}"
            )));
        }
        Ok(BlockingPair { blocker, edge })
    }

    pub fn blocker(&self) -> VertexId {
        self.blocker
    }

    pub fn edge(&self) -> VertexPair {
        self.edge
    }
}

/// Unordered pair of distinct edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeBlockingPair {
    first: VertexPair,
    second: VertexPair,
}

impl EdgeBlockingPair {
    pub fn new(a: VertexPair, b: VertexPair) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(EdgeBlockingPair { first: a, second: b }),
            std::cmp::Ordering::Greater => Ok(EdgeBlockingPair { first: b, second: a }),
            std::cmp::Ordering::Equal => Err(Error::InvalidBlocking(format!("edge pair ({a}, {a}) is not distinct"))),
        }
    }

    pub fn edges(&self) -> (VertexPair, VertexPair) {
        (self.first, self.second)
    }

    fn vertex_count(&self) -> usize {
        if self.first.shared_endpoint(self.second).is_some() {
            3
        } else {
            4
        }
    }
}

/// A set of blocking pairs, duplicates collapsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockingSet {
    Vertex(BTreeSet<BlockingPair>),
    Edge(BTreeSet<EdgeBlockingPair>),
}

impl BlockingSet {
    pub fn empty(kind: BlockingKind) -> Self {
        match kind {
            BlockingKind::Vertex => BlockingSet::Vertex(BTreeSet::new()),
            BlockingKind::Edge => BlockingSet::Edge(BTreeSet::new()),
        }
    }

    pub fn kind(&self) -> BlockingKind {
        match self {
            BlockingSet::Vertex(_) => BlockingKind::Vertex,
            BlockingSet::Edge(_) => BlockingKind::Edge,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            BlockingSet::Vertex(p) => p.len(),
            BlockingSet::Edge(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn insert_vertex_pair(&mut self, blocker: VertexId, edge: VertexPair) -> Result<()> {
        match self {
            BlockingSet::Vertex(p) => {
                p.insert(BlockingPair::new(blocker, edge)?);
                Ok(())
            }
            BlockingSet::Edge(_) => Err(Error::InvalidBlocking(
                "vertex pair added to an edge blocking set".into(),
            )),
        }
    }

    pub fn insert_edge_pair(&mut self, a: VertexPair, b: VertexPair) -> Result<()> {
        match self {
            BlockingSet::Edge(p) => {
                p.insert(EdgeBlockingPair::new(a, b)?);
                Ok(())
            }
            BlockingSet::Vertex(_) => Err(Error::InvalidBlocking(
                "edge pair added to a vertex blocking set".into(),
            )),
        }
    }

    /// Every referenced vertex is in range and every referenced edge is an
    /// edge of `h`.
    pub fn check_against(&self, h: &Graph) -> Result<()> {
        let edge = |e: VertexPair| -> Result<()> {
            h.check_vertex(e.hi())?;
            if h.contains_pair(e) {
                Ok(())
            } else {
                Err(Error::MissingEdge(e.lo().index(), e.hi().index()))
            }
        };
        match self {
            BlockingSet::Vertex(pairs) => pairs.iter().try_for_each(|p| {
                h.check_vertex(p.blocker)?;
                edge(p.edge)
            }),
            BlockingSet::Edge(pairs) => pairs.iter().try_for_each(|p| {
                edge(p.first)?;
                edge(p.second)
            }),
        }
    }

    /// Number of distinct vertices each pair touches, in iteration order.
    fn arities(&self) -> Vec<usize> {
        match self {
            BlockingSet::Vertex(p) => vec![3; p.len()],
            BlockingSet::Edge(p) => p.iter().map(EdgeBlockingPair::vertex_count).collect(),
        }
    }
}

/// Turns greedy witnesses into a blocking set: `(x, e)` for every accepted
/// edge `e` and `x` in its witness (vertex mode), or `(e', e)` for `e'` in
/// its witness (edge mode).
pub fn extract_blocking_set(trace: &GreedyTrace) -> Result<BlockingSet> {
    trace.validate()?;
    let mut accepted_so_far: HashSet<VertexPair> = HashSet::new();
    let mut set = match trace.params.mode {
        FaultMode::Vertex => BlockingSet::empty(BlockingKind::Vertex),
        FaultMode::Edge => BlockingSet::empty(BlockingKind::Edge),
    };
    for (edge, witness) in trace.accepted() {
        let e = edge.pair();
        match witness {
            FaultSet::Vertices(vs) => {
                for &x in vs {
                    if x.index() >= trace.n {
                        return Err(Error::MalformedTrace(format!("witness vertex {x} out of range")));
                    }
                    set.insert_vertex_pair(x, e)?;
                }
            }
            FaultSet::Edges(es) => {
                for &other in es {
                    if !accepted_so_far.contains(&other) {
                        return Err(Error::MalformedTrace(format!(
                            "witness edge {other} of {e} was not in the spanner yet"
                        )));
                    }
                    set.insert_edge_pair(other, e)?;
                }
            }
        }
        accepted_so_far.insert(e);
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockingVerdict {
    pub covered: bool,
    pub first_uncovered: Option<Cycle>,
    pub cycles_checked: usize,
}

enum Partners {
    Vertex(HashMap<VertexPair, Vec<VertexId>>),
    Edge(HashMap<VertexPair, Vec<VertexPair>>),
}

impl Partners {
    fn new(b: &BlockingSet) -> Self {
        match b {
            BlockingSet::Vertex(pairs) => {
                let mut m: HashMap<VertexPair, Vec<VertexId>> = HashMap::new();
                for p in pairs {
                    m.entry(p.edge).or_default().push(p.blocker);
                }
                Partners::Vertex(m)
            }
            BlockingSet::Edge(pairs) => {
                let mut m: HashMap<VertexPair, Vec<VertexPair>> = HashMap::new();
                for p in pairs {
                    m.entry(p.first).or_default().push(p.second);
                    m.entry(p.second).or_default().push(p.first);
                }
                Partners::Edge(m)
            }
        }
    }

    fn covers(&self, cycle: &Cycle) -> bool {
        match self {
            Partners::Vertex(m) => cycle
                .edges()
                .any(|e| m.get(&e).is_some_and(|bs| bs.iter().any(|&b| cycle.contains_vertex(b)))),
            Partners::Edge(m) => {
                let edges: Vec<VertexPair> = cycle.edges().collect();
                edges
                    .iter()
                    .any(|e| m.get(e).is_some_and(|ps| ps.iter().any(|p| edges.contains(p))))
            }
        }
    }
}

/// Does every cycle of `h` with at most `max_len` edges contain both members
/// of some pair of `b`?
pub fn verify_blocking_set(h: &Graph, b: &BlockingSet, max_len: usize) -> Result<BlockingVerdict> {
    if max_len < 3 {
        return Err(Error::InvalidParams(format!(
            "cycle length bound must be >= 3, got {max_len}"
        )));
    }
    b.check_against(h)?;
    let partners = Partners::new(b);
    let mut checked = 0;
    let mut uncovered = None;
    let _ = for_each_short_cycle(h, max_len, |c| {
        checked += 1;
        if partners.covers(c) {
            ControlFlow::Continue(())
        } else {
            uncovered = Some(c.clone());
            ControlFlow::Break(())
        }
    });
    Ok(BlockingVerdict {
        covered: uncovered.is_none(),
        first_uncovered: uncovered,
        cycles_checked: checked,
    })
}

/// Independent coverage check: enumerates short cycles as edge sets by plain
/// path extension from every start vertex in both directions (no canonical
/// pruning), then tests each edge set against `b`.
pub fn coverage_by_edge_sets(h: &Graph, b: &BlockingSet, max_len: usize) -> Result<bool> {
    b.check_against(h)?;
    let mut cycles: HashSet<Vec<VertexPair>> = HashSet::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; h.n()];
    fn walk(
        h: &Graph,
        start: VertexId,
        max_len: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut [bool],
        out: &mut HashSet<Vec<VertexPair>>,
    ) {
        let at = *path.last().unwrap();
        for inc in h.neighbors(at) {
            let next = inc.neighbor;
            if next == start && path.len() >= 3 {
                let mut edges: Vec<VertexPair> = path
                    .windows(2)
                    .map(|w| VertexPair::new(w[0], w[1]))
                    .chain(std::iter::once(VertexPair::new(at, start)))
                    .collect();
                edges.sort_unstable();
                out.insert(edges);
            } else if !on_path[next.index()] && path.len() < max_len {
                on_path[next.index()] = true;
                path.push(next);
                walk(h, start, max_len, path, on_path, out);
                path.pop();
                on_path[next.index()] = false;
            }
        }
    }
    for s in h.vertices() {
        path.clear();
        path.push(s);
        on_path[s.index()] = true;
        walk(h, s, max_len, &mut path, &mut on_path, &mut cycles);
        on_path[s.index()] = false;
    }
    let ok = cycles.iter().all(|edges| match b {
        BlockingSet::Vertex(pairs) => pairs
            .iter()
            .any(|p| edges.binary_search(&p.edge).is_ok() && edges.iter().any(|e| e.contains(p.blocker))),
        BlockingSet::Edge(pairs) => pairs
            .iter()
            .any(|p| edges.binary_search(&p.first).is_ok() && edges.binary_search(&p.second).is_ok()),
    });
    Ok(ok)
}

/// `ceil(n / (2f))`.
pub fn sample_size(n: usize, f: usize) -> Result<usize> {
    if f == 0 {
        return Err(Error::InvalidParams("subsampling needs f >= 1".into()));
    }
    Ok(n.div_ceil(2 * f))
}

/// Probability that `arity` fixed distinct vertices all land in a uniform
/// sample of exactly `sample` of the `n` vertices.
pub fn survival_probability(n: usize, sample: usize, arity: usize) -> f64 {
    if sample < arity || n < arity {
        return 0.0;
    }
    (0..arity).map(|i| (sample - i) as f64 / (n - i) as f64).product()
}

/// Survival probability of an edge (`arity` 2) or a blocking triple
/// (`arity` 3) under a sample of `ceil(n / (2f))` vertices.
pub fn edge_survival_probability(n: usize, f: usize, arity: usize) -> Result<f64> {
    Ok(survival_probability(n, sample_size(n, f)?, arity))
}

#[derive(Debug, Clone)]
pub struct Subsample {
    /// Surviving original vertex ids; `kept[i]` is vertex `i` of `graph`.
    pub kept: Vec<VertexId>,
    pub graph: Graph,
    pub edges_induced: usize,
    pub pairs_surviving: usize,
    pub edges_final: usize,
    pub girth: Option<usize>,
}

impl Subsample {
    pub fn girth_exceeds(&self, bound: usize) -> bool {
        self.girth.is_none_or(|g| g > bound)
    }
}

/// One draw: induced subgraph on a uniform sample of `ceil(n / (2f))`
/// vertices, minus every edge named by a blocking pair that survived whole.
pub fn subsample_once(h: &Graph, b: &BlockingSet, f: usize, seed: u64) -> Result<Subsample> {
    b.check_against(h)?;
    subsample_checked(h, b, f, seed)
}

fn subsample_checked(h: &Graph, b: &BlockingSet, f: usize, seed: u64) -> Result<Subsample> {
    let size = sample_size(h.n(), f)?;
    if size > h.n() {
        return Err(Error::SampleTooLarge { sample: size, n: h.n() });
    }
    let mut order: Vec<VertexId> = h.vertices().collect();
    order.shuffle(&mut rng_from(seed));
    let mut kept = order[..size].to_vec();
    kept.sort_unstable();
    let mut inside = vec![false; h.n()];
    for v in &kept {
        inside[v.index()] = true;
    }
    let edge_in = |e: VertexPair| inside[e.lo().index()] && inside[e.hi().index()];

    let edges_induced = h.edges().iter().filter(|e| edge_in(e.pair())).count();
    let mut removed: HashSet<VertexPair> = HashSet::new();
    let mut pairs_surviving = 0;
    match b {
        BlockingSet::Vertex(pairs) => {
            for p in pairs.iter().filter(|p| inside[p.blocker.index()] && edge_in(p.edge)) {
                pairs_surviving += 1;
                removed.insert(p.edge);
            }
        }
        BlockingSet::Edge(pairs) => {
            for p in pairs.iter().filter(|p| edge_in(p.first) && edge_in(p.second)) {
                pairs_surviving += 1;
                removed.insert(p.first);
                removed.insert(p.second);
            }
        }
    }
    let pruned = h.filter_edges(|e| !removed.contains(&e.pair()));
    let graph = pruned.induced_subgraph(&kept)?;
    let edges_final = graph.edge_count();
    let girth = girth(&graph);
    Ok(Subsample {
        kept,
        graph,
        edges_induced,
        pairs_surviving,
        edges_final,
        girth,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub edges_induced: usize,
    pub pairs_surviving: usize,
    pub edges_final: usize,
    pub girth_ok: bool,
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub mean: f64,
    pub std_err: f64,
}

impl RateEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        if xs.is_empty() {
            return RateEstimate {
                mean: 0.0,
                std_err: 0.0,
            };
        }
        let mean = xs.iter().sum::<f64>() / n;
        if xs.len() < 2 {
            return RateEstimate { mean, std_err: 0.0 };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        RateEstimate {
            mean,
            std_err: (var / n).sqrt(),
        }
    }

    /// `|mean - expected| <= z * std_err`. A zero standard error demands
    /// agreement to rounding.
    pub fn agrees_with(&self, expected: f64, z: f64) -> bool {
        let diff = (self.mean - expected).abs();
        if self.std_err == 0.0 {
            diff <= 1e-12
        } else {
            diff <= z * self.std_err
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubsampleReport {
    pub trials: usize,
    pub sample_size: usize,
    pub blocking_length: usize,
    pub rows: Vec<TrialRow>,
    pub mean_final: f64,
    pub min_final: usize,
    pub girth_pass_rate: f64,
    /// `m / (4 f^2) - |B| / (8 f^3)`, the asymptotic expectation bound.
    pub predicted_lower_bound: f64,
    /// `m * p2 - sum over pairs of p_arity`, exact at this `n`.
    pub exact_expectation_bound: f64,
    pub edge_survival_expected: f64,
    pub pair_survival_expected: f64,
    pub edge_survival: RateEstimate,
    pub pair_survival: RateEstimate,
    /// Sample of at most two vertices: every subgraph is trivially acyclic.
    pub degenerate: bool,
}

impl SubsampleReport {
    pub const CSV_HEADER: &'static str = "trial,seed,edges_induced,pairs_surviving,edges_final,girth_ok";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.trial, r.seed, r.edges_induced, r.pairs_surviving, r.edges_final, r.girth_ok
            ));
        }
        out
    }
}

/// Repeats [`subsample_once`] with per-trial seeds derived from `seed`.
pub fn subsample_experiment(
    h: &Graph,
    b: &BlockingSet,
    f: usize,
    blocking_length: usize,
    trials: usize,
    seed: u64,
) -> Result<SubsampleReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("need at least one trial".into()));
    }
    b.check_against(h)?;
    let size = sample_size(h.n(), f)?;
    let rows: Vec<TrialRow> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let s = derive_seed(seed, trial as u64);
            subsample_checked(h, b, f, s).map(|out| TrialRow {
                trial,
                seed: s,
                edges_induced: out.edges_induced,
                pairs_surviving: out.pairs_surviving,
                edges_final: out.edges_final,
                girth_ok: out.girth_exceeds(blocking_length),
            })
        })
        .collect::<Result<_>>()?;

    let n = h.n();
    let m = h.edge_count();
    let p2 = survival_probability(n, size, 2);
    let arities = b.arities();
    let pair_expect: f64 = arities.iter().map(|&a| survival_probability(n, size, a)).sum();
    let pair_survival_expected = if b.is_empty() {
        0.0
    } else {
        pair_expect / b.len() as f64
    };
    let ff = f as f64;

    let edge_rates: Vec<f64> = rows
        .iter()
        .map(|r| if m == 0 { 0.0 } else { r.edges_induced as f64 / m as f64 })
        .collect();
    let pair_rates: Vec<f64> = rows
        .iter()
        .map(|r| {
            if b.is_empty() {
                0.0
            } else {
                r.pairs_surviving as f64 / b.len() as f64
            }
        })
        .collect();

    Ok(SubsampleReport {
        trials,
        sample_size: size,
        blocking_length,
        mean_final: rows.iter().map(|r| r.edges_final as f64).sum::<f64>() / trials as f64,
        min_final: rows.iter().map(|r| r.edges_final).min().unwrap_or(0),
        girth_pass_rate: rows.iter().filter(|r| r.girth_ok).count() as f64 / trials as f64,
        predicted_lower_bound: m as f64 / (4.0 * ff * ff) - b.len() as f64 / (8.0 * ff * ff * ff),
        exact_expectation_bound: m as f64 * p2 - pair_expect,
        edge_survival_expected: p2,
        pair_survival_expected,
        edge_survival: RateEstimate::from_samples(&edge_rates),
        pair_survival: RateEstimate::from_samples(&pair_rates),
        degenerate: size <= 2,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, cycle_graph};
    use crate::graph::girth_exceeds;
    use crate::spanner::{ft_greedy_spanner, SpannerParams};

    fn k4_trace() -> (Graph, GreedyTrace) {
        let r = ft_greedy_spanner(&complete_graph(4), SpannerParams::vertex(3.0, 1).unwrap()).unwrap();
        (r.spanner, r.trace)
    }

    #[test]
    fn pair_invariants() {
        assert!(BlockingPair::new(VertexId(0), VertexPair::new(0, 1)).is_err());
        assert!(BlockingPair::new(VertexId(2), VertexPair::new(0, 1)).is_ok());
        let e = VertexPair::new(0, 1);
        assert!(EdgeBlockingPair::new(e, e).is_err());
        let a = EdgeBlockingPair::new(VertexPair::new(2, 3), e).unwrap();
        assert_eq!(a, EdgeBlockingPair::new(e, VertexPair::new(2, 3)).unwrap());
        assert_eq!(a.vertex_count(), 4);
    }

    #[test]
    fn k4_extraction() {
        let (h, trace) = k4_trace();
        let b = extract_blocking_set(&trace).unwrap();
        let BlockingSet::Vertex(pairs) = &b else {
            panic!("vertex kind expected")
        };
        let got: Vec<(usize, (usize, usize))> = pairs
            .iter()
            .map(|p| (p.blocker().0, (p.edge().lo().0, p.edge().hi().0)))
            .collect();
        assert_eq!(got, vec![(0, (1, 2)), (0, (1, 3))]);
        assert!(b.len() <= h.edge_count());
        let verdict = verify_blocking_set(&h, &b, 4).unwrap();
        assert!(verdict.covered);
        assert_eq!(verdict.cycles_checked, 3);
        assert!(coverage_by_edge_sets(&h, &b, 4).unwrap());
    }

    #[test]
    fn f0_trace_blocks_nothing() {
        let r = ft_greedy_spanner(&complete_graph(5), SpannerParams::vertex(3.0, 0).unwrap()).unwrap();
        assert!(extract_blocking_set(&r.trace).unwrap().is_empty());
    }

    #[test]
    fn saturated_k4_bound() {
        let r = ft_greedy_spanner(&complete_graph(4), SpannerParams::vertex(3.0, 2).unwrap()).unwrap();
        assert_eq!(r.spanner.edge_count(), 6);
        let b = extract_blocking_set(&r.trace).unwrap();
        assert!(b.len() <= 12);
        assert!(verify_blocking_set(&r.spanner, &b, 4).unwrap().covered);
    }

    #[test]
    fn empty_set_on_c5() {
        let c5 = cycle_graph(5).unwrap();
        let empty = BlockingSet::empty(BlockingKind::Vertex);
        let v = verify_blocking_set(&c5, &empty, 5).unwrap();
        assert!(!v.covered);
        assert_eq!(v.first_uncovered.unwrap().len(), 5);
        assert!(verify_blocking_set(&c5, &empty, 4).unwrap().covered);
        assert!(!coverage_by_edge_sets(&c5, &empty, 5).unwrap());
    }

    #[test]
    fn absent_edge_is_an_error() {
        let c5 = cycle_graph(5).unwrap();
        let mut b = BlockingSet::empty(BlockingKind::Vertex);
        b.insert_vertex_pair(VertexId(0), VertexPair::new(2, 4)).unwrap();
        assert!(matches!(verify_blocking_set(&c5, &b, 5), Err(Error::MissingEdge(2, 4))));
    }

    #[test]
    fn sample_sizes_and_probabilities() {
        assert_eq!(sample_size(10, 1).unwrap(), 5);
        assert_eq!(sample_size(12, 4).unwrap(), 2);
        assert!(sample_size(10, 0).is_err());
        assert!((edge_survival_probability(4, 1, 2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((edge_survival_probability(6, 1, 3).unwrap() - 1.0 / 20.0).abs() < 1e-15);
        assert_eq!(edge_survival_probability(12, 4, 3).unwrap(), 0.0);
        let f = 3.0;
        let p = edge_survival_probability(6_000_000, 3, 2).unwrap();
        assert!((p * 4.0 * f * f - 1.0).abs() < 1e-5);
    }

    #[test]
    fn k4_subsample_is_acyclic() {
        let (h, trace) = k4_trace();
        let b = extract_blocking_set(&trace).unwrap();
        for seed in 0..20 {
            let s = subsample_once(&h, &b, 1, seed).unwrap();
            assert_eq!(s.kept.len(), 2);
            assert!(girth_exceeds(&s.graph, 4));
        }
    }

    #[test]
    fn empty_blocking_gives_induced_subgraph() {
        let g = cycle_graph(10).unwrap();
        let b = BlockingSet::empty(BlockingKind::Vertex);
        let s = subsample_once(&g, &b, 1, 9).unwrap();
        assert_eq!(s.kept.len(), 5);
        assert_eq!(s.graph.edge_count(), s.edges_induced);
        assert_eq!(s.graph, g.induced_subgraph(&s.kept).unwrap());
    }

    #[test]
    fn single_trial_matches_single_draw() {
        let (h, trace) = k4_trace();
        let b = extract_blocking_set(&trace).unwrap();
        let rep = subsample_experiment(&h, &b, 1, 4, 1, 42).unwrap();
        let once = subsample_once(&h, &b, 1, rep.rows[0].seed).unwrap();
        assert_eq!(rep.rows[0].edges_final, once.edges_final);
        assert_eq!(rep.rows[0].edges_induced, once.edges_induced);
        assert_eq!(rep.min_final, once.edges_final);
        assert_eq!(rep.girth_pass_rate, 1.0);
        assert!(rep.degenerate);
        assert!(rep.to_csv().starts_with(SubsampleReport::CSV_HEADER));
    }

    #[test]
    fn rate_estimate() {
        let r = RateEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(r.mean, 2.5);
        assert!((r.std_err - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-12);
        assert!(r.agrees_with(2.5, 0.0));
    }
}
