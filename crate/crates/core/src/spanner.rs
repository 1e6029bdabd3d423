//! Greedy spanners, plain and fault tolerant.
//!
//! Both constructions scan the edges of `G` once in canonical order
//! (weight, then smaller endpoint, then larger endpoint) and insert an edge
//! into the partial spanner `H` when its endpoints are too far apart in `H`.
//! The fault-tolerant variant asks whether *some* fault set of size at most
//! `f` pushes them too far apart, and records the fault set it found.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, FaultMode, FaultSet, Graph, PathSearch, StretchCmp, VertexId, VertexPair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpannerParams {
    pub stretch: f64,
    pub faults: usize,
    pub mode: FaultMode,
}

impl SpannerParams {
    pub fn new(stretch: f64, faults: usize, mode: FaultMode) -> Result<Self> {
        let p = SpannerParams { stretch, faults, mode };
        p.validate()?;
        Ok(p)
    }

    pub fn vertex(stretch: f64, faults: usize) -> Result<Self> {
        Self::new(stretch, faults, FaultMode::Vertex)
    }

    pub fn edge(stretch: f64, faults: usize) -> Result<Self> {
        Self::new(stretch, faults, FaultMode::Edge)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.stretch.is_finite() && self.stretch >= 1.0) {
            return Err(Error::InvalidParams(format!(
                "stretch must be >= 1, got {}",
                self.stretch
            )));
        }
        Ok(())
    }

    /// Cycle length covered by blocking sets: `ceil(k) + 1`.
    pub fn blocking_length(&self) -> usize {
        self.stretch.ceil() as usize + 1
    }
}

/// How `fault_witness` searches for a qualifying fault set. All three return
/// the same set: the lexicographically first among those of minimum size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WitnessOracle {
    /// Every subset of all vertices (edges) of `H`, by increasing size.
    Exhaustive,
    /// Same enumeration restricted to elements on some `u`-`v` path within
    /// the bound.
    Candidates,
    /// Bounded search tree: any qualifying set must hit the current shortest
    /// path, so branch on its candidate elements.
    #[default]
    Branching,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Accepted(FaultSet),
    Rejected,
}

impl Decision {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Decision::Accepted(_))
    }

    pub fn witness(&self) -> Option<&FaultSet> {
        match self {
            Decision::Accepted(f) => Some(f),
            Decision::Rejected => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub edge: Edge,
    pub decision: Decision,
}

/// Every processed edge in order, with the witness fault set of each
/// accepted edge.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyTrace {
    pub n: usize,
    pub params: SpannerParams,
    pub entries: Vec<TraceEntry>,
}

impl GreedyTrace {
    pub fn accepted(&self) -> impl Iterator<Item = (&Edge, &FaultSet)> {
        self.entries
            .iter()
            .filter_map(|e| e.decision.witness().map(|w| (&e.edge, w)))
    }

    pub fn accepted_count(&self) -> usize {
        self.accepted().count()
    }

    /// Rebuilds the spanner from the accepted entries.
    pub fn replay(&self) -> Result<Graph> {
        Graph::new(self.n, self.accepted().map(|(e, _)| *e))
    }

    /// Structural checks: witness sizes within budget, witness modes match,
    /// and witnesses never contain the edge itself or its endpoints.
    pub fn validate(&self) -> Result<()> {
        for (e, w) in self.accepted() {
            if w.mode() != self.params.mode {
                return Err(Error::MalformedTrace(format!(
                    "edge {} has a {} witness in a {} trace",
                    e.pair(),
                    w.mode(),
                    self.params.mode
                )));
            }
            if w.len() > self.params.faults {
                return Err(Error::MalformedTrace(format!(
                    "witness {} of edge {} exceeds f = {}",
                    w,
                    e.pair(),
                    self.params.faults
                )));
            }
            if w.contains_vertex(e.u) || w.contains_vertex(e.v) || w.contains_edge(e.pair()) {
                return Err(Error::MalformedTrace(format!(
                    "witness {} of edge {} contains the edge or an endpoint",
                    w,
                    e.pair()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SpannerResult {
    pub spanner: Graph,
    pub trace: GreedyTrace,
}

/// Edge ids of `g` sorted by (weight, smaller endpoint, larger endpoint).
pub fn canonical_order(g: &Graph) -> Vec<EdgeId> {
    let mut ids: Vec<EdgeId> = (0..g.edge_count()).map(EdgeId).collect();
    ids.sort_by(|&a, &b| {
        let (ea, eb) = (g.edge(a), g.edge(b));
        ea.weight.total_cmp(&eb.weight).then_with(|| ea.pair().cmp(&eb.pair()))
    });
    ids
}

/// Classic greedy `k`-spanner: keep an edge when `dist_H(u, v) > k * w`.
pub fn greedy_spanner(g: &Graph, stretch: f64) -> Result<SpannerResult> {
    let params = SpannerParams::vertex(stretch, 0)?;
    let cmp = StretchCmp::for_graph(g, stretch);
    let mut h = Graph::empty(g.n());
    let mut search = PathSearch::new(g.n());
    let mut entries = Vec::with_capacity(g.edge_count());
    for id in canonical_order(g) {
        let e = *g.edge(id);
        let bound = stretch * e.weight;
        let d = search.distance(&h, e.u, e.v, Some((bound, cmp)));
        let decision = if cmp.exceeds(d, bound) {
            h.push_edge(e)?;
            Decision::Accepted(FaultSet::empty(FaultMode::Vertex))
        } else {
            Decision::Rejected
        };
        entries.push(TraceEntry { edge: e, decision });
    }
    Ok(SpannerResult {
        spanner: h,
        trace: GreedyTrace {
            n: g.n(),
            params,
            entries,
        },
    })
}

/// Fault-tolerant greedy spanner with the default witness oracle.
pub fn ft_greedy_spanner(g: &Graph, params: SpannerParams) -> Result<SpannerResult> {
    ft_greedy_spanner_with(g, params, WitnessOracle::default())
}

pub fn ft_greedy_spanner_with(g: &Graph, params: SpannerParams, oracle: WitnessOracle) -> Result<SpannerResult> {
    params.validate()?;
    let cmp = StretchCmp::for_graph(g, params.stretch);
    let mut h = Graph::empty(g.n());
    let mut search = PathSearch::new(g.n());
    let mut entries = Vec::with_capacity(g.edge_count());
    for id in canonical_order(g) {
        let e = *g.edge(id);
        let query = WitnessSearch {
            bound: params.stretch * e.weight,
            budget: params.faults,
            mode: params.mode,
            oracle,
            cmp,
        };
        let decision = match query.run(&h, e.u, e.v, &mut search) {
            Some(witness) => {
                h.push_edge(e)?;
                Decision::Accepted(witness)
            }
            None => Decision::Rejected,
        };
        entries.push(TraceEntry { edge: e, decision });
    }
    Ok(SpannerResult {
        spanner: h,
        trace: GreedyTrace {
            n: g.n(),
            params,
            entries,
        },
    })
}

/// Finds a set `F` of at most `budget` vertices (edges), never containing
/// `u` or `v`, with `dist_{H \ F}(u, v) > bound`.
///
/// Returns `None` exactly when no such set exists.
pub fn fault_witness(
    h: &Graph,
    u: VertexId,
    v: VertexId,
    bound: f64,
    budget: usize,
    mode: FaultMode,
) -> Result<Option<FaultSet>> {
    let cmp = StretchCmp::for_graph(h, bound);
    WitnessSearch {
        bound,
        budget,
        mode,
        oracle: WitnessOracle::default(),
        cmp,
    }
    .find(h, u, v)
}

/// A configured witness query; see [`fault_witness`].
#[derive(Debug, Clone, Copy)]
pub struct WitnessSearch {
    pub bound: f64,
    pub budget: usize,
    pub mode: FaultMode,
    pub oracle: WitnessOracle,
    pub cmp: StretchCmp,
}

impl WitnessSearch {
    pub fn find(&self, h: &Graph, u: VertexId, v: VertexId) -> Result<Option<FaultSet>> {
        h.check_vertex(u)?;
        h.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidParams("witness query needs distinct endpoints".into()));
        }
        let mut search = PathSearch::new(h.n());
        Ok(self.run(h, u, v, &mut search))
    }

    fn run(&self, h: &Graph, u: VertexId, v: VertexId, search: &mut PathSearch) -> Option<FaultSet> {
        let mut ctx = Ctx {
            h,
            u,
            v,
            q: self,
            search,
        };
        let found = match self.oracle {
            WitnessOracle::Exhaustive => {
                let universe = ctx.universe();
                ctx.first_by_enumeration(&universe)
            }
            WitnessOracle::Candidates => {
                if ctx.too_far() {
                    return Some(FaultSet::empty(self.mode));
                }
                let cands = ctx.candidates();
                ctx.first_by_enumeration(&cands)
            }
            WitnessOracle::Branching => {
                if ctx.too_far() {
                    return Some(FaultSet::empty(self.mode));
                }
                let cands = ctx.candidates();
                ctx.first_by_branching(&cands)
            }
        }?;
        Some(ctx.to_fault_set(&found))
    }
}

/// Per-query state. Elements are vertex indices in vertex mode and edge
/// indices of `h` in edge mode.
struct Ctx<'a> {
    h: &'a Graph,
    u: VertexId,
    v: VertexId,
    q: &'a WitnessSearch,
    search: &'a mut PathSearch,
}

impl Ctx<'_> {
    fn block(&mut self, item: usize, on: bool) {
        match self.q.mode {
            FaultMode::Vertex => self.search.set_vertex_blocked(VertexId(item), on),
            FaultMode::Edge => self.search.set_edge_blocked(EdgeId(item), on),
        }
    }

    fn too_far(&mut self) -> bool {
        let d = self
            .search
            .distance(self.h, self.u, self.v, Some((self.q.bound, self.q.cmp)));
        self.q.cmp.exceeds(d, self.q.bound)
    }

    fn is_query_edge(&self, item: usize) -> bool {
        self.pair_of(item) == VertexPair::new(self.u, self.v)
    }

    fn pair_of(&self, item: usize) -> VertexPair {
        self.h.edge(EdgeId(item)).pair()
    }

    /// Items in lexicographic order: vertex id, or edge endpoint pair.
    fn sort_items(&self, items: &mut [usize]) {
        if self.q.mode == FaultMode::Edge {
            items.sort_by_key(|&e| self.pair_of(e));
        } else {
            items.sort_unstable();
        }
    }

    fn universe(&self) -> Vec<usize> {
        let mut items: Vec<usize> = match self.q.mode {
            FaultMode::Vertex => (0..self.h.n())
                .filter(|&x| x != self.u.index() && x != self.v.index())
                .collect(),
            FaultMode::Edge => (0..self.h.edge_count()).filter(|&e| !self.is_query_edge(e)).collect(),
        };
        self.sort_items(&mut items);
        items
    }

    /// Elements lying on some `u`-`v` path of length within the bound.
    fn candidates(&mut self) -> Vec<usize> {
        let (bound, cmp) = (self.q.bound, self.q.cmp);
        let du = self.search.distances_within(self.h, self.u, bound, cmp);
        let dv = self.search.distances_within(self.h, self.v, bound, cmp);
        let mut items: Vec<usize> = match self.q.mode {
            FaultMode::Vertex => (0..self.h.n())
                .filter(|&x| x != self.u.index() && x != self.v.index())
                .filter(|&x| cmp.within(du[x] + dv[x], bound))
                .collect(),
            FaultMode::Edge => (0..self.h.edge_count())
                .filter(|&id| !self.is_query_edge(id))
                .filter(|&id| {
                    let e = self.h.edge(EdgeId(id));
                    let (a, b) = (e.u.index(), e.v.index());
                    let through = (du[a] + e.weight + dv[b]).min(du[b] + e.weight + dv[a]);
                    cmp.within(through, bound)
                })
                .collect(),
        };
        self.sort_items(&mut items);
        items
    }

    fn qualifies(&mut self, set: &[usize]) -> bool {
        for &x in set {
            self.block(x, true);
        }
        let far = self.too_far();
        for &x in set {
            self.block(x, false);
        }
        far
    }

    fn first_by_enumeration(&mut self, items: &[usize]) -> Option<Vec<usize>> {
        for size in 0..=self.q.budget.min(items.len()) {
            for combo in items.iter().copied().combinations(size) {
                if self.qualifies(&combo) {
                    return Some(combo);
                }
            }
        }
        None
    }

    /// Minimum size by iterative deepening, then the lexicographically first
    /// set of that size, fixed one element at a time.
    fn first_by_branching(&mut self, cands: &[usize]) -> Option<Vec<usize>> {
        let slots = match self.q.mode {
            FaultMode::Vertex => self.h.n(),
            FaultMode::Edge => self.h.edge_count(),
        };
        let mut rank = vec![usize::MAX; slots];
        for (i, &c) in cands.iter().enumerate() {
            rank[c] = i;
        }
        let size = (1..=self.q.budget.min(cands.len())).find(|&s| self.hittable(&rank, 0, s))?;
        let mut chosen = Vec::with_capacity(size);
        let mut lower = 0;
        while chosen.len() < size {
            let remaining = size - chosen.len() - 1;
            let idx = (lower..cands.len())
                .find(|&i| {
                    self.block(cands[i], true);
                    let ok = self.hittable(&rank, i + 1, remaining);
                    self.block(cands[i], false);
                    ok
                })
                .expect("a minimum-size witness extends the current prefix");
            chosen.push(cands[idx]);
            self.block(cands[idx], true);
            lower = idx + 1;
        }
        for &c in &chosen {
            self.block(c, false);
        }
        Some(chosen)
    }

    /// Elements of the path just found that may still be removed.
    fn path_hitters(&self, rank: &[usize], min_rank: usize) -> Vec<usize> {
        let path = self.search.path_to(self.h, self.v);
        let allowed = |x: usize| rank[x] != usize::MAX && rank[x] >= min_rank;
        match self.q.mode {
            FaultMode::Vertex => self.path_vertices(&path).into_iter().filter(|&x| allowed(x)).collect(),
            FaultMode::Edge => path.iter().map(|e| e.index()).filter(|&x| allowed(x)).collect(),
        }
    }

    fn path_vertices(&self, path: &[EdgeId]) -> Vec<usize> {
        // walk from v toward u; interior vertices only
        let mut out = Vec::with_capacity(path.len());
        let mut at = self.v.index();
        for &e in path {
            let edge = self.h.edge(e);
            at = if edge.u.index() == at {
                edge.v.index()
            } else {
                edge.u.index()
            };
            if at != self.u.index() {
                out.push(at);
            }
        }
        out
    }

    /// Can at most `budget` further elements of rank `>= min_rank` push the
    /// distance past the bound, given the elements already blocked?
    fn hittable(&mut self, rank: &[usize], min_rank: usize, budget: usize) -> bool {
        if self.too_far() {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let hitters = self.path_hitters(rank, min_rank);
        if hitters.is_empty() || self.packing_exceeds(rank, min_rank, budget, &hitters) {
            return false;
        }
        for x in hitters {
            self.block(x, true);
            let ok = self.hittable(rank, min_rank, budget - 1);
            self.block(x, false);
            if ok {
                return true;
            }
        }
        false
    }

    /// Greedily packs short paths whose removable elements are pairwise
    /// disjoint. More than `budget` of them means no set of `budget`
    /// elements hits them all.
    fn packing_exceeds(&mut self, rank: &[usize], min_rank: usize, budget: usize, first: &[usize]) -> bool {
        if budget < 1 {
            return false;
        }
        let mut blocked: Vec<usize> = first.to_vec();
        for &x in first {
            self.block(x, true);
        }
        let mut packed = 1;
        let mut exceeded = false;
        while packed <= budget {
            if self.too_far() {
                break;
            }
            let hitters = self.path_hitters(rank, min_rank);
            if hitters.is_empty() {
                // an unhittable path: nothing can succeed
                exceeded = true;
                break;
            }
            for &x in &hitters {
                self.block(x, true);
            }
            blocked.extend(hitters);
            packed += 1;
        }
        if packed > budget {
            exceeded = true;
        }
        for x in blocked {
            self.block(x, false);
        }
        exceeded
    }

    fn to_fault_set(&self, items: &[usize]) -> FaultSet {
        match self.q.mode {
            FaultMode::Vertex => FaultSet::vertices(items.iter().copied()),
            FaultMode::Edge => FaultSet::edges(items.iter().map(|&e| self.pair_of(e))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, cycle_graph, path_graph};

    fn pairs(g: &Graph) -> Vec<(usize, usize)> {
        g.sorted_pairs().iter().map(|p| (p.lo().0, p.hi().0)).collect()
    }

    #[test]
    fn canonical_order_breaks_ties_by_endpoints() {
        let g = Graph::from_weighted(4, &[(2, 3, 1.0), (0, 3, 2.0), (1, 0, 1.0), (0, 2, 1.0)]).unwrap();
        let order: Vec<(usize, usize)> = canonical_order(&g)
            .into_iter()
            .map(|id| (g.edge(id).u.0, g.edge(id).v.0))
            .collect();
        assert_eq!(order, vec![(0, 1), (0, 2), (2, 3), (0, 3)]);
    }

    #[test]
    fn greedy_on_k4_is_a_star() {
        let h = greedy_spanner(&complete_graph(4), 3.0).unwrap().spanner;
        assert_eq!(pairs(&h), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn greedy_keeps_trees() {
        let t = Graph::from_unit(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (0, 5)]).unwrap();
        for k in [1.0, 2.5, 7.0] {
            assert_eq!(greedy_spanner(&t, k).unwrap().spanner, t);
        }
    }

    #[test]
    fn greedy_on_c5() {
        let c5 = cycle_graph(5).unwrap();
        assert_eq!(greedy_spanner(&c5, 3.0).unwrap().spanner.edge_count(), 5);
        assert_eq!(greedy_spanner(&c5, 4.0).unwrap().spanner.edge_count(), 4);
    }

    #[test]
    fn ft_greedy_on_k4() {
        let r = ft_greedy_spanner(&complete_graph(4), SpannerParams::vertex(3.0, 1).unwrap()).unwrap();
        assert_eq!(pairs(&r.spanner), vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        let last = r.trace.entries.last().unwrap();
        assert_eq!(last.edge.pair(), VertexPair::new(2, 3));
        assert_eq!(last.decision, Decision::Rejected);
        let witnesses: Vec<String> = r.trace.accepted().map(|(_, w)| w.to_string()).collect();
        assert_eq!(witnesses, vec!["[]", "[]", "[]", "[0]", "[0]"]);
        assert_eq!(r.trace.replay().unwrap(), r.spanner);
    }

    #[test]
    fn ft_greedy_saturates() {
        for k in [1.0, 3.0, 9.0] {
            let h = ft_greedy_spanner(&complete_graph(4), SpannerParams::vertex(k, 2).unwrap())
                .unwrap()
                .spanner;
            assert_eq!(h.edge_count(), 6);
        }
    }

    #[test]
    fn ft_greedy_f0_is_greedy() {
        let g = complete_graph(7);
        let a = ft_greedy_spanner(&g, SpannerParams::vertex(3.0, 0).unwrap()).unwrap();
        let b = greedy_spanner(&g, 3.0).unwrap();
        assert_eq!(a.spanner, b.spanner);
    }

    #[test]
    fn witness_examples() {
        let p = path_graph(3);
        let (u, v) = (VertexId(0), VertexId(2));
        assert_eq!(
            fault_witness(&p, u, v, 1.0, 0, FaultMode::Vertex).unwrap(),
            Some(FaultSet::vertices(Vec::<usize>::new()))
        );
        assert_eq!(
            fault_witness(&p, u, v, 3.0, 1, FaultMode::Vertex).unwrap(),
            Some(FaultSet::vertices([1]))
        );
        assert_eq!(fault_witness(&p, u, v, 3.0, 0, FaultMode::Vertex).unwrap(), None);
        // two disjoint u-v paths of length 2: 0-1-3 and 0-2-3
        let two = Graph::from_unit(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        assert_eq!(
            fault_witness(&two, VertexId(0), VertexId(3), 3.0, 1, FaultMode::Vertex).unwrap(),
            None
        );
        assert_eq!(
            fault_witness(&two, VertexId(0), VertexId(3), 3.0, 2, FaultMode::Vertex).unwrap(),
            Some(FaultSet::vertices([1, 2]))
        );
        assert_eq!(
            fault_witness(&two, VertexId(0), VertexId(3), 3.0, 1, FaultMode::Edge).unwrap(),
            None
        );
        assert_eq!(
            fault_witness(&two, VertexId(0), VertexId(3), 3.0, 2, FaultMode::Edge).unwrap(),
            Some(FaultSet::edges([VertexPair::new(0, 1), VertexPair::new(0, 2)]))
        );
    }

    #[test]
    fn witness_rejects_bad_queries() {
        let p = path_graph(3);
        assert!(fault_witness(&p, VertexId(1), VertexId(1), 1.0, 1, FaultMode::Vertex).is_err());
        assert!(fault_witness(&p, VertexId(1), VertexId(5), 1.0, 1, FaultMode::Vertex).is_err());
    }

    #[test]
    fn witness_never_uses_the_query_edge() {
        let g = Graph::from_unit(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let w = fault_witness(&g, VertexId(0), VertexId(2), 1.0, 2, FaultMode::Edge).unwrap();
        assert_eq!(w, None);
    }

    #[test]
    fn oracles_agree_on_small_graph() {
        let g = complete_graph(6);
        for mode in [FaultMode::Vertex, FaultMode::Edge] {
            for f in 0..=2 {
                let p = SpannerParams::new(3.0, f, mode).unwrap();
                let a = ft_greedy_spanner_with(&g, p, WitnessOracle::Exhaustive).unwrap();
                let b = ft_greedy_spanner_with(&g, p, WitnessOracle::Candidates).unwrap();
                let c = ft_greedy_spanner_with(&g, p, WitnessOracle::Branching).unwrap();
                assert_eq!(a.trace, b.trace, "{mode} f={f}");
                assert_eq!(a.trace, c.trace, "{mode} f={f}");
            }
        }
    }

    #[test]
    fn invalid_params() {
        assert!(SpannerParams::vertex(0.5, 1).is_err());
        assert!(SpannerParams::vertex(f64::NAN, 1).is_err());
        assert_eq!(SpannerParams::vertex(3.0, 1).unwrap().blocking_length(), 4);
        assert_eq!(SpannerParams::vertex(2.5, 1).unwrap().blocking_length(), 4);
    }
}
