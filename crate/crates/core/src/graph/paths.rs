//! Fault-aware shortest paths.
//!
//! Faults never mutate the graph. A [`PathSearch`] carries per-vertex and
//! per-edge block flags that Dijkstra consults while relaxing, plus reusable
//! scratch buffers so the many small queries issued by the witness oracle do
//! not allocate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use super::{EdgeId, Graph, VertexId, VertexPair};
use crate::error::Result;

/// A shortest-path length, or [`Distance::INFINITE`] when no path exists.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Distance(f64);

impl Distance {
    pub const INFINITE: Distance = Distance(f64::INFINITY);

    pub fn finite(value: f64) -> Self {
        debug_assert!(value.is_finite() && value >= 0.0);
        Distance(value)
    }

    pub(crate) fn from_raw(value: f64) -> Self {
        Distance(value)
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn value(self) -> Option<f64> {
        self.0.is_finite().then_some(self.0)
    }

    /// Raw value, `f64::INFINITY` for unreachable.
    pub fn as_f64(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaultMode {
    Vertex,
    Edge,
}

impl fmt::Display for FaultMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaultMode::Vertex => "vertex",
            FaultMode::Edge => "edge",
        })
    }
}

/// Vertices or edges removed from a graph. Members are kept sorted and
/// deduplicated, so equal sets compare equal and order lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaultSet {
    Vertices(Vec<VertexId>),
    Edges(Vec<VertexPair>),
}

impl FaultSet {
    pub fn empty(mode: FaultMode) -> Self {
        match mode {
            FaultMode::Vertex => FaultSet::Vertices(Vec::new()),
            FaultMode::Edge => FaultSet::Edges(Vec::new()),
        }
    }

    pub fn vertices(members: impl IntoIterator<Item = impl Into<VertexId>>) -> Self {
        let mut v: Vec<VertexId> = members.into_iter().map(Into::into).collect();
        v.sort_unstable();
        v.dedup();
        FaultSet::Vertices(v)
    }

    pub fn edges(members: impl IntoIterator<Item = VertexPair>) -> Self {
        let mut e: Vec<VertexPair> = members.into_iter().collect();
        e.sort_unstable();
        e.dedup();
        FaultSet::Edges(e)
    }

    pub fn mode(&self) -> FaultMode {
        match self {
            FaultSet::Vertices(_) => FaultMode::Vertex,
            FaultSet::Edges(_) => FaultMode::Edge,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FaultSet::Vertices(v) => v.len(),
            FaultSet::Edges(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        matches!(self, FaultSet::Vertices(vs) if vs.binary_search(&v).is_ok())
    }

    pub fn contains_edge(&self, pair: VertexPair) -> bool {
        matches!(self, FaultSet::Edges(es) if es.binary_search(&pair).is_ok())
    }

    pub fn check_against(&self, g: &Graph) -> Result<()> {
        match self {
            FaultSet::Vertices(vs) => vs.iter().try_for_each(|&v| g.check_vertex(v)),
            FaultSet::Edges(es) => es.iter().try_for_each(|p| {
                g.check_vertex(p.lo())?;
                g.check_vertex(p.hi())
            }),
        }
    }
}

impl fmt::Display for FaultSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        match self {
            FaultSet::Vertices(vs) => {
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
            }
            FaultSet::Edges(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
            }
        }
        f.write_str("]")
    }
}

/// Strict "longer than the bound" test used by both construction and
/// verification.
///
/// In exact mode values are compared directly; otherwise a relative slack of
/// `1e-9` absorbs rounding in floating-point path sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StretchCmp {
    exact: bool,
}

impl StretchCmp {
    pub const REL_EPS: f64 = 1e-9;

    pub fn exact() -> Self {
        StretchCmp { exact: true }
    }

    pub fn tolerant() -> Self {
        StretchCmp { exact: false }
    }

    /// Exact when all weights and the stretch are integers.
    pub fn for_graph(g: &Graph, stretch: f64) -> Self {
        StretchCmp {
            exact: g.has_integer_weights() && stretch.fract() == 0.0,
        }
    }

    pub fn is_exact(self) -> bool {
        self.exact
    }

    #[inline]
    pub fn exceeds(self, value: f64, bound: f64) -> bool {
        if self.exact {
            value > bound
        } else {
            value > bound + Self::REL_EPS * bound.abs().max(1.0)
        }
    }

    #[inline]
    pub fn within(self, value: f64, bound: f64) -> bool {
        !self.exceeds(value, bound)
    }
}

#[derive(Clone, Copy)]
struct HeapEntry {
    dist: f64,
    hops: u32,
    vertex: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.hops.cmp(&self.hops))
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

const NO_EDGE: usize = usize::MAX;

/// Reusable Dijkstra state with vertex and edge block flags.
///
/// Ties between equal-length paths are broken toward fewer edges, so the
/// reconstructed path has as few interior vertices as possible.
pub(crate) struct PathSearch {
    dist: Vec<f64>,
    hops: Vec<u32>,
    pred: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    heap: BinaryHeap<HeapEntry>,
    blocked_v: Vec<bool>,
    blocked_e: Vec<bool>,
}

impl PathSearch {
    pub fn new(n: usize) -> Self {
        PathSearch {
            dist: vec![f64::INFINITY; n],
            hops: vec![0; n],
            pred: vec![NO_EDGE; n],
            stamp: vec![0; n],
            epoch: 0,
            heap: BinaryHeap::new(),
            blocked_v: vec![false; n],
            blocked_e: Vec::new(),
        }
    }

    /// Grows the edge flag array to cover every edge of `g`.
    fn fit(&mut self, g: &Graph) {
        if self.blocked_e.len() < g.edge_count() {
            self.blocked_e.resize(g.edge_count(), false);
        }
        debug_assert_eq!(self.dist.len(), g.n());
    }

    pub fn set_vertex_blocked(&mut self, v: VertexId, blocked: bool) {
        self.blocked_v[v.index()] = blocked;
    }

    pub fn set_edge_blocked(&mut self, e: EdgeId, blocked: bool) {
        if self.blocked_e.len() <= e.index() {
            self.blocked_e.resize(e.index() + 1, false);
        }
        self.blocked_e[e.index()] = blocked;
    }

    /// Blocks (or unblocks) the members of `faults` as they exist in `g`.
    /// Faulted pairs that are not edges of `g` have nothing to block.
    pub fn apply(&mut self, g: &Graph, faults: &FaultSet, blocked: bool) {
        match faults {
            FaultSet::Vertices(vs) => {
                for &v in vs {
                    self.set_vertex_blocked(v, blocked);
                }
            }
            FaultSet::Edges(es) => {
                for &p in es {
                    if let Some(id) = g.find_edge(p) {
                        self.set_edge_blocked(id, blocked);
                    }
                }
            }
        }
    }

    fn begin(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.heap.clear();
    }

    #[inline]
    fn current(&self, v: usize) -> (f64, u32) {
        if self.stamp[v] == self.epoch {
            (self.dist[v], self.hops[v])
        } else {
            (f64::INFINITY, u32::MAX)
        }
    }

    #[inline]
    fn settle(&mut self, v: usize, d: f64, h: u32, pred: usize) {
        self.stamp[v] = self.epoch;
        self.dist[v] = d;
        self.hops[v] = h;
        self.pred[v] = pred;
    }

    /// Runs Dijkstra from `source`. Stops early once `target` is settled, and
    /// never relaxes past `cutoff` (vertices further than the cutoff are
    /// reported unreachable).
    fn run(&mut self, g: &Graph, source: VertexId, target: Option<VertexId>, cutoff: Option<(f64, StretchCmp)>) {
        self.fit(g);
        self.begin();
        if self.blocked_v[source.index()] {
            return;
        }
        self.settle(source.index(), 0.0, 0, NO_EDGE);
        self.heap.push(HeapEntry {
            dist: 0.0,
            hops: 0,
            vertex: source.index(),
        });
        while let Some(HeapEntry { dist, hops, vertex }) = self.heap.pop() {
            if (dist, hops) != self.current(vertex) {
                continue;
            }
            if target.is_some_and(|t| t.index() == vertex) {
                return;
            }
            for inc in g.neighbors(VertexId(vertex)) {
                let w = inc.neighbor.index();
                if self.blocked_v[w] || self.blocked_e[inc.edge.index()] {
                    continue;
                }
                let nd = dist + g.edge(inc.edge).weight;
                if let Some((bound, cmp)) = cutoff {
                    if cmp.exceeds(nd, bound) {
                        continue;
                    }
                }
                let nh = hops + 1;
                let (od, oh) = self.current(w);
                if nd < od || (nd == od && nh < oh) {
                    self.settle(w, nd, nh, inc.edge.index());
                    self.heap.push(HeapEntry {
                        dist: nd,
                        hops: nh,
                        vertex: w,
                    });
                }
            }
        }
    }

    /// Distance from `s` to `t` avoiding blocked elements, `f64::INFINITY`
    /// when unreachable (or, with a cutoff, farther than the cutoff).
    pub fn distance(&mut self, g: &Graph, s: VertexId, t: VertexId, cutoff: Option<(f64, StretchCmp)>) -> f64 {
        if self.blocked_v[t.index()] {
            return f64::INFINITY;
        }
        self.run(g, s, Some(t), cutoff);
        self.current(t.index()).0
    }

    /// Edges of the path found by the last [`PathSearch::distance`] call,
    /// listed from `t` back toward the source.
    pub fn path_to(&self, g: &Graph, t: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        if self.current(t.index()).0.is_infinite() {
            return out;
        }
        let mut v = t.index();
        while self.pred[v] != NO_EDGE {
            let e = EdgeId(self.pred[v]);
            out.push(e);
            let edge = g.edge(e);
            v = if edge.u.index() == v {
                edge.v.index()
            } else {
                edge.u.index()
            };
        }
        out
    }

    /// Full single-source distances avoiding blocked elements.
    pub fn distances_from(&mut self, g: &Graph, s: VertexId) -> Vec<f64> {
        self.run(g, s, None, None);
        (0..g.n()).map(|v| self.current(v).0).collect()
    }

    /// Single-source distances truncated at a cutoff.
    pub fn distances_within(&mut self, g: &Graph, s: VertexId, bound: f64, cmp: StretchCmp) -> Vec<f64> {
        self.run(g, s, None, Some((bound, cmp)));
        (0..g.n()).map(|v| self.current(v).0).collect()
    }
}

/// Exact shortest-path distance from `s` to `t` in `g` with `faults` deleted.
///
/// A faulted endpoint makes the pair nonexistent, reported as infinite.
pub fn shortest_path_dist(g: &Graph, s: VertexId, t: VertexId, faults: &FaultSet) -> Result<Distance> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    faults.check_against(g)?;
    if faults.contains_vertex(s) || faults.contains_vertex(t) {
        return Ok(Distance::INFINITE);
    }
    let mut search = PathSearch::new(g.n());
    search.apply(g, faults, true);
    Ok(Distance::from_raw(search.distance(g, s, t, None)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_unit(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn k4() -> Graph {
        Graph::from_unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn path_distances() {
        let g = path3();
        let d = shortest_path_dist(&g, VertexId(0), VertexId(2), &FaultSet::empty(FaultMode::Vertex)).unwrap();
        assert_eq!(d, Distance::finite(2.0));
        let d = shortest_path_dist(&g, VertexId(0), VertexId(2), &FaultSet::vertices([1])).unwrap();
        assert!(d.is_infinite());
    }

    #[test]
    fn edge_fault_in_k4() {
        let d = shortest_path_dist(
            &k4(),
            VertexId(0),
            VertexId(3),
            &FaultSet::edges([VertexPair::new(0, 3)]),
        )
        .unwrap();
        assert_eq!(d.value(), Some(2.0));
    }

    #[test]
    fn faulted_endpoint_is_infinite() {
        let d = shortest_path_dist(&k4(), VertexId(0), VertexId(3), &FaultSet::vertices([3])).unwrap();
        assert!(d.is_infinite());
    }

    #[test]
    fn out_of_range_is_error() {
        let g = path3();
        let none = FaultSet::empty(FaultMode::Vertex);
        assert!(shortest_path_dist(&g, VertexId(0), VertexId(7), &none).is_err());
        assert!(shortest_path_dist(&g, VertexId(0), VertexId(1), &FaultSet::vertices([9])).is_err());
    }

    #[test]
    fn weighted_detour() {
        let g = Graph::from_weighted(4, &[(0, 1, 1.0), (1, 3, 1.0), (0, 2, 0.5), (2, 3, 0.5), (0, 3, 5.0)]).unwrap();
        let none = FaultSet::empty(FaultMode::Vertex);
        assert_eq!(
            shortest_path_dist(&g, VertexId(0), VertexId(3), &none).unwrap().value(),
            Some(1.0)
        );
        let d = shortest_path_dist(&g, VertexId(0), VertexId(3), &FaultSet::vertices([2])).unwrap();
        assert_eq!(d.value(), Some(2.0));
        let d = shortest_path_dist(&g, VertexId(0), VertexId(3), &FaultSet::vertices([1, 2])).unwrap();
        assert_eq!(d.value(), Some(5.0));
    }

    #[test]
    fn fewest_hops_among_ties() {
        // 0-3 directly with weight 2, or 0-1-3 with two unit edges
        let g = Graph::from_weighted(4, &[(0, 1, 1.0), (1, 3, 1.0), (0, 3, 2.0)]).unwrap();
        let mut s = PathSearch::new(4);
        assert_eq!(s.distance(&g, VertexId(0), VertexId(3), None), 2.0);
        assert_eq!(s.path_to(&g, VertexId(3)).len(), 1);
    }

    #[test]
    fn cutoff_truncates() {
        let g = path3();
        let mut s = PathSearch::new(3);
        let d = s.distance(&g, VertexId(0), VertexId(2), Some((1.5, StretchCmp::exact())));
        assert!(d.is_infinite());
    }

    #[test]
    fn tolerant_comparison() {
        let c = StretchCmp::tolerant();
        assert!(!c.exceeds(3.0 + 1e-12, 3.0));
        assert!(c.exceeds(3.001, 3.0));
        assert!(StretchCmp::exact().exceeds(3.0 + 1e-12, 3.0));
    }
}
