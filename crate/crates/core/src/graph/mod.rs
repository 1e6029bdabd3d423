//! Weighted undirected simple graphs.
//!
//! A [`Graph`] is immutable once built. Derived graphs (subgraphs, products,
//! spanners) are always new values.

mod cycles;
mod paths;
mod product;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use cycles::{enumerate_short_cycles, for_each_short_cycle, girth, girth_exceeds, Cycle};
pub(crate) use paths::PathSearch;
pub use paths::{shortest_path_dist, Distance, FaultMode, FaultSet, StretchCmp};
pub use product::{cartesian_product, tensor_product, ProductGraph, ProductKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of an edge inside one particular [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Unordered vertex pair, stored with the smaller id first.
///
/// This is how edges are named across graphs: an edge of a spanner and the
/// corresponding edge of its host graph share the same pair but not
/// necessarily the same [`EdgeId`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPair {
    lo: VertexId,
    hi: VertexId,
}

impl VertexPair {
    pub fn new(a: impl Into<VertexId>, b: impl Into<VertexId>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            VertexPair { lo: a, hi: b }
        } else {
            VertexPair { lo: b, hi: a }
        }
    }

    pub fn lo(self) -> VertexId {
        self.lo
    }

    pub fn hi(self) -> VertexId {
        self.hi
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    /// Shared endpoint of two pairs, if any.
    pub fn shared_endpoint(self, other: VertexPair) -> Option<VertexId> {
        [self.lo, self.hi].into_iter().find(|&x| other.contains(x))
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: impl Into<VertexId>, v: impl Into<VertexId>, weight: f64) -> Self {
        Edge {
            u: u.into(),
            v: v.into(),
            weight,
        }
    }

    pub fn unit(u: impl Into<VertexId>, v: impl Into<VertexId>) -> Self {
        Edge::new(u, v, 1.0)
    }

    pub fn pair(&self) -> VertexPair {
        VertexPair::new(self.u, self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: VertexId,
    pub edge: EdgeId,
}

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Incidence>>,
    index: HashMap<VertexPair, EdgeId>,
    integer_weights: bool,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate pairs, out-of-range
    /// endpoints and weights that are not finite and positive.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = Graph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            index: HashMap::new(),
            integer_weights: true,
        };
        for e in edges {
            g.push_edge(e)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            index: HashMap::new(),
            integer_weights: true,
        }
    }

    pub fn from_weighted(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Graph::new(n, edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)))
    }

    pub fn from_unit(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::new(n, edges.iter().map(|&(u, v)| Edge::unit(u, v)))
    }

    pub(crate) fn push_edge(&mut self, e: Edge) -> Result<()> {
        let (u, v) = (e.u.index(), e.v.index());
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !(e.weight.is_finite() && e.weight > 0.0) {
            return Err(Error::InvalidWeight { u, v, weight: e.weight });
        }
        let pair = e.pair();
        if self.index.contains_key(&pair) {
            return Err(Error::DuplicateEdge(pair.lo().index(), pair.hi().index()));
        }
        let id = EdgeId(self.edges.len());
        self.index.insert(pair, id);
        self.adjacency[u].push(Incidence {
            neighbor: e.v,
            edge: id,
        });
        self.adjacency[v].push(Incidence {
            neighbor: e.u,
            edge: id,
        });
        self.integer_weights &= e.weight.fract() == 0.0;
        self.edges.push(Edge {
            u: pair.lo(),
            v: pair.hi(),
            weight: e.weight,
        });
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId)
    }

    /// Edges in insertion order; each is stored with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    pub fn neighbors(&self, v: VertexId) -> &[Incidence] {
        &self.adjacency[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.index()].len()
    }

    pub fn find_edge(&self, pair: VertexPair) -> Option<EdgeId> {
        self.index.get(&pair).copied()
    }

    pub fn contains_pair(&self, pair: VertexPair) -> bool {
        self.index.contains_key(&pair)
    }

    pub fn weight_of(&self, pair: VertexPair) -> Option<f64> {
        self.find_edge(pair).map(|id| self.edge(id).weight)
    }

    /// True when every weight is an integer, in which case distance sums are
    /// exact and stretch comparisons need no tolerance.
    pub fn has_integer_weights(&self) -> bool {
        self.integer_weights
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.index() < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v.index(),
                n: self.n,
            })
        }
    }

    /// Edge pairs in sorted order.
    pub fn sorted_pairs(&self) -> Vec<VertexPair> {
        let mut pairs: Vec<_> = self.edges.iter().map(Edge::pair).collect();
        pairs.sort_unstable();
        pairs
    }

    /// The subgraph on the same vertex set keeping only edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(&Edge) -> bool) -> Graph {
        let mut g = Graph::empty(self.n);
        for e in self.edges.iter().filter(|e| keep(e)) {
            g.push_edge(*e).expect("subgraph of a valid graph is valid");
        }
        g
    }

    /// Induced subgraph on `kept`, relabelled so that `kept[i]` becomes vertex `i`.
    pub fn induced_subgraph(&self, kept: &[VertexId]) -> Result<Graph> {
        let mut relabel = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            self.check_vertex(v)?;
            if relabel[v.index()] != usize::MAX {
                return Err(Error::InvalidParams(format!("vertex {v} listed twice")));
            }
            relabel[v.index()] = i;
        }
        let mut g = Graph::empty(kept.len());
        for e in &self.edges {
            let (a, b) = (relabel[e.u.index()], relabel[e.v.index()]);
            if a != usize::MAX && b != usize::MAX {
                g.push_edge(Edge::new(a, b, e.weight))?;
            }
        }
        Ok(g)
    }

    /// Same vertex count, same edge pairs, same weights.
    pub fn same_edges(&self, other: &Graph) -> bool {
        self.n == other.n
            && self.edge_count() == other.edge_count()
            && self.edges.iter().all(|e| other.weight_of(e.pair()) == Some(e.weight))
    }

    /// Checks that `self` is a spanning subgraph of `host` with matching weights.
    pub fn check_subgraph_of(&self, host: &Graph) -> Result<()> {
        if self.n != host.n {
            return Err(Error::NotSubgraph(format!(
                "vertex counts differ ({} vs {})",
                self.n, host.n
            )));
        }
        for e in &self.edges {
            match host.weight_of(e.pair()) {
                Some(w) if w == e.weight => {}
                Some(w) => {
                    return Err(Error::NotSubgraph(format!(
                        "edge {} has weight {} but {} in the host",
                        e.pair(),
                        e.weight,
                        w
                    )))
                }
                None => return Err(Error::NotSubgraph(format!("edge {} is absent from the host", e.pair()))),
            }
        }
        Ok(())
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.same_edges(other)
    }
}

/// Moore-bound reference curve `n^(1 + 1/floor(k/2))` with unit constant.
///
/// Only used as a reference for plots and regressions.
pub fn moore_bound(n: usize, k: usize) -> Result<f64> {
    if n < 1 || k < 2 {
        return Err(Error::InvalidParams(format!(
            "moore_bound needs n >= 1 and k >= 2, got n={n}, k={k}"
        )));
    }
    let half = (k / 2) as f64;
    Ok((n as f64).powf(1.0 + 1.0 / half))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(Graph::from_unit(3, &[(0, 0)]), Err(Error::SelfLoop(0))));
        assert!(matches!(
            Graph::from_unit(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::from_unit(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(Graph::from_weighted(3, &[(0, 1, 0.0)]).is_err());
        assert!(Graph::from_weighted(3, &[(0, 1, -1.0)]).is_err());
        assert!(Graph::from_weighted(3, &[(0, 1, f64::NAN)]).is_err());
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = Graph::from_unit(4, &[(0, 1), (2, 1), (3, 0)]).unwrap();
        for e in g.edges() {
            assert!(g.neighbors(e.u).iter().any(|i| i.neighbor == e.v));
            assert!(g.neighbors(e.v).iter().any(|i| i.neighbor == e.u));
        }
        assert_eq!(g.degree(VertexId(1)), 2);
        assert_eq!(g.edge(EdgeId(1)).u, VertexId(1));
    }

    #[test]
    fn integer_weight_flag() {
        assert!(Graph::from_weighted(2, &[(0, 1, 3.0)]).unwrap().has_integer_weights());
        assert!(!Graph::from_weighted(2, &[(0, 1, 2.5)]).unwrap().has_integer_weights());
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::from_unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let h = g.induced_subgraph(&[VertexId(1), VertexId(2), VertexId(3)]).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.sorted_pairs(), vec![VertexPair::new(0, 1), VertexPair::new(1, 2)]);
    }

    #[test]
    fn moore_bound_values() {
        assert!((moore_bound(100, 4).unwrap() - 1000.0).abs() < 1e-9);
        assert!((moore_bound(16, 2).unwrap() - 256.0).abs() < 1e-9);
        assert!((moore_bound(100, 5).unwrap() - 1000.0).abs() < 1e-9);
        assert!(moore_bound(0, 4).is_err());
        assert!(moore_bound(10, 1).is_err());
    }
}
