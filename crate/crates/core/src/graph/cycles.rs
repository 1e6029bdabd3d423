//! Girth and bounded-length cycle enumeration. Both count edges and ignore
//! weights.

use std::collections::VecDeque;
use std::fmt;
use std::ops::ControlFlow;

use super::{Graph, VertexId, VertexPair};

/// A simple cycle in canonical form: the smallest vertex first, oriented
/// toward its smaller neighbour on the cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<VertexId>,
}

impl Cycle {
    /// Canonicalises an arbitrary rotation/reflection of a vertex cycle.
    pub fn from_vertices(mut vertices: Vec<VertexId>) -> Self {
        let len = vertices.len();
        assert!(len >= 3, "a cycle needs at least three vertices");
        let start = (0..len).min_by_key(|&i| vertices[i]).unwrap();
        vertices.rotate_left(start);
        if vertices[len - 1] < vertices[1] {
            vertices[1..].reverse();
        }
        Cycle { vertices }
    }

    /// Number of edges (equal to the number of vertices).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = VertexPair> + '_ {
        let len = self.vertices.len();
        (0..len).map(move |i| VertexPair::new(self.vertices[i], self.vertices[(i + 1) % len]))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, pair: VertexPair) -> bool {
        self.edges().any(|e| e == pair)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Length of the shortest cycle in edges, `None` for a forest.
///
/// BFS from every root; a non-tree edge `(x, y)` closes a closed walk of
/// length `d(x) + d(y) + 1` through the root, and the minimum over all roots
/// is attained by a genuine cycle.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for inc in g.neighbors(VertexId(x)) {
                let y = inc.neighbor.index();
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// `girth(g) > bound`, treating forests as infinite girth.
pub fn girth_exceeds(g: &Graph, bound: usize) -> bool {
    girth(g).is_none_or(|len| len > bound)
}

struct CycleWalk<'a, F> {
    g: &'a Graph,
    max_len: usize,
    start: usize,
    path: Vec<VertexId>,
    on_path: Vec<bool>,
    // hop distance back to `start` using only vertices >= start
    home: Vec<usize>,
    visit: F,
}

impl<F: FnMut(&Cycle) -> ControlFlow<()>> CycleWalk<'_, F> {
    fn extend(&mut self) -> ControlFlow<()> {
        let x = *self.path.last().unwrap();
        let len = self.path.len();
        for inc in self.g.neighbors(x) {
            let y = inc.neighbor;
            if y.index() == self.start {
                if len >= 3 && self.path[1] < self.path[len - 1] {
                    (self.visit)(&Cycle {
                        vertices: self.path.clone(),
                    })?;
                }
                continue;
            }
            if y.index() < self.start || self.on_path[y.index()] {
                continue;
            }
            // after stepping to y the path has `len` edges and needs at least
            // home[y] more to close
            if self.home[y.index()] == usize::MAX || len + self.home[y.index()] > self.max_len {
                continue;
            }
            self.on_path[y.index()] = true;
            self.path.push(y);
            let flow = self.extend();
            self.path.pop();
            self.on_path[y.index()] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` once for every simple cycle with at most `max_len` edges, in
/// canonical form. Stops early when `visit` breaks.
pub fn for_each_short_cycle<F>(g: &Graph, max_len: usize, visit: F) -> ControlFlow<()>
where
    F: FnMut(&Cycle) -> ControlFlow<()>,
{
    let n = g.n();
    let mut walk = CycleWalk {
        g,
        max_len,
        start: 0,
        path: Vec::with_capacity(max_len + 1),
        on_path: vec![false; n],
        home: vec![usize::MAX; n],
        visit,
    };
    if max_len < 3 {
        return ControlFlow::Continue(());
    }
    let mut queue = VecDeque::new();
    for s in 0..n {
        walk.start = s;
        walk.home.iter_mut().for_each(|h| *h = usize::MAX);
        walk.home[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for inc in g.neighbors(VertexId(x)) {
                let y = inc.neighbor.index();
                if y > s && walk.home[y] == usize::MAX {
                    walk.home[y] = walk.home[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        walk.path.clear();
        walk.path.push(VertexId(s));
        walk.on_path[s] = true;
        let flow = walk.extend();
        walk.on_path[s] = false;
        flow?;
    }
    ControlFlow::Continue(())
}

/// Every simple cycle with at most `max_len` edges, each exactly once.
pub fn enumerate_short_cycles(g: &Graph, max_len: usize) -> Vec<Cycle> {
    let mut out = Vec::new();
    let _ = for_each_short_cycle(g, max_len, |c| {
        out.push(c.clone());
        ControlFlow::Continue(())
    });
    out
}
