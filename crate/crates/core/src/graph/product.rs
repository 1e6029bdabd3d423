//! Cartesian and tensor graph products.
//!
//! Product vertex `(a, b)` gets id `a * right_n + b` (row-major).

use std::fmt;

use super::{Edge, Graph, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductKind {
    Cartesian,
    Tensor,
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductKind::Cartesian => "cartesian",
            ProductKind::Tensor => "tensor",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ProductGraph {
    pub graph: Graph,
    pub kind: ProductKind,
    left_n: usize,
    right_n: usize,
}

impl ProductGraph {
    pub fn left_n(&self) -> usize {
        self.left_n
    }

    pub fn right_n(&self) -> usize {
        self.right_n
    }

    pub fn vertex(&self, left: VertexId, right: VertexId) -> VertexId {
        VertexId(left.index() * self.right_n + right.index())
    }

    /// Splits a product vertex into its `(left, right)` coordinates.
    pub fn project(&self, v: VertexId) -> (VertexId, VertexId) {
        (VertexId(v.index() / self.right_n), VertexId(v.index() % self.right_n))
    }
}

fn check_nonempty(left: &Graph, right: &Graph) -> Result<()> {
    if left.n() == 0 || right.n() == 0 {
        return Err(Error::InvalidParams("graph products need nonempty factors".into()));
    }
    Ok(())
}

/// `left □ right`: an edge changes exactly one coordinate along an edge of
/// that factor, and keeps that factor edge's weight.
pub fn cartesian_product(left: &Graph, right: &Graph) -> Result<ProductGraph> {
    check_nonempty(left, right)?;
    let rn = right.n();
    let id = |a: VertexId, b: VertexId| a.index() * rn + b.index();
    let mut edges = Vec::with_capacity(left.n() * right.edge_count() + left.edge_count() * rn);
    for a in left.vertices() {
        for e in right.edges() {
            edges.push(Edge::new(id(a, e.u), id(a, e.v), e.weight));
        }
    }
    for e in left.edges() {
        for b in right.vertices() {
            edges.push(Edge::new(id(e.u, b), id(e.v, b), e.weight));
        }
    }
    Ok(ProductGraph {
        graph: Graph::new(left.n() * rn, edges)?,
        kind: ProductKind::Cartesian,
        left_n: left.n(),
        right_n: rn,
    })
}

/// `left ⊗ right`: an edge changes both coordinates, each along an edge of
/// its factor. Weights multiply.
pub fn tensor_product(left: &Graph, right: &Graph) -> Result<ProductGraph> {
    check_nonempty(left, right)?;
    let rn = right.n();
    let id = |a: VertexId, b: VertexId| a.index() * rn + b.index();
    let mut edges = Vec::with_capacity(2 * left.edge_count() * right.edge_count());
    for e1 in left.edges() {
        for e2 in right.edges() {
            let w = e1.weight * e2.weight;
            edges.push(Edge::new(id(e1.u, e2.u), id(e1.v, e2.v), w));
            edges.push(Edge::new(id(e1.u, e2.v), id(e1.v, e2.u), w));
        }
    }
    Ok(ProductGraph {
        graph: Graph::new(left.n() * rn, edges)?,
        kind: ProductKind::Tensor,
        left_n: left.n(),
        right_n: rn,
    })
}
