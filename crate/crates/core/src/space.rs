//! The supported base spaces: the closed and open unit interval, the
//! circle of circumference 1, and finite graphs (one-dimensional complexes
//! with a copy of the unit interval on each edge).
//!
//! Internally every space is a finite set of edges whose two ends are
//! either real vertices or "phantom" compactification points. Phantoms
//! exist only on the open interval: they take part in closure
//! computations but belong to no open set, which realizes the convention
//! that closures are taken in the two-point compactification.

use num_traits::{One, Zero};
use std::fmt;

use crate::error::{CuError, Result};
use crate::rat::{mod1, Rat};

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct GraphShape {
    pub vertices: usize,
    /// Ordered pairs of vertex ids; self-loops allowed.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Space {
    ClosedInterval,
    OpenInterval,
    Circle,
    Graph(GraphShape),
}

/// One end of an edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum End {
    Vertex(usize),
    /// A missing endpoint of the open interval; in the closure of the
    /// adjacent edge but not a point of the space.
    Phantom,
}

impl Space {
    pub fn theta_graph() -> Space {
        Space::Graph(GraphShape {
            vertices: 2,
            edges: vec![(0, 1), (0, 1), (0, 1)],
        })
    }

    pub fn validate(&self) -> Result<()> {
        if let Space::Graph(g) = self {
            if g.edges.iter().any(|&(a, b)| a >= g.vertices || b >= g.vertices) {
                return Err(CuError::Invalid("graph edge references missing vertex".into()));
            }
        }
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Space::Graph(g) => g.edges.len(),
            _ => 1,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Space::ClosedInterval => 2,
            Space::OpenInterval => 0,
            Space::Circle => 1,
            Space::Graph(g) => g.vertices,
        }
    }

    pub fn edge_ends(&self, edge: usize) -> (End, End) {
        match self {
            Space::ClosedInterval => (End::Vertex(0), End::Vertex(1)),
            Space::OpenInterval => (End::Phantom, End::Phantom),
            Space::Circle => (End::Vertex(0), End::Vertex(0)),
            Space::Graph(g) => {
                let (a, b) = g.edges[edge];
                (End::Vertex(a), End::Vertex(b))
            }
        }
    }

    /// Edge germs incident to a vertex, as (edge, at_start) pairs. A
    /// self-loop contributes two germs.
    pub fn vertex_germs(&self, v: usize) -> Vec<(usize, bool)> {
        let mut germs = Vec::new();
        for e in 0..self.edge_count() {
            let (a, b) = self.edge_ends(e);
            if a == End::Vertex(v) {
                germs.push((e, true));
            }
            if b == End::Vertex(v) {
                germs.push((e, false));
            }
        }
        germs
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self, Space::OpenInterval)
    }

    /// Map a parameter in the natural range of a one-edge space onto a
    /// point. Interval coordinates live in [0,1] (closed) or (0,1) (open);
    /// circle coordinates are taken mod 1.
    pub fn point_at(&self, t: &Rat) -> Result<Point> {
        match self {
            Space::ClosedInterval => {
                if t < &Rat::zero() || t > &Rat::one() {
                    Err(CuError::Invalid(format!("coordinate {t} outside [0,1]")))
                } else if t.is_zero() {
                    Ok(Point::Vertex(0))
                } else if t.is_one() {
                    Ok(Point::Vertex(1))
                } else {
                    Ok(Point::Edge(0, t.clone()))
                }
            }
            Space::OpenInterval => {
                if t <= &Rat::zero() || t >= &Rat::one() {
                    Err(CuError::Invalid(format!("coordinate {t} outside (0,1)")))
                } else {
                    Ok(Point::Edge(0, t.clone()))
                }
            }
            Space::Circle => {
                let r = mod1(t);
                if r.is_zero() {
                    Ok(Point::Vertex(0))
                } else {
                    Ok(Point::Edge(0, r))
                }
            }
            Space::Graph(_) => Err(CuError::UnsupportedSpace(
                "graph points need an explicit edge or vertex".into(),
            )),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::ClosedInterval => write!(f, "[0,1]"),
            Space::OpenInterval => write!(f, "(0,1)"),
            Space::Circle => write!(f, "T"),
            Space::Graph(g) => write!(f, "graph(v={},e={})", g.vertices, g.edges.len()),
        }
    }
}

/// A point of a space: either interior to an edge (exact coordinate in
/// (0,1)) or a vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Point {
    Edge(usize, Rat),
    Vertex(usize),
}
