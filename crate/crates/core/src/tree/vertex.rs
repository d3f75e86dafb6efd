use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{Mat2, Zpk};

/// A homothety class of lattices, given by the column span of
/// `[[p^a, u], [0, p^b]]` with `0 <= u < p^a` and `min(a, b, v(u)) = 0`.
///
/// The prime is carried by the surrounding [`BruhatTitsTree`](super::BruhatTitsTree).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub a: u32,
    pub b: u32,
    pub u: u64,
}

impl Vertex {
    /// The class of `Z_p ⊕ Z_p`.
    pub const ORIGIN: Vertex = Vertex { a: 0, b: 0, u: 0 };

    pub fn new(a: u32, b: u32, u: u64) -> Self {
        Vertex { a, b, u }
    }

    /// Checks the normal-form invariants for the prime `p`.
    pub fn validate(&self, p: u64) -> Result<()> {
        let pa = p.checked_pow(self.a).ok_or_else(|| Error::InvalidInput("vertex exponent overflow".into()))?;
        if self.u >= pa {
            return Err(Error::InvalidInput(format!("u = {} must be below p^a = {pa}", self.u)));
        }
        let u_unit = self.u != 0 && !self.u.is_multiple_of(p);
        if self.a != 0 && self.b != 0 && !u_unit {
            return Err(Error::InvalidInput(format!("{self} is not scalar-normalized")));
        }
        Ok(())
    }

    /// Basis matrix `[[p^a, u], [0, p^b]]` reduced into `ring`.
    pub fn basis(&self, ring: Zpk) -> Result<Mat2> {
        if self.a >= ring.k() || self.b >= ring.k() {
            return Err(Error::PrecisionExhausted(format!("{self} needs more than {} digits", ring.k())));
        }
        Ok(Mat2::from_residues(ring, [[ring.p_pow(self.a), self.u], [0, ring.p_pow(self.b)]]))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.u)
    }
}

#[derive(Serialize, Deserialize)]
struct VertexWire {
    a: u32,
    b: u32,
    u: String,
}

impl Serialize for Vertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VertexWire { a: self.a, b: self.b, u: self.u.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = VertexWire::deserialize(d)?;
        Ok(Vertex { a: w.a, b: w.b, u: w.u.parse().map_err(D::Error::custom)? })
    }
}

/// An oriented pair of adjacent vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub source: Vertex,
    pub target: Vertex,
}

impl DirectedEdge {
    pub fn new(source: Vertex, target: Vertex) -> Self {
        DirectedEdge { source, target }
    }

    pub fn reversed(&self) -> Self {
        DirectedEdge { source: self.target, target: self.source }
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

/// A point of the tree a torus can act on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreePoint {
    Vertex(Vertex),
    Edge(DirectedEdge),
}

impl TreePoint {
    pub fn as_vertex(&self) -> Option<Vertex> {
        match self {
            TreePoint::Vertex(v) => Some(*v),
            TreePoint::Edge(_) => None,
        }
    }

    pub fn as_edge(&self) -> Option<DirectedEdge> {
        match self {
            TreePoint::Edge(e) => Some(*e),
            TreePoint::Vertex(_) => None,
        }
    }
}

impl From<Vertex> for TreePoint {
    fn from(v: Vertex) -> Self {
        TreePoint::Vertex(v)
    }
}

impl From<DirectedEdge> for TreePoint {
    fn from(e: DirectedEdge) -> Self {
        TreePoint::Edge(e)
    }
}

impl fmt::Display for TreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreePoint::Vertex(v) => v.fmt(f),
            TreePoint::Edge(e) => e.fmt(f),
        }
    }
}
