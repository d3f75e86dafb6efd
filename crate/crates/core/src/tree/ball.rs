use std::collections::HashMap;

use super::{BruhatTitsTree, DirectedEdge, Vertex};
use crate::error::{Error, Result};

/// The ball of a given radius, stored in breadth-first order so that every
/// smaller concentric ball is a prefix of both the vertex and edge lists.
#[derive(Clone, Debug)]
pub struct Ball {
    p: u64,
    radius: u32,
    vertices: Vec<Vertex>,
    depth: Vec<u32>,
    parent: Vec<Option<usize>>,
    /// `neighbors[i]` is filled for interior vertices (`depth < radius`).
    neighbors: Vec<Vec<usize>>,
    index: HashMap<Vertex, usize>,
    edges: Vec<DirectedEdge>,
    edge_ends: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl Ball {
    pub(super) fn build(tree: &BruhatTitsTree, center: &Vertex, radius: u32) -> Result<Ball> {
        let mut ball = Ball {
            p: tree.p(),
            radius,
            vertices: vec![*center],
            depth: vec![0],
            parent: vec![None],
            neighbors: Vec::new(),
            index: HashMap::from([(*center, 0)]),
            edges: Vec::new(),
            edge_ends: Vec::new(),
            edge_index: HashMap::new(),
        };
        let mut i = 0;
        while i < ball.vertices.len() {
            if ball.depth[i] < radius {
                let mut nb = Vec::with_capacity(tree.p() as usize + 1);
                for w in tree.neighbors(&ball.vertices[i])? {
                    let j = match ball.index.get(&w) {
                        Some(&j) => j,
                        None => {
                            let j = ball.vertices.len();
                            ball.vertices.push(w);
                            ball.depth.push(ball.depth[i] + 1);
                            ball.parent.push(Some(i));
                            ball.index.insert(w, j);
                            j
                        }
                    };
                    nb.push(j);
                }
                ball.neighbors.push(nb);
            }
            i += 1;
        }
        for (j, parent) in ball.parent.clone().into_iter().enumerate() {
            if let Some(i) = parent {
                for (s, t) in [(i, j), (j, i)] {
                    ball.edge_index.insert((s, t), ball.edges.len());
                    ball.edges.push(DirectedEdge::new(ball.vertices[s], ball.vertices[t]));
                    ball.edge_ends.push((s, t));
                }
            }
        }
        Ok(ball)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn center(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn depth(&self, i: usize) -> u32 {
        self.depth[i]
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Neighbor indices of an interior vertex.
    pub fn neighbors_of(&self, i: usize) -> Option<&[usize]> {
        self.neighbors.get(i).map(|v| v.as_slice())
    }

    /// Number of vertices within distance `r` of the center.
    pub fn vertex_count(&self, r: u32) -> usize {
        self.depth.partition_point(|&d| d <= r)
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        self.edge_ends[e]
    }

    /// Number of directed edges with both endpoints within distance `r`.
    pub fn edge_count(&self, r: u32) -> usize {
        2 * (self.vertex_count(r).max(1) - 1)
    }

    pub fn edge_index(&self, s: usize, t: usize) -> Option<usize> {
        self.edge_index.get(&(s, t)).copied()
    }

    pub fn edge_index_of(&self, e: &DirectedEdge) -> Option<usize> {
        self.edge_index(self.index_of(&e.source)?, self.index_of(&e.target)?)
    }

    pub(crate) fn require_radius(&self, r: u32) -> Result<()> {
        if r > self.radius {
            return Err(Error::InvalidInput(format!("radius {r} exceeds ball radius {}", self.radius)));
        }
        Ok(())
    }
}
