//! Levi (point-line incidence) graphs and walk counting.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::plane::Plane;

/// Largest graph accepted by [`closed_walks_direct`].
pub const MAX_DIRECT_WALK_VERTICES: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has {vertices} vertices, limit is {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex set is not one side of a bipartition: {0} and {1} are adjacent")]
    NotIndependent(usize, usize),
    #[error("graph contains a 4-cycle through {0} and {1}; squaring would create multi-edges")]
    HasFourCycle(usize, usize),
    #[error("graph is not bipartite")]
    NotBipartite,
}

/// A simple undirected graph with sorted neighbor lists and neighbor bitsets.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<u32>>,
    bits: Vec<BitSet>,
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimpleGraph")
            .field("vertices", &self.num_vertices())
            .field("edges", &self.num_edges())
            .finish()
    }
}

impl SimpleGraph {
    /// Builds a graph from an edge list; duplicate edges collapse.
    pub fn from_edges(
        vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut bits = vec![BitSet::new(vertices); vertices];
        for (u, v) in edges {
            if u >= vertices {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v >= vertices {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            bits[u].insert(v);
            bits[v].insert(u);
        }
        let adj = bits
            .iter()
            .map(|b| b.iter().map(|v| v as u32).collect())
            .collect();
        Ok(SimpleGraph { adj, bits })
    }

    pub fn cycle(len: usize) -> Self {
        Self::from_edges(len, (0..len).map(|i| (i, (i + 1) % len))).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
            .expect("valid complete graph")
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn neighbor_set(&self, v: usize) -> &BitSet {
        &self.bits[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u].contains(v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| {
            ns.iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// A copy with the edge `{u, v}` removed (no-op if absent).
    pub fn without_edge(&self, u: usize, v: usize) -> SimpleGraph {
        SimpleGraph::from_edges(
            self.num_vertices(),
            self.edges().filter(|&e| e != (u.min(v), u.max(v))),
        )
        .expect("subgraph of a simple graph")
    }

    /// Proper 2-colouring, if one exists. Each component's lowest vertex gets colour 0.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let n = self.num_vertices();
        let mut colour = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    let v = v as usize;
                    if colour[v] == u8::MAX {
                        colour[v] = 1 - colour[u];
                        queue.push_back(v);
                    } else if colour[v] == colour[u] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }
}

/// Which side of a Levi graph to square onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Points,
    Lines,
}

/// The incidence graph of a plane: vertices `0..N` are points, `N..2N` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviGraph {
    order: usize,
    part: usize,
    graph: SimpleGraph,
}

impl LeviGraph {
    pub fn new(plane: &Plane) -> Self {
        let part = plane.num_points();
        let edges = plane
            .lines()
            .iter()
            .enumerate()
            .flat_map(|(l, pts)| pts.iter().map(move |&p| (p as usize, part + l)));
        LeviGraph {
            order: plane.order(),
            part,
            graph: SimpleGraph::from_edges(2 * part, edges).expect("incidences are in range"),
        }
    }

    /// Wraps an arbitrary graph as if it were a Levi graph of the given order;
    /// nothing is checked. Useful for damaged fixtures.
    pub fn from_graph_unchecked(order: usize, graph: SimpleGraph) -> Self {
        let part = graph.num_vertices() / 2;
        LeviGraph { order, part, graph }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Size of each part, `N`.
    pub fn part_size(&self) -> usize {
        self.part
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn side(&self, side: Side) -> Vec<usize> {
        match side {
            Side::Points => (0..self.part).collect(),
            Side::Lines => (self.part..2 * self.part).collect(),
        }
    }

    pub fn square(&self, side: Side) -> Result<SimpleGraph, GraphError> {
        bipartite_square(&self.graph, &self.side(side))
    }
}

impl std::ops::Deref for LeviGraph {
    type Target = SimpleGraph;

    fn deref(&self) -> &SimpleGraph {
        &self.graph
    }
}

/// Length of a shortest cycle, or `None` for a forest. BFS from every vertex.
pub fn girth(graph: &SimpleGraph) -> Option<usize> {
    let n = graph.num_vertices();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                if 2 * dist[u] + 1 >= b {
                    break;
                }
            }
            for &v in graph.neighbors(u) {
                let v = v as usize;
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

fn pow_big(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// `2(n+1)^{2k} + 2(N-1)n^k`: closed walks of length `2k` in the Levi graph
/// of any plane of order `n`.
pub fn closed_walks_formula(n: u64, k: u32) -> BigUint {
    let big_n = n * n + n + 1;
    BigUint::from(2u32) * pow_big(n + 1, 2 * k) + BigUint::from(2 * (big_n - 1)) * pow_big(n, k)
}

/// Trace of `A^{2k}` by repeated exact matrix-vector products, one basis vector
/// per task.
pub fn closed_walks_direct(graph: &SimpleGraph, k: u32) -> Result<BigUint, GraphError> {
    let n = graph.num_vertices();
    if n > MAX_DIRECT_WALK_VERTICES {
        return Err(GraphError::TooLarge {
            vertices: n,
            limit: MAX_DIRECT_WALK_VERTICES,
        });
    }
    let steps = 2 * k as usize;
    let total = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut cur = vec![BigUint::zero(); n];
            cur[v] = BigUint::one();
            let mut next = vec![BigUint::zero(); n];
            for _ in 0..steps {
                for (u, slot) in next.iter_mut().enumerate() {
                    let mut acc = BigUint::zero();
                    for &w in graph.neighbors(u) {
                        acc += &cur[w as usize];
                    }
                    *slot = acc;
                }
                std::mem::swap(&mut cur, &mut next);
            }
            std::mem::take(&mut cur[v])
        })
        .reduce(BigUint::zero, |a, b| a + b);
    Ok(total)
}

/// Where the `A^2` structure of a plane's incidence graph breaks down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareWitness {
    /// A vertex whose number of closed 2-walks (its degree) is not `n + 1`.
    Degree { vertex: usize, degree: usize },
    /// Two same-side vertices with a common-neighbour count other than 1.
    CommonNeighbours { u: usize, v: usize, common: usize },
}

/// Checks `A^2 = nI + J` blockwise: every vertex has `n+1` closed 2-walks and
/// every two distinct vertices on the same side have exactly one common neighbour.
pub fn a_squared_identity(levi: &LeviGraph) -> Result<(), SquareWitness> {
    let g = levi.graph();
    let part = levi.part_size();
    for v in 0..g.num_vertices() {
        if g.degree(v) != levi.order() + 1 {
            return Err(SquareWitness::Degree {
                vertex: v,
                degree: g.degree(v),
            });
        }
    }
    for range in [0..part, part..2 * part] {
        for u in range.clone() {
            for v in u + 1..range.end {
                let common = g.neighbor_set(u).intersection_count(g.neighbor_set(v));
                if common != 1 {
                    return Err(SquareWitness::CommonNeighbours { u, v, common });
                }
            }
        }
    }
    Ok(())
}

/// The square of a bipartite graph onto one side: vertices are `side` (relabelled
/// `0..side.len()` in the given order), adjacent iff they share a neighbour.
pub fn bipartite_square(graph: &SimpleGraph, side: &[usize]) -> Result<SimpleGraph, GraphError> {
    let n = graph.num_vertices();
    let mut in_side = BitSet::new(n);
    for &v in side {
        if v >= n {
            return Err(GraphError::VertexOutOfRange(v));
        }
        in_side.insert(v);
    }
    for (u, v) in graph.edges() {
        if in_side.contains(u) && in_side.contains(v) {
            return Err(GraphError::NotIndependent(u, v));
        }
        if !in_side.contains(u) && !in_side.contains(v) {
            return Err(GraphError::NotIndependent(u, v));
        }
    }
    let mut edges = Vec::new();
    for (i, &x) in side.iter().enumerate() {
        for (j, &y) in side.iter().enumerate().skip(i + 1) {
            match graph
                .neighbor_set(x)
                .intersection_count(graph.neighbor_set(y))
            {
                0 => {}
                1 => edges.push((i, j)),
                _ => return Err(GraphError::HasFourCycle(x, y)),
            }
        }
    }
    SimpleGraph::from_edges(side.len(), edges)
}
