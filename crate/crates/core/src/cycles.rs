//! Exact 2k-cycle counts in Levi graphs.
//!
//! Two independent counters are provided. [`count_cycles_graph`] works on any
//! simple graph and roots every cycle at its smallest vertex. [`count_gons`]
//! works on the plane directly and enumerates k-gons, i.e. point sequences whose
//! k cyclically consecutive joining lines are pairwise distinct. A k-gon and the
//! 2k-cycle it traces in the Levi graph are the same object, so the two counts
//! must agree.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::levi::SimpleGraph;
use crate::plane::Plane;
use crate::with_threads;

/// Longest cycle [`count_cycles_graph`] accepts.
pub const MAX_CYCLE_LENGTH: usize = 20;

/// Default work budget for standard runs, in estimated enumeration steps.
pub const DEFAULT_BUDGET: f64 = 1e9;
/// Budget for the long-running extended experiments.
pub const EXTENDED_BUDGET: f64 = 1e10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CycleError {
    #[error("cycle length {0} is outside 3..={MAX_CYCLE_LENGTH}")]
    BadLength(usize),
    #[error("k-gons need k >= 3, got {0}")]
    BadK(usize),
    #[error("estimated work {estimate:.3e} exceeds budget {budget:.3e}")]
    BudgetExceeded { estimate: f64, budget: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Generic rooted DFS over the graph.
    GraphDfs,
    /// Plane-native k-gon enumeration.
    PlaneGons,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::GraphDfs => "graph-dfs",
            Algorithm::PlaneGons => "plane-gons",
        }
    }
}

/// An exact cycle count with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCount {
    /// Plane order, when the graph came from a plane.
    pub order: Option<usize>,
    /// Cycle length in the graph; `2k` for k-gons.
    pub length: usize,
    pub count: BigUint,
    pub algo: Algorithm,
    pub seconds: f64,
    pub warning: Option<String>,
}

impl CycleCount {
    /// Half the cycle length: the number of points on a k-gon.
    pub fn k(&self) -> usize {
        self.length / 2
    }

    /// JSON record; `seconds` only when `timing` is set so output is reproducible.
    pub fn to_json(&self, timing: bool) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("n".into(), self.order.into());
        if self.length.is_multiple_of(2) {
            obj.insert("k".into(), self.k().into());
        } else {
            obj.insert("length".into(), self.length.into());
        }
        obj.insert("count".into(), self.count.to_string().into());
        obj.insert("algo".into(), self.algo.name().into());
        if timing {
            obj.insert("seconds".into(), self.seconds.into());
        }
        if let Some(w) = &self.warning {
            obj.insert("warning".into(), w.clone().into());
        }
        serde_json::Value::Object(obj)
    }
}

/// Counts cycles of length `length` in `graph`.
///
/// Each cycle is found exactly once: its smallest vertex is the root, and of the
/// root's two cycle neighbours the walk leaves through the smaller one.
pub fn count_cycles_graph(
    graph: &SimpleGraph,
    length: usize,
    threads: usize,
) -> Result<CycleCount, CycleError> {
    if !(3..=MAX_CYCLE_LENGTH).contains(&length) {
        return Err(CycleError::BadLength(length));
    }
    let start = Instant::now();
    if length % 2 == 1 && graph.is_bipartite() {
        return Ok(CycleCount {
            order: None,
            length,
            count: BigUint::zero(),
            algo: Algorithm::GraphDfs,
            seconds: start.elapsed().as_secs_f64(),
            warning: Some(format!("odd length {length} on a bipartite graph")),
        });
    }
    let n = graph.num_vertices();
    let starts: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| {
            graph
                .neighbors(r)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > r)
                .map(move |v| (r, v))
        })
        .collect();
    let total: u128 = with_threads(threads, || {
        starts
            .par_iter()
            .map(|&(root, first)| RootedSearch::new(graph, root, length).count_from(first))
            .sum()
    });
    Ok(CycleCount {
        order: None,
        length,
        count: BigUint::from(total),
        algo: Algorithm::GraphDfs,
        seconds: start.elapsed().as_secs_f64(),
        warning: None,
    })
}

struct RootedSearch<'a> {
    graph: &'a SimpleGraph,
    root: usize,
    length: usize,
    /// Distance back to the root through vertices `>= root`.
    dist: Vec<u32>,
    visited: Vec<u64>,
    first: usize,
}

impl<'a> RootedSearch<'a> {
    fn new(graph: &'a SimpleGraph, root: usize, length: usize) -> Self {
        let n = graph.num_vertices();
        let mut dist = vec![u32::MAX; n];
        dist[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in graph.neighbors(u) {
                let v = v as usize;
                if v > root && dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        RootedSearch {
            graph,
            root,
            length,
            dist,
            visited: vec![0; n.div_ceil(64)],
            first: root,
        }
    }

    fn count_from(mut self, first: usize) -> u128 {
        self.first = first;
        self.mark(self.root);
        self.mark(first);
        self.extend(first, 1)
    }

    #[inline]
    fn mark(&mut self, v: usize) {
        self.visited[v >> 6] |= 1 << (v & 63);
    }

    #[inline]
    fn unmark(&mut self, v: usize) {
        self.visited[v >> 6] &= !(1 << (v & 63));
    }

    #[inline]
    fn is_marked(&self, v: usize) -> bool {
        self.visited[v >> 6] & (1 << (v & 63)) != 0
    }

    /// `at` is path vertex number `depth` (the root is number 0).
    fn extend(&mut self, at: usize, depth: usize) -> u128 {
        if depth == self.length - 2 {
            // closing vertex: adjacent to both `at` and the root, unused, above `first`
            let a = self.graph.neighbor_set(at).words();
            let b = self.graph.neighbor_set(self.root).words();
            let lo = self.first + 1;
            let mut total = 0u32;
            for (i, ((x, y), v)) in a.iter().zip(b).zip(&self.visited).enumerate() {
                let mut w = x & y & !v;
                let base = i * 64;
                if base + 64 <= lo {
                    continue;
                }
                if base < lo {
                    w &= !((1u64 << (lo - base)) - 1);
                }
                total += w.count_ones();
            }
            return total as u128;
        }
        let remaining = (self.length - depth - 1) as u32;
        let mut total = 0;
        for &w in self.graph.neighbors(at) {
            let w = w as usize;
            if w <= self.root || self.is_marked(w) || self.dist[w] > remaining {
                continue;
            }
            self.mark(w);
            total += self.extend(w, depth + 1);
            self.unmark(w);
        }
        total
    }
}

/// Estimated enumeration work `n^{2k} / 2k` for k-gons in a plane of order `n`.
pub fn work_estimate(order: usize, k: usize) -> f64 {
    (order as f64).powi(2 * k as i32) / (2 * k) as f64
}

/// Counts k-gons of `plane` up to the dihedral action, which equals the number
/// of `2k`-cycles in its Levi graph.
///
/// Sequences are rooted at their smallest point `P1` and oriented by `P2 < Pk`.
pub fn count_gons(plane: &Plane, k: usize, threads: usize) -> Result<CycleCount, CycleError> {
    if k < 3 {
        return Err(CycleError::BadK(k));
    }
    let start = Instant::now();
    let npts = plane.num_points();
    let total: u128 = if k > npts {
        0
    } else {
        let prefixes: Vec<(usize, usize)> = (0..npts)
            .flat_map(|a| (a + 1..npts).map(move |b| (a, b)))
            .collect();
        with_threads(threads, || {
            prefixes
                .par_iter()
                .map(|&(p1, p2)| GonSearch::new(plane, k).count_from(p1, p2))
                .sum()
        })
    };
    Ok(CycleCount {
        order: Some(plane.order()),
        length: 2 * k,
        count: BigUint::from(total),
        algo: Algorithm::PlaneGons,
        seconds: start.elapsed().as_secs_f64(),
        warning: None,
    })
}

struct GonSearch<'a> {
    plane: &'a Plane,
    k: usize,
    points: Vec<usize>,
    lines: Vec<usize>,
    used_points: Vec<u64>,
    scratch: Vec<u64>,
}

impl<'a> GonSearch<'a> {
    fn new(plane: &'a Plane, k: usize) -> Self {
        let words = plane.num_points().div_ceil(64);
        GonSearch {
            plane,
            k,
            points: Vec::with_capacity(k),
            lines: Vec::with_capacity(k),
            used_points: vec![0; words],
            scratch: vec![0; words],
        }
    }

    fn push_point(&mut self, p: usize) {
        self.points.push(p);
        self.used_points[p >> 6] |= 1 << (p & 63);
    }

    fn pop_point(&mut self) {
        let p = self.points.pop().unwrap();
        self.used_points[p >> 6] &= !(1 << (p & 63));
    }

    fn count_from(mut self, p1: usize, p2: usize) -> u128 {
        self.push_point(p1);
        self.push_point(p2);
        self.lines.push(self.plane.join(p1, p2));
        self.extend()
    }

    fn extend(&mut self) -> u128 {
        let placed = self.points.len();
        let last = self.points[placed - 1];
        if placed == self.k - 1 {
            return self.count_closing(last);
        }
        let p1 = self.points[0];
        let mut total = 0;
        for &l in self.plane.lines_through(last) {
            let l = l as usize;
            if self.lines.contains(&l) {
                continue;
            }
            self.lines.push(l);
            for &q in self.plane.line(l) {
                let q = q as usize;
                if q <= p1 || self.used_points[q >> 6] & (1 << (q & 63)) != 0 {
                    continue;
                }
                self.push_point(q);
                total += self.extend();
                self.pop_point();
            }
            self.lines.pop();
        }
        total
    }

    /// Number of valid final points `Pk` given `P1..P(k-1)`.
    fn count_closing(&mut self, last: usize) -> u128 {
        let plane = self.plane;
        let p1 = self.points[0];
        let forbidden = &mut self.scratch;
        forbidden.copy_from_slice(&self.used_points);
        // orientation: Pk > P2
        set_up_to(forbidden, self.points[1]);
        // Pk off every used line through P(k-1) or P1, and off the line P1P(k-1)
        let closing = plane.join(p1, last);
        for &l in self.lines.iter().chain(std::iter::once(&closing)) {
            if l == closing || plane.is_incident(last, l) || plane.is_incident(p1, l) {
                for (f, w) in forbidden.iter_mut().zip(plane.line_set(l).words()) {
                    *f |= w;
                }
            }
        }
        let blocked: u32 = forbidden.iter().map(|w| w.count_ones()).sum();
        (plane.num_points() as u32 - blocked) as u128
    }
}

/// Sets every bit at index `<= bound`.
fn set_up_to(words: &mut [u64], bound: usize) {
    let full = (bound + 1) >> 6;
    for w in words.iter_mut().take(full) {
        *w = u64::MAX;
    }
    let rem = (bound + 1) & 63;
    if rem != 0 && full < words.len() {
        words[full] |= (1u64 << rem) - 1;
    }
}

/// Counts for `k = 3..=k_max`, stopping at the first `k` whose estimated work
/// exceeds `budget`.
#[derive(Debug, Clone)]
pub struct CycleProfile {
    pub order: usize,
    pub counts: Vec<CycleCount>,
    /// First `k` that was skipped for exceeding the budget.
    pub truncated_at: Option<usize>,
}

pub fn cycle_profile(
    plane: &Plane,
    k_max: usize,
    threads: usize,
    budget: f64,
) -> Result<CycleProfile, CycleError> {
    let mut counts = Vec::new();
    let mut truncated_at = None;
    for k in 3..=k_max {
        if work_estimate(plane.order(), k) > budget {
            truncated_at = Some(k);
            break;
        }
        counts.push(count_gons(plane, k, threads)?);
    }
    Ok(CycleProfile {
        order: plane.order(),
        counts,
        truncated_at,
    })
}
