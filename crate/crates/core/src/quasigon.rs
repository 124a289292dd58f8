//! Quasi k-gons: ordered sequences of k distinct points, their incidence
//! subgraphs, the index permutations fixing those subgraphs, and an exhaustive
//! census of all ordered k-tuples of a plane by number of distinct lines.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::plane::Plane;
use crate::poly::{
    collinear_count, cycle_lower_bound, cycle_upper_bound, falling_factorial, few_lines_bound, int,
    plane_size, rational_string, square_cap,
};
use crate::with_threads;

/// Largest k for which whole symmetric groups are enumerated.
pub const MAX_GROUP_DEGREE: usize = 8;

/// Default census budget, in ordered tuples.
pub const DEFAULT_CENSUS_BUDGET: f64 = 1e9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuasiGonError {
    #[error("need at least 3 points, got {0}")]
    TooShort(usize),
    #[error("point {0} repeats")]
    DuplicatePoint(usize),
    #[error("point {point} is out of range for a plane with {num_points} points")]
    PointOutOfRange { point: usize, num_points: usize },
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("permutation degree {perm} does not match sequence length {len}")]
    DegreeMismatch { perm: usize, len: usize },
    #[error("symmetric groups are enumerated only up to degree {MAX_GROUP_DEGREE}, got {0}")]
    GroupTooLarge(usize),
    #[error("all points are collinear: the line sequence is a single block")]
    SingleBlock,
    #[error("census of {tuples:.3e} tuples exceeds budget {budget:.3e}")]
    BudgetExceeded { tuples: f64, budget: f64 },
}

/// An ordered sequence of distinct points with its cyclic line sequence.
/// `lines[i]` joins `points[i]` and `points[(i + 1) % k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiGon {
    points: Vec<usize>,
    lines: Vec<usize>,
    distinct: usize,
}

impl QuasiGon {
    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    /// Number of distinct lines.
    pub fn j(&self) -> usize {
        self.distinct
    }

    pub fn is_gon(&self) -> bool {
        self.distinct == self.k()
    }

    /// `k - 1` distinct lines with the repeated line on two cyclically
    /// consecutive positions.
    pub fn has_adjacent_repeat(&self) -> bool {
        let k = self.k();
        (0..k).any(|i| self.lines[i] == self.lines[(i + 1) % k])
    }

    pub fn is_almost_gon(&self) -> bool {
        self.distinct + 1 == self.k() && self.has_adjacent_repeat()
    }

    /// The two lines at position `i` (incoming, outgoing), as a sorted pair;
    /// both entries equal when the point has a single neighbour.
    fn neighbour_pair(&self, i: usize) -> (usize, usize) {
        let k = self.k();
        let a = self.lines[(i + k - 1) % k];
        let b = self.lines[i];
        (a.min(b), a.max(b))
    }
}

/// Builds the quasi-gon on `points`.
pub fn line_sequence(plane: &Plane, points: &[usize]) -> Result<QuasiGon, QuasiGonError> {
    let k = points.len();
    if k < 3 {
        return Err(QuasiGonError::TooShort(k));
    }
    let np = plane.num_points();
    let mut seen = BTreeSet::new();
    for &p in points {
        if p >= np {
            return Err(QuasiGonError::PointOutOfRange {
                point: p,
                num_points: np,
            });
        }
        if !seen.insert(p) {
            return Err(QuasiGonError::DuplicatePoint(p));
        }
    }
    let lines: Vec<usize> = (0..k)
        .map(|i| plane.join(points[i], points[(i + 1) % k]))
        .collect();
    let distinct = lines.iter().collect::<BTreeSet<_>>().len();
    Ok(QuasiGon {
        points: points.to_vec(),
        lines,
        distinct,
    })
}

/// The incidence subgraph of a quasi-gon: each point is joined to the lines
/// to its predecessor and successor, and to nothing else, even if it lies on
/// further lines of the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSubgraph {
    pub points: BTreeSet<usize>,
    pub lines: BTreeSet<usize>,
    /// `(point, line)` pairs.
    pub edges: BTreeSet<(usize, usize)>,
}

impl IncidenceSubgraph {
    pub fn point_degree(&self, p: usize) -> usize {
        self.edges.range((p, 0)..=(p, usize::MAX)).count()
    }

    pub fn line_degree(&self, l: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == l).count()
    }

    /// Connected and 2-regular.
    pub fn is_cycle(&self) -> bool {
        if self.points.iter().any(|&p| self.point_degree(p) != 2)
            || self.lines.iter().any(|&l| self.line_degree(l) != 2)
        {
            return false;
        }
        let Some(&start) = self.points.iter().next() else {
            return false;
        };
        // walk point -> line -> point; a single cycle visits every point
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for &(_, l) in self.edges.range((p, 0)..=(p, usize::MAX)) {
                for &(q, _) in self.edges.iter().filter(|e| e.1 == l) {
                    if seen.insert(q) {
                        stack.push(q);
                    }
                }
            }
        }
        seen.len() == self.points.len()
    }
}

pub fn gamma_of(qg: &QuasiGon) -> IncidenceSubgraph {
    let k = qg.k();
    let mut edges = BTreeSet::new();
    for i in 0..k {
        let p = qg.points[i];
        edges.insert((p, qg.lines[(i + k - 1) % k]));
        edges.insert((p, qg.lines[i]));
    }
    IncidenceSubgraph {
        points: qg.points.iter().copied().collect(),
        lines: qg.lines.iter().copied().collect(),
        edges,
    }
}

/// Same incidence subgraph (as labelled sets, not up to isomorphism).
pub fn equivalent(a: &QuasiGon, b: &QuasiGon) -> bool {
    a.k() == b.k() && gamma_of(a) == gamma_of(b)
}

/// A permutation of `0..k`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, QuasiGonError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || std::mem::replace(&mut seen[i], true) {
                return Err(QuasiGonError::NotPermutation(k));
            }
        }
        Ok(Permutation(images))
    }

    /// From images of `1..=k`.
    pub fn from_one_based(images: &[usize]) -> Result<Self, QuasiGonError> {
        let k = images.len();
        if images.iter().any(|&i| i == 0 || i > k) {
            return Err(QuasiGonError::NotPermutation(k));
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    /// `i -> i + 1 (mod k)`.
    pub fn rotation(k: usize) -> Self {
        Permutation((0..k).map(|i| (i + 1) % k).collect())
    }

    /// `i -> k - 1 - i`.
    pub fn reversal(k: usize) -> Self {
        Permutation((0..k).rev().collect())
    }

    /// Swaps `a` and `b`.
    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..k).collect();
        v.swap(a, b);
        Permutation(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }
}

impl fmt::Display for Permutation {
    /// One-based image list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// `σ(QG) = (P_σ(1), ..., P_σ(k))`.
pub fn apply_perm(
    plane: &Plane,
    sigma: &Permutation,
    qg: &QuasiGon,
) -> Result<QuasiGon, QuasiGonError> {
    if sigma.degree() != qg.k() {
        return Err(QuasiGonError::DegreeMismatch {
            perm: sigma.degree(),
            len: qg.k(),
        });
    }
    let points: Vec<usize> = sigma.0.iter().map(|&i| qg.points[i]).collect();
    line_sequence(plane, &points)
}

/// The dihedral group of order `2k` acting on positions.
pub fn dihedral(k: usize) -> Vec<Permutation> {
    let r = Permutation::rotation(k);
    let s = Permutation::reversal(k);
    let mut out = Vec::with_capacity(2 * k);
    let mut g = Permutation::identity(k);
    for _ in 0..k {
        out.push(g.clone());
        out.push(g.compose(&s));
        g = r.compose(&g);
    }
    out.sort();
    out.dedup();
    out
}

/// Whether `set` is closed under composition and contains the identity.
pub fn is_closed(set: &[Permutation]) -> bool {
    let Some(first) = set.first() else {
        return false;
    };
    let members: BTreeSet<&Permutation> = set.iter().collect();
    members.contains(&Permutation::identity(first.degree()))
        && set
            .iter()
            .all(|a| set.iter().all(|b| members.contains(&a.compose(b))))
}

/// All `k!` permutations of `0..k`, in lexicographic order.
#[derive(Debug, Clone)]
pub struct SymmetricGroup {
    k: usize,
    elements: Vec<Permutation>,
}

impl SymmetricGroup {
    pub fn new(k: usize) -> Result<Self, QuasiGonError> {
        if k > MAX_GROUP_DEGREE {
            return Err(QuasiGonError::GroupTooLarge(k));
        }
        let mut elements = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            elements.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        Ok(SymmetricGroup { k, elements })
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }
}

/// Whether `σ(QG)` has the same incidence subgraph as `QG`.
///
/// Both have the same point set, and the line set is the union of point
/// neighbourhoods, so it suffices that every point keeps its neighbour lines.
pub fn fixes(plane: &Plane, sigma: &Permutation, qg: &QuasiGon) -> bool {
    let k = qg.k();
    let s = &sigma.0;
    (0..k).all(|i| {
        let p = qg.points[s[i]];
        let a = plane.join(qg.points[s[(i + k - 1) % k]], p);
        let b = plane.join(p, qg.points[s[(i + 1) % k]]);
        (a.min(b), a.max(b)) == qg.neighbour_pair(s[i])
    })
}

/// All permutations fixing the incidence subgraph of `qg`, in lexicographic order.
///
/// This set always contains the dihedral group but is not always closed under
/// composition: `σ(QG)` and `QG` can share a subgraph while `τ(σ(QG))` and
/// `τ(QG)` do not. Use [`is_closed`] to test a particular result.
pub fn symmetry_group(
    plane: &Plane,
    qg: &QuasiGon,
    group: &SymmetricGroup,
) -> Result<Vec<Permutation>, QuasiGonError> {
    if group.degree() != qg.k() {
        return Err(QuasiGonError::DegreeMismatch {
            perm: group.degree(),
            len: qg.k(),
        });
    }
    Ok(group
        .elements()
        .iter()
        .filter(|s| fixes(plane, s, qg))
        .cloned()
        .collect())
}

/// A maximal run of cyclically consecutive equal lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    /// Position in the line sequence where the run starts.
    pub start: usize,
    pub len: usize,
    pub line: usize,
}

/// Cyclic partition of the line sequence into maximal constant runs.
pub fn maximal_blocks(qg: &QuasiGon) -> Result<Vec<Block>, QuasiGonError> {
    if qg.j() == 1 {
        return Err(QuasiGonError::SingleBlock);
    }
    Ok(blocks_of(&qg.lines))
}

fn blocks_of(lines: &[usize]) -> Vec<Block> {
    let k = lines.len();
    let start = (0..k)
        .find(|&i| lines[(i + k - 1) % k] != lines[i])
        .expect("at least two distinct lines");
    let mut blocks: Vec<Block> = Vec::new();
    for off in 0..k {
        let i = (start + off) % k;
        match blocks.last_mut() {
            Some(b) if b.line == lines[i] => b.len += 1,
            _ => blocks.push(Block {
                start: i,
                len: 1,
                line: lines[i],
            }),
        }
    }
    blocks
}

/// `prod_s (n-1)_(t_s - 1)` over the maximal blocks of a line sequence: the
/// most quasi-gons that can share it.
pub fn sharing_bound(n: u64, blocks: &[Block]) -> BigInt {
    blocks
        .iter()
        .map(|b| falling_factorial(n - 1, b.len - 1))
        .product()
}

/// Exact counts of all ordered k-tuples of distinct points by number of distinct
/// lines, with the split of the `k - 1` class by whether the repeated line sits
/// on two consecutive positions (`almost_gons`) or not (`split_repeats`).
#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub order: usize,
    pub k: usize,
    /// `by_lines[j - 1]` counts tuples with exactly `j` distinct lines.
    pub by_lines: Vec<BigUint>,
    pub almost_gons: BigUint,
    pub split_repeats: BigUint,
    /// Tuples in the split-repeat class whose points were not recovered as
    /// intersections of consecutive lines. Always zero in a projective plane.
    pub unrecovered: BigUint,
}

impl Census {
    pub fn with_lines(&self, j: usize) -> &BigUint {
        &self.by_lines[j - 1]
    }

    pub fn total(&self) -> BigUint {
        self.by_lines.iter().sum()
    }

    pub fn num_points(&self) -> u64 {
        plane_size(self.order as u64)
    }

    /// `(total - sum_{j<k} Q_j) / 2k`, or `None` when not an integer.
    pub fn reconstructed_cycles(&self) -> Option<BigUint> {
        let all = falling_factorial(self.num_points(), self.k);
        let lower: BigUint = self.by_lines[..self.k - 1].iter().sum();
        let gons = all - BigInt::from(lower);
        let two_k = BigInt::from(2 * self.k);
        if gons.sign() == num_bigint::Sign::Minus || !(&gons % &two_k).is_zero() {
            return None;
        }
        (gons / two_k).to_biguint()
    }

    /// Named structural identities that every census must satisfy.
    pub fn identities(&self) -> Vec<(&'static str, bool)> {
        let n = self.order as u64;
        let k = self.k;
        let total = BigInt::from(self.total());
        vec![
            (
                "classes partition all tuples",
                total == falling_factorial(self.num_points(), k),
            ),
            (
                "collinear tuples count",
                BigInt::from(self.with_lines(1).clone()) == collinear_count(n, k),
            ),
            (
                "k-1 class splits",
                *self.with_lines(k - 1) == &self.almost_gons + &self.split_repeats,
            ),
            (
                "gon count divisible by 2k",
                crate::poly::divisible_by_2k(self.with_lines(k), k),
            ),
            (
                "almost-gon count divisible by 2k",
                crate::poly::divisible_by_2k(&self.almost_gons, k),
            ),
            (
                "split repeats recovered from lines",
                self.unrecovered.is_zero(),
            ),
        ]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let q: serde_json::Map<String, serde_json::Value> = self
            .by_lines
            .iter()
            .enumerate()
            .map(|(i, c)| ((i + 1).to_string(), c.to_string().into()))
            .collect();
        serde_json::json!({
            "n": self.order,
            "k": self.k,
            "Q": q,
            "A_k": self.almost_gons.to_string(),
            "B_k": self.split_repeats.to_string(),
        })
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    by_lines: Vec<u128>,
    almost: u128,
    split: u128,
    unrecovered: u128,
}

impl Tally {
    fn new(k: usize) -> Self {
        Tally {
            by_lines: vec![0; k],
            ..Default::default()
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.by_lines.iter_mut().zip(other.by_lines) {
            *a += b;
        }
        self.almost += other.almost;
        self.split += other.split;
        self.unrecovered += other.unrecovered;
        self
    }
}

/// Number of ordered k-tuples of distinct points.
pub fn census_size(plane: &Plane, k: usize) -> f64 {
    let n = plane.num_points() as f64;
    (0..k).map(|i| n - i as f64).product()
}

/// Classifies every ordered k-tuple of distinct points.
pub fn census(
    plane: &Plane,
    k: usize,
    threads: usize,
    budget: f64,
) -> Result<Census, QuasiGonError> {
    census_with(plane, k, threads, budget, |_, _| {})
}

fn census_with(
    plane: &Plane,
    k: usize,
    threads: usize,
    budget: f64,
    visit: impl Fn(&[usize], &[usize]) + Sync,
) -> Result<Census, QuasiGonError> {
    if k < 3 {
        return Err(QuasiGonError::TooShort(k));
    }
    let tuples = census_size(plane, k);
    if tuples > budget {
        return Err(QuasiGonError::BudgetExceeded { tuples, budget });
    }
    let np = plane.num_points();
    let prefixes: Vec<(usize, usize)> = (0..np)
        .flat_map(|a| (0..np).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let tally = if k > np {
        Tally::new(k)
    } else {
        with_threads(threads, || {
            prefixes
                .par_iter()
                .fold(
                    || Tally::new(k),
                    |mut t, &(a, b)| {
                        CensusWalk::new(plane, k, &visit).run(a, b, &mut t);
                        t
                    },
                )
                .reduce(|| Tally::new(k), Tally::merge)
        })
    };
    Ok(Census {
        order: plane.order(),
        k,
        by_lines: tally.by_lines.into_iter().map(BigUint::from).collect(),
        almost_gons: tally.almost.into(),
        split_repeats: tally.split.into(),
        unrecovered: tally.unrecovered.into(),
    })
}

struct CensusWalk<'a, F> {
    plane: &'a Plane,
    k: usize,
    points: Vec<usize>,
    lines: Vec<usize>,
    used: Vec<bool>,
    multiplicity: Vec<u32>,
    distinct: usize,
    visit: &'a F,
}

impl<'a, F: Fn(&[usize], &[usize])> CensusWalk<'a, F> {
    fn new(plane: &'a Plane, k: usize, visit: &'a F) -> Self {
        CensusWalk {
            plane,
            k,
            points: Vec::with_capacity(k),
            lines: Vec::with_capacity(k),
            used: vec![false; plane.num_points()],
            multiplicity: vec![0; plane.num_lines()],
            distinct: 0,
            visit,
        }
    }

    fn push_line(&mut self, l: usize) {
        self.lines.push(l);
        if self.multiplicity[l] == 0 {
            self.distinct += 1;
        }
        self.multiplicity[l] += 1;
    }

    fn pop_line(&mut self) {
        let l = self.lines.pop().unwrap();
        self.multiplicity[l] -= 1;
        if self.multiplicity[l] == 0 {
            self.distinct -= 1;
        }
    }

    fn run(&mut self, a: usize, b: usize, tally: &mut Tally) {
        self.points.extend([a, b]);
        self.used[a] = true;
        self.used[b] = true;
        self.push_line(self.plane.join(a, b));
        self.extend(tally);
    }

    fn extend(&mut self, tally: &mut Tally) {
        let last = *self.points.last().unwrap();
        if self.points.len() == self.k {
            self.push_line(self.plane.join(last, self.points[0]));
            self.classify(tally);
            self.pop_line();
            return;
        }
        for q in 0..self.used.len() {
            if self.used[q] {
                continue;
            }
            self.used[q] = true;
            self.points.push(q);
            self.push_line(self.plane.join(last, q));
            self.extend(tally);
            self.pop_line();
            self.points.pop();
            self.used[q] = false;
        }
    }

    fn classify(&self, tally: &mut Tally) {
        let k = self.k;
        let j = self.distinct;
        tally.by_lines[j - 1] += 1;
        if j == k - 1 {
            let adjacent = (0..k).any(|i| self.lines[i] == self.lines[(i + 1) % k]);
            if adjacent {
                tally.almost += 1;
            } else {
                tally.split += 1;
                // consecutive lines differ, so each point is their intersection
                let recovered = (0..k).all(|i| {
                    self.plane.meet(self.lines[(i + k - 1) % k], self.lines[i]) == self.points[i]
                });
                if !recovered {
                    tally.unrecovered += 1;
                }
            }
        }
        (self.visit)(&self.points, &self.lines);
    }
}

/// Findings from grouping census tuples by their line sequence.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SharingAudit {
    pub line_sequences: u64,
    /// Sequences shared by more tuples than the block-product bound allows.
    pub over_bound: u64,
    /// Sequences whose sharing count is strictly below the block-product bound.
    pub below_bound: u64,
    /// Sequences with fewer maximal blocks than distinct lines.
    pub too_few_blocks: u64,
    /// Split-repeat line sequences realised by more than one tuple.
    pub split_repeat_collisions: u64,
}

impl SharingAudit {
    pub fn passed(&self) -> bool {
        self.over_bound == 0 && self.too_few_blocks == 0 && self.split_repeat_collisions == 0
    }
}

/// Census plus an audit of how many tuples share each line sequence, for
/// sequences with at least two distinct lines. Memory grows with the number
/// of tuples, so keep this to small planes.
pub fn census_with_audit(
    plane: &Plane,
    k: usize,
    budget: f64,
) -> Result<(Census, SharingAudit), QuasiGonError> {
    let groups = std::sync::Mutex::new(HashMap::<Vec<usize>, u64>::new());
    let census = census_with(plane, k, 1, budget, |_, lines| {
        let distinct = lines.iter().collect::<BTreeSet<_>>().len();
        if distinct >= 2 {
            *groups.lock().unwrap().entry(lines.to_vec()).or_default() += 1;
        }
    })?;
    let n = plane.order() as u64;
    let mut audit = SharingAudit::default();
    for (lines, count) in groups.into_inner().unwrap() {
        audit.line_sequences += 1;
        let blocks = blocks_of(&lines);
        let j = lines.iter().collect::<BTreeSet<_>>().len();
        let bound = sharing_bound(n, &blocks);
        let count_big = BigInt::from(count);
        if count_big > bound {
            audit.over_bound += 1;
        } else if count_big < bound {
            audit.below_bound += 1;
        }
        if blocks.len() < j {
            audit.too_few_blocks += 1;
        }
        if j == k - 1 && blocks.len() == k && count > 1 {
            audit.split_repeat_collisions += 1;
        }
    }
    Ok((census, audit))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Eq,
}

impl Relation {
    fn holds(self, a: &BigRational, b: &BigRational) -> bool {
        match self {
            Relation::Lt => a < b,
            Relation::Le => a <= b,
            Relation::Eq => a == b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// One checked inequality `lhs relation rhs`; sides absent when not applicable.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundItem {
    pub name: String,
    pub relation: Relation,
    pub lhs: Option<BigRational>,
    pub rhs: Option<BigRational>,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl BoundItem {
    pub fn check(
        name: impl Into<String>,
        lhs: BigRational,
        relation: Relation,
        rhs: BigRational,
    ) -> Self {
        let verdict = if relation.holds(&lhs, &rhs) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        BoundItem {
            name: name.into(),
            relation,
            lhs: Some(lhs),
            rhs: Some(rhs),
            verdict,
            note: None,
        }
    }

    pub fn not_applicable(
        name: impl Into<String>,
        relation: Relation,
        why: impl Into<String>,
    ) -> Self {
        BoundItem {
            name: name.into(),
            relation,
            lhs: None,
            rhs: None,
            verdict: Verdict::NotApplicable,
            note: Some(why.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("name".into(), self.name.clone().into());
        obj.insert("relation".into(), self.relation.symbol().into());
        obj.insert("verdict".into(), self.verdict.name().into());
        if let Some(l) = &self.lhs {
            obj.insert("lhs".into(), rational_string(l).into());
        }
        if let Some(r) = &self.rhs {
            obj.insert("rhs".into(), rational_string(r).into());
        }
        if let Some(n) = &self.note {
            obj.insert("note".into(), n.clone().into());
        }
        serde_json::Value::Object(obj)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundReport {
    pub items: Vec<BoundItem>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundItem> {
        self.items.iter().filter(|i| i.verdict == Verdict::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&BoundItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "passed": self.passed(),
            "items": self.items.iter().map(BoundItem::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            write!(f, "{:<5} {}", item.verdict.name(), item.name)?;
            if let (Some(l), Some(r)) = (&item.lhs, &item.rhs) {
                write!(f, ": {} {} {}", l, item.relation.symbol(), r)?;
            }
            if let Some(n) = &item.note {
                write!(f, " ({n})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Checks census counts against the structural bounds:
/// almost-gon classes bracketed by `c_prev`, split repeats bounded by line
/// sequences, few-line classes bounded by line-sequence counting, and the
/// exact count of collinear tuples.
///
/// `c_prev` is the exact number of `(2k-2)`-cycles.
pub fn check_bounds(census: &Census, c_prev: &BigUint) -> BoundReport {
    let n = census.order as u64;
    let k = census.k;
    let big_n = census.num_points();
    let mut items = Vec::new();
    let gated = k >= 4 && n >= k as u64;
    let gate_note = format!("requires n >= k >= 4 (n = {n}, k = {k})");

    items.push(BoundItem::check(
        "collinear tuples = N (n+1)_(k)",
        int(census.with_lines(1).clone()),
        Relation::Eq,
        int(collinear_count(n, k)),
    ));

    let almost_cycles = int(census.almost_gons.clone()) / int(2 * k as u64);
    let c_prev = int(c_prev.clone());
    if gated {
        let km1 = int(k as u64 - 1);
        items.push(BoundItem::check(
            "almost-gon subgraphs >= (n-k+2)(k-1) c_prev",
            int(n + 2 - k as u64) * &km1 * &c_prev,
            Relation::Le,
            almost_cycles.clone(),
        ));
        items.push(BoundItem::check(
            "almost-gon subgraphs <= (n-1)(k-1) c_prev",
            almost_cycles,
            Relation::Le,
            int(n - 1) * km1 * c_prev,
        ));
    } else {
        for name in [
            "almost-gon subgraphs >= (n-k+2)(k-1) c_prev",
            "almost-gon subgraphs <= (n-1)(k-1) c_prev",
        ] {
            items.push(BoundItem::not_applicable(name, Relation::Le, &gate_note));
        }
    }

    let split_name = "split repeats <= (k-1)(k-2) N_(k-1)";
    if k >= 4 {
        items.push(BoundItem::check(
            split_name,
            int(census.split_repeats.clone()),
            Relation::Le,
            int(BigInt::from((k - 1) * (k - 2)) * falling_factorial(big_n, k - 1)),
        ));
    } else {
        items.push(BoundItem::not_applicable(
            split_name,
            Relation::Le,
            "requires k >= 4",
        ));
    }

    for j in 2..k.saturating_sub(1) {
        let name = format!("tuples with {j} lines <= j^(k-j) k_(j) C(N,j) (n-1)^(k-j)");
        if gated {
            items.push(BoundItem::check(
                name,
                int(census.with_lines(j).clone()),
                Relation::Le,
                int(few_lines_bound(n, k, j)),
            ));
        } else {
            items.push(BoundItem::not_applicable(name, Relation::Le, &gate_note));
        }
    }
    BoundReport { items }
}

/// [`check_bounds`] plus the checks that need the exact 2k-cycle count:
/// reconstruction from the census, the explicit lower bound, the upper bound
/// from `c_prev`, and the square-graph cap.
pub fn check_cycle_bounds(census: &Census, c_prev: &BigUint, count: &BigUint) -> BoundReport {
    let n = census.order as u64;
    let k = census.k;
    let mut report = check_bounds(census, c_prev);
    let count_r = int(count.clone());
    let recon = "census reconstruction = 2k-cycle count";
    match census.reconstructed_cycles() {
        Some(r) => report.items.push(BoundItem::check(
            recon,
            int(r),
            Relation::Eq,
            count_r.clone(),
        )),
        None => report.items.push(BoundItem {
            verdict: Verdict::Fail,
            ..BoundItem::not_applicable(recon, Relation::Eq, "gon count not divisible by 2k")
        }),
    }
    let lower = "explicit lower bound < 2k-cycle count";
    report.items.push(match cycle_lower_bound(n, k) {
        Ok(lb) => BoundItem::check(lower, lb, Relation::Lt, count_r.clone())
            .with_note("few-line classes bounded by the explicit line-sequence sum"),
        Err(e) => BoundItem::not_applicable(lower, Relation::Lt, e.to_string()),
    });
    let upper = "2k-cycle count <= N_(k)/2k - (n-k+2)(k-1) c_prev";
    report.items.push(match cycle_upper_bound(n, k, c_prev) {
        Ok(ub) => BoundItem::check(upper, count_r.clone(), Relation::Le, ub),
        Err(e) => BoundItem::not_applicable(upper, Relation::Le, e.to_string()),
    });
    let cap = square_cap(2 * plane_size(n), k).expect("2N is even");
    report.items.push(BoundItem::check(
        "2k-cycle count <= (v/2)_(k)/2k",
        count_r,
        Relation::Le,
        cap,
    ));
    report
}
