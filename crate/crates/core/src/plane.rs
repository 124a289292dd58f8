//! Finite projective planes as point/line incidence structures.
//!
//! Points and lines are both labelled `0..N` with `N = n^2 + n + 1`. A [`Plane`]
//! can only be obtained through validation, so every value of the type satisfies
//! the projective plane axioms.

use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::gf::{FieldElem, FieldError, GaloisField};

/// Planes larger than this are rejected: the pair-to-line table is `N^2` entries.
pub const MAX_PLANE_ORDER: usize = 64;

const HEADER_PREFIX: &str = "projective-plane order=";

#[derive(Debug, Error)]
pub enum PlaneError {
    #[error("line {line_no}: {msg}")]
    Parse { line_no: usize, msg: String },
    #[error("expected {expected} lines, found {found}")]
    LineCount { expected: usize, found: usize },
    #[error("incidence structure is not a projective plane:\n{0}")]
    Invalid(ValidationReport),
    #[error("expected a plane of order {expected}, found order {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("order {0} is outside the supported range 2..={MAX_PLANE_ORDER}")]
    UnsupportedOrder(usize),
    #[error("points must be distinct, got {0} twice")]
    SamePoint(usize),
    #[error("point {0} out of range")]
    PointOutOfRange(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A raw incidence structure: a claimed order plus a list of lines, each a set
/// of point indices. No axioms are assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incidence {
    pub order: usize,
    pub lines: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn num_points(&self) -> usize {
        self.order * self.order + self.order + 1
    }
}

/// The axiom a [`Violation`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    Order,
    LineCount,
    PointRange,
    LineSize,
    PointDegree,
    PointsOnOneLine,
    LinesMeetOnce,
    Quadrangle,
}

impl Axiom {
    pub fn describe(self) -> &'static str {
        match self {
            Axiom::Order => "order must be at least 2",
            Axiom::LineCount => "number of lines must equal n^2+n+1",
            Axiom::PointRange => "line entries must be distinct points in 0..N",
            Axiom::LineSize => "line size must equal n+1",
            Axiom::PointDegree => "every point must lie on n+1 lines",
            Axiom::PointsOnOneLine => "two distinct points must lie on exactly one line",
            Axiom::LinesMeetOnce => "two distinct lines must meet in exactly one point",
            Axiom::Quadrangle => "four points with no three collinear must exist",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OrderTooSmall {
        order: usize,
    },
    LineCount {
        expected: usize,
        found: usize,
    },
    PointOutOfRange {
        line: usize,
        point: usize,
    },
    RepeatedPoint {
        line: usize,
        point: usize,
    },
    LineSize {
        line: usize,
        size: usize,
        expected: usize,
    },
    PointDegree {
        point: usize,
        degree: usize,
        expected: usize,
    },
    PairUncovered {
        a: usize,
        b: usize,
    },
    PairOnTwoLines {
        a: usize,
        b: usize,
        lines: (usize, usize),
    },
    LinesDisjoint {
        l1: usize,
        l2: usize,
    },
    LinesMeetTwice {
        l1: usize,
        l2: usize,
        points: (usize, usize),
    },
    NoQuadrangle,
}

impl Violation {
    pub fn axiom(&self) -> Axiom {
        match self {
            Violation::OrderTooSmall { .. } => Axiom::Order,
            Violation::LineCount { .. } => Axiom::LineCount,
            Violation::PointOutOfRange { .. } | Violation::RepeatedPoint { .. } => {
                Axiom::PointRange
            }
            Violation::LineSize { .. } => Axiom::LineSize,
            Violation::PointDegree { .. } => Axiom::PointDegree,
            Violation::PairUncovered { .. } | Violation::PairOnTwoLines { .. } => {
                Axiom::PointsOnOneLine
            }
            Violation::LinesDisjoint { .. } | Violation::LinesMeetTwice { .. } => {
                Axiom::LinesMeetOnce
            }
            Violation::NoQuadrangle => Axiom::Quadrangle,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OrderTooSmall { order } => write!(f, "order {order} < 2"),
            Violation::LineCount { expected, found } => {
                write!(f, "expected {expected} lines, found {found}")
            }
            Violation::PointOutOfRange { line, point } => {
                write!(f, "line {line} contains out-of-range point {point}")
            }
            Violation::RepeatedPoint { line, point } => {
                write!(f, "line {line} lists point {point} twice")
            }
            Violation::LineSize {
                line,
                size,
                expected,
            } => {
                write!(
                    f,
                    "line size != n+1: line {line} has {size} points, expected {expected}"
                )
            }
            Violation::PointDegree {
                point,
                degree,
                expected,
            } => {
                write!(
                    f,
                    "point {point} lies on {degree} lines, expected {expected}"
                )
            }
            Violation::PairUncovered { a, b } => {
                write!(f, "points {a} and {b} lie on no common line")
            }
            Violation::PairOnTwoLines { a, b, lines } => write!(
                f,
                "points {a} and {b} lie on two lines ({} and {})",
                lines.0, lines.1
            ),
            Violation::LinesDisjoint { l1, l2 } => write!(f, "lines {l1} and {l2} do not meet"),
            Violation::LinesMeetTwice { l1, l2, points } => write!(
                f,
                "two lines meet in > 1 point: lines {l1} and {l2} share points {} and {}",
                points.0, points.1
            ),
            Violation::NoQuadrangle => write!(f, "no four points with no three collinear"),
        }
    }
}

/// Outcome of one axiom check: how many violations, and the first one found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub violations: usize,
    pub witness: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub order: usize,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    fn new(order: usize) -> Self {
        ValidationReport {
            order,
            checks: Vec::new(),
        }
    }

    fn record(&mut self, v: Violation) {
        let axiom = v.axiom();
        match self.checks.iter_mut().find(|c| c.axiom == axiom) {
            Some(c) => c.violations += 1,
            None => self.checks.push(AxiomCheck {
                axiom,
                violations: 1,
                witness: Some(v),
            }),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }

    pub fn violated(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| c.violations > 0)
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violated().any(|c| c.axiom == axiom)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let violations: Vec<_> = self
            .violated()
            .map(|c| {
                serde_json::json!({
                    "axiom": c.axiom.describe(),
                    "count": c.violations,
                    "witness": c.witness.as_ref().map(|w| w.to_string()),
                })
            })
            .collect();
        serde_json::json!({
            "order": self.order,
            "valid": self.is_valid(),
            "violations": violations,
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "all axioms hold for order {}", self.order);
        }
        for c in self.violated() {
            write!(
                f,
                "- {} ({} violation(s))",
                c.axiom.describe(),
                c.violations
            )?;
            if let Some(w) = &c.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Checks every projective plane axiom against `inc`, collecting violations.
pub fn validate(inc: &Incidence) -> ValidationReport {
    let n = inc.order;
    let mut report = ValidationReport::new(n);
    if n < 2 {
        report.record(Violation::OrderTooSmall { order: n });
    }
    let npts = inc.num_points();
    if inc.lines.len() != npts {
        report.record(Violation::LineCount {
            expected: npts,
            found: inc.lines.len(),
        });
    }

    // sanitized point sets, one per line
    let mut sets: Vec<BitSet> = Vec::with_capacity(inc.lines.len());
    for (l, pts) in inc.lines.iter().enumerate() {
        let mut set = BitSet::new(npts);
        for &p in pts {
            if p >= npts {
                report.record(Violation::PointOutOfRange { line: l, point: p });
            } else if set.contains(p) {
                report.record(Violation::RepeatedPoint { line: l, point: p });
            } else {
                set.insert(p);
            }
        }
        if pts.len() != n + 1 {
            report.record(Violation::LineSize {
                line: l,
                size: pts.len(),
                expected: n + 1,
            });
        }
        sets.push(set);
    }

    let mut point_lines: Vec<Vec<usize>> = vec![Vec::new(); npts];
    for (l, s) in sets.iter().enumerate() {
        for p in s.iter() {
            point_lines[p].push(l);
        }
    }
    for (p, ls) in point_lines.iter().enumerate() {
        if ls.len() != n + 1 {
            report.record(Violation::PointDegree {
                point: p,
                degree: ls.len(),
                expected: n + 1,
            });
        }
    }

    // point pairs
    let mut first_line = vec![u32::MAX; npts * npts];
    let mut cover = vec![0u8; npts * npts];
    for (l, s) in sets.iter().enumerate() {
        let pts: Vec<usize> = s.iter().collect();
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                let idx = a * npts + b;
                if cover[idx] == 0 {
                    first_line[idx] = l as u32;
                } else if cover[idx] == 1 {
                    report.record(Violation::PairOnTwoLines {
                        a,
                        b,
                        lines: (first_line[idx] as usize, l),
                    });
                }
                cover[idx] = cover[idx].saturating_add(1);
            }
        }
    }
    for a in 0..npts {
        for b in a + 1..npts {
            if cover[a * npts + b] == 0 {
                report.record(Violation::PairUncovered { a, b });
            }
        }
    }

    // line pairs
    for l1 in 0..sets.len() {
        for l2 in l1 + 1..sets.len() {
            let shared = sets[l1].intersection_count(&sets[l2]);
            if shared == 0 {
                report.record(Violation::LinesDisjoint { l1, l2 });
            } else if shared > 1 {
                let mut common = sets[l1].iter().filter(|&p| sets[l2].contains(p));
                let a = common.next().unwrap();
                let b = common.next().unwrap();
                report.record(Violation::LinesMeetTwice {
                    l1,
                    l2,
                    points: (a, b),
                });
            }
        }
    }

    if find_quadrangle(npts, &sets, &point_lines).is_none() {
        report.record(Violation::NoQuadrangle);
    }

    for axiom in [
        Axiom::Order,
        Axiom::LineCount,
        Axiom::PointRange,
        Axiom::LineSize,
        Axiom::PointDegree,
        Axiom::PointsOnOneLine,
        Axiom::LinesMeetOnce,
        Axiom::Quadrangle,
    ] {
        if !report.checks.iter().any(|c| c.axiom == axiom) {
            report.checks.push(AxiomCheck {
                axiom,
                violations: 0,
                witness: None,
            });
        }
    }
    report.checks.sort_by_key(|c| c.axiom);
    report
}

/// Four points, no three on a common line of `sets`.
fn find_quadrangle(npts: usize, sets: &[BitSet], point_lines: &[Vec<usize>]) -> Option<[usize; 4]> {
    // union of all lines through both a and b, plus a and b themselves
    let span = |a: usize, b: usize| -> BitSet {
        let mut out = BitSet::from_indices(npts, [a, b]);
        for &l in &point_lines[a] {
            if sets[l].contains(b) {
                for p in sets[l].iter() {
                    out.insert(p);
                }
            }
        }
        out
    };
    for a in 0..npts {
        for b in a + 1..npts {
            let ab = span(a, b);
            for c in b + 1..npts {
                if ab.contains(c) {
                    continue;
                }
                let ac = span(a, c);
                let bc = span(b, c);
                let d = (0..npts).find(|&d| !ab.contains(d) && !ac.contains(d) && !bc.contains(d));
                if let Some(d) = d {
                    return Some([a, b, c, d]);
                }
            }
        }
    }
    None
}

/// A validated finite projective plane.
#[derive(Clone, PartialEq, Eq)]
pub struct Plane {
    order: usize,
    lines: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
    /// `pair_line[a * N + b]` is the line through `a != b`; `u32::MAX` on the diagonal.
    pair_line: Vec<u32>,
    line_sets: Vec<BitSet>,
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Plane")
            .field("order", &self.order)
            .field("points", &self.num_points())
            .finish()
    }
}

impl Plane {
    /// Validates `inc` and builds the lookup tables.
    pub fn from_incidence(mut inc: Incidence) -> Result<Plane, PlaneError> {
        if inc.order < 2 || inc.order > MAX_PLANE_ORDER {
            return Err(PlaneError::UnsupportedOrder(inc.order));
        }
        let report = validate(&inc);
        if !report.is_valid() {
            return Err(PlaneError::Invalid(report));
        }
        let n = inc.order;
        let npts = inc.num_points();
        for l in &mut inc.lines {
            l.sort_unstable();
        }
        let lines: Vec<Vec<u32>> = inc
            .lines
            .iter()
            .map(|l| l.iter().map(|&p| p as u32).collect())
            .collect();
        let mut point_lines = vec![Vec::with_capacity(n + 1); npts];
        let mut pair_line = vec![u32::MAX; npts * npts];
        let mut line_sets = Vec::with_capacity(npts);
        for (l, pts) in lines.iter().enumerate() {
            for &p in pts {
                point_lines[p as usize].push(l as u32);
            }
            for &a in pts {
                for &b in pts {
                    if a != b {
                        pair_line[a as usize * npts + b as usize] = l as u32;
                    }
                }
            }
            line_sets.push(BitSet::from_indices(npts, pts.iter().map(|&p| p as usize)));
        }
        Ok(Plane {
            order: n,
            lines,
            point_lines,
            pair_line,
            line_sets,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `N = n^2 + n + 1`, the number of points and of lines.
    pub fn num_points(&self) -> usize {
        self.lines.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn line(&self, l: usize) -> &[u32] {
        &self.lines[l]
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn lines_through(&self, p: usize) -> &[u32] {
        &self.point_lines[p]
    }

    /// Points of line `l` as a bitset over `0..N`.
    pub fn line_set(&self, l: usize) -> &BitSet {
        &self.line_sets[l]
    }

    pub fn is_incident(&self, p: usize, l: usize) -> bool {
        self.line_sets[l].contains(p)
    }

    /// The line through two distinct points.
    pub fn line_through(&self, a: usize, b: usize) -> Result<usize, PlaneError> {
        let npts = self.num_points();
        if a >= npts {
            return Err(PlaneError::PointOutOfRange(a));
        }
        if b >= npts {
            return Err(PlaneError::PointOutOfRange(b));
        }
        if a == b {
            return Err(PlaneError::SamePoint(a));
        }
        Ok(self.join(a, b))
    }

    /// [`line_through`](Self::line_through) without checks; `a != b` required.
    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        debug_assert_ne!(a, b);
        self.pair_line[a * self.lines.len() + b] as usize
    }

    /// The point where two distinct lines meet.
    pub fn meet(&self, l1: usize, l2: usize) -> usize {
        debug_assert_ne!(l1, l2);
        let a = &self.line_sets[l1];
        let b = &self.line_sets[l2];
        a.words()
            .iter()
            .zip(b.words())
            .enumerate()
            .find_map(|(i, (x, y))| {
                let w = x & y;
                (w != 0).then(|| i * 64 + w.trailing_zeros() as usize)
            })
            .expect("distinct lines of a projective plane meet")
    }

    pub fn incidence(&self) -> Incidence {
        Incidence {
            order: self.order,
            lines: self
                .lines
                .iter()
                .map(|l| l.iter().map(|&p| p as usize).collect())
                .collect(),
        }
    }

    /// The dual plane: line `i` of `self` becomes point `i`, point `j` becomes line `j`.
    pub fn dual(&self) -> Plane {
        let inc = Incidence {
            order: self.order,
            lines: self
                .point_lines
                .iter()
                .map(|ls| ls.iter().map(|&l| l as usize).collect())
                .collect(),
        };
        Plane::from_incidence(inc).expect("the dual of a projective plane is a projective plane")
    }

    /// Canonical text serialization.
    pub fn to_text(&self) -> String {
        let mut out = format!("{HEADER_PREFIX}{}\n", self.order);
        for l in &self.lines {
            let row: Vec<String> = l.iter().map(|p| p.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Plane, PlaneError> {
        Plane::from_incidence(parse_incidence(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), PlaneError> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Plane, PlaneError> {
        Plane::from_text(&fs::read_to_string(path)?)
    }

    /// Loads a plane and checks that it has the expected order.
    pub fn load_with_order(path: impl AsRef<Path>, expected: usize) -> Result<Plane, PlaneError> {
        let inc = parse_incidence(&fs::read_to_string(path)?)?;
        if inc.order != expected {
            return Err(PlaneError::OrderMismatch {
                expected,
                found: inc.order,
            });
        }
        Plane::from_incidence(inc)
    }
}

/// Parses the plane file format without validating the axioms.
pub fn parse_incidence(text: &str) -> Result<Incidence, PlaneError> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
    let (hno, header) = rows.next().ok_or(PlaneError::Parse {
        line_no: 1,
        msg: "missing header".into(),
    })?;
    let order: usize = header
        .trim_end()
        .strip_prefix(HEADER_PREFIX)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| PlaneError::Parse {
            line_no: hno,
            msg: format!("expected `{HEADER_PREFIX}<n>`, got `{header}`"),
        })?;
    if !(2..=MAX_PLANE_ORDER).contains(&order) {
        return Err(PlaneError::UnsupportedOrder(order));
    }
    let npts = order * order + order + 1;
    let mut lines = Vec::with_capacity(npts);
    for (line_no, row) in rows {
        let mut pts = Vec::with_capacity(order + 1);
        for tok in row.split_whitespace() {
            let p: usize = tok.parse().map_err(|_| PlaneError::Parse {
                line_no,
                msg: format!("`{tok}` is not a point index"),
            })?;
            if let Some(&last) = pts.last() {
                if p <= last {
                    return Err(PlaneError::Parse {
                        line_no,
                        msg: "point indices must be strictly increasing".into(),
                    });
                }
            }
            pts.push(p);
        }
        lines.push(pts);
    }
    if lines.len() != npts {
        return Err(PlaneError::LineCount {
            expected: npts,
            found: lines.len(),
        });
    }
    Ok(Incidence { order, lines })
}

/// Normalized homogeneous coordinates of PG(2,q) in canonical order: triples whose
/// rightmost nonzero entry is 1, sorted lexicographically by element index.
pub fn pg2_coordinates(field: &GaloisField) -> Vec<[FieldElem; 3]> {
    let q = field.order();
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let t = [FieldElem(a), FieldElem(b), FieldElem(c)];
                let last = t.iter().rev().find(|x| !x.is_zero());
                if last == Some(&FieldElem::ONE) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// The Desarguesian plane PG(2,q) over `field`.
pub fn build_pg2(field: &GaloisField) -> Result<Plane, PlaneError> {
    let q = field.order() as usize;
    if q > MAX_PLANE_ORDER {
        return Err(PlaneError::UnsupportedOrder(q));
    }
    let coords = pg2_coordinates(field);
    let dot = |x: &[FieldElem; 3], y: &[FieldElem; 3]| {
        let s = field.add(field.mul(x[0], y[0]), field.mul(x[1], y[1]));
        field.add(s, field.mul(x[2], y[2]))
    };
    let lines = coords
        .iter()
        .map(|a| {
            coords
                .iter()
                .enumerate()
                .filter(|(_, x)| dot(a, x).is_zero())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Plane::from_incidence(Incidence { order: q, lines })
}

/// Convenience: PG(2, p^e).
pub fn pg2(p: u64, e: u32) -> Result<Plane, PlaneError> {
    build_pg2(&GaloisField::new(p, e)?)
}

/// Convenience: PG(2, q) for a prime power `q`.
pub fn pg2_order(q: u64) -> Result<Plane, PlaneError> {
    build_pg2(&GaloisField::with_order(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> Plane {
        pg2(2, 1).unwrap()
    }

    #[test]
    fn fano_shape() {
        let f = fano();
        assert_eq!(f.num_points(), 7);
        assert!(f.lines().iter().all(|l| l.len() == 3));
        let p9 = pg2(3, 2).unwrap();
        assert_eq!(p9.num_points(), 91);
        assert!((0..91).all(|p| p9.lines_through(p).len() == 10));
    }

    #[test]
    fn fano_line_through_axis_points() {
        let field = GaloisField::new(2, 1).unwrap();
        let coords = pg2_coordinates(&field);
        let idx = |t: [u32; 3]| {
            coords
                .iter()
                .position(|c| c.map(|x| x.value()) == t)
                .unwrap()
        };
        let plane = build_pg2(&field).unwrap();
        let l = plane.line_through(idx([0, 0, 1]), idx([0, 1, 0])).unwrap();
        let mut expected: Vec<u32> = [[0, 0, 1], [0, 1, 0], [0, 1, 1]]
            .iter()
            .map(|&t| idx(t) as u32)
            .collect();
        expected.sort();
        assert_eq!(plane.line(l), expected.as_slice());
    }

    #[test]
    fn constructed_planes_validate() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let plane = pg2_order(q).unwrap();
            let report = validate(&plane.incidence());
            assert!(report.is_valid(), "q={q}: {report}");
            let total: usize = plane.lines().iter().map(Vec::len).sum();
            let n = q as usize;
            assert_eq!(total, plane.num_points() * (n + 1));
        }
    }

    #[test]
    fn duplicated_line_is_reported() {
        let mut inc = fano().incidence();
        inc.lines[1] = inc.lines[0].clone();
        let report = validate(&inc);
        assert!(!report.is_valid());
        assert!(report.has(Axiom::LinesMeetOnce));
        let witness = report
            .violated()
            .find(|c| c.axiom == Axiom::LinesMeetOnce)
            .and_then(|c| c.witness.clone())
            .unwrap();
        assert!(witness.to_string().contains("two lines meet in > 1 point"));
    }

    #[test]
    fn removed_incidence_is_reported() {
        let mut inc = fano().incidence();
        inc.lines[2].pop();
        let report = validate(&inc);
        assert!(report.has(Axiom::LineSize));
        let w = report
            .violated()
            .find(|c| c.axiom == Axiom::LineSize)
            .unwrap();
        assert!(w
            .witness
            .as_ref()
            .unwrap()
            .to_string()
            .contains("line size != n+1"));
        assert!(matches!(
            Plane::from_incidence(inc),
            Err(PlaneError::Invalid(_))
        ));
    }

    #[test]
    fn degenerate_structures_fail_quadrangle() {
        // near-pencil on 3 points: {0,1}, {0,2}, {1,2}... claims order 1
        let inc = Incidence {
            order: 1,
            lines: vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        };
        let r = validate(&inc);
        assert!(r.has(Axiom::Order));
        assert!(r.has(Axiom::Quadrangle));
    }

    #[test]
    fn line_through_properties() {
        let f = fano();
        for p in 0..7 {
            let mut through = std::collections::BTreeSet::new();
            for q in 0..7 {
                if p != q {
                    let l = f.line_through(p, q).unwrap();
                    assert!(f.lines_through(p).contains(&(l as u32)));
                    assert!(f.lines_through(q).contains(&(l as u32)));
                    through.insert(l);
                }
            }
            assert_eq!(through.len(), 3);
        }
        assert!(matches!(
            f.line_through(3, 3),
            Err(PlaneError::SamePoint(3))
        ));
        let p3 = pg2(3, 1).unwrap();
        for a in 0..13 {
            for b in 0..13 {
                if a != b {
                    assert_eq!(p3.join(a, b), p3.join(b, a));
                }
            }
        }
    }

    #[test]
    fn pair_line_consistent() {
        let p = pg2(2, 2).unwrap();
        for (l, pts) in p.lines().iter().enumerate() {
            for &a in pts {
                for &b in pts {
                    if a != b {
                        assert_eq!(p.join(a as usize, b as usize), l);
                    }
                }
            }
        }
        for l1 in 0..p.num_lines() {
            for l2 in 0..p.num_lines() {
                if l1 != l2 {
                    let m = p.meet(l1, l2);
                    assert!(p.is_incident(m, l1) && p.is_incident(m, l2));
                }
            }
        }
    }

    #[test]
    fn dual_is_a_plane_and_involutive() {
        let f = fano();
        let d = f.dual();
        assert_eq!(d.order(), 2);
        assert!(validate(&d.incidence()).is_valid());
        assert_eq!(d.dual(), f);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let p = pg2(3, 1).unwrap();
        let text = p.to_text();
        assert!(text.lines().all(|l| l == l.trim_end()));
        assert_eq!(Plane::from_text(&text).unwrap(), p);

        let with_comment = format!("# a comment\n{text}");
        assert_eq!(Plane::from_text(&with_comment).unwrap(), p);

        let short: String = text.lines().take(13).map(|l| format!("{l}\n")).collect();
        let err = Plane::from_text(&short).unwrap_err();
        assert!(err.to_string().contains("expected 13 lines"), "{err}");

        let bad = text.replacen("projective-plane", "projective plane", 1);
        assert!(matches!(
            Plane::from_text(&bad),
            Err(PlaneError::Parse { .. })
        ));

        let unsorted = text.replacen("\n0 1 2 3\n", "\n1 0 2 3\n", 1);
        assert_ne!(unsorted, text);
        assert!(matches!(
            Plane::from_text(&unsorted),
            Err(PlaneError::Parse { .. })
        ));
    }

    #[test]
    fn deterministic_serialization() {
        assert_eq!(pg2(2, 2).unwrap().to_text(), pg2(2, 2).unwrap().to_text());
    }
}
