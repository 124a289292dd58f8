//! Acceptance criteria. Each criterion prints one `criterion N: PASS|FAIL` line
//! and all of them run in sequence so the runtime limits are measured without
//! competing tests. Tolerances are exact equality unless stated; runtime limits
//! are pinned per criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use levicount::cycles::{count_cycles_graph, count_gons};
use levicount::levi::{
    a_squared_identity, bipartite_square, closed_walks_direct, closed_walks_formula, LeviGraph,
    Side, SimpleGraph,
};
use levicount::plane::{pg2_order, Plane};
use levicount::poly::{
    check_leading_coefficients, conjecture_residuals, fit_exact, int, square_cap, SampleSet,
};
use levicount::quasigon::{
    census, check_cycle_bounds, dihedral, gamma_of, is_closed, line_sequence, symmetry_group,
    Permutation, QuasiGon, SymmetricGroup, DEFAULT_CENSUS_BUDGET,
};

const RANDOM_SEED: u64 = 0x5eed_2024;
const RANDOM_SAMPLES: usize = 1000;

struct Outcome {
    ok: bool,
    detail: String,
}

fn criterion(id: u32, limit: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let ok = out.ok && in_time;
    println!(
        "criterion {id}: {} ({}; {:.2}s of {}s allowed)",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn plane(q: u64) -> Plane {
    pg2_order(q).unwrap()
}

fn closed_walks() -> Outcome {
    let mut bad = Vec::new();
    for n in [2u64, 3, 4, 5] {
        let g = LeviGraph::new(&plane(n));
        for k in 1..=10 {
            if closed_walks_direct(&g, k).unwrap() != closed_walks_formula(n, k) {
                bad.push((n, k));
            }
        }
    }
    Outcome {
        ok: bad.is_empty() && closed_walks_formula(2, 3) == BigUint::from(1554u32),
        detail: format!("40 (n,k) pairs, mismatches {bad:?}"),
    }
}

fn square_identity() -> Outcome {
    let failed: Vec<u64> = [2u64, 3, 4, 5, 7, 8, 9]
        .into_iter()
        .filter(|&q| a_squared_identity(&LeviGraph::new(&plane(q))).is_err())
        .collect();
    Outcome {
        ok: failed.is_empty(),
        detail: format!("q in 2..9, failures {failed:?}"),
    }
}

fn heawood_ground_truth() -> Outcome {
    let fano = plane(2);
    let h = LeviGraph::new(&fano);
    let both = |k: usize| {
        (
            count_gons(&fano, k, 1).unwrap().count,
            count_cycles_graph(&h, 2 * k, 1).unwrap().count,
        )
    };
    let (a6, b6) = both(3);
    let (a8, b8) = both(4);
    let mut ok = a6 == BigUint::from(28u32) && b6 == a6 && a8 == BigUint::from(21u32) && b8 == a8;
    let mut profile = Vec::new();
    for k in 3..=7 {
        let (a, b) = both(k);
        ok &= a == b;
        profile.push(a.to_string());
    }
    Outcome {
        ok,
        detail: format!(
            "c6 = {a6}/{b6}, c8 = {a8}/{b8}, profile k=3..7 [{}]",
            profile.join(", ")
        ),
    }
}

fn algorithm_agreement() -> Outcome {
    let mut bad = Vec::new();
    let mut cases = 0;
    for q in [2u64, 3, 4] {
        let p = plane(q);
        let g = LeviGraph::new(&p);
        for k in 3..=7 {
            cases += 1;
            if count_gons(&p, k, 0).unwrap().count
                != count_cycles_graph(&g, 2 * k, 0).unwrap().count
            {
                bad.push((q, k));
            }
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: format!("{cases} cases, disagreements {bad:?}"),
    }
}

fn census_identities() -> Outcome {
    let mut cases: Vec<(u64, usize)> = (3..=7).map(|k| (2, k)).collect();
    cases.extend((3..=6).map(|k| (3, k)));
    cases.extend([(5, 4), (5, 5)]);
    let mut bad = Vec::new();
    for &(q, k) in &cases {
        let p = plane(q);
        let c = census(&p, k, 0, DEFAULT_CENSUS_BUDGET).unwrap();
        let gons = count_gons(&p, k, 0).unwrap().count;
        let identities_hold = c.identities().iter().all(|x| x.1);
        if !identities_hold || c.reconstructed_cycles() != Some(gons) {
            bad.push((q, k));
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: format!("{} censuses, failures {bad:?}", cases.len()),
    }
}

fn bound_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (q, k) in [(5u64, 4usize), (5, 5), (7, 4), (7, 5), (8, 4), (9, 4)] {
        let p = plane(q);
        let c = census(&p, k, 0, DEFAULT_CENSUS_BUDGET).unwrap();
        let c_prev = count_gons(&p, k - 1, 0).unwrap().count;
        let count = count_gons(&p, k, 0).unwrap().count;
        let report = check_cycle_bounds(&c, &c_prev, &count);
        checked += report.items.len();
        // every item is applicable here since n >= k >= 4
        for item in &report.items {
            if item.verdict != levicount::quasigon::Verdict::Pass {
                failures.push(format!("(q={q},k={k}) {}", item.name));
            }
        }
    }
    Outcome {
        ok: failures.is_empty(),
        detail: format!("{checked} bound items over 6 cases, failures {failures:?}"),
    }
}

fn samples_for(k: usize, orders: &[u64]) -> SampleSet {
    SampleSet::new(
        orders
            .iter()
            .map(|&q| (q, BigInt::from(count_gons(&plane(q), k, 0).unwrap().count))),
    )
    .unwrap()
}

fn leading_coefficients() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (k, orders, held_out) in [
        (3usize, vec![2u64, 3, 4, 5, 7, 8, 9], 11u64),
        (4, vec![2, 3, 4, 5, 7, 8, 9, 11, 13], 16),
    ] {
        let poly = fit_exact(&samples_for(k, &orders), 2 * k).unwrap();
        let report = check_leading_coefficients(&poly, k).unwrap();
        let predicted = poly.eval_int(held_out);
        let counted = int(count_gons(&plane(held_out), k, 0).unwrap().count);
        ok &= report.passed() && report.tabulated && predicted == counted;
        notes.push(format!(
            "k={k}: leading [{}] held-out n={held_out} {}",
            report
                .checks
                .iter()
                .map(|c| c.found.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            if predicted == counted {
                "matches"
            } else {
                "differs"
            }
        ));
    }
    Outcome {
        ok,
        detail: notes.join("; "),
    }
}

fn square_cap_and_squares() -> Outcome {
    let mut ok = true;
    let mut counts = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let p = plane(q);
        let v = 2 * p.num_points() as u64;
        for k in 3..=5 {
            let c = count_gons(&p, k, 0).unwrap().count;
            ok &= int(c) <= square_cap(v, k).unwrap();
            counts += 1;
        }
    }
    // C4-free bipartite fixtures with at most 60 vertices
    let mut fixtures: Vec<(String, SimpleGraph, Vec<usize>, Vec<usize>)> = Vec::new();
    for q in [2u64, 3, 4] {
        let l = LeviGraph::new(&plane(q));
        fixtures.push((
            format!("levi q={q}"),
            l.graph().clone(),
            l.side(Side::Points),
            l.side(Side::Lines),
        ));
    }
    for len in [8usize, 10, 12, 16] {
        let c = SimpleGraph::cycle(len);
        fixtures.push((
            format!("cycle {len}"),
            c,
            (0..len).step_by(2).collect(),
            (1..len).step_by(2).collect(),
        ));
    }
    let mut squares = 0;
    for (name, g, side, other) in &fixtures {
        for (a, b) in [(side, other), (other, side)] {
            let sq = bipartite_square(g, a).unwrap();
            // simple: one edge per pair of neighbours of each far-side vertex
            let pairs: usize = b.iter().map(|&z| g.degree(z) * (g.degree(z) - 1) / 2).sum();
            ok &= sq.num_edges() == pairs;
            let max_k = (g.num_vertices() / 2).min(if a.len() > 13 { 5 } else { 7 });
            for k in 3..=max_k {
                let lhs = count_cycles_graph(&sq, k, 0).unwrap().count;
                let rhs = count_cycles_graph(g, 2 * k, 0).unwrap().count;
                if lhs < rhs {
                    println!("  square deficit on {name} k={k}: {lhs} < {rhs}");
                    ok = false;
                }
                squares += 1;
            }
        }
    }
    Outcome {
        ok,
        detail: format!("{counts} counts under cap, {squares} square comparisons"),
    }
}

/// Orbit-stable facts about one quasi-gon's stabilizer.
/// Returns (dihedral facts hold, stabilizer size, closed under composition).
fn stabilizer_ok(
    p: &Plane,
    qg: &QuasiGon,
    group: &SymmetricGroup,
    dk: &BTreeSet<Permutation>,
) -> (bool, usize, bool) {
    let s = symmetry_group(p, qg, group).unwrap();
    let set: BTreeSet<Permutation> = s.iter().cloned().collect();
    let mut ok = dk.is_subset(&set);
    if qg.is_gon() || qg.is_almost_gon() {
        ok &= set == *dk;
    }
    (ok, s.len(), is_closed(&s))
}

/// The seven-point pattern: `P5, P6, P7, P1` collinear, the other five lines
/// distinct, and `P4` on the line `P1P2` without being joined to it.
fn seven_point_witness(p: &Plane) -> Option<QuasiGon> {
    let np = p.num_points();
    for l in 0..p.num_lines() {
        let on: Vec<usize> = p.line(l).iter().map(|&x| x as usize).collect();
        if on.len() < 4 {
            return None;
        }
        let (p5, p6, p7, p1) = (on[0], on[1], on[2], on[3]);
        for p2 in (0..np).filter(|&x| !p.is_incident(x, l)) {
            let l12 = p.join(p1, p2);
            for &p4 in p.line(l12) {
                let p4 = p4 as usize;
                if p4 == p1 || p4 == p2 {
                    continue;
                }
                for p3 in 0..np {
                    let pts = [p1, p2, p3, p4, p5, p6, p7];
                    let Ok(qg) = line_sequence(p, &pts) else {
                        continue;
                    };
                    let first5: BTreeSet<usize> = qg.lines()[..5].iter().copied().collect();
                    if first5.len() == 5 && qg.j() == 5 {
                        return Some(qg);
                    }
                }
            }
        }
    }
    None
}

fn symmetry_suite() -> Outcome {
    let mut ok = true;
    let mut checked = 0usize;
    let mut larger = 0usize;
    let mut not_closed = 0usize;
    let fano = plane(2);
    for k in 3..=7 {
        let group = SymmetricGroup::new(k).unwrap();
        let dk: BTreeSet<Permutation> = dihedral(k).into_iter().collect();
        let mut tuple = Vec::new();
        every_tuple(7, k, &mut tuple, &mut |pts| {
            let qg = line_sequence(&fano, pts).unwrap();
            let (good, size, closed) = stabilizer_ok(&fano, &qg, &group, &dk);
            ok &= good;
            larger += (size > 2 * k) as usize;
            not_closed += !closed as usize;
            checked += 1;
        });
    }
    let p3 = plane(3);
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let all: Vec<usize> = (0..p3.num_points()).collect();
    for k in 4..=7 {
        let group = SymmetricGroup::new(k).unwrap();
        let dk: BTreeSet<Permutation> = dihedral(k).into_iter().collect();
        for _ in 0..RANDOM_SAMPLES {
            let pts: Vec<usize> = all.choose_multiple(&mut rng, k).copied().collect();
            let qg = line_sequence(&p3, &pts).unwrap();
            let (good, size, closed) = stabilizer_ok(&p3, &qg, &group, &dk);
            ok &= good;
            larger += (size > 2 * k) as usize;
            not_closed += !closed as usize;
            checked += 1;
        }
    }
    let witness = seven_point_witness(&p3);
    let mut witness_note = String::from("no seven-point witness");
    if let Some(qg) = witness {
        let group = SymmetricGroup::new(7).unwrap();
        let s = symmetry_group(&p3, &qg, &group).unwrap();
        let swap = Permutation::transposition(7, 5, 6);
        let g = gamma_of(&qg);
        let pts = qg.points();
        let shape_ok = g.point_degree(pts[5]) == 1
            && g.point_degree(pts[6]) == 1
            && !g.edges.contains(&(pts[3], qg.lines()[0]))
            && p3.is_incident(pts[3], qg.lines()[0]);
        ok &= s.contains(&swap) && s.len() > 14 && shape_ok;
        witness_note = format!(
            "seven-point witness {:?} with |S| = {}, closed under composition: {}",
            pts,
            s.len(),
            is_closed(&s)
        );
    } else {
        ok = false;
    }
    Outcome {
        ok,
        detail: format!(
            "{checked} stabilizers, {larger} larger than dihedral, \
             {not_closed} not closed under composition, {witness_note}"
        ),
    }
}

fn every_tuple(n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for p in 0..n {
        if !cur.contains(&p) {
            cur.push(p);
            every_tuple(n, k, cur, f);
            cur.pop();
        }
    }
}

#[test]
fn acceptance_criteria() {
    let results = [
        criterion(1, secs(10), closed_walks),
        criterion(2, secs(5), square_identity),
        criterion(3, secs(1), heawood_ground_truth),
        criterion(4, secs(300), algorithm_agreement),
        criterion(5, secs(600), census_identities),
        criterion(6, secs(1800), bound_suite),
        criterion(7, secs(7200), leading_coefficients),
        criterion(8, secs(300), square_cap_and_squares),
        criterion(9, secs(300), symmetry_suite),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

/// Evidence only: residuals of exact 12-cycle counts against the conjectured
/// expansion. Not a pass/fail criterion for the conjecture itself.
#[test]
fn criterion_10_residuals() {
    let samples = SampleSet::new([7u64, 8].map(|q| {
        (
            q,
            BigInt::from(count_gons(&pg2_order(q).unwrap(), 6, 0).unwrap().count),
        )
    }))
    .unwrap();
    let report = conjecture_residuals(6, &samples).unwrap();
    let ratios: Vec<String> = report
        .residuals
        .iter()
        .map(|r| format!("n={}: {}", r.n, r.ratio))
        .collect();
    println!(
        "criterion 10: REPORTED (evidence only; residual / n^8 {}; |ratio| non-increasing: {})",
        ratios.join(", "),
        report.abs_ratio_non_increasing
    );
    assert_eq!(report.residuals.len(), 2);
}
