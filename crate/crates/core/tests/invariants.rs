use std::collections::BTreeSet;

use levicount::gf::GaloisField;
use levicount::plane::{pg2, Plane};
use levicount::poly::{fit_exact, RationalPolynomial, SampleSet};
use levicount::quasigon::{
    census_with_audit, dihedral, equivalent, line_sequence, symmetry_group, Permutation,
    SymmetricGroup, DEFAULT_CENSUS_BUDGET,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn distinct_points(plane_points: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    subsequence((0..plane_points).collect::<Vec<_>>(), k).prop_shuffle()
}

fn plane(q: u64) -> Plane {
    match q {
        2 => pg2(2, 1),
        3 => pg2(3, 1),
        _ => pg2(2, 2),
    }
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn field_axioms(
        (p, e) in prop_oneof![Just((2u64, 3u32)), Just((3, 2)), Just((5, 1)), Just((7, 2))],
        a in 0usize..64, b in 0usize..64, c in 0usize..64,
    ) {
        let f = GaloisField::new(p, e).unwrap();
        let els: Vec<_> = f.elements().collect();
        let (a, b, c) = (els[a % els.len()], els[b % els.len()], els[c % els.len()]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert!(f.add(a, f.neg(a)).is_zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), f.pow(a, 0));
        }
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }

    #[test]
    fn permutation_group_laws(
        a in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        b in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        c in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let (a, b, c) = (
            Permutation::new(a).unwrap(),
            Permutation::new(b).unwrap(),
            Permutation::new(c).unwrap(),
        );
        let id = Permutation::identity(6);
        prop_assert_eq!(a.compose(&a.inverse()), id.clone());
        prop_assert_eq!(a.inverse().compose(&a), id.clone());
        prop_assert_eq!(a.compose(&id), a.clone());
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        for i in 0..6 {
            prop_assert_eq!(a.compose(&b).apply(i), a.apply(b.apply(i)));
        }
    }

    #[test]
    fn exact_fit_recovers_integer_polynomials(
        coeffs in prop::collection::vec(-50i64..50, 1..8),
        start in 1u64..20,
    ) {
        let poly = RationalPolynomial::new(
            coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(),
        );
        let degree = coeffs.len() - 1;
        let samples = SampleSet::new((start..start + degree as u64 + 1).map(|n| {
            (n, poly.eval_int(n).to_integer())
        }))
        .unwrap();
        let fitted = fit_exact(&samples, degree).unwrap();
        prop_assert_eq!(fitted.coefficients(), poly.coefficients());
        prop_assert_eq!(fitted.eval_int(start + 100), poly.eval_int(start + 100));
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn dihedral_symmetries_always_fix_the_subgraph(
        (q, pts) in prop_oneof![Just(2u64), Just(3), Just(4)]
            .prop_flat_map(|q| (Just(q), 3usize..=6))
            .prop_flat_map(|(q, k)| (Just(q), distinct_points(plane(q).num_points(), k))),
    ) {
        let p = plane(q);
        let k = pts.len();
        let qg = line_sequence(&p, &pts).unwrap();
        let s: BTreeSet<_> = symmetry_group(&p, &qg, &SymmetricGroup::new(k).unwrap())
            .unwrap()
            .into_iter()
            .collect();
        let dk: BTreeSet<_> = dihedral(k).into_iter().collect();
        prop_assert!(dk.is_subset(&s));
        if qg.is_gon() || qg.is_almost_gon() {
            prop_assert_eq!(&s, &dk);
        }
        prop_assert!(s.iter().all(|g| g.degree() == k));
        prop_assert!(equivalent(&qg, &qg));
    }
}

#[test]
fn line_sequences_are_shared_within_block_bounds() {
    let p = pg2(3, 1).unwrap();
    for k in 4..=6 {
        let (census, audit) = census_with_audit(&p, k, DEFAULT_CENSUS_BUDGET).unwrap();
        assert!(audit.passed(), "k={k}: {audit:?}");
        assert_eq!(audit.over_bound, 0);
        assert_eq!(audit.too_few_blocks, 0);
        assert_eq!(audit.split_repeat_collisions, 0);
        assert_eq!(census.unrecovered, 0u32.into());
        assert!(audit.line_sequences > 0);
        println!(
            "k={k}: {} line sequences, {} strictly below the block-product bound",
            audit.line_sequences, audit.below_bound
        );
    }
}
