use std::sync::Arc;

use cornerrank::harness::{replay, z_reduce, Report};
use cornerrank::idempotent::EquivalenceWitness;
use cornerrank::ring::embed::matrix_unit;
use cornerrank::ring::{Elem, Ring, RingRef, DEFAULT_ENUMERATION_CAP};
use cornerrank::stablerank::{skew_sr1_check, verify_reduction, verify_solution, CornerEquation, SkewCorner};
use cornerrank::transforms::{combine, reducer_from_full_corner, vaserstein_bound, CornerSource};
use cornerrank::zsolvers::{m2z, m2z_ring, m2z_unimodular, z_reducer, ZReducer};
use cornerrank::{FullnessCertificate, Reducer};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

fn elems(r: &RingRef) -> Vec<Elem> {
    r.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().elements().to_vec()
}

fn m2zmod(m: u64) -> RingRef {
    Ring::matrix(&Ring::zmod(m).unwrap(), 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn z_reducer_makes_pairs_coprime(a1 in -1_000_000_000i64..1_000_000_000, a2 in -1_000_000_000i64..1_000_000_000, b in -1_000_000i64..1_000_000) {
        let (a1, a2, b) = (BigInt::from(a1), BigInt::from(a2), BigInt::from(b));
        prop_assume!(a1.gcd(&a2).gcd(&b).is_one());
        let (c1, c2) = z_reducer(&a1, &a2, &b).unwrap();
        prop_assert!((&a1 + &b * c1).gcd(&(&a2 + &b * c2)).is_one());
    }

    #[test]
    fn integer_reducer_output_verifies(a1 in -10_000i64..10_000, a2 in -10_000i64..10_000, b in -10_000i64..10_000) {
        prop_assume!(a1.gcd(&a2).gcd(&b) == 1);
        let z = Ring::integers();
        let row = [Elem::int(a1), Elem::int(a2), Elem::int(b)];
        let red = ZReducer::integers().reduce(&row).unwrap();
        prop_assert!(verify_reduction(&z, &row, &red));
    }

    #[test]
    fn matrix_ring_axioms(m in 2u64..7, seed in proptest::collection::vec(0u64..100, 12)) {
        let r = m2zmod(m);
        let mk = |k: usize| Elem::Mat(seed[4 * k..4 * k + 4].iter().map(|&v| Elem::Res(v % m)).collect());
        let (a, b, c) = (mk(0), mk(1), mk(2));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.mul(&r.one(), &a), a.clone());
        prop_assert!(r.is_zero(&r.add(&a, &r.neg(&a))));
    }

    #[test]
    fn single_matrix_unimodular_iff_unit_determinant(e in proptest::collection::vec(-20i64..20, 4)) {
        let a = m2z([[e[0], e[1]], [e[2], e[3]]]);
        let det = e[0] * e[3] - e[1] * e[2];
        prop_assert_eq!(m2z_unimodular(&[a]).unwrap().unimodular, det.abs() == 1);
    }

    #[test]
    fn matrix_formula_closed_form(sr in 1u64..50, n in 1u64..20) {
        let v = vaserstein_bound(sr, n).unwrap();
        prop_assert!(v >= 1);
        // least k with n(k - 1) >= sr - 1
        prop_assert!(n * (v - 1) >= sr - 1);
        prop_assert!(v == 1 || n * (v - 2) < sr - 1);
    }

    #[test]
    fn z_reduce_reports_replay_and_round_trip(seed in 0u64..1000, count in 0usize..20) {
        let rep = z_reduce(seed, count, 1_000_000);
        prop_assert!(rep.passed());
        prop_assert!(replay(&rep).passed());
        let back = Report::from_json(&rep.to_json()).unwrap();
        prop_assert_eq!(&back, &rep);
        prop_assert_eq!(z_reduce(seed, count, 1_000_000).without_timing(), rep.without_timing());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combined_solver_on_m2z4(i in 0usize..256, j in 0usize..256) {
        let r = m2zmod(4);
        let u = |a, b| matrix_unit(&r, a, b, &Elem::Res(1));
        let w = EquivalenceWitness::new(u(0, 1), u(1, 0));
        let c = SkewCorner::new(&r, u(0, 0), u(0, 0)).unwrap();
        let base = skew_sr1_check(&c).unwrap().solver().unwrap().clone();
        let s = combine(base, &w, u(1, 1)).unwrap();
        let corner = s.corner();
        let els = elems(&r);
        let (a, x) = (&els[i], &els[j]);
        let eq = CornerEquation::new(a.clone(), x.clone(), r.sub(corner.p(), &r.mul(a, x)));
        prop_assume!(eq.validate(corner).is_ok());
        let sol = s.solve(&eq).unwrap();
        prop_assert!(verify_solution(corner, &eq, &sol));
    }

    #[test]
    fn full_corner_reduces_m2z_rows(e in proptest::collection::vec(-30i64..30, 12)) {
        let m = m2z_ring();
        let row: Vec<Elem> = (0..3).map(|k| m2z([[e[4 * k], e[4 * k + 1]], [e[4 * k + 2], e[4 * k + 3]]])).collect();
        prop_assume!(m2z_unimodular(&row).unwrap().unimodular);
        let u = |i, j| matrix_unit(&m, i, j, &Elem::int(1));
        let p = u(0, 0);
        let cert = FullnessCertificate::from_pairs(&m, &p, &[(u(0, 0), u(0, 0)), (u(1, 0), u(0, 1))]).unwrap();
        let b = Ring::corner(&m, &p).unwrap();
        let full = reducer_from_full_corner(&m, &p, CornerSource::Reducer(Arc::new(ZReducer::corner(&b).unwrap())), &cert).unwrap();
        let red = full.reduce(&row).unwrap();
        prop_assert!(verify_reduction(&m, &row, &red));
    }
}
