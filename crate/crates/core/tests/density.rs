use lattice_packing::density::{
    ceil_int, density_lower_bound, density_upper_bound, feasibility_sum, fmt_rational, int,
    k_area_direct, k_area_formula, rational, tail_constant, DensityError, Rational, SequenceSpec,
    Verdict,
};
use lattice_packing::lattice::ball_size_formula;
use lattice_packing::{LatticeKind, Vertex};
use num_traits::{One, Zero};
use proptest::prelude::*;

use LatticeKind::{Hex, Square, Tri};

fn naive_sum(kind: LatticeKind, d: u64, n: u64, horizon: u64) -> Rational {
    (d..=horizon).fold(Rational::zero(), |acc, i| {
        acc + int(n as i64) / k_area_formula(kind, i as i64).unwrap()
    })
}

#[test]
fn k_area_examples() {
    assert_eq!(k_area_formula(Tri, 1).unwrap(), int(3));
    assert_eq!(k_area_formula(Tri, 2).unwrap(), int(7));
    assert_eq!(k_area_formula(Hex, 2).unwrap(), int(4));
    assert_eq!(k_area_formula(Hex, 3).unwrap(), int(6));
    assert_eq!(k_area_formula(Square, 1).unwrap(), int(2));
    assert_eq!(k_area_formula(Square, 3).unwrap(), int(8));
    assert_eq!(k_area_formula(Square, 4).unwrap(), int(13));
    assert_eq!(k_area_formula(Hex, 4).unwrap(), int(10));
    assert_eq!(k_area_formula(Hex, 1).unwrap(), int(2));
    assert_eq!(k_area_formula(Hex, 6).unwrap(), int(19));
    assert!(matches!(
        k_area_formula(Hex, 0),
        Err(DensityError::NonPositiveK(0))
    ));
}

#[test]
fn k_area_direct_matches_formula() {
    for kind in LatticeKind::ALL {
        for k in 1..=16 {
            let f = k_area_formula(kind, k).unwrap();
            for center in [Vertex::new(0, 0), Vertex::new(1, 0), Vertex::new(-4, 9)] {
                assert_eq!(
                    k_area_direct(kind, k, center).unwrap(),
                    f,
                    "{kind} A({k}) at {center}"
                );
            }
        }
    }
}

#[test]
fn even_k_area_is_a_ball() {
    for kind in LatticeKind::ALL {
        for j in 1..=10 {
            let ball = ball_size_formula(kind, j).unwrap();
            assert_eq!(k_area_formula(kind, 2 * j).unwrap(), int(ball as i64));
        }
    }
}

#[test]
fn k_area_is_nondecreasing() {
    for kind in LatticeKind::ALL {
        let areas: Vec<Rational> = (1..=200)
            .map(|k| k_area_formula(kind, k).unwrap())
            .collect();
        assert!(areas.windows(2).all(|w| w[0] <= w[1]), "{kind}");
    }
}

#[test]
fn tail_constant_is_sound() {
    for kind in LatticeKind::ALL {
        let c = tail_constant(kind);
        for i in 1..=10_000i64 {
            assert!(
                k_area_formula(kind, i).unwrap() >= &c * int(i * i),
                "{kind} i={i}"
            );
        }
    }
}

#[test]
fn density_upper_bounds() {
    assert_eq!(density_upper_bound(Hex, 2).unwrap(), rational(1, 4));
    assert_eq!(density_upper_bound(Tri, 3).unwrap(), rational(1, 12));
    assert_eq!(density_upper_bound(Square, 1).unwrap(), rational(1, 2));
}

#[test]
fn certificate_examples() {
    let hex = feasibility_sum(Hex, &SequenceSpec::dn(2, 1), 10_000).unwrap();
    assert_eq!(hex.verdict(), Verdict::Infeasible);
    assert!(hex.partial_sum_at_most_milli(994));
    assert_eq!(hex.total_bound, &hex.partial_sum + &hex.tail_bound);
    assert_eq!(hex.tail_bound, rational(1, 3750));

    let square = feasibility_sum(Square, &SequenceSpec::dn(12, 6), 10_000).unwrap();
    assert!(square.is_infeasible() && square.partial_sum_at_most_milli(959));

    let tri = feasibility_sum(Tri, &SequenceSpec::dn(1, 1), 10_000).unwrap();
    assert!(tri.is_infeasible() && tri.partial_sum_at_most_milli(854));
    assert!(!tri.partial_sum_at_most_milli(853));

    let finite = feasibility_sum(Hex, &SequenceSpec::dn(2, 4), 10_000).unwrap();
    assert_eq!(finite.verdict(), Verdict::Inconclusive);
}

#[test]
fn certificate_report_is_exact() {
    let cert = feasibility_sum(Tri, &SequenceSpec::dn(1, 1), 100).unwrap();
    let text = cert.to_string();
    for needle in ["tri", "(d=1,n=1)", "100", "1/75", "INFEASIBLE"] {
        assert!(text.contains(needle), "{needle} missing from:\n{text}");
    }
}

#[test]
fn parallel_sum_equals_sequential() {
    for kind in LatticeKind::ALL {
        for (d, n) in [(1, 1), (2, 3), (5, 2)] {
            let cert = feasibility_sum(kind, &SequenceSpec::dn(d, n), 1_500).unwrap();
            assert_eq!(
                cert.partial_sum,
                naive_sum(kind, d, n, 1_500),
                "{kind} ({d},{n})"
            );
        }
    }
}

#[test]
fn explicit_sequences() {
    let spec = SequenceSpec::Explicit(vec![1, 2, 2, 3]);
    let cert = feasibility_sum(Tri, &spec, 100).unwrap();
    assert!(cert.tail_bound.is_zero());
    assert_eq!(
        cert.partial_sum,
        rational(1, 3) + rational(2, 7) + rational(1, 12)
    );
    // values beyond the horizon go into the tail
    let cut = feasibility_sum(Tri, &spec, 2).unwrap();
    assert_eq!(cut.partial_sum, rational(1, 3) + rational(2, 7));
    assert!(cut.tail_bound >= rational(1, 12));
    assert!(matches!(
        feasibility_sum(Hex, &SequenceSpec::dn(5, 1), 3),
        Err(DensityError::HorizonTooSmall { .. })
    ));
    assert!(feasibility_sum(Hex, &SequenceSpec::Explicit(vec![3, 2]), 10).is_err());
}

#[test]
fn lower_bound_examples() {
    let cap = 1_000_000;
    assert_eq!(
        density_lower_bound(Hex, &SequenceSpec::dn(3, 2), cap).unwrap(),
        15
    );
    assert_eq!(
        density_lower_bound(Square, &SequenceSpec::dn(2, 2), cap).unwrap(),
        11
    );
    assert_eq!(
        density_lower_bound(Tri, &SequenceSpec::dn(2, 2), cap).unwrap(),
        127
    );
    assert_eq!(
        density_lower_bound(Hex, &SequenceSpec::dn(2, 4), cap).unwrap(),
        4
    );
    assert!(matches!(
        density_lower_bound(Tri, &SequenceSpec::dn(1, 1), 10_000),
        Err(DensityError::NoFiniteBound { .. })
    ));
}

#[test]
fn rational_helpers() {
    assert_eq!(fmt_rational(&rational(6, 4)), "3/2");
    assert_eq!(fmt_rational(&int(6)), "6");
    assert_eq!(ceil_int(&rational(7, 3)), 3);
    assert_eq!(ceil_int(&int(-2)), -2);
    assert!(rational(2, -4) < Rational::zero());
    assert_eq!(rational(2, 4) + rational(1, 2), Rational::one());
}

proptest! {
    #[test]
    fn larger_horizon_never_loses_a_certificate(kind_i in 0usize..3, d in 1u64..8, n in 1u64..4, k in 20u64..400) {
        let kind = LatticeKind::ALL[kind_i];
        let spec = SequenceSpec::dn(d, n);
        let small = feasibility_sum(kind, &spec, k).unwrap();
        let large = feasibility_sum(kind, &spec, 2 * k).unwrap();
        prop_assert!(large.total_bound <= small.total_bound);
        prop_assert!(large.partial_sum >= small.partial_sum);
    }

    #[test]
    fn dn_terms_follow_the_rule(d in 1u64..50, n in 1u64..10, i in 1u64..500) {
        let s = SequenceSpec::dn(d, n);
        prop_assert_eq!(s.term(i), Some(d + (i - 1) / n));
        prop_assert!(s.term(i) <= s.term(i + 1));
    }

    #[test]
    fn lower_bound_is_where_the_sum_crosses_one(kind_i in 0usize..3, d in 1u64..4, n in 2u64..6) {
        let kind = LatticeKind::ALL[kind_i];
        let spec = SequenceSpec::dn(d, n);
        if let Ok(b) = density_lower_bound(kind, &spec, 100_000) {
            let sum = |m: u64| (1..=m).fold(Rational::zero(), |acc, i| acc + k_area_formula(kind, spec.term(i).unwrap() as i64).unwrap().recip());
            prop_assert!(sum(b) >= Rational::one());
            prop_assert!(sum(b - 1) < Rational::one());
        }
    }
}
