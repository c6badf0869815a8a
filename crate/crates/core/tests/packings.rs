use lattice_packing::density::{k_area_formula, rational, Rational};
use lattice_packing::lattice::Window;
use lattice_packing::packings::{
    base_packing, compose, compose_many, coset_representatives, find_scheme, scheme_catalog,
    PackingError, Params,
};
use lattice_packing::{LatticeKind, LinearPackingSpec, SubdivisionScheme, Vertex};
use num_traits::Zero;
use proptest::prelude::*;

use LatticeKind::{Hex, Square, Tri};

fn v(a: i64, b: i64) -> Vertex {
    Vertex::new(a, b)
}

fn scheme(id: &str, k: u64) -> SubdivisionScheme {
    find_scheme(id).unwrap().instantiate(k, 1).unwrap()
}

#[test]
fn enumerate_examples() {
    let x2 = base_packing(Hex, 2).unwrap();
    assert_eq!(
        x2.enumerate(&Window::new(0, 3, 0, 0).unwrap()),
        vec![v(0, 0)]
    );

    let x1 = LinearPackingSpec::of(Tri, (1, 1), (3, 0));
    assert_eq!(
        x1.enumerate(&Window::new(0, 2, 0, 2).unwrap()),
        vec![v(0, 0), v(1, 1), v(2, 2)]
    );

    // a 26 x 26 window holds exactly 52 fundamental cells of a det-13 lattice
    let x4 = base_packing(Square, 4).unwrap();
    assert_eq!(x4.enumerate(&Window::new(0, 25, 0, 25).unwrap()).len(), 52);
}

#[test]
fn base_packing_certificates() {
    let table = [
        (Hex, 1, 2u64),
        (Hex, 2, 4),
        (Hex, 3, 6),
        (Hex, 4, 11),
        (Square, 1, 2),
        (Square, 2, 5),
        (Square, 3, 8),
        (Square, 4, 13),
        (Tri, 1, 3),
        (Tri, 2, 7),
        (Tri, 3, 12),
    ];
    for (kind, i, index) in table {
        let x = base_packing(kind, i).unwrap();
        let cert = x.min_pair_distance(i);
        assert!(cert.is_valid(), "{kind} X_{i}");
        assert_eq!(cert.min_distance, i + 1, "{kind} X_{i}");
        assert_eq!(x.index(), index);
        assert_eq!(x.density(), rational(1, index as i64));
        // never denser than the k-area allows
        assert!(x.density() <= k_area_formula(kind, i as i64).unwrap().recip());
    }
    assert!(base_packing(Tri, 4).is_none());
}

#[test]
fn printed_generators() {
    let x2 = LinearPackingSpec::of(Square, (2, 1), (1, 3));
    assert_eq!(x2.min_pair_distance(2).min_distance, 3);
    assert_eq!(
        LinearPackingSpec::of(Hex, (3, 1), (6, 0))
            .min_pair_distance(3)
            .min_distance,
        4
    );
    assert_eq!(
        LinearPackingSpec::of(Hex, (3, 2), (7, 1))
            .min_pair_distance(4)
            .min_distance,
        5
    );
    // the printed square X_3 form contains (2,0)
    let printed = LinearPackingSpec::of(Square, (2, 0), (4, 2));
    let cert = printed.min_pair_distance(3);
    assert_eq!(cert.min_distance, 2);
    assert!(!cert.is_valid());
}

#[test]
fn degenerate_generators_are_rejected() {
    assert!(matches!(
        LinearPackingSpec::new(Hex, v(2, 1), v(4, 2), v(0, 0)),
        Err(PackingError::Degenerate { .. })
    ));
}

#[test]
fn base_packings_tile_their_lattice() {
    for kind in LatticeKind::ALL {
        let is = if kind == Tri { 1..=3 } else { 1..=4 };
        for i in is {
            let s = scheme(&format!("{}.full.x{i}", kind.name()), 1);
            let x = base_packing(kind, i).unwrap();
            assert_eq!(s.copy_count() as u64, x.index());
            assert!(s.verify().passed(), "{}", s.verify());
        }
    }
}

#[test]
fn catalog_examples() {
    let s = scheme("hex.x3.p10k", 1);
    assert_eq!(s.copy_count(), 8);
    assert_eq!(
        s.families[0].child,
        LinearPackingSpec::of(Hex, (6, 4), (12, 0))
    );
    assert_eq!(s.families[0].radius, 9);

    let s = scheme("hex.x4.p11k", 1);
    assert_eq!((s.copy_count(), s.families[0].radius), (6, 10));

    let s = scheme("tri.x3.p6k", 1);
    assert_eq!((s.copy_count(), s.families[0].radius), (3, 5));
    assert_eq!(
        s.families[0].child,
        LinearPackingSpec::of(Tri, (6, 6), (6, 0))
    );

    // two 3-packings partition X_2, then four 7-packings partition X_3 at k = 2
    let s = scheme("hex.x2.p4k", 1);
    assert_eq!((s.copy_count(), s.families[0].radius), (2, 3));
    let s = scheme("hex.x3.p4k", 2);
    assert_eq!((s.copy_count(), s.families[0].radius), (4, 7));
    assert!(s.verify().passed());
}

#[test]
fn every_catalog_entry_but_the_literal_halves_verifies() {
    let mut failed = Vec::new();
    for entry in scheme_catalog() {
        for (k, m) in entry.default_params(3) {
            let s = entry.instantiate(k, m).unwrap();
            let r = s.verify();
            assert!(s.density_identity_holds(), "{}", s.name);
            assert!(
                r.exact.ok == r.window.ok,
                "{}: exact and window checks disagree",
                s.name
            );
            if !r.passed() {
                failed.push(entry.id.clone());
            }
        }
    }
    failed.dedup();
    assert_eq!(failed, vec!["hex.x3.p10k.halves".to_string()]);
}

#[test]
fn literal_halves_fail_on_distance_not_partition() {
    for k in 1..=3 {
        let r = scheme("hex.x3.p10k.halves", k).verify();
        assert!(r.exact.ok && r.window.ok);
        assert!(r.certificates.iter().any(|c| c.min_distance == 12 * k));
        assert!(r.certificates.iter().all(|c| !c.is_valid()));
    }
}

#[test]
fn composition_gives_four_nines_and_eight_fifteens() {
    let group = scheme("hex.x3.p10k.group", 1);
    let joint = scheme("hex.x3.p10k.group.joint", 1);
    let split = scheme("hex.x3.p10k.group.split", 1);
    assert_eq!(group.copy_count(), 2);
    let composed = compose_many(&group, &[(0, &joint), (1, &split)]).unwrap();
    let mut radii: Vec<u64> = composed.children().iter().map(|(_, r)| *r).collect();
    radii.sort();
    assert_eq!(radii, [vec![9; 4], vec![15; 8]].concat());
    let r = composed.verify();
    assert!(r.passed(), "{r}");
}

#[test]
fn identity_composition_changes_nothing() {
    let outer = scheme("hex.full.x2", 1);
    let x2 = base_packing(Hex, 2).unwrap();
    let identity = SubdivisionScheme::single("id", x2, x2, 2, vec![v(0, 0)]);
    let composed = compose(&outer, 0, &identity).unwrap();
    assert_eq!(composed.children(), outer.children());
}

#[test]
fn composition_checks_the_lattice() {
    let outer = scheme("hex.full.x2", 1);
    let wrong = scheme("hex.x3.p4k", 1);
    assert!(matches!(
        compose(&outer, 0, &wrong),
        Err(PackingError::Incompatible(_))
    ));
    assert!(matches!(
        compose(&outer, 9, &wrong),
        Err(PackingError::Incompatible(_))
    ));
}

#[test]
fn small_windows_are_an_error() {
    let s = scheme("hex.x3.p10k", 1);
    assert!(matches!(
        s.verify_partition(&Window::centered(5)),
        Err(PackingError::WindowTooSmall { .. })
    ));
}

#[test]
fn broken_partition_is_reported() {
    let x2 = base_packing(Hex, 2).unwrap();
    let child = LinearPackingSpec::of(Hex, (4, 2), (8, 0));
    // both copies at the origin: overlap, and half of X_2 uncovered
    let s = SubdivisionScheme::single("broken", x2, child, 3, vec![v(0, 0), v(0, 0)]);
    let r = s.verify();
    assert!(!r.exact.ok && !r.window.ok);
}

#[test]
fn unknown_ids_and_parameters() {
    assert!(matches!(
        find_scheme("hex.x9.p1k"),
        Err(PackingError::UnknownScheme(_))
    ));
    let fixed = find_scheme("hex.full.x2").unwrap();
    assert!(matches!(
        fixed.instantiate(2, 1),
        Err(PackingError::BadParams { .. })
    ));
    assert!(matches!(
        find_scheme("hex.x3.p10k").unwrap().instantiate(0, 1),
        Err(PackingError::BadParams { .. })
    ));
}

#[test]
fn coset_representatives_count_the_index() {
    let x2 = base_packing(Hex, 2).unwrap();
    let child = LinearPackingSpec::of(Hex, (6, 3), (12, 0));
    let reps = coset_representatives(&x2, &child).unwrap();
    assert_eq!(reps.len() as i64, child.index() as i64 / x2.index() as i64);
    let outside = LinearPackingSpec::of(Hex, (1, 0), (0, 1));
    assert!(coset_representatives(&x2, &outside).is_err());
}

proptest! {
    #[test]
    fn scaled_schemes_keep_the_density_identity(idx in 0usize..1000, k in 1u64..5) {
        let entries = scheme_catalog();
        let entry = &entries[idx % entries.len()];
        let k = if entry.params == Params::Fixed { 1 } else { k };
        let s = entry.instantiate(k, 1).unwrap();
        let total: Rational = s.children().iter().fold(Rational::zero(), |acc, (c, _)| acc + c.density());
        prop_assert_eq!(total, s.parent.density());
    }

    #[test]
    fn membership_matches_enumeration(a in -30i64..30, b in -30i64..30, i in 1u64..4) {
        let x = base_packing(Square, i).unwrap().translated(Vertex::new(a, b));
        let w = Window::centered(12);
        let listed = x.enumerate(&w);
        for u in w.vertices() {
            prop_assert_eq!(x.contains(u), listed.contains(&u));
        }
    }
}
