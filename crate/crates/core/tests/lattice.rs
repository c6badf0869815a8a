use std::collections::{HashMap, HashSet, VecDeque};

use lattice_packing::lattice::{
    ball, ball_offsets, ball_size_formula, neighbors, sphere, sphere_size_formula, vertex_type,
    Window,
};
use lattice_packing::{distance, LatticeKind, Vertex};
use proptest::prelude::*;

use LatticeKind::{Hex, Square, Tri};

fn v(a: i64, b: i64) -> Vertex {
    Vertex::new(a, b)
}

fn bfs_from(kind: LatticeKind, source: Vertex, reach: i64) -> HashMap<Vertex, u64> {
    let mut dist = HashMap::from([(source, 0)]);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        for w in neighbors(kind, u) {
            if (w - source).max_abs() <= reach && !dist.contains_key(&w) {
                dist.insert(w, d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

#[test]
fn vertex_types() {
    assert_eq!(vertex_type(v(0, 0)), 1);
    assert_eq!(vertex_type(v(0, 1)), 0);
    assert_eq!(vertex_type(v(2, 1)), 0);
    assert_eq!(vertex_type(v(-3, 0)), 0);
}

#[test]
fn distance_examples() {
    assert_eq!(distance(Hex, v(0, 0), v(2, 1)), 3);
    assert_eq!(distance(Square, v(0, 0), v(3, 4)), 7);
    assert_eq!(distance(Tri, v(0, 0), v(2, -3)), 3);
    // (0,0) has its vertical edge downward, so going up costs one extra step
    assert_eq!(distance(Hex, v(0, 0), v(0, 3)), 7);
    assert_eq!(bfs_from(Hex, v(0, 0), 10)[&v(0, 3)], 7);
}

#[test]
fn neighbor_sets() {
    let set = |kind, u| neighbors(kind, u).into_iter().collect::<HashSet<_>>();
    assert_eq!(
        set(Hex, v(0, 0)),
        HashSet::from([v(1, 0), v(-1, 0), v(0, -1)])
    );
    assert_eq!(
        set(Hex, v(1, 0)),
        HashSet::from([v(2, 0), v(0, 0), v(1, 1)])
    );
    assert_eq!(
        set(Square, v(0, 0)),
        HashSet::from([v(1, 0), v(-1, 0), v(0, 1), v(0, -1)])
    );
    assert_eq!(
        set(Tri, v(0, 0)),
        HashSet::from([v(1, 0), v(0, 1), v(-1, 0), v(0, -1), v(-1, 1), v(1, -1)])
    );
    for kind in LatticeKind::ALL {
        for u in Window::centered(3).vertices() {
            assert_eq!(neighbors(kind, u).len(), kind.degree());
            for w in neighbors(kind, u) {
                assert!(
                    neighbors(kind, w).contains(&u),
                    "{kind} adjacency not symmetric at {u}-{w}"
                );
                assert_eq!(distance(kind, u, w), 1);
            }
        }
    }
}

#[test]
fn bfs_oracle_on_41_window() {
    for kind in LatticeKind::ALL {
        for source in [v(0, 0), v(1, 0), v(-3, 7)] {
            let dist = bfs_from(kind, source, 90);
            for w in Window::centered(20).vertices() {
                let w = w + source;
                assert_eq!(
                    dist[&w],
                    distance(kind, source, w),
                    "{kind} {source} -> {w}"
                );
            }
        }
    }
}

#[test]
fn ball_examples() {
    assert_eq!(ball(Hex, v(0, 0), 1).len(), 4);
    assert_eq!(ball(Square, v(5, -2), 0), vec![v(5, -2)]);
    assert_eq!(ball(Tri, v(0, 0), 2).len(), 19);
    assert_eq!(ball_size_formula(Hex, 2).unwrap(), 10);
    assert_eq!(ball_size_formula(Square, 3).unwrap(), 25);
    assert_eq!(ball_size_formula(Tri, 1).unwrap(), 7);
    assert!(ball_size_formula(Tri, -1).is_err());
    assert!(sphere_size_formula(Hex, -2).is_err());
}

#[test]
fn ball_and_sphere_sizes_match_closed_forms() {
    for kind in LatticeKind::ALL {
        for center in [v(0, 0), v(1, 0)] {
            for n in 0..=30u64 {
                assert_eq!(
                    ball(kind, center, n).len() as u64,
                    ball_size_formula(kind, n as i64).unwrap()
                );
                assert_eq!(
                    sphere(kind, center, n).len() as u64,
                    sphere_size_formula(kind, n as i64).unwrap()
                );
            }
        }
    }
}

#[test]
fn balls_nest_and_spheres_are_disjoint() {
    for kind in LatticeKind::ALL {
        let mut seen = HashSet::new();
        for n in 0..12u64 {
            let inner: HashSet<Vertex> = ball(kind, v(0, 0), n).into_iter().collect();
            let outer: HashSet<Vertex> = ball(kind, v(0, 0), n + 1).into_iter().collect();
            assert!(inner.is_subset(&outer));
            for w in sphere(kind, v(0, 0), n) {
                assert!(seen.insert(w), "{kind}: {w} on two spheres");
            }
            assert_eq!(seen, inner);
        }
    }
}

#[test]
fn ball_offsets_depend_on_hex_type() {
    let even = ball_offsets(Hex, 0, 1);
    let odd = ball_offsets(Hex, 1, 1);
    assert!(even.contains(&v(0, 1)) && !even.contains(&v(0, -1)));
    assert!(odd.contains(&v(0, -1)) && !odd.contains(&v(0, 1)));
    assert_eq!(ball_offsets(Square, 0, 2), ball_offsets(Square, 1, 2));
}

#[test]
fn window_validation() {
    assert!(Window::new(0, -1, 0, 0).is_err());
    let w = Window::new(0, 3, 0, 0).unwrap();
    assert_eq!(w.vertices().count(), 4);
    assert_eq!(Window::centered(20).vertices().count(), 41 * 41);
}

#[test]
fn vertex_and_kind_parsing() {
    assert_eq!("3,-2".parse::<Vertex>().unwrap(), v(3, -2));
    assert_eq!("(3, -2)".parse::<Vertex>().unwrap(), v(3, -2));
    assert!("3".parse::<Vertex>().is_err());
    assert_eq!("tri".parse::<LatticeKind>().unwrap(), Tri);
    assert!("octagonal".parse::<LatticeKind>().is_err());
}

fn kind() -> impl Strategy<Value = LatticeKind> {
    prop_oneof![Just(Hex), Just(Square), Just(Tri)]
}

fn vertex() -> impl Strategy<Value = Vertex> {
    (-60i64..60, -60i64..60).prop_map(|(a, b)| Vertex::new(a, b))
}

proptest! {
    #[test]
    fn distance_is_symmetric(k in kind(), u in vertex(), w in vertex()) {
        prop_assert_eq!(distance(k, u, w), distance(k, w, u));
        prop_assert_eq!(distance(k, u, u), 0);
    }

    #[test]
    fn distance_is_translation_invariant(k in kind(), u in vertex(), w in vertex(), t in vertex()) {
        let t = if k == Hex && (t.a + t.b) % 2 != 0 { t + Vertex::new(1, 0) } else { t };
        prop_assert_eq!(distance(k, u + t, w + t), distance(k, u, w));
    }

    #[test]
    fn triangle_inequality(k in kind(), u in vertex(), w in vertex(), x in vertex()) {
        prop_assert!(distance(k, u, x) <= distance(k, u, w) + distance(k, w, x));
    }

    #[test]
    fn distance_bounds(k in kind(), u in vertex(), w in vertex()) {
        let d = (w - u).max_abs() as u64;
        let l1 = (w - u).l1() as u64;
        let got = distance(k, u, w);
        prop_assert!(got >= d);
        match k {
            Square => prop_assert_eq!(got, l1),
            Tri => prop_assert!(got <= l1),
            Hex => prop_assert!(got >= l1),
        }
    }

    #[test]
    fn neighbors_step_distance_by_one(k in kind(), u in vertex(), w in vertex()) {
        let d = distance(k, u, w);
        for x in neighbors(k, u) {
            let dx = distance(k, x, w);
            prop_assert!(dx + 1 >= d && dx <= d + 1);
        }
        if d > 0 {
            prop_assert!(neighbors(k, u).into_iter().any(|x| distance(k, x, w) + 1 == d));
        }
    }
}
