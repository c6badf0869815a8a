//! The shipped (d,n) coloring plans.

use std::sync::OnceLock;

use super::plan::{ColoringPlan, PlanNode, SplitNode};
use super::ColoringError;
use crate::density::SequenceSpec;
use crate::lattice::LatticeKind::{self, Hex, Square, Tri};

fn l(v: u64) -> PlanNode {
    PlanNode::Leaf(v)
}

fn leaves(vals: &[u64]) -> Vec<PlanNode> {
    vals.iter().map(|&v| l(v)).collect()
}

fn s(scheme: &str, k: u64, children: Vec<PlanNode>) -> PlanNode {
    sm(scheme, k, 1, children)
}

fn sm(scheme: &str, k: u64, m: u64, children: Vec<PlanNode>) -> PlanNode {
    PlanNode::Split(SplitNode {
        scheme: scheme.to_string(),
        k,
        m,
        children,
    })
}

/// A split whose children are all leaves.
fn r(scheme: &str, k: u64, vals: &[u64]) -> PlanNode {
    s(scheme, k, leaves(vals))
}

fn rep(n: usize, v: u64) -> Vec<u64> {
    vec![v; n]
}

fn cat(parts: &[&[u64]]) -> Vec<u64> {
    parts.concat()
}

fn plan(
    kind: LatticeKind,
    d: u64,
    n: u64,
    claimed: usize,
    children: Vec<PlanNode>,
) -> ColoringPlan {
    ColoringPlan {
        name: format!("({d},{n})-{}", kind.name()),
        kind,
        spec: SequenceSpec::dn(d, n),
        claimed_colors: claimed,
        root: s(&format!("{}.full.x{d}", kind.name()), 1, children),
    }
}

/// Every copy of the base packing gets its own color of value d.
fn trivial(kind: LatticeKind, d: u64, n: u64) -> ColoringPlan {
    plan(kind, d, n, n as usize, leaves(&rep(n as usize, d)))
}

fn hex_plans() -> Vec<ColoringPlan> {
    let x3_group = s(
        "hex.x3.p10k.group",
        1,
        vec![
            r("hex.x3.p10k.group.split", 1, &[8, 8, 9, 9]),
            r(
                "hex.x3.p10k.group.joint",
                1,
                &[12, 12, 13, 13, 14, 14, 15, 15],
            ),
        ],
    );
    let x3_mixed = s(
        "hex.x3.p6k",
        1,
        vec![
            l(5),
            r("hex.x3.p6k.thirds", 1, &[10, 10, 11]),
            r(
                "hex.x3.p6k.mixed",
                1,
                &[11, 16, 16, 17, 17, 18, 18, 19, 19, 20],
            ),
        ],
    );
    let mut p5k4 = leaves(&cat(&[&rep(3, 15), &rep(3, 16), &rep(3, 17), &rep(2, 18)]));
    for pair in [[20, 20], [20, 21], [21, 21], [22, 22], [22, 23]] {
        p5k4.push(r("hex.x4.p5k.halves", 4, &pair));
    }
    let mut p6k2 = leaves(&[10, 10, 10, 11, 11, 11]);
    p6k2.push(r("hex.x4.p6k.halves", 2, &[18, 19]));
    p6k2.push(r("hex.x4.p6k.halves", 2, &[19, 19]));

    vec![
        plan(Hex, 1, 2, 2, leaves(&[1, 1])),
        plan(
            Hex,
            2,
            2,
            8,
            vec![
                l(2),
                l(2),
                r("hex.x2.p4k", 1, &[3, 3]),
                r("hex.x2.p3k", 2, &[4, 4, 5, 5]),
            ],
        ),
        plan(
            Hex,
            2,
            3,
            5,
            vec![l(2), l(2), l(2), r("hex.x2.p4k", 1, &[3, 3])],
        ),
        trivial(Hex, 2, 4),
        plan(
            Hex,
            3,
            2,
            35,
            vec![
                l(3),
                l(3),
                r("hex.x3.p6k", 1, &[4, 4, 5]),
                r("hex.x3.p4k", 2, &[6, 6, 7, 7]),
                x3_group,
                x3_mixed,
            ],
        ),
        plan(
            Hex,
            3,
            3,
            13,
            vec![
                l(3),
                l(3),
                l(3),
                r("hex.x3.p6k", 1, &[4, 4, 4]),
                r("hex.x3.p6k", 1, &[5, 5, 5]),
                r("hex.x3.p4k", 2, &[6, 6, 6, 7]),
            ],
        ),
        plan(
            Hex,
            3,
            4,
            10,
            cat_nodes(
                leaves(&rep(4, 3)),
                vec![
                    r("hex.x3.p6k", 1, &[4, 4, 4]),
                    r("hex.x3.p6k", 1, &[4, 5, 5]),
                ],
            ),
        ),
        plan(
            Hex,
            3,
            5,
            8,
            cat_nodes(leaves(&rep(5, 3)), vec![r("hex.x3.p6k", 1, &[4, 4, 4])]),
        ),
        trivial(Hex, 3, 6),
        plan(
            Hex,
            4,
            3,
            58,
            cat_nodes(
                leaves(&rep(3, 4)),
                vec![
                    r("hex.x4.p6k", 1, &[5, 5]),
                    r("hex.x4.p8k", 1, &[6, 6, 6]),
                    r("hex.x4.p8k", 1, &[7, 7, 7]),
                    s(
                        "hex.x4.p6k",
                        1,
                        vec![l(5), r("hex.x4.p6k.halves", 1, &[8, 8])],
                    ),
                    r("hex.x4.p5k", 2, &[8, 9, 9, 9]),
                    s("hex.x4.p6k", 2, p6k2),
                    r(
                        "hex.x4.p5k",
                        3,
                        &cat(&[&rep(3, 12), &rep(3, 13), &rep(3, 14)]),
                    ),
                    s("hex.x4.p5k", 4, p5k4),
                ],
            ),
        ),
        plan(
            Hex,
            4,
            4,
            27,
            cat_nodes(
                leaves(&rep(4, 4)),
                vec![
                    r("hex.x4.p6k", 1, &[5, 5]),
                    r("hex.x4.p6k", 1, &[5, 5]),
                    r("hex.x4.p8k", 1, &[6, 6, 6]),
                    r("hex.x4.p8k", 1, &[6, 7, 7]),
                    r("hex.x4.p5k", 2, &rep(4, 8)),
                    r("hex.x4.p5k", 2, &rep(4, 9)),
                    s(
                        "hex.x4.p8k",
                        1,
                        vec![l(7), l(7), r("hex.x4.p8k.thirds", 1, &[10, 10, 10])],
                    ),
                ],
            ),
        ),
        plan(
            Hex,
            4,
            5,
            21,
            cat_nodes(
                leaves(&rep(5, 4)),
                vec![
                    r("hex.x4.p6k", 1, &[5, 5]),
                    r("hex.x4.p6k", 1, &[5, 5]),
                    r("hex.x4.p8k", 1, &[6, 6, 6]),
                    r("hex.x4.p8k", 1, &[6, 6, 7]),
                    r("hex.x4.p8k", 1, &[7, 7, 7]),
                    s(
                        "hex.x4.p6k",
                        1,
                        vec![l(5), r("hex.x4.p6k.halves", 1, &[7, 8])],
                    ),
                ],
            ),
        ),
        plan(
            Hex,
            4,
            6,
            18,
            cat_nodes(
                leaves(&rep(6, 4)),
                vec![
                    r("hex.x4.p6k", 1, &[5, 5]),
                    r("hex.x4.p6k", 1, &[5, 5]),
                    r("hex.x4.p6k", 1, &[5, 5]),
                    r("hex.x4.p8k", 1, &[6, 6, 6]),
                    r("hex.x4.p8k", 1, &[6, 6, 6]),
                ],
            ),
        ),
        trivial(Hex, 4, 11),
    ]
}

fn square_plans() -> Vec<ColoringPlan> {
    let mut p3k3 = leaves(&[6, 6, 7, 7, 8, 8]);
    for v in [9, 10, 11] {
        p3k3.push(r("square.x2.p3k.halves", 3, &[v, v]));
    }
    let mut p5k3 = leaves(&[14, 14, 14]);
    for v in [15, 15, 16, 16, 17, 17] {
        p5k3.push(r("square.x4.p5k.halves", 3, &[v, v]));
    }
    vec![
        plan(Square, 1, 2, 2, leaves(&[1, 1])),
        plan(
            Square,
            2,
            2,
            20,
            vec![
                l(2),
                l(2),
                r("square.x2.p4k", 1, &[3, 3]),
                r("square.x2.p3k", 2, &[4, 4, 5, 5]),
                s("square.x2.p3k", 3, p3k3),
            ],
        ),
        plan(
            Square,
            2,
            3,
            8,
            vec![
                l(2),
                l(2),
                l(2),
                r("square.x2.p4k", 1, &[3, 3]),
                s(
                    "square.x2.p4k",
                    1,
                    vec![l(3), r("square.x2.p4k.halves", 1, &[4, 4])],
                ),
            ],
        ),
        plan(
            Square,
            2,
            4,
            6,
            cat_nodes(leaves(&rep(4, 2)), vec![r("square.x2.p4k", 1, &[3, 3])]),
        ),
        trivial(Square, 2, 5),
        plan(
            Square,
            3,
            4,
            20,
            cat_nodes(
                leaves(&rep(4, 3)),
                (4..=7).map(|v| r("square.x3.p4k", 2, &rep(4, v))).collect(),
            ),
        ),
        plan(
            Square,
            3,
            5,
            17,
            cat_nodes(
                leaves(&rep(5, 3)),
                vec![
                    r("square.x3.p4k", 2, &[4, 4, 4, 4]),
                    r("square.x3.p4k", 2, &[4, 5, 5, 5]),
                    r("square.x3.p4k", 2, &[5, 5, 6, 6]),
                ],
            ),
        ),
        plan(
            Square,
            3,
            6,
            14,
            cat_nodes(
                leaves(&rep(6, 3)),
                vec![
                    r("square.x3.p4k", 2, &[4, 4, 4, 4]),
                    r("square.x3.p4k", 2, &[4, 4, 5, 5]),
                ],
            ),
        ),
        trivial(Square, 3, 8),
        plan(
            Square,
            4,
            4,
            56,
            cat_nodes(
                leaves(&rep(4, 4)),
                vec![
                    r("square.x4.p6k", 1, &[5, 5]),
                    r("square.x4.p6k", 1, &[5, 5]),
                    r("square.x4.p5k", 2, &rep(4, 6)),
                    r("square.x4.p5k", 2, &rep(4, 7)),
                    r("square.x4.p5k", 2, &rep(4, 8)),
                    r("square.x4.p5k", 2, &rep(4, 9)),
                    r("square.x4.p6k", 2, &cat(&[&rep(4, 10), &rep(4, 11)])),
                    r("square.x4.p5k", 3, &cat(&[&rep(4, 12), &rep(4, 13), &[14]])),
                    s("square.x4.p5k", 3, p5k3),
                ],
            ),
        ),
        plan(
            Square,
            4,
            5,
            34,
            cat_nodes(
                leaves(&rep(5, 4)),
                vec![
                    r("square.x4.p6k", 1, &[5, 5]),
                    r("square.x4.p6k", 1, &[5, 5]),
                    r("square.x4.p5k", 2, &[6, 6, 6, 6]),
                    r("square.x4.p5k", 2, &[6, 7, 7, 7]),
                    r("square.x4.p5k", 2, &[7, 7, 8, 8]),
                    r("square.x4.p5k", 2, &[8, 8, 8, 9]),
                    s(
                        "square.x4.p6k",
                        1,
                        vec![l(5), r("square.x4.p6k.halves", 1, &[9, 9])],
                    ),
                    s(
                        "square.x4.p6k",
                        1,
                        vec![
                            r("square.x4.p6k.halves", 1, &[9, 9]),
                            sm("square.x4.p6k.scale", 1, 2, leaves(&rep(4, 10))),
                        ],
                    ),
                ],
            ),
        ),
        plan(
            Square,
            4,
            6,
            28,
            cat_nodes(
                leaves(&rep(6, 4)),
                vec![
                    r("square.x4.p6k", 1, &[5, 5]),
                    r("square.x4.p6k", 1, &[5, 5]),
                    r("square.x4.p6k", 1, &[5, 5]),
                    r("square.x4.p5k", 2, &[6, 6, 6, 6]),
                    r("square.x4.p5k", 2, &[6, 6, 7, 7]),
                    r("square.x4.p5k", 2, &[7, 7, 7, 7]),
                    r("square.x4.p5k", 2, &[8, 8, 8, 8]),
                ],
            ),
        ),
        trivial(Square, 4, 13),
    ]
}

fn tri_plans() -> Vec<ColoringPlan> {
    let mut p4k3 = leaves(&rep(4, 8));
    for v in 16..=20 {
        p4k3.push(sm("tri.x3.p4k.scale", 3, 2, leaves(&rep(4, v))));
    }
    vec![
        plan(
            Tri,
            1,
            2,
            6,
            vec![l(1), l(1), r("tri.x1.p2k", 2, &[2, 2, 3, 3])],
        ),
        trivial(Tri, 1, 3),
        plan(
            Tri,
            2,
            4,
            16,
            cat_nodes(
                leaves(&rep(4, 2)),
                (3..=5).map(|v| r("tri.x2.p3k", 2, &rep(4, v))).collect(),
            ),
        ),
        plan(
            Tri,
            2,
            5,
            13,
            cat_nodes(
                leaves(&rep(5, 2)),
                vec![
                    r("tri.x2.p3k", 2, &[3, 3, 3, 3]),
                    r("tri.x2.p3k", 2, &[3, 4, 4, 4]),
                ],
            ),
        ),
        plan(
            Tri,
            2,
            6,
            10,
            cat_nodes(leaves(&rep(6, 2)), vec![r("tri.x2.p3k", 2, &[3, 3, 3, 3])]),
        ),
        trivial(Tri, 2, 7),
        plan(
            Tri,
            3,
            4,
            72,
            cat_nodes(
                leaves(&rep(4, 3)),
                vec![
                    r("tri.x3.p6k", 1, &[4, 4, 4]),
                    r("tri.x3.p6k", 1, &[4, 5, 5]),
                    r("tri.x3.p4k", 2, &rep(4, 6)),
                    r("tri.x3.p4k", 2, &rep(4, 7)),
                    s(
                        "tri.x3.p6k",
                        1,
                        vec![
                            l(5),
                            r("tri.x3.p6k.thirds", 1, &[9, 9, 9]),
                            r("tri.x3.p6k.thirds", 1, &[9, 10, 10]),
                        ],
                    ),
                    s(
                        "tri.x3.p6k",
                        1,
                        vec![
                            l(5),
                            r("tri.x3.p6k.thirds", 1, &[10, 10, 11]),
                            r("tri.x3.p6k.thirds", 1, &[11, 11, 11]),
                        ],
                    ),
                    r(
                        "tri.x3.p4k",
                        4,
                        &cat(&[&rep(4, 12), &rep(4, 13), &rep(4, 14), &rep(4, 15)]),
                    ),
                    s("tri.x3.p4k", 3, p4k3),
                ],
            ),
        ),
        plan(
            Tri,
            3,
            5,
            38,
            cat_nodes(
                leaves(&rep(5, 3)),
                vec![
                    r("tri.x3.p6k", 1, &[4, 4, 4]),
                    r("tri.x3.p6k", 1, &[4, 4, 5]),
                    r("tri.x3.p6k", 1, &[5, 5, 5]),
                    r("tri.x3.p4k", 2, &[6, 6, 6, 6]),
                    r("tri.x3.p4k", 2, &[6, 7, 7, 7]),
                    s(
                        "tri.x3.p6k",
                        1,
                        vec![
                            l(5),
                            r("tri.x3.p6k.thirds", 1, &[7, 7, 8]),
                            r("tri.x3.p6k.thirds", 1, &[8, 8, 8]),
                        ],
                    ),
                    r("tri.x3.p4k", 3, &[8, 9, 9, 9, 9, 9, 10, 10, 10]),
                ],
            ),
        ),
        plan(
            Tri,
            3,
            6,
            26,
            cat_nodes(
                leaves(&rep(6, 3)),
                vec![
                    r("tri.x3.p6k", 1, &[4, 4, 4]),
                    r("tri.x3.p6k", 1, &[4, 4, 4]),
                    r("tri.x3.p6k", 1, &[5, 5, 5]),
                    r("tri.x3.p6k", 1, &[5, 5, 5]),
                    r("tri.x3.p4k", 2, &[6, 6, 6, 6]),
                    r("tri.x3.p4k", 2, &[6, 6, 7, 7]),
                ],
            ),
        ),
        trivial(Tri, 3, 12),
    ]
}

fn cat_nodes(mut a: Vec<PlanNode>, b: Vec<PlanNode>) -> Vec<PlanNode> {
    a.extend(b);
    a
}

/// All shipped plans, hexagonal first, then square, then triangular.
pub fn plan_catalog() -> &'static [ColoringPlan] {
    static CATALOG: OnceLock<Vec<ColoringPlan>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut all = hex_plans();
        all.extend(square_plans());
        all.extend(tri_plans());
        all
    })
}

/// Looks a plan up by name, e.g. `(3,3)-hex`; the lattice part accepts any
/// spelling `LatticeKind` parses. Trivial plans also answer for larger n.
pub fn find_plan(name: &str) -> Result<&'static ColoringPlan, ColoringError> {
    let unknown = || ColoringError::UnknownPlan(name.to_string());
    let (pair, kind) = name.trim().rsplit_once('-').ok_or_else(unknown)?;
    let kind: LatticeKind = kind.parse().map_err(|_| unknown())?;
    let inner = pair
        .trim()
        .strip_prefix('(')
        .and_then(|p| p.strip_suffix(')'))
        .ok_or_else(unknown)?;
    let (d, n) = inner.split_once(',').ok_or_else(unknown)?;
    let d: u64 = d.trim().parse().map_err(|_| unknown())?;
    let n: u64 = n.trim().parse().map_err(|_| unknown())?;
    let spec = SequenceSpec::dn(d, n);
    let catalog = plan_catalog();
    if let Some(p) = catalog.iter().find(|p| p.kind == kind && p.spec == spec) {
        return Ok(p);
    }
    // a trivial plan for (d, n0) with n0 <= n also colors (d, n)
    catalog
        .iter()
        .filter(|p| p.kind == kind)
        .find(|p| matches!(p.spec, SequenceSpec::Dn { d: pd, n: pn } if pd == d && pn < n && p.claimed_colors as u64 == pn))
        .ok_or_else(unknown)
}
