//! The subdivision schemes of the three lattices.
//!
//! Ids read `<lattice>.<parent>.<row>[.<refinement>]`. A row `pNk` splits the
//! base packing into copies of an (Nk-1)-packing; `.scale` splits such a copy
//! into m^2 copies of the same row at parameter mk; `.halves`, `.thirds` and
//! friends split one row child into finer packings.

use std::sync::OnceLock;

use crate::lattice::{LatticeKind, Vertex};

use super::{index_sublattices, ChildFamily, LinearPackingSpec, PackingError, SubdivisionScheme};

use LatticeKind::{Hex, Square, Tri};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Params {
    /// No parameter.
    Fixed,
    /// Parameter k >= 1.
    K,
    /// Parameters k, m >= 1.
    KM,
}

type Builder = Box<dyn Fn(i64, i64) -> Result<SubdivisionScheme, PackingError> + Send + Sync>;

pub struct CatalogEntry {
    pub id: String,
    pub kind: LatticeKind,
    pub params: Params,
    pub description: String,
    /// Auxiliary groupings used by colorings but not stated as a point of
    /// their own.
    pub auxiliary: bool,
    build: Builder,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("params", &self.params)
            .finish()
    }
}

impl CatalogEntry {
    pub fn instantiate(&self, k: u64, m: u64) -> Result<SubdivisionScheme, PackingError> {
        let bad = |what: String| PackingError::BadParams {
            id: self.id.clone(),
            what,
        };
        if k == 0 || m == 0 {
            return Err(bad("zero parameters".into()));
        }
        match self.params {
            Params::Fixed if k != 1 || m != 1 => return Err(bad(format!("k={k}, m={m}"))),
            Params::K if m != 1 => return Err(bad(format!("m={m}"))),
            _ => {}
        }
        let mut s = (self.build)(k as i64, m as i64)?;
        s.name = match self.params {
            Params::Fixed => self.id.clone(),
            Params::K => format!("{}[k={k}]", self.id),
            Params::KM => format!("{}[k={k},m={m}]", self.id),
        };
        Ok(s)
    }

    /// Parameter pairs covered by the default suite (k, m in 1..=cap).
    pub fn default_params(&self, cap: u64) -> Vec<(u64, u64)> {
        match self.params {
            Params::Fixed => vec![(1, 1)],
            Params::K => (1..=cap).map(|k| (k, 1)).collect(),
            Params::KM => (1..=cap)
                .flat_map(|k| (1..=cap).map(move |m| (k, m)))
                .collect(),
        }
    }
}

type Gen = [(i64, i64); 2];

fn spec(kind: LatticeKind, g: Gen, k: i64) -> LinearPackingSpec {
    LinearPackingSpec::of(kind, (k * g[0].0, k * g[0].1), (k * g[1].0, k * g[1].1))
}

fn v(a: i64, b: i64) -> Vertex {
    Vertex::new(a, b)
}

/// Base packings: the i-packings every coloring starts from.
pub fn base_packing(kind: LatticeKind, i: u64) -> Option<LinearPackingSpec> {
    let g: Gen = match (kind, i) {
        (Hex, 1) | (Square, 1) => [(1, 1), (2, 0)],
        (Hex, 2) => [(2, 1), (4, 0)],
        (Hex, 3) => [(3, 1), (6, 0)],
        (Hex, 4) => [(3, 2), (7, 1)],
        (Square, 2) => [(2, 1), (1, 3)],
        (Square, 3) => [(2, 2), (4, 0)],
        (Square, 4) => [(3, 2), (8, 1)],
        (Tri, 1) => [(1, 1), (3, 0)],
        (Tri, 2) => [(2, 1), (-1, 3)],
        (Tri, 3) => [(2, 2), (6, 0)],
        _ => return None,
    };
    Some(spec(kind, g, 1))
}

/// One row of a table: the base packing `X_base` splits into copies of
/// `k * child` translated by `family(k)`, each an `(n k - 1)`-packing.
struct Row {
    kind: LatticeKind,
    base: u64,
    n: i64,
    child: Gen,
    family: fn(i64) -> Vec<Vertex>,
}

impl Row {
    fn tag(&self) -> String {
        format!("{}.x{}.p{}k", self.kind.name(), self.base, self.n)
    }

    fn child(&self, k: i64) -> LinearPackingSpec {
        spec(self.kind, self.child, k)
    }

    fn scheme(&self, k: i64) -> SubdivisionScheme {
        let parent = base_packing(self.kind, self.base).expect("base packing");
        SubdivisionScheme::single(
            self.tag(),
            parent,
            self.child(k),
            (self.n * k - 1) as u64,
            (self.family)(k),
        )
    }

    fn scale(&self, k: i64, m: i64) -> SubdivisionScheme {
        let g1 = Vertex::new(self.child[0].0, self.child[0].1);
        let g2 = Vertex::new(self.child[1].0, self.child[1].1);
        let mut ts = Vec::new();
        for i in 0..m {
            for j in 0..m {
                ts.push(k * (i * g1 + j * g2));
            }
        }
        SubdivisionScheme::single(
            format!("{}.scale", self.tag()),
            self.child(k),
            self.child(m * k),
            (self.n * m * k - 1) as u64,
            ts,
        )
    }
}

fn grid(k: i64, extra: &[i64], f: impl Fn(i64, i64, &[i64]) -> Vertex) -> Vec<Vertex> {
    let mut out = Vec::new();
    let mut idx = vec![0i64; extra.len()];
    loop {
        for i in 0..k {
            for j in 0..k {
                out.push(f(i, j, &idx));
            }
        }
        // odometer over the extra indices
        let mut p = 0;
        loop {
            if p == idx.len() {
                return out;
            }
            idx[p] += 1;
            if idx[p] < extra[p] {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn rows() -> Vec<Row> {
    vec![
        // hexagonal, X_2
        Row {
            kind: Hex,
            base: 2,
            n: 3,
            child: [(2, 1), (4, 0)],
            family: |k| grid(k, &[], |i, j, _| v(2 * i + 4 * j, i)),
        },
        Row {
            kind: Hex,
            base: 2,
            n: 4,
            child: [(4, 0), (0, 2)],
            family: |k| grid(k, &[2], |i, j, e| v(4 * i + 2 * e[0], 2 * j + e[0])),
        },
        // hexagonal, X_3
        Row {
            kind: Hex,
            base: 3,
            n: 4,
            child: [(3, 1), (6, 0)],
            family: |k| grid(k, &[], |i, j, _| v(3 * i + 6 * j, i)),
        },
        Row {
            kind: Hex,
            base: 3,
            n: 6,
            child: [(3, 3), (6, 0)],
            family: |k| grid(k, &[3], |i, j, e| v(3 * i + 6 * j, 3 * i + 2 * e[0])),
        },
        Row {
            kind: Hex,
            base: 3,
            n: 10,
            child: [(6, 4), (12, 0)],
            family: |k| {
                grid(k, &[4, 2], |i, j, e| {
                    v(6 * i + 12 * j + 3 * e[1], 4 * i + 2 * e[0] + e[1])
                })
            },
        },
        Row {
            kind: Hex,
            base: 3,
            n: 18,
            child: [(12, 6), (24, 0)],
            family: |k| {
                grid(k, &[6, 4], |i, j, e| {
                    v(12 * i + 24 * j + 3 * e[1], 6 * i + 2 * e[0] + e[1])
                })
            },
        },
        // hexagonal, X_4
        Row {
            kind: Hex,
            base: 4,
            n: 5,
            child: [(3, 2), (-1, 3)],
            family: |k| grid(k, &[], |i, j, _| v(3 * i - j, 2 * i + 3 * j)),
        },
        Row {
            kind: Hex,
            base: 4,
            n: 6,
            child: [(7, 1), (-1, 3)],
            family: |k| {
                grid(k, &[2], |i, j, e| {
                    v(7 * i + 3 * e[0] - j, i + 2 * e[0] + 3 * j)
                })
            },
        },
        Row {
            kind: Hex,
            base: 4,
            n: 8,
            child: [(7, 1), (2, 5)],
            family: |k| {
                grid(k, &[3], |i, j, e| {
                    v(7 * i + 2 * j + 3 * e[0], i + 5 * j + 2 * e[0])
                })
            },
        },
        Row {
            kind: Hex,
            base: 4,
            n: 11,
            child: [(-2, 6), (11, 0)],
            family: |k| {
                grid(k, &[6], |i, j, e| {
                    v(-2 * i + 11 * j + 7 * e[0], 6 * i + e[0])
                })
            },
        },
        // square, X_2
        Row {
            kind: Square,
            base: 2,
            n: 3,
            child: [(2, 1), (-1, 2)],
            family: |k| grid(k, &[], |i, j, _| v(2 * i - j, i + 2 * j)),
        },
        Row {
            kind: Square,
            base: 2,
            n: 4,
            child: [(4, 2), (1, 3)],
            family: |k| {
                grid(k, &[2], |i, j, e| {
                    v(4 * i + 2 * e[0] + j, 2 * i + e[0] + 3 * j)
                })
            },
        },
        // square, X_3
        Row {
            kind: Square,
            base: 3,
            n: 4,
            child: [(2, 2), (4, 0)],
            family: |k| grid(k, &[], |i, j, _| v(2 * i + 4 * j, 2 * i)),
        },
        // square, X_4
        Row {
            kind: Square,
            base: 4,
            n: 5,
            child: [(3, 2), (-2, 3)],
            family: |k| grid(k, &[], |i, j, _| v(3 * i - 2 * j, 2 * i + 3 * j)),
        },
        Row {
            kind: Square,
            base: 4,
            n: 6,
            child: [(6, 4), (1, 5)],
            family: |k| {
                grid(k, &[2], |i, j, e| {
                    v(6 * i + j + 3 * e[0], 4 * i + 5 * j + 2 * e[0])
                })
            },
        },
        // triangular, X_1
        Row {
            kind: Tri,
            base: 1,
            n: 2,
            child: [(1, 1), (3, 0)],
            family: |k| grid(k, &[], |i, j, _| v(i + 3 * j, i)),
        },
        Row {
            kind: Tri,
            base: 1,
            n: 3,
            child: [(3, 3), (3, 0)],
            family: |k| grid(k, &[3], |i, j, e| v(3 * i + 3 * j + e[0], 3 * i + e[0])),
        },
        // triangular, X_2
        Row {
            kind: Tri,
            base: 2,
            n: 3,
            child: [(2, 1), (7, 0)],
            family: |k| grid(k, &[], |i, j, _| v(2 * i + 7 * j, i)),
        },
        // triangular, X_3
        Row {
            kind: Tri,
            base: 3,
            n: 4,
            child: [(2, 2), (6, 0)],
            family: |k| grid(k, &[], |i, j, _| v(2 * i + 6 * j, 2 * i)),
        },
        Row {
            kind: Tri,
            base: 3,
            n: 6,
            child: [(6, 6), (6, 0)],
            family: |k| {
                grid(k, &[3], |i, j, e| {
                    v(6 * i + 6 * j + 2 * e[0], 6 * i + 2 * e[0])
                })
            },
        },
    ]
}

fn find_row(kind: LatticeKind, base: u64, n: i64) -> Row {
    rows()
        .into_iter()
        .find(|r| r.kind == kind && r.base == base && r.n == n)
        .expect("row exists")
}

/// A split of one row child (at parameter k) into copies of `k * child`,
/// each an `(n k - 1)`-packing; translations are coset representatives.
fn refinement(
    kind: LatticeKind,
    base: u64,
    row_n: i64,
    label: &str,
    n: i64,
    child: Gen,
) -> (String, String, Builder) {
    let row = find_row(kind, base, row_n);
    let id = format!("{}.{}", row.tag(), label);
    let desc = format!(
        "copies of an ({n}k-1)-packing partitioning one ({row_n}k-1)-packing of {}.x{base}.p{row_n}k",
        kind.name()
    );
    let build: Builder = Box::new(move |k, _| {
        let parent = spec(kind, row.child, k);
        SubdivisionScheme::by_cosets(
            String::new(),
            parent,
            spec(kind, child, k),
            (n * k - 1) as u64,
        )
    });
    (id, desc, build)
}

fn entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();

    // Whole-lattice partitions into base packings.
    for kind in LatticeKind::ALL {
        for i in 1..=4u64 {
            let Some(x) = base_packing(kind, i) else {
                continue;
            };
            out.push(CatalogEntry {
                id: format!("{}.full.x{i}", kind.name()),
                kind,
                params: Params::Fixed,
                description: format!("{} translates of X_{i} partition the lattice", x.index()),
                auxiliary: false,
                build: Box::new(move |_, _| {
                    SubdivisionScheme::by_cosets(
                        String::new(),
                        LinearPackingSpec::whole(kind),
                        x,
                        i,
                    )
                }),
            });
        }
    }

    for row in rows() {
        let count = (row.family)(1).len();
        let tag = row.tag();
        let (kind, base, n) = (row.kind, row.base, row.n);
        out.push(CatalogEntry {
            id: tag.clone(),
            kind,
            params: Params::K,
            description: format!("{count}k^2 ({n}k-1)-packings partition X_{base}"),
            auxiliary: false,
            build: Box::new(move |k, _| Ok(find_row(kind, base, n).scheme(k))),
        });
        out.push(CatalogEntry {
            id: format!("{tag}.scale"),
            kind,
            params: Params::KM,
            description: format!("m^2 ({n}mk-1)-packings partition one ({n}k-1)-packing of {tag}"),
            auxiliary: false,
            build: Box::new(move |k, m| Ok(find_row(kind, base, n).scale(k, m))),
        });
    }

    // Refinements of single row children.
    let refinements: Vec<(LatticeKind, u64, i64, &str, i64, Gen)> = vec![
        (Hex, 2, 4, "halves", 6, [(4, 2), (8, 0)]),
        (Hex, 3, 6, "thirds", 12, [(9, 3), (18, 0)]),
        (Hex, 4, 6, "halves", 10, [(6, 4), (-2, 6)]),
        (Hex, 4, 5, "halves", 6, [(6, 4), (-1, 3)]),
        (Hex, 4, 8, "thirds", 15, [(9, 6), (6, 15)]),
        (Hex, 4, 5, "thirds", 8, [(2, 5), (-3, 9)]),
        (Square, 2, 4, "halves", 6, [(4, 2), (2, 6)]),
        (Square, 2, 3, "halves", 4, [(1, 3), (-2, 4)]),
        (Square, 4, 6, "halves", 10, [(6, 4), (2, 10)]),
        (Square, 4, 5, "halves", 6, [(1, 5), (-4, 6)]),
        (Tri, 1, 2, "thirds", 3, [(3, 3), (3, 0)]),
        (Tri, 3, 6, "thirds", 12, [(6, 6), (18, 0)]),
    ];
    for (kind, base, row_n, label, n, child) in refinements {
        let (id, description, build) = refinement(kind, base, row_n, label, n, child);
        out.push(CatalogEntry {
            id,
            kind,
            params: Params::K,
            description,
            auxiliary: false,
            build,
        });
    }

    // Two (16k-1)-packings partitioning one (10k-1)-packing of X_3. Among the
    // three index-2 sublattices the one with the largest minimum distance is
    // taken; verification decides whether the claim holds.
    out.push(CatalogEntry {
        id: "hex.x3.p10k.halves".into(),
        kind: Hex,
        params: Params::K,
        description: "two (16k-1)-packings partition one (10k-1)-packing of hex.x3.p10k".into(),
        auxiliary: false,
        build: Box::new(|k, _| {
            let parent = spec(Hex, [(6, 4), (12, 0)], k);
            let child = index_sublattices(&parent, 2)
                .into_iter()
                .max_by_key(|c| {
                    (
                        c.min_pair_distance(0).min_distance,
                        std::cmp::Reverse(c.max_coord()),
                    )
                })
                .expect("index-2 sublattices exist");
            SubdivisionScheme::by_cosets(String::new(), parent, child, (16 * k - 1) as u64)
        }),
    });

    // The (10k-1)-packings of hex.x3.p10k come in groups of four whose union is
    // a coset of <(6k,2k),(6k,0)>; such a group splits into eight
    // (16k-1)-packings.
    let group: Gen = [(6, 2), (6, 0)];
    out.push(CatalogEntry {
        id: "hex.x3.p10k.group".into(),
        kind: Hex,
        params: Params::K,
        description:
            "X_3 splits into 2k^2 groups, each the union of four (10k-1)-packings of hex.x3.p10k"
                .into(),
        auxiliary: true,
        build: Box::new(move |k, _| {
            SubdivisionScheme::by_cosets(
                String::new(),
                base_packing(Hex, 3).expect("X_3"),
                spec(Hex, group, k),
                (4 * k - 1) as u64,
            )
        }),
    });
    out.push(CatalogEntry {
        id: "hex.x3.p10k.group.split".into(),
        kind: Hex,
        params: Params::K,
        description: "one group of hex.x3.p10k.group splits into its four (10k-1)-packings".into(),
        auxiliary: true,
        build: Box::new(move |k, _| {
            SubdivisionScheme::by_cosets(
                String::new(),
                spec(Hex, group, k),
                spec(Hex, [(6, 4), (12, 0)], k),
                (10 * k - 1) as u64,
            )
        }),
    });
    out.push(CatalogEntry {
        id: "hex.x3.p10k.group.joint".into(),
        kind: Hex,
        params: Params::K,
        description: "eight (16k-1)-packings partition one group of four (10k-1)-packings".into(),
        auxiliary: false,
        build: Box::new(move |k, _| {
            SubdivisionScheme::by_cosets(
                String::new(),
                spec(Hex, group, k),
                spec(Hex, [(12, 4), (24, 0)], k),
                (16 * k - 1) as u64,
            )
        }),
    });

    // Four (18k-1)-packings and six (24k-1)-packings partition one
    // (6k-1)-packing of X_3.
    out.push(CatalogEntry {
        id: "hex.x3.p6k.mixed".into(),
        kind: Hex,
        params: Params::K,
        description: "four (18k-1)-packings and six (24k-1)-packings partition one (6k-1)-packing of hex.x3.p6k".into(),
        auxiliary: false,
        build: Box::new(|k, _| {
            let parent = spec(Hex, [(3, 3), (6, 0)], k);
            let scaled = |pts: &[(i64, i64)]| pts.iter().map(|&(a, b)| Vertex::new(k * a, k * b)).collect::<Vec<_>>();
            let families = vec![
                ChildFamily {
                    child: spec(Hex, [(12, 6), (24, 0)], k),
                    radius: (18 * k - 1) as u64,
                    translations: scaled(&[(0, 0), (0, 6), (6, 0), (6, 6)]),
                },
                ChildFamily {
                    child: spec(Hex, [(18, 6), (36, 0)], k),
                    radius: (24 * k - 1) as u64,
                    translations: scaled(&[(3, 3), (3, 9), (9, 3), (9, 9), (15, 3), (15, 9)]),
                },
            ];
            Ok(SubdivisionScheme {
                name: String::new(),
                parent,
                families,
                claimed_count: 10,
            })
        }),
    });

    out
}

pub fn scheme_catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(entries)
}

pub fn find_scheme(id: &str) -> Result<&'static CatalogEntry, PackingError> {
    scheme_catalog()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| PackingError::UnknownScheme(id.to_string()))
}
