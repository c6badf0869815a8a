//! Periodic colorings: construction from plans, the shipped pattern, and
//! S-packing verification.

mod catalog;
mod pattern;
mod plan;
mod render;

pub use catalog::{find_plan, plan_catalog};
pub use pattern::{
    derive_33_coloring, dsatur_exact, load_pattern, parse_pattern, sha256_hex, shipped_pattern,
    Claim, Derived33, PatternError, PatternGrid, PATTERN_SHA256, PATTERN_SIZE,
};
pub use plan::{
    build_coloring, rectangular_period, verify_plan, BuiltColoring, ColoringPlan, LeafInfo,
    PlanNode, PlanReport, SplitNode,
};
pub use render::{palette, render_ppm, render_svg, Rgb};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::SequenceSpec;
use crate::lattice::{ball_offsets, distance, vertex_type, LatticeKind, Vertex};
use crate::packings::PackingError;

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error("leaf with value {value} sits on {coset}, which is only a {radius}-packing")]
    RadiusTooSmall {
        value: u64,
        coset: String,
        radius: u64,
    },
    #[error("scheme {scheme} does not partition its parent: {detail}")]
    NotPartition { scheme: String, detail: String },
    #[error("scheme {scheme} subdivides {expected}, but the node is {found}")]
    WrongParent {
        scheme: String,
        expected: String,
        found: String,
    },
    #[error("scheme {scheme} has {expected} children, plan lists {found}")]
    ChildCount {
        scheme: String,
        expected: usize,
        found: usize,
    },
    #[error("the plan's root must split the whole lattice")]
    RootIsLeaf,
    #[error("vertex {vertex} is covered {count} times by the plan's leaves")]
    Coverage { vertex: Vertex, count: usize },
    #[error("hexagonal periods must have even length, got {0}x{1}")]
    OddHexPeriod(i64, i64),
    #[error("period too large: {0}x{1}")]
    PeriodTooLarge(i64, i64),
    #[error("claim failed: {0}")]
    ClaimFailed(String),
    #[error("unknown plan `{0}`")]
    UnknownPlan(String),
    #[error("plan file: {0}")]
    PlanFile(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// A color: its canonical 1-based index and the packing radius it must meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColorId {
    pub index: usize,
    pub value: u64,
}

/// A coloring invariant under the translations `(width, 0)` and `(0, height)`,
/// stored on the fundamental domain `[0, width) x [0, height)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicColoring {
    pub kind: LatticeKind,
    pub width: i64,
    pub height: i64,
    /// Sorted by (value, index); `colors[i].index == i + 1`.
    pub colors: Vec<ColorId>,
    /// Row-major (b outer), entries index into `colors`.
    cells: Vec<u32>,
}

impl PeriodicColoring {
    /// `class_of(v)` gives each domain vertex a class id; classes are turned
    /// into colors ordered by (value, class id).
    pub fn from_classes(
        kind: LatticeKind,
        width: i64,
        height: i64,
        values: &[u64],
        class_of: impl Fn(Vertex) -> usize,
    ) -> Result<Self, ColoringError> {
        if kind == LatticeKind::Hex && (width % 2 != 0 || height % 2 != 0) {
            return Err(ColoringError::OddHexPeriod(width, height));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&c| (values[c], c));
        let mut rank = vec![0u32; values.len()];
        for (r, &c) in order.iter().enumerate() {
            rank[c] = r as u32;
        }
        let colors = order
            .iter()
            .enumerate()
            .map(|(r, &c)| ColorId {
                index: r + 1,
                value: values[c],
            })
            .collect();
        let mut cells = Vec::with_capacity((width * height) as usize);
        for b in 0..height {
            for a in 0..width {
                cells.push(rank[class_of(Vertex::new(a, b))]);
            }
        }
        Ok(PeriodicColoring {
            kind,
            width,
            height,
            colors,
            cells,
        })
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    fn slot(&self, v: Vertex) -> usize {
        (v.b.rem_euclid(self.height) * self.width + v.a.rem_euclid(self.width)) as usize
    }

    /// Position of `v`'s color in `colors`.
    pub fn color_slot(&self, v: Vertex) -> usize {
        self.cells[self.slot(v)] as usize
    }

    pub fn color_at(&self, v: Vertex) -> ColorId {
        self.colors[self.color_slot(v)]
    }

    pub fn domain(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.height).flat_map(move |b| (0..self.width).map(move |a| Vertex::new(a, b)))
    }

    /// Vertices of the fundamental domain with the given color slot.
    pub fn class(&self, slot: usize) -> Vec<Vertex> {
        self.domain()
            .filter(|v| self.color_slot(*v) == slot)
            .collect()
    }

    /// Fundamental-domain dump: a header with the period and legend, then one
    /// row of color indices per line.
    pub fn export_text(&self) -> String {
        let mut s = format!(
            "lattice {}\nperiod ({},0) (0,{})\ncolors {}\n",
            self.kind,
            self.width,
            self.height,
            self.colors.len()
        );
        for c in &self.colors {
            s.push_str(&format!("color {} value {}\n", c.index, c.value));
        }
        for b in 0..self.height {
            let row: Vec<String> = (0..self.width)
                .map(|a| self.color_at(Vertex::new(a, b)).index.to_string())
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Two same-colored vertices too close for the color's value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub u: Vertex,
    pub w: Vertex,
    pub color: ColorId,
    pub distance: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SColoringReport {
    pub ok: bool,
    pub color_count: usize,
    pub census: BTreeMap<u64, usize>,
    /// A color whose value is below the sequence term it is matched with.
    pub label_problem: Option<String>,
    pub violation: Option<Violation>,
}

impl fmt::Display for SColoringReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "OK: {} colors", self.color_count);
        }
        write!(f, "FAILED ({} colors)", self.color_count)?;
        if let Some(p) = &self.label_problem {
            write!(f, "\n  {p}")?;
        }
        if let Some(v) = &self.violation {
            write!(
                f,
                "\n  color {} (value {}) at {} and {}: distance {}",
                v.color.index, v.color.value, v.u, v.w, v.distance
            )?;
        }
        Ok(())
    }
}

pub fn color_census(coloring: &PeriodicColoring) -> BTreeMap<u64, usize> {
    let mut census = BTreeMap::new();
    for c in &coloring.colors {
        *census.entry(c.value).or_insert(0) += 1;
    }
    census
}

/// Every value at least `d` and used by at most `n` colors.
pub fn dn_admissible(census: &BTreeMap<u64, usize>, d: u64, n: u64) -> Result<(), String> {
    for (&v, &c) in census {
        if v < d {
            return Err(format!("value {v} is below d = {d}"));
        }
        if c as u64 > n {
            return Err(format!(
                "value {v} is used by {c} colors, more than n = {n}"
            ));
        }
    }
    Ok(())
}

/// Color i (in (value, index) order) must have value >= s_i.
fn check_labels(coloring: &PeriodicColoring, spec: &SequenceSpec) -> Option<String> {
    for (i, c) in coloring.colors.iter().enumerate() {
        match spec.term(i as u64 + 1) {
            None => {
                return Some(format!(
                    "{} colors but the sequence has only {}",
                    coloring.colors.len(),
                    i
                ))
            }
            Some(s) if c.value < s => {
                return Some(format!(
                    "color {} has value {} but s_{} = {}",
                    c.index,
                    c.value,
                    i + 1,
                    s
                ));
            }
            _ => {}
        }
    }
    None
}

/// Plane verification: for every vertex u of the fundamental domain, scan the
/// ball of radius value(u) for another vertex of u's color. Periodicity makes
/// this exhaustive for any period. The first violation in row-major order of
/// u is reported.
pub fn verify_s_coloring(coloring: &PeriodicColoring, spec: &SequenceSpec) -> SColoringReport {
    let label_problem = check_labels(coloring, spec);
    let kind = coloring.kind;
    let mut offsets: HashMap<(u8, u64), Vec<Vertex>> = HashMap::new();
    for c in &coloring.colors {
        for t in 0..2u8 {
            offsets
                .entry((t, c.value))
                .or_insert_with(|| ball_offsets(kind, t, c.value));
        }
    }
    let rows: Vec<i64> = (0..coloring.height).collect();
    let violation = rows.par_iter().find_map_first(|&b| {
        for a in 0..coloring.width {
            let u = Vertex::new(a, b);
            let slot = coloring.color_slot(u);
            let color = coloring.colors[slot];
            let t = if kind == LatticeKind::Hex {
                vertex_type(u)
            } else {
                0
            };
            for &w in &offsets[&(t, color.value)] {
                let x = u + w;
                if coloring.color_slot(x) == slot {
                    return Some(Violation {
                        u,
                        w: x,
                        color,
                        distance: distance(kind, u, x),
                    });
                }
            }
        }
        None
    });
    SColoringReport {
        ok: label_problem.is_none() && violation.is_none(),
        color_count: coloring.colors.len(),
        census: color_census(coloring),
        label_problem,
        violation,
    }
}

/// Torus distance on a `width x height` period: the minimum over the nine
/// adjacent period shifts.
pub fn torus_distance(kind: LatticeKind, width: i64, height: i64, u: Vertex, w: Vertex) -> u64 {
    let mut best = u64::MAX;
    for sa in -1..=1 {
        for sb in -1..=1 {
            let shifted = Vertex::new(w.a + sa * width, w.b + sb * height);
            best = best.min(distance(kind, u, shifted));
        }
    }
    best
}

/// First pair of distinct domain vertices of `set` at torus distance at most
/// `radius`.
pub fn torus_packing_violation(
    kind: LatticeKind,
    width: i64,
    height: i64,
    set: &[Vertex],
    radius: u64,
) -> Option<(Vertex, Vertex, u64)> {
    for (i, &u) in set.iter().enumerate() {
        for &w in &set[i + 1..] {
            let d = torus_distance(kind, width, height, u, w);
            if d <= radius {
                return Some((u, w, d));
            }
        }
    }
    None
}

/// Torus verification: every color class is a value-packing of the torus.
pub fn verify_torus(coloring: &PeriodicColoring, spec: &SequenceSpec) -> SColoringReport {
    let label_problem = check_labels(coloring, spec);
    let mut violation = None;
    for (slot, color) in coloring.colors.iter().enumerate() {
        let class = coloring.class(slot);
        if let Some((u, w, d)) = torus_packing_violation(
            coloring.kind,
            coloring.width,
            coloring.height,
            &class,
            color.value,
        ) {
            violation = Some(Violation {
                u,
                w,
                color: *color,
                distance: d,
            });
            break;
        }
    }
    SColoringReport {
        ok: label_problem.is_none() && violation.is_none(),
        color_count: coloring.colors.len(),
        census: color_census(coloring),
        label_problem,
        violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacent_same_color_is_caught() {
        // stripes of width 2 along a: (0,0) and (1,0) share a color
        let c = PeriodicColoring::from_classes(LatticeKind::Square, 4, 1, &[1, 1], |v| {
            (v.a / 2) as usize
        })
        .unwrap();
        let r = verify_s_coloring(&c, &SequenceSpec::dn(1, 2));
        assert!(!r.ok);
        let v = r.violation.unwrap();
        assert_eq!(v.distance, 1);
        assert_eq!(v.u, Vertex::new(0, 0));
    }

    #[test]
    fn checkerboard_is_proper() {
        let c = PeriodicColoring::from_classes(LatticeKind::Square, 2, 2, &[1, 1], |v| {
            ((v.a + v.b) % 2) as usize
        })
        .unwrap();
        assert!(verify_s_coloring(&c, &SequenceSpec::dn(1, 2)).ok);
        assert!(verify_torus(&c, &SequenceSpec::dn(1, 2)).ok);
    }

    #[test]
    fn census_of_empty_coloring_is_empty() {
        let c = PeriodicColoring {
            kind: LatticeKind::Square,
            width: 1,
            height: 1,
            colors: vec![],
            cells: vec![],
        };
        assert!(color_census(&c).is_empty());
    }
}
