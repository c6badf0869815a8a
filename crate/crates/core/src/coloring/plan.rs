//! Coloring plans: a tree of catalog subdivisions whose leaves carry colors.
//!
//! Plan files are JSON:
//!
//! ```json
//! {
//!   "name": "(2,3)-hex",
//!   "kind": "hex",
//!   "spec": {"dn": {"d": 2, "n": 3}},
//!   "claimed_colors": 5,
//!   "root": {"split": {"scheme": "hex.full.x2", "children": [
//!     {"leaf": 2}, {"leaf": 2}, {"leaf": 2},
//!     {"split": {"scheme": "hex.x2.p4k", "k": 1, "children": [{"leaf": 3}, {"leaf": 3}]}}
//!   ]}}
//! }
//! ```
//!
//! A split names a scheme id from the packings catalog with its parameters
//! (`k`, `m` default to 1) and lists one child node per child copy, in the
//! scheme's copy order. A leaf is the value of the color given to that copy.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    color_census, dn_admissible, verify_s_coloring, ColoringError, PeriodicColoring,
    SColoringReport,
};
use crate::density::SequenceSpec;
use crate::lattice::{LatticeKind, Vertex};
use crate::packings::{find_scheme, LinearPackingSpec, SubdivisionScheme};

/// Largest fundamental domain a plan may produce.
const MAX_DOMAIN: i64 = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanNode {
    Leaf(u64),
    Split(SplitNode),
}

fn one() -> u64 {
    1
}

fn is_one(x: &u64) -> bool {
    *x == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitNode {
    pub scheme: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub k: u64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub m: u64,
    pub children: Vec<PlanNode>,
}

impl PlanNode {
    pub fn leaf_count(&self) -> usize {
        match self {
            PlanNode::Leaf(_) => 1,
            PlanNode::Split(s) => s.children.iter().map(PlanNode::leaf_count).sum(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringPlan {
    pub name: String,
    pub kind: LatticeKind,
    pub spec: SequenceSpec,
    pub claimed_colors: usize,
    pub root: PlanNode,
}

impl ColoringPlan {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plans serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ColoringError> {
        serde_json::from_str(text).map_err(|e| ColoringError::PlanFile(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ColoringError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ColoringError::PlanFile(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// One color class of a built plan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafInfo {
    pub coset: LinearPackingSpec,
    pub value: u64,
    /// Largest i for which the coset is an i-packing.
    pub radius: u64,
    /// Scheme path from the root, e.g. `hex.full.x3/2 > hex.x3.p6k[k=1]/0`.
    pub path: String,
}

#[derive(Clone, Debug)]
pub struct BuiltColoring {
    pub coloring: PeriodicColoring,
    /// In creation order (depth-first).
    pub leaves: Vec<LeafInfo>,
    pub schemes_used: usize,
}

#[derive(Default)]
struct Caches {
    schemes: HashMap<(String, u64, u64), SubdivisionScheme>,
    radii: HashMap<(Vertex, Vertex), u64>,
}

impl Caches {
    fn scheme(&mut self, node: &SplitNode) -> Result<&SubdivisionScheme, ColoringError> {
        let key = (node.scheme.clone(), node.k, node.m);
        if !self.schemes.contains_key(&key) {
            let scheme = find_scheme(&node.scheme)?.instantiate(node.k, node.m)?;
            let report = scheme.verify_exact();
            if !report.ok {
                return Err(ColoringError::NotPartition {
                    scheme: scheme.name.clone(),
                    detail: report.problems.join("; "),
                });
            }
            self.schemes.insert(key.clone(), scheme);
        }
        Ok(&self.schemes[&key])
    }

    fn radius(&mut self, coset: &LinearPackingSpec) -> u64 {
        *self.radii.entry((coset.g1, coset.g2)).or_insert_with(|| {
            coset
                .with_offset(Vertex::ORIGIN)
                .min_pair_distance(0)
                .certified_radius()
        })
    }
}

fn expand(
    node: &PlanNode,
    coset: LinearPackingSpec,
    path: String,
    caches: &mut Caches,
    out: &mut Vec<LeafInfo>,
) -> Result<(), ColoringError> {
    match node {
        PlanNode::Leaf(value) => {
            let radius = caches.radius(&coset);
            if radius < *value {
                return Err(ColoringError::RadiusTooSmall {
                    value: *value,
                    coset: coset.to_string(),
                    radius,
                });
            }
            out.push(LeafInfo {
                coset,
                value: *value,
                radius,
                path,
            });
            Ok(())
        }
        PlanNode::Split(split) => {
            let scheme = caches.scheme(split)?;
            if !scheme.parent.same_lattice(&coset) {
                return Err(ColoringError::WrongParent {
                    scheme: scheme.name.clone(),
                    expected: scheme.parent.to_string(),
                    found: coset.to_string(),
                });
            }
            let children = scheme.children();
            if children.len() != split.children.len() {
                return Err(ColoringError::ChildCount {
                    scheme: scheme.name.clone(),
                    expected: children.len(),
                    found: split.children.len(),
                });
            }
            let shift = coset.offset - scheme.parent.offset;
            let name = scheme.name.clone();
            for (i, ((child, _), sub)) in children.into_iter().zip(&split.children).enumerate() {
                let here = if path.is_empty() {
                    format!("{name}/{i}")
                } else {
                    format!("{path} > {name}/{i}")
                };
                expand(sub, child.translated(shift), here, caches, out)?;
            }
            Ok(())
        }
    }
}

/// Smallest `(pa, pb)` with `(pa, 0)` and `(0, pb)` in the lattice of `spec`.
pub fn rectangular_period(spec: &LinearPackingSpec) -> (i64, i64) {
    let d = spec.det().abs();
    let pa = d / d.gcd(&spec.g1.b.gcd(&spec.g2.b));
    let pb = d / d.gcd(&spec.g1.a.gcd(&spec.g2.a));
    (pa, pb)
}

/// Expands the plan, checks every split is an exact partition of the node it
/// is applied to and every leaf is a packing of at least its value, and
/// realizes the coloring on a rectangular period. Each domain vertex must lie
/// in exactly one leaf.
pub fn build_coloring(plan: &ColoringPlan) -> Result<BuiltColoring, ColoringError> {
    if matches!(plan.root, PlanNode::Leaf(_)) {
        return Err(ColoringError::RootIsLeaf);
    }
    let mut caches = Caches::default();
    let mut leaves = Vec::new();
    expand(
        &plan.root,
        LinearPackingSpec::whole(plan.kind),
        String::new(),
        &mut caches,
        &mut leaves,
    )?;

    let (mut width, mut height) = (1i64, 1i64);
    for leaf in &leaves {
        let (pa, pb) = rectangular_period(&leaf.coset);
        width = width.lcm(&pa);
        height = height.lcm(&pb);
    }
    if plan.kind == LatticeKind::Hex {
        width = width.lcm(&2);
        height = height.lcm(&2);
    }
    if width.saturating_mul(height) > MAX_DOMAIN {
        return Err(ColoringError::PeriodTooLarge(width, height));
    }

    let rows: Vec<Vec<usize>> = (0..height)
        .into_par_iter()
        .map(|b| {
            (0..width)
                .map(|a| {
                    let v = Vertex::new(a, b);
                    let mut hit = usize::MAX;
                    let mut count = 0;
                    for (i, leaf) in leaves.iter().enumerate() {
                        if leaf.coset.contains(v) {
                            hit = i;
                            count += 1;
                        }
                    }
                    if count == 1 {
                        hit
                    } else {
                        usize::MAX - count
                    }
                })
                .collect()
        })
        .collect();
    for (b, row) in rows.iter().enumerate() {
        for (a, &c) in row.iter().enumerate() {
            if c >= leaves.len() {
                return Err(ColoringError::Coverage {
                    vertex: Vertex::new(a as i64, b as i64),
                    count: usize::MAX - c,
                });
            }
        }
    }
    let values: Vec<u64> = leaves.iter().map(|l| l.value).collect();
    let coloring = PeriodicColoring::from_classes(plan.kind, width, height, &values, |v| {
        rows[v.b as usize][v.a as usize]
    })?;
    Ok(BuiltColoring {
        coloring,
        leaves,
        schemes_used: caches.schemes.len(),
    })
}

#[derive(Clone, Debug)]
pub struct PlanReport {
    pub name: String,
    pub claimed_colors: usize,
    pub build_error: Option<String>,
    pub period: Option<(i64, i64)>,
    pub coloring: Option<SColoringReport>,
    pub census_problem: Option<String>,
}

impl PlanReport {
    pub fn color_count(&self) -> Option<usize> {
        self.coloring.as_ref().map(|r| r.color_count)
    }

    pub fn passed(&self) -> bool {
        self.build_error.is_none()
            && self.census_problem.is_none()
            && self
                .coloring
                .as_ref()
                .is_some_and(|r| r.ok && r.color_count == self.claimed_colors)
    }
}

impl fmt::Display for PlanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "OK: {} colors", self.claimed_colors);
        }
        write!(f, "FAILED: plan {}", self.name)?;
        if let Some(e) = &self.build_error {
            return write!(f, "\n  build: {e}");
        }
        if let Some(r) = &self.coloring {
            if r.color_count != self.claimed_colors {
                write!(
                    f,
                    "\n  {} colors, plan claims {}",
                    r.color_count, self.claimed_colors
                )?;
            }
            if !r.ok {
                write!(f, "\n  {r}")?;
            }
        }
        if let Some(p) = &self.census_problem {
            write!(f, "\n  census: {p}")?;
        }
        Ok(())
    }
}

/// Builds the plan and verifies the coloring against the plan's sequence,
/// its census against the (d,n) rule, and its color count against the claim.
pub fn verify_plan(plan: &ColoringPlan) -> (PlanReport, Option<BuiltColoring>) {
    let mut report = PlanReport {
        name: plan.name.clone(),
        claimed_colors: plan.claimed_colors,
        build_error: None,
        period: None,
        coloring: None,
        census_problem: None,
    };
    let built = match build_coloring(plan) {
        Ok(b) => b,
        Err(e) => {
            report.build_error = Some(e.to_string());
            return (report, None);
        }
    };
    report.period = Some((built.coloring.width, built.coloring.height));
    report.coloring = Some(verify_s_coloring(&built.coloring, &plan.spec));
    if let SequenceSpec::Dn { d, n } = plan.spec {
        report.census_problem = dn_admissible(&color_census(&built.coloring), d, n).err();
    }
    (report, Some(built))
}
