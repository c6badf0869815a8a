//! Sufficient conditions for an S-packing coloring built from one base
//! packing: copy 0 takes color 1, and copy i is cut into equal packings
//! colored with the indices in `(a_{i-1}, a_i]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{ColoringPlan, PlanNode, SplitNode};
use crate::density::SequenceSpec;
use crate::lattice::LatticeKind;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorollaryError {
    #[error("corollary inapplicable: needs s_1 = {required}, got {found}")]
    Inapplicable { required: u64, found: u64 },
    #[error("empty or decreasing sequence prefix")]
    BadPrefix,
}

/// One way to cut a base-packing copy: `count_coeff * k^2` packings of radius
/// `radius_coeff * k - 1`, produced by `scheme`.
#[derive(Clone, Copy, Debug)]
pub struct CutOption {
    pub radius_coeff: u64,
    pub count_coeff: u64,
    pub scheme: &'static str,
}

#[derive(Clone, Copy, Debug)]
pub struct CorollaryRule {
    pub kind: LatticeKind,
    /// Number of cut copies.
    pub r: usize,
    pub s1: u64,
    pub base_scheme: &'static str,
    pub options: [CutOption; 2],
}

pub fn corollary_rule(kind: LatticeKind) -> CorollaryRule {
    let opt = |radius_coeff, count_coeff, scheme| CutOption {
        radius_coeff,
        count_coeff,
        scheme,
    };
    match kind {
        LatticeKind::Hex => CorollaryRule {
            kind,
            r: 3,
            s1: 2,
            base_scheme: "hex.full.x2",
            options: [opt(3, 1, "hex.x2.p3k"), opt(4, 2, "hex.x2.p4k")],
        },
        LatticeKind::Square => CorollaryRule {
            kind,
            r: 4,
            s1: 2,
            base_scheme: "square.full.x2",
            options: [opt(3, 1, "square.x2.p3k"), opt(4, 2, "square.x2.p4k")],
        },
        LatticeKind::Tri => CorollaryRule {
            kind,
            r: 2,
            s1: 1,
            base_scheme: "tri.full.x1",
            options: [opt(2, 1, "tri.x1.p2k"), opt(3, 3, "tri.x1.p3k")],
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryWitness {
    pub kind: LatticeKind,
    pub prefix: Vec<u64>,
    /// `a_1 < ... < a_r`, 1-based indices into the prefix.
    pub a: Vec<u64>,
    pub k: Vec<u64>,
    /// 0 or 1: which cut option each step uses.
    pub options: Vec<usize>,
}

impl CorollaryWitness {
    pub fn bound(&self) -> u64 {
        *self.a.last().expect("r >= 1")
    }

    /// Rechecks every step's condition against the prefix.
    pub fn validate(&self) -> Result<(), String> {
        let rule = corollary_rule(self.kind);
        if self.prefix.first() != Some(&rule.s1) {
            return Err(format!("s_1 must be {}", rule.s1));
        }
        if self.a.len() != rule.r || self.k.len() != rule.r || self.options.len() != rule.r {
            return Err(format!("need exactly {} steps", rule.r));
        }
        let mut prev = 1;
        for i in 0..rule.r {
            let (a, k) = (self.a[i], self.k[i]);
            let opt = rule.options.get(self.options[i]).ok_or("bad option")?;
            if a <= prev || a as usize > self.prefix.len() || k == 0 {
                return Err(format!("step {}: a = {a} out of range", i + 1));
            }
            let s = self.prefix[a as usize - 1];
            if s > opt.radius_coeff * k - 1 {
                return Err(format!(
                    "step {}: s_{a} = {s} > {}",
                    i + 1,
                    opt.radius_coeff * k - 1
                ));
            }
            if a - prev < opt.count_coeff * k * k {
                return Err(format!(
                    "step {}: gap {} < {}",
                    i + 1,
                    a - prev,
                    opt.count_coeff * k * k
                ));
            }
            prev = a;
        }
        Ok(())
    }

    /// A coloring plan realizing the witness: copy i of the base partition is
    /// cut by its option's scheme and the pieces take the last indices of
    /// `(a_{i-1}, a_i]`.
    pub fn to_plan(&self) -> ColoringPlan {
        let rule = corollary_rule(self.kind);
        let mut children = vec![PlanNode::Leaf(self.prefix[0])];
        let mut prev = 1u64;
        let mut colors = 1usize;
        for i in 0..rule.r {
            let opt = rule.options[self.options[i]];
            let k = self.k[i];
            let count = opt.count_coeff * k * k;
            let hi = self.a[i];
            let leaves = (hi - count + 1..=hi)
                .map(|j| PlanNode::Leaf(self.prefix[j as usize - 1]))
                .collect();
            children.push(PlanNode::Split(SplitNode {
                scheme: opt.scheme.to_string(),
                k,
                m: 1,
                children: leaves,
            }));
            colors += count as usize;
            prev = hi;
        }
        debug_assert!(prev == self.bound());
        ColoringPlan {
            name: format!("corollary-{}", self.kind.name()),
            kind: self.kind,
            spec: SequenceSpec::Explicit(self.prefix[..self.bound() as usize].to_vec()),
            claimed_colors: colors,
            root: PlanNode::Split(SplitNode {
                scheme: rule.base_scheme.to_string(),
                k: 1,
                m: 1,
                children,
            }),
        }
    }
}

impl fmt::Display for CorollaryWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let opts: Vec<String> = self.options.iter().map(|o| (o + 1).to_string()).collect();
        write!(
            f,
            "bound {} with a=({}) k=({}) options=({})",
            self.bound(),
            list(&self.a),
            list(&self.k),
            opts.join(",")
        )
    }
}

/// Search for the witness with the smallest `a_r`, ties broken by the
/// lexicographically smallest `(k_1, ..., k_r)` and then by option order.
/// For fixed options and multipliers the smallest admissible `a_i` is
/// `a_{i-1} + count`, since `s` is nondecreasing.
pub fn corollary_bound(
    kind: LatticeKind,
    prefix: &[u64],
) -> Result<Option<CorollaryWitness>, CorollaryError> {
    if prefix.is_empty() || prefix.windows(2).any(|w| w[0] > w[1]) {
        return Err(CorollaryError::BadPrefix);
    }
    let rule = corollary_rule(kind);
    if prefix[0] != rule.s1 {
        return Err(CorollaryError::Inapplicable {
            required: rule.s1,
            found: prefix[0],
        });
    }
    let s_max = *prefix.last().expect("nonempty");
    let k_max = (s_max + 1).div_ceil(2);
    let mut best: Option<Candidate> = None;
    let mut a = Vec::new();
    let mut ks = Vec::new();
    let mut opts = Vec::new();
    search(
        &rule, prefix, k_max, 1, &mut a, &mut ks, &mut opts, &mut best,
    );
    Ok(best.map(|(_, k, options, a)| CorollaryWitness {
        kind,
        prefix: prefix.to_vec(),
        a,
        k,
        options,
    }))
}

/// (a_r, k, options, a) of the best witness so far.
type Candidate = (u64, Vec<u64>, Vec<usize>, Vec<u64>);

#[allow(clippy::too_many_arguments)]
fn search(
    rule: &CorollaryRule,
    prefix: &[u64],
    k_max: u64,
    prev: u64,
    a: &mut Vec<u64>,
    ks: &mut Vec<u64>,
    opts: &mut Vec<usize>,
    best: &mut Option<Candidate>,
) {
    if a.len() == rule.r {
        let key = (prev, ks.clone(), opts.clone());
        let better = match best {
            None => true,
            Some((b, bk, bo, _)) => (key.0, &key.1, &key.2) < (*b, bk, bo),
        };
        if better {
            *best = Some((key.0, key.1, key.2, a.clone()));
        }
        return;
    }
    for k in 1..=k_max {
        for (o, opt) in rule.options.iter().enumerate() {
            let next = prev + opt.count_coeff * k * k;
            if next as usize > prefix.len() {
                continue;
            }
            if let Some((b, _, _, _)) = best {
                if next > *b {
                    continue;
                }
            }
            if prefix[next as usize - 1] > opt.radius_coeff * k - 1 {
                continue;
            }
            a.push(next);
            ks.push(k);
            opts.push(o);
            search(rule, prefix, k_max, next, a, ks, opts, best);
            a.pop();
            ks.pop();
            opts.pop();
        }
    }
}
