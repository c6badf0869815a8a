//! The 24x24 square-lattice pattern with colors 1..17, and the 33-color
//! (3,3) coloring derived from it.

use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{
    torus_distance, torus_packing_violation, verify_torus, ColoringError, PeriodicColoring,
};
use crate::density::SequenceSpec;
use crate::lattice::{LatticeKind, Vertex};

pub const PATTERN_SIZE: usize = 24;
const MAX_VALUE: u8 = 17;

/// SHA-256 of the shipped pattern file.
pub const PATTERN_SHA256: &str = "d5d600c1f686526aa3af792ff5f27ee7ba8ee80490da3123437eda5e575399aa";

const SHIPPED: &str = include_str!("../../data/pattern24.txt");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("{0}")]
    Io(String),
    #[error("line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("value {0} never appears")]
    MissingValue(u8),
    #[error("checksum mismatch: expected {expected}, found {found}")]
    Checksum { expected: String, found: String },
}

/// Row `b` of `cells` holds the colors of `(0,b) .. (23,b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGrid {
    cells: Vec<Vec<u8>>,
}

impl PatternGrid {
    pub fn width(&self) -> usize {
        PATTERN_SIZE
    }

    pub fn height(&self) -> usize {
        PATTERN_SIZE
    }

    pub fn value_at(&self, v: Vertex) -> u8 {
        let n = PATTERN_SIZE as i64;
        self.cells[v.b.rem_euclid(n) as usize][v.a.rem_euclid(n) as usize]
    }

    pub fn max_value(&self) -> u8 {
        self.cells.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Domain vertices of color `i`, row-major.
    pub fn class(&self, i: u8) -> Vec<Vertex> {
        let n = PATTERN_SIZE as i64;
        (0..n)
            .flat_map(|b| (0..n).map(move |a| Vertex::new(a, b)))
            .filter(|v| self.value_at(*v) == i)
            .collect()
    }

    /// Color i becomes a color of value i.
    pub fn to_coloring(&self) -> PeriodicColoring {
        let n = PATTERN_SIZE as i64;
        let values: Vec<u64> = (1..=MAX_VALUE as u64).collect();
        PeriodicColoring::from_classes(LatticeKind::Square, n, n, &values, |v| {
            self.value_at(v) as usize - 1
        })
        .expect("square periods need no parity")
    }
}

pub fn parse_pattern(text: &str) -> Result<PatternGrid, PatternError> {
    let lines: Vec<&str> = text.trim_end().lines().collect();
    let mut cells = Vec::with_capacity(PATTERN_SIZE);
    for (i, line) in lines.iter().enumerate() {
        let line_no = i + 1;
        if i >= PATTERN_SIZE {
            return Err(PatternError::Parse {
                line: line_no,
                column: 1,
                msg: format!("more than {PATTERN_SIZE} rows"),
            });
        }
        let mut row = Vec::with_capacity(PATTERN_SIZE);
        let mut col = 0;
        for (pos, tok) in tokens(line) {
            col = pos;
            let value: u8 = tok.parse().map_err(|_| PatternError::Parse {
                line: line_no,
                column: pos,
                msg: format!("`{tok}` is not an integer"),
            })?;
            if !(1..=MAX_VALUE).contains(&value) {
                return Err(PatternError::Parse {
                    line: line_no,
                    column: pos,
                    msg: format!("value {value} outside 1..={MAX_VALUE}"),
                });
            }
            row.push(value);
        }
        if row.len() != PATTERN_SIZE {
            return Err(PatternError::Parse {
                line: line_no,
                column: col.max(1),
                msg: format!("expected {PATTERN_SIZE} values, found {}", row.len()),
            });
        }
        cells.push(row);
    }
    if cells.len() != PATTERN_SIZE {
        return Err(PatternError::Parse {
            line: cells.len() + 1,
            column: 1,
            msg: format!("expected {PATTERN_SIZE} rows, found {}", cells.len()),
        });
    }
    let grid = PatternGrid { cells };
    for v in 1..=MAX_VALUE {
        if !grid.cells.iter().flatten().any(|&x| x == v) {
            return Err(PatternError::MissingValue(v));
        }
    }
    Ok(grid)
}

/// Whitespace-separated tokens with their 1-based character column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

pub fn load_pattern(path: &Path) -> Result<PatternGrid, PatternError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PatternError::Io(format!("{}: {e}", path.display())))?;
    parse_pattern(&text)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// The pattern shipped with the crate, checked against its pinned checksum.
pub fn shipped_pattern() -> Result<PatternGrid, PatternError> {
    let found = sha256_hex(SHIPPED.as_bytes());
    if found != PATTERN_SHA256 {
        return Err(PatternError::Checksum {
            expected: PATTERN_SHA256.into(),
            found,
        });
    }
    parse_pattern(SHIPPED)
}

/// A proof step checked on the pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub statement: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Derived33 {
    pub coloring: PeriodicColoring,
    pub claims: Vec<Claim>,
    /// Vertices the recipe assigns more than once (kept at the first).
    pub flags: Vec<String>,
    /// The four 7-packings partitioning the shifted copy of B_2.
    pub b2_split: Vec<Vec<Vertex>>,
}

const N: i64 = PATTERN_SIZE as i64;

fn shifted(set: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = set
        .iter()
        .map(|&v| Vertex::new((v.a + 1).rem_euclid(N), v.b))
        .collect();
    out.sort_by_key(|v| (v.b, v.a));
    out
}

fn packing_claim(set: &[Vertex], radius: u64, statement: String) -> Claim {
    match torus_packing_violation(LatticeKind::Square, N, N, set, radius) {
        None => Claim {
            statement,
            holds: true,
            detail: format!("{} vertices", set.len()),
        },
        Some((u, w, d)) => Claim {
            statement,
            holds: false,
            detail: format!("{u} and {w} at distance {d}"),
        },
    }
}

/// Exact k-coloring by backtracking, branching on the vertex with the most
/// distinct neighbor colors (ties: most neighbors, then lowest index).
pub fn dsatur_exact(adj: &[Vec<usize>], k: usize) -> Option<Vec<usize>> {
    fn go(adj: &[Vec<usize>], k: usize, color: &mut [usize], left: usize) -> bool {
        if left == 0 {
            return true;
        }
        let mut best = None;
        let mut best_key = (0usize, 0usize);
        for v in 0..adj.len() {
            if color[v] != usize::MAX {
                continue;
            }
            let mut seen = vec![false; k];
            for &w in &adj[v] {
                if color[w] != usize::MAX {
                    seen[color[w]] = true;
                }
            }
            let key = (seen.iter().filter(|&&s| s).count(), adj[v].len());
            if best.is_none() || key > best_key {
                best = Some(v);
                best_key = key;
            }
        }
        let v = best.expect("an uncolored vertex remains");
        for c in 0..k {
            if adj[v].iter().all(|&w| color[w] != c) {
                color[v] = c;
                if go(adj, k, color, left - 1) {
                    return true;
                }
                color[v] = usize::MAX;
            }
        }
        false
    }
    let mut color = vec![usize::MAX; adj.len()];
    go(adj, k, &mut color, adj.len()).then_some(color)
}

/// Splits `set` into `parts` r-packings of the torus.
fn split_into_packings(set: &[Vertex], radius: u64, parts: usize) -> Option<Vec<Vec<Vertex>>> {
    let adj: Vec<Vec<usize>> = (0..set.len())
        .map(|i| {
            (0..set.len())
                .filter(|&j| {
                    j != i && torus_distance(LatticeKind::Square, N, N, set[i], set[j]) <= radius
                })
                .collect()
        })
        .collect();
    let color = dsatur_exact(&adj, parts)?;
    let mut out = vec![Vec::new(); parts];
    for (i, &c) in color.iter().enumerate() {
        out[c].push(set[i]);
    }
    Some(out)
}

/// Recolors the pattern into a (3,3)-packing coloring with 33 colors.
///
/// With B_i the vertices of color i and B'_i = B_i + (1,0):
/// value 3 on B_2, B_3, B'_3; B'_2 split into four 7-packings taking one
/// color each of values 4..7; values 4..8 on B_i and B'_i, and value 8 on B_9;
/// value 9 on B_16 u B_17, B'_16 u B'_17 and B'_9; values 10..13 on B_i and
/// B'_i, with B_14, B'_14, B_15, B'_15 taking one more color of value 10, 11,
/// 12, 13.
pub fn derive_33_coloring(pattern: &PatternGrid) -> Result<Derived33, ColoringError> {
    let mut claims = Vec::new();
    let fail = |c: &Claim| ColoringError::ClaimFailed(format!("{}: {}", c.statement, c.detail));

    let as_coloring = pattern.to_coloring();
    let report = verify_torus(
        &as_coloring,
        &SequenceSpec::Explicit((1..=MAX_VALUE as u64).collect()),
    );
    let claim = Claim {
        statement: "the pattern is a (1,2,...,17)-packing coloring of the torus".into(),
        holds: report.ok,
        detail: report.to_string(),
    };
    if !claim.holds {
        return Err(fail(&claim));
    }
    claims.push(claim);

    let b: Vec<Vec<Vertex>> = (0..=MAX_VALUE).map(|i| pattern.class(i)).collect();
    let bp: Vec<Vec<Vertex>> = b.iter().map(|s| shifted(s)).collect();

    let mut union: Vec<Vertex> = bp[2..].iter().flatten().copied().collect();
    union.sort_by_key(|v| (v.b, v.a));
    let claim = Claim {
        statement: "B_1 equals the union of B_i + (1,0) over i >= 2".into(),
        holds: union == b[1],
        detail: format!("|B_1| = {}, union has {}", b[1].len(), union.len()),
    };
    if !claim.holds {
        return Err(fail(&claim));
    }
    claims.push(claim);

    for i in [2u8, 3] {
        let claim = packing_claim(&b[i as usize], 3, format!("B_{i} is a 3-packing"));
        if !claim.holds {
            return Err(fail(&claim));
        }
        claims.push(claim);
    }

    let mut b1617 = [b[16].clone(), b[17].clone()].concat();
    b1617.sort_by_key(|v| (v.b, v.a));
    let claim = packing_claim(&b1617, 11, "B_16 u B_17 is an 11-packing".into());
    if !claim.holds {
        return Err(fail(&claim));
    }
    claims.push(claim);

    let split = split_into_packings(&bp[2], 7, 4);
    let claim = Claim {
        statement: "four 7-packings partition B_2 + (1,0)".into(),
        holds: split.is_some(),
        detail: format!("{} vertices", bp[2].len()),
    };
    if !claim.holds {
        return Err(fail(&claim));
    }
    claims.push(claim);
    let split = split.expect("checked above");

    // (value, vertex set) in creation order
    let mut classes: Vec<(u64, Vec<Vertex>)> =
        vec![(3, b[2].clone()), (3, b[3].clone()), (3, bp[3].clone())];
    for (i, part) in split.iter().enumerate() {
        classes.push((4 + i as u64, part.clone()));
    }
    for i in 4..=8usize {
        classes.push((i as u64, b[i].clone()));
        classes.push((i as u64, bp[i].clone()));
    }
    classes.push((8, b[9].clone()));
    let mut bp1617 = [bp[16].clone(), bp[17].clone()].concat();
    bp1617.sort_by_key(|v| (v.b, v.a));
    classes.push((9, b1617));
    classes.push((9, bp1617));
    classes.push((9, bp[9].clone()));
    for i in 10..=13usize {
        classes.push((i as u64, b[i].clone()));
        classes.push((i as u64, bp[i].clone()));
    }
    for (value, set) in [(10, &b[14]), (11, &bp[14]), (12, &b[15]), (13, &bp[15])] {
        classes.push((value, set.clone()));
    }

    let mut owner = vec![usize::MAX; PATTERN_SIZE * PATTERN_SIZE];
    let mut flags = Vec::new();
    for (c, (value, set)) in classes.iter().enumerate() {
        for v in set {
            let slot = (v.b * N + v.a) as usize;
            if owner[slot] == usize::MAX {
                owner[slot] = c;
            } else {
                flags.push(format!(
                    "{v} assigned to value {value} after value {}",
                    classes[owner[slot]].0
                ));
            }
        }
    }
    if let Some(slot) = owner.iter().position(|&o| o == usize::MAX) {
        let v = Vertex::new(slot as i64 % N, slot as i64 / N);
        return Err(ColoringError::ClaimFailed(format!(
            "the recipe leaves {v} uncolored"
        )));
    }
    let values: Vec<u64> = classes.iter().map(|c| c.0).collect();
    let coloring = PeriodicColoring::from_classes(LatticeKind::Square, N, N, &values, |v| {
        owner[(v.b * N + v.a) as usize]
    })?;
    Ok(Derived33 {
        coloring,
        claims,
        flags,
        b2_split: split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_report_columns() {
        let t: Vec<_> = tokens(" 3  14 1").collect();
        assert_eq!(t, vec![(2, "3"), (5, "14"), (8, "1")]);
    }

    #[test]
    fn dsatur_colors_odd_cycle_with_three() {
        let adj = vec![vec![1, 4], vec![0, 2], vec![1, 3], vec![2, 4], vec![3, 0]];
        assert!(dsatur_exact(&adj, 2).is_none());
        let c = dsatur_exact(&adj, 3).unwrap();
        for (v, ns) in adj.iter().enumerate() {
            assert!(ns.iter().all(|&w| c[w] != c[v]));
        }
    }
}
