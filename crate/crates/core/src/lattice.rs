//! Integer-coordinate model of the hexagonal, square and triangular lattices.
//!
//! All three graphs live on the integer grid. The hexagonal lattice uses the
//! brick-wall embedding: horizontal edges everywhere, and a vertical edge
//! between `(a, b)` and `(a, b + 1)` exactly when `a + b` is odd.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("radius must be nonnegative, got {0}")]
    NegativeRadius(i64),
    #[error("empty window: [{a_min}, {a_max}] x [{b_min}, {b_max}]")]
    EmptyWindow {
        a_min: i64,
        a_max: i64,
        b_min: i64,
        b_max: i64,
    },
    #[error("unknown lattice `{0}` (expected hex, square or tri)")]
    UnknownKind(String),
    #[error("cannot parse vertex `{0}` (expected a,b)")]
    BadVertex(String),
}

/// A vertex, or equally a translation vector, of the integer grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub a: i64,
    pub b: i64,
}

impl Vertex {
    pub const ORIGIN: Vertex = Vertex { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Vertex { a, b }
    }

    pub fn max_abs(self) -> i64 {
        self.a.abs().max(self.b.abs())
    }

    pub fn l1(self) -> i64 {
        self.a.abs() + self.b.abs()
    }

    /// True when the coordinate sum is even. Only such translations are
    /// automorphisms of the hexagonal lattice.
    pub fn is_even(self) -> bool {
        (self.a + self.b).rem_euclid(2) == 0
    }
}

impl Add for Vertex {
    type Output = Vertex;
    fn add(self, o: Vertex) -> Vertex {
        Vertex::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Vertex {
    type Output = Vertex;
    fn sub(self, o: Vertex) -> Vertex {
        Vertex::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Vertex {
    type Output = Vertex;
    fn neg(self) -> Vertex {
        Vertex::new(-self.a, -self.b)
    }
}

impl Mul<Vertex> for i64 {
    type Output = Vertex;
    fn mul(self, v: Vertex) -> Vertex {
        Vertex::new(self * v.a, self * v.b)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl FromStr for Vertex {
    type Err = LatticeError;

    /// Accepts `a,b` or `(a,b)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut it = t.split(',').map(str::trim);
        let parse = |p: Option<&str>| p.and_then(|x| x.parse::<i64>().ok());
        match (parse(it.next()), parse(it.next()), it.next()) {
            (Some(a), Some(b), None) => Ok(Vertex::new(a, b)),
            _ => Err(LatticeError::BadVertex(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Hex,
    Square,
    Tri,
}

impl LatticeKind {
    pub const ALL: [LatticeKind; 3] = [LatticeKind::Hex, LatticeKind::Square, LatticeKind::Tri];

    pub fn degree(self) -> usize {
        match self {
            LatticeKind::Hex => 3,
            LatticeKind::Square => 4,
            LatticeKind::Tri => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Hex => "hex",
            LatticeKind::Square => "square",
            LatticeKind::Tri => "tri",
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeKind {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hex" | "hexagonal" | "h" => Ok(LatticeKind::Hex),
            "square" | "z2" | "sq" => Ok(LatticeKind::Square),
            "tri" | "triangular" | "t" => Ok(LatticeKind::Tri),
            other => Err(LatticeError::UnknownKind(other.to_string())),
        }
    }
}

/// Inclusive rectangular viewport.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub a_min: i64,
    pub a_max: i64,
    pub b_min: i64,
    pub b_max: i64,
}

impl Window {
    pub fn new(a_min: i64, a_max: i64, b_min: i64, b_max: i64) -> Result<Self, LatticeError> {
        if a_min > a_max || b_min > b_max {
            return Err(LatticeError::EmptyWindow {
                a_min,
                a_max,
                b_min,
                b_max,
            });
        }
        Ok(Window {
            a_min,
            a_max,
            b_min,
            b_max,
        })
    }

    /// Square window `[-r, r]^2`.
    pub fn centered(r: i64) -> Self {
        let r = r.abs();
        Window {
            a_min: -r,
            a_max: r,
            b_min: -r,
            b_max: r,
        }
    }

    pub fn width(&self) -> i64 {
        self.a_max - self.a_min + 1
    }

    pub fn height(&self) -> i64 {
        self.b_max - self.b_min + 1
    }

    pub fn min_side(&self) -> i64 {
        self.width().min(self.height())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (self.a_min..=self.a_max).contains(&v.a) && (self.b_min..=self.b_max).contains(&v.b)
    }

    /// Shrinks every side by `margin`; `None` if nothing is left.
    pub fn shrink(&self, margin: i64) -> Option<Window> {
        Window::new(
            self.a_min + margin,
            self.a_max - margin,
            self.b_min + margin,
            self.b_max - margin,
        )
        .ok()
    }

    /// Row-major iteration (b outer, a inner).
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (self.b_min..=self.b_max)
            .flat_map(move |b| (self.a_min..=self.a_max).map(move |a| Vertex::new(a, b)))
    }
}

/// Type of a vertex in the brick-wall hexagonal embedding: `(a + b + 1) mod 2`.
pub fn vertex_type(v: Vertex) -> u8 {
    (v.a + v.b + 1).rem_euclid(2) as u8
}

pub fn distance(kind: LatticeKind, v1: Vertex, v2: Vertex) -> u64 {
    match kind {
        LatticeKind::Square => ((v1.a - v2.a).abs() + (v1.b - v2.b).abs()) as u64,
        LatticeKind::Tri => {
            let da = v2.a - v1.a;
            let db = v2.b - v1.b;
            if (da >= 0) == (db >= 0) || da == 0 || db == 0 {
                (da.abs() + db.abs()) as u64
            } else {
                da.abs().max(db.abs()) as u64
            }
        }
        LatticeKind::Hex => {
            let (hi, lo) = if v1.b >= v2.b { (v1, v2) } else { (v2, v1) };
            let da = (hi.a - lo.a).abs();
            let db = hi.b - lo.b;
            if da >= db {
                (da + db) as u64
            } else {
                (2 * db - vertex_type(hi) as i64 + vertex_type(lo) as i64) as u64
            }
        }
    }
}

pub fn neighbors(kind: LatticeKind, v: Vertex) -> Vec<Vertex> {
    let Vertex { a, b } = v;
    match kind {
        LatticeKind::Hex => {
            let vertical = if (a + b).rem_euclid(2) == 1 {
                b + 1
            } else {
                b - 1
            };
            vec![
                Vertex::new(a + 1, b),
                Vertex::new(a - 1, b),
                Vertex::new(a, vertical),
            ]
        }
        LatticeKind::Square => vec![
            Vertex::new(a + 1, b),
            Vertex::new(a - 1, b),
            Vertex::new(a, b + 1),
            Vertex::new(a, b - 1),
        ],
        LatticeKind::Tri => vec![
            Vertex::new(a + 1, b),
            Vertex::new(a, b + 1),
            Vertex::new(a - 1, b),
            Vertex::new(a, b - 1),
            Vertex::new(a - 1, b + 1),
            Vertex::new(a + 1, b - 1),
        ],
    }
}

/// Vertices within distance `n` of `center`, in row-major order.
///
/// Every kind satisfies `distance >= max(|da|, |db|)`, so the box of side
/// `2n + 1` holds the whole ball.
pub fn ball(kind: LatticeKind, center: Vertex, n: u64) -> Vec<Vertex> {
    collect_box(kind, center, n, |d| d <= n)
}

/// Vertices at distance exactly `n` from `center`, in row-major order.
pub fn sphere(kind: LatticeKind, center: Vertex, n: u64) -> Vec<Vertex> {
    collect_box(kind, center, n, |d| d == n)
}

fn collect_box(
    kind: LatticeKind,
    center: Vertex,
    n: u64,
    keep: impl Fn(u64) -> bool,
) -> Vec<Vertex> {
    let r = n as i64;
    let mut out = Vec::new();
    for db in -r..=r {
        for da in -r..=r {
            let v = Vertex::new(center.a + da, center.b + db);
            if keep(distance(kind, center, v)) {
                out.push(v);
            }
        }
    }
    out
}

/// Nonzero offsets `w` with `distance(u, u + w) <= n`, for a center of the
/// given hexagonal type (ignored for the other lattices).
pub fn ball_offsets(kind: LatticeKind, center_type: u8, n: u64) -> Vec<Vertex> {
    let center = match (kind, center_type) {
        (LatticeKind::Hex, 0) => Vertex::new(1, 0),
        _ => Vertex::ORIGIN,
    };
    ball(kind, center, n)
        .into_iter()
        .map(|v| v - center)
        .filter(|w| *w != Vertex::ORIGIN)
        .collect()
}

pub fn ball_size_formula(kind: LatticeKind, n: i64) -> Result<u64, LatticeError> {
    if n < 0 {
        return Err(LatticeError::NegativeRadius(n));
    }
    let n = n as u64;
    Ok(match kind {
        // 3/2 n^2 + 3/2 n + 1 = 3 n (n + 1) / 2 + 1
        LatticeKind::Hex => 3 * n * (n + 1) / 2 + 1,
        LatticeKind::Square => 2 * n * n + 2 * n + 1,
        LatticeKind::Tri => 3 * n * n + 3 * n + 1,
    })
}

pub fn sphere_size_formula(kind: LatticeKind, n: i64) -> Result<u64, LatticeError> {
    if n < 0 {
        return Err(LatticeError::NegativeRadius(n));
    }
    if n == 0 {
        return Ok(1);
    }
    Ok(kind.degree() as u64 * n as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn types() {
        assert_eq!(vertex_type(Vertex::new(0, 0)), 1);
        assert_eq!(vertex_type(Vertex::new(0, 1)), 0);
        assert_eq!(vertex_type(Vertex::new(2, 1)), 0);
        assert_eq!(vertex_type(Vertex::new(-1, 0)), 0);
    }

    #[test]
    fn parse_vertex() {
        assert_eq!("3,-4".parse::<Vertex>().unwrap(), Vertex::new(3, -4));
        assert_eq!("(0, 2)".parse::<Vertex>().unwrap(), Vertex::new(0, 2));
        assert!("1,2,3".parse::<Vertex>().is_err());
    }

    #[test]
    fn hex_offsets_depend_on_type() {
        let o1 = ball_offsets(LatticeKind::Hex, 1, 1);
        let o0 = ball_offsets(LatticeKind::Hex, 0, 1);
        assert!(o1.contains(&Vertex::new(0, -1)));
        assert!(o0.contains(&Vertex::new(0, 1)));
    }
}
