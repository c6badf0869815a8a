//! k-areas, packing density bounds and exact infeasibility certificates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{ball, neighbors, sphere, LatticeKind, Vertex};

pub type Rational = BigRational;

pub const DEFAULT_HORIZON: u64 = 10_000;
pub const DEFAULT_LOWER_BOUND_CAP: u64 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DensityError {
    #[error("k must be positive, got {0}")]
    NonPositiveK(i64),
    #[error("invalid sequence: {0}")]
    BadSequence(String),
    #[error("horizon {horizon} is below the sequence's starting value {start}")]
    HorizonTooSmall { horizon: u64, start: u64 },
    #[error(
        "density sum stays below 1 for the first {cap} colors: no finite lower bound at this cap"
    )]
    NoFiniteBound { cap: u64 },
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Smallest integer >= r.
pub fn ceil_int(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().expect("ceiling fits in i64")
}

/// Sequence of packing radii `s_1 <= s_2 <= ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceSpec {
    /// A finite nondecreasing list; only this many colors exist.
    Explicit(Vec<u64>),
    /// `s_i = d + floor((i - 1) / n)`.
    Dn { d: u64, n: u64 },
}

impl SequenceSpec {
    pub fn dn(d: u64, n: u64) -> Self {
        SequenceSpec::Dn { d, n }
    }

    pub fn validate(&self) -> Result<(), DensityError> {
        match self {
            SequenceSpec::Explicit(s) => {
                if s.is_empty() {
                    return Err(DensityError::BadSequence("empty list".into()));
                }
                if s.contains(&0) {
                    return Err(DensityError::BadSequence("values must be positive".into()));
                }
                if s.windows(2).any(|w| w[0] > w[1]) {
                    return Err(DensityError::BadSequence(
                        "list must be nondecreasing".into(),
                    ));
                }
                Ok(())
            }
            SequenceSpec::Dn { d, n } => {
                if *d == 0 || *n == 0 {
                    return Err(DensityError::BadSequence("d and n must be positive".into()));
                }
                Ok(())
            }
        }
    }

    /// `s_i` for 1-based `i`, or `None` past the end of an explicit list.
    pub fn term(&self, i: u64) -> Option<u64> {
        assert!(i >= 1, "sequence index is 1-based");
        match self {
            SequenceSpec::Explicit(s) => s.get((i - 1) as usize).copied(),
            SequenceSpec::Dn { d, n } => Some(d + (i - 1) / n),
        }
    }

    pub fn len(&self) -> Option<u64> {
        match self {
            SequenceSpec::Explicit(s) => Some(s.len() as u64),
            SequenceSpec::Dn { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SequenceSpec::Explicit(s) if s.is_empty())
    }

    pub fn first(&self) -> u64 {
        self.term(1).unwrap_or(0)
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Explicit(s) => {
                let parts: Vec<String> = s.iter().map(u64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            SequenceSpec::Dn { d, n } => write!(f, "(d={d},n={n})"),
        }
    }
}

/// Closed-form k-area.
pub fn k_area_formula(kind: LatticeKind, k: i64) -> Result<Rational, DensityError> {
    if k <= 0 {
        return Err(DensityError::NonPositiveK(k));
    }
    Ok(k_area_value(kind, k as u64))
}

fn k_area_value(kind: LatticeKind, k: u64) -> Rational {
    let k = k as i64;
    match kind {
        LatticeKind::Hex => {
            if k % 2 == 0 {
                let j = k / 2;
                rational(3 * j * j + 3 * j + 2, 2)
            } else if k % 4 == 1 {
                let j = (k - 1) / 4;
                int(6 * j * j + 6 * j + 2)
            } else {
                let j = (k - 3) / 4;
                int(6 * j * j + 12 * j + 6)
            }
        }
        LatticeKind::Square => {
            let j = k / 2;
            if k % 2 == 0 {
                int(2 * j * j + 2 * j + 1)
            } else {
                int(2 * j * j + 4 * j + 2)
            }
        }
        LatticeKind::Tri => {
            let j = k / 2;
            if k % 2 == 0 {
                int(3 * j * j + 3 * j + 1)
            } else {
                int(3 * j * j + 6 * j + 3)
            }
        }
    }
}

/// k-area computed from its definition around `center`: the ball of radius
/// `k/2` for even k; for odd k the ball of radius `floor(k/2)` plus, for every
/// vertex u on the sphere of radius `ceil(k/2)`, the share
/// `(|N(u) ∩ ball| + |N(u) ∩ sphere| / 2) / deg(u)`.
pub fn k_area_direct(kind: LatticeKind, k: i64, center: Vertex) -> Result<Rational, DensityError> {
    if k <= 0 {
        return Err(DensityError::NonPositiveK(k));
    }
    let k = k as u64;
    if k.is_multiple_of(2) {
        return Ok(int(ball(kind, center, k / 2).len() as i64));
    }
    let inner: std::collections::HashSet<Vertex> = ball(kind, center, k / 2).into_iter().collect();
    let outer_list = sphere(kind, center, k / 2 + 1);
    let outer: std::collections::HashSet<Vertex> = outer_list.iter().copied().collect();
    let deg = kind.degree() as i64;
    let mut total = int(inner.len() as i64);
    for u in &outer_list {
        let nb = neighbors(kind, *u);
        let in_ball = nb.iter().filter(|w| inner.contains(w)).count() as i64;
        let in_sphere = nb.iter().filter(|w| outer.contains(w)).count() as i64;
        // (in_ball + in_sphere / 2) / deg
        total += rational(2 * in_ball + in_sphere, 2 * deg);
    }
    Ok(total)
}

pub fn density_upper_bound(kind: LatticeKind, i: i64) -> Result<Rational, DensityError> {
    Ok(k_area_formula(kind, i)?.recip())
}

/// Constant c with `A(i) >= c * i^2` for all i >= 1.
pub fn tail_constant(kind: LatticeKind) -> Rational {
    match kind {
        LatticeKind::Hex => rational(3, 8),
        LatticeKind::Square => rational(1, 2),
        LatticeKind::Tri => rational(3, 4),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Infeasible,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub kind: LatticeKind,
    pub spec: SequenceSpec,
    pub horizon: u64,
    pub partial_sum: Rational,
    pub tail_bound: Rational,
    pub total_bound: Rational,
}

impl InfeasibilityCertificate {
    pub fn verdict(&self) -> Verdict {
        if self.total_bound < Rational::one() {
            Verdict::Infeasible
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn is_infeasible(&self) -> bool {
        self.verdict() == Verdict::Infeasible
    }

    /// True when `partial_sum <= bound / 1000`, i.e. the sum rounded up at
    /// three decimals does not exceed a quoted value like `0.994`.
    pub fn partial_sum_at_most_milli(&self, milli: i64) -> bool {
        let scaled = &self.partial_sum * int(1000);
        ceil_int(&scaled) <= milli
    }

    /// Decimal rendering truncated (rounded toward +inf) at `digits` places.
    pub fn partial_sum_decimal_up(&self, digits: u32) -> String {
        decimal_up(&self.partial_sum, digits)
    }
}

/// `r` rounded up to `digits` decimal places, rendered as a decimal string.
pub fn decimal_up(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * Rational::from_integer(scale.clone()))
        .ceil()
        .to_integer();
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let int_part = &abs / &scale;
    let frac_part = &abs % &scale;
    let frac = format!(
        "{:0>width$}",
        frac_part.to_string(),
        width = digits as usize
    );
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac)
}

impl fmt::Display for InfeasibilityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lattice: {}", self.kind)?;
        writeln!(f, "sequence: {}", self.spec)?;
        writeln!(f, "horizon: {}", self.horizon)?;
        writeln!(
            f,
            "partial_sum: {} (<= {})",
            abbreviate(&self.partial_sum),
            self.partial_sum_decimal_up(6)
        )?;
        writeln!(f, "tail_bound: {}", fmt_rational(&self.tail_bound))?;
        writeln!(f, "total_bound: <= {}", decimal_up(&self.total_bound, 6))?;
        let v = match self.verdict() {
            Verdict::Infeasible => "INFEASIBLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        write!(f, "verdict: {v}")
    }
}

/// Exact rationals in these sums have tens of thousands of digits; show the
/// digit counts instead of the full value when they get long.
fn abbreviate(r: &Rational) -> String {
    let s = fmt_rational(r);
    if s.len() <= 80 {
        s
    } else {
        format!(
            "<{}-digit numerator>/<{}-digit denominator>",
            r.numer().to_string().len(),
            r.denom().to_string().len()
        )
    }
}

/// Density certificate for a sequence: the exact sum of `1/A(s_i)` over the
/// colors whose value is at most `horizon`, plus a majorant for the rest.
///
/// For `(d, n)` sequences the tail is `n * sum_{i > K} 1/A(i) <= n / (c K)`.
/// Explicit sequences are finite, so their tail is zero.
pub fn feasibility_sum(
    kind: LatticeKind,
    spec: &SequenceSpec,
    horizon: u64,
) -> Result<InfeasibilityCertificate, DensityError> {
    spec.validate()?;
    let start = spec.first();
    if horizon < start {
        return Err(DensityError::HorizonTooSmall { horizon, start });
    }
    let (partial_sum, tail_bound) = match spec {
        SequenceSpec::Explicit(s) => {
            let parts: Vec<u64> = s.iter().copied().filter(|&x| x <= horizon).collect();
            let partial = sum_reciprocals(kind, parts.iter().map(|&x| (x, 1)));
            let tail = if parts.len() == s.len() {
                Rational::zero()
            } else {
                // every remaining value exceeds the horizon, so 1/A(x) <= 1/(c K^2)
                let rest = (s.len() - parts.len()) as i64;
                int(rest) / (tail_constant(kind) * int(horizon as i64) * int(horizon as i64))
            };
            (partial, tail)
        }
        SequenceSpec::Dn { d, n } => {
            let partial = sum_reciprocals(kind, (*d..=horizon).map(|i| (i, *n)));
            let tail = int(*n as i64) / (tail_constant(kind) * int(horizon as i64));
            (partial, tail)
        }
    };
    let total_bound = &partial_sum + &tail_bound;
    Ok(InfeasibilityCertificate {
        kind,
        spec: spec.clone(),
        horizon,
        partial_sum,
        tail_bound,
        total_bound,
    })
}

/// Exact `sum weight / A(value)`. All terms are put over the lcm of the
/// k-area numerators, so the big-integer work is one division per term and a
/// single reduction at the end. Chunks are summed in parallel; integer
/// addition is exact, so the result does not depend on the chunking.
fn sum_reciprocals(kind: LatticeKind, terms: impl Iterator<Item = (u64, u64)>) -> Rational {
    use rayon::prelude::*;
    // w / A = (w * den) / num with small num, den
    let fracs: Vec<(u64, u64)> = terms
        .map(|(v, w)| {
            let a = k_area_value(kind, v);
            let num = a.numer().to_u64().expect("k-area numerator fits u64");
            let den = a.denom().to_u64().expect("k-area denominator fits u64");
            (w * den, num)
        })
        .collect();
    let mut lcm = BigInt::one();
    for &(_, q) in &fracs {
        let r = (&lcm % q).to_u64().expect("remainder below q");
        lcm *= q / r.gcd(&q);
    }
    let total = fracs
        .par_chunks(256)
        .map(|chunk| {
            chunk
                .iter()
                .fold(BigInt::zero(), |acc, &(p, q)| acc + (&lcm / q) * p)
        })
        .reduce(BigInt::zero, |a, b| a + b);
    Rational::new(total, lcm)
}

/// Smallest k with `sum_{i <= k} 1/A(s_i) >= 1`; any coloring needs at least
/// that many colors.
///
/// A floating-point scan proposes the crossing; the answer is the k at which
/// the exact prefix sums satisfy `S(k - 1) < 1 <= S(k)`. When the scan stays
/// below 1 by more than its accumulated rounding error, no crossing exists
/// within the cap.
pub fn density_lower_bound(
    kind: LatticeKind,
    spec: &SequenceSpec,
    cap: u64,
) -> Result<u64, DensityError> {
    spec.validate()?;
    let limit = spec.len().map_or(cap, |l| l.min(cap));
    let one = Rational::one();
    let mut guess = None;
    let mut acc = 0.0f64;
    for i in 1..=limit {
        let a = k_area_value(kind, spec.term(i).expect("index within length"));
        acc += 1.0 / a.to_f64().expect("k-area is a small rational");
        if acc >= 1.0 {
            guess = Some(i);
            break;
        }
    }
    let mut k = match guess {
        Some(k) => k,
        // each step adds at most 2 ulp of relative error to a sum below 1
        None if acc < 1.0 - 4.0 * f64::EPSILON * limit as f64 => {
            return Err(DensityError::NoFiniteBound { cap: limit })
        }
        None => limit,
    };
    while k < limit && prefix_sum(kind, spec, k) < one {
        k += 1;
    }
    if prefix_sum(kind, spec, k) < one {
        return Err(DensityError::NoFiniteBound { cap: limit });
    }
    while k > 1 && prefix_sum(kind, spec, k - 1) >= one {
        k -= 1;
    }
    Ok(k)
}

/// Exact `sum_{i <= m} 1/A(s_i)`.
fn prefix_sum(kind: LatticeKind, spec: &SequenceSpec, m: u64) -> Rational {
    match spec {
        SequenceSpec::Explicit(s) => {
            sum_reciprocals(kind, s.iter().take(m as usize).map(|&x| (x, 1)))
        }
        SequenceSpec::Dn { d, n } => {
            let (full, rest) = (m / n, m % n);
            let groups = (0..full).map(|j| (d + j, *n));
            let last = (rest > 0).then_some((d + full, rest));
            sum_reciprocals(kind, groups.chain(last))
        }
    }
}
