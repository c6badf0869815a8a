//! Sublattice cosets as packings, their certificates, and subdivision schemes.

mod catalog;

pub use catalog::{base_packing, find_scheme, scheme_catalog, CatalogEntry, Params};

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::{rational, Rational};
use crate::lattice::{distance, LatticeKind, Vertex, Window};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PackingError {
    #[error("degenerate generators {g1} and {g2}")]
    Degenerate { g1: Vertex, g2: Vertex },
    #[error(
        "window too small: side {side} < required {required} (4 x largest generator coordinate)"
    )]
    WindowTooSmall { side: i64, required: i64 },
    #[error("{0} is not a sublattice of {1}")]
    NotSublattice(String, String),
    #[error("incompatible composition: {0}")]
    Incompatible(String),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("scheme `{id}` does not accept {what}")]
    BadParams { id: String, what: String },
}

fn det(g1: Vertex, g2: Vertex) -> i64 {
    g1.a * g2.b - g1.b * g2.a
}

/// The coset `{x g1 + y g2 + offset}` of a full-rank sublattice of Z^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearPackingSpec {
    pub kind: LatticeKind,
    pub g1: Vertex,
    pub g2: Vertex,
    pub offset: Vertex,
}

impl LinearPackingSpec {
    pub fn new(
        kind: LatticeKind,
        g1: Vertex,
        g2: Vertex,
        offset: Vertex,
    ) -> Result<Self, PackingError> {
        if det(g1, g2) == 0 {
            return Err(PackingError::Degenerate { g1, g2 });
        }
        Ok(LinearPackingSpec {
            kind,
            g1,
            g2,
            offset,
        })
    }

    /// Shorthand for specs that are known to be nondegenerate.
    pub fn of(kind: LatticeKind, g1: (i64, i64), g2: (i64, i64)) -> Self {
        Self::new(
            kind,
            Vertex::new(g1.0, g1.1),
            Vertex::new(g2.0, g2.1),
            Vertex::ORIGIN,
        )
        .expect("nondegenerate generators")
    }

    pub fn whole(kind: LatticeKind) -> Self {
        Self::of(kind, (1, 0), (0, 1))
    }

    pub fn det(&self) -> i64 {
        det(self.g1, self.g2)
    }

    pub fn index(&self) -> u64 {
        self.det().unsigned_abs()
    }

    pub fn density(&self) -> Rational {
        rational(1, self.index() as i64)
    }

    pub fn translated(&self, t: Vertex) -> Self {
        LinearPackingSpec {
            offset: self.offset + t,
            ..*self
        }
    }

    pub fn with_offset(&self, offset: Vertex) -> Self {
        LinearPackingSpec { offset, ..*self }
    }

    /// Integer coordinates of a lattice vector in this basis.
    pub fn lattice_coords(&self, w: Vertex) -> Option<(i64, i64)> {
        let d = self.det();
        let x = det(w, self.g2);
        let y = det(self.g1, w);
        if x % d == 0 && y % d == 0 {
            Some((x / d, y / d))
        } else {
            None
        }
    }

    pub fn lattice_contains(&self, w: Vertex) -> bool {
        self.lattice_coords(w).is_some()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.lattice_contains(v - self.offset)
    }

    /// Same underlying lattice (offsets ignored).
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.index() == other.index() && self.contains_lattice(other)
    }

    /// `other`'s lattice is a sublattice of this one.
    pub fn contains_lattice(&self, other: &Self) -> bool {
        self.lattice_contains(other.g1) && self.lattice_contains(other.g2)
    }

    /// Same point set.
    pub fn same_coset(&self, other: &Self) -> bool {
        self.same_lattice(other) && self.contains(other.offset)
    }

    pub fn max_coord(&self) -> i64 {
        self.g1.max_abs().max(self.g2.max_abs())
    }

    /// Hexagonal sets containing both vertex types: some generator has an odd
    /// coordinate sum.
    pub fn mixed_types(&self) -> bool {
        !(self.g1.is_even() && self.g2.is_even())
    }

    /// Points of this coset inside the window, row-major.
    pub fn enumerate(&self, window: &Window) -> Vec<Vertex> {
        window.vertices().filter(|v| self.contains(*v)).collect()
    }

    /// Base points whose distances to their translates cover every pair in
    /// the set: the offset, plus a point of the other hexagonal type when the
    /// set has both.
    fn base_points(&self) -> Vec<Vertex> {
        let mut pts = vec![self.offset];
        if self.kind == LatticeKind::Hex && self.mixed_types() {
            let odd = if self.g1.is_even() { self.g2 } else { self.g1 };
            pts.push(self.offset + odd);
        }
        pts
    }

    /// Exact minimum distance between two distinct points of the set.
    ///
    /// Every kind has `distance >= max(|da|, |db|)`, so once a candidate
    /// `best` is known only lattice vectors with sup-norm below it matter,
    /// and Cramer's rule bounds their coefficients.
    pub fn min_pair_distance(&self, claimed_radius: u64) -> PackingCertificate {
        let bases = self.base_points();
        let dist_of = |w: Vertex| -> u64 {
            bases
                .iter()
                .map(|&p| distance(self.kind, p, p + w))
                .min()
                .expect("at least one base point")
        };
        let seeds = [self.g1, self.g2, self.g1 + self.g2, self.g1 - self.g2];
        let mut best = seeds.iter().map(|&w| dist_of(w)).min().expect("seeds");
        let reach = best as i64 - 1;
        let d = self.det().abs();
        let x_max = (reach * (self.g2.a.abs() + self.g2.b.abs())) / d + 1;
        let y_max = (reach * (self.g1.a.abs() + self.g1.b.abs())) / d + 1;
        for x in -x_max..=x_max {
            for y in -y_max..=y_max {
                if x == 0 && y == 0 {
                    continue;
                }
                let w = x * self.g1 + y * self.g2;
                if w.max_abs() >= best as i64 {
                    continue;
                }
                best = best.min(dist_of(w));
            }
        }
        PackingCertificate {
            spec: *self,
            claimed_radius,
            min_distance: best,
            search_radius_used: x_max.max(y_max) as u64,
        }
    }
}

impl fmt::Display for LinearPackingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<{},{}>", self.kind, self.g1, self.g2)?;
        if self.offset != Vertex::ORIGIN {
            write!(f, "+{}", self.offset)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingCertificate {
    pub spec: LinearPackingSpec,
    pub claimed_radius: u64,
    pub min_distance: u64,
    /// Largest coefficient magnitude examined.
    pub search_radius_used: u64,
}

impl PackingCertificate {
    /// An i-packing needs pairwise distance strictly greater than i.
    pub fn is_valid(&self) -> bool {
        self.min_distance > self.claimed_radius
    }

    /// Largest i for which the set is an i-packing.
    pub fn certified_radius(&self) -> u64 {
        self.min_distance - 1
    }
}

/// Basis `(e1, f), (0, e2)` with `e1, e2 > 0` of the lattice spanned by the
/// given vectors.
pub fn hermite_basis(vectors: &[Vertex]) -> Option<(Vertex, Vertex)> {
    let mut rows: Vec<Vertex> = vectors
        .iter()
        .copied()
        .filter(|v| *v != Vertex::ORIGIN)
        .collect();
    // fold everything into a row with first coordinate gcd, killing the rest
    let mut pivot: Option<Vertex> = None;
    let mut second: Vec<Vertex> = Vec::new();
    for r in rows.drain(..) {
        match pivot {
            None if r.a == 0 => second.push(r),
            None => pivot = Some(r),
            Some(p) => {
                if r.a == 0 {
                    second.push(r);
                    continue;
                }
                let eg = p.a.extended_gcd(&r.a);
                let (g, u, v) = (eg.gcd, eg.x, eg.y);
                let np = u * p + v * r;
                let killed = (r.a / g) * p - (p.a / g) * r;
                debug_assert_eq!(np.a, g);
                debug_assert_eq!(killed.a, 0);
                pivot = Some(np);
                second.push(killed);
            }
        }
    }
    let mut p = pivot?;
    let e2 = second.iter().fold(0i64, |acc, r| acc.gcd(&r.b));
    if e2 == 0 {
        return None;
    }
    if p.a < 0 {
        p = -p;
    }
    let f = p.b.rem_euclid(e2);
    Some((Vertex::new(p.a, f), Vertex::new(0, e2)))
}

/// Representatives of the cosets of `child`'s lattice inside `parent`'s
/// lattice, ordered lexicographically by parent coordinates.
pub fn coset_representatives(
    parent: &LinearPackingSpec,
    child: &LinearPackingSpec,
) -> Result<Vec<Vertex>, PackingError> {
    let to_coords = |w: Vertex| -> Result<Vertex, PackingError> {
        parent
            .lattice_coords(w)
            .map(|(x, y)| Vertex::new(x, y))
            .ok_or_else(|| PackingError::NotSublattice(child.to_string(), parent.to_string()))
    };
    let c1 = to_coords(child.g1)?;
    let c2 = to_coords(child.g2)?;
    let (h1, h2) = hermite_basis(&[c1, c2]).ok_or(PackingError::Degenerate {
        g1: child.g1,
        g2: child.g2,
    })?;
    let mut reps = Vec::with_capacity((h1.a * h2.b) as usize);
    for i in 0..h1.a {
        for j in 0..h2.b {
            reps.push(i * parent.g1 + j * parent.g2);
        }
    }
    Ok(reps)
}

/// Sum of two lattices (offsets ignored), returned with zero offset.
pub fn lattice_sum(a: &LinearPackingSpec, b: &LinearPackingSpec) -> LinearPackingSpec {
    let (h1, h2) = hermite_basis(&[a.g1, a.g2, b.g1, b.g2]).expect("full-rank sum");
    LinearPackingSpec::new(a.kind, h1, h2, Vertex::ORIGIN).expect("full-rank sum")
}

/// Index-`n` sublattices of `parent`'s lattice (zero offset), one per Hermite
/// normal form.
pub fn index_sublattices(parent: &LinearPackingSpec, n: i64) -> Vec<LinearPackingSpec> {
    let mut out = Vec::new();
    for a in 1..=n {
        if n % a != 0 {
            continue;
        }
        let c = n / a;
        for b in 0..c {
            let g1 = a * parent.g1 + b * parent.g2;
            let g2 = c * parent.g2;
            out.push(
                LinearPackingSpec::new(parent.kind, g1, g2, Vertex::ORIGIN).expect("full rank"),
            );
        }
    }
    out
}

/// Translated copies of one child lattice inside a scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildFamily {
    pub child: LinearPackingSpec,
    pub radius: u64,
    pub translations: Vec<Vertex>,
}

impl ChildFamily {
    pub fn copies(&self) -> impl Iterator<Item = LinearPackingSpec> + '_ {
        self.translations
            .iter()
            .map(move |t| self.child.translated(*t))
    }
}

/// A partition of `parent` into translated copies of one or more child
/// packings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionScheme {
    pub name: String,
    pub parent: LinearPackingSpec,
    pub families: Vec<ChildFamily>,
    pub claimed_count: usize,
}

impl SubdivisionScheme {
    pub fn single(
        name: impl Into<String>,
        parent: LinearPackingSpec,
        child: LinearPackingSpec,
        radius: u64,
        translations: Vec<Vertex>,
    ) -> Self {
        let claimed_count = translations.len();
        SubdivisionScheme {
            name: name.into(),
            parent,
            families: vec![ChildFamily {
                child,
                radius,
                translations,
            }],
            claimed_count,
        }
    }

    /// The translations are computed as coset representatives.
    pub fn by_cosets(
        name: impl Into<String>,
        parent: LinearPackingSpec,
        child: LinearPackingSpec,
        radius: u64,
    ) -> Result<Self, PackingError> {
        let child = child.with_offset(parent.offset);
        let reps = coset_representatives(&parent, &child)?;
        Ok(Self::single(name, parent, child, radius, reps))
    }

    pub fn copy_count(&self) -> usize {
        self.families.iter().map(|f| f.translations.len()).sum()
    }

    /// Child copies with their claimed radii, in family order.
    pub fn children(&self) -> Vec<(LinearPackingSpec, u64)> {
        self.families
            .iter()
            .flat_map(|f| f.copies().map(move |c| (c, f.radius)))
            .collect()
    }

    /// Largest absolute generator coordinate over parent and children.
    pub fn period(&self) -> i64 {
        self.families
            .iter()
            .map(|f| f.child.max_coord())
            .fold(self.parent.max_coord(), i64::max)
    }

    pub fn density_identity_holds(&self) -> bool {
        let total = self
            .families
            .iter()
            .map(|f| rational(f.translations.len() as i64, f.child.index() as i64))
            .fold(rational(0, 1), |a, b| a + b);
        total == self.parent.density()
    }

    pub fn certificates(&self) -> Vec<PackingCertificate> {
        self.families
            .iter()
            .map(|f| f.child.min_pair_distance(f.radius))
            .collect()
    }

    /// Algebraic partition check: every copy lies in the parent, copies are
    /// pairwise disjoint, and densities add up. Disjoint periodic subsets of
    /// the parent with full total density leave a periodic remainder of
    /// density zero, which is empty.
    pub fn verify_exact(&self) -> PartitionReport {
        let mut problems = Vec::new();
        if self.copy_count() != self.claimed_count {
            problems.push(format!(
                "claimed {} copies, found {}",
                self.claimed_count,
                self.copy_count()
            ));
        }
        for f in &self.families {
            if !self.parent.contains_lattice(&f.child) {
                problems.push(format!(
                    "{} is not a sublattice of {}",
                    f.child, self.parent
                ));
                continue;
            }
            for c in f.copies() {
                if !self.parent.contains(c.offset) {
                    problems.push(format!("copy {c} leaves the parent"));
                }
            }
        }
        let copies: Vec<LinearPackingSpec> =
            self.families.iter().flat_map(|f| f.copies()).collect();
        for i in 0..copies.len() {
            for j in i + 1..copies.len() {
                let sum = lattice_sum(&copies[i], &copies[j]);
                if sum.lattice_contains(copies[i].offset - copies[j].offset) {
                    problems.push(format!("copies {} and {} intersect", copies[i], copies[j]));
                }
            }
        }
        if !self.density_identity_holds() {
            problems.push("child densities do not add up to the parent density".into());
        }
        PartitionReport {
            ok: problems.is_empty(),
            checked: copies.len(),
            problems,
        }
    }

    /// Window check: inside the window shrunk by the scheme period, every
    /// parent point lies in exactly one copy and no copy point lies outside
    /// the parent.
    pub fn verify_partition(&self, window: &Window) -> Result<PartitionReport, PackingError> {
        let p = self.period();
        let required = 4 * p;
        if window.min_side() < required {
            return Err(PackingError::WindowTooSmall {
                side: window.min_side(),
                required,
            });
        }
        let inner = window.shrink(p).expect("side >= 4p leaves a nonempty core");
        let copies: Vec<LinearPackingSpec> =
            self.families.iter().flat_map(|f| f.copies()).collect();
        use rayon::prelude::*;
        let rows: Vec<i64> = (inner.b_min..=inner.b_max).collect();
        let violation = rows.par_iter().find_map_first(|&b| {
            for a in inner.a_min..=inner.a_max {
                let v = Vertex::new(a, b);
                let hits = copies.iter().filter(|c| c.contains(v)).count();
                let in_parent = self.parent.contains(v);
                if in_parent && hits != 1 {
                    return Some(format!("parent vertex {v} covered {hits} times"));
                }
                if !in_parent && hits != 0 {
                    return Some(format!("vertex {v} outside the parent is covered"));
                }
            }
            None
        });
        let checked = (inner.width() * inner.height()) as usize;
        Ok(PartitionReport {
            ok: violation.is_none(),
            checked,
            problems: violation.into_iter().collect(),
        })
    }

    /// Default verification window: side `6 * period` around the origin.
    pub fn default_window(&self) -> Window {
        Window::centered(3 * self.period())
    }

    /// Certificates, exact partition, window partition and density identity.
    pub fn verify(&self) -> SchemeReport {
        let certificates = self.certificates();
        let exact = self.verify_exact();
        let window = self
            .verify_partition(&self.default_window())
            .expect("default window satisfies the margin rule");
        SchemeReport {
            name: self.name.clone(),
            certificates,
            exact,
            window,
            density_ok: self.density_identity_holds(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub ok: bool,
    pub checked: usize,
    pub problems: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeReport {
    pub name: String,
    pub certificates: Vec<PackingCertificate>,
    pub exact: PartitionReport,
    pub window: PartitionReport,
    pub density_ok: bool,
}

impl SchemeReport {
    pub fn passed(&self) -> bool {
        self.exact.ok
            && self.window.ok
            && self.density_ok
            && self.certificates.iter().all(PackingCertificate::is_valid)
    }
}

impl fmt::Display for SchemeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "scheme {}: {}",
            self.name,
            if self.passed() { "OK" } else { "FAILED" }
        )?;
        for c in &self.certificates {
            writeln!(
                f,
                "  child {} radius {}: min distance {} ({})",
                c.spec,
                c.claimed_radius,
                c.min_distance,
                if c.is_valid() { "ok" } else { "too close" }
            )?;
        }
        writeln!(
            f,
            "  density identity: {}",
            if self.density_ok { "ok" } else { "fails" }
        )?;
        writeln!(
            f,
            "  exact partition: {}",
            if self.exact.ok { "ok" } else { "fails" }
        )?;
        for p in &self.exact.problems {
            writeln!(f, "    {p}")?;
        }
        write!(
            f,
            "  window partition ({} vertices): {}",
            self.window.checked,
            if self.window.ok { "ok" } else { "fails" }
        )?;
        for p in &self.window.problems {
            write!(f, "\n    {p}")?;
        }
        Ok(())
    }
}

/// Replaces copy `index` (flattened family order) of `outer` by the children
/// of `inner`, which must subdivide a translate of that copy.
pub fn compose(
    outer: &SubdivisionScheme,
    index: usize,
    inner: &SubdivisionScheme,
) -> Result<SubdivisionScheme, PackingError> {
    compose_many(outer, &[(index, inner)])
}

/// Several replacements at once; indices refer to `outer`'s copies.
pub fn compose_many(
    outer: &SubdivisionScheme,
    replacements: &[(usize, &SubdivisionScheme)],
) -> Result<SubdivisionScheme, PackingError> {
    let copies: Vec<(LinearPackingSpec, u64, usize)> = outer
        .families
        .iter()
        .enumerate()
        .flat_map(|(fi, f)| f.copies().map(move |c| (c, f.radius, fi)))
        .collect();
    let mut replaced = vec![None; copies.len()];
    for (idx, inner) in replacements {
        let (copy, _, _) = copies
            .get(*idx)
            .ok_or_else(|| PackingError::Incompatible(format!("copy index {idx} out of range")))?;
        if !inner.parent.same_lattice(copy) {
            return Err(PackingError::Incompatible(format!(
                "{} subdivides {}, not {}",
                inner.name, inner.parent, copy
            )));
        }
        if replaced[*idx].is_some() {
            return Err(PackingError::Incompatible(format!(
                "copy {idx} replaced twice"
            )));
        }
        replaced[*idx] = Some((*inner, copy.offset - inner.parent.offset));
    }
    let mut families: Vec<ChildFamily> = Vec::new();
    let mut push = |child: LinearPackingSpec, radius: u64, t: Vertex| {
        let base = child.with_offset(Vertex::ORIGIN);
        let offset = child.offset + t;
        if let Some(f) = families
            .iter_mut()
            .find(|f| f.child == base && f.radius == radius)
        {
            f.translations.push(offset);
        } else {
            families.push(ChildFamily {
                child: base,
                radius,
                translations: vec![offset],
            });
        }
    };
    for (i, (copy, radius, _)) in copies.iter().enumerate() {
        match &replaced[i] {
            None => push(copy.with_offset(Vertex::ORIGIN), *radius, copy.offset),
            Some((inner, shift)) => {
                for f in &inner.families {
                    for t in &f.translations {
                        push(f.child, f.radius, *t + *shift);
                    }
                }
            }
        }
    }
    let names: Vec<&str> = replacements.iter().map(|(_, s)| s.name.as_str()).collect();
    let scheme = SubdivisionScheme {
        name: format!("{} ∘ [{}]", outer.name, names.join(", ")),
        parent: outer.parent,
        claimed_count: families.iter().map(|f| f.translations.len()).sum(),
        families,
    };
    let report = scheme.verify_exact();
    if !report.ok {
        return Err(PackingError::Incompatible(report.problems.join("; ")));
    }
    Ok(scheme)
}
