//! Upper-bound checkers, distance-coloring formulas, and the (d,n) tables.

mod corollary;
mod tables;

pub use corollary::{
    corollary_bound, corollary_rule, CorollaryError, CorollaryRule, CorollaryWitness, CutOption,
};
pub use tables::{
    published_tables, reproduce_tables, CellCheck, Provenance, PublishedCell, PublishedValue,
    ReproducedCell, TableReport,
};

use serde::{Deserialize, Serialize};

use crate::density::{ceil_int, k_area_formula, rational};
use crate::lattice::LatticeKind;

/// Fewest colors in a coloring where every color class is a d-packing,
/// by the classical closed forms.
pub fn distance_chromatic_n(kind: LatticeKind, d: u64) -> u64 {
    assert!(d >= 1, "d must be positive");
    let d = d as i64;
    match kind {
        LatticeKind::Hex if d % 2 == 1 => {
            ceil_int(&(rational(3, 8) * rational((d + 1) * (d + 1), 1))) as u64
        }
        // 3/8 (d + 4/3)^2 = (3d + 4)^2 / 24
        LatticeKind::Hex => ceil_int(&rational((3 * d + 4) * (3 * d + 4), 24)) as u64,
        LatticeKind::Square if d % 2 == 1 => ((d + 1) * (d + 1) / 2) as u64,
        LatticeKind::Square => (((d + 1) * (d + 1) + 1) / 2) as u64,
        LatticeKind::Tri => ceil_int(&rational(3 * (d + 1) * (d + 1), 4)) as u64,
    }
}

/// The closed form next to what the shipped constructions and the density
/// bound say about the same quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCheck {
    pub kind: LatticeKind,
    pub d: u64,
    pub formula: u64,
    /// ceil(A(d)): no fewer d-packings can cover the lattice.
    pub density_floor: u64,
    /// Colors used by a shipped partition into d-packings, if any.
    pub partition: Option<u64>,
    /// Set when the formula disagrees with a verified partition or with the
    /// density floor.
    pub flag: Option<String>,
}

pub fn distance_check(kind: LatticeKind, d: u64) -> DistanceCheck {
    let formula = distance_chromatic_n(kind, d);
    let density_floor = ceil_int(&k_area_formula(kind, d as i64).expect("d >= 1")) as u64;
    let partition = crate::packings::base_packing(kind, d).map(|x| x.index());
    let mut flag = None;
    if let Some(p) = partition {
        if p < formula {
            flag = Some(format!(
                "formula gives {formula} but {p} {d}-packings partition the {} lattice",
                kind.name()
            ));
        }
    }
    if formula < density_floor {
        flag = Some(format!(
            "formula gives {formula}, below the density floor {density_floor}"
        ));
    }
    DistanceCheck {
        kind,
        d,
        formula,
        density_floor,
        partition,
        flag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use LatticeKind::*;

    #[test]
    fn hex_even_case() {
        assert_eq!(distance_chromatic_n(Hex, 4), 11);
        assert_eq!(distance_chromatic_n(Hex, 2), 5);
        assert!(distance_check(Hex, 2).flag.is_some());
        assert!(distance_check(Hex, 4).flag.is_none());
    }
}
