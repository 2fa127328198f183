//! Degeneracy classification and the census of equivalence classes.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::renaming::canonical_serial;
use crate::table::{factorial, MoveTable, RlemId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegeneracyLabel {
    NonDegenerate,
    /// Behaves like plain connecting wires.
    EqWires,
    /// Equivalent to the non-degenerate RLEM `reduced` with fewer symbols.
    EqSmaller(RlemId),
}

impl DegeneracyLabel {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, DegeneracyLabel::NonDegenerate)
    }
}

impl fmt::Display for DegeneracyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegeneracyLabel::NonDegenerate => f.write_str("non-degenerate"),
            DegeneracyLabel::EqWires => f.write_str("eq. to wires"),
            DegeneracyLabel::EqSmaller(id) => write!(f, "eq. to {id}"),
        }
    }
}

/// Inputs `a` with `δ(q, a) = (q, s)` for both states and a common `s`.
pub fn wire_pairs(t: &MoveTable) -> Vec<(usize, usize)> {
    (0..t.k())
        .filter_map(|a| {
            let (q0, s0) = t.step(0, a);
            let (q1, s1) = t.step(1, a);
            (q0 == 0 && q1 == 1 && s0 == s1).then_some((a, s0))
        })
        .collect()
}

/// The table with all wire pairs deleted, symbols renumbered in order.
pub fn strip_wires(t: &MoveTable) -> Option<MoveTable> {
    let wires = wire_pairs(t);
    let k = t.k();
    let keep_in: Vec<usize> = (0..k).filter(|a| !wires.iter().any(|w| w.0 == *a)).collect();
    let keep_out: Vec<usize> = (0..k).filter(|s| !wires.iter().any(|w| w.1 == *s)).collect();
    let kk = keep_in.len();
    if kk == 0 {
        return None;
    }
    let mut out_index = vec![usize::MAX; k];
    for (i, &s) in keep_out.iter().enumerate() {
        out_index[s] = i;
    }
    let mut entries = Vec::with_capacity(2 * kk);
    for q in 0..2 {
        for &a in &keep_in {
            let (q2, s) = t.step(q, a);
            entries.push((q2 * kk + out_index[s]) as u8);
        }
    }
    Some(MoveTable::new(kk, entries).expect("wire pairs detach cleanly"))
}

fn states_equivalent(t: &MoveTable) -> bool {
    let b = t.to_rsm().equivalence_classes();
    b[0] == b[1]
}

pub fn classify_degeneracy(t: &MoveTable) -> DegeneracyLabel {
    if t.k() <= 1 {
        return DegeneracyLabel::EqWires;
    }
    let residual = match strip_wires(t) {
        Some(r) if r.k() >= 2 => r,
        _ => return DegeneracyLabel::EqWires,
    };
    if residual.never_changes_state() || states_equivalent(&residual) {
        return DegeneracyLabel::EqWires;
    }
    if residual.k() < t.k() {
        DegeneracyLabel::EqSmaller(canonical_serial(&residual))
    } else {
        DegeneracyLabel::NonDegenerate
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInfo {
    pub representative: RlemId,
    pub size: usize,
    pub label: DegeneracyLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub k: usize,
    pub total: u64,
    pub classes: Vec<ClassInfo>,
}

impl Census {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn nondegenerate(&self) -> Vec<RlemId> {
        self.classes
            .iter()
            .filter(|c| c.label.is_nondegenerate())
            .map(|c| c.representative)
            .collect()
    }
}

/// Enumerates all `(2k)!` tables and groups them by canonical serial.
pub fn census(k: usize) -> Census {
    let total = factorial(2 * k);
    let chunk = 4096u64;
    let parts: Vec<BTreeMap<u64, usize>> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut m = BTreeMap::new();
            for s in c * chunk..((c + 1) * chunk).min(total) {
                let t = MoveTable::from_id(RlemId { k, serial: s });
                *m.entry(canonical_serial(&t).serial).or_insert(0) += 1;
            }
            m
        })
        .collect();
    let mut sizes: BTreeMap<u64, usize> = BTreeMap::new();
    for m in parts {
        for (s, n) in m {
            *sizes.entry(s).or_insert(0) += n;
        }
    }
    let classes = sizes
        .into_iter()
        .map(|(serial, size)| {
            let id = RlemId { k, serial };
            ClassInfo {
                representative: id,
                size,
                label: classify_degeneracy(&MoveTable::from_id(id)),
            }
        })
        .collect();
    Census { k, total, classes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(k: usize, s: u64) -> DegeneracyLabel {
        classify_degeneracy(&MoveTable::from_serial(k, s).unwrap())
    }

    #[test]
    fn named_examples() {
        assert_eq!(label(3, 3), DegeneracyLabel::EqWires);
        assert_eq!(label(3, 6), DegeneracyLabel::EqSmaller(RlemId { k: 2, serial: 2 }));
        assert_eq!(label(2, 17), DegeneracyLabel::NonDegenerate);
        assert_eq!(label(3, 10), DegeneracyLabel::NonDegenerate);
        assert_eq!(label(1, 0), DegeneracyLabel::EqWires);
        assert_eq!(label(1, 1), DegeneracyLabel::EqWires);
    }

    #[test]
    fn census_k2() {
        let c = census(2);
        assert_eq!(c.total, 24);
        assert_eq!(c.class_count(), 8);
        let nd: Vec<u64> = c.nondegenerate().iter().map(|id| id.serial).collect();
        assert_eq!(nd, vec![2, 3, 4, 17]);
        assert_eq!(c.classes.iter().map(|c| c.size).sum::<usize>(), 24);
    }

    #[test]
    fn census_k3() {
        let c = census(3);
        assert_eq!(c.total, 720);
        assert_eq!(c.class_count(), 24);
        assert_eq!(c.nondegenerate().len(), 14);
        let smaller: Vec<(u64, u64)> = c
            .classes
            .iter()
            .filter_map(|ci| match ci.label {
                DegeneracyLabel::EqSmaller(id) => Some((ci.representative.serial, id.serial)),
                _ => None,
            })
            .collect();
        assert_eq!(smaller, vec![(6, 2), (11, 3), (19, 4), (95, 17)]);
    }

    #[test]
    fn wire_strip_of_identity_is_empty() {
        assert!(strip_wires(&MoveTable::identity(3).unwrap()).is_none());
    }
}
