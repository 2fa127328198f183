//! Known simulation relations among 2-state RLEMs.

use std::fmt;

use crate::classify::{classify_degeneracy, DegeneracyLabel};
use crate::renaming::canonical_serial;
use crate::table::{MoveTable, RlemId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    CanSimulate,
    CannotSimulate,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Universality {
    Universal,
    NonUniversal,
    Unknown,
    /// Equivalent to wires or to a smaller element.
    Degenerate,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::CanSimulate => "CanSimulate",
            Relation::CannotSimulate => "CannotSimulate",
            Relation::Unknown => "Unknown",
        })
    }
}

impl fmt::Display for Universality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Universality::Universal => "Universal",
            Universality::NonUniversal => "NonUniversal",
            Universality::Unknown => "Unknown",
            Universality::Degenerate => "Degenerate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fact {
    pub from: RlemId,
    pub to: RlemId,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    pub facts: Vec<Fact>,
    /// Sets of elements that are universal together.
    pub universal_pairs: Vec<[RlemId; 2]>,
}

const fn id(serial: u64) -> RlemId {
    RlemId { k: 2, serial }
}

pub const TWO_STATE_TWO_SYMBOL: [RlemId; 4] = [id(2), id(3), id(4), id(17)];

pub fn hierarchy() -> Hierarchy {
    let mut facts = Vec::new();
    let mut add = |from, to, relation| facts.push(Fact { from: id(from), to: id(to), relation });
    for s in [3, 4, 17] {
        add(s, 2, Relation::CanSimulate);
        add(2, s, Relation::CannotSimulate);
    }
    for (a, b) in [(3, 4), (3, 17), (4, 3), (4, 17)] {
        add(a, b, Relation::CannotSimulate);
    }
    Hierarchy { facts, universal_pairs: vec![[id(3), id(4)], [id(3), id(17)], [id(4), id(17)]] }
}

impl Hierarchy {
    pub fn universality(&self, t: &MoveTable) -> Universality {
        if !classify_degeneracy(t).is_nondegenerate() {
            return Universality::Degenerate;
        }
        if t.k() > 2 {
            return Universality::Universal;
        }
        match canonical_serial(t).serial {
            2..=4 => Universality::NonUniversal,
            _ => Universality::Unknown,
        }
    }

    /// Whether `a` can simulate `b`.
    pub fn query(&self, a: &MoveTable, b: &MoveTable) -> Relation {
        let (ia, ib) = (canonical_serial(a), canonical_serial(b));
        if ia == ib || self.universality(a) == Universality::Universal {
            return Relation::CanSimulate;
        }
        if self.universality(b) == Universality::Universal && self.universality(a) == Universality::NonUniversal {
            return Relation::CannotSimulate;
        }
        self.facts.iter().find(|f| f.from == ia && f.to == ib).map_or(Relation::Unknown, |f| f.relation)
    }

    /// Whether the given elements together are known to be universal.
    pub fn set_universality(&self, set: &[MoveTable]) -> Universality {
        let us: Vec<Universality> = set.iter().map(|t| self.universality(t)).collect();
        if us.contains(&Universality::Universal) {
            return Universality::Universal;
        }
        let ids: Vec<RlemId> = set.iter().map(canonical_serial).collect();
        if self.universal_pairs.iter().any(|p| ids.contains(&p[0]) && ids.contains(&p[1])) {
            return Universality::Universal;
        }
        // 2-2 and wires add nothing that 2-3, 2-4 or 2-17 lack
        let strong: Vec<&MoveTable> = set
            .iter()
            .filter(|t| classify_degeneracy(t) != DegeneracyLabel::EqWires && canonical_serial(t) != id(2))
            .collect();
        match strong.as_slice() {
            [] if !set.is_empty() => Universality::NonUniversal,
            [one] => self.universality(one),
            _ => Universality::Unknown,
        }
    }
}
