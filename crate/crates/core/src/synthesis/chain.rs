//! Evidence that a non-degenerate RLEM with three or more symbols is
//! universal: a feedback descent to three symbols, each step checked as a
//! one-element circuit, followed by a library construction of the rotary
//! element from the final element's class.

use thiserror::Error;

use super::library::{Library, LinkStatus};
use crate::circuit::{ElementSpec, Netlist, SimulationMaps, Sink, Source, DEFAULT_MAX_STEPS};
use crate::classify::{classify_degeneracy, DegeneracyLabel};
use crate::feedback::{nondegenerate_feedback, FeedbackOutcome, FeedbackSpec};
use crate::renaming::canonical_serial;
use crate::table::{MoveTable, RlemId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("RLEM {0} is degenerate ({1})")]
    Degenerate(RlemId, DegeneracyLabel),
    #[error("RLEM {0} has fewer than 3 symbols")]
    TooFewSymbols(RlemId),
    #[error("no non-degenerate feedback for {0}")]
    NoFeedback(RlemId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descent {
    pub from: MoveTable,
    pub spec: FeedbackSpec,
    pub residual: MoveTable,
    /// Canonical id of the residual's class.
    pub class: RlemId,
    /// The looped element simulates the residual.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub start: RlemId,
    pub descent: Vec<Descent>,
    /// Canonical id of the three-symbol element reached.
    pub base: RlemId,
    /// Construction of the rotary element from `base`.
    pub to_rotary: LinkStatus,
}

impl ChainReport {
    pub fn fully_verified(&self) -> bool {
        self.descent.iter().all(|d| d.verified) && self.to_rotary.is_verified()
    }
}

/// The one-element circuit closing output `spec.out_index` onto input
/// `spec.in_index`.
pub fn feedback_netlist(t: &MoveTable, spec: FeedbackSpec) -> Netlist {
    let k = t.k();
    let mut n = Netlist::new();
    let e = n.add_element("m", ElementSpec::Perm(t.clone()), 0);
    for a in (0..k).filter(|&a| a != spec.in_index) {
        let i = n.add_input(MoveTable::input_name(a));
        n.wire(Source::Input(i), Sink::In(e, a));
    }
    for s in (0..k).filter(|&s| s != spec.out_index) {
        let o = n.add_output(MoveTable::output_name(s));
        n.wire(Source::Out(e, s), Sink::Output(o));
    }
    n.wire(Source::Out(e, spec.out_index), Sink::In(e, spec.in_index));
    n.state_map = vec![vec![0], vec![1]];
    n
}

fn verify_descent(t: &MoveTable, spec: FeedbackSpec, residual: &MoveTable) -> bool {
    let n = feedback_netlist(t, spec);
    let Ok(c) = n.compile() else { return false };
    let r = residual.to_rsm();
    c.verify_simulation(&r, &SimulationMaps::positional(&c, &r), DEFAULT_MAX_STEPS).is_ok()
}

pub fn universality_chain(t: &MoveTable, library: &Library) -> Result<ChainReport, ChainError> {
    let start = t.id();
    if t.k() < 3 {
        return Err(ChainError::TooFewSymbols(start));
    }
    let label = classify_degeneracy(t);
    if !label.is_nondegenerate() {
        return Err(ChainError::Degenerate(start, label));
    }
    let mut cur = t.clone();
    let mut descent = Vec::new();
    while cur.k() > 3 {
        let entry = nondegenerate_feedback(&cur)
            .expect("k > 3")
            .ok_or(ChainError::NoFeedback(cur.id()))?;
        let FeedbackOutcome::Residual(residual) = entry.outcome else { unreachable!("labelled entries are residuals") };
        let verified = verify_descent(&cur, entry.spec, &residual);
        descent.push(Descent {
            from: cur.clone(),
            spec: entry.spec,
            class: canonical_serial(&residual),
            residual: residual.clone(),
            verified,
        });
        cur = residual;
    }
    let base = canonical_serial(&cur);
    let rotary = canonical_serial(&MoveTable::rotary_element());
    Ok(ChainReport { start, descent, base, to_rotary: library.check(rotary, &[base]) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::census;

    #[test]
    fn every_four_symbol_class_descends() {
        let lib = Library::new("/nonexistent");
        for id in census(4).nondegenerate() {
            let r = universality_chain(&MoveTable::from_id(id), &lib).unwrap();
            assert_eq!(r.descent.len(), 1, "{id}");
            assert!(r.descent[0].verified);
            assert_eq!(classify_degeneracy(&MoveTable::from_id(r.base)), DegeneracyLabel::NonDegenerate);
            assert!(matches!(r.to_rotary, LinkStatus::Missing(_)));
        }
    }

    #[test]
    fn three_symbol_start_and_rejections() {
        let lib = Library::new("/nonexistent");
        let r = universality_chain(&MoveTable::from_serial(3, 10).unwrap(), &lib).unwrap();
        assert!(r.descent.is_empty());
        assert_eq!(r.base, RlemId { k: 3, serial: 10 });
        let e = universality_chain(&MoveTable::from_serial(3, 3).unwrap(), &lib).unwrap_err();
        assert!(matches!(e, ChainError::Degenerate(..)));
        assert!(universality_chain(&MoveTable::from_serial(2, 3).unwrap(), &lib).is_err());
    }

    #[test]
    fn loop_netlists_simulate_residuals() {
        let t = MoveTable::from_serial(4, 289).unwrap();
        for s in crate::feedback::feedback_survey(&t).unwrap() {
            if let FeedbackOutcome::Residual(r) = s.outcome {
                assert!(verify_descent(&t, s.spec, &r), "{}", s.spec);
            }
        }
    }
}
