//! Closing one output of an RLEM onto one of its inputs.

use std::fmt;

use thiserror::Error;

use crate::classify::{classify_degeneracy, DegeneracyLabel};
use crate::table::MoveTable;

/// Output `out_index` is wired back to input `in_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeedbackSpec {
    pub out_index: usize,
    pub in_index: usize,
}

impl fmt::Display for FeedbackSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}",
            MoveTable::output_name(self.out_index),
            MoveTable::input_name(self.in_index)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeedbackError {
    #[error("feedback needs at least 2 symbols")]
    TooFewSymbols,
    #[error("feedback index out of range for k={0}")]
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeedbackOutcome {
    Residual(MoveTable),
    /// The signal circulates in the loop forever for some external input.
    Divergent,
}

/// Re-feeds the looped output until the signal leaves on another line.
pub fn feedback_reduce(t: &MoveTable, fb: FeedbackSpec) -> Result<FeedbackOutcome, FeedbackError> {
    let k = t.k();
    if k < 2 {
        return Err(FeedbackError::TooFewSymbols);
    }
    if fb.out_index >= k || fb.in_index >= k {
        return Err(FeedbackError::Index(k));
    }
    let keep_in: Vec<usize> = (0..k).filter(|&a| a != fb.in_index).collect();
    let out_pos = |s: usize| if s < fb.out_index { s } else { s - 1 };
    let kk = k - 1;
    let mut entries = Vec::with_capacity(2 * kk);
    for q in 0..2 {
        for &a in &keep_in {
            let (mut state, mut out) = t.step(q, a);
            let mut visited = [false; 2];
            while out == fb.out_index {
                if visited[state] {
                    return Ok(FeedbackOutcome::Divergent);
                }
                visited[state] = true;
                (state, out) = t.step(state, fb.in_index);
            }
            entries.push((state * kk + out_pos(out)) as u8);
        }
    }
    let residual = MoveTable::new(kk, entries).expect("feedback residual of a bijection is a bijection");
    Ok(FeedbackOutcome::Residual(residual))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyEntry {
    pub spec: FeedbackSpec,
    pub outcome: FeedbackOutcome,
    /// `None` for divergent loops.
    pub label: Option<DegeneracyLabel>,
}

/// All `k²` feedback choices with the class of each residual.
pub fn feedback_survey(t: &MoveTable) -> Result<Vec<SurveyEntry>, FeedbackError> {
    let k = t.k();
    let mut out = Vec::with_capacity(k * k);
    for out_index in 0..k {
        for in_index in 0..k {
            let spec = FeedbackSpec { out_index, in_index };
            let outcome = feedback_reduce(t, spec)?;
            let label = match &outcome {
                FeedbackOutcome::Residual(r) => Some(classify_degeneracy(r)),
                FeedbackOutcome::Divergent => None,
            };
            out.push(SurveyEntry { spec, outcome, label });
        }
    }
    Ok(out)
}

/// The first survey entry whose residual is non-degenerate.
pub fn nondegenerate_feedback(t: &MoveTable) -> Result<Option<SurveyEntry>, FeedbackError> {
    Ok(feedback_survey(t)?
        .into_iter()
        .find(|e| e.label.is_some_and(|l| l.is_nondegenerate())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::wire_pairs;

    #[test]
    fn wire_pair_feedback_deletes_the_line() {
        for serial in 0..720 {
            let t = MoveTable::from_serial(3, serial).unwrap();
            for (a, s) in wire_pairs(&t) {
                let FeedbackOutcome::Residual(r) =
                    feedback_reduce(&t, FeedbackSpec { out_index: s, in_index: a }).unwrap()
                else {
                    panic!("divergent");
                };
                for q in 0..2 {
                    for (i, b) in (0..3).filter(|&b| b != a).enumerate() {
                        let (q2, o) = t.step(q, b);
                        let o = if o < s { o } else { o - 1 };
                        assert_eq!(r.step(q, i), (q2, o));
                    }
                }
            }
        }
    }

    #[test]
    fn rotary_element_has_nondegenerate_feedback() {
        let t = MoveTable::from_serial(4, 289).unwrap();
        let e = nondegenerate_feedback(&t).unwrap().expect("some feedback works");
        assert_eq!(e.outcome, feedback_reduce(&t, e.spec).unwrap());
    }

    #[test]
    fn rlem_3_10_all_specs_are_bijective() {
        let t = MoveTable::from_serial(3, 10).unwrap();
        let survey = feedback_survey(&t).unwrap();
        assert_eq!(survey.len(), 9);
        for e in survey {
            if let FeedbackOutcome::Residual(r) = e.outcome {
                assert_eq!(r.k(), 2);
                assert!(r.to_rsm().is_reversible());
            }
        }
    }

    #[test]
    fn degenerate_input_survey_runs() {
        let t = MoveTable::from_serial(3, 3).unwrap();
        assert_eq!(feedback_survey(&t).unwrap().len(), 9);
    }

    #[test]
    fn rejects_bad_specs() {
        let t = MoveTable::from_serial(1, 0).unwrap();
        assert!(feedback_reduce(&t, FeedbackSpec { out_index: 0, in_index: 0 }).is_err());
        let t = MoveTable::from_serial(2, 0).unwrap();
        assert!(feedback_reduce(&t, FeedbackSpec { out_index: 2, in_index: 0 }).is_err());
    }
}
