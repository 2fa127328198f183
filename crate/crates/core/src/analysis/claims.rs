//! Replaying traces against the four crossing claims and the budget.

use std::fmt;

use super::{compile_two_two, AnalysisError, WPartition};
use crate::circuit::{Configuration, Netlist, Sink, Source, Trace, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    /// Side changes happen only inside crossing elements.
    Boundary,
    /// A crossing element's state fixes which way it can cross.
    Gating,
    /// At a crossing element, crossing and toggling coincide.
    Toggle,
    /// `W → W̄` crossings minus `W̄ → W` crossings equals
    /// `[entry ∈ W] - [exit ∈ W]`.
    Balance,
    /// The armed count moves by exactly the net crossings, and never
    /// against the entry side.
    Budget,
}

impl Claim {
    pub fn id(self) -> &'static str {
        match self {
            Claim::Boundary => "1",
            Claim::Gating => "2",
            Claim::Toggle => "3",
            Claim::Balance => "4",
            Claim::Budget => "budget",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "claim {}", self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimViolation {
    pub claim: Claim,
    /// Position in the input word.
    pub input_index: usize,
    /// Hop within that traversal, when the violation is local to one.
    pub hop: Option<usize>,
    pub detail: String,
}

impl fmt::Display for ClaimViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at input {}", self.claim, self.input_index)?;
        if let Some(h) = self.hop {
            write!(f, " hop {h}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimReport {
    pub partition: WPartition,
    pub traversals: usize,
    pub down_crossings: usize,
    pub up_crossings: usize,
    pub violation: Option<ClaimViolation>,
}

impl ClaimReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Crossing counts of one traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Crossings {
    pub down: usize,
    pub up: usize,
}

/// Checks one traversal that started from element states `before`. The
/// violation's `input_index` is left at 0.
pub fn check_trace(p: &WPartition, before: &[usize], trace: &Trace) -> Result<Crossings, ClaimViolation> {
    let fail = |claim, hop, detail: String| Err(ClaimViolation { claim, input_index: 0, hop, detail });
    let side = |v: Vertex| p.in_w(v);
    let vs = trace.vertices();
    // wires: each source/sink pair is consecutive at even positions
    for (k, pair) in vs.chunks(2).enumerate() {
        if side(pair[0]) != side(pair[1]) {
            return fail(Claim::Boundary, k.checked_sub(1), "a wire changes side".into());
        }
    }
    let mut states = before.to_vec();
    let mut x = Crossings::default();
    for (k, h) in trace.hops.iter().enumerate() {
        let from_w = p.sink_in_w(Sink::In(h.element, h.input));
        let to_w = p.source_in_w(Source::Out(h.element, h.output));
        let crossed = from_w != to_w;
        let cross_elem = p.is_cross(h.element);
        if crossed && !cross_elem {
            return fail(Claim::Boundary, Some(k), format!("crossing at non-crossing element {}", h.element));
        }
        if cross_elem {
            // the element emits on the side its state selects
            if p.source_in_w(Source::Out(h.element, h.from_state)) != to_w {
                return fail(Claim::Gating, Some(k), format!("element {} left by the wrong side", h.element));
            }
            if crossed != (h.from_state != h.to_state) {
                return fail(Claim::Toggle, Some(k), format!("element {} toggled {}", h.element, !crossed));
            }
        }
        if crossed {
            if from_w {
                x.down += 1;
            } else {
                x.up += 1;
            }
        }
        states[h.element] = h.to_state;
    }
    let entry_w = p.source_in_w(Source::Input(trace.entry));
    let exit_w = p.sink_in_w(Sink::Output(trace.exit));
    if x.down as i64 - x.up as i64 != i64::from(entry_w) - i64::from(exit_w) {
        return fail(Claim::Balance, None, format!("{} down, {} up crossings", x.down, x.up));
    }
    let (d0, d1) = (p.down_count(before) as i64, p.down_count(&states) as i64);
    if d1 != d0 - x.down as i64 + x.up as i64 || (entry_w && d1 > d0) || (!entry_w && d1 < d0) {
        return fail(Claim::Budget, None, format!("armed count {d0} -> {d1}"));
    }
    Ok(x)
}

/// Runs `inputs` from element states `init` and checks every traversal.
pub fn check_claims(n: &Netlist, init: &[usize], inputs: &[usize], max_steps: usize) -> Result<ClaimReport, AnalysisError> {
    let c = compile_two_two(n)?;
    let seed = n.input_index("a").ok_or_else(|| AnalysisError::MissingPort("a".into()))?;
    let p = WPartition::from_seed(&c, seed);
    p.check_invariants(&c)?;
    let mut cfg = Configuration::new(init.to_vec());
    let mut report =
        ClaimReport { partition: p, traversals: 0, down_crossings: 0, up_crossings: 0, violation: None };
    for (i, &x) in inputs.iter().enumerate() {
        let before = cfg.states.clone();
        let (_, trace) = c.inject_traced(&mut cfg, x, max_steps)?;
        report.traversals += 1;
        match check_trace(&report.partition, &before, &trace) {
            Ok(x) => {
                report.down_crossings += x.down;
                report.up_crossings += x.up;
            }
            Err(v) => {
                report.violation = Some(ClaimViolation { input_index: i, ..v });
                break;
            }
        }
    }
    Ok(report)
}
