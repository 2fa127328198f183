//! Why circuits of RLEM 2-2 cannot simulate 2-3, 2-4 or 2-17.
//!
//! The token path from input `a` splits a 2-2 circuit's vertices into `W`
//! and its complement. A token only changes side inside an element that has
//! one input on each side, and doing so toggles that element. Each such
//! element can carry a `W → W̄` crossing in exactly one of its states, so
//! the number of elements "armed" that way is a bounded budget the target's
//! driving sequences exhaust.

mod claims;
mod hierarchy;
mod refute;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::circuit::{Circuit, Netlist, SimError, Sink, Source, Vertex};
use crate::table::{MoveTable, RlemId};

pub use claims::{check_claims, check_trace, Claim, ClaimReport, ClaimViolation, Crossings};
pub use hierarchy::{hierarchy, Fact, Hierarchy, Relation, Universality, TWO_STATE_TWO_SYMBOL};
pub use refute::{refute, Refutation, RefutationRun};

pub const TWO_TWO: RlemId = RlemId { k: 2, serial: 2 };

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("element {0} is not RLEM 2-2")]
    NotTwoTwo(String),
    #[error("circuit must have two inputs and two outputs, has {0} and {1}")]
    Arity(usize, usize),
    #[error("no circuit input named `{0}`")]
    MissingPort(String),
    #[error("invalid netlist: {0}")]
    Invalid(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("partition invariant broken: {0}")]
    Partition(String),
}

/// Compiles `n` after checking that every element is exactly RLEM 2-2 and
/// that there are two inputs and two outputs.
pub(crate) fn compile_two_two(n: &Netlist) -> Result<Circuit, AnalysisError> {
    let two_two = MoveTable::from_id(TWO_TWO);
    if let Some(e) = n.elements.iter().find(|e| e.spec.table().as_ref() != Some(&two_two)) {
        return Err(AnalysisError::NotTwoTwo(e.name.clone()));
    }
    if n.inputs.len() != 2 || n.outputs.len() != 2 {
        return Err(AnalysisError::Arity(n.inputs.len(), n.outputs.len()));
    }
    n.compile().map_err(|v| AnalysisError::Invalid(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))
}

/// The split of a 2-2 circuit's vertices and elements. Sources are the
/// vertices `U` (circuit inputs, element outputs), sinks are `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WPartition {
    /// Circuit input the closure starts from.
    pub seed: usize,
    /// `W` in the order the token path from `seed` visits it.
    pub w: Vec<Vertex>,
    pub w_bar: Vec<Vertex>,
    pub e_w: Vec<usize>,
    pub e_w_bar: Vec<usize>,
    pub e_cross: Vec<usize>,
    /// Circuit outputs in `W` and in `W̄`.
    pub o1: Vec<usize>,
    pub o2: Vec<usize>,
    members: HashSet<Vertex>,
}

fn all_vertices(c: &Circuit) -> Vec<Vertex> {
    let mut v: Vec<Vertex> = (0..c.num_inputs()).map(|i| Vertex::Source(Source::Input(i))).collect();
    for e in 0..c.num_elements() {
        v.extend((0..2).map(|p| Vertex::Source(Source::Out(e, p))));
    }
    v.extend((0..c.num_outputs()).map(|o| Vertex::Sink(Sink::Output(o))));
    for e in 0..c.num_elements() {
        v.extend((0..2).map(|p| Vertex::Sink(Sink::In(e, p))));
    }
    v
}

impl WPartition {
    /// Least set containing circuit input `seed`, closed under wires and
    /// under `a_i → s_i`, `b_i → t_i`.
    pub fn from_seed(c: &Circuit, seed: usize) -> Self {
        let mut w = Vec::new();
        let mut members = HashSet::new();
        let mut work = vec![Vertex::Source(Source::Input(seed))];
        while let Some(v) = work.pop() {
            if !members.insert(v) {
                continue;
            }
            w.push(v);
            match v {
                Vertex::Source(s) => work.push(Vertex::Sink(c.follow(s))),
                Vertex::Sink(Sink::In(e, p)) => work.push(Vertex::Source(Source::Out(e, p))),
                Vertex::Sink(Sink::Output(_)) => {}
            }
        }
        let w_bar: Vec<Vertex> = all_vertices(c).into_iter().filter(|v| !members.contains(v)).collect();
        let (mut e_w, mut e_w_bar, mut e_cross) = (Vec::new(), Vec::new(), Vec::new());
        for e in 0..c.num_elements() {
            let a = members.contains(&Vertex::Sink(Sink::In(e, 0)));
            let b = members.contains(&Vertex::Sink(Sink::In(e, 1)));
            match (a, b) {
                (true, true) => e_w.push(e),
                (false, false) => e_w_bar.push(e),
                _ => e_cross.push(e),
            }
        }
        let (o1, o2) = (0..c.num_outputs()).partition(|&o| members.contains(&Vertex::Sink(Sink::Output(o))));
        Self { seed, w, w_bar, e_w, e_w_bar, e_cross, o1, o2, members }
    }

    pub fn in_w(&self, v: Vertex) -> bool {
        self.members.contains(&v)
    }

    pub fn source_in_w(&self, s: Source) -> bool {
        self.in_w(Vertex::Source(s))
    }

    pub fn sink_in_w(&self, s: Sink) -> bool {
        self.in_w(Vertex::Sink(s))
    }

    /// `|E_WW̄|`.
    pub fn budget(&self) -> usize {
        self.e_cross.len()
    }

    pub fn is_cross(&self, e: usize) -> bool {
        self.e_cross.contains(&e)
    }

    /// Whether element `e` in `state` would carry a token from `W` to `W̄`.
    /// A 2-2 element emits on output `state` whatever its input.
    pub fn armed_down(&self, e: usize, state: usize) -> bool {
        self.is_cross(e) && !self.source_in_w(Source::Out(e, state))
    }

    /// Number of crossing elements armed for a `W → W̄` move.
    pub fn down_count(&self, states: &[usize]) -> usize {
        self.e_cross.iter().filter(|&&e| self.armed_down(e, states[e])).count()
    }

    /// Number of crossing elements armed for a `W̄ → W` move.
    pub fn up_count(&self, states: &[usize]) -> usize {
        self.budget() - self.down_count(states)
    }

    /// The two structural facts every partition must satisfy: the other
    /// input lies in `W̄` and exactly one output lies in `W`.
    pub fn check_invariants(&self, c: &Circuit) -> Result<(), AnalysisError> {
        for i in (0..c.num_inputs()).filter(|&i| i != self.seed) {
            if self.source_in_w(Source::Input(i)) {
                return Err(AnalysisError::Partition(format!("input {} is in W", c.netlist().inputs[i])));
            }
        }
        if self.o1.len() != 1 {
            return Err(AnalysisError::Partition(format!("{} circuit outputs in W", self.o1.len())));
        }
        Ok(())
    }

    pub fn describe(&self, n: &Netlist) -> String {
        let name = |v: &Vertex| match *v {
            Vertex::Source(s) => n.source_name(s),
            Vertex::Sink(s) => n.sink_name(s),
        };
        let names = |vs: &[Vertex]| vs.iter().map(name).collect::<Vec<_>>().join(" ");
        let elems = |es: &[usize]| es.iter().map(|&e| n.elements[e].name.clone()).collect::<Vec<_>>().join(" ");
        format!(
            "W: {}\nW_bar: {}\nE_W: {}\nE_W_bar: {}\nE_cross: {}",
            names(&self.w),
            names(&self.w_bar),
            elems(&self.e_w),
            elems(&self.e_w_bar),
            elems(&self.e_cross)
        )
    }
}

impl fmt::Display for WPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|W|={} |W_bar|={} budget={}", self.w.len(), self.w_bar.len(), self.budget())
    }
}

/// The partition of a 2-2 circuit seeded at its input named `a`.
pub fn compute_w(n: &Netlist) -> Result<WPartition, AnalysisError> {
    let c = compile_two_two(n)?;
    let seed = n.input_index("a").ok_or_else(|| AnalysisError::MissingPort("a".into()))?;
    let p = WPartition::from_seed(&c, seed);
    p.check_invariants(&c)?;
    Ok(p)
}

#[cfg(test)]
pub(crate) mod testgen {
    use rand::seq::SliceRandom;
    use rand::Rng;

    use crate::circuit::{ElementSpec, Netlist, Sink, Source};

    use super::TWO_TWO;

    /// A uniformly wired 2-2 circuit with `m` elements and random states.
    pub(crate) fn random_two_two(rng: &mut impl Rng, m: usize) -> Netlist {
        let mut n = Netlist::new();
        n.add_input("a");
        n.add_input("b");
        n.add_output("s");
        n.add_output("t");
        for i in 0..m {
            let init = rng.gen_range(0..2);
            n.add_element(format!("e{i}"), ElementSpec::Serial(TWO_TWO), init);
        }
        let mut sources = vec![Source::Input(0), Source::Input(1)];
        let mut sinks = vec![Sink::Output(0), Sink::Output(1)];
        for e in 0..m {
            for p in 0..2 {
                sources.push(Source::Out(e, p));
                sinks.push(Sink::In(e, p));
            }
        }
        sinks.shuffle(rng);
        for (s, d) in sources.into_iter().zip(sinks) {
            n.wire(s, d);
        }
        n
    }
}
