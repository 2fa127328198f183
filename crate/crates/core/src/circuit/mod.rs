//! Circuits of RLEM (or general RSM) instances joined by a bijective
//! connection function, and a single-token simulator over them.
//!
//! The connection function maps every *source* (a circuit input or an
//! element output port) to exactly one *sink* (a circuit output or an
//! element input port). Since it is a bijection, fan-out cannot be
//! expressed.

mod format;
mod sim;
mod verify;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

pub use format::ParseError;
pub use sim::{Configuration, Exit, Hop, SimError, Trace, Vertex, DEFAULT_MAX_STEPS};
pub use verify::{find_state_map, Counterexample, SimulationMaps, VerifyError};

use crate::rsm::Rsm;
use crate::table::{MoveTable, RlemId};

/// Where a wire starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Input(usize),
    Out(usize, usize),
}

/// Where a wire ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sink {
    Output(usize),
    In(usize, usize),
}

/// How an element was written; kept so serialisation reproduces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementSpec {
    Serial(RlemId),
    RotaryElement,
    Perm(MoveTable),
    Machine(Arc<Rsm>),
}

impl ElementSpec {
    pub fn table(&self) -> Option<MoveTable> {
        match self {
            ElementSpec::Serial(id) => Some(MoveTable::from_id(*id)),
            ElementSpec::RotaryElement => Some(MoveTable::rotary_element()),
            ElementSpec::Perm(t) => Some(t.clone()),
            ElementSpec::Machine(_) => None,
        }
    }

    pub fn machine(&self) -> Arc<Rsm> {
        match self {
            ElementSpec::Machine(m) => m.clone(),
            ElementSpec::RotaryElement => Arc::new(rotary_element_rsm()),
            other => Arc::new(other.table().expect("table spec").to_rsm()),
        }
    }

    pub fn is_rotary_element(&self) -> bool {
        matches!(self, ElementSpec::RotaryElement)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub spec: ElementSpec,
    pub init: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Netlist {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub elements: Vec<Element>,
    pub wires: BTreeMap<Source, Sink>,
    /// Optional recorded state map: entry `i` lists element states that
    /// encode target state `i`.
    pub state_map: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateName(String),
    BadName(String),
    PortOutOfRange(String),
    /// Two wires end at the same sink.
    NotInjective(String),
    /// A source has no wire.
    NotTotal(String),
    /// A sink has no wire.
    NotSurjective(String),
    BadInitialState(String),
    IrreversibleElement(String),
    BadStateMap(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName(n) => write!(f, "duplicate name `{n}`"),
            Violation::BadName(n) => write!(f, "invalid name `{n}`"),
            Violation::PortOutOfRange(p) => write!(f, "port out of range: {p}"),
            Violation::NotInjective(p) => write!(f, "not injective: {p} is driven more than once"),
            Violation::NotTotal(p) => write!(f, "not total: {p} is not connected"),
            Violation::NotSurjective(p) => write!(f, "not surjective: {p} is never driven"),
            Violation::BadInitialState(e) => write!(f, "bad initial state for element {e}"),
            Violation::IrreversibleElement(e) => write!(f, "element {e} is not reversible"),
            Violation::BadStateMap(m) => write!(f, "bad state map: {m}"),
        }
    }
}

/// The rotary element with its conventional names: states `H`, `V`,
/// inputs `n e s w` and outputs `n' e' s' w'`.
pub fn rotary_element_rsm() -> Rsm {
    let t = MoveTable::rotary_element();
    let dirs = ["n", "e", "s", "w"];
    Rsm::new(
        vec!["H".into(), "V".into()],
        dirs.iter().map(|d| d.to_string()).collect(),
        dirs.iter().map(|d| format!("{d}'")).collect(),
        t.to_rsm().delta().to_vec(),
    )
    .expect("rotary element")
}

pub(crate) fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Netlist {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_input(&mut self, name: impl Into<String>) -> usize {
        self.inputs.push(name.into());
        self.inputs.len() - 1
    }

    pub fn add_output(&mut self, name: impl Into<String>) -> usize {
        self.outputs.push(name.into());
        self.outputs.len() - 1
    }

    pub fn add_element(&mut self, name: impl Into<String>, spec: ElementSpec, init: usize) -> usize {
        self.elements.push(Element { name: name.into(), spec, init });
        self.elements.len() - 1
    }

    /// Adds a wire, returning the sink it replaced if `from` was already
    /// connected.
    pub fn wire(&mut self, from: Source, to: Sink) -> Option<Sink> {
        self.wires.insert(from, to)
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|n| n == name)
    }

    pub fn output_index(&self, name: &str) -> Option<usize> {
        self.outputs.iter().position(|n| n == name)
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    pub fn source_name(&self, s: Source) -> String {
        match s {
            Source::Input(i) => self.inputs.get(i).cloned().unwrap_or_else(|| format!("input#{i}")),
            Source::Out(e, p) => format!("{}.out{p}", self.elem_name(e)),
        }
    }

    pub fn sink_name(&self, s: Sink) -> String {
        match s {
            Sink::Output(i) => self.outputs.get(i).cloned().unwrap_or_else(|| format!("output#{i}")),
            Sink::In(e, p) => format!("{}.in{p}", self.elem_name(e)),
        }
    }

    fn elem_name(&self, e: usize) -> String {
        self.elements.get(e).map(|x| x.name.clone()).unwrap_or_else(|| format!("#{e}"))
    }

    pub fn initial_states(&self) -> Vec<usize> {
        self.elements.iter().map(|e| e.init).collect()
    }

    /// All structural problems; an empty list means the netlist is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let mut names = HashSet::new();
        for n in self.inputs.iter().chain(&self.outputs).chain(self.elements.iter().map(|e| &e.name)) {
            if !valid_name(n) {
                v.push(Violation::BadName(n.clone()));
            }
            if !names.insert(n.as_str()) {
                v.push(Violation::DuplicateName(n.clone()));
            }
        }
        let machines: Vec<Arc<Rsm>> = self.elements.iter().map(|e| e.spec.machine()).collect();
        for (e, m) in self.elements.iter().zip(&machines) {
            if e.init >= m.num_states() {
                v.push(Violation::BadInitialState(e.name.clone()));
            }
            if !m.is_reversible() {
                v.push(Violation::IrreversibleElement(e.name.clone()));
            }
        }
        let source_ok = |s: &Source| match *s {
            Source::Input(i) => i < self.inputs.len(),
            Source::Out(e, p) => e < machines.len() && p < machines[e].num_outputs(),
        };
        let sink_ok = |s: &Sink| match *s {
            Sink::Output(i) => i < self.outputs.len(),
            Sink::In(e, p) => e < machines.len() && p < machines[e].num_inputs(),
        };
        let mut driven: HashMap<Sink, usize> = HashMap::new();
        for (from, to) in &self.wires {
            if !source_ok(from) {
                v.push(Violation::PortOutOfRange(self.source_name(*from)));
            }
            if !sink_ok(to) {
                v.push(Violation::PortOutOfRange(self.sink_name(*to)));
            }
            *driven.entry(*to).or_insert(0) += 1;
        }
        let mut over: Vec<_> = driven.iter().filter(|(_, &n)| n > 1).map(|(s, _)| *s).collect();
        over.sort();
        for s in over {
            v.push(Violation::NotInjective(self.sink_name(s)));
        }
        for s in self.all_sources(&machines) {
            if !self.wires.contains_key(&s) {
                v.push(Violation::NotTotal(self.source_name(s)));
            }
        }
        for s in self.all_sinks(&machines) {
            if !driven.contains_key(&s) {
                v.push(Violation::NotSurjective(self.sink_name(s)));
            }
        }
        for (i, m) in self.state_map.iter().enumerate() {
            if m.len() != self.elements.len()
                || m.iter().zip(&machines).any(|(&s, mach)| s >= mach.num_states())
            {
                v.push(Violation::BadStateMap(format!("entry {i}")));
            }
        }
        v
    }

    fn all_sources(&self, machines: &[Arc<Rsm>]) -> Vec<Source> {
        let mut out: Vec<Source> = (0..self.inputs.len()).map(Source::Input).collect();
        for (e, m) in machines.iter().enumerate() {
            out.extend((0..m.num_outputs()).map(|p| Source::Out(e, p)));
        }
        out
    }

    fn all_sinks(&self, machines: &[Arc<Rsm>]) -> Vec<Sink> {
        let mut out: Vec<Sink> = (0..self.outputs.len()).map(Sink::Output).collect();
        for (e, m) in machines.iter().enumerate() {
            out.extend((0..m.num_inputs()).map(|p| Sink::In(e, p)));
        }
        out
    }

    /// Element outputs and circuit inputs without a wire.
    pub fn unwired_sources(&self) -> Vec<Source> {
        let machines: Vec<Arc<Rsm>> = self.elements.iter().map(|e| e.spec.machine()).collect();
        self.all_sources(&machines)
            .into_iter()
            .filter(|s| !self.wires.contains_key(s))
            .collect()
    }

    /// Element inputs and circuit outputs nothing drives.
    pub fn undriven_sinks(&self) -> Vec<Sink> {
        let machines: Vec<Arc<Rsm>> = self.elements.iter().map(|e| e.spec.machine()).collect();
        let driven: HashSet<Sink> = self.wires.values().copied().collect();
        self.all_sinks(&machines)
            .into_iter()
            .filter(|s| !driven.contains(s))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        format::parse(text)
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        format::serialize(self)
    }

    /// Validated, indexed form ready for simulation.
    pub fn compile(&self) -> Result<Circuit, Vec<Violation>> {
        Circuit::new(self.clone())
    }
}

/// `(state, input)` reached by each `(state, output)` of a machine.
type Inverse = Arc<Vec<Option<(usize, usize)>>>;

/// A validated netlist with the connection function laid out as arrays.
#[derive(Debug, Clone)]
pub struct Circuit {
    netlist: Netlist,
    machines: Vec<Arc<Rsm>>,
    inverses: Vec<Inverse>,
    src_base: Vec<usize>,
    sink_base: Vec<usize>,
    forward: Vec<Sink>,
    backward: Vec<Source>,
}

impl Circuit {
    pub fn new(netlist: Netlist) -> Result<Self, Vec<Violation>> {
        let violations = netlist.validate();
        if !violations.is_empty() {
            return Err(violations);
        }
        // share machine instances between identical element specs
        let mut cache: Vec<(ElementSpec, Arc<Rsm>, Inverse)> = Vec::new();
        let mut machines = Vec::with_capacity(netlist.elements.len());
        let mut inverses = Vec::with_capacity(netlist.elements.len());
        for e in &netlist.elements {
            let hit = cache.iter().find(|(spec, _, _)| *spec == e.spec);
            let (m, inv) = match hit {
                Some((_, m, inv)) => (m.clone(), inv.clone()),
                None => {
                    let m = e.spec.machine();
                    let inv = Arc::new(m.inverse_table());
                    cache.push((e.spec.clone(), m.clone(), inv.clone()));
                    (m, inv)
                }
            };
            machines.push(m);
            inverses.push(inv);
        }
        let mut src_base = Vec::with_capacity(machines.len());
        let mut sink_base = Vec::with_capacity(machines.len());
        let (mut ns, mut nk) = (netlist.inputs.len(), netlist.outputs.len());
        for m in &machines {
            src_base.push(ns);
            sink_base.push(nk);
            ns += m.num_outputs();
            nk += m.num_inputs();
        }
        let mut forward = vec![Sink::Output(0); ns];
        let mut backward = vec![Source::Input(0); nk];
        let mut c = Self { netlist, machines, inverses, src_base, sink_base, forward: Vec::new(), backward: Vec::new() };
        for (&from, &to) in &c.netlist.wires {
            forward[c.source_id(from)] = to;
            backward[c.sink_id(to)] = from;
        }
        c.forward = forward;
        c.backward = backward;
        Ok(c)
    }

    #[inline]
    fn source_id(&self, s: Source) -> usize {
        match s {
            Source::Input(i) => i,
            Source::Out(e, p) => self.src_base[e] + p,
        }
    }

    #[inline]
    fn sink_id(&self, s: Sink) -> usize {
        match s {
            Sink::Output(i) => i,
            Sink::In(e, p) => self.sink_base[e] + p,
        }
    }

    #[inline]
    pub fn follow(&self, s: Source) -> Sink {
        self.forward[self.source_id(s)]
    }

    #[inline]
    pub fn follow_back(&self, s: Sink) -> Source {
        self.backward[self.sink_id(s)]
    }

    pub fn netlist(&self) -> &Netlist {
        &self.netlist
    }

    pub fn machine(&self, element: usize) -> &Rsm {
        &self.machines[element]
    }

    pub fn num_elements(&self) -> usize {
        self.machines.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.netlist.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.netlist.outputs.len()
    }

    pub(crate) fn predecessor(&self, element: usize, state: usize, output: usize) -> Option<(usize, usize)> {
        let no = self.machines[element].num_outputs();
        self.inverses[element][state * no + output]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn single_re() -> Netlist {
        let mut n = Netlist::new();
        for name in ["n", "e", "s", "w"] {
            n.add_input(name);
        }
        for name in ["n_", "e_", "s_", "w_"] {
            n.add_output(name);
        }
        let re = n.add_element("re", ElementSpec::RotaryElement, 0);
        for p in 0..4 {
            n.wire(Source::Input(p), Sink::In(re, p));
            n.wire(Source::Out(re, p), Sink::Output(p));
        }
        n
    }

    #[test]
    fn single_re_is_valid() {
        assert!(single_re().validate().is_empty());
        assert!(single_re().compile().is_ok());
    }

    #[test]
    fn two_wires_into_one_input() {
        let mut n = single_re();
        n.wire(Source::Input(1), Sink::In(0, 0));
        let v = n.validate();
        assert!(v.iter().any(|x| x.to_string().contains("not injective")), "{v:?}");
    }

    #[test]
    fn dangling_output() {
        let mut n = single_re();
        n.wires.remove(&Source::Out(0, 2));
        let v = n.validate();
        assert!(v.iter().any(|x| x.to_string().contains("not total")), "{v:?}");
        assert!(v.iter().any(|x| x.to_string().contains("not surjective")), "{v:?}");
    }

    #[test]
    fn arity_and_names_checked() {
        let mut n = single_re();
        n.wire(Source::Out(0, 7), Sink::Output(0));
        n.add_input("re");
        let v = n.validate();
        assert!(v.iter().any(|x| matches!(x, Violation::PortOutOfRange(_))));
        assert!(v.iter().any(|x| matches!(x, Violation::DuplicateName(_))));
    }

    #[test]
    fn irreversible_element_rejected() {
        let bad = Rsm::new(
            vec!["p".into()],
            vec!["x".into(), "y".into()],
            vec!["z".into(), "w".into()],
            vec![(0, 0), (0, 0)],
        )
        .unwrap();
        let mut n = Netlist::new();
        n.add_element("m", ElementSpec::Machine(Arc::new(bad)), 0);
        assert!(n.validate().iter().any(|v| matches!(v, Violation::IrreversibleElement(_))));
    }
}
