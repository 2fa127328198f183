//! An RTM as a network of reversible sequential machines: one control
//! machine driving a row of tape cells by single-token messages, then the
//! same network flattened to rotary elements.
//!
//! The control asks the head cell to `read`, receives `resp_x`, sends
//! `write_y`, receives `ackw`, sends `movel`/`mover` and receives
//! `ackl`/`ackr` once the neighbouring cell has taken over the head.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use super::{Dir, Rtm, RtmConfig, TapeWindow, Verdict};
use crate::circuit::{
    valid_name, Circuit, Configuration, ElementSpec, Netlist, SimError, Sink, Source, Violation,
};
use crate::rsm::{Rsm, RsmError};
use crate::synthesis::{flatten_to_re, Flattened, SynthesisError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("machine is not a deterministic reversible TM: {0}")]
    NotReversible(String),
    #[error("tape window must hold at least one cell")]
    EmptyWindow,
    #[error("{0}")]
    Machine(#[from] RsmError),
    #[error("network netlist is invalid: {0}")]
    Network(String),
    #[error("input of length {len} does not fit a window of {window} cells")]
    InputTooLong { len: usize, window: usize },
    #[error("input symbol index {0} is out of range")]
    InputSymbol(usize),
    #[error("{0}")]
    Synthesis(#[from] SynthesisError),
}

fn violations(v: Vec<Violation>) -> DecomposeError {
    DecomposeError::Network(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "))
}

fn tag(names: &[String], i: usize, fallback: char) -> String {
    if valid_name(&names[i]) {
        names[i].clone()
    } else {
        format!("{fallback}{i}")
    }
}

/// What a control state means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Idle,
    Read(usize),
    Write(usize),
    Move(usize),
    Stuck(usize, usize),
    Final(usize),
}

fn control_machine(m: &Rtm) -> Result<(Rsm, Vec<Phase>), DecomposeError> {
    let na = m.symbols.len();
    let st = |q: usize| tag(&m.states, q, 'q');
    let sy = |x: usize| tag(&m.symbols, x, 's');
    let incoming = |q: usize| m.quintuples.iter().any(|t| t.to == q);

    let mut phases = vec![Phase::Idle];
    let reading: Vec<usize> =
        (0..m.states.len()).filter(|&p| !m.is_final(p) && (p == m.init || incoming(p))).collect();
    phases.extend(reading.iter().map(|&p| Phase::Read(p)));
    for q in (0..m.states.len()).filter(|&q| incoming(q)) {
        phases.push(Phase::Write(q));
        phases.push(Phase::Move(q));
    }
    for &p in &reading {
        for x in 0..na {
            if m.lookup(p, x).is_none() {
                phases.push(Phase::Stuck(p, x));
            }
        }
    }
    for q in [m.accept, m.reject] {
        if incoming(q) || q == m.init {
            phases.push(Phase::Final(q));
        }
    }
    let names: Vec<String> = phases
        .iter()
        .map(|ph| match *ph {
            Phase::Idle => "idle".to_string(),
            Phase::Read(p) => format!("rd_{}", st(p)),
            Phase::Write(q) => format!("mv_{}", st(q)),
            Phase::Move(q) => format!("moving_{}", st(q)),
            Phase::Stuck(p, x) => format!("stuck_{}_{}", st(p), sy(x)),
            Phase::Final(q) => format!("fin_{}", st(q)),
        })
        .collect();
    let of = |ph: Phase| phases.iter().position(|&x| x == ph).expect("phase exists");

    let mut inputs = vec!["begin".to_string()];
    inputs.extend((0..na).map(|x| format!("resp_{}", sy(x))));
    inputs.extend(["ackw", "ackl", "ackr"].map(String::from));
    let (begin, ackw, ackl, ackr) = (0, na + 1, na + 2, na + 3);
    let mut outputs = vec!["read".to_string()];
    outputs.extend((0..na).map(|x| format!("write_{}", sy(x))));
    outputs.extend(["movel", "mover", "accept", "reject", "halt"].map(String::from));
    let (read, movel, mover, accept, reject, halt) = (0, na + 1, na + 2, na + 3, na + 4, na + 5);

    let ni = inputs.len();
    let mut partial = vec![None; phases.len() * ni];
    let arrive = |q: usize| {
        if q == m.accept {
            (of(Phase::Final(q)), accept)
        } else if q == m.reject {
            (of(Phase::Final(q)), reject)
        } else {
            (of(Phase::Read(q)), read)
        }
    };
    partial[of(Phase::Idle) * ni + begin] = Some(arrive(m.init));
    for (i, &ph) in phases.iter().enumerate() {
        match ph {
            Phase::Read(p) => {
                for x in 0..na {
                    partial[i * ni + 1 + x] = Some(match m.lookup(p, x) {
                        Some(t) => (of(Phase::Write(t.to)), 1 + t.write),
                        None => (of(Phase::Stuck(p, x)), halt),
                    });
                }
            }
            Phase::Write(q) => {
                let d = m.quintuples.iter().find(|t| t.to == q).expect("incoming").dir;
                partial[i * ni + ackw] = Some((of(Phase::Move(q)), if d == Dir::L { movel } else { mover }));
            }
            Phase::Move(q) => {
                let d = m.quintuples.iter().find(|t| t.to == q).expect("incoming").dir;
                partial[i * ni + if d == Dir::L { ackl } else { ackr }] = Some(arrive(q));
            }
            _ => {}
        }
    }
    let rsm = Rsm::complete(names, inputs, outputs, &partial, "x")?;
    Ok((rsm, phases))
}

/// Cell state indices: `2x + h` for symbol `x` and head flag `h`, then the
/// cleared head cell.
fn cell_machine(m: &Rtm) -> Result<Rsm, DecomposeError> {
    let na = m.symbols.len();
    let sy = |x: usize| tag(&m.symbols, x, 's');
    let mut states = Vec::new();
    for x in 0..na {
        states.push(format!("{}_0", sy(x)));
        states.push(format!("{}_1", sy(x)));
    }
    states.push("eps_1".to_string());
    let cleared = 2 * na;

    // left side: read, write_*, movel, mover, from_l; right side mirrors it
    let mut inputs = vec!["read".to_string()];
    inputs.extend((0..na).map(|x| format!("write_{}", sy(x))));
    inputs.extend(["movel", "mover", "from_l"].map(String::from));
    inputs.extend((0..na).map(|x| format!("resp_{}", sy(x))));
    inputs.extend(["ackw", "ackl", "ackr", "from_r"].map(String::from));
    let mut outputs = vec!["read".to_string()];
    outputs.extend((0..na).map(|x| format!("write_{}", sy(x))));
    outputs.extend(["movel", "mover", "to_r"].map(String::from));
    outputs.extend((0..na).map(|x| format!("resp_{}", sy(x))));
    outputs.extend(["ackw", "ackl", "ackr", "to_l"].map(String::from));
    let half = na + 4;
    let (read, movel, mover, from_l) = (0, na + 1, na + 2, na + 3);
    let (resp, ackw, ackl, ackr, from_r) = (half, half + na, half + na + 1, half + na + 2, half + na + 3);
    let (to_r, to_l) = (na + 3, half + na + 3);

    let ni = inputs.len();
    let mut partial = vec![None; states.len() * ni];
    for x in 0..na {
        let (idle, head) = (2 * x, 2 * x + 1);
        for a in 0..ni {
            if a != from_l && a != from_r {
                partial[idle * ni + a] = Some((idle, a));
            }
        }
        partial[idle * ni + from_l] = Some((head, ackr));
        partial[idle * ni + from_r] = Some((head, ackl));
        partial[head * ni + read] = Some((cleared, resp + x));
        partial[head * ni + movel] = Some((idle, to_l));
        partial[head * ni + mover] = Some((idle, to_r));
        partial[cleared * ni + 1 + x] = Some((head, ackw));
    }
    Ok(Rsm::complete(states, inputs, outputs, &partial, "x")?)
}

/// How a network or compiled-circuit run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkOutcome {
    pub verdict: Verdict,
    /// Tape contents and head, when every cell is in a tape state.
    pub tape: Option<TapeWindow>,
    /// Element transitions taken by the token.
    pub steps: usize,
}

#[derive(Debug, Clone, Copy)]
struct Ports {
    begin: usize,
    accept: usize,
    reject: usize,
    halt: usize,
    underflow: usize,
    overflow: usize,
}

/// The control machine and `window` cells wired into one circuit.
#[derive(Debug, Clone)]
pub struct RsmNetwork {
    rtm: Rtm,
    control: Arc<Rsm>,
    cell: Arc<Rsm>,
    phases: Vec<Phase>,
    window: usize,
    circuit: Circuit,
    ports: Ports,
}

pub fn decompose(m: &Rtm, window: usize) -> Result<RsmNetwork, DecomposeError> {
    if let Some(v) = m.check().first() {
        return Err(DecomposeError::NotReversible(m.describe(v)));
    }
    if window == 0 {
        return Err(DecomposeError::EmptyWindow);
    }
    let (control, phases) = control_machine(m)?;
    let cell = cell_machine(m)?;
    RsmNetwork::build(m.clone(), Arc::new(control), Arc::new(cell), phases, window)
}

impl RsmNetwork {
    fn build(
        rtm: Rtm,
        control: Arc<Rsm>,
        cell: Arc<Rsm>,
        phases: Vec<Phase>,
        window: usize,
    ) -> Result<Self, DecomposeError> {
        let mut n = Netlist::new();
        let ctrl = n.add_element("ctrl", ElementSpec::Machine(control.clone()), 0);
        let cells: Vec<usize> =
            (0..window).map(|i| n.add_element(format!("cell{i}"), ElementSpec::Machine(cell.clone()), 0)).collect();
        let begin = n.add_input("begin");
        let out = |n: &mut Netlist, name: &str| n.add_output(name);
        let ports = Ports {
            begin,
            accept: out(&mut n, "accept"),
            reject: out(&mut n, "reject"),
            halt: out(&mut n, "halt"),
            underflow: out(&mut n, "underflow"),
            overflow: out(&mut n, "overflow"),
        };
        let cin = |s: &str| cell.input_index(s).ok_or_else(|| DecomposeError::Network(format!("cell lacks input {s}")));
        let cout =
            |s: &str| cell.output_index(s).ok_or_else(|| DecomposeError::Network(format!("cell lacks output {s}")));
        let xin = |s: &str| control.input_index(s).expect("control input");
        let xout = |s: &str| control.output_index(s).expect("control output");

        let na = rtm.symbols.len();
        let sy = |x: usize| tag(&rtm.symbols, x, 's');
        let mut rightward = vec!["read".to_string()];
        rightward.extend((0..na).map(|x| format!("write_{}", sy(x))));
        rightward.extend(["movel", "mover"].map(String::from));
        let mut leftward: Vec<String> = (0..na).map(|x| format!("resp_{}", sy(x))).collect();
        leftward.extend(["ackw", "ackl", "ackr"].map(String::from));

        n.wire(Source::Input(begin), Sink::In(ctrl, xin("begin")));
        for s in &rightward {
            n.wire(Source::Out(ctrl, xout(s)), Sink::In(cells[0], cin(s)?));
        }
        for s in &leftward {
            n.wire(Source::Out(cells[0], cout(s)?), Sink::In(ctrl, xin(s)));
        }
        n.wire(Source::Out(ctrl, xout("accept")), Sink::Output(ports.accept));
        n.wire(Source::Out(ctrl, xout("reject")), Sink::Output(ports.reject));
        n.wire(Source::Out(ctrl, xout("halt")), Sink::Output(ports.halt));
        for w in cells.windows(2) {
            let (a, b) = (w[0], w[1]);
            for s in &rightward {
                n.wire(Source::Out(a, cout(s)?), Sink::In(b, cin(s)?));
            }
            n.wire(Source::Out(a, cout("to_r")?), Sink::In(b, cin("from_l")?));
            for s in &leftward {
                n.wire(Source::Out(b, cout(s)?), Sink::In(a, cin(s)?));
            }
            n.wire(Source::Out(b, cout("to_l")?), Sink::In(a, cin("from_r")?));
        }
        n.wire(Source::Out(cells[0], cout("to_l")?), Sink::Output(ports.underflow));
        n.wire(Source::Out(cells[window - 1], cout("to_r")?), Sink::Output(ports.overflow));
        for (k, s) in n.unwired_sources().into_iter().enumerate() {
            let o = n.add_output(format!("nc_out{k}"));
            n.wire(s, Sink::Output(o));
        }
        for (k, s) in n.undriven_sinks().into_iter().enumerate() {
            let i = n.add_input(format!("nc_in{k}"));
            n.wire(Source::Input(i), s);
        }
        let circuit = n.compile().map_err(violations)?;
        Ok(Self { rtm, control, cell, phases, window, circuit, ports })
    }

    /// The same network with a different cell machine, for fault injection.
    /// `cell` must keep the port names of the original.
    pub fn with_cell(&self, cell: Rsm) -> Result<Self, DecomposeError> {
        Self::build(self.rtm.clone(), self.control.clone(), Arc::new(cell), self.phases.clone(), self.window)
    }

    pub fn rtm(&self) -> &Rtm {
        &self.rtm
    }

    pub fn control(&self) -> &Rsm {
        &self.control
    }

    pub fn cell(&self) -> &Rsm {
        &self.cell
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn netlist(&self) -> &Netlist {
        self.circuit.netlist()
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Element states with `input` on the tape and the head on cell 0.
    pub fn initial_states(&self, input: &[usize]) -> Result<Vec<usize>, DecomposeError> {
        if let Some(&x) = input.iter().find(|&&x| x >= self.rtm.symbols.len()) {
            return Err(DecomposeError::InputSymbol(x));
        }
        if input.len() + 1 > self.window {
            return Err(DecomposeError::InputTooLong { len: input.len(), window: self.window });
        }
        let tape = self.rtm.initial(input).window(self.window, self.rtm.blank);
        let mut states = vec![0];
        states.extend(tape.cells.iter().enumerate().map(|(i, &x)| 2 * x + usize::from(i == 0)));
        Ok(states)
    }

    /// Reads the tape back out of element states.
    pub fn tape(&self, states: &[usize]) -> Option<TapeWindow> {
        let na = self.rtm.symbols.len();
        let mut head = None;
        let mut cells = Vec::with_capacity(self.window);
        // a stuck control has just cleared the head cell after reading it
        let held = match self.phases.get(states[0]) {
            Some(&Phase::Stuck(_, x)) => Some(2 * x + 1),
            _ => None,
        };
        for (i, &s) in states[1..].iter().enumerate() {
            let s = if s == 2 * na { held? } else { s };
            if s >= 2 * na {
                return None;
            }
            if s % 2 == 1 {
                if head.is_some() {
                    return None;
                }
                head = Some(i as i64);
            }
            cells.push(s / 2);
        }
        Some(TapeWindow { cells, head: head? })
    }

    fn verdict(&self, states: &[usize], exit: Result<usize, SimError>) -> Verdict {
        match exit {
            Ok(p) if p == self.ports.accept => Verdict::Accept,
            Ok(p) if p == self.ports.reject => Verdict::Reject,
            Ok(p) if p == self.ports.halt => match self.phases[states[0]] {
                Phase::Stuck(q, _) => Verdict::Halted(self.rtm.states[q].clone()),
                _ => Verdict::Exit("halt".to_string()),
            },
            Ok(p) if p == self.ports.underflow || p == self.ports.overflow => Verdict::WindowExceeded,
            Ok(p) => Verdict::Exit(self.netlist().outputs[p].clone()),
            Err(_) => Verdict::Running,
        }
    }

    pub fn run(&self, input: &[usize], max_steps: usize) -> Result<NetworkOutcome, DecomposeError> {
        let mut c = Configuration::new(self.initial_states(input)?);
        let (exit, steps) = match self.circuit.inject(&mut c, self.ports.begin, max_steps) {
            Ok(e) => (Ok(e.port), e.steps),
            Err(e) => (Err(e), max_steps),
        };
        let verdict = self.verdict(&c.states, exit);
        Ok(NetworkOutcome { tape: self.tape(&c.states), verdict, steps })
    }
}

/// The network flattened to rotary elements only.
#[derive(Debug, Clone)]
pub struct CompiledRtm {
    pub network: RsmNetwork,
    pub flat: Flattened,
    circuit: Circuit,
}

pub fn compile_to_re(m: &Rtm, window: usize) -> Result<CompiledRtm, DecomposeError> {
    let network = decompose(m, window)?;
    let flat = flatten_to_re(network.netlist())?;
    let circuit = flat.netlist.compile().map_err(violations)?;
    Ok(CompiledRtm { network, flat, circuit })
}

impl CompiledRtm {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn num_elements(&self) -> usize {
        self.circuit.num_elements()
    }

    pub fn initial_configuration(&self, input: &[usize]) -> Result<Configuration, DecomposeError> {
        Ok(Configuration::new(self.flat.encode(&self.network.initial_states(input)?)))
    }

    pub fn run(&self, input: &[usize], max_steps: usize) -> Result<NetworkOutcome, DecomposeError> {
        let mut c = self.initial_configuration(input)?;
        let (exit, steps) = match self.circuit.inject(&mut c, self.network.ports.begin, max_steps) {
            Ok(e) => (Ok(e.port), e.steps),
            Err(e) => (Err(e), max_steps),
        };
        let Some(states) = self.flat.decode(&c.states) else {
            return Ok(NetworkOutcome { verdict: Verdict::Exit("undecodable".into()), tape: None, steps });
        };
        let verdict = self.network.verdict(&states, exit);
        Ok(NetworkOutcome { tape: self.network.tape(&states), verdict, steps })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossRow {
    pub input: Vec<usize>,
    pub interpreter: Verdict,
    pub interpreter_tape: TapeWindow,
    pub network: NetworkOutcome,
    pub circuit: Option<NetworkOutcome>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossReport {
    pub rows: Vec<CrossRow>,
}

impl CrossReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }
}

fn agrees(verdict: &Verdict, tape: &TapeWindow, o: &NetworkOutcome) -> bool {
    if o.verdict != *verdict {
        return false;
    }
    match verdict {
        Verdict::Accept | Verdict::Reject | Verdict::Halted(_) => o.tape.as_ref() == Some(tape),
        _ => true,
    }
}

/// Runs each input through the interpreter, the RSM network and, when
/// `compiled` is set, the RE circuit, and compares verdicts and final tapes.
/// Interpreter runs that leave the window count as [`Verdict::WindowExceeded`].
pub fn cross_validate(
    m: &Rtm,
    inputs: &[Vec<usize>],
    window: usize,
    fuel: usize,
    max_steps: usize,
    compiled: bool,
) -> Result<CrossReport, DecomposeError> {
    let compiled = if compiled { Some(compile_to_re(m, window)?) } else { None };
    let network = match &compiled {
        Some(c) => c.network.clone(),
        None => decompose(m, window)?,
    };
    let rows = inputs
        .par_iter()
        .map(|input| {
            let run = m.interpret(input, fuel);
            let verdict = if left_window(m, input, fuel, window) { Verdict::WindowExceeded } else { run.verdict };
            let tape = run.config.window(window, m.blank);
            let net = network.run(input, max_steps)?;
            let circ = compiled.as_ref().map(|c| c.run(input, max_steps)).transpose()?;
            let agree = agrees(&verdict, &tape, &net) && circ.as_ref().is_none_or(|o| agrees(&verdict, &tape, o));
            Ok(CrossRow { input: input.clone(), interpreter: verdict, interpreter_tape: tape, network: net, circuit: circ, agree })
        })
        .collect::<Result<Vec<_>, DecomposeError>>()?;
    Ok(CrossReport { rows })
}

/// Whether the interpreter's head leaves cells `0..window` within `fuel`.
fn left_window(m: &Rtm, input: &[usize], fuel: usize, window: usize) -> bool {
    let mut c: RtmConfig = m.initial(input);
    for _ in 0..fuel {
        match m.step(&c) {
            Some(n) => c = n,
            None => return false,
        }
        if c.head < 0 || c.head >= window as i64 {
            return true;
        }
    }
    false
}
