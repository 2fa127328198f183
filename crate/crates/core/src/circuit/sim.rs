//! Single-token simulation, forwards and backwards.

use thiserror::Error;

use super::{Circuit, Sink, Source};

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// Element states plus the position of the token, if one is in flight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub states: Vec<usize>,
    pub signal: Option<Vertex>,
}

impl Configuration {
    pub fn new(states: Vec<usize>) -> Self {
        Self { states, signal: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertex {
    Source(Source),
    Sink(Sink),
}

/// One element transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hop {
    pub element: usize,
    pub input: usize,
    pub output: usize,
    pub from_state: usize,
    pub to_state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub entry: usize,
    pub hops: Vec<Hop>,
    pub exit: usize,
}

impl Trace {
    /// Alternating source/sink vertices visited by the token.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v = vec![Vertex::Source(Source::Input(self.entry))];
        for h in &self.hops {
            v.push(Vertex::Sink(Sink::In(h.element, h.input)));
            v.push(Vertex::Source(Source::Out(h.element, h.output)));
        }
        v.push(Vertex::Sink(Sink::Output(self.exit)));
        v
    }
}

/// The port where the token left the circuit and the number of element
/// transitions it took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exit {
    pub port: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("a signal is already in flight")]
    SignalPresent,
    #[error("no circuit port {0}")]
    UnknownPort(usize),
    #[error("configuration has {got} element states, circuit has {expected} elements")]
    BadConfiguration { expected: usize, got: usize },
    #[error("step limit of {limit} reached{}", .input.map(|i| format!(" on input {i} of the sequence")).unwrap_or_default())]
    StepLimit { limit: usize, input: Option<usize> },
    #[error("element {element} in state {state} has no predecessor for output {output}")]
    NoPredecessor { element: usize, state: usize, output: usize },
}

impl Circuit {
    pub fn initial_configuration(&self) -> Configuration {
        Configuration::new(self.netlist.initial_states())
    }

    fn check(&self, c: &Configuration) -> Result<(), SimError> {
        if c.signal.is_some() {
            return Err(SimError::SignalPresent);
        }
        if c.states.len() != self.num_elements() {
            return Err(SimError::BadConfiguration { expected: self.num_elements(), got: c.states.len() });
        }
        Ok(())
    }

    fn run(
        &self,
        c: &mut Configuration,
        input: usize,
        max_steps: usize,
        mut hops: Option<&mut Vec<Hop>>,
    ) -> Result<Exit, SimError> {
        self.check(c)?;
        if input >= self.num_inputs() {
            return Err(SimError::UnknownPort(input));
        }
        let mut at = self.follow(Source::Input(input));
        let mut steps = 0;
        loop {
            match at {
                Sink::Output(port) => {
                    c.signal = None;
                    return Ok(Exit { port, steps });
                }
                Sink::In(e, p) => {
                    if steps == max_steps {
                        c.signal = Some(Vertex::Sink(at));
                        return Err(SimError::StepLimit { limit: max_steps, input: None });
                    }
                    let from = c.states[e];
                    let (to, out) = self.machines[e].step(from, p);
                    c.states[e] = to;
                    if let Some(h) = hops.as_deref_mut() {
                        h.push(Hop { element: e, input: p, output: out, from_state: from, to_state: to });
                    }
                    steps += 1;
                    at = self.follow(Source::Out(e, out));
                }
            }
        }
    }

    /// Sends a token into circuit input `input` and runs it to an output.
    /// On a step-limit error the configuration keeps the token position.
    pub fn inject(&self, c: &mut Configuration, input: usize, max_steps: usize) -> Result<Exit, SimError> {
        self.run(c, input, max_steps, None)
    }

    pub fn inject_traced(
        &self,
        c: &mut Configuration,
        input: usize,
        max_steps: usize,
    ) -> Result<(Exit, Trace), SimError> {
        let mut hops = Vec::new();
        let exit = self.run(c, input, max_steps, Some(&mut hops))?;
        Ok((exit, Trace { entry: input, hops, exit: exit.port }))
    }

    /// Undoes the run that ended at circuit output `output`, returning the
    /// circuit input the token must have entered by.
    pub fn backward(&self, c: &mut Configuration, output: usize, max_steps: usize) -> Result<Exit, SimError> {
        self.check(c)?;
        if output >= self.num_outputs() {
            return Err(SimError::UnknownPort(output));
        }
        let mut at = self.follow_back(Sink::Output(output));
        let mut steps = 0;
        loop {
            match at {
                Source::Input(port) => return Ok(Exit { port, steps }),
                Source::Out(e, g) => {
                    if steps == max_steps {
                        return Err(SimError::StepLimit { limit: max_steps, input: None });
                    }
                    let state = c.states[e];
                    let (prev, input) = self
                        .predecessor(e, state, g)
                        .ok_or(SimError::NoPredecessor { element: e, state, output: g })?;
                    c.states[e] = prev;
                    steps += 1;
                    at = self.follow_back(Sink::In(e, input));
                }
            }
        }
    }

    /// Injects each input in turn, collecting output ports.
    pub fn run_sequence(
        &self,
        c: &mut Configuration,
        inputs: &[usize],
        max_steps: usize,
    ) -> Result<Vec<usize>, SimError> {
        let mut outs = Vec::with_capacity(inputs.len());
        for (i, &x) in inputs.iter().enumerate() {
            match self.inject(c, x, max_steps) {
                Ok(e) => outs.push(e.port),
                Err(SimError::StepLimit { limit, .. }) => {
                    return Err(SimError::StepLimit { limit, input: Some(i) })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(outs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{ElementSpec, Netlist};
    use crate::table::{MoveTable, RlemId};

    fn single(spec: ElementSpec, k: usize) -> Circuit {
        let mut n = Netlist::new();
        for i in 0..k {
            n.add_input(format!("i{i}"));
            n.add_output(format!("o{i}"));
        }
        let e = n.add_element("x", spec, 0);
        for p in 0..k {
            n.wire(Source::Input(p), Sink::In(e, p));
            n.wire(Source::Out(e, p), Sink::Output(p));
        }
        n.compile().unwrap()
    }

    #[test]
    fn single_element_matches_table() {
        let t = MoveTable::from_serial(3, 10).unwrap();
        let c = single(ElementSpec::Serial(RlemId { k: 3, serial: 10 }), 3);
        for q in 0..2 {
            for a in 0..3 {
                let mut cfg = Configuration::new(vec![q]);
                let (exit, tr) = c.inject_traced(&mut cfg, a, 10).unwrap();
                let (q2, s) = t.step(q, a);
                assert_eq!((cfg.states[0], exit.port), (q2, s));
                assert_eq!(tr.hops.len(), 1);
                assert_eq!(tr.vertices().len(), 4);
                c.backward(&mut cfg, s, 10).map(|e| assert_eq!(e.port, a)).unwrap();
                assert_eq!(cfg.states[0], q);
            }
        }
    }

    #[test]
    fn step_limit_is_reported() {
        let c = single(ElementSpec::Serial(RlemId { k: 2, serial: 3 }), 2);
        let mut cfg = c.initial_configuration();
        assert_eq!(c.run_sequence(&mut cfg, &[1, 0], 1).unwrap().len(), 2);
        let err = c.run_sequence(&mut cfg, &[1, 0], 0).unwrap_err();
        assert_eq!(err, SimError::StepLimit { limit: 0, input: Some(0) });
        assert!(cfg.signal.is_some());
        assert_eq!(c.inject(&mut cfg, 0, 50), Err(SimError::SignalPresent));
    }

    #[test]
    fn bad_ports() {
        let c = single(ElementSpec::RotaryElement, 4);
        let mut cfg = c.initial_configuration();
        assert_eq!(c.inject(&mut cfg, 9, 10), Err(SimError::UnknownPort(9)));
        assert!(matches!(c.backward(&mut cfg, 9, 10), Err(SimError::UnknownPort(9))));
    }
}
