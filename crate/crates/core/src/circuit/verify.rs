//! Checking that a circuit simulates a target machine.

use std::collections::HashSet;

use thiserror::Error;

use super::sim::{Configuration, SimError};
use super::Circuit;
use crate::rsm::Rsm;

/// Target state `q` is encoded by element states `state_map[q]`; target
/// input `σ` enters at circuit input `in_map[σ]`; target output `γ` leaves at
/// circuit output `out_map[γ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationMaps {
    pub state_map: Vec<Vec<usize>>,
    pub in_map: Vec<usize>,
    pub out_map: Vec<usize>,
}

impl SimulationMaps {
    /// Ports matched by position, state map taken from the netlist.
    pub fn positional(c: &Circuit, target: &Rsm) -> Self {
        Self {
            state_map: c.netlist().state_map.clone(),
            in_map: (0..target.num_inputs()).collect(),
            out_map: (0..target.num_outputs()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub state: usize,
    pub input: usize,
    pub expected_output: usize,
    pub observed_output: Option<usize>,
    pub expected_states: Vec<usize>,
    pub observed_states: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("invalid maps: {0}")]
    Maps(String),
    #[error("mismatch at state {} input {}", .0.state, .0.input)]
    Mismatch(Box<Counterexample>),
    #[error("simulation from state {state} on input {input} failed: {error}")]
    Simulation { state: usize, input: usize, error: SimError },
}

fn injective(v: &[usize]) -> bool {
    let mut seen = HashSet::new();
    v.iter().all(|x| seen.insert(*x))
}

fn check_maps(c: &Circuit, target: &Rsm, m: &SimulationMaps) -> Result<(), VerifyError> {
    let bad = |s: String| Err(VerifyError::Maps(s));
    if m.state_map.len() != target.num_states() {
        return bad(format!("{} state encodings for {} states", m.state_map.len(), target.num_states()));
    }
    for (q, s) in m.state_map.iter().enumerate() {
        if s.len() != c.num_elements() {
            return bad(format!("encoding of state {q} has {} entries", s.len()));
        }
        if let Some(e) = (0..s.len()).find(|&e| s[e] >= c.machine(e).num_states()) {
            return bad(format!("encoding of state {q} puts element {e} out of range"));
        }
    }
    if m.in_map.len() != target.num_inputs() || m.in_map.iter().any(|&i| i >= c.num_inputs()) {
        return bad("input map does not fit".into());
    }
    if m.out_map.len() != target.num_outputs() || m.out_map.iter().any(|&o| o >= c.num_outputs()) {
        return bad("output map does not fit".into());
    }
    if !injective(&m.in_map) || !injective(&m.out_map) {
        return bad("port maps must be injective".into());
    }
    Ok(())
}

impl Circuit {
    /// Checks every `(q, σ)` of `target` from its encoded configuration.
    pub fn verify_simulation(&self, target: &Rsm, maps: &SimulationMaps, max_steps: usize) -> Result<(), VerifyError> {
        check_maps(self, target, maps)?;
        for q in 0..target.num_states() {
            for a in 0..target.num_inputs() {
                let (q2, g) = target.step(q, a);
                let mut cfg = Configuration::new(maps.state_map[q].clone());
                let exit = self
                    .inject(&mut cfg, maps.in_map[a], max_steps)
                    .map_err(|error| VerifyError::Simulation { state: q, input: a, error })?;
                if exit.port != maps.out_map[g] || cfg.states != maps.state_map[q2] {
                    return Err(VerifyError::Mismatch(Box::new(Counterexample {
                        state: q,
                        input: a,
                        expected_output: g,
                        observed_output: maps.out_map.iter().position(|&o| o == exit.port),
                        expected_states: maps.state_map[q2].clone(),
                        observed_states: cfg.states,
                    })));
                }
            }
        }
        Ok(())
    }
}

/// Derives a state map by taking the circuit's initial configuration as
/// the encoding of some target state and following transitions from it.
pub fn find_state_map(
    c: &Circuit,
    target: &Rsm,
    in_map: &[usize],
    out_map: &[usize],
    max_steps: usize,
) -> Option<Vec<Vec<usize>>> {
    let init = c.initial_configuration().states;
    'start: for q0 in 0..target.num_states() {
        let mut map: Vec<Option<Vec<usize>>> = vec![None; target.num_states()];
        map[q0] = Some(init.clone());
        let mut stack = vec![q0];
        while let Some(q) = stack.pop() {
            for a in 0..target.num_inputs() {
                let (q2, g) = target.step(q, a);
                let mut cfg = Configuration::new(map[q].clone().unwrap());
                let Ok(exit) = c.inject(&mut cfg, in_map[a], max_steps) else { continue 'start };
                if exit.port != out_map[g] {
                    continue 'start;
                }
                match &map[q2] {
                    Some(s) if *s != cfg.states => continue 'start,
                    Some(_) => {}
                    None => {
                        map[q2] = Some(cfg.states);
                        stack.push(q2);
                    }
                }
            }
        }
        if let Some(m) = map.into_iter().collect::<Option<Vec<_>>>() {
            return Some(m);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{ElementSpec, Netlist, Sink, Source, DEFAULT_MAX_STEPS};
    use crate::table::{MoveTable, RlemId};

    fn wrap(k: usize, serial: u64, init: usize) -> Circuit {
        let mut n = Netlist::new();
        for i in 0..k {
            n.add_input(format!("i{i}"));
            n.add_output(format!("o{i}"));
        }
        let e = n.add_element("x", ElementSpec::Serial(RlemId { k, serial }), init);
        for p in 0..k {
            n.wire(Source::Input(p), Sink::In(e, p));
            n.wire(Source::Out(e, p), Sink::Output(p));
        }
        n.compile().unwrap()
    }

    #[test]
    fn element_simulates_itself() {
        let t = MoveTable::from_serial(2, 17).unwrap().to_rsm();
        let c = wrap(2, 17, 0);
        let maps = SimulationMaps { state_map: vec![vec![0], vec![1]], in_map: vec![0, 1], out_map: vec![0, 1] };
        assert_eq!(c.verify_simulation(&t, &maps, DEFAULT_MAX_STEPS), Ok(()));
        assert_eq!(find_state_map(&c, &t, &[0, 1], &[0, 1], 100), Some(vec![vec![0], vec![1]]));
    }

    #[test]
    fn mismatch_gives_counterexample() {
        let t = MoveTable::from_serial(2, 3).unwrap().to_rsm();
        let c = wrap(2, 4, 0);
        let maps = SimulationMaps { state_map: vec![vec![0], vec![1]], in_map: vec![0, 1], out_map: vec![0, 1] };
        assert!(matches!(c.verify_simulation(&t, &maps, 100), Err(VerifyError::Mismatch(_))));
        let bad = SimulationMaps { in_map: vec![0, 0], ..maps };
        assert!(matches!(c.verify_simulation(&t, &bad, 100), Err(VerifyError::Maps(_))));
    }
}
