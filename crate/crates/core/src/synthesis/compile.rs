//! Compiling a reversible sequential machine into a circuit of rotary
//! elements.
//!
//! Column `j` belongs to state `q_j`. Its read part has one RE per input
//! symbol plus a bottom RE that is `H` iff the machine is in `q_j`; all other
//! REs rest in `V`. A token entering row `i` flips that row's RE, climbs to
//! the bottom RE and either finds it `H` (clears it and returns down the
//! column to leave on the row's "yes" line) or finds it `V` (returns up the
//! column and moves on to the next column's row `i`). The write part is the
//! time reversal of a read part with one row per output symbol, sharing the
//! bottom REs: entering it on row `l` of column `j'` sets bottom RE `j'` and
//! leaves on output `b_l`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::circuit::{ElementSpec, Netlist, SimulationMaps, Sink, Source};
use crate::rsm::{Rsm, RsmError};

pub const H: usize = 0;
pub const V: usize = 1;
const N: usize = 0;
const E: usize = 1;
const S: usize = 2;
const W: usize = 3;

/// Maps a port of a reversed RE onto the RE itself.
const fn rev(p: usize) -> usize {
    match p {
        E => W,
        W => E,
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Irreversible(#[from] RsmError),
    #[error("machine has more inputs ({inputs}) than outputs ({outputs})")]
    Alphabet { inputs: usize, outputs: usize },
}

/// Element indices of the compiled circuit, by role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    /// `read[i][j]`: input row `i`, column `j`.
    pub read: Vec<Vec<usize>>,
    /// `bottom[j]`: state flag of column `j`.
    pub bottom: Vec<usize>,
    /// `write[l][j]`: output row `l`, column `j`.
    pub write: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesizedRsm {
    pub netlist: Netlist,
    pub maps: SimulationMaps,
    pub layout: Layout,
}

fn port_names(prefix: &str, names: &[String]) -> Vec<String> {
    let clean: Vec<String> = names
        .iter()
        .map(|n| {
            let s: String = n.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
            format!("{prefix}_{s}")
        })
        .collect();
    let distinct: BTreeSet<&String> = clean.iter().collect();
    if distinct.len() == clean.len() {
        clean
    } else {
        (0..names.len()).map(|i| format!("{prefix}{i}")).collect()
    }
}

/// Builds the RE circuit for `m`; the result always passes
/// `verify_simulation` against `m`.
pub fn synthesize_rsm(m: &Rsm) -> Result<SynthesizedRsm, SynthesisError> {
    m.ensure_reversible()?;
    let (nq, ns, ng) = (m.num_states(), m.num_inputs(), m.num_outputs());
    if ns > ng {
        return Err(SynthesisError::Alphabet { inputs: ns, outputs: ng });
    }
    let mut n = Netlist::new();
    for name in port_names("in", m.inputs()) {
        n.add_input(name);
    }
    for name in port_names("out", m.outputs()) {
        n.add_output(name);
    }
    let re = |n: &mut Netlist, name: String, init| n.add_element(name, ElementSpec::RotaryElement, init);
    let read: Vec<Vec<usize>> =
        (0..ns).map(|i| (0..nq).map(|j| re(&mut n, format!("r{i}_{j}"), V)).collect()).collect();
    let bottom: Vec<usize> = (0..nq).map(|j| re(&mut n, format!("b{j}"), if j == 0 { H } else { V })).collect();
    let write: Vec<Vec<usize>> =
        (0..ng).map(|l| (0..nq).map(|j| re(&mut n, format!("w{l}_{j}"), V)).collect()).collect();

    let out = Source::Out;
    let inp = Sink::In;
    for j in 0..nq {
        let b = bottom[j];
        // read column
        for i in 0..ns {
            let r = read[i][j];
            let up = if i == 0 { inp(b, N) } else { inp(read[i - 1][j], S) };
            n.wire(out(r, N), up);
            if i > 0 {
                n.wire(out(read[i - 1][j], S), inp(r, N));
            }
            if j + 1 < nq {
                n.wire(out(r, E), inp(read[i][j + 1], E));
            }
            let (q2, l) = m.step(j, i);
            n.wire(out(r, W), inp(write[l][q2], E));
        }
        n.wire(out(b, W), inp(read[0][j], N));
        n.wire(out(b, S), inp(read[ns - 1][j], S));
        // write column, the reversal of a read column over the outputs
        for l in 0..ng {
            let w = write[l][j];
            if l == 0 {
                n.wire(out(b, rev(N)), inp(w, rev(N)));
                n.wire(out(w, rev(N)), inp(b, rev(W)));
            } else {
                n.wire(out(write[l - 1][j], rev(S)), inp(w, rev(N)));
                n.wire(out(w, rev(N)), inp(write[l - 1][j], rev(S)));
            }
            if j + 1 < nq {
                n.wire(out(write[l][j + 1], rev(E)), inp(w, rev(E)));
            }
        }
        n.wire(out(write[ng - 1][j], rev(S)), inp(b, rev(S)));
    }
    for i in 0..ns {
        n.wire(Source::Input(i), inp(read[i][0], E));
    }
    for l in 0..ng {
        n.wire(out(write[l][0], rev(E)), Sink::Output(l));
    }
    // unreachable ports: pad the circuit inputs so sources and sinks balance
    let undriven = n.undriven_sinks();
    let mut unwired = n.unwired_sources();
    let pads = undriven.len() - unwired.len();
    for p in 0..pads {
        let i = n.add_input(format!("pad{p}"));
        unwired.push(Source::Input(i));
    }
    for (from, to) in unwired.into_iter().zip(undriven) {
        n.wire(from, to);
    }

    let total = n.elements.len();
    let state_map: Vec<Vec<usize>> = (0..nq)
        .map(|q| {
            let mut s = vec![V; total];
            s[bottom[q]] = H;
            s
        })
        .collect();
    n.state_map = state_map.clone();
    let maps = SimulationMaps { state_map, in_map: (0..ns).collect(), out_map: (0..ng).collect() };
    Ok(SynthesizedRsm { netlist: n, maps, layout: Layout { read, bottom, write } })
}

impl SynthesizedRsm {
    /// Element states encoding machine state `q`.
    pub fn encode(&self, q: usize) -> &[usize] {
        &self.maps.state_map[q]
    }

    pub fn set_initial_state(&mut self, q: usize) {
        for (e, &s) in self.netlist.elements.iter_mut().zip(&self.maps.state_map[q]) {
            e.init = s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{rotary_element_rsm, DEFAULT_MAX_STEPS};
    use crate::table::MoveTable;

    pub(crate) const M0: &str = "\
states q1 q2 q3
inputs a1 a2
outputs b1 b2
delta q1 a1 q2 b1
delta q1 a2 q3 b2
delta q2 a1 q2 b2
delta q2 a2 q1 b1
delta q3 a1 q1 b2
delta q3 a2 q3 b1
";

    #[test]
    fn reversed_rotary_element_is_the_inverse() {
        let re = MoveTable::rotary_element();
        for q in 0..2 {
            for a in 0..4 {
                let (q2, s) = re.step(q, a);
                assert_eq!(re.step(q2, rev(s)), (q, rev(a)));
            }
        }
    }

    fn check(m: &Rsm) -> SynthesizedRsm {
        let s = synthesize_rsm(m).unwrap();
        assert!(s.netlist.validate().is_empty(), "{:?}", s.netlist.validate());
        let c = s.netlist.compile().unwrap();
        c.verify_simulation(m, &s.maps, DEFAULT_MAX_STEPS).unwrap();
        let nq = m.num_states();
        assert_eq!(s.netlist.elements.len(), nq * (m.num_inputs() + m.num_outputs() + 1));
        assert!(s.netlist.elements.iter().all(|e| e.spec.is_rotary_element()));
        s
    }

    #[test]
    fn rotary_element_compiles() {
        check(&rotary_element_rsm());
    }

    #[test]
    fn m0_walked_transition() {
        let m = Rsm::parse(M0).unwrap();
        let s = check(&m);
        let c = s.netlist.compile().unwrap();
        let mut cfg = crate::circuit::Configuration::new(s.encode(0).to_vec());
        let exit = c.inject(&mut cfg, 1, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(exit.port, 1);
        assert_eq!(cfg.states, s.encode(2));
    }

    #[test]
    fn non_square_machine_gets_padding() {
        let m = Rsm::parse("states p r\ninputs x\noutputs u v\ndelta p x r u\ndelta r x p v\n").unwrap();
        let s = check(&m);
        assert_eq!(s.netlist.inputs, vec!["in_x", "pad0"]);
    }

    #[test]
    fn one_state_identity() {
        let m = MoveTable::identity(3).unwrap().to_rsm();
        let one = Rsm::new(
            vec!["q".into()],
            m.inputs().to_vec(),
            m.outputs().to_vec(),
            (0..3).map(|a| (0, a)).collect(),
        )
        .unwrap();
        check(&one);
    }

    #[test]
    fn all_two_symbol_tables_compile() {
        for serial in 0..24 {
            check(&MoveTable::from_serial(2, serial).unwrap().to_rsm());
        }
    }

    #[test]
    fn rejects_irreversible_and_wide_input() {
        let bad = Rsm::new(vec!["p".into()], vec!["x".into(), "y".into()], vec!["z".into(), "w".into()], vec![(0, 0), (0, 0)])
            .unwrap();
        assert!(matches!(synthesize_rsm(&bad), Err(SynthesisError::Irreversible(_))));
        let wide = Rsm::new(vec!["p".into(), "r".into()], vec!["x".into(), "y".into()], vec!["z".into()], vec![(0, 0), (1, 0), (0, 0), (1, 0)]);
        assert!(wide.is_err() || synthesize_rsm(&wide.unwrap()).is_err());
    }
}
