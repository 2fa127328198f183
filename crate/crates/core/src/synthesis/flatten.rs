//! Replacing every non-RE element of a netlist by its compiled RE circuit.

use std::ops::Range;
use std::sync::Arc;

use super::compile::{synthesize_rsm, SynthesisError, SynthesizedRsm};
use crate::circuit::{Netlist, Sink, Source};
use crate::rsm::Rsm;

#[derive(Debug, Clone)]
pub struct Flattened {
    pub netlist: Netlist,
    /// Flattened element indices of each original element.
    pub ranges: Vec<Range<usize>>,
    /// Per original element: encoding of each of its states, or `None` for
    /// REs that were kept as they are.
    encodings: Vec<Option<Arc<SynthesizedRsm>>>,
}

impl Flattened {
    /// Flattened element states for original element states `states`.
    pub fn encode(&self, states: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.netlist.elements.len());
        for (e, &s) in states.iter().enumerate() {
            match &self.encodings[e] {
                None => out.push(s),
                Some(sub) => out.extend_from_slice(sub.encode(s)),
            }
        }
        out
    }

    /// Inverse of [`Flattened::encode`]; `None` if some block encodes no state.
    pub fn decode(&self, flat: &[usize]) -> Option<Vec<usize>> {
        self.ranges
            .iter()
            .zip(&self.encodings)
            .map(|(r, enc)| match enc {
                None => Some(flat[r.start]),
                Some(sub) => sub.maps.state_map.iter().position(|m| m[..] == flat[r.clone()]),
            })
            .collect()
    }
}

/// Where a token goes after crossing one side of the flattening boundary.
#[derive(Clone, Copy)]
enum At {
    Outer(Sink),
    Inner(usize, Sink),
}

/// Flattens `n` into an RE-only netlist. Unused inputs of compiled blocks
/// become circuit inputs named `<element>_<pad>`.
pub fn flatten_to_re(n: &Netlist) -> Result<Flattened, SynthesisError> {
    let mut cache: Vec<(Arc<Rsm>, Arc<SynthesizedRsm>)> = Vec::new();
    let mut encodings = Vec::with_capacity(n.elements.len());
    let mut out = Netlist::new();
    out.inputs = n.inputs.clone();
    out.outputs = n.outputs.clone();
    let mut ranges = Vec::with_capacity(n.elements.len());
    for e in &n.elements {
        let start = out.elements.len();
        if e.spec.is_rotary_element() {
            out.add_element(e.name.clone(), e.spec.clone(), e.init);
            encodings.push(None);
        } else {
            let m = e.spec.machine();
            let sub = match cache.iter().find(|(k, _)| **k == *m) {
                Some((_, s)) => s.clone(),
                None => {
                    let s = Arc::new(synthesize_rsm(&m)?);
                    cache.push((m, s.clone()));
                    s
                }
            };
            for (x, &init) in sub.netlist.elements.iter().zip(sub.encode(e.init)) {
                out.add_element(format!("{}__{}", e.name, x.name), x.spec.clone(), init);
            }
            encodings.push(Some(sub));
        }
        ranges.push(start..out.elements.len());
    }

    let sub_of = |e: usize| encodings[e].as_deref();
    // follow a sink through block boundaries until it lands on a real sink
    let resolve = |mut at: At| -> Sink {
        loop {
            match at {
                At::Outer(Sink::Output(o)) => return Sink::Output(o),
                At::Outer(Sink::In(e, p)) => match sub_of(e) {
                    None => return Sink::In(ranges[e].start, p),
                    Some(s) => at = At::Inner(e, s.netlist.wires[&Source::Input(s.maps.in_map[p])]),
                },
                At::Inner(e, Sink::In(x, p)) => return Sink::In(ranges[e].start + x, p),
                At::Inner(e, Sink::Output(o)) => {
                    let s = sub_of(e).unwrap();
                    let g = s.maps.out_map.iter().position(|&x| x == o).expect("every block output is mapped");
                    at = At::Outer(n.wires[&Source::Out(e, g)]);
                }
            }
        }
    };
    for i in 0..n.inputs.len() {
        out.wire(Source::Input(i), resolve(At::Outer(n.wires[&Source::Input(i)])));
    }
    for (e, enc) in encodings.iter().enumerate() {
        match enc {
            None => {
                for p in 0..4 {
                    out.wire(Source::Out(ranges[e].start, p), resolve(At::Outer(n.wires[&Source::Out(e, p)])));
                }
            }
            Some(s) => {
                for (&from, &to) in &s.netlist.wires {
                    let src = match from {
                        Source::Out(x, p) => Source::Out(ranges[e].start + x, p),
                        Source::Input(i) if s.maps.in_map.contains(&i) => continue,
                        Source::Input(i) => {
                            let pad = out.add_input(format!("{}_{}", n.elements[e].name, s.netlist.inputs[i]));
                            Source::Input(pad)
                        }
                    };
                    out.wire(src, resolve(At::Inner(e, to)));
                }
            }
        }
    }
    Ok(Flattened { netlist: out, ranges, encodings })
}
