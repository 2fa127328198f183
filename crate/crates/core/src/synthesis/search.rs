//! Exhaustive search for small circuits of given parts that simulate a
//! target RLEM.
//!
//! Candidates are ordered by element count, then by the multiset of part
//! types, then by the pair of configurations encoding the two target
//! states, then by wiring. Wires are chosen lazily: each target transition
//! is simulated and a wire is only fixed when the token reaches an
//! unconnected port, so a wiring prefix that already misbehaves is never
//! extended. Ports no transition reaches are connected in order at the end.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::circuit::{ElementSpec, Netlist, SimulationMaps, Sink, Source, DEFAULT_MAX_STEPS};
use crate::table::MoveTable;

const NONE: u16 = u16::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Found {
        netlist: Netlist,
        maps: SimulationMaps,
        elements: usize,
        /// Search nodes visited for the winning candidate.
        nodes: u64,
    },
    Exhausted {
        bound: usize,
        nodes: u64,
    },
}

impl SearchResult {
    pub fn netlist(&self) -> Option<&Netlist> {
        match self {
            SearchResult::Found { netlist, .. } => Some(netlist),
            SearchResult::Exhausted { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub max_elems: usize,
    pub max_steps: usize,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { max_elems: 3, max_steps: DEFAULT_MAX_STEPS, parallel: true }
    }
}

/// One fixed multiset and state encoding; wiring is what gets searched.
struct Candidate<'a> {
    target: &'a MoveTable,
    tables: Vec<&'a MoveTable>,
    types: Vec<usize>,
    enc: [Vec<u8>; 2],
    kt: usize,
    offset: Vec<usize>,
    elem_of: Vec<usize>,
    n_ports: usize,
    max_steps: usize,
}

struct Dfs {
    wire: Vec<u16>,
    used: Vec<bool>,
    touched: Vec<u32>,
    nodes: u64,
}

impl<'a> Candidate<'a> {
    fn new(target: &'a MoveTable, parts: &'a [MoveTable], types: &[usize], enc: [Vec<u8>; 2], max_steps: usize) -> Self {
        let kt = target.k();
        let tables: Vec<&MoveTable> = types.iter().map(|&t| &parts[t]).collect();
        let mut offset = Vec::new();
        let mut elem_of = vec![usize::MAX; kt];
        let mut at = kt;
        for (e, t) in tables.iter().enumerate() {
            offset.push(at);
            at += t.k();
            elem_of.extend(std::iter::repeat_n(e, t.k()));
        }
        Self { target, tables, types: types.to_vec(), enc, kt, offset, elem_of, n_ports: at, max_steps }
    }

    fn transitions(&self) -> Vec<(usize, usize)> {
        (0..2).flat_map(|q| (0..self.kt).map(move |a| (q, a))).collect()
    }

    /// The wiring found and nodes visited, or just the nodes visited.
    fn run(&self) -> Result<(Vec<u16>, u64), u64> {
        let mut d = Dfs {
            wire: vec![NONE; self.n_ports],
            used: vec![false; self.n_ports],
            touched: vec![0; self.tables.len()],
            nodes: 0,
        };
        let trans = self.transitions();
        let (q, a) = trans[0];
        let found = self.go(&mut d, &trans, 0, self.enc[q].clone(), a, 0);
        if found {
            Ok((d.wire, d.nodes))
        } else {
            Err(d.nodes)
        }
    }

    fn code(&self, e: usize) -> u8 {
        self.enc[0][e] * 2 + self.enc[1][e]
    }

    /// Continues transition `ti` with the token at source `src`.
    fn go(&self, d: &mut Dfs, trans: &[(usize, usize)], ti: usize, mut cfg: Vec<u8>, mut src: usize, mut steps: usize) -> bool {
        d.nodes += 1;
        let (q, a) = trans[ti];
        let (q2, want) = self.target.step(q, a);
        loop {
            let sink = d.wire[src];
            if sink == NONE {
                return self.branch(d, trans, ti, cfg, src, steps);
            }
            let sink = sink as usize;
            if sink < self.kt {
                if sink != want || cfg != self.enc[q2] {
                    return false;
                }
                return match trans.get(ti + 1) {
                    None => true,
                    Some(&(nq, na)) => self.go(d, trans, ti + 1, self.enc[nq].clone(), na, 0),
                };
            }
            if steps == self.max_steps {
                return false;
            }
            let e = self.elem_of[sink];
            let (ns, out) = self.tables[e].step(cfg[e] as usize, sink - self.offset[e]);
            cfg[e] = ns as u8;
            src = self.offset[e] + out;
            steps += 1;
        }
    }

    fn branch(&self, d: &mut Dfs, trans: &[(usize, usize)], ti: usize, cfg: Vec<u8>, src: usize, steps: usize) -> bool {
        let (q, a) = trans[ti];
        let (q2, want) = self.target.step(q, a);
        let src_elem = (src >= self.kt).then(|| self.elem_of[src]);
        for sink in 0..self.n_ports {
            if d.used[sink] {
                continue;
            }
            if sink < self.kt {
                if sink != want || cfg != self.enc[q2] {
                    continue;
                }
            } else {
                let e = self.elem_of[sink];
                // an untouched element is interchangeable with the first
                // untouched one of the same type and encoding
                if d.touched[e] == 0 && src_elem != Some(e) {
                    let earlier = (0..e).any(|f| {
                        d.touched[f] == 0 && src_elem != Some(f) && self.types[f] == self.types[e] && self.code(f) == self.code(e)
                    });
                    if earlier {
                        continue;
                    }
                }
            }
            d.wire[src] = sink as u16;
            d.used[sink] = true;
            if let Some(e) = src_elem {
                d.touched[e] += 1;
            }
            if sink >= self.kt {
                d.touched[self.elem_of[sink]] += 1;
            }
            if self.go(d, trans, ti, cfg.clone(), src, steps) {
                return true;
            }
            d.wire[src] = NONE;
            d.used[sink] = false;
            if let Some(e) = src_elem {
                d.touched[e] -= 1;
            }
            if sink >= self.kt {
                d.touched[self.elem_of[sink]] -= 1;
            }
        }
        false
    }

    fn build(&self, parts_spec: &[ElementSpec], mut wire: Vec<u16>) -> (Netlist, SimulationMaps) {
        let mut used = vec![false; self.n_ports];
        for &w in wire.iter().filter(|&&w| w != NONE) {
            used[w as usize] = true;
        }
        let mut free = (0..self.n_ports).filter(|&s| !used[s]);
        for w in wire.iter_mut().filter(|w| **w == NONE) {
            *w = free.next().expect("balanced ports") as u16;
        }
        let mut n = Netlist::new();
        for i in 0..self.kt {
            n.add_input(MoveTable::input_name(i));
        }
        for i in 0..self.kt {
            n.add_output(MoveTable::output_name(i));
        }
        for (e, &t) in self.types.iter().enumerate() {
            n.add_element(format!("x{e}"), parts_spec[t].clone(), self.enc[0][e] as usize);
        }
        let as_source = |id: usize| {
            if id < self.kt {
                Source::Input(id)
            } else {
                let e = self.elem_of[id];
                Source::Out(e, id - self.offset[e])
            }
        };
        let as_sink = |id: usize| {
            if id < self.kt {
                Sink::Output(id)
            } else {
                let e = self.elem_of[id];
                Sink::In(e, id - self.offset[e])
            }
        };
        for (from, &to) in wire.iter().enumerate() {
            n.wire(as_source(from), as_sink(to as usize));
        }
        let state_map: Vec<Vec<usize>> =
            self.enc.iter().map(|c| c.iter().map(|&s| s as usize).collect()).collect();
        n.state_map = state_map.clone();
        let maps = SimulationMaps { state_map, in_map: (0..self.kt).collect(), out_map: (0..self.kt).collect() };
        (n, maps)
    }
}

/// Non-decreasing type sequences of length `n` over `types` part types.
fn multisets(n: usize, types: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, types: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for t in from..types {
            cur.push(t);
            rec(n, types, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, types, 0, &mut Vec::new(), &mut out);
    out
}

/// State encodings `(c0, c1)`, `c0 ≠ c1`, with per-element codes
/// non-decreasing across runs of one part type.
fn encodings(types: &[usize]) -> Vec<[Vec<u8>; 2]> {
    let n = types.len();
    let mut out = Vec::new();
    for c0 in 0u32..1 << n {
        for c1 in 0u32..1 << n {
            if c0 == c1 {
                continue;
            }
            let bit = |c: u32, e: usize| ((c >> (n - 1 - e)) & 1) as u8;
            let ordered = (1..n).all(|e| {
                types[e] != types[e - 1] || bit(c0, e - 1) * 2 + bit(c1, e - 1) <= bit(c0, e) * 2 + bit(c1, e)
            });
            if ordered {
                out.push([(0..n).map(|e| bit(c0, e)).collect(), (0..n).map(|e| bit(c1, e)).collect()]);
            }
        }
    }
    out
}

/// Searches circuits of at most `opts.max_elems` parts simulating `target`.
/// Part tables are deduplicated and sorted by `(k, serial)`.
pub fn search_circuit(target: &MoveTable, parts: &[MoveTable], opts: &SearchOptions) -> SearchResult {
    let mut parts: Vec<MoveTable> = parts.to_vec();
    parts.sort_by_key(|t| (t.k(), t.serial()));
    parts.dedup();
    let specs: Vec<ElementSpec> = parts.iter().map(|t| ElementSpec::Serial(t.id())).collect();
    let mut total = 0u64;
    for n in 1..=opts.max_elems {
        let tasks: Vec<(Vec<usize>, [Vec<u8>; 2])> = multisets(n, parts.len())
            .into_iter()
            .flat_map(|m| encodings(&m).into_iter().map(move |e| (m.clone(), e)))
            .collect();
        let attempt = |(types, enc): &(Vec<usize>, [Vec<u8>; 2])| {
            let c = Candidate::new(target, &parts, types, enc.clone(), opts.max_steps);
            match c.run() {
                Ok((wire, nodes)) => Ok((c.build(&specs, wire), nodes, n)),
                Err(nodes) => Err(nodes),
            }
        };
        let found = if opts.parallel {
            // without a hit every task runs to completion, so the sum is exact
            let failed = AtomicU64::new(0);
            let hit = tasks.par_iter().map(attempt).find_map_first(|r| match r {
                Ok(x) => Some(x),
                Err(nodes) => {
                    failed.fetch_add(nodes, Ordering::Relaxed);
                    None
                }
            });
            total += failed.into_inner();
            hit
        } else {
            let mut hit = None;
            for t in &tasks {
                match attempt(t) {
                    Ok(x) => {
                        hit = Some(x);
                        break;
                    }
                    Err(nodes) => total += nodes,
                }
            }
            hit
        };
        if let Some(((netlist, maps), nodes, elements)) = found {
            return SearchResult::Found { netlist, maps, elements, nodes };
        }
    }
    SearchResult::Exhausted { bound: opts.max_elems, nodes: total }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: usize, s: u64) -> MoveTable {
        MoveTable::from_serial(k, s).unwrap()
    }

    fn verified(target: &MoveTable, r: &SearchResult) -> usize {
        let SearchResult::Found { netlist, maps, elements, .. } = r else { panic!("not found: {r:?}") };
        let c = netlist.compile().unwrap();
        c.verify_simulation(&target.to_rsm(), maps, DEFAULT_MAX_STEPS).unwrap();
        *elements
    }

    #[test]
    fn multiset_and_encoding_counts() {
        assert_eq!(multisets(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(encodings(&[0]).len(), 2);
        // two identical parts: 16 ordered pairs of 2-bit codes minus c0 = c1
        assert_eq!(encodings(&[0, 1]).len(), 12);
        assert!(encodings(&[0, 0]).len() < 12);
    }

    #[test]
    fn part_embeds_itself() {
        for s in [3, 4, 17] {
            let target = t(2, s);
            let r = search_circuit(&target, std::slice::from_ref(&target), &SearchOptions { max_elems: 1, ..Default::default() });
            assert_eq!(verified(&target, &r), 1);
        }
    }

    #[test]
    fn weakest_element_cannot_build_2_3() {
        let r = search_circuit(&t(2, 3), &[t(2, 2)], &SearchOptions { max_elems: 2, ..Default::default() });
        assert!(matches!(r, SearchResult::Exhausted { bound: 2, .. }));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let target = t(2, 2);
        let parts = [t(2, 3)];
        for max_elems in [3, 4] {
            let a = search_circuit(&target, &parts, &SearchOptions { max_elems, parallel: true, ..Default::default() });
            let b = search_circuit(&target, &parts, &SearchOptions { max_elems, parallel: false, ..Default::default() });
            assert_eq!(a, b);
        }
        let r = search_circuit(&target, &parts, &SearchOptions { max_elems: 4, ..Default::default() });
        assert_eq!(verified(&target, &r), 4);
    }
}
