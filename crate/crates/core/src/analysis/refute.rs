//! Certificates that a 2-2 circuit does not simulate 2-3, 2-4 or 2-17.

use std::fmt::Write;

use super::{compile_two_two, AnalysisError, WPartition};
use crate::circuit::{Circuit, Configuration, Netlist, SimulationMaps, Sink, Source, DEFAULT_MAX_STEPS};
use crate::table::{MoveTable, RlemId};

/// One execution of the witness from one start configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefutationRun {
    /// Target state the start configuration is claimed to encode.
    pub target_state: usize,
    pub start: Vec<usize>,
    /// Target outputs the witness must produce.
    pub required: Vec<usize>,
    /// Circuit output ports observed.
    pub observed: Vec<usize>,
    /// First witness position whose observed output is wrong.
    pub divergence: Option<usize>,
    /// Position by which the budget forces a wrong output.
    pub bound: Option<usize>,
}

impl RefutationRun {
    /// The execution diverged no later than the counting argument predicts.
    pub fn confirmed(&self) -> bool {
        matches!((self.divergence, self.bound), (Some(d), Some(b)) if d <= b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub target: RlemId,
    pub partition: WPartition,
    /// `|E_WW̄|`.
    pub budget: usize,
    /// One driving unit, as target input indices.
    pub unit: Vec<usize>,
    /// `budget + 1` units.
    pub witness: Vec<usize>,
    pub runs: Vec<RefutationRun>,
}

impl Refutation {
    pub fn confirmed(&self) -> bool {
        !self.runs.is_empty() && self.runs.iter().all(RefutationRun::confirmed)
    }

    pub fn certificate(&self, n: &Netlist) -> String {
        let t = MoveTable::from_id(self.target).to_rsm();
        let mut out = String::new();
        let _ = writeln!(out, "target: {}", self.target);
        let _ = writeln!(out, "{}", self.partition.describe(n));
        let _ = writeln!(out, "budget: {}", self.budget);
        let word = |w: &[usize], names: &[String]| w.iter().map(|&x| names[x].as_str()).collect::<Vec<_>>().join("");
        let _ = writeln!(out, "witness: {} (length {})", word(&self.witness, t.inputs()), self.witness.len());
        for r in &self.runs {
            let start: Vec<String> = r.start.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "start: {} as {}", start.join(","), t.states()[r.target_state]);
            let _ = writeln!(out, "  required: {}", word(&r.required, t.outputs()));
            let _ = writeln!(out, "  observed: {}", word(&r.observed, &n.outputs));
            let pos = |p: Option<usize>| p.map_or("none".to_string(), |p| (p + 1).to_string());
            let _ = writeln!(out, "  divergence: {}", pos(r.divergence));
            let _ = writeln!(out, "  bound: {}", pos(r.bound));
        }
        let _ = writeln!(out, "confirmed: {}", self.confirmed());
        out
    }
}

/// Driving unit and target start states for each refutable target.
fn driving(target: RlemId) -> Option<(Vec<usize>, Vec<usize>)> {
    match (target.k, target.serial) {
        (2, 3) => Some((vec![1, 1], vec![0])),
        (2, 4) => Some((vec![1, 0], vec![0])),
        (2, 17) => Some((vec![1, 1], vec![0, 1])),
        _ => None,
    }
}

/// First witness position at which producing `required` would push the
/// armed count outside `0..=budget`.
fn counting_bound(
    p: &WPartition,
    start: &[usize],
    maps: &SimulationMaps,
    witness: &[usize],
    required: &[usize],
) -> Option<usize> {
    let mut d = p.down_count(start) as i64;
    for (i, (&x, &y)) in witness.iter().zip(required).enumerate() {
        let entry_w = p.source_in_w(Source::Input(maps.in_map[x]));
        let exit_w = p.sink_in_w(Sink::Output(maps.out_map[y]));
        d += i64::from(exit_w) - i64::from(entry_w);
        if d < 0 || d > p.budget() as i64 {
            return Some(i);
        }
    }
    None
}

fn run(
    c: &Circuit,
    p: &WPartition,
    target: &MoveTable,
    maps: &SimulationMaps,
    witness: &[usize],
    q: usize,
    start: Vec<usize>,
) -> Result<RefutationRun, AnalysisError> {
    let mut required = Vec::with_capacity(witness.len());
    let mut tq = q;
    for &x in witness {
        let (q2, y) = target.step(tq, x);
        required.push(y);
        tq = q2;
    }
    let bound = counting_bound(p, &start, maps, witness, &required);
    let mut cfg = Configuration::new(start.clone());
    let mut observed = Vec::with_capacity(witness.len());
    let mut divergence = None;
    for (i, &x) in witness.iter().enumerate() {
        let exit = c.inject(&mut cfg, maps.in_map[x], DEFAULT_MAX_STEPS)?;
        observed.push(exit.port);
        if divergence.is_none() && exit.port != maps.out_map[required[i]] {
            divergence = Some(i);
        }
    }
    Ok(RefutationRun { target_state: q, start, required, observed, divergence, bound })
}

/// Refutes the claim that `n` simulates `target` under `maps`. An empty
/// state map means no encoding is claimed and every element configuration
/// is tried as the start.
pub fn refute(n: &Netlist, target: RlemId, maps: &SimulationMaps) -> Result<Refutation, AnalysisError> {
    let (unit, starts) =
        driving(target).ok_or_else(|| AnalysisError::NotApplicable(format!("no driving sequence for {target}")))?;
    let c = compile_two_two(n)?;
    let fits = |m: &[usize], len: usize| {
        m.len() == 2 && m[0] != m[1] && m.iter().all(|&x| x < len)
    };
    if !fits(&maps.in_map, c.num_inputs()) || !fits(&maps.out_map, c.num_outputs()) {
        return Err(AnalysisError::NotApplicable("port maps do not pair two ports with two ports".into()));
    }
    let m = c.num_elements();
    if !maps.state_map.is_empty() && (maps.state_map.len() != 2 || maps.state_map.iter().any(|s| s.len() != m || s.iter().any(|&x| x > 1))) {
        return Err(AnalysisError::NotApplicable("state map does not encode two states".into()));
    }
    if maps.state_map.is_empty() && m > 16 {
        return Err(AnalysisError::NotApplicable("too many elements to try every start".into()));
    }
    let p = WPartition::from_seed(&c, maps.in_map[0]);
    p.check_invariants(&c)?;
    let budget = p.budget();
    let witness: Vec<usize> = unit.iter().copied().cycle().take(unit.len() * (budget + 1)).collect();
    let t = MoveTable::from_id(target);
    let mut runs = Vec::new();
    for &q in &starts {
        if maps.state_map.is_empty() {
            for bits in 0..1usize << m {
                let start = (0..m).map(|e| (bits >> e) & 1).collect();
                runs.push(run(&c, &p, &t, maps, &witness, q, start)?);
            }
        } else {
            runs.push(run(&c, &p, &t, maps, &witness, q, maps.state_map[q].clone())?);
        }
    }
    Ok(Refutation { target, partition: p, budget, unit, witness, runs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{ElementSpec, Netlist};

    fn positional(state_map: Vec<Vec<usize>>) -> SimulationMaps {
        SimulationMaps { state_map, in_map: vec![0, 1], out_map: vec![0, 1] }
    }

    #[test]
    fn pure_wiring_is_refuted_at_once() {
        for text in ["in a b\nout s t\nwire a -> s\nwire b -> t\n", "in a b\nout s t\nwire a -> t\nwire b -> s\n"] {
            let n = Netlist::parse(text).unwrap();
            for id in [3, 4, 17] {
                let r = refute(&n, RlemId { k: 2, serial: id }, &positional(vec![])).unwrap();
                assert_eq!(r.budget, 0);
                assert!(r.confirmed(), "{}", r.certificate(&n));
                assert!(r.runs.iter().all(|x| x.divergence.unwrap() <= 1));
            }
        }
    }

    #[test]
    fn driving_sequences_match_targets() {
        let t4 = MoveTable::from_serial(2, 4).unwrap();
        let (mut q, mut outs) = (0, vec![]);
        for &x in [1, 0, 1, 0].iter() {
            let (q2, y) = t4.step(q, x);
            outs.push(y);
            q = q2;
        }
        assert_eq!(outs, [1, 1, 1, 1]);
    }

    #[test]
    fn refuses_other_targets_and_elements() {
        let n = Netlist::parse("in a b\nout s t\nwire a -> s\nwire b -> t\n").unwrap();
        assert!(matches!(refute(&n, RlemId { k: 2, serial: 2 }, &positional(vec![])), Err(AnalysisError::NotApplicable(_))));
        let mut bad = Netlist::parse("in a b\nout s t\nelem e 2-3\nwire a -> e.in0\nwire b -> e.in1\nwire e.out0 -> s\nwire e.out1 -> t\n").unwrap();
        assert!(matches!(refute(&bad, RlemId { k: 2, serial: 3 }, &positional(vec![])), Err(AnalysisError::NotTwoTwo(_))));
        bad.elements[0].spec = ElementSpec::Serial(super::super::TWO_TWO);
        let m = SimulationMaps { state_map: vec![], in_map: vec![0, 0], out_map: vec![0, 1] };
        assert!(matches!(refute(&bad, RlemId { k: 2, serial: 3 }, &m), Err(AnalysisError::NotApplicable(_))));
        let r = refute(&bad, RlemId { k: 2, serial: 3 }, &positional(vec![vec![0], vec![1]])).unwrap();
        assert!(r.confirmed());
        assert_eq!(r.witness, [1, 1, 1, 1]);
    }
}
