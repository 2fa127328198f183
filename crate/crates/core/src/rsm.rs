//! Sequential machines `(Q, Σ, Γ, δ)` with `δ: Q×Σ → Q×Γ`.
//!
//! An [`Rsm`] always holds a total move function. Injectivity is checked by
//! [`Rsm::is_reversible`]; circuits and synthesis refuse machines that fail
//! it.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RsmError {
    #[error("machine needs at least one state, input and output")]
    Empty,
    #[error("move table has {got} entries, expected {expected}")]
    NotTotal { expected: usize, got: usize },
    #[error("transition {index} targets ({state}, {output}) which is out of range")]
    Range { index: usize, state: usize, output: usize },
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not reversible: {0}")]
    NotReversible(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rsm {
    states: Vec<String>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    delta: Vec<(usize, usize)>,
}

impl Rsm {
    /// `delta[q * |Σ| + σ] = (q', γ)`.
    pub fn new(
        states: Vec<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        delta: Vec<(usize, usize)>,
    ) -> Result<Self, RsmError> {
        if states.is_empty() || inputs.is_empty() || outputs.is_empty() {
            return Err(RsmError::Empty);
        }
        let expected = states.len() * inputs.len();
        if delta.len() != expected {
            return Err(RsmError::NotTotal { expected, got: delta.len() });
        }
        for (index, &(state, output)) in delta.iter().enumerate() {
            if state >= states.len() || output >= outputs.len() {
                return Err(RsmError::Range { index, state, output });
            }
        }
        for (kind, names) in [("state", &states), ("input", &inputs), ("output", &outputs)] {
            let mut seen = HashMap::new();
            for n in names.iter() {
                if seen.insert(n.as_str(), ()).is_some() {
                    return Err(RsmError::DuplicateName { kind, name: n.clone() });
                }
            }
        }
        Ok(Self { states, inputs, outputs, delta })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    #[inline]
    pub fn step(&self, state: usize, input: usize) -> (usize, usize) {
        self.delta[state * self.inputs.len() + input]
    }

    pub fn delta(&self) -> &[(usize, usize)] {
        &self.delta
    }

    /// True iff no two distinct `(q, σ)` share an image.
    pub fn is_reversible(&self) -> bool {
        self.collision().is_none()
    }

    /// The first pair of domain points mapping to the same image, if any.
    pub fn collision(&self) -> Option<((usize, usize), (usize, usize))> {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let ni = self.inputs.len();
        for (j, img) in self.delta.iter().enumerate() {
            if let Some(&prev) = seen.get(img) {
                return Some(((prev / ni, prev % ni), (j / ni, j % ni)));
            }
            seen.insert(*img, j);
        }
        None
    }

    pub fn ensure_reversible(&self) -> Result<(), RsmError> {
        match self.collision() {
            None => Ok(()),
            Some(((q1, a1), (q2, a2))) => Err(RsmError::NotReversible(format!(
                "δ({}, {}) = δ({}, {})",
                self.states[q1], self.inputs[a1], self.states[q2], self.inputs[a2]
            ))),
        }
    }

    /// Inverse table: `inverse[q' * |Γ| + γ] = Some((q, σ))`.
    pub fn inverse_table(&self) -> Vec<Option<(usize, usize)>> {
        let ni = self.inputs.len();
        let no = self.outputs.len();
        let mut inv = vec![None; self.states.len() * no];
        for (j, &(q, g)) in self.delta.iter().enumerate() {
            inv[q * no + g] = Some((j / ni, j % ni));
        }
        inv
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|s| s == name)
    }

    pub fn output_index(&self, name: &str) -> Option<usize> {
        self.outputs.iter().position(|s| s == name)
    }

    /// Partition refinement over output behaviour. Returns a block id per
    /// state; two states share a block iff every input word yields the same
    /// output word from both.
    pub fn equivalence_classes(&self) -> Vec<usize> {
        let nq = self.states.len();
        let ni = self.inputs.len();
        let mut block = vec![0usize; nq];
        loop {
            let mut sig_ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![0usize; nq];
            for q in 0..nq {
                let mut sig = vec![block[q]];
                for a in 0..ni {
                    let (q2, g) = self.step(q, a);
                    sig.push(g);
                    sig.push(block[q2]);
                }
                let n = sig_ids.len();
                next[q] = *sig_ids.entry(sig).or_insert(n);
            }
            let changed = sig_ids.len() != block.iter().collect::<std::collections::HashSet<_>>().len();
            block = next;
            if !changed {
                return block;
            }
        }
    }

    /// Extends a partial injective move function to a total one whose input
    /// and output alphabets have equal size.
    ///
    /// Undefined entries take unused images in index order. Dummy inputs and
    /// outputs named `<prefix>in<i>` / `<prefix>out<i>` are appended when the
    /// alphabets must grow.
    pub fn complete(
        states: Vec<String>,
        mut inputs: Vec<String>,
        mut outputs: Vec<String>,
        partial: &[Option<(usize, usize)>],
        prefix: &str,
    ) -> Result<Self, RsmError> {
        let nq = states.len();
        let ni0 = inputs.len();
        if partial.len() != nq * ni0 {
            return Err(RsmError::NotTotal { expected: nq * ni0, got: partial.len() });
        }
        let width = ni0.max(outputs.len());
        let mut k = 0;
        while inputs.len() < width {
            inputs.push(format!("{prefix}in{k}"));
            k += 1;
        }
        k = 0;
        while outputs.len() < width {
            outputs.push(format!("{prefix}out{k}"));
            k += 1;
        }
        let mut used = vec![false; nq * width];
        for &(q, g) in partial.iter().flatten() {
            let code = q * width + g;
            if used[code] {
                return Err(RsmError::NotReversible(format!(
                    "partial move function maps twice onto ({}, {})",
                    states[q], outputs[g]
                )));
            }
            used[code] = true;
        }
        let mut free = (0..nq * width).filter(|&c| !used[c]);
        let mut delta = Vec::with_capacity(nq * width);
        for q in 0..nq {
            for a in 0..width {
                let img = if a < ni0 { partial[q * ni0 + a] } else { None };
                let img = match img {
                    Some(img) => img,
                    None => {
                        let c = free.next().expect("square alphabets leave exactly enough images");
                        (c / width, c % width)
                    }
                };
                delta.push(img);
            }
        }
        Self::new(states, inputs, outputs, delta)
    }

    /// Parses the line-oriented machine format:
    ///
    /// ```text
    /// states q1 q2 q3
    /// inputs a1 a2
    /// outputs b1 b2
    /// delta q1 a1 q2 b1
    /// ```
    pub fn parse(text: &str) -> Result<Self, RsmError> {
        let err = |line: usize, msg: String| RsmError::Parse { line, msg };
        let mut states: Option<Vec<String>> = None;
        let mut inputs: Option<Vec<String>> = None;
        let mut outputs: Option<Vec<String>> = None;
        let mut rows: Vec<(usize, [String; 4])> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap();
            let rest: Vec<String> = toks.map(str::to_string).collect();
            match head {
                "states" => states = Some(rest),
                "inputs" => inputs = Some(rest),
                "outputs" => outputs = Some(rest),
                "delta" => {
                    let [p, a, q, b]: [String; 4] = rest
                        .try_into()
                        .map_err(|_| err(line_no, "delta needs `p a q b`".into()))?;
                    rows.push((line_no, [p, a, q, b]));
                }
                other => return Err(err(line_no, format!("unknown directive `{other}`"))),
            }
        }
        let states = states.ok_or_else(|| err(0, "missing `states`".into()))?;
        let inputs = inputs.ok_or_else(|| err(0, "missing `inputs`".into()))?;
        let outputs = outputs.ok_or_else(|| err(0, "missing `outputs`".into()))?;
        let idx = |names: &[String], n: &str, line: usize, what: &str| {
            names
                .iter()
                .position(|s| s == n)
                .ok_or_else(|| err(line, format!("unknown {what} `{n}`")))
        };
        let mut delta = vec![None; states.len() * inputs.len()];
        for (line, [p, a, q, b]) in rows {
            let p = idx(&states, &p, line, "state")?;
            let a = idx(&inputs, &a, line, "input")?;
            let q = idx(&states, &q, line, "state")?;
            let b = idx(&outputs, &b, line, "output")?;
            let slot = &mut delta[p * inputs.len() + a];
            if slot.is_some() {
                return Err(err(line, "duplicate delta entry".into()));
            }
            *slot = Some((q, b));
        }
        let ni = inputs.len();
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(j, d)| {
                d.ok_or_else(|| {
                    err(0, format!("delta undefined for ({}, {})", states[j / ni], inputs[j % ni]))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(states, inputs, outputs, delta)
    }
}

impl fmt::Display for Rsm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states {}", self.states.join(" "))?;
        writeln!(f, "inputs {}", self.inputs.join(" "))?;
        writeln!(f, "outputs {}", self.outputs.join(" "))?;
        for q in 0..self.states.len() {
            for a in 0..self.inputs.len() {
                let (q2, g) = self.step(q, a);
                writeln!(
                    f,
                    "delta {} {} {} {}",
                    self.states[q], self.inputs[a], self.states[q2], self.outputs[g]
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::MoveTable;

    const M0: &str = "\
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
    fn m0_is_reversible() {
        let m = Rsm::parse(M0).unwrap();
        assert!(m.is_reversible());
        assert_eq!(m.step(0, 1), (2, 1));
    }

    #[test]
    fn collision_detected() {
        let text = M0.replace("delta q3 a1 q1 b2", "delta q3 a1 q2 b1");
        let m = Rsm::parse(&text).unwrap();
        assert!(!m.is_reversible());
        assert_eq!(m.collision(), Some(((0, 0), (2, 0))));
        assert!(m.ensure_reversible().is_err());
    }

    #[test]
    fn rotary_element_is_reversible() {
        assert!(MoveTable::rotary_element().to_rsm().is_reversible());
    }

    #[test]
    fn partial_tables_rejected() {
        let text = M0.replace("delta q3 a2 q3 b1\n", "");
        assert!(matches!(Rsm::parse(&text), Err(RsmError::Parse { .. })));
    }

    #[test]
    fn display_round_trip() {
        let m = Rsm::parse(M0).unwrap();
        assert_eq!(Rsm::parse(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn completion_squares_alphabets() {
        let partial = vec![Some((0, 2)), None, Some((1, 0)), None];
        let m = Rsm::complete(
            vec!["x".into(), "y".into()],
            vec!["i".into(), "j".into()],
            vec!["o0".into(), "o1".into(), "o2".into()],
            &partial,
            "pad_",
        )
        .unwrap();
        assert_eq!(m.num_inputs(), 3);
        assert_eq!(m.num_outputs(), 3);
        assert!(m.is_reversible());
        assert_eq!(m.step(0, 0), (0, 2));
        assert_eq!(m.step(1, 0), (1, 0));
    }

    #[test]
    fn equivalence_classes_two_state() {
        // 2-17 distinguishes its states, the identity wire table does not.
        let t = MoveTable::from_serial(2, 17).unwrap().to_rsm();
        let b = t.equivalence_classes();
        assert_ne!(b[0], b[1]);
        let w = MoveTable::new(2, vec![2, 3, 0, 1]).unwrap().to_rsm();
        let b = w.equivalence_classes();
        assert_eq!(b[0], b[1]);
    }
}
