//! Reversible Turing machines in quintuple form.
//!
//! A quintuple `[p, s, s', d, q]` means: in state `p` reading `s`, write
//! `s'`, move the head in direction `d` and enter `q`. The head starts on
//! blank cell 0 with the input written from cell 1 on.

mod network;

use std::collections::HashMap;
use std::fmt::{self, Write};

use thiserror::Error;

pub use network::{
    compile_to_re, cross_validate, decompose, CompiledRtm, CrossReport, CrossRow, DecomposeError, NetworkOutcome,
    RsmNetwork,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    L,
    R,
}

impl Dir {
    pub fn delta(self) -> i64 {
        match self {
            Dir::L => -1,
            Dir::R => 1,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::L => "L",
            Dir::R => "R",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quintuple {
    pub from: usize,
    pub read: usize,
    pub write: usize,
    pub dir: Dir,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rtm {
    pub states: Vec<String>,
    pub symbols: Vec<String>,
    pub init: usize,
    pub accept: usize,
    pub reject: usize,
    pub blank: usize,
    pub quintuples: Vec<Quintuple>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RtmError {
    #[error("line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("unknown symbol `{0}` in input")]
    InputSymbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RtmViolation {
    /// Two quintuples share `(p, s)`.
    Nondeterministic(usize, usize),
    /// Two quintuples enter the same state with different moves or the
    /// same written symbol.
    Irreversible(usize, usize),
}

impl Rtm {
    pub fn parse(text: &str) -> Result<Self, RtmError> {
        let mut init = None;
        let mut accept = None;
        let mut reject = None;
        let mut blank = None;
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let toks: Vec<(usize, &str)> = line
                .split_whitespace()
                .map(|t| (t.as_ptr() as usize - line.as_ptr() as usize + 1, t))
                .collect();
            let err = |tok: usize, msg: &str| RtmError::Parse {
                line: i + 1,
                column: toks.get(tok).map_or(1, |t| t.0),
                msg: msg.to_string(),
            };
            match toks.as_slice() {
                [] => {}
                [(_, "init"), (_, v)] => init = Some(v.to_string()),
                [(_, "accept"), (_, v)] => accept = Some(v.to_string()),
                [(_, "reject"), (_, v)] => reject = Some(v.to_string()),
                [(_, "blank"), (_, v)] => blank = Some(v.to_string()),
                [_, _, _, (_, d), _] => {
                    let dir = match *d {
                        "L" => Dir::L,
                        "R" => Dir::R,
                        _ => return Err(err(3, "direction must be L or R")),
                    };
                    let t: Vec<String> = toks.iter().map(|t| t.1.to_string()).collect();
                    rows.push((t[0].clone(), t[1].clone(), t[2].clone(), dir, t[4].clone()));
                }
                _ => return Err(err(0, "expected a header line or `p s s' d q`")),
            }
        }
        let missing = |what: &str| RtmError::Parse { line: 0, column: 0, msg: format!("missing `{what}` line") };
        let init = init.ok_or_else(|| missing("init"))?;
        let accept = accept.ok_or_else(|| missing("accept"))?;
        let reject = reject.ok_or_else(|| missing("reject"))?;
        let blank = blank.ok_or_else(|| missing("blank"))?;
        let mut b = Builder::default();
        let init = b.state(&init);
        let accept = b.state(&accept);
        let reject = b.state(&reject);
        let blank = b.symbol(&blank);
        let mut quintuples = Vec::new();
        for (p, s, s2, dir, q) in rows {
            let from = b.state(&p);
            let read = b.symbol(&s);
            let write = b.symbol(&s2);
            let to = b.state(&q);
            quintuples.push(Quintuple { from, read, write, dir, to });
        }
        Ok(Rtm { states: b.states, symbols: b.symbols, init, accept, reject, blank, quintuples })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "init {}", self.states[self.init]);
        let _ = writeln!(out, "accept {}", self.states[self.accept]);
        let _ = writeln!(out, "reject {}", self.states[self.reject]);
        let _ = writeln!(out, "blank {}", self.symbols[self.blank]);
        for t in &self.quintuples {
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                self.states[t.from], self.symbols[t.read], self.symbols[t.write], t.dir, self.states[t.to]
            );
        }
        out
    }

    pub fn check(&self) -> Vec<RtmViolation> {
        let mut v = Vec::new();
        for (i, a) in self.quintuples.iter().enumerate() {
            for (j, b) in self.quintuples.iter().enumerate().skip(i + 1) {
                if a.from == b.from && a.read == b.read {
                    v.push(RtmViolation::Nondeterministic(i, j));
                }
                if a.to == b.to && (a.dir != b.dir || a.write == b.write) {
                    v.push(RtmViolation::Irreversible(i, j));
                }
            }
        }
        v
    }

    pub fn describe(&self, v: &RtmViolation) -> String {
        let q = |i: usize| {
            let t = &self.quintuples[i];
            format!(
                "[{},{},{},{},{}]",
                self.states[t.from], self.symbols[t.read], self.symbols[t.write], t.dir, self.states[t.to]
            )
        };
        match *v {
            RtmViolation::Nondeterministic(a, b) => format!("nondeterministic: {} and {}", q(a), q(b)),
            RtmViolation::Irreversible(a, b) => format!("not reversible: {} and {}", q(a), q(b)),
        }
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    /// Symbols of an input word: whitespace-separated if it contains
    /// whitespace, one character each otherwise.
    pub fn parse_input(&self, word: &str) -> Result<Vec<usize>, RtmError> {
        let toks: Vec<String> = if word.split_whitespace().count() > 1 {
            word.split_whitespace().map(str::to_string).collect()
        } else {
            word.trim().chars().map(|c| c.to_string()).collect()
        };
        toks.iter()
            .map(|t| self.symbol_index(t).ok_or_else(|| RtmError::InputSymbol(t.clone())))
            .collect()
    }

    fn lookup(&self, p: usize, s: usize) -> Option<&Quintuple> {
        self.quintuples.iter().find(|t| t.from == p && t.read == s)
    }

    pub fn initial(&self, input: &[usize]) -> RtmConfig {
        let mut tape = vec![self.blank];
        tape.extend_from_slice(input);
        let mut c = RtmConfig { state: self.init, tape, origin: 0, head: 0 };
        c.normalize(self.blank);
        c
    }

    pub fn is_final(&self, state: usize) -> bool {
        state == self.accept || state == self.reject
    }

    /// One move, or `None` if the machine has halted.
    pub fn step(&self, c: &RtmConfig) -> Option<RtmConfig> {
        if self.is_final(c.state) {
            return None;
        }
        let t = self.lookup(c.state, c.read(self.blank))?;
        let mut next = c.clone();
        next.set(c.head, t.write, self.blank);
        next.head += t.dir.delta();
        next.state = t.to;
        next.normalize(self.blank);
        Some(next)
    }

    /// The unique predecessor of `c`, if any.
    pub fn step_back(&self, c: &RtmConfig) -> Option<RtmConfig> {
        let into: Vec<&Quintuple> = self.quintuples.iter().filter(|t| t.to == c.state).collect();
        let dir = into.first()?.dir;
        let prev_head = c.head - dir.delta();
        let written = c.get(prev_head, self.blank);
        let t = into.iter().find(|t| t.write == written)?;
        let mut prev = c.clone();
        prev.set(prev_head, t.read, self.blank);
        prev.head = prev_head;
        prev.state = t.from;
        prev.normalize(self.blank);
        Some(prev)
    }

    pub fn interpret(&self, input: &[usize], fuel: usize) -> RunOutcome {
        let mut c = self.initial(input);
        let mut steps = 0;
        loop {
            if c.state == self.accept {
                return RunOutcome { verdict: Verdict::Accept, config: c, steps };
            }
            if c.state == self.reject {
                return RunOutcome { verdict: Verdict::Reject, config: c, steps };
            }
            if steps == fuel {
                return RunOutcome { verdict: Verdict::Running, config: c, steps };
            }
            match self.step(&c) {
                Some(n) => {
                    c = n;
                    steps += 1;
                }
                None => {
                    let name = self.states[c.state].clone();
                    return RunOutcome { verdict: Verdict::Halted(name), config: c, steps };
                }
            }
        }
    }
}

#[derive(Default)]
struct Builder {
    states: Vec<String>,
    symbols: Vec<String>,
    si: HashMap<String, usize>,
    yi: HashMap<String, usize>,
}

impl Builder {
    fn state(&mut self, s: &str) -> usize {
        *self.si.entry(s.to_string()).or_insert_with(|| {
            self.states.push(s.to_string());
            self.states.len() - 1
        })
    }

    fn symbol(&mut self, s: &str) -> usize {
        *self.yi.entry(s.to_string()).or_insert_with(|| {
            self.symbols.push(s.to_string());
            self.symbols.len() - 1
        })
    }
}

/// Machine state plus the non-blank part of the tape. Cell `i` is
/// `tape[i - origin]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RtmConfig {
    pub state: usize,
    pub tape: Vec<usize>,
    pub origin: i64,
    pub head: i64,
}

impl RtmConfig {
    pub fn get(&self, cell: i64, blank: usize) -> usize {
        let i = cell - self.origin;
        if i < 0 || i >= self.tape.len() as i64 {
            blank
        } else {
            self.tape[i as usize]
        }
    }

    fn read(&self, blank: usize) -> usize {
        self.get(self.head, blank)
    }

    fn set(&mut self, cell: i64, sym: usize, blank: usize) {
        while cell < self.origin {
            self.tape.insert(0, blank);
            self.origin -= 1;
        }
        while cell - self.origin >= self.tape.len() as i64 {
            self.tape.push(blank);
        }
        self.tape[(cell - self.origin) as usize] = sym;
    }

    /// Trims blanks so equal configurations compare equal.
    fn normalize(&mut self, blank: usize) {
        while self.tape.last() == Some(&blank) {
            self.tape.pop();
        }
        while self.tape.first() == Some(&blank) {
            self.tape.remove(0);
            self.origin += 1;
        }
        if self.tape.is_empty() {
            self.origin = 0;
        }
    }

    /// Cells `0..len` as a window.
    pub fn window(&self, len: usize, blank: usize) -> TapeWindow {
        TapeWindow { cells: (0..len as i64).map(|c| self.get(c, blank)).collect(), head: self.head }
    }
}

/// A finite stretch of tape starting at cell 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TapeWindow {
    pub cells: Vec<usize>,
    pub head: i64,
}

impl TapeWindow {
    pub fn render(&self, symbols: &[String]) -> String {
        let mut out = String::new();
        for (i, &c) in self.cells.iter().enumerate() {
            if i as i64 == self.head {
                let _ = write!(out, "[{}]", symbols[c]);
            } else {
                let _ = write!(out, " {} ", symbols[c]);
            }
        }
        out
    }
}

/// How a run ended, at any of the three levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
    /// Stopped in a non-final state with no applicable quintuple.
    Halted(String),
    /// Fuel or step budget used up.
    Running,
    /// The head left the finite tape window.
    WindowExceeded,
    /// The token left the network on an unexpected port.
    Exit(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("Accept"),
            Verdict::Reject => f.write_str("Reject"),
            Verdict::Halted(q) => write!(f, "Halted({q})"),
            Verdict::Running => f.write_str("Running"),
            Verdict::WindowExceeded => f.write_str("WindowExceeded"),
            Verdict::Exit(p) => write!(f, "Exit({p})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub verdict: Verdict,
    pub config: RtmConfig,
    pub steps: usize,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const PARITY: &str = "\
init q0
accept qacc
reject qrej
blank 0
q0 0 1 R q1
q1 0 1 L qacc
q1 1 0 R q2
q2 0 1 L qrej
q2 1 0 R q1
";

    pub(crate) fn parity() -> Rtm {
        Rtm::parse(PARITY).unwrap()
    }

    #[test]
    fn parses_and_round_trips() {
        let m = parity();
        assert_eq!(m.states, vec!["q0", "qacc", "qrej", "q1", "q2"]);
        assert_eq!(m.symbols, vec!["0", "1"]);
        assert_eq!(m.quintuples.len(), 5);
        assert_eq!(m.to_text(), PARITY);
        assert_eq!(Rtm::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn parity_is_reversible() {
        assert!(parity().check().is_empty());
    }

    #[test]
    fn collisions_are_named() {
        let m = Rtm::parse(&format!("{PARITY}q0 1 1 R q1\n")).unwrap();
        let v = m.check();
        assert!(v.iter().any(|x| matches!(x, RtmViolation::Irreversible(..))));
        assert!(m.describe(&v[0]).contains("[q0,1,1,R,q1]"));
        let m = Rtm::parse("init p\naccept a\nreject r\nblank 0\np 0 1 R q\nx 0 1 R q\n").unwrap();
        assert_eq!(m.check(), vec![RtmViolation::Irreversible(0, 1)]);
        let m = Rtm::parse("init p\naccept a\nreject r\nblank 0\np 0 1 R q\np 0 0 L a\n").unwrap();
        assert_eq!(m.check(), vec![RtmViolation::Nondeterministic(0, 1)]);
    }

    #[test]
    fn parity_language() {
        let m = parity();
        for n in 0..12 {
            let input = vec![1; n];
            let want = if n % 2 == 0 { Verdict::Accept } else { Verdict::Reject };
            assert_eq!(m.interpret(&input, 1000).verdict, want, "n={n}");
        }
        assert_eq!(m.interpret(&[1, 1, 1], 1).verdict, Verdict::Running);
    }

    #[test]
    fn backward_determinism_on_reached_configurations() {
        let m = parity();
        for n in 0..=5 {
            let mut c = m.initial(&vec![1; n]);
            let mut seen = std::collections::HashSet::new();
            while let Some(next) = m.step(&c) {
                assert_eq!(m.step_back(&next).as_ref(), Some(&c));
                assert!(seen.insert(next.clone()));
                c = next;
            }
        }
    }

    #[test]
    fn parse_errors() {
        let e = Rtm::parse("init q0\nq0 0 1 X q1\n").unwrap_err();
        assert!(matches!(e, RtmError::Parse { line: 2, column: 8, .. }), "{e:?}");
        assert!(Rtm::parse("q0 0 1 R q1\n").is_err());
        assert!(parity().parse_input("12").is_err());
        assert_eq!(parity().parse_input("1 1 0").unwrap(), vec![1, 1, 0]);
    }
}
