//! Text form of a netlist.
//!
//! ```text
//! # comment
//! in a b
//! out s t
//! def cell
//!   states q0 q1
//!   inputs x y
//!   outputs u v
//!   delta q0 x q1 u
//!   ...
//! end
//! elem r1 2-3 init=0
//! elem r2 RE init=V
//! elem c @cell
//! wire a -> r1.in0
//! wire r1.out1 -> r2.w
//! state 0 0,1,0
//! ```
//!
//! Element specs are `K-N`, `RE`, `perm=c0,c1,...` or `@name` for a machine
//! defined in a `def` block. Element ports are written `elem.inJ`,
//! `elem.outJ`, or by the machine's own symbol name. `state i s0,s1,...`
//! records the element states encoding target state `i` (`-` when there are
//! no elements).

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write};
use std::sync::Arc;

use thiserror::Error;

use super::{valid_name, ElementSpec, Netlist, Sink, Source};
use crate::rsm::Rsm;
use crate::table::MoveTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
    toks: Vec<(usize, &'a str)>,
}

impl Line<'_> {
    fn err(&self, tok: usize, msg: impl Into<String>) -> ParseError {
        let column = self.toks.get(tok).map_or(self.text.len() + 1, |t| t.0 + 1);
        ParseError { line: self.no, column, msg: msg.into() }
    }
}

fn tokenize(no: usize, raw: &str) -> Line<'_> {
    let text = raw.split('#').next().unwrap_or("");
    let mut toks = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                toks.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        toks.push((s, &text[s..]));
    }
    Line { no, text, toks }
}

pub(super) fn parse(text: &str) -> Result<Netlist, ParseError> {
    let lines: Vec<Line> = text.lines().enumerate().map(|(i, l)| tokenize(i + 1, l)).collect();
    let mut n = Netlist::new();
    let mut defs: HashMap<String, Arc<Rsm>> = HashMap::new();
    let mut deferred: Vec<&Line> = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let l = &lines[i];
        i += 1;
        let Some(&(_, head)) = l.toks.first() else { continue };
        match head {
            "in" | "out" => {
                if l.toks.len() < 2 {
                    return Err(l.err(1, format!("`{head}` needs at least one name")));
                }
                for (t, &(_, name)) in l.toks.iter().enumerate().skip(1) {
                    if !valid_name(name) {
                        return Err(l.err(t, format!("invalid port name `{name}`")));
                    }
                    if head == "in" {
                        n.add_input(name);
                    } else {
                        n.add_output(name);
                    }
                }
            }
            "def" => {
                let [_, (_, name)] = l.toks[..] else {
                    return Err(l.err(1, "expected `def <name>`"));
                };
                let mut body = String::new();
                let start = l.no;
                loop {
                    let Some(b) = lines.get(i) else {
                        return Err(ParseError { line: start, column: 1, msg: "unterminated `def`".into() });
                    };
                    i += 1;
                    if b.toks.first().map(|t| t.1) == Some("end") {
                        break;
                    }
                    body.push_str(b.text);
                    body.push('\n');
                }
                let m = Rsm::parse(&body).map_err(|e| ParseError {
                    line: start,
                    column: 1,
                    msg: format!("in machine `{name}`: {e}"),
                })?;
                if defs.insert(name.to_string(), Arc::new(m)).is_some() {
                    return Err(l.err(1, format!("machine `{name}` defined twice")));
                }
            }
            "elem" => parse_elem(l, &defs, &mut n)?,
            "wire" | "state" => deferred.push(l),
            other => return Err(l.err(0, format!("unknown directive `{other}`"))),
        }
    }
    let machines: Vec<Arc<Rsm>> = n.elements.iter().map(|e| e.spec.machine()).collect();
    let mut state_map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut driven = std::collections::HashSet::new();
    for l in deferred {
        if l.toks[0].1 == "wire" {
            if l.toks.len() != 4 || l.toks[2].1 != "->" {
                return Err(l.err(0, "expected `wire <from> -> <to>`"));
            }
            let from = source(&n, &machines, l.toks[1].1).map_err(|m| l.err(1, m))?;
            let to = sink(&n, &machines, l.toks[3].1).map_err(|m| l.err(3, m))?;
            if !driven.insert(to) {
                return Err(l.err(3, format!("not injective: `{}` is driven twice", l.toks[3].1)));
            }
            if n.wires.insert(from, to).is_some() {
                return Err(l.err(1, format!("not a function: `{}` is wired twice", l.toks[1].1)));
            }
        } else {
            if l.toks.len() != 3 {
                return Err(l.err(0, "expected `state <index> <s0>,<s1>,...`"));
            }
            let idx: usize = l.toks[1].1.parse().map_err(|_| l.err(1, "bad state index"))?;
            let states = if l.toks[2].1 == "-" {
                Vec::new()
            } else {
                l.toks[2]
                    .1
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<usize>, _>>()
                    .map_err(|_| l.err(2, "bad state list"))?
            };
            if state_map.insert(idx, states).is_some() {
                return Err(l.err(1, format!("state {idx} given twice")));
            }
        }
    }
    for (expect, (&idx, states)) in state_map.iter().enumerate() {
        if idx != expect {
            return Err(ParseError { line: 0, column: 0, msg: format!("state map is missing entry {expect}") });
        }
        n.state_map.push(states.clone());
    }
    Ok(n)
}

fn parse_elem(l: &Line, defs: &HashMap<String, Arc<Rsm>>, n: &mut Netlist) -> Result<(), ParseError> {
    if l.toks.len() < 3 || l.toks.len() > 4 {
        return Err(l.err(0, "expected `elem <name> <spec> [init=<state>]`"));
    }
    let name = l.toks[1].1;
    if !valid_name(name) {
        return Err(l.err(1, format!("invalid element name `{name}`")));
    }
    let spec_text = l.toks[2].1;
    let spec = if let Some(d) = spec_text.strip_prefix('@') {
        ElementSpec::Machine(defs.get(d).cloned().ok_or_else(|| l.err(2, format!("unknown machine `{d}`")))?)
    } else if spec_text.eq_ignore_ascii_case("re") {
        ElementSpec::RotaryElement
    } else if spec_text.starts_with("perm=") {
        ElementSpec::Perm(MoveTable::parse_spec(spec_text).map_err(|e| l.err(2, e.to_string()))?)
    } else {
        ElementSpec::Serial(spec_text.parse().map_err(|e: crate::table::TableError| l.err(2, e.to_string()))?)
    };
    let init = match l.toks.get(3) {
        None => 0,
        Some(&(_, tok)) => {
            let v = tok.strip_prefix("init=").ok_or_else(|| l.err(3, "expected `init=<state>`"))?;
            match v.parse::<usize>() {
                Ok(x) => x,
                Err(_) => spec
                    .machine()
                    .state_index(v)
                    .ok_or_else(|| l.err(3, format!("unknown state `{v}`")))?,
            }
        }
    };
    n.add_element(name, spec, init);
    Ok(())
}

fn element_port<'a>(n: &Netlist, text: &'a str) -> Result<Option<(usize, &'a str)>, String> {
    let Some((e, p)) = text.split_once('.') else { return Ok(None) };
    let idx = n.element_index(e).ok_or_else(|| format!("unknown element `{e}`"))?;
    Ok(Some((idx, p)))
}

fn source(n: &Netlist, machines: &[Arc<Rsm>], text: &str) -> Result<Source, String> {
    match element_port(n, text)? {
        None => n.input_index(text).map(Source::Input).ok_or_else(|| format!("unknown circuit input `{text}`")),
        Some((e, p)) => {
            let port = p
                .strip_prefix("out")
                .and_then(|x| x.parse::<usize>().ok())
                .or_else(|| machines[e].output_index(p))
                .ok_or_else(|| format!("unknown output port `{text}`"))?;
            Ok(Source::Out(e, port))
        }
    }
}

fn sink(n: &Netlist, machines: &[Arc<Rsm>], text: &str) -> Result<Sink, String> {
    match element_port(n, text)? {
        None => n.output_index(text).map(Sink::Output).ok_or_else(|| format!("unknown circuit output `{text}`")),
        Some((e, p)) => {
            let port = p
                .strip_prefix("in")
                .and_then(|x| x.parse::<usize>().ok())
                .or_else(|| machines[e].input_index(p))
                .ok_or_else(|| format!("unknown input port `{text}`"))?;
            Ok(Sink::In(e, port))
        }
    }
}

pub(super) fn serialize(n: &Netlist) -> String {
    let mut out = String::new();
    if !n.inputs.is_empty() {
        let _ = writeln!(out, "in {}", n.inputs.join(" "));
    }
    if !n.outputs.is_empty() {
        let _ = writeln!(out, "out {}", n.outputs.join(" "));
    }
    let mut defs: Vec<Arc<Rsm>> = Vec::new();
    for e in &n.elements {
        if let ElementSpec::Machine(m) = &e.spec {
            if !defs.iter().any(|d| d == m) {
                defs.push(m.clone());
            }
        }
    }
    for (i, m) in defs.iter().enumerate() {
        let _ = writeln!(out, "def m{i}");
        for line in m.to_string().lines() {
            let _ = writeln!(out, "  {line}");
        }
        let _ = writeln!(out, "end");
    }
    for e in &n.elements {
        let spec = match &e.spec {
            ElementSpec::Serial(id) => id.to_string(),
            ElementSpec::RotaryElement => "RE".into(),
            ElementSpec::Perm(t) => {
                let codes: Vec<String> = t.entries().iter().map(|c| c.to_string()).collect();
                format!("perm={}", codes.join(","))
            }
            ElementSpec::Machine(m) => format!("@m{}", defs.iter().position(|d| d == m).unwrap()),
        };
        let _ = writeln!(out, "elem {} {} init={}", e.name, spec, e.init);
    }
    for (&from, &to) in &n.wires {
        let _ = writeln!(out, "wire {} -> {}", n.source_name(from), n.sink_name(to));
    }
    for (i, states) in n.state_map.iter().enumerate() {
        let list = if states.is_empty() {
            "-".to_string()
        } else {
            states.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
        };
        let _ = writeln!(out, "state {i} {list}");
    }
    out
}

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two cells
in a b
out s t
def sw
  states p
  inputs x y
  outputs u v
  delta p x p v
  delta p y p u
end
elem r 2-3 init=1
elem c @sw
wire a -> r.in0
wire b -> c.x
wire r.out0 -> s
wire r.out1 -> c.in1
wire c.u -> t
wire c.v -> r.in1
state 0 0,0
state 1 1,0
";

    #[test]
    fn parses_sample() {
        let n = parse(SAMPLE).unwrap();
        assert_eq!(n.inputs, vec!["a", "b"]);
        assert_eq!(n.elements.len(), 2);
        assert_eq!(n.elements[0].init, 1);
        assert_eq!(n.wires[&Source::Input(1)], Sink::In(1, 0));
        assert_eq!(n.state_map, vec![vec![0, 0], vec![1, 0]]);
        assert!(n.validate().is_empty(), "{:?}", n.validate());
    }

    #[test]
    fn round_trip() {
        let n = parse(SAMPLE).unwrap();
        let text = serialize(&n);
        assert_eq!(parse(&text).unwrap(), n);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn rotary_element_named_ports_and_state() {
        let n = parse("in x\nout y\nelem r RE init=V\nwire x -> r.w\nwire r.n' -> y\n").unwrap();
        assert_eq!(n.elements[0].init, 1);
        assert_eq!(n.wires[&Source::Input(0)], Sink::In(0, 3));
        assert_eq!(n.wires[&Source::Out(0, 0)], Sink::Output(0));
    }

    #[test]
    fn duplicate_source_reports_position() {
        let e = parse("in a\nout s t\nelem r 2-3\nwire a -> s\nwire  a -> t\n").unwrap_err();
        assert_eq!((e.line, e.column), (5, 7));
        assert!(e.msg.contains("not a function"));
        let e = parse("in a b\nout s\nwire a -> s\nwire b ->  s\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 12));
        assert!(e.msg.contains("driven twice"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("in a\nelem r 2-99\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        let e = parse("in a\nwire a -> q.in0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 11));
        let e = parse("bogus\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse("def m\nstates a\n").is_err());
        assert!(parse("in a-b\n").is_err());
    }
}
