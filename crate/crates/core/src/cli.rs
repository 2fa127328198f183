//! The `rlem` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::analysis::{self, refute, Relation};
use crate::circuit::{find_state_map, Configuration, Netlist, SimulationMaps, DEFAULT_MAX_STEPS};
use crate::classify::{census, classify_degeneracy};
use crate::feedback::{feedback_survey, FeedbackOutcome};
use crate::renaming::{canonical_serial, find_renaming};
use crate::report::{CommandReport, Format};
use crate::rsm::Rsm;
use crate::rtm::{compile_to_re, cross_validate, decompose, Rtm};
use crate::synthesis::{search_circuit, synthesize_rsm, universality_chain, Library, SearchOptions, SearchResult};
use crate::table::{MoveTable, RlemId};

#[derive(Debug, Parser)]
#[command(name = "rlem", version, about = "Reversible logic elements with memory")]
pub struct Cli {
    /// Output style.
    #[arg(long, global = true, default_value = "plain")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count equivalence classes of 2-state k-symbol RLEMs.
    Census {
        #[arg(short)]
        k: usize,
    },
    /// Show an RLEM's move function.
    Show { rlem: String },
    /// Decide whether two RLEMs are equivalent under renaming.
    Equiv { a: String, b: String },
    /// Degeneracy label and canonical id.
    Classify { rlem: String },
    /// Every output-to-input feedback loop and its residual.
    Feedback { rlem: String },
    /// Compile a reversible sequential machine into a rotary element circuit.
    SynthRsm {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Initial machine state of the written circuit.
        #[arg(long)]
        init: Option<String>,
    },
    /// Feed a sequence of inputs to a circuit.
    Run {
        circuit: PathBuf,
        /// Comma-separated circuit input names.
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<String>,
        /// Run backwards from these comma-separated outputs instead.
        #[arg(long, value_delimiter = ',', conflicts_with = "inputs")]
        backward: Vec<String>,
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Check that a circuit simulates an RLEM or machine.
    Verify {
        circuit: PathBuf,
        /// `K-N`, `perm=...`, `RE`, or a machine file.
        #[arg(long)]
        target: String,
        /// Derive the state map instead of reading it from the file.
        #[arg(long)]
        find_state_map: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Bounded search for a circuit of parts simulating a target.
    Search {
        #[arg(long)]
        target: String,
        #[arg(long, num_args = 1..)]
        parts: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_elems: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Library directory to store a found construction in.
        #[arg(long)]
        save: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Check determinism and reversibility of an RTM.
    RtmCheck { file: PathBuf },
    /// Run an RTM on one input word.
    RtmRun {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 100_000)]
        fuel: usize,
        /// interpreter, network or circuit.
        #[arg(long, default_value = "interpreter")]
        level: String,
        /// Tape cells for the network and circuit levels; defaults to the
        /// input length plus two.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Compile an RTM to a rotary element circuit and cross-check it.
    RtmCompile {
        file: PathBuf,
        #[arg(long)]
        window: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Input words to cross-validate on.
        #[arg(long, num_args = 0..)]
        check: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        fuel: usize,
    },
    /// Certificate that a 2-2 circuit does not simulate 2-3, 2-4 or 2-17.
    Refute {
        circuit: PathBuf,
        #[arg(long)]
        target: String,
    },
    /// Known simulation relations among 2-state RLEMs.
    Hierarchy {
        /// Whether A can simulate B.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        query: Vec<String>,
        /// Universality of a set of RLEMs.
        #[arg(long, num_args = 1..)]
        universal: Vec<String>,
    },
    /// Parse, print and re-parse a file, checking that nothing changes.
    Roundtrip { file: PathBuf },
    /// Feedback descent of a universal RLEM, checked against a library.
    Chain {
        rlem: String,
        #[arg(long, default_value = "constructions")]
        library: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}")]
    Domain(String),
}

fn domain(e: impl ToString) -> CliError {
    CliError::Domain(e.to_string())
}

fn read(p: &Path) -> Result<String, CliError> {
    fs::read_to_string(p).map_err(|e| CliError::Io(p.to_path_buf(), e))
}

fn write(p: &Path, text: &str) -> Result<(), CliError> {
    fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e))
}

fn rlem(s: &str) -> Result<MoveTable, CliError> {
    MoveTable::parse_spec(s).map_err(domain)
}

fn netlist(p: &Path) -> Result<Netlist, CliError> {
    Netlist::parse(&read(p)?).map_err(|e| CliError::Domain(format!("{}: {e}", p.display())))
}

fn perm(t: &MoveTable) -> String {
    t.entries().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

/// The move function with `==>` for state-changing and `..>` for
/// state-keeping transitions.
pub fn render_rlem(t: &MoveTable) -> String {
    let mut out = String::new();
    for q in 0..2 {
        out.push_str(&format!("state q{q}\n"));
        for a in 0..t.k() {
            let (q2, s) = t.step(q, a);
            let arrow = if q2 == q { "..>" } else { "==>" };
            out.push_str(&format!(
                "  {} {arrow} {}  q{q2}\n",
                MoveTable::input_name(a),
                MoveTable::output_name(s)
            ));
        }
    }
    out
}

pub fn execute(cli: &Cli) -> Result<CommandReport, CliError> {
    let start = Instant::now();
    let mut r = dispatch(&cli.command)?;
    r.elapsed = start.elapsed();
    Ok(r)
}

fn dispatch(cmd: &Command) -> Result<CommandReport, CliError> {
    match cmd {
        Command::Census { k } => {
            if !(1..=4).contains(k) {
                return Err(domain("census supports k from 1 to 4"));
            }
            let c = census(*k);
            let mut r = CommandReport::new("census");
            r.param("k", k)
                .field("total", c.total)
                .field("classes", c.class_count())
                .field("nondegenerate", c.nondegenerate().len());
            let rows = c
                .classes
                .iter()
                .map(|ci| vec![ci.representative.to_string(), ci.size.to_string(), ci.label.to_string()])
                .collect();
            r.table("class_list", &["representative", "size", "label"], rows);
            Ok(r)
        }
        Command::Show { rlem: s } => {
            let t = rlem(s)?;
            let mut r = CommandReport::new("show");
            r.param("rlem", s)
                .field("id", t.id())
                .field("perm", perm(&t))
                .field("canonical", canonical_serial(&t))
                .field("label", classify_degeneracy(&t))
                .text(render_rlem(&t));
            Ok(r)
        }
        Command::Equiv { a, b } => {
            let (ta, tb) = (rlem(a)?, rlem(b)?);
            let mut r = CommandReport::new("equiv");
            r.param("a", a).param("b", b);
            let ren = find_renaming(&ta, &tb).map_err(domain)?;
            r.field("equivalent", ren.is_some());
            if let Some(ren) = ren {
                let p = |v: &[u8]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                r.field("state_swap", ren.state_swap)
                    .field("input_perm", p(&ren.input_perm))
                    .field("output_perm", p(&ren.output_perm));
            } else {
                r.success = false;
            }
            Ok(r)
        }
        Command::Classify { rlem: s } => {
            let t = rlem(s)?;
            let mut r = CommandReport::new("classify");
            r.param("rlem", s)
                .field("id", t.id())
                .field("canonical", canonical_serial(&t))
                .field("label", classify_degeneracy(&t));
            Ok(r)
        }
        Command::Feedback { rlem: s } => {
            let t = rlem(s)?;
            let survey = feedback_survey(&t).map_err(domain)?;
            let mut r = CommandReport::new("feedback");
            r.param("rlem", s);
            let mut nondeg = 0;
            let rows = survey
                .iter()
                .map(|e| {
                    let (res, canon) = match &e.outcome {
                        FeedbackOutcome::Residual(m) => (m.id().to_string(), canonical_serial(m).to_string()),
                        FeedbackOutcome::Divergent => ("divergent".into(), "-".into()),
                    };
                    if e.label.is_some_and(|l| l.is_nondegenerate()) {
                        nondeg += 1;
                    }
                    let label = e.label.map_or("-".to_string(), |l| l.to_string());
                    vec![e.spec.to_string(), res, canon, label]
                })
                .collect();
            r.field("loops", survey.len()).field("nondegenerate_residuals", nondeg);
            r.table("survey", &["loop", "residual", "canonical", "label"], rows);
            r.success = nondeg > 0;
            Ok(r)
        }
        Command::SynthRsm { file, out, init } => {
            let m = Rsm::parse(&read(file)?).map_err(domain)?;
            let mut s = synthesize_rsm(&m).map_err(domain)?;
            if let Some(q) = init {
                let qi = m.state_index(q).ok_or_else(|| domain(format!("unknown state `{q}`")))?;
                s.set_initial_state(qi);
            }
            let c = s.netlist.compile().map_err(|v| domain(format!("{} violations", v.len())))?;
            let ok = c.verify_simulation(&m, &s.maps, DEFAULT_MAX_STEPS);
            let mut r = CommandReport::new("synth-rsm");
            r.param("file", file.display())
                .field("states", m.num_states())
                .field("inputs", m.num_inputs())
                .field("outputs", m.num_outputs())
                .field("elements", s.netlist.elements.len())
                .field("verified", ok.is_ok());
            match out {
                Some(p) => {
                    write(p, &s.netlist.to_text())?;
                    r.field("written", p.display());
                }
                None => {
                    r.text(s.netlist.to_text());
                }
            }
            r.success = ok.is_ok();
            Ok(r)
        }
        Command::Run { circuit, inputs, backward, trace, max_steps } => {
            let n = netlist(circuit)?;
            let c = n.compile().map_err(|v| domain(violations(&v)))?;
            let mut cfg = c.initial_configuration();
            let mut r = CommandReport::new("run");
            r.param("circuit", circuit.display());
            let states = |cfg: &Configuration| cfg.states.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
            r.field("initial_states", states(&cfg));
            let mut rows = Vec::new();
            if backward.is_empty() {
                for name in inputs {
                    let i = n.input_index(name).ok_or_else(|| domain(format!("no input `{name}`")))?;
                    let (exit, tr) = c.inject_traced(&mut cfg, i, *max_steps).map_err(domain)?;
                    let path = if *trace {
                        tr.hops
                            .iter()
                            .map(|h| format!("{}:{}>{}", n.elements[h.element].name, h.input, h.output))
                            .collect::<Vec<_>>()
                            .join(" ")
                    } else {
                        String::new()
                    };
                    rows.push(vec![name.clone(), n.outputs[exit.port].clone(), exit.steps.to_string(), path]);
                }
                r.table("steps", &["input", "output", "hops", "path"], rows);
            } else {
                for name in backward {
                    let o = n.output_index(name).ok_or_else(|| domain(format!("no output `{name}`")))?;
                    let exit = c.backward(&mut cfg, o, *max_steps).map_err(domain)?;
                    rows.push(vec![name.clone(), n.inputs[exit.port].clone(), exit.steps.to_string()]);
                }
                r.table("steps", &["output", "input", "hops"], rows);
            }
            r.field("final_states", states(&cfg));
            Ok(r)
        }
        Command::Verify { circuit, target, find_state_map: derive, max_steps } => {
            let n = netlist(circuit)?;
            let c = n.compile().map_err(|v| domain(violations(&v)))?;
            let m = match MoveTable::parse_spec(target) {
                Ok(t) => t.to_rsm(),
                Err(_) => Rsm::parse(&read(Path::new(target))?).map_err(domain)?,
            };
            let mut maps = SimulationMaps::positional(&c, &m);
            if *derive || maps.state_map.is_empty() {
                maps.state_map = find_state_map(&c, &m, &maps.in_map, &maps.out_map, *max_steps)
                    .ok_or_else(|| domain("no state map makes the circuit follow the target"))?;
            }
            let res = c.verify_simulation(&m, &maps, *max_steps);
            let mut r = CommandReport::new("verify");
            r.param("circuit", circuit.display()).param("target", target);
            r.field("verified", res.is_ok());
            if let Err(e) = &res {
                r.field("reason", e);
            }
            r.success = res.is_ok();
            Ok(r)
        }
        Command::Search { target, parts, max_elems, max_steps, save, sequential } => {
            let t = rlem(target)?;
            let ps: Vec<MoveTable> = parts.iter().map(|p| rlem(p)).collect::<Result<_, _>>()?;
            if ps.is_empty() {
                return Err(domain("--parts needs at least one RLEM"));
            }
            let opts = SearchOptions { max_elems: *max_elems, max_steps: *max_steps, parallel: !sequential };
            let res = search_circuit(&t, &ps, &opts);
            let mut r = CommandReport::new("search");
            r.param("target", target).param("parts", parts.join(" ")).param("max_elems", max_elems);
            match &res {
                SearchResult::Found { netlist, elements, nodes, .. } => {
                    r.field("result", "found").field("elements", elements).field("nodes", nodes);
                    if let Some(dir) = save {
                        let ids: Vec<RlemId> = ps.iter().map(canonical_serial).collect();
                        let p = Library::new(dir)
                            .save(canonical_serial(&t), &ids, netlist)
                            .map_err(|e| CliError::Io(dir.clone(), e))?;
                        r.field("saved", p.display());
                    }
                    r.text(netlist.to_text());
                }
                SearchResult::Exhausted { bound, nodes } => {
                    r.field("result", "exhausted").field("bound", bound).field("nodes", nodes);
                    r.success = false;
                }
            }
            Ok(r)
        }
        Command::RtmCheck { file } => {
            let m = Rtm::parse(&read(file)?).map_err(domain)?;
            let v = m.check();
            let mut r = CommandReport::new("rtm-check");
            r.param("file", file.display())
                .field("states", m.states.len())
                .field("symbols", m.symbols.len())
                .field("quintuples", m.quintuples.len())
                .field("violations", v.len());
            for x in &v {
                r.text(m.describe(x));
            }
            r.success = v.is_empty();
            Ok(r)
        }
        Command::RtmRun { file, input, fuel, level, window } => {
            let m = Rtm::parse(&read(file)?).map_err(domain)?;
            let w = m.parse_input(input).map_err(domain)?;
            let win = window.unwrap_or(w.len() + 2);
            let mut r = CommandReport::new("rtm-run");
            r.param("file", file.display()).param("input", input).param("level", level);
            let (verdict, tape, steps) = match level.as_str() {
                "interpreter" => {
                    let o = m.interpret(&w, *fuel);
                    let len = window.unwrap_or((o.config.origin + o.config.tape.len() as i64).max(o.config.head + 1).max(1) as usize);
                    (o.verdict, Some(o.config.window(len, m.blank)), o.steps)
                }
                "network" => {
                    let o = decompose(&m, win).map_err(domain)?.run(&w, DEFAULT_MAX_STEPS).map_err(domain)?;
                    (o.verdict, o.tape, o.steps)
                }
                "circuit" => {
                    let o = compile_to_re(&m, win).map_err(domain)?.run(&w, DEFAULT_MAX_STEPS).map_err(domain)?;
                    (o.verdict, o.tape, o.steps)
                }
                other => return Err(domain(format!("unknown level `{other}` (interpreter|network|circuit)"))),
            };
            r.field("result", &verdict).field("steps", steps);
            if let Some(t) = tape {
                r.field("tape", t.render(&m.symbols).trim_end());
            }
            r.success = matches!(verdict, crate::rtm::Verdict::Accept | crate::rtm::Verdict::Reject);
            Ok(r)
        }
        Command::RtmCompile { file, window, out, check, fuel } => {
            let m = Rtm::parse(&read(file)?).map_err(domain)?;
            let compiled = compile_to_re(&m, *window).map_err(domain)?;
            let mut r = CommandReport::new("rtm-compile");
            r.param("file", file.display()).param("window", window);
            r.field("network_elements", compiled.network.netlist().elements.len())
                .field("control_states", compiled.network.control().num_states())
                .field("cell_states", compiled.network.cell().num_states())
                .field("re_elements", compiled.num_elements());
            if let Some(p) = out {
                write(p, &compiled.flat.netlist.to_text())?;
                r.field("written", p.display());
            }
            if !check.is_empty() {
                let words: Vec<Vec<usize>> =
                    check.iter().map(|w| m.parse_input(w)).collect::<Result<_, _>>().map_err(domain)?;
                let rep = cross_validate(&m, &words, *window, *fuel, DEFAULT_MAX_STEPS, true).map_err(domain)?;
                let rows = rep
                    .rows
                    .iter()
                    .zip(check)
                    .map(|(row, w)| {
                        let circ = row.circuit.as_ref().map_or("-".to_string(), |c| c.verdict.to_string());
                        vec![
                            format!("\"{w}\""),
                            row.interpreter.to_string(),
                            row.network.verdict.to_string(),
                            circ,
                            row.agree.to_string(),
                        ]
                    })
                    .collect();
                r.table("cross_validation", &["input", "interpreter", "network", "circuit", "agree"], rows);
                r.field("agree", rep.all_agree());
                r.success = rep.all_agree();
            }
            Ok(r)
        }
        Command::Refute { circuit, target } => {
            let n = netlist(circuit)?;
            let t = rlem(target)?;
            let id = canonical_serial(&t);
            if t.id() != id {
                return Err(domain(format!("give the target as its canonical id {id}")));
            }
            let maps = SimulationMaps { state_map: n.state_map.clone(), in_map: vec![0, 1], out_map: vec![0, 1] };
            let rf = refute(&n, id, &maps).map_err(domain)?;
            let mut r = CommandReport::new("refute");
            r.param("circuit", circuit.display()).param("target", target);
            r.field("budget", rf.budget)
                .field("witness_length", rf.witness.len())
                .field("runs", rf.runs.len())
                .field("confirmed", rf.confirmed());
            r.text(rf.certificate(&n));
            r.success = rf.confirmed();
            Ok(r)
        }
        Command::Hierarchy { query, universal } => {
            let h = analysis::hierarchy();
            let mut r = CommandReport::new("hierarchy");
            if let [a, b] = query.as_slice() {
                let rel = h.query(&rlem(a)?, &rlem(b)?);
                r.param("query", format!("{a} {b}")).field("relation", rel);
            }
            if !universal.is_empty() {
                let ts: Vec<MoveTable> = universal.iter().map(|s| rlem(s)).collect::<Result<_, _>>()?;
                r.param("universal", universal.join(" ")).field("universality", h.set_universality(&ts));
            }
            let mut rows: Vec<Vec<String>> = h
                .facts
                .iter()
                .map(|f| {
                    let arrow = if f.relation == Relation::CanSimulate { "->" } else { "-/->" };
                    vec![f.from.to_string(), arrow.to_string(), f.to.to_string()]
                })
                .collect();
            rows.sort();
            r.table("relations", &["from", "", "to"], rows);
            let us = analysis::TWO_STATE_TWO_SYMBOL
                .iter()
                .map(|&id| vec![id.to_string(), h.universality(&MoveTable::from_id(id)).to_string()])
                .collect();
            r.table("universality", &["rlem", "status"], us);
            r.field("universal_k_gt_2", "every non-degenerate RLEM");
            let pairs: Vec<String> = h.universal_pairs.iter().map(|p| format!("{}+{}", p[0], p[1])).collect();
            r.field("universal_pairs", pairs.join(" "));
            Ok(r)
        }
        Command::Roundtrip { file } => {
            let text = read(file)?;
            let ext = file.extension().and_then(|e| e.to_str()).unwrap_or("");
            let (kind, printed, again) = match ext {
                "rtm" => {
                    let m = Rtm::parse(&text).map_err(domain)?;
                    let p = m.to_text();
                    let ok = Rtm::parse(&p).map_err(domain)? == m;
                    ("rtm", p, ok)
                }
                "rsm" => {
                    let m = Rsm::parse(&text).map_err(domain)?;
                    let p = m.to_string();
                    let ok = Rsm::parse(&p).map_err(domain)? == m;
                    ("rsm", p, ok)
                }
                "rlem" => {
                    let t = rlem(&text)?;
                    let p = format!("{t}\n");
                    let ok = rlem(&p)? == t;
                    ("rlem", p, ok)
                }
                _ => {
                    let n = Netlist::parse(&text).map_err(domain)?;
                    let p = n.to_text();
                    let ok = Netlist::parse(&p).map_err(domain)? == n;
                    ("netlist", p, ok)
                }
            };
            let canonical = printed.lines().all(|l| l == l.trim_end());
            let mut r = CommandReport::new("roundtrip");
            r.param("file", file.display()).field("grammar", kind).field("identical", again);
            r.field("canonical", canonical);
            r.success = again && canonical;
            Ok(r)
        }
        Command::Chain { rlem: s, library } => {
            let t = rlem(s)?;
            let rep = universality_chain(&t, &Library::new(library)).map_err(domain)?;
            let mut r = CommandReport::new("chain");
            r.param("rlem", s).param("library", library.display());
            let rows = rep
                .descent
                .iter()
                .map(|d| vec![d.from.id().to_string(), d.spec.to_string(), d.class.to_string(), d.verified.to_string()])
                .collect();
            r.table("descent", &["from", "loop", "residual_class", "verified"], rows);
            r.field("base", rep.base).field("to_rotary", format!("{:?}", rep.to_rotary));
            r.field("fully_verified", rep.fully_verified());
            r.success = rep.fully_verified();
            Ok(r)
        }
    }
}

fn violations(v: &[crate::circuit::Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Parses `args`, runs the command and prints its report. Returns the exit
/// status: 0 on success, 1 on a negative result, 2 on errors.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            print!("{}", r.render(cli.format));
            if r.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandReport {
        let cli = Cli::try_parse_from(std::iter::once("rlem").chain(args.iter().copied())).unwrap();
        execute(&cli).unwrap()
    }

    #[test]
    fn census_and_show() {
        let r = run(&["census", "-k", "2"]);
        assert_eq!(r.get("classes"), Some("8"));
        assert_eq!(r.get("nondegenerate"), Some("4"));
        let r = run(&["show", "2-0"]);
        assert_eq!(r.get("perm"), Some("0,1,2,3"));
        assert!(r.text[0].contains("a ..> s  q0"));
        let r = run(&["show", "RE"]);
        assert_eq!(r.get("canonical"), Some("4-289"));
    }

    #[test]
    fn equivalence_is_a_negative_result_when_false() {
        assert!(run(&["equiv", "2-3", "perm=0,2,3,1"]).success);
        assert!(!run(&["equiv", "2-3", "2-4"]).success);
    }

    #[test]
    fn hierarchy_queries() {
        let r = run(&["hierarchy", "--query", "2-2", "2-17"]);
        assert_eq!(r.get("relation"), Some("CannotSimulate"));
        let r = run(&["hierarchy", "--universal", "2-17"]);
        assert_eq!(r.get("universality"), Some("Unknown"));
    }

    #[test]
    fn unknown_command_is_a_usage_error() {
        assert_eq!(main_with(["rlem", "frobnicate"]), 2);
        assert_eq!(main_with(["rlem", "show", "2-99"]), 2);
    }
}
