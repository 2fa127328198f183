//! The ten acceptance criteria. Prints one line per criterion and exits
//! non-zero if a criterion fails outside the declared findings.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rlem::analysis::{check_claims, refute};
use rlem::circuit::{find_state_map, Circuit, ElementSpec, Netlist, SimulationMaps, Sink, Source, DEFAULT_MAX_STEPS};
use rlem::feedback::{feedback_survey, FeedbackOutcome};
use rlem::rtm::{cross_validate, Rtm, Verdict};
use rlem::synthesis::{search_circuit, synthesize_rsm, SearchOptions, SearchResult};
use rlem::{census, find_renaming, MoveTable, RlemId, Rsm};

enum Status {
    Pass,
    Fail,
    /// Red, analysed and recorded; does not fail the run.
    Finding,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Pass, detail: detail.into() }
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into() }
}

fn id(k: usize, serial: u64) -> RlemId {
    RlemId { k, serial }
}

fn lehmer_rank(p: &[u8]) -> u64 {
    let n = p.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller;
    }
    rank
}

/// Move table from rows of `(next state, output)` per state and input.
fn table_from_rows(rows: &[[(usize, usize); 4]; 2]) -> Vec<u8> {
    rows.iter().flat_map(|r| r.iter().map(|&(q, y)| (q * 4 + y) as u8)).collect()
}

fn c1_census() -> Outcome {
    let want = [(2, 24, 8, 4), (3, 720, 24, 14), (4, 40320, 82, 55)];
    let mut got = Vec::new();
    for (k, ..) in want {
        let c = census(k);
        got.push((k, c.total, c.class_count(), c.nondegenerate().len()));
    }
    check(got == want, format!("{got:?}"))
}

fn c2_numbering() -> Outcome {
    // rows of the 4-289 move function, (next state, output) with s,t,u,v = 0..3
    let rows = [[(0, 0), (0, 1), (1, 0), (1, 1)], [(0, 2), (0, 3), (1, 3), (1, 2)]];
    let entries = table_from_rows(&rows);
    let t = MoveTable::new(4, entries.clone()).unwrap();
    let serial = t.serial();
    let mut failures = 0;
    for k in 1..=3 {
        let n = (1..=2 * k as u64).product::<u64>();
        for s in 0..n {
            let t = MoveTable::from_serial(k, s).unwrap();
            if t.serial() != s || lehmer_rank(t.entries()) != s || MoveTable::new(k, t.entries().to_vec()).unwrap() != t {
                failures += 1;
            }
        }
    }
    check(
        serial == 289 && lehmer_rank(&entries) == 289 && failures == 0,
        format!("serial {serial}, round-trip failures {failures} over 746 tables"),
    )
}

fn c3_equivalence() -> Outcome {
    let re = MoveTable::parse_spec("RE").unwrap();
    let anchor = MoveTable::from_serial(4, 289).unwrap();
    match find_renaming(&re, &anchor).unwrap() {
        Some(r) => check(r.apply(&re) == anchor, format!("RE is {} renamed to 4-289", re.id())),
        None => check(false, "no renaming"),
    }
}

fn c4_rsm_pipeline() -> Outcome {
    let m = Rsm::parse(include_str!("../fixtures/m0.rsm")).unwrap();
    let s = synthesize_rsm(&m).unwrap();
    let c = s.netlist.compile().unwrap();
    let verified = c.verify_simulation(&m, &s.maps, DEFAULT_MAX_STEPS);
    let (q1, q3) = (m.state_index("q1").unwrap(), m.state_index("q3").unwrap());
    let (a2, b2) = (m.input_index("a2").unwrap(), m.output_index("b2").unwrap());
    let mut cfg = rlem::circuit::Configuration::new(s.maps.state_map[q1].clone());
    let exit = c.inject(&mut cfg, s.maps.in_map[a2], DEFAULT_MAX_STEPS).unwrap();
    let walked = exit.port == s.maps.out_map[b2] && cfg.states == s.maps.state_map[q3];
    check(
        verified.is_ok() && walked,
        format!("{} REs, 6 transitions {:?}, q1 -a2-> q3 b2 {walked}", s.netlist.elements.len(), verified.is_ok()),
    )
}

fn c5_feedback() -> Outcome {
    let mut exceptions = Vec::new();
    let mut count = 0;
    for k in [3, 4] {
        for rep in census(k).nondegenerate() {
            count += 1;
            let t = MoveTable::from_id(rep);
            let ok = feedback_survey(&t).unwrap().iter().any(|e| {
                matches!(&e.outcome, FeedbackOutcome::Residual(r) if r.k() == k - 1)
                    && e.label.is_some_and(|l| l.is_nondegenerate())
            });
            if !ok {
                exceptions.push(rep.to_string());
            }
        }
    }
    check(count == 69 && exceptions.is_empty(), format!("{count} representatives, exceptions {exceptions:?}"))
}

fn c6_parity() -> Outcome {
    let m = Rtm::parse(include_str!("../fixtures/parity.rtm")).unwrap();
    let mut wrong = Vec::new();
    for n in 0..=5 {
        for (len, want) in [(2 * n, Verdict::Accept), (2 * n + 1, Verdict::Reject)] {
            let w = vec![m.symbol_index("1").unwrap(); len];
            let got = m.interpret(&w, 10_000).verdict;
            if got != want {
                wrong.push(format!("1^{len}: {got}"));
            }
        }
    }
    let words: Vec<Vec<usize>> = (0..=5).map(|l| vec![m.symbol_index("1").unwrap(); l]).collect();
    let rep = cross_validate(&m, &words, 7, 10_000, 1_000_000, true).unwrap();
    let circuit_ran = rep.rows.iter().all(|r| r.circuit.is_some());
    check(
        wrong.is_empty() && rep.all_agree() && circuit_ran,
        format!("interpreter n<=5 wrong {wrong:?}; RE circuit window 7 agrees on 1^0..1^5: {}", rep.all_agree()),
    )
}

/// Random circuit of `m` 2-2 elements with inputs a, b and outputs s, t.
fn random_two_two(rng: &mut ChaCha8Rng, m: usize) -> Netlist {
    let mut n = Netlist::new();
    n.add_input("a");
    n.add_input("b");
    n.add_output("s");
    n.add_output("t");
    for e in 0..m {
        n.add_element(format!("e{e}"), ElementSpec::Serial(id(2, 2)), rng.gen_range(0..2));
    }
    let sources: Vec<Source> =
        (0..2).map(Source::Input).chain((0..m).flat_map(|e| (0..2).map(move |p| Source::Out(e, p)))).collect();
    let mut sinks: Vec<Sink> =
        (0..2).map(Sink::Output).chain((0..m).flat_map(|e| (0..2).map(move |p| Sink::In(e, p)))).collect();
    sinks.shuffle(rng);
    for (s, t) in sources.into_iter().zip(sinks) {
        n.wire(s, t);
    }
    n
}

fn c7_claims() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut violations, mut shape, mut traversals) = (0, 0, 0);
    for _ in 0..500 {
        let m = rng.gen_range(1..=8);
        let n = random_two_two(&mut rng, m);
        let init: Vec<usize> = (0..m).map(|_| rng.gen_range(0..2)).collect();
        let len = rng.gen_range(0..=100);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..2)).collect();
        let r = check_claims(&n, &init, &word, DEFAULT_MAX_STEPS).unwrap();
        traversals += r.traversals;
        if !r.ok() {
            violations += 1;
        }
        let p = &r.partition;
        let st_in_w = [0, 1].iter().filter(|&&o| p.sink_in_w(Sink::Output(o))).count();
        if p.source_in_w(Source::Input(1)) || st_in_w != 1 {
            shape += 1;
        }
    }
    check(
        violations == 0 && shape == 0,
        format!("500 circuits, {traversals} traversals, claim violations {violations}, partition shape failures {shape}"),
    )
}

/// Every 2-2 circuit with inputs a, b, outputs s, t and `m` elements.
fn all_two_two(m: usize) -> Vec<Netlist> {
    let sources: Vec<Source> =
        (0..2).map(Source::Input).chain((0..m).flat_map(|e| (0..2).map(move |p| Source::Out(e, p)))).collect();
    let sinks: Vec<Sink> =
        (0..2).map(Sink::Output).chain((0..m).flat_map(|e| (0..2).map(move |p| Sink::In(e, p)))).collect();
    let mut out = Vec::new();
    for perm in rlem::renaming::permutations(sinks.len()) {
        let mut n = Netlist::new();
        n.add_input("a");
        n.add_input("b");
        n.add_output("s");
        n.add_output("t");
        for e in 0..m {
            n.add_element(format!("e{e}"), ElementSpec::Serial(id(2, 2)), 0);
        }
        for (s, &j) in sources.iter().zip(&perm) {
            n.wire(*s, sinks[j as usize]);
        }
        out.push(n);
    }
    out
}

fn c8_nonuniversality() -> Outcome {
    let (mut circuits, mut simulating, mut unconfirmed) = (0, 0, 0);
    for m in 0..=2 {
        for n in all_two_two(m) {
            circuits += 1;
            let c = n.compile().unwrap();
            for target in [3, 17, 4] {
                let t = MoveTable::from_serial(2, target).unwrap().to_rsm();
                let maps = SimulationMaps { state_map: vec![], in_map: vec![0, 1], out_map: vec![0, 1] };
                if let Some(sm) = find_state_map(&c, &t, &maps.in_map, &maps.out_map, DEFAULT_MAX_STEPS) {
                    let full = SimulationMaps { state_map: sm, ..maps.clone() };
                    if c.verify_simulation(&t, &full, DEFAULT_MAX_STEPS).is_ok() {
                        simulating += 1;
                    }
                }
                if !refute(&n, id(2, target), &maps).unwrap().confirmed() {
                    unconfirmed += 1;
                }
            }
        }
    }
    check(
        circuits == 746 && simulating == 0 && unconfirmed == 0,
        format!("{circuits} circuits x 3 targets: simulating {simulating}, certificates not confirmed {unconfirmed}"),
    )
}

fn round_trips(c: &Circuit, start: &[usize], input: usize) -> bool {
    let mut cfg = rlem::circuit::Configuration::new(start.to_vec());
    let Ok(f) = c.inject(&mut cfg, input, DEFAULT_MAX_STEPS) else { return false };
    let Ok(b) = c.backward(&mut cfg, f.port, DEFAULT_MAX_STEPS) else { return false };
    b.port == input && cfg.states == start
}

fn c9_reversibility() -> Outcome {
    let (mut single, mut bad) = (0, 0);
    let mut reps = Vec::new();
    for k in 1..=4 {
        for class in census(k).classes {
            let t = MoveTable::from_id(class.representative);
            let mut n = Netlist::new();
            for i in 0..k {
                n.add_input(MoveTable::input_name(i));
                n.add_output(MoveTable::output_name(i));
            }
            n.add_element("x", ElementSpec::Serial(t.id()), 0);
            for i in 0..k {
                n.wire(Source::Input(i), Sink::In(0, i));
                n.wire(Source::Out(0, i), Sink::Output(i));
            }
            let c = n.compile().unwrap();
            for q in 0..2 {
                for a in 0..k {
                    single += 1;
                    bad += usize::from(!round_trips(&c, &[q], a));
                }
            }
            reps.push(t);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut composite_bad = 0;
    for _ in 0..1000 {
        let m = rng.gen_range(1..=6);
        let parts: Vec<&MoveTable> = (0..m).map(|_| reps.choose(&mut rng).unwrap()).collect();
        let ports: usize = parts.iter().map(|t| t.k()).sum();
        let io = rng.gen_range(1..=3);
        let mut n = Netlist::new();
        for i in 0..io {
            n.add_input(format!("i{i}"));
            n.add_output(format!("o{i}"));
        }
        let mut sources: Vec<Source> = (0..io).map(Source::Input).collect();
        let mut sinks: Vec<Sink> = (0..io).map(Sink::Output).collect();
        for (e, t) in parts.iter().enumerate() {
            n.add_element(format!("x{e}"), ElementSpec::Serial(t.id()), rng.gen_range(0..2));
            sources.extend((0..t.k()).map(|p| Source::Out(e, p)));
            sinks.extend((0..t.k()).map(|p| Sink::In(e, p)));
        }
        assert_eq!(sources.len(), io + ports);
        sinks.shuffle(&mut rng);
        for (s, t) in sources.into_iter().zip(sinks) {
            n.wire(s, t);
        }
        let c = n.compile().unwrap();
        let start = n.initial_states();
        composite_bad += usize::from(!round_trips(&c, &start, rng.gen_range(0..io)));
    }
    check(
        bad == 0 && composite_bad == 0,
        format!("{single} single-element moves failed {bad}; 1000 composite circuits failed {composite_bad}"),
    )
}

fn c10_search() -> Outcome {
    let t = |k, s| MoveTable::from_serial(k, s).unwrap();
    let mut notes = Vec::new();
    let mut unsound = false;
    let mut missing = Vec::new();
    let mut try_search = |target: MoveTable, parts: Vec<MoveTable>, bound: usize| -> bool {
        let r = search_circuit(&target, &parts, &SearchOptions { max_elems: bound, ..Default::default() });
        let names: Vec<String> = parts.iter().map(|p| p.id().to_string()).collect();
        let what = format!("{} from {{{}}} <= {bound}", target.id(), names.join(","));
        match r {
            SearchResult::Found { netlist, maps, elements, .. } => {
                let c = netlist.compile().unwrap();
                let ok = c.verify_simulation(&target.to_rsm(), &maps, DEFAULT_MAX_STEPS).is_ok();
                unsound |= !ok;
                notes.push(format!("{what}: found {elements}, verified {ok}"));
                true
            }
            SearchResult::Exhausted { .. } => {
                notes.push(format!("{what}: exhausted"));
                false
            }
        }
    };
    for part in [3, 4, 17] {
        if !try_search(t(2, 2), vec![t(2, part)], 3) {
            missing.push(format!("2-{part}"));
            try_search(t(2, 2), vec![t(2, part)], 4);
        }
    }
    try_search(t(3, 10), vec![t(2, 3), t(2, 4)], 4);
    let detail = notes.join("; ");
    if unsound {
        check(false, detail)
    } else if missing.is_empty() {
        pass(detail)
    } else {
        Outcome { status: Status::Finding, detail: format!("{detail}; stated bound insufficient for 2-2 from {missing:?}") }
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("census exactness", c1_census),
        ("numbering anchor", c2_numbering),
        ("equivalence anchor", c3_equivalence),
        ("rsm synthesis pipeline", c4_rsm_pipeline),
        ("feedback residuals", c5_feedback),
        ("parity machine", c6_parity),
        ("partition claims", c7_claims),
        ("2-2 non-universality", c8_nonuniversality),
        ("reversibility", c9_reversibility),
        ("search rediscovery", c10_search),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            check(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took: Duration = start.elapsed();
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Finding => "FAIL (recorded finding)",
        };
        println!("criterion {:>2} {tag:<4} {name} [{:.2?}]: {}", i + 1, took, o.detail);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
