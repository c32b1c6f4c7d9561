//! Acceptance suite: one PASS/FAIL line per criterion, failing at the end if any failed.

mod support;

use std::collections::BTreeSet;

use rmcs_core::bundled;
use rmcs_core::wfs::{check_reducible, ReducibilityMode, Verdict};
use rmcs_core::*;
use support::*;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lib<T>(r: rmcs_core::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn single_input(m: &ReactiveMcs, records: &str) -> Input {
    let text = format!("horizon 1\n{records}\n");
    parse_stream(&text, m).expect("input parses").at(1).clone()
}

fn cells(tsv: &str) -> Vec<Vec<String>> {
    tsv.lines().skip(1).map(|l| l.split('\t').map(str::to_string).collect()).collect()
}

fn first_stream(m: &ReactiveMcs, cfg: &KbConfig, st: &InputStream) -> std::result::Result<EquilibriaStream, String> {
    lib(run_stream(m, cfg, st, Selector::First))?
        .streams
        .into_iter()
        .next()
        .ok_or_else(|| "no equilibria stream".to_string())
}

/// Compares the given columns (by header name) of a trace with expected rows.
fn compare(tsv: &str, columns: &[&str], expected: &[&[&str]]) -> std::result::Result<(), String> {
    let header: Vec<&str> = tsv.lines().next().unwrap_or("").split('\t').collect();
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| header.iter().position(|h| h == c).ok_or_else(|| format!("no column {c}")))
        .collect::<std::result::Result<_, _>>()?;
    let rows = cells(tsv);
    ensure(rows.len() == expected.len(), format!("{} rows, expected {}", rows.len(), expected.len()))?;
    for (t, (row, exp)) in rows.iter().zip(expected).enumerate() {
        for (k, (&i, want)) in idx.iter().zip(exp.iter()).enumerate() {
            ensure(row[i] == *want, format!("t={} {}: got {} expected {}", t + 1, columns[k], row[i], want))?;
        }
    }
    Ok(())
}

fn scenario_filter(m: &ReactiveMcs) -> TraceFilter {
    let hm = m.context_index("hm").expect("hm context");
    TraceFilter {
        omit_fixed: true,
        hide: vec![(hm, parse_pattern("m(_)").unwrap()), (hm, parse_pattern("status(_)").unwrap())],
    }
}

fn c1_stove() -> Outcome {
    let (m, cfg, st) = lib(bundled::load("stove"))?;
    let es = first_stream(&m, &cfg, &st)?;
    let tsv = TraceTable::from_stream(&m, &st, &es).to_tsv(&TraceFilter::default());
    compare(
        &tsv,
        &["config", "input", "equilibrium", "app_next"],
        &[
            &["<{}>", "<{switch}>", "<{}>", "<{setPower(on)}>"],
            &["<{pw}>", "<{}>", "<{pw}>", "<{}>"],
            &["<{pw}>", "<{switch}>", "<{pw}>", "<{setPower(off)}>"],
        ],
    )?;
    Ok("3 instants, exact cells".into())
}

fn c2_stove_temp() -> Outcome {
    let (m, cfg, st) = lib(bundled::load("stove_temp"))?;
    let es = first_stream(&m, &cfg, &st)?;
    let tsv = TraceTable::from_stream(&m, &st, &es).to_tsv(&TraceFilter::default());
    compare(
        &tsv,
        &["config", "input", "app_now", "equilibrium", "app_next"],
        &[
            &["<{}>", "<{switch,tmp(19)}>", "<{setTemp(cold)}>", "<{tm(cold)}>", "<{setPower(on)}>"],
            &["<{pw}>", "<{tmp(21)}>", "<{setTemp(cold)}>", "<{pw,tm(cold)}>", "<{}>"],
            &["<{pw}>", "<{switch,tmp(47)}>", "<{setTemp(hot)}>", "<{pw,tm(hot)}>", "<{setPower(off)}>"],
        ],
    )?;
    Ok("3 instants, exact cells".into())
}

/// Scenario table with fixed and hidden atoms filtered out.
const SCENARIO_TABLE: &[&[&str]] = &[
    &[
        "<{},{pos(kitchen)},{bp(normal)},{},{}>",
        "<{switch,tmp(19)},{},{bpReading(135,86)},{}>",
        "<{setTemp(cold)},{},{},{},{add(humanPos(kitchen))}>",
        "<{tm(cold)},{pos(kitchen)},{bp(normal)},{},{humanPos(kitchen)}>",
        "<{setPower(on)},{},{setBP(normal)},{},{}>",
    ],
    &[
        "<{pw},{pos(kitchen)},{bp(normal)},{},{}>",
        "<{tmp(21)},{},{},{dispensed(drugA)}>",
        "<{setTemp(cold)},{},{},{},{add(humanPos(kitchen))}>",
        "<{pw,tm(cold)},{pos(kitchen)},{bp(normal)},{},{humanPos(kitchen)}>",
        "<{},{},{setMed(m(drugA))},{},{}>",
    ],
    &[
        "<{pw},{pos(kitchen)},{bp(normal),m(drugA)},{},{}>",
        "<{tmp(27)},{enters(bedroom)},{bpReading(138,89)},{}>",
        "<{setTemp(cold)},{setPos(bedroom)},{},{},{add(highBPMed),add(humanPos(bedroom))}>",
        "<{pw,tm(cold)},{pos(bedroom)},{bp(normal)},{},{highBPMed,humanPos(bedroom)}>",
        "<{},{setPos(bedroom)},{setBP(normal)},{},{}>",
    ],
    &[
        "<{pw},{pos(bedroom)},{bp(normal),m(drugA)},{},{}>",
        "<{tmp(36)},{},{bpReading(148,97)},{}>",
        "<{setTemp(cold)},{},{},{},{add(highBPMed),add(humanPos(bedroom))}>",
        "<{pw,tm(cold)},{pos(bedroom)},{bp(normal)},{},{highBPMed,humanPos(bedroom)}>",
        "<{},{},{setBP(high)},{},{}>",
    ],
    &[
        "<{pw},{pos(bedroom)},{bp(high),m(drugA)},{},{}>",
        "<{tmp(43)},{},{bpReading(146,95)},{}>",
        "<{setTemp(cold)},{},{},{},{add(highBP),add(highBPMed),add(humanPos(bedroom))}>",
        "<{pw,tm(cold)},{pos(bedroom)},{bp(high)},{},{highBP,highBPMed,humanPos(bedroom)}>",
        "<{},{},{setBP(high)},{},{}>",
    ],
    &[
        "<{pw},{pos(bedroom)},{bp(high),m(drugA)},{},{}>",
        "<{tmp(51)},{},{asleep},{}>",
        "<{setTemp(hot)},{},{setStatus(asleep)},{},{add(highBP),add(highBPMed),add(humanPos(bedroom)),add(oven(on,hot)),add(status(asleep))}>",
        "<{pw,tm(hot)},{pos(bedroom)},{bp(high)},{},{highBP,highBPMed,humanPos(bedroom),oven(on,hot),status(asleep),turnOff(stove)}>",
        "<{},{},{},{},{}>",
    ],
];

const SCENARIO_COLUMNS: &[&str] = &["config", "input", "app_now", "equilibrium", "app_next"];

fn c3_scenario() -> Outcome {
    let (m, cfg, st) = lib(bundled::load("scenario"))?;
    let run = lib(run_stream(&m, &cfg, &st, Selector::All(2)))?;
    ensure(run.streams.len() == 1 && run.exhaustive, "expected a unique equilibria stream")?;
    let es = &run.streams[0];
    compare(&TraceTable::from_stream(&m, &st, es).to_tsv(&scenario_filter(&m)), SCENARIO_COLUMNS, SCENARIO_TABLE)?;
    let ec = m.context_index("ec").unwrap();
    let has = |t: usize, a: &str| es.states[t - 1].0[ec].contains(&parse_atom(a).unwrap());
    ensure(has(6, "turnOff(stove)"), "turnOff(stove) missing at t=6")?;
    ensure(!has(5, "call(medAssist)") && has(5, "highBPMed"), "call(medAssist) not suppressed at t=5")?;
    Ok("6 instants, unique stream, turnOff(stove)@6, no call(medAssist)@5".into())
}

fn c4_no_next() -> Outcome {
    let (m, cfg, _) = lib(bundled::load("stove"))?;
    let input = single_input(&m, "1 st switch");
    ensure(lib(m.is_equilibrium(&cfg, &input, &m.empty_state()))?, "<{}> is not an equilibrium of the stove system")?;
    let (m2, cfg2, _) = lib(bundled::load("stove_no_next"))?;
    let input2 = single_input(&m2, "1 st switch");
    let all = lib(enumerate_equilibria(&m2, &cfg2, &input2))?;
    ensure(all.is_empty(), format!("{} equilibria without next", all.len()))?;
    Ok("with next: <{}> is an equilibrium; without next: none".into())
}

fn self_justification_oracle() -> Sys {
    Sys {
        ctxs: vec![Ctx { horn: false, vocab: vec!["a".into(), "b".into()], facts: Set::new(), rules: vec![] }],
        inputs: vec![],
        rules: vec![
            Rule {
                target: 0,
                next: false,
                add: true,
                atom: "b".into(),
                body: vec![Lit::Ctx { c: 0, atom: "a".into(), neg: true }],
            },
            Rule {
                target: 0,
                next: false,
                add: true,
                atom: "a".into(),
                body: vec![Lit::Ctx { c: 0, atom: "a".into(), neg: false }],
            },
        ],
    }
}

fn c5_self_justification() -> Outcome {
    let (m, cfg, _) = lib(bundled::load("self_justification"))?;
    let input = m.empty_input();
    let one = |s: &[&str]| -> State { vec![s.iter().map(|x| x.to_string()).collect()] };
    let minimal = states_of(&lib(minimal_equilibria(&m, &cfg, &input))?);
    ensure(minimal == vec![one(&["a"]), one(&["b"])], format!("minimal equilibria {minimal:?}"))?;
    let grounded = states_of(&lib(grounded_equilibria(&m, &cfg, &input))?);
    ensure(grounded == vec![one(&["b"])], format!("grounded equilibria {grounded:?}"))?;
    let wf = lib(well_founded_model(&m, &cfg, &input))?;
    ensure(state_of(&wf.state) == one(&["b"]), format!("well-founded model {:?}", state_of(&wf.state)))?;
    let o = self_justification_oracle();
    let kbs = o.initial();
    ensure(o.well_founded(&kbs, &[]) == one(&["b"]), "oracle well-founded model differs")?;
    ensure(o.grounded(&kbs, &[]) == grounded, "oracle grounded equilibria differ")?;
    ensure(o.equilibria(&kbs, &[]) == vec![one(&["a"]), one(&["b"])], "oracle equilibria differ")?;
    Ok("minimal {a},{b}; grounded {b}; well-founded {b}; oracle agrees".into())
}

fn c6_acyclic() -> Outcome {
    let mut r = rng(6);
    let p = Params { acyclic: true, ..Params::default() };
    for k in 0..200 {
        let sys = random_system(&mut r, p);
        let inputs = random_stream(&mut r, &sys, 5);
        let (m, cfg, st) = sys.build(&inputs);
        ensure(analyze(&m).acyclic, format!("system {k} is not acyclic"))?;
        let es = first_stream(&m, &cfg, &st).map_err(|e| format!("system {k}: {e}\n{}", sys.to_text()))?;
        ensure(lib(verify_stream(&m, &cfg, &st, &es))?, format!("system {k}: stream does not verify"))?;
        ensure(sys.streams(&inputs).len() == 1, format!("system {k}: oracle finds no unique stream"))?;
    }
    Ok(format!("200/200 systems have an equilibria stream (seed {})", seed()))
}

fn c7_oracle() -> Outcome {
    let mut r = rng(7);
    let p = Params { now_removals: false, ..Params::default() };
    let mut grounded_checked = 0;
    for k in 0..100 {
        let sys = random_system(&mut r, p);
        let inputs = random_stream(&mut r, &sys, 1);
        let (m, cfg, st) = sys.build(&inputs);
        let input = st.at(1);
        let kbs = sys.initial();
        let ctx = |msg: &str| format!("system {k}: {msg}\n{}", sys.to_text());
        let got = states_of(&lib(enumerate_equilibria(&m, &cfg, input))?);
        ensure(got == sys.equilibria(&kbs, &inputs[0]), ctx("equilibria differ from exhaustive enumeration"))?;
        if !lib(is_reducible(&m, &cfg))? {
            continue;
        }
        grounded_checked += 1;
        let minimal = states_of(&lib(minimal_equilibria(&m, &cfg, input))?);
        let grounded = states_of(&lib(grounded_equilibria(&m, &cfg, input))?);
        ensure(grounded == sys.grounded(&kbs, &inputs[0]), ctx("grounded equilibria differ from oracle"))?;
        ensure(grounded.iter().all(|g| minimal.contains(g)), ctx("a grounded equilibrium is not minimal"))?;
        let wf = state_of(&lib(well_founded_model(&m, &cfg, input))?.state);
        ensure(wf == sys.well_founded(&kbs, &inputs[0]), ctx("well-founded model differs from oracle"))?;
        ensure(grounded.iter().all(|g| subset(&wf, g)), ctx("well-founded model not below a grounded equilibrium"))?;
    }
    ensure(grounded_checked >= 50, format!("only {grounded_checked} reducible systems"))?;
    Ok(format!(
        "100 systems match; {grounded_checked} reducible ones checked for grounded and well-founded (seed {})",
        seed()
    ))
}

fn c8_repairs() -> Outcome {
    // empty repair on consistent systems
    for name in ["stove", "stove_temp", "scenario", "clock"] {
        let (m, cfg, st) = lib(bundled::load(name))?;
        let es = first_stream(&m, &cfg, &st)?;
        ensure(
            lib(verify_repair(&m, &cfg, &st, &Repair::empty(st.horizon()), &es))?,
            format!("{name}: empty repair rejected"),
        )?;
    }
    // full removal with totally coherent contexts
    let mut r = rng(8);
    for k in 0..50 {
        let sys = random_system(&mut r, Params::default());
        let inputs = random_stream(&mut r, &sys, 4);
        let (m, cfg, st) = sys.build(&inputs);
        let full = Repair::full(&m, st.horizon());
        let bare = m.without_rules(&(0..m.rules().len()).collect());
        let w = first_stream(&bare, &cfg, &st).map_err(|e| format!("system {k}: {e}"))?;
        ensure(lib(verify_repair(&m, &cfg, &st, &full, &w))?, format!("system {k}: full repair rejected"))?;
    }
    let (m, cfg, _) = lib(bundled::load("stove_no_next"))?;
    let st = lib(parse_stream("horizon 1\n1 st switch\n", &m))?;
    let (repair, w) = lib(find_repair(&m, &cfg, &st, RepairPolicy::Minimal))?.ok_or("no minimal repair")?;
    ensure(lib(verify_repair(&m, &cfg, &st, &repair, &w))?, "minimal repair does not verify")?;
    ensure(repair.ids(&m) == vec![vec!["power_on".to_string()]], format!("minimal repair {:?}", repair.ids(&m)))?;
    // exhaustive search over every subset of rules
    let n = m.rules().len();
    let input = st.at(1);
    let mut ok: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 0..1usize << n {
        let removed: BTreeSet<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        let sub = m.without_rules(&removed);
        let states = sys_states(&m);
        if states.iter().any(|s| sub.is_equilibrium(&cfg, input, s).unwrap_or(false)) {
            ok.push(removed);
        }
    }
    let minimal: Vec<&BTreeSet<usize>> = ok.iter().filter(|a| !ok.iter().any(|b| b != *a && b.is_subset(a))).collect();
    ensure(minimal == vec![&repair.per_instant[0]], format!("exhaustive minimal repairs {minimal:?}"))?;
    let all = lib(minimal_repairs(&m, &cfg, &st))?;
    ensure(all == vec![repair.clone()], "minimal_repairs disagrees")?;
    Ok("empty and full repairs verify; minimal repair of the no-next stove is {power_on}".into())
}

/// Every belief state of a small system.
fn sys_states(m: &ReactiveMcs) -> Vec<BeliefState> {
    let mut out = vec![Vec::new()];
    for c in m.contexts() {
        let vocab: Vec<Atom> = c.logic.vocabulary.iter().cloned().collect();
        let mut next = Vec::new();
        for prefix in &out {
            for mask in 0..1usize << vocab.len() {
                let mut p: Vec<BeliefSet> = prefix.clone();
                p.push((0..vocab.len()).filter(|k| mask >> k & 1 == 1).map(|k| vocab[k].clone()).collect());
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(BeliefState).collect()
}

fn c9_partial() -> Outcome {
    let (m, cfg, st) = lib(bundled::load("stove_no_next"))?;
    let ps = lib(run_partial_stream(&m, &cfg, &st, true, &BTreeSet::new()))?;
    ensure(ps.states[0].is_none(), "t=1 should be undefined")?;
    ensure(ps.states[1] == Some(m.empty_state()), format!("t=2 state {:?}", ps.states[1]))?;
    ensure(ps.configs[1] == cfg, "configuration not carried over")?;
    ensure(lib(verify_partial_stream(&m, &cfg, &st, &ps, true))?, "strict partial stream rejected")?;
    let undefined = PartialStream::all_undefined(&cfg, st.horizon());
    ensure(lib(verify_partial_stream(&m, &cfg, &st, &undefined, false))?, "all-undefined stream rejected")?;
    ensure(!lib(verify_partial_stream(&m, &cfg, &st, &undefined, true))?, "all-undefined accepted as strict")?;
    Ok("undefined at t=1, <{}> at t=2 on the initial configuration; all-undefined accepted".into())
}

const EVEN_ONES: &[(&str, &str, &str, &str, bool)] = &[
    ("q0", "0", "q0", "0", true),
    ("q0", "1", "q1", "1", true),
    ("q1", "0", "q1", "0", true),
    ("q1", "1", "q0", "1", true),
    ("q0", "b", "qa", "b", true),
];

fn tm_stream(word: &[&str]) -> String {
    let f: Vec<String> = EVEN_ONES
        .iter()
        .map(|(q, s, q2, s2, r)| format!("f({q},{s},{q2},{s2},{})", if *r { "r" } else { "l" }))
        .collect();
    let tape: Vec<String> = (0..6).map(|p| format!("t({p},{})", word.get(p).unwrap_or(&"b"))).collect();
    format!(
        "horizon 10\n1 c reset\n2 q final(qa), curQ(q0)\n2 f {}\n2 t curP(0), {}\n3 c start\n",
        f.join(", "),
        tape.join(", ")
    )
}

fn c10_turing() -> Outcome {
    let ex = bundled::example("turing").ok_or("no turing example")?;
    let (m, cfg) = lib(parse_system(ex.system))?;
    let c = m.context_index("c").ok_or("no control context")?;
    let (yes, no) = (parse_atom("answer('Y')").unwrap(), parse_atom("answer('N')").unwrap());
    let mut words: Vec<Vec<&str>> = vec![vec![]];
    for len in 1..=4 {
        for bits in 0..1u32 << len {
            words.push((0..len).map(|k| if bits >> (len - 1 - k) & 1 == 1 { "1" } else { "0" }).collect());
        }
    }
    for w in &words {
        let st = lib(parse_stream(&tm_stream(w), &m))?;
        let es = first_stream(&m, &cfg, &st)?;
        let last = &es.states[st.horizon() - 1].0[c];
        let got = match (last.contains(&yes), last.contains(&no)) {
            (true, false) => true,
            (false, true) => false,
            _ => return Err(format!("input {:?}: no single answer, control holds {last:?}", w.join(""))),
        };
        let want = run_tm(EVEN_ONES, &["qa"], "q0", w, "b", 100).ok_or("oracle did not halt")?;
        ensure(got == want, format!("input {:?}: answer {got}, interpreter {want}", w.join("")))?;
    }
    Ok(format!("{} inputs of length 0..4 agree with the interpreter", words.len()))
}

fn c11_reducibility() -> Outcome {
    let (m, cfg, st) = lib(bundled::load("scenario"))?;
    ensure(!lib(is_reducible(&m, &cfg))?, "unadjusted scenario reported reducible")?;
    // a stored temperature makes setTemp non-monotone
    let stc = m.context_index("st").unwrap();
    let mut warm = cfg.clone();
    warm.0[stc] = lib(m.contexts()[stc].manage(&[parse_atom("setTemp(cold)").unwrap()].into(), &cfg.0[stc]))?;
    let report = lib(check_reducible(&m, &warm, ReducibilityMode::BruteForce { bound: 4 }))?;
    ensure(report.per_context[stc].monotone_sequences_ok != Verdict::Yes, "setTemp deemed monotone on {tm(cold)}")?;

    let (ma, cfga, _) = lib(bundled::load("scenario_adjusted"))?;
    ensure(lib(is_reducible(&ma, &cfga))?, "adjusted scenario reported not reducible")?;
    let wf = lib(run_wf_stream(&ma, &cfga, &st))?;
    ensure(wf.has_grounded.iter().all(|&g| g), "an instant without grounded equilibrium")?;
    let grounded = lib(run_grounded_stream(&ma, &cfga, &st, Selector::All(2)))?;
    ensure(grounded.exhaustive && grounded.streams.len() == 1, "grounded stream not unique")?;
    ensure(grounded.streams[0] == wf.stream, "well-founded stream differs from the grounded stream")?;

    // against the scenario table: dropping the immediate position rule delays
    // the move to the bedroom by one instant, and nothing else may differ
    let filter = scenario_filter(&ma);
    let got = cells(&TraceTable::from_stream(&ma, &st, &wf.stream).to_tsv(&filter));
    let mut diffs = Vec::new();
    for (t, (row, exp)) in got.iter().zip(SCENARIO_TABLE).enumerate() {
        let (g, e) = (split_state(&row[4]), split_state(exp[3]));
        for (k, (a, b)) in g.iter().zip(&e).enumerate() {
            if a != b {
                diffs.push(format!("t={} {}: {a} vs {b}", t + 1, ma.contexts()[k].name));
            }
        }
    }
    let expected_diffs = vec![
        "t=3 pos: {pos(kitchen)} vs {pos(bedroom)}".to_string(),
        "t=3 ec: {highBPMed,humanPos(kitchen)} vs {highBPMed,humanPos(bedroom)}".to_string(),
    ];
    ensure(diffs == expected_diffs, format!("unexpected differences from the table: {diffs:?}"))?;
    Ok("unadjusted false, adjusted true; WFS = unique grounded stream = table except the delayed move at t=3".into())
}

/// Splits `<{a},{b,c}>` into its context cells.
fn split_state(cell: &str) -> Vec<String> {
    let inner = cell.trim_start_matches('<').trim_end_matches('>');
    let mut out = Vec::new();
    let (mut depth, mut cur) = (0, String::new());
    for ch in inner.chars() {
        match ch {
            '{' | '(' => depth += 1,
            '}' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out
}

fn c12_property_based() -> Outcome {
    // decision problems are only exercised at bounded size: exists/forall
    // queries against the oracle's exhaustive stream enumeration
    let mut r = rng(12);
    let mut checked = 0;
    for k in 0..60 {
        let sys = random_system(&mut r, Params::default());
        let inputs = random_stream(&mut r, &sys, 3);
        let (m, cfg, st) = sys.build(&inputs);
        let streams = sys.streams(&inputs);
        for (i, c) in sys.ctxs.iter().enumerate() {
            for a in &c.vocab {
                let atom = parse_atom(a).unwrap();
                let at = |s: &Vec<State>| s.iter().any(|b| b[i].contains(a));
                let exists = lib(query_belief(&m, &cfg, &st, i, &atom, QueryMode::Exists))?;
                let forall = lib(query_belief(&m, &cfg, &st, i, &atom, QueryMode::Forall))?;
                ensure(exists == streams.iter().any(at), format!("system {k}: exists {a} disagrees"))?;
                ensure(forall == streams.iter().all(at), format!("system {k}: forall {a} disagrees"))?;
                checked += 1;
            }
        }
        let run = lib(run_stream(&m, &cfg, &st, Selector::All(64)))?;
        if run.exhaustive {
            let mut got: Vec<Vec<State>> =
                run.streams.iter().map(|s| s.states.iter().map(state_of).collect()).collect();
            let mut want = streams.clone();
            got.sort();
            want.sort();
            ensure(got == want, format!("system {k}: stream sets differ"))?;
        }
    }
    Ok(format!(
        "{checked} bounded queries match the oracle; complexity classes and undecidability are not testable and are covered only by these property checks"
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("stove power trace", c1_stove),
        ("stove temperature trace", c2_stove_temp),
        ("assisted living trace", c3_scenario),
        ("next versus immediate operations", c4_no_next),
        ("self-justification semantics", c5_self_justification),
        ("acyclic systems have equilibria streams", c6_acyclic),
        ("solver against exhaustive oracle", c7_oracle),
        ("repairs", c8_repairs),
        ("partial streams", c9_partial),
        ("Turing machine", c10_turing),
        ("reducibility and well-founded stream", c11_reducibility),
        ("property-based stand-in for complexity results", c12_property_based),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let ms = started.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{ms} ms]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{ms} ms]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
