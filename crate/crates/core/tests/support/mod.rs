//! Random systems of storage and Horn contexts, with brute-force oracles that
//! work on the generator's own representation instead of the library's.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmcs_core::{parse_stream, parse_system, BeliefState, InputStream, KbConfig, ReactiveMcs};

pub type Set = BTreeSet<String>;
pub type State = Vec<Set>;

pub fn seed() -> u64 {
    std::env::var("RMCS_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_161_016)
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Clone, Debug)]
pub struct Ctx {
    pub horn: bool,
    pub vocab: Vec<String>,
    pub facts: Set,
    /// `(head, body)` definite rules, Horn contexts only.
    pub rules: Vec<(String, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lit {
    Ctx { c: usize, atom: String, neg: bool },
    Inp { s: usize, atom: String, neg: bool },
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub target: usize,
    pub next: bool,
    pub add: bool,
    pub atom: String,
    pub body: Vec<Lit>,
}

#[derive(Clone, Debug)]
pub struct Sys {
    pub ctxs: Vec<Ctx>,
    pub inputs: Vec<Vec<String>>,
    pub rules: Vec<Rule>,
}

#[derive(Clone, Copy, Debug)]
pub struct Params {
    pub max_ctx: usize,
    pub max_relevant: usize,
    pub max_rules: usize,
    /// Immediate rules only read contexts with a higher index.
    pub acyclic: bool,
    pub negation: bool,
    /// Allow immediate removal operations.
    pub now_removals: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params { max_ctx: 4, max_relevant: 8, max_rules: 6, acyclic: false, negation: true, now_removals: true }
    }
}

fn pick<'a, T>(r: &mut ChaCha8Rng, v: &'a [T]) -> &'a T {
    &v[r.gen_range(0..v.len())]
}

pub fn random_system(r: &mut ChaCha8Rng, p: Params) -> Sys {
    let n = r.gen_range(1..=p.max_ctx);
    let mut ctxs = Vec::new();
    for i in 0..n {
        let horn = r.gen_bool(0.4);
        let vocab: Vec<String> = (0..r.gen_range(2..=3)).map(|k| format!("c{i}a{k}")).collect();
        let facts: Set = vocab.iter().filter(|_| r.gen_bool(0.3)).cloned().collect();
        let mut rules = Vec::new();
        if horn {
            for _ in 0..r.gen_range(0..=2) {
                let head = pick(r, &vocab).clone();
                let body: Vec<String> = (0..r.gen_range(1..=2)).map(|_| pick(r, &vocab).clone()).collect();
                rules.push((head, body));
            }
        }
        ctxs.push(Ctx { horn, vocab, facts, rules });
    }
    let inputs: Vec<Vec<String>> =
        (0..r.gen_range(1..=2)).map(|s| (0..2).map(|k| format!("s{s}x{k}")).collect()).collect();
    let mut rules: Vec<Rule> = Vec::new();
    let mut relevant: BTreeSet<(usize, String)> = BTreeSet::new();
    for _ in 0..r.gen_range(1..=p.max_rules) {
        let target = r.gen_range(0..n);
        let next = r.gen_bool(0.4);
        let add = !(next || p.now_removals) || r.gen_bool(0.7);
        let atom = pick(r, &ctxs[target].vocab).clone();
        let mut body = Vec::new();
        let mut extra = BTreeSet::new();
        for _ in 0..r.gen_range(0..=2) {
            let neg = p.negation && r.gen_bool(0.3);
            let sources: Vec<usize> = if p.acyclic && !next { (target + 1..n).collect() } else { (0..n).collect() };
            if sources.is_empty() || r.gen_bool(0.35) {
                let s = r.gen_range(0..inputs.len());
                body.push(Lit::Inp { s, atom: pick(r, &inputs[s]).clone(), neg });
            } else {
                let c = *pick(r, &sources);
                let a = pick(r, &ctxs[c].vocab).clone();
                extra.insert((c, a.clone()));
                body.push(Lit::Ctx { c, atom: a, neg });
            }
        }
        if relevant.union(&extra).count() > p.max_relevant {
            continue;
        }
        relevant.extend(extra);
        rules.push(Rule { target, next, add, atom, body });
    }
    Sys { ctxs, inputs, rules }
}

pub fn random_stream(r: &mut ChaCha8Rng, sys: &Sys, max_tau: usize) -> Vec<Vec<Set>> {
    let tau = r.gen_range(1..=max_tau);
    (0..tau)
        .map(|_| sys.inputs.iter().map(|l| l.iter().filter(|_| r.gen_bool(0.5)).cloned().collect()).collect())
        .collect()
}

impl Sys {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, l) in self.inputs.iter().enumerate() {
            let _ = writeln!(s, "input s{k} {{ {} }}", l.join("; "));
        }
        for (i, c) in self.ctxs.iter().enumerate() {
            let kind = if c.horn { "horn" } else { "storage" };
            let _ = writeln!(s, "context c{i} {kind} {{");
            let _ = writeln!(s, "  vocabulary {{ {} }}", c.vocab.join("; "));
            let mut kb: Vec<String> = c.facts.iter().map(|f| format!("{f}.")).collect();
            kb.extend(c.rules.iter().map(|(h, b)| format!("{h} :- {}.", b.join(", "))));
            let _ = writeln!(s, "  kb {{ {} }}", kb.join(" "));
            let _ = writeln!(s, "  policy {{ generic. }}");
            let _ = writeln!(s, "}}");
        }
        for i in 0..self.ctxs.len() {
            let mine: Vec<(usize, &Rule)> = self.rules.iter().enumerate().filter(|(_, r)| r.target == i).collect();
            if mine.is_empty() {
                continue;
            }
            let _ = writeln!(s, "rules c{i} {{");
            for (k, r) in mine {
                let op = format!("{}({})", if r.add { "add" } else { "rm" }, r.atom);
                let head = if r.next { format!("next({op})") } else { op };
                let body: Vec<String> = r
                    .body
                    .iter()
                    .map(|l| match l {
                        Lit::Ctx { c, atom, neg } => format!("{}c{c}:{atom}", if *neg { "not " } else { "" }),
                        Lit::Inp { s, atom, neg } => format!("{}s{s}::{atom}", if *neg { "not " } else { "" }),
                    })
                    .collect();
                if body.is_empty() {
                    let _ = writeln!(s, "  r{k}: {head}.");
                } else {
                    let _ = writeln!(s, "  r{k}: {head} <- {}.", body.join(", "));
                }
            }
            let _ = writeln!(s, "}}");
        }
        s
    }

    pub fn stream_text(&self, stream: &[Vec<Set>]) -> String {
        let mut s = format!("horizon {}\n", stream.len());
        for (t, input) in stream.iter().enumerate() {
            for (k, set) in input.iter().enumerate() {
                if !set.is_empty() {
                    let items: Vec<&str> = set.iter().map(String::as_str).collect();
                    let _ = writeln!(s, "{} s{k} {}", t + 1, items.join(", "));
                }
            }
        }
        s
    }

    pub fn build(&self, stream: &[Vec<Set>]) -> (ReactiveMcs, KbConfig, InputStream) {
        let text = self.to_text();
        let (m, cfg) = parse_system(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        let st = parse_stream(&self.stream_text(stream), &m).expect("generated stream parses");
        (m, cfg, st)
    }

    pub fn initial(&self) -> Vec<Kb> {
        self.ctxs.iter().map(|c| Kb { facts: c.facts.clone() }).collect()
    }

    fn holds(&self, l: &Lit, input: &[Set], state: &State) -> bool {
        match l {
            Lit::Ctx { c, atom, neg } => state[*c].contains(atom) != *neg,
            Lit::Inp { s, atom, neg } => input[*s].contains(atom) != *neg,
        }
    }

    /// `(add, atom)` operations of applicable rules of context `i`.
    pub fn app(&self, i: usize, next: bool, input: &[Set], state: &State) -> Vec<(bool, String)> {
        self.rules
            .iter()
            .filter(|r| r.target == i && r.next == next && r.body.iter().all(|l| self.holds(l, input, state)))
            .map(|r| (r.add, r.atom.clone()))
            .collect()
    }

    pub fn accept(&self, i: usize, kb: &Kb) -> Set {
        let c = &self.ctxs[i];
        let mut out = kb.facts.clone();
        if c.horn {
            loop {
                let before = out.len();
                for (h, b) in &c.rules {
                    if b.iter().all(|x| out.contains(x)) {
                        out.insert(h.clone());
                    }
                }
                if out.len() == before {
                    break;
                }
            }
        }
        out
    }

    pub fn is_equilibrium(&self, kbs: &[Kb], input: &[Set], state: &State) -> bool {
        (0..self.ctxs.len()).all(|i| self.accept(i, &kbs[i].manage(&self.app(i, false, input, state))) == state[i])
    }

    pub fn all_states(&self) -> Vec<State> {
        let mut out: Vec<State> = vec![Vec::new()];
        for c in &self.ctxs {
            let subsets: Vec<Set> = (0..1u32 << c.vocab.len())
                .map(|mask| {
                    c.vocab.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, a)| a.clone()).collect()
                })
                .collect();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    subsets.iter().map(move |s| {
                        let mut p = prefix.clone();
                        p.push(s.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn equilibria(&self, kbs: &[Kb], input: &[Set]) -> Vec<State> {
        let mut v: Vec<State> = self.all_states().into_iter().filter(|s| self.is_equilibrium(kbs, input, s)).collect();
        v.sort();
        v
    }

    pub fn update(&self, kbs: &[Kb], input: &[Set], state: &State) -> Vec<Kb> {
        (0..self.ctxs.len()).map(|i| kbs[i].manage(&self.app(i, true, input, state))).collect()
    }

    /// Every equilibria stream, by exhaustive unfolding.
    pub fn streams(&self, stream: &[Vec<Set>]) -> Vec<Vec<State>> {
        fn go(
            sys: &Sys,
            stream: &[Vec<Set>],
            t: usize,
            kbs: Vec<Kb>,
            prefix: &mut Vec<State>,
            out: &mut Vec<Vec<State>>,
        ) {
            if t == stream.len() {
                out.push(prefix.clone());
                return;
            }
            for e in sys.equilibria(&kbs, &stream[t]) {
                let next = sys.update(&kbs, &stream[t], &e);
                prefix.push(e);
                go(sys, stream, t + 1, next, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(self, stream, 0, self.initial(), &mut Vec::new(), &mut out);
        out
    }

    /// Least fixpoint of the immediate operations of the reduct w.r.t. `cand`.
    /// Assumes immediate heads only add.
    pub fn gamma(&self, kbs: &[Kb], input: &[Set], cand: &State) -> State {
        let reduct: Vec<&Rule> = self
            .rules
            .iter()
            .filter(|r| !r.next)
            .filter(|r| {
                r.body.iter().all(|l| {
                    !matches!(l, Lit::Ctx { neg: true, .. } | Lit::Inp { neg: true, .. }) || self.holds(l, input, cand)
                })
            })
            .collect();
        let n = self.ctxs.len();
        let mut state: State = (0..n).map(|i| self.accept(i, &kbs[i])).collect();
        loop {
            let next: State = (0..n)
                .map(|i| {
                    let ops: Vec<(bool, String)> = reduct
                        .iter()
                        .filter(|r| r.target == i)
                        .filter(|r| {
                            r.body.iter().all(|l| match l {
                                Lit::Ctx { c, atom, neg: false } => state[*c].contains(atom),
                                Lit::Inp { s, atom, neg: false } => input[*s].contains(atom),
                                _ => true,
                            })
                        })
                        .map(|r| (r.add, r.atom.clone()))
                        .collect();
                    self.accept(i, &kbs[i].manage(&ops))
                })
                .collect();
            if next == state {
                return state;
            }
            state = next;
        }
    }

    pub fn grounded(&self, kbs: &[Kb], input: &[Set]) -> Vec<State> {
        self.equilibria(kbs, input).into_iter().filter(|b| &self.gamma(kbs, input, b) == b).collect()
    }

    /// Alternating fixpoint from the empty state.
    pub fn well_founded(&self, kbs: &[Kb], input: &[Set]) -> State {
        let mut cur: State = vec![Set::new(); self.ctxs.len()];
        loop {
            let next = self.gamma(kbs, input, &self.gamma(kbs, input, &cur));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kb {
    pub facts: Set,
}

impl Kb {
    /// Removals first, then additions.
    pub fn manage(&self, ops: &[(bool, String)]) -> Kb {
        let mut facts = self.facts.clone();
        for (add, a) in ops {
            if !add {
                facts.remove(a);
            }
        }
        for (add, a) in ops {
            if *add {
                facts.insert(a.clone());
            }
        }
        Kb { facts }
    }
}

pub fn state_of(b: &BeliefState) -> State {
    b.0.iter().map(|s| s.iter().map(|a| a.to_string()).collect()).collect()
}

pub fn states_of(v: &[BeliefState]) -> Vec<State> {
    let mut out: Vec<State> = v.iter().map(state_of).collect();
    out.sort();
    out
}

pub fn subset(a: &State, b: &State) -> bool {
    a.iter().zip(b).all(|(x, y)| x.is_subset(y))
}

/// Direct interpreter for a one-tape machine with transitions
/// `(state, symbol) -> (state, symbol, right?)`, started on position 0.
pub fn run_tm(
    delta: &[(&str, &str, &str, &str, bool)],
    finals: &[&str],
    start: &str,
    word: &[&str],
    blank: &str,
    max_steps: usize,
) -> Option<bool> {
    let mut tape: std::collections::BTreeMap<i64, String> =
        word.iter().enumerate().map(|(k, s)| (k as i64, s.to_string())).collect();
    let (mut q, mut pos) = (start.to_string(), 0i64);
    for _ in 0..max_steps {
        if finals.contains(&q.as_str()) {
            return Some(true);
        }
        let sym = tape.get(&pos).cloned().unwrap_or_else(|| blank.to_string());
        let Some(&(_, _, q2, s2, right)) = delta.iter().find(|d| d.0 == q && d.1 == sym) else { return Some(false) };
        tape.insert(pos, s2.to_string());
        q = q2.to_string();
        pos += if right { 1 } else { -1 };
    }
    None
}
