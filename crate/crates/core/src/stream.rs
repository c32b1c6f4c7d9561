//! Equilibria streams, partial streams and belief queries over finite input streams.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BeliefState, InputStream, KbConfig, ReactiveMcs};
use crate::solver::{relevant_beliefs, Solver};
use crate::term::Atom;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Selector {
    /// The lexicographically first equilibria stream.
    First,
    /// Up to this many distinct streams.
    All(usize),
}

impl Selector {
    fn bound(self) -> usize {
        match self {
            Selector::First => 1,
            Selector::All(n) => n,
        }
    }
}

impl std::str::FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Selector> {
        if s == "first" {
            return Ok(Selector::First);
        }
        s.strip_prefix("all:")
            .and_then(|n| n.parse().ok())
            .filter(|n| *n > 0)
            .map(Selector::All)
            .ok_or_else(|| Error::Config(format!("bad selector {s:?}, expected first or all:N")))
    }
}

/// States and the configurations they were computed from, one per instant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriaStream {
    pub states: Vec<BeliefState>,
    pub configs: Vec<KbConfig>,
}

impl EquilibriaStream {
    pub fn horizon(&self) -> usize {
        self.states.len()
    }

    pub fn truncate(&self, tau: usize) -> EquilibriaStream {
        EquilibriaStream { states: self.states[..tau].to_vec(), configs: self.configs[..tau].to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamRun {
    pub streams: Vec<EquilibriaStream>,
    /// True when `streams` holds every equilibria stream.
    pub exhaustive: bool,
}

/// Successors of a configuration at instant `t`: chosen state and next configuration.
pub(crate) type StepFn<'a> = dyn Fn(usize, &KbConfig) -> Result<Vec<(BeliefState, KbConfig)>> + 'a;

pub(crate) struct StreamSearch<'a> {
    tau: usize,
    step: &'a StepFn<'a>,
    succ: HashMap<(usize, KbConfig), Vec<(BeliefState, KbConfig)>>,
    dead: HashSet<(usize, KbConfig)>,
}

impl<'a> StreamSearch<'a> {
    pub(crate) fn new(tau: usize, step: &'a StepFn<'a>) -> Self {
        StreamSearch { tau, step, succ: HashMap::new(), dead: HashSet::new() }
    }

    fn successors(&mut self, t: usize, cfg: &KbConfig) -> Result<Vec<(BeliefState, KbConfig)>> {
        let key = (t, cfg.clone());
        if let Some(v) = self.succ.get(&key) {
            return Ok(v.clone());
        }
        let v = (self.step)(t, cfg)?;
        self.succ.insert(key, v.clone());
        Ok(v)
    }

    /// Depth-first enumeration in canonical order; stops after `limit` streams.
    pub(crate) fn collect(&mut self, config0: &KbConfig, limit: usize) -> Result<Vec<EquilibriaStream>> {
        let mut out = Vec::new();
        let mut prefix = EquilibriaStream { states: Vec::new(), configs: Vec::new() };
        self.dfs(1, config0, &mut prefix, &mut out, limit)?;
        Ok(out)
    }

    fn dfs(
        &mut self,
        t: usize,
        cfg: &KbConfig,
        prefix: &mut EquilibriaStream,
        out: &mut Vec<EquilibriaStream>,
        limit: usize,
    ) -> Result<bool> {
        if t > self.tau {
            out.push(prefix.clone());
            return Ok(true);
        }
        if self.dead.contains(&(t, cfg.clone())) {
            return Ok(false);
        }
        let mut any = false;
        for (state, next) in self.successors(t, cfg)? {
            if out.len() >= limit {
                return Ok(true);
            }
            prefix.states.push(state);
            prefix.configs.push(cfg.clone());
            any |= self.dfs(t + 1, &next, prefix, out, limit)?;
            prefix.states.pop();
            prefix.configs.pop();
        }
        if !any {
            self.dead.insert((t, cfg.clone()));
        }
        Ok(any)
    }

    /// Whether some complete stream continues from `(t, cfg)`.
    fn completes(&mut self, t: usize, cfg: &KbConfig, memo: &mut HashMap<(usize, KbConfig), bool>) -> Result<bool> {
        if t > self.tau {
            return Ok(true);
        }
        if let Some(v) = memo.get(&(t, cfg.clone())) {
            return Ok(*v);
        }
        let mut ok = false;
        for (_, next) in self.successors(t, cfg)? {
            if self.completes(t + 1, &next, memo)? {
                ok = true;
                break;
            }
        }
        memo.insert((t, cfg.clone()), ok);
        Ok(ok)
    }

    /// Exact existential or universal query over all complete streams.
    pub(crate) fn query(
        &mut self,
        config0: &KbConfig,
        holds: &dyn Fn(&BeliefState) -> bool,
        mode: QueryMode,
    ) -> Result<bool> {
        let mut complete = HashMap::new();
        let mut memo = HashMap::new();
        self.query_at(1, config0, holds, mode, &mut complete, &mut memo)
    }

    fn query_at(
        &mut self,
        t: usize,
        cfg: &KbConfig,
        holds: &dyn Fn(&BeliefState) -> bool,
        mode: QueryMode,
        complete: &mut HashMap<(usize, KbConfig), bool>,
        memo: &mut HashMap<(usize, KbConfig), bool>,
    ) -> Result<bool> {
        // past the horizon no instant is left to satisfy the query
        if t > self.tau {
            return Ok(false);
        }
        if let Some(v) = memo.get(&(t, cfg.clone())) {
            return Ok(*v);
        }
        let mut result = mode == QueryMode::Forall;
        for (state, next) in self.successors(t, cfg)? {
            if !self.completes(t + 1, &next, complete)? {
                continue;
            }
            let here = holds(&state) || self.query_at(t + 1, &next, holds, mode, complete, memo)?;
            match mode {
                QueryMode::Exists if here => {
                    result = true;
                    break;
                }
                QueryMode::Forall if !here => {
                    result = false;
                    break;
                }
                _ => {}
            }
        }
        memo.insert((t, cfg.clone()), result);
        Ok(result)
    }
}

pub(crate) fn run_with(tau: usize, config0: &KbConfig, selector: Selector, step: &StepFn) -> Result<StreamRun> {
    let bound = selector.bound();
    let mut search = StreamSearch::new(tau, step);
    let mut streams = search.collect(config0, bound + 1)?;
    let exhaustive = streams.len() <= bound;
    streams.truncate(bound);
    Ok(StreamRun { streams, exhaustive })
}

pub(crate) fn equilibrium_step<'a>(
    m: &'a ReactiveMcs,
    solver: &'a Solver<'a>,
    stream: &'a InputStream,
) -> impl Fn(usize, &KbConfig) -> Result<Vec<(BeliefState, KbConfig)>> + 'a {
    move |t, cfg| {
        let input = stream.at(t);
        solver
            .equilibria(cfg, input)?
            .into_iter()
            .map(|e| {
                let next = m.update_config(cfg, input, &e)?;
                Ok((e, next))
            })
            .collect()
    }
}

/// Equilibria streams of `m` given `config0` and `stream`.
pub fn run_stream(m: &ReactiveMcs, config0: &KbConfig, stream: &InputStream, selector: Selector) -> Result<StreamRun> {
    m.check_config(config0)?;
    let solver = Solver::new(m);
    let step = equilibrium_step(m, &solver, stream);
    run_with(stream.horizon(), config0, selector, &step)
}

/// Checks the equilibria-stream conditions instant by instant.
pub fn verify_stream(m: &ReactiveMcs, config0: &KbConfig, stream: &InputStream, es: &EquilibriaStream) -> Result<bool> {
    if es.states.len() != stream.horizon() || es.configs.len() != stream.horizon() {
        return Ok(false);
    }
    let mut cfg = config0.clone();
    for t in 1..=stream.horizon() {
        if es.configs[t - 1] != cfg || !m.is_equilibrium(&cfg, stream.at(t), &es.states[t - 1])? {
            return Ok(false);
        }
        cfg = m.update_config(&cfg, stream.at(t), &es.states[t - 1])?;
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialStream {
    pub states: Vec<Option<BeliefState>>,
    pub configs: Vec<KbConfig>,
}

impl PartialStream {
    pub fn all_undefined(config0: &KbConfig, tau: usize) -> PartialStream {
        PartialStream { states: vec![None; tau], configs: vec![config0.clone(); tau] }
    }
}

/// Partial equilibria stream taking the first equilibrium wherever one exists,
/// except at `skip` instants when not strict.
pub fn run_partial_stream(
    m: &ReactiveMcs,
    config0: &KbConfig,
    stream: &InputStream,
    strict: bool,
    skip: &BTreeSet<usize>,
) -> Result<PartialStream> {
    m.check_config(config0)?;
    let solver = Solver::new(m);
    let mut cfg = config0.clone();
    let mut out = PartialStream { states: Vec::new(), configs: Vec::new() };
    for t in 1..=stream.horizon() {
        out.configs.push(cfg.clone());
        let state =
            if !strict && skip.contains(&t) { None } else { solver.equilibria(&cfg, stream.at(t))?.into_iter().next() };
        if let Some(s) = &state {
            cfg = m.update_config(&cfg, stream.at(t), s)?;
        }
        out.states.push(state);
    }
    Ok(out)
}

/// Checks the partial-stream conditions; `strict` also demands that undefined
/// instants have no equilibrium.
pub fn verify_partial_stream(
    m: &ReactiveMcs,
    config0: &KbConfig,
    stream: &InputStream,
    ps: &PartialStream,
    strict: bool,
) -> Result<bool> {
    if ps.states.len() != stream.horizon() || ps.configs.len() != stream.horizon() {
        return Ok(false);
    }
    let solver = Solver::new(m);
    let mut cfg = config0.clone();
    for t in 1..=stream.horizon() {
        if ps.configs[t - 1] != cfg {
            return Ok(false);
        }
        match &ps.states[t - 1] {
            Some(s) => {
                if !m.is_equilibrium(&cfg, stream.at(t), s)? {
                    return Ok(false);
                }
                cfg = m.update_config(&cfg, stream.at(t), s)?;
            }
            None => {
                if strict && !solver.equilibria(&cfg, stream.at(t))?.is_empty() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryMode {
    Exists,
    Forall,
}

/// Whether `belief` holds in context `ctx` at some instant of some (`Exists`)
/// or of every (`Forall`) equilibria stream. `Forall` is vacuously true when
/// no stream exists.
pub fn query_belief(
    m: &ReactiveMcs,
    config0: &KbConfig,
    stream: &InputStream,
    ctx: usize,
    belief: &Atom,
    mode: QueryMode,
) -> Result<bool> {
    m.check_config(config0)?;
    if ctx >= m.contexts().len() {
        return Err(Error::Config(format!("no context with index {}", ctx + 1)));
    }
    if !m.contexts()[ctx].logic.vocabulary.contains(belief) {
        return Err(Error::Config(format!("{belief} is not in the vocabulary of {}", m.contexts()[ctx].name)));
    }
    let solver = Solver::with_relevant(m, relevant_beliefs(m, Some((ctx, belief))));
    let step = equilibrium_step(m, &solver, stream);
    let mut search = StreamSearch::new(stream.horizon(), &step);
    search.query(config0, &|s: &BeliefState| s.0[ctx].contains(belief), mode)
}
