//! Structural analysis and repairs by bridge-rule removal.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BeliefState, HeadKind, InputStream, KbConfig, LiteralSource, ReactiveMcs};
use crate::solver::Solver;
use crate::stream::{run_stream, EquilibriaStream, Selector};

/// `(i, j)` when some rule of context `i` reads a belief of context `j`.
pub fn dependency_relation(m: &ReactiveMcs) -> BTreeSet<(usize, usize)> {
    m.rules().iter().flat_map(|r| r.context_atoms().map(move |(c, _, _)| (r.target, c))).collect()
}

/// The same relation restricted to rules with immediate heads, the only ones
/// taking part in an equilibrium.
pub fn now_dependency_relation(m: &ReactiveMcs) -> BTreeSet<(usize, usize)> {
    m.rules()
        .iter()
        .filter(|r| r.kind == HeadKind::Now)
        .flat_map(|r| r.context_atoms().map(move |(c, _, _)| (r.target, c)))
        .collect()
}

fn cyclic(n: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for &(i, j) in edges {
        g.add_edge(nodes[i], nodes[j], ());
    }
    is_cyclic_directed(&g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    /// No cycle through rules with immediate heads.
    pub acyclic: bool,
    /// No cycle at all, counting next rules too.
    pub acyclic_all_rules: bool,
    pub totally_coherent_all: bool,
    /// Sufficient condition only.
    pub strong_consistency_guaranteed: bool,
    pub dependencies: Vec<(String, String)>,
}

pub fn analyze(m: &ReactiveMcs) -> Analysis {
    let n = m.contexts().len();
    let edges = dependency_relation(m);
    let acyclic = !cyclic(n, &now_dependency_relation(m));
    let totally_coherent_all = m.contexts().iter().all(|c| c.logic.capabilities().totally_coherent);
    let name = |k: usize| m.contexts()[k].name.to_string();
    Analysis {
        acyclic,
        acyclic_all_rules: !cyclic(n, &edges),
        totally_coherent_all,
        strong_consistency_guaranteed: acyclic && totally_coherent_all,
        dependencies: edges.iter().map(|&(i, j)| (name(i), name(j))).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum RepairPolicy {
    Plain,
    Minimal,
    Global,
    MinimalGlobal,
    Incremental,
    MinimallyIncremental,
}

impl std::str::FromStr for RepairPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<RepairPolicy> {
        Ok(match s {
            "plain" => RepairPolicy::Plain,
            "minimal" => RepairPolicy::Minimal,
            "global" => RepairPolicy::Global,
            "minimalGlobal" | "minimal-global" => RepairPolicy::MinimalGlobal,
            "incremental" => RepairPolicy::Incremental,
            "minimallyIncremental" | "minimally-incremental" => RepairPolicy::MinimallyIncremental,
            _ => return Err(Error::Config(format!("unknown repair policy {s:?}"))),
        })
    }
}

impl std::fmt::Display for RepairPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RepairPolicy::Plain => "plain",
            RepairPolicy::Minimal => "minimal",
            RepairPolicy::Global => "global",
            RepairPolicy::MinimalGlobal => "minimalGlobal",
            RepairPolicy::Incremental => "incremental",
            RepairPolicy::MinimallyIncremental => "minimallyIncremental",
        })
    }
}

/// Rules removed at each instant, as rule indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Repair {
    pub per_instant: Vec<BTreeSet<usize>>,
}

impl Repair {
    pub fn empty(tau: usize) -> Repair {
        Repair { per_instant: vec![BTreeSet::new(); tau] }
    }

    pub fn full(m: &ReactiveMcs, tau: usize) -> Repair {
        Repair { per_instant: vec![(0..m.rules().len()).collect(); tau] }
    }

    pub fn ids(&self, m: &ReactiveMcs) -> Vec<Vec<String>> {
        self.per_instant.iter().map(|set| set.iter().map(|&k| m.rules()[k].id.to_string()).collect()).collect()
    }

    /// Pointwise inclusion.
    pub fn le(&self, other: &Repair) -> bool {
        self.per_instant.len() == other.per_instant.len()
            && self.per_instant.iter().zip(&other.per_instant).all(|(a, b)| a.is_subset(b))
    }

    pub fn total(&self) -> usize {
        self.per_instant.iter().map(BTreeSet::len).sum()
    }
}

/// Rules whose input literals all hold at `input`; only these can ever fire.
fn live_rules(m: &ReactiveMcs, input: &crate::model::Input) -> Vec<usize> {
    (0..m.rules().len())
        .filter(|&k| {
            m.rules()[k].body.iter().all(|l| match l.source {
                LiteralSource::Input(s) => input.0[s].contains(&l.atom) != l.negated,
                LiteralSource::Context(_) => true,
            })
        })
        .collect()
}

/// Subsets of `items` in (cardinality, lexicographic) order.
fn masks(items: &[usize]) -> impl Iterator<Item = BTreeSet<usize>> + '_ {
    (0..=items.len()).flat_map(move |k| items.iter().copied().combinations(k).map(|c| c.into_iter().collect()))
}

type Key = (usize, KbConfig);

/// Repaired successors of a configuration at one instant, memoised per removal set.
struct Stepper<'a> {
    m: &'a ReactiveMcs,
    stream: &'a InputStream,
    systems: HashMap<BTreeSet<usize>, ReactiveMcs>,
}

impl<'a> Stepper<'a> {
    fn new(m: &'a ReactiveMcs, stream: &'a InputStream) -> Self {
        Stepper { m, stream, systems: HashMap::new() }
    }

    fn successors(&mut self, t: usize, cfg: &KbConfig, mask: &BTreeSet<usize>) -> Result<Vec<(BeliefState, KbConfig)>> {
        let sub = self.systems.entry(mask.clone()).or_insert_with(|| self.m.without_rules(mask));
        let input = self.stream.at(t);
        let eqs = Solver::new(sub).equilibria(cfg, input)?;
        eqs.into_iter()
            .map(|e| {
                let next = sub.update_config(cfg, input, &e)?;
                Ok((e, next))
            })
            .collect()
    }
}

struct Found {
    repair: Vec<BTreeSet<usize>>,
    witness: EquilibriaStream,
}

impl Found {
    fn start() -> Found {
        Found { repair: Vec::new(), witness: EquilibriaStream { states: Vec::new(), configs: Vec::new() } }
    }

    fn push(&mut self, mask: BTreeSet<usize>, state: BeliefState, cfg: KbConfig) {
        self.repair.push(mask);
        self.witness.states.push(state);
        self.witness.configs.push(cfg);
    }

    fn pop(&mut self) {
        self.repair.pop();
        self.witness.states.pop();
        self.witness.configs.pop();
    }
}

/// Depth-first search where each instant picks a removal set among `allowed`.
fn search_per_instant(
    st: &mut Stepper,
    t: usize,
    cfg: &KbConfig,
    prev: &BTreeSet<usize>,
    incremental: bool,
    dead: &mut HashSet<(Key, BTreeSet<usize>)>,
    cur: &mut Found,
) -> Result<bool> {
    if t > st.stream.horizon() {
        return Ok(true);
    }
    let key = ((t, cfg.clone()), if incremental { prev.clone() } else { BTreeSet::new() });
    if dead.contains(&key) {
        return Ok(false);
    }
    let live: Vec<usize> = live_rules(st.m, st.stream.at(t)).into_iter().filter(|k| !prev.contains(k)).collect();
    for extra in masks(&live) {
        let mask: BTreeSet<usize> = if incremental { prev.union(&extra).copied().collect() } else { extra };
        for (state, next) in st.successors(t, cfg, &mask)? {
            cur.push(mask.clone(), state, cfg.clone());
            let carried = if incremental { mask.clone() } else { BTreeSet::new() };
            if search_per_instant(st, t + 1, &next, &carried, incremental, dead, cur)? {
                return Ok(true);
            }
            cur.pop();
        }
    }
    dead.insert(key);
    Ok(false)
}

/// Best continuation from a node: total removals and the first choice achieving it.
type Plan = Option<(usize, BTreeSet<usize>, BeliefState, KbConfig)>;

fn min_cost(st: &mut Stepper, t: usize, cfg: &KbConfig, memo: &mut HashMap<Key, Plan>) -> Result<Option<usize>> {
    if t > st.stream.horizon() {
        return Ok(Some(0));
    }
    if let Some(p) = memo.get(&(t, cfg.clone())) {
        return Ok(p.as_ref().map(|p| p.0));
    }
    let live = live_rules(st.m, st.stream.at(t));
    let mut best: Plan = None;
    for mask in masks(&live) {
        if best.as_ref().is_some_and(|b| mask.len() >= b.0) {
            break;
        }
        for (state, next) in st.successors(t, cfg, &mask)? {
            if let Some(rest) = min_cost(st, t + 1, &next, memo)? {
                let total = mask.len() + rest;
                if best.as_ref().is_none_or(|b| total < b.0) {
                    best = Some((total, mask.clone(), state, next));
                }
            }
        }
    }
    let cost = best.as_ref().map(|b| b.0);
    memo.insert((t, cfg.clone()), best);
    Ok(cost)
}

/// A repair of the requested kind with a repaired equilibria stream witnessing it,
/// or `None` when no repair of that kind exists.
pub fn find_repair(
    m: &ReactiveMcs,
    config0: &KbConfig,
    stream: &InputStream,
    policy: RepairPolicy,
) -> Result<Option<(Repair, EquilibriaStream)>> {
    m.check_config(config0)?;
    let tau = stream.horizon();
    match policy {
        RepairPolicy::Global | RepairPolicy::MinimalGlobal => {
            let mut live = BTreeSet::new();
            for t in 1..=tau {
                live.extend(live_rules(m, stream.at(t)));
            }
            let live: Vec<usize> = live.into_iter().collect();
            for mask in masks(&live) {
                let sub = m.without_rules(&mask);
                if let Some(w) = run_stream(&sub, config0, stream, Selector::First)?.streams.into_iter().next() {
                    return Ok(Some((Repair { per_instant: vec![mask; tau] }, w)));
                }
            }
            Ok(None)
        }
        RepairPolicy::Minimal => {
            let mut st = Stepper::new(m, stream);
            let mut memo = HashMap::new();
            if min_cost(&mut st, 1, config0, &mut memo)?.is_none() {
                return Ok(None);
            }
            let mut found = Found::start();
            let mut cfg = config0.clone();
            for t in 1..=tau {
                let Some(Some((_, mask, state, next))) = memo.get(&(t, cfg.clone())).cloned() else {
                    return Err(Error::Structural("repair plan lost its continuation".into()));
                };
                found.push(mask, state, cfg);
                cfg = next;
            }
            Ok(Some((Repair { per_instant: found.repair }, found.witness)))
        }
        RepairPolicy::Plain | RepairPolicy::Incremental | RepairPolicy::MinimallyIncremental => {
            let incremental = policy != RepairPolicy::Plain;
            let mut st = Stepper::new(m, stream);
            let mut found = Found::start();
            let ok = search_per_instant(
                &mut st,
                1,
                config0,
                &BTreeSet::new(),
                incremental,
                &mut HashSet::new(),
                &mut found,
            )?;
            Ok(ok.then_some((Repair { per_instant: found.repair }, found.witness)))
        }
    }
}

/// All pointwise-minimal repairs, in canonical order. Exponential; for small systems.
pub fn minimal_repairs(m: &ReactiveMcs, config0: &KbConfig, stream: &InputStream) -> Result<Vec<Repair>> {
    fn walk(
        st: &mut Stepper,
        t: usize,
        cfg: &KbConfig,
        prefix: &mut Vec<BTreeSet<usize>>,
        out: &mut BTreeSet<Repair>,
        seen: &mut HashSet<(Key, Vec<BTreeSet<usize>>)>,
    ) -> Result<()> {
        if t > st.stream.horizon() {
            out.insert(Repair { per_instant: prefix.clone() });
            return Ok(());
        }
        if !seen.insert(((t, cfg.clone()), prefix.clone())) {
            return Ok(());
        }
        let live = live_rules(st.m, st.stream.at(t));
        for mask in masks(&live) {
            for (_, next) in st.successors(t, cfg, &mask)? {
                prefix.push(mask.clone());
                walk(st, t + 1, &next, prefix, out, seen)?;
                prefix.pop();
            }
        }
        Ok(())
    }
    m.check_config(config0)?;
    let mut st = Stepper::new(m, stream);
    let mut all = BTreeSet::new();
    walk(&mut st, 1, config0, &mut Vec::new(), &mut all, &mut HashSet::new())?;
    let all: Vec<Repair> = all.into_iter().collect();
    Ok(all.iter().filter(|r| !all.iter().any(|o| o != *r && o.le(r))).cloned().collect())
}

/// Checks that `witness` is a repaired equilibria stream for `repair`.
pub fn verify_repair(
    m: &ReactiveMcs,
    config0: &KbConfig,
    stream: &InputStream,
    repair: &Repair,
    witness: &EquilibriaStream,
) -> Result<bool> {
    let tau = stream.horizon();
    if repair.per_instant.len() != tau || witness.states.len() != tau || witness.configs.len() != tau {
        return Ok(false);
    }
    if repair.per_instant.iter().flatten().any(|&k| k >= m.rules().len()) {
        return Ok(false);
    }
    let mut cfg = config0.clone();
    for t in 1..=tau {
        let sub = m.without_rules(&repair.per_instant[t - 1]);
        let state = &witness.states[t - 1];
        if witness.configs[t - 1] != cfg || !sub.is_equilibrium(&cfg, stream.at(t), state)? {
            return Ok(false);
        }
        cfg = sub.update_config(&cfg, stream.at(t), state)?;
    }
    Ok(true)
}
