//! Equilibrium enumeration over projected belief states.
//!
//! Every relevant belief is a search variable. Storage contexts get one node
//! per relevant belief, other logics one node per context. Nodes are
//! processed by strongly connected component in dependency order: acyclic
//! components are computed directly, cyclic ones are guessed and checked as
//! soon as a node's inputs are all assigned. Each complete projected
//! candidate is then extended per context via its context problem.

use std::collections::{BTreeSet, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::Result;
use crate::logic::{BeliefSet, LogicKind};
use crate::model::{applicable, BeliefState, HeadKind, Input, KbConfig, ReactiveMcs};
use crate::term::Atom;

/// Beliefs read by some bridge-rule body, per context.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelevantBeliefs(pub Vec<BTreeSet<Atom>>);

pub fn relevant_beliefs(m: &ReactiveMcs, extra: Option<(usize, &Atom)>) -> RelevantBeliefs {
    let mut out = vec![BTreeSet::new(); m.contexts().len()];
    for r in m.rules() {
        for (c, a, _) in r.context_atoms() {
            out[c].insert(a.clone());
        }
    }
    if let Some((c, a)) = extra {
        if m.contexts()[c].logic.vocabulary.contains(a) {
            out[c].insert(a.clone());
        }
    }
    RelevantBeliefs(out)
}

#[derive(Debug)]
enum NodeKind {
    Belief(usize),
    Whole(Vec<usize>),
}

#[derive(Debug)]
struct Node {
    ctx: usize,
    kind: NodeKind,
    rules: Vec<usize>,
    deps: BTreeSet<usize>,
}

impl Node {
    fn own_vars(&self) -> Vec<usize> {
        match &self.kind {
            NodeKind::Belief(v) => vec![*v],
            NodeKind::Whole(vs) => vs.clone(),
        }
    }
}

#[derive(Debug)]
enum Step {
    Direct(usize),
    /// Variables in guessing order and, per position, the nodes checkable once it is set.
    Guess {
        vars: Vec<usize>,
        checks: Vec<Vec<usize>>,
    },
}

pub struct Solver<'a> {
    m: &'a ReactiveMcs,
    relevant: RelevantBeliefs,
    vars: Vec<(usize, Atom)>,
    nodes: Vec<Node>,
    steps: Vec<Step>,
}

struct Search<'s> {
    config: &'s KbConfig,
    input: &'s Input,
    cand: Vec<BeliefSet>,
    out: Vec<BeliefState>,
}

impl<'a> Solver<'a> {
    pub fn new(m: &'a ReactiveMcs) -> Self {
        Self::with_relevant(m, relevant_beliefs(m, None))
    }

    pub fn with_relevant(m: &'a ReactiveMcs, relevant: RelevantBeliefs) -> Self {
        let mut vars = Vec::new();
        let mut var_of: HashMap<(usize, Atom), usize> = HashMap::new();
        for (c, set) in relevant.0.iter().enumerate() {
            for a in set {
                var_of.insert((c, a.clone()), vars.len());
                vars.push((c, a.clone()));
            }
        }
        let mut nodes = Vec::new();
        for (c, ctx) in m.contexts().iter().enumerate() {
            if relevant.0[c].is_empty() {
                continue;
            }
            let now_rules: Vec<usize> =
                m.rule_indices_of(c).iter().copied().filter(|&k| m.rules()[k].kind == HeadKind::Now).collect();
            let deps_of = |rules: &[usize]| -> BTreeSet<usize> {
                rules
                    .iter()
                    .flat_map(|&k| m.rules()[k].context_atoms().map(|(c2, a, _)| var_of[&(c2, a.clone())]))
                    .collect()
            };
            if ctx.logic.kind == LogicKind::Storage {
                for a in &relevant.0[c] {
                    let rules: Vec<usize> =
                        now_rules.iter().copied().filter(|&k| ctx.policy.touches(&m.rules()[k].head, a)).collect();
                    let deps = deps_of(&rules);
                    nodes.push(Node { ctx: c, kind: NodeKind::Belief(var_of[&(c, a.clone())]), rules, deps });
                }
            } else {
                let own = relevant.0[c].iter().map(|a| var_of[&(c, a.clone())]).collect();
                let deps = deps_of(&now_rules);
                nodes.push(Node { ctx: c, kind: NodeKind::Whole(own), rules: now_rules, deps });
            }
        }

        let mut owner = vec![0usize; vars.len()];
        for (n, node) in nodes.iter().enumerate() {
            for v in node.own_vars() {
                owner[v] = n;
            }
        }
        let mut g = DiGraph::<usize, ()>::new();
        let idx: Vec<_> = (0..nodes.len()).map(|n| g.add_node(n)).collect();
        for (n, node) in nodes.iter().enumerate() {
            let targets: BTreeSet<usize> = node.deps.iter().map(|&v| owner[v]).collect();
            for t in targets {
                g.add_edge(idx[n], idx[t], ());
            }
        }
        let mut steps = Vec::new();
        for scc in tarjan_scc(&g) {
            let mut members: Vec<usize> = scc.iter().map(|i| g[*i]).collect();
            members.sort();
            let n0 = members[0];
            let self_loop = g.contains_edge(idx[n0], idx[n0]);
            if members.len() == 1 && !self_loop {
                steps.push(Step::Direct(n0));
                continue;
            }
            // widely read variables first so that checks fire early
            let mut gvars: Vec<usize> = members.iter().flat_map(|&n| nodes[n].own_vars()).collect();
            let readers = |v: usize| members.iter().filter(|&&n| nodes[n].deps.contains(&v)).count();
            gvars.sort_by_cached_key(|&v| std::cmp::Reverse(readers(v)));
            let pos_of: HashMap<usize, usize> = gvars.iter().enumerate().map(|(p, &v)| (v, p)).collect();
            let mut checks = vec![Vec::new(); gvars.len()];
            for &n in &members {
                let ready = nodes[n]
                    .own_vars()
                    .iter()
                    .chain(nodes[n].deps.iter())
                    .filter_map(|v| pos_of.get(v).copied())
                    .max()
                    .unwrap_or(0);
                checks[ready].push(n);
            }
            steps.push(Step::Guess { vars: gvars, checks });
        }
        Solver { m, relevant, vars, nodes, steps }
    }

    pub fn relevant(&self) -> &RelevantBeliefs {
        &self.relevant
    }

    pub fn system(&self) -> &ReactiveMcs {
        self.m
    }

    /// All equilibria, sorted.
    pub fn equilibria(&self, config: &KbConfig, input: &Input) -> Result<Vec<BeliefState>> {
        self.m.check_config(config)?;
        self.m.check_input(input)?;
        let mut s = Search { config, input, cand: vec![BeliefSet::new(); self.m.contexts().len()], out: Vec::new() };
        self.step(0, &mut s)?;
        let mut out = s.out;
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn ops_of(&self, node: &Node, s: &Search) -> std::collections::BTreeSet<Atom> {
        let holds = |c: usize, a: &Atom| s.cand[c].contains(a);
        node.rules
            .iter()
            .map(|&k| &self.m.rules()[k])
            .filter(|r| applicable(r, s.input, &holds))
            .map(|r| r.head.clone())
            .collect()
    }

    /// Values a node can take given its assigned dependencies.
    fn node_options(&self, n: usize, s: &Search) -> Result<Vec<Vec<(usize, bool)>>> {
        let node = &self.nodes[n];
        let ctx = &self.m.contexts()[node.ctx];
        let ops = self.ops_of(node, s);
        let kb = ctx.manage(&ops, &s.config.0[node.ctx])?;
        Ok(match &node.kind {
            NodeKind::Belief(v) => vec![vec![(*v, kb.has_fact(&self.vars[*v].1))]],
            NodeKind::Whole(own) => {
                let mut opts: Vec<Vec<(usize, bool)>> = ctx
                    .accept(&kb)?
                    .iter()
                    .map(|set| own.iter().map(|&v| (v, set.contains(&self.vars[v].1))).collect())
                    .collect();
                opts.sort();
                opts.dedup();
                opts
            }
        })
    }

    fn set_var(&self, s: &mut Search, v: usize, val: bool) {
        let (c, a) = &self.vars[v];
        if val {
            s.cand[*c].insert(a.clone());
        } else {
            s.cand[*c].remove(a);
        }
    }

    fn step(&self, k: usize, s: &mut Search) -> Result<()> {
        let Some(step) = self.steps.get(k) else { return self.leaf(s) };
        match step {
            Step::Direct(n) => {
                for opt in self.node_options(*n, s)? {
                    for &(v, val) in &opt {
                        self.set_var(s, v, val);
                    }
                    self.step(k + 1, s)?;
                }
                for v in self.nodes[*n].own_vars() {
                    self.set_var(s, v, false);
                }
                Ok(())
            }
            Step::Guess { vars, checks } => {
                self.guess(k, 0, vars, checks, s)?;
                for &v in vars {
                    self.set_var(s, v, false);
                }
                Ok(())
            }
        }
    }

    fn guess(&self, k: usize, pos: usize, vars: &[usize], checks: &[Vec<usize>], s: &mut Search) -> Result<()> {
        if pos == vars.len() {
            return self.step(k + 1, s);
        }
        for val in [false, true] {
            self.set_var(s, vars[pos], val);
            let mut ok = true;
            for &n in &checks[pos] {
                let current: Vec<(usize, bool)> = self.nodes[n]
                    .own_vars()
                    .iter()
                    .map(|&v| (v, s.cand[self.vars[v].0].contains(&self.vars[v].1)))
                    .collect();
                if !self.node_options(n, s)?.contains(&current) {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.guess(k, pos + 1, vars, checks, s)?;
            }
        }
        Ok(())
    }

    /// Solves each context problem for a complete projected candidate.
    fn leaf(&self, s: &mut Search) -> Result<()> {
        let holds = |c: usize, a: &Atom| s.cand[c].contains(a);
        let mut per_ctx: Vec<Vec<BeliefSet>> = Vec::with_capacity(self.m.contexts().len());
        for (i, ctx) in self.m.contexts().iter().enumerate() {
            let ops = self.m.app_now(i, s.input, &holds);
            let kb = ctx.manage(&ops, &s.config.0[i])?;
            let rel = &self.relevant.0[i];
            let sets: Vec<BeliefSet> =
                ctx.accept(&kb)?.into_iter().filter(|set| set.intersection(rel).eq(s.cand[i].iter())).collect();
            if sets.is_empty() {
                return Ok(());
            }
            per_ctx.push(sets);
        }
        let mut acc: Vec<Vec<BeliefSet>> = vec![Vec::new()];
        for sets in per_ctx {
            let mut next = Vec::with_capacity(acc.len() * sets.len());
            for prefix in &acc {
                for set in &sets {
                    let mut p = prefix.clone();
                    p.push(set.clone());
                    next.push(p);
                }
            }
            acc = next;
        }
        s.out.extend(acc.into_iter().map(BeliefState));
        Ok(())
    }
}

pub fn enumerate_equilibria(m: &ReactiveMcs, config: &KbConfig, input: &Input) -> Result<Vec<BeliefState>> {
    Solver::new(m).equilibria(config, input)
}

/// Pointwise-minimal elements of a list of belief states.
pub fn minimal_states(all: &[BeliefState]) -> Vec<BeliefState> {
    all.iter().filter(|b| !all.iter().any(|o| o != *b && o.is_subset(b))).cloned().collect()
}

pub fn minimal_equilibria(m: &ReactiveMcs, config: &KbConfig, input: &Input) -> Result<Vec<BeliefState>> {
    Ok(minimal_states(&enumerate_equilibria(m, config, input)?))
}
