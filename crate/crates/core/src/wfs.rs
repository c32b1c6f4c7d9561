//! Reducibility, grounded equilibria and the well-founded semantics.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{BeliefSet, Formula, KnowledgeBase};
use crate::model::{BeliefState, BridgeRule, Context, HeadKind, Input, InputStream, KbConfig, ReactiveMcs};
use crate::solver::Solver;
use crate::stream::{run_with, EquilibriaStream, Selector, StreamRun};
use crate::term::{Atom, Subst};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReducibilityMode {
    /// Trust logic capabilities and the shape of the management policies.
    Certified,
    /// Enumerate operation sets of at most `bound` operations.
    BruteForce { bound: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Yes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextReducibility {
    pub context: String,
    pub logic_reducible: bool,
    pub mng_commutes_with_red: Verdict,
    pub monotone_sequences_ok: Verdict,
    pub evidence: Vec<String>,
}

impl ContextReducibility {
    fn verdict(&self) -> Verdict {
        let logic = if self.logic_reducible { Verdict::Yes } else { Verdict::No };
        logic.and(self.mng_commutes_with_red).and(self.monotone_sequences_ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibilityReport {
    pub per_context: Vec<ContextReducibility>,
    /// Reducible given the configuration; unknown verdicts count as failures.
    pub overall: bool,
    pub persistent: Verdict,
}

/// Caps on the enumeration state spaces.
const MAX_STATES: usize = 20_000;
const MAX_SAMPLE_KBS: usize = 16;
const MAX_NEG_ATOMS: usize = 12;
const DEFAULT_BOUND: usize = 12;

fn heads(m: &ReactiveMcs, i: usize, kind: HeadKind) -> Vec<Atom> {
    let set: BTreeSet<Atom> = m.rules_of(i).filter(|r| r.kind == kind).map(|r| r.head.clone()).collect();
    set.into_iter().collect()
}

fn ops_of(ops: &[Atom], mask: u64) -> BTreeSet<Atom> {
    ops.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, a)| a.clone()).collect()
}

/// Atoms under negation in the kb; the reduct only depends on these.
fn negated_atoms(kb: &KnowledgeBase) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    for f in &kb.formulas {
        if let Formula::Rule(r) = f {
            for n in &r.neg {
                if let Ok(Some(a)) = n.ground_atom(&Subst::new()) {
                    out.insert(a);
                }
            }
        }
    }
    out
}

fn certified_monotone(ctx: &Context, kb: &KnowledgeBase, now_ops: &[Atom], evidence: &mut Vec<String>) -> Verdict {
    let mut v = Verdict::Yes;
    for op in now_ops {
        if let Some(reason) = ctx.policy.removal_reason(op) {
            evidence.push(reason);
            v = Verdict::No;
        }
    }
    if let Some(a) = kb.facts().find(|a| ctx.policy.is_transient(a)) {
        evidence.push(format!("kb holds transient fact {a}, which any update drops"));
        v = Verdict::No;
    }
    v
}

/// Explores increasing chains of now-operation sets from `kb`; returns the verdict
/// and the knowledge bases met on the way.
fn brute_monotone(
    ctx: &Context,
    kb: &KnowledgeBase,
    now_ops: &[Atom],
    bound: usize,
    evidence: &mut Vec<String>,
) -> Result<(Verdict, Vec<KnowledgeBase>)> {
    if now_ops.len() > bound.min(63) {
        evidence.push(format!("{} now-operations exceed the bound {bound}", now_ops.len()));
        return Ok((Verdict::Unknown, vec![kb.clone()]));
    }
    let full: u64 = if now_ops.is_empty() { 0 } else { (1u64 << now_ops.len()) - 1 };
    let mut seen: HashSet<(KnowledgeBase, u64)> = HashSet::new();
    let mut kbs: Vec<KnowledgeBase> = vec![kb.clone()];
    let mut queue = VecDeque::from([(kb.clone(), 0u64)]);
    seen.insert((kb.clone(), 0));
    while let Some((cur, prev)) = queue.pop_front() {
        // supersets of prev: prev | sub for every sub of the complement
        let rest = full & !prev;
        let mut sub = rest;
        loop {
            let mask = prev | sub;
            let ops = ops_of(now_ops, mask);
            let next = ctx.manage(&ops, &cur)?;
            if !cur.is_subset(&next) {
                let lost: Vec<String> = cur.formulas.difference(&next.formulas).map(|f| f.to_string()).collect();
                evidence.push(format!("applying {{{}}} to {cur} drops {}", fmt_ops(&ops), lost.join(" ")));
                return Ok((Verdict::No, kbs));
            }
            if seen.insert((next.clone(), mask)) {
                if seen.len() > MAX_STATES {
                    evidence.push("operation chains exceed the state cap".into());
                    return Ok((Verdict::Unknown, kbs));
                }
                if !kbs.contains(&next) {
                    kbs.push(next.clone());
                }
                queue.push_back((next, mask));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok((Verdict::Yes, kbs))
}

fn fmt_ops(ops: &BTreeSet<Atom>) -> String {
    ops.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

/// `red(mng(OP, kb), S) = mng(OP, red(kb, S))` on sampled knowledge bases.
fn brute_commutes(
    ctx: &Context,
    kbs: &[KnowledgeBase],
    now_ops: &[Atom],
    bound: usize,
    evidence: &mut Vec<String>,
) -> Result<Verdict> {
    if ctx.logic.capabilities().identity_reduction {
        return Ok(Verdict::Yes);
    }
    if now_ops.len() > bound.min(63) {
        evidence.push(format!("{} now-operations exceed the bound {bound}", now_ops.len()));
        return Ok(Verdict::Unknown);
    }
    for kb in kbs.iter().take(MAX_SAMPLE_KBS) {
        for mask in 0..(1u64 << now_ops.len()) {
            let ops = ops_of(now_ops, mask);
            let managed = ctx.manage(&ops, kb)?;
            let mut neg = negated_atoms(kb);
            neg.extend(negated_atoms(&managed));
            if neg.len() > MAX_NEG_ATOMS {
                evidence.push(format!("{} negated atoms exceed the sampling cap", neg.len()));
                return Ok(Verdict::Unknown);
            }
            let neg: Vec<Atom> = neg.into_iter().collect();
            for smask in 0..(1u64 << neg.len()) {
                let s: BeliefSet = ops_of(&neg, smask);
                let left = ctx.logic.reduce(&managed, &s)?;
                let right = ctx.manage(&ops, &ctx.logic.reduce(kb, &s)?)?;
                if left != right {
                    evidence
                        .push(format!("management and reduction disagree on {{{}}} applied to {kb}", fmt_ops(&ops)));
                    return Ok(Verdict::No);
                }
            }
        }
    }
    Ok(Verdict::Yes)
}

fn check_context(m: &ReactiveMcs, i: usize, kb: &KnowledgeBase, mode: ReducibilityMode) -> Result<ContextReducibility> {
    let ctx = &m.contexts()[i];
    let now_ops = heads(m, i, HeadKind::Now);
    let mut evidence = Vec::new();
    let logic_reducible = ctx.logic.capabilities().reducible;
    if !logic_reducible {
        evidence.push(format!("{} logic has no reduction", ctx.logic.kind.name()));
    }
    let (commutes, monotone) = match mode {
        ReducibilityMode::Certified => {
            // shipped policies only edit facts, which no reduction touches
            (Verdict::Yes, certified_monotone(ctx, kb, &now_ops, &mut evidence))
        }
        ReducibilityMode::BruteForce { bound } => {
            let (mono, kbs) = brute_monotone(ctx, kb, &now_ops, bound, &mut evidence)?;
            (brute_commutes(ctx, &kbs, &now_ops, bound, &mut evidence)?, mono)
        }
    };
    Ok(ContextReducibility {
        context: ctx.name.to_string(),
        logic_reducible,
        mng_commutes_with_red: commutes,
        monotone_sequences_ok: monotone,
        evidence,
    })
}

/// Knowledge bases of context `i` reachable from `kb` by sequences of next-operation sets.
fn reachable_kbs(m: &ReactiveMcs, i: usize, kb: &KnowledgeBase, bound: usize) -> Result<Option<Vec<KnowledgeBase>>> {
    let ctx = &m.contexts()[i];
    let next_ops = heads(m, i, HeadKind::Next);
    if next_ops.len() > bound.min(63) {
        return Ok(None);
    }
    let mut seen: Vec<KnowledgeBase> = vec![kb.clone()];
    let mut index: HashSet<KnowledgeBase> = HashSet::from([kb.clone()]);
    let mut k = 0;
    while k < seen.len() {
        let cur = seen[k].clone();
        k += 1;
        for mask in 0..(1u64 << next_ops.len()) {
            let next = ctx.manage(&ops_of(&next_ops, mask), &cur)?;
            if index.insert(next.clone()) {
                if seen.len() >= MAX_STATES {
                    return Ok(None);
                }
                seen.push(next);
            }
        }
    }
    Ok(Some(seen))
}

/// Reducibility of `m` given `config`, and persistence under next-operations.
pub fn check_reducible(m: &ReactiveMcs, config: &KbConfig, mode: ReducibilityMode) -> Result<ReducibilityReport> {
    m.check_config(config)?;
    let mut per_context = Vec::new();
    let mut persistent = Verdict::Yes;
    let bound = match mode {
        ReducibilityMode::Certified => DEFAULT_BOUND,
        ReducibilityMode::BruteForce { bound } => bound,
    };
    for i in 0..m.contexts().len() {
        let report = check_context(m, i, &config.0[i], mode)?;
        let here = report.verdict();
        per_context.push(report);
        if here != Verdict::Yes {
            persistent = persistent.and(here);
            continue;
        }
        match reachable_kbs(m, i, &config.0[i], bound)? {
            None => persistent = persistent.and(Verdict::Unknown),
            Some(kbs) => {
                for kb in kbs.iter().skip(1) {
                    let r = check_context(m, i, kb, mode)?;
                    let v = r.verdict();
                    if v != Verdict::Yes {
                        per_context[i].evidence.push(format!("after next-operations reaching {kb}: not reducible"));
                        per_context[i].evidence.extend(r.evidence);
                        persistent = persistent.and(v);
                        break;
                    }
                }
            }
        }
    }
    let overall = per_context.iter().all(|c| c.verdict() == Verdict::Yes);
    Ok(ReducibilityReport { per_context, overall, persistent })
}

/// Reducible by certificate, or failing that by bounded enumeration.
pub fn is_reducible(m: &ReactiveMcs, config: &KbConfig) -> Result<bool> {
    if check_reducible(m, config, ReducibilityMode::Certified)?.overall {
        return Ok(true);
    }
    Ok(check_reducible(m, config, ReducibilityMode::BruteForce { bound: DEFAULT_BOUND })?.overall)
}

fn require_reducible(m: &ReactiveMcs, config: &KbConfig) -> Result<()> {
    if is_reducible(m, config)? {
        Ok(())
    } else {
        Err(Error::Capability("system is not reducible given the configuration".into()))
    }
}

/// The `(input, candidate)`-reduct: now-rules whose negative literals all hold
/// false keep their positive bodies; kbs are reduced per context.
pub fn reduct(
    m: &ReactiveMcs,
    config: &KbConfig,
    input: &Input,
    candidate: &BeliefState,
) -> Result<(ReactiveMcs, KbConfig)> {
    m.check_input(input)?;
    let mut rules: Vec<BridgeRule> = Vec::new();
    for r in m.rules().iter().filter(|r| r.kind == HeadKind::Now) {
        let mut blocked = false;
        for l in r.body.iter().filter(|l| l.negated) {
            // a negated literal is satisfied iff its atom is absent
            if !crate::model::satisfies(input, candidate, l)? {
                blocked = true;
                break;
            }
        }
        if !blocked {
            let mut kept = r.clone();
            kept.body.retain(|l| !l.negated);
            rules.push(kept);
        }
    }
    let kbs = m
        .contexts()
        .iter()
        .zip(&config.0)
        .zip(&candidate.0)
        .map(|((c, kb), s)| c.logic.reduce(kb, s))
        .collect::<Result<Vec<_>>>()?;
    Ok((m.with_rules(rules)?, KbConfig(kbs)))
}

fn unique_acceptable(m: &ReactiveMcs, i: usize, kb: &KnowledgeBase) -> Result<BeliefSet> {
    let mut sets = m.contexts()[i].accept(kb)?;
    if sets.len() != 1 {
        return Err(Error::Precondition(format!(
            "context {} accepts {} belief sets for a definite knowledge base",
            m.contexts()[i].name,
            sets.len()
        )));
    }
    Ok(sets.remove(0))
}

/// Least equilibrium of a definite system by monotone iteration.
pub fn grounded_iteration(m: &ReactiveMcs, config: &KbConfig, input: &Input) -> Result<BeliefState> {
    m.check_config(config)?;
    m.check_input(input)?;
    if let Some(r) = m.rules().iter().find(|r| r.has_negation()) {
        return Err(Error::Precondition(format!("not definite: rule {} contains negation", r.id)));
    }
    for (c, kb) in m.contexts().iter().zip(&config.0) {
        if !c.logic.is_reduced(kb) {
            return Err(Error::Precondition(format!("not definite: kb of {} is not reduced", c.name)));
        }
    }
    let n = m.contexts().len();
    let mut kbs = config.clone();
    let mut state = BeliefState((0..n).map(|i| unique_acceptable(m, i, &kbs.0[i])).collect::<Result<_>>()?);
    // each productive step adds content, so this many rounds always suffice
    let vocab: usize = m.contexts().iter().map(|c| c.logic.vocabulary.len()).sum();
    let cap = vocab + kbs.0.iter().map(KnowledgeBase::len).sum::<usize>() + 2;
    for _ in 0..cap {
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let (now, _) = m.app_sets(i, input, &state);
            next.push(m.contexts()[i].manage(&now, &kbs.0[i])?);
        }
        let next = KbConfig(next);
        if next == kbs {
            return Ok(state);
        }
        state = BeliefState((0..n).map(|i| unique_acceptable(m, i, &next.0[i])).collect::<Result<_>>()?);
        kbs = next;
    }
    Err(Error::Precondition("grounded iteration did not converge; management is not monotone".into()))
}

/// `GE` of the reduct w.r.t. `candidate`.
pub fn gamma(m: &ReactiveMcs, config: &KbConfig, input: &Input, candidate: &BeliefState) -> Result<BeliefState> {
    let (mr, cr) = reduct(m, config, input, candidate)?;
    grounded_iteration(&mr, &cr, input)
}

fn grounded_unchecked(solver: &Solver, config: &KbConfig, input: &Input) -> Result<Vec<BeliefState>> {
    let m = solver.system();
    let mut out = Vec::new();
    // every grounded equilibrium is an equilibrium
    for b in solver.equilibria(config, input)? {
        if gamma(m, config, input, &b)? == b {
            out.push(b);
        }
    }
    Ok(out)
}

/// Equilibria that are the grounded equilibrium of their own reduct.
pub fn grounded_equilibria(m: &ReactiveMcs, config: &KbConfig, input: &Input) -> Result<Vec<BeliefState>> {
    require_reducible(m, config)?;
    grounded_unchecked(&Solver::new(m), config, input)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellFoundedModel {
    pub state: BeliefState,
    pub has_grounded: bool,
}

fn require_normal(m: &ReactiveMcs) -> Result<BeliefState> {
    Ok(BeliefState(m.contexts().iter().map(|c| c.logic.least_belief_set()).collect::<Result<_>>()?))
}

fn wf_unchecked(solver: &Solver, config: &KbConfig, input: &Input, least: BeliefState) -> Result<WellFoundedModel> {
    let m = solver.system();
    let mut cur = least;
    loop {
        let next = gamma(m, config, input, &gamma(m, config, input, &cur)?)?;
        if next == cur {
            break;
        }
        cur = next;
    }
    let has_grounded = !grounded_unchecked(solver, config, input)?.is_empty();
    Ok(WellFoundedModel { state: cur, has_grounded })
}

/// Least fixpoint of `gamma` applied twice, from the least belief state.
pub fn well_founded_model(m: &ReactiveMcs, config: &KbConfig, input: &Input) -> Result<WellFoundedModel> {
    let least = require_normal(m)?;
    require_reducible(m, config)?;
    wf_unchecked(&Solver::new(m), config, input, least)
}

fn not_reducible_at(t: usize) -> Error {
    Error::Capability(format!("system is not reducible at instant {t}"))
}

/// Grounded equilibria streams; checks reducibility at every configuration met.
pub fn run_grounded_stream(
    m: &ReactiveMcs,
    config0: &KbConfig,
    stream: &InputStream,
    selector: Selector,
) -> Result<StreamRun> {
    m.check_config(config0)?;
    let solver = Solver::new(m);
    let step = |t: usize, cfg: &KbConfig| -> Result<Vec<(BeliefState, KbConfig)>> {
        if !is_reducible(m, cfg)? {
            return Err(not_reducible_at(t));
        }
        let input = stream.at(t);
        grounded_unchecked(&solver, cfg, input)?
            .into_iter()
            .map(|b| {
                let next = m.update_config(cfg, input, &b)?;
                Ok((b, next))
            })
            .collect()
    };
    run_with(stream.horizon(), config0, selector, &step)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellFoundedStream {
    pub stream: EquilibriaStream,
    pub has_grounded: Vec<bool>,
}

/// The well-founded stream; configurations evolve on the well-founded models.
pub fn run_wf_stream(m: &ReactiveMcs, config0: &KbConfig, stream: &InputStream) -> Result<WellFoundedStream> {
    m.check_config(config0)?;
    let least = require_normal(m)?;
    let solver = Solver::new(m);
    let mut cfg = config0.clone();
    let mut out = WellFoundedStream {
        stream: EquilibriaStream { states: Vec::new(), configs: Vec::new() },
        has_grounded: Vec::new(),
    };
    for t in 1..=stream.horizon() {
        if !is_reducible(m, &cfg)? {
            return Err(not_reducible_at(t));
        }
        let w = wf_unchecked(&solver, &cfg, stream.at(t), least.clone())?;
        let next = m.update_config(&cfg, stream.at(t), &w.state)?;
        out.stream.states.push(w.state);
        out.stream.configs.push(cfg);
        out.has_grounded.push(w.has_grounded);
        cfg = next;
    }
    Ok(out)
}
