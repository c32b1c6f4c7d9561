//! The system model: contexts, bridge rules, belief states, inputs and
//! knowledge-base configurations, plus the single-instant primitives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{BeliefSet, KnowledgeBase, Logic};
use crate::policy::ManagementPolicy;
use crate::term::{fmt_set, Atom, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub name: Symbol,
    pub logic: Logic,
    pub policy: ManagementPolicy,
}

impl Context {
    pub fn new(name: &str, logic: Logic, policy: ManagementPolicy) -> Self {
        Context { name: crate::term::sym(name), logic, policy }
    }

    /// `mng(ops, kb)`; the result must be admissible.
    pub fn manage(&self, ops: &BTreeSet<Atom>, kb: &KnowledgeBase) -> Result<KnowledgeBase> {
        let out = self.policy.apply(ops, kb)?;
        self.logic
            .admissible(&out)
            .map_err(|m| Error::plugin(&self.name, format!("inadmissible kb after management: {m}")))?;
        Ok(out)
    }

    pub fn accept(&self, kb: &KnowledgeBase) -> Result<Vec<BeliefSet>> {
        self.logic.acceptable(kb).map_err(|m| Error::plugin(&self.name, m))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeadKind {
    Now,
    Next,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiteralSource {
    Context(usize),
    Input(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BridgeLiteral {
    pub source: LiteralSource,
    pub atom: Atom,
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BridgeRule {
    pub id: Symbol,
    pub target: usize,
    pub kind: HeadKind,
    pub head: Atom,
    pub body: Vec<BridgeLiteral>,
}

impl BridgeRule {
    pub fn has_negation(&self) -> bool {
        self.body.iter().any(|l| l.negated)
    }

    pub fn context_atoms(&self) -> impl Iterator<Item = (usize, &Atom, bool)> {
        self.body.iter().filter_map(|l| match l.source {
            LiteralSource::Context(c) => Some((c, &l.atom, l.negated)),
            LiteralSource::Input(_) => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputLanguage {
    pub name: Symbol,
    pub elements: BTreeSet<Atom>,
}

/// Belief state: one belief set per context.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BeliefState(pub Vec<BeliefSet>);

/// Input: one subset per input language.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Input(pub Vec<BTreeSet<Atom>>);

/// Configuration of knowledge bases.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KbConfig(pub Vec<KnowledgeBase>);

impl BeliefState {
    pub fn empty(n: usize) -> Self {
        BeliefState(vec![BeliefSet::new(); n])
    }

    /// Pointwise inclusion.
    pub fn is_subset(&self, other: &BeliefState) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset(b))
    }
}

impl fmt::Display for BeliefState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_set).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl fmt::Display for KbConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_set).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

/// Finite input stream `I^1..I^τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputStream {
    inputs: Vec<Input>,
}

impl InputStream {
    pub fn new(inputs: Vec<Input>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::Config("input stream horizon must be positive".into()));
        }
        Ok(InputStream { inputs })
    }

    pub fn horizon(&self) -> usize {
        self.inputs.len()
    }

    /// Input at instant `t`, 1-based.
    pub fn at(&self, t: usize) -> &Input {
        &self.inputs[t - 1]
    }

    pub fn inputs(&self) -> &[Input] {
        &self.inputs
    }

    pub fn truncate(&self, tau: usize) -> Result<Self> {
        InputStream::new(self.inputs[..tau.min(self.inputs.len())].to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReactiveMcs {
    contexts: Vec<Context>,
    inputs: Vec<InputLanguage>,
    rules: Vec<BridgeRule>,
    by_target: Vec<Vec<usize>>,
    ids: BTreeMap<Symbol, usize>,
}

impl ReactiveMcs {
    /// Validated construction.
    pub fn new(contexts: Vec<Context>, inputs: Vec<InputLanguage>, rules: Vec<BridgeRule>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for c in &contexts {
            if !names.insert(c.name.clone()) {
                return Err(Error::Config(format!("duplicate context {}", c.name)));
            }
        }
        let mut lnames = BTreeSet::new();
        for l in &inputs {
            if !lnames.insert(l.name.clone()) {
                return Err(Error::Config(format!("duplicate input language {}", l.name)));
            }
        }
        let mut ids = BTreeMap::new();
        let mut by_target = vec![Vec::new(); contexts.len()];
        for (k, r) in rules.iter().enumerate() {
            if ids.insert(r.id.clone(), k).is_some() {
                return Err(Error::Config(format!("duplicate rule id {}", r.id)));
            }
            let Some(target) = contexts.get(r.target) else {
                return Err(Error::Structural(format!("rule {} targets a missing context", r.id)));
            };
            if !target.policy.accepts(&r.head) {
                return Err(Error::Config(format!(
                    "rule {}: {} is not an operation of context {}",
                    r.id, r.head, target.name
                )));
            }
            for l in &r.body {
                match l.source {
                    LiteralSource::Context(c) => {
                        let ctx = contexts
                            .get(c)
                            .ok_or_else(|| Error::Structural(format!("rule {} reads a missing context", r.id)))?;
                        if !ctx.logic.vocabulary.contains(&l.atom) {
                            return Err(Error::Config(format!(
                                "rule {}: {} is not in the vocabulary of {}",
                                r.id, l.atom, ctx.name
                            )));
                        }
                    }
                    LiteralSource::Input(s) => {
                        let lang = inputs.get(s).ok_or_else(|| {
                            Error::Structural(format!("rule {} reads a missing input language", r.id))
                        })?;
                        if !lang.elements.contains(&l.atom) {
                            return Err(Error::Config(format!(
                                "rule {}: {} is not in input language {}",
                                r.id, l.atom, lang.name
                            )));
                        }
                    }
                }
            }
            by_target[r.target].push(k);
        }
        Ok(ReactiveMcs { contexts, inputs, rules, by_target, ids })
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn inputs(&self) -> &[InputLanguage] {
        &self.inputs
    }

    pub fn rules(&self) -> &[BridgeRule] {
        &self.rules
    }

    pub fn rules_of(&self, i: usize) -> impl Iterator<Item = &BridgeRule> {
        self.by_target[i].iter().map(move |&k| &self.rules[k])
    }

    pub fn rule_indices_of(&self, i: usize) -> &[usize] {
        &self.by_target[i]
    }

    pub fn rule_index(&self, id: &str) -> Option<usize> {
        self.ids.get(id).copied()
    }

    pub fn context_index(&self, name: &str) -> Option<usize> {
        self.contexts.iter().position(|c| &*c.name == name)
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|l| &*l.name == name)
    }

    pub fn empty_input(&self) -> Input {
        Input(vec![BTreeSet::new(); self.inputs.len()])
    }

    pub fn empty_state(&self) -> BeliefState {
        BeliefState::empty(self.contexts.len())
    }

    pub fn empty_config(&self) -> KbConfig {
        KbConfig(vec![KnowledgeBase::new(); self.contexts.len()])
    }

    /// `M[R]`: the system restricted to the rules not listed in `removed`.
    pub fn without_rules(&self, removed: &BTreeSet<usize>) -> ReactiveMcs {
        let rules: Vec<BridgeRule> =
            self.rules.iter().enumerate().filter(|(k, _)| !removed.contains(k)).map(|(_, r)| r.clone()).collect();
        ReactiveMcs::new(self.contexts.clone(), self.inputs.clone(), rules).expect("subsystem of a valid system")
    }

    pub fn with_rules(&self, rules: Vec<BridgeRule>) -> Result<ReactiveMcs> {
        ReactiveMcs::new(self.contexts.clone(), self.inputs.clone(), rules)
    }

    pub fn with_contexts(&self, contexts: Vec<Context>) -> Result<ReactiveMcs> {
        ReactiveMcs::new(contexts, self.inputs.clone(), self.rules.clone())
    }

    pub fn check_input(&self, input: &Input) -> Result<()> {
        if input.0.len() != self.inputs.len() {
            return Err(Error::Structural(format!(
                "input has {} components, system has {} input languages",
                input.0.len(),
                self.inputs.len()
            )));
        }
        for (s, l) in input.0.iter().zip(&self.inputs) {
            if let Some(bad) = s.iter().find(|a| !l.elements.contains(a)) {
                return Err(Error::Config(format!("{bad} is not in input language {}", l.name)));
            }
        }
        Ok(())
    }

    pub fn check_config(&self, config: &KbConfig) -> Result<()> {
        if config.0.len() != self.contexts.len() {
            return Err(Error::Structural(format!(
                "configuration has {} components, system has {} contexts",
                config.0.len(),
                self.contexts.len()
            )));
        }
        for (kb, c) in config.0.iter().zip(&self.contexts) {
            c.logic.admissible(kb).map_err(|m| Error::plugin(&c.name, m))?;
        }
        Ok(())
    }

    fn check_state(&self, state: &BeliefState) -> Result<()> {
        if state.0.len() != self.contexts.len() {
            return Err(Error::Structural("belief state arity mismatch".into()));
        }
        Ok(())
    }

    /// `app^now_i` and `app^next_i`.
    pub fn app_sets(&self, i: usize, input: &Input, state: &BeliefState) -> (BTreeSet<Atom>, BTreeSet<Atom>) {
        let mut now = BTreeSet::new();
        let mut next = BTreeSet::new();
        for r in self.rules_of(i) {
            if applicable(r, input, &|c, a| state.0[c].contains(a)) {
                match r.kind {
                    HeadKind::Now => now.insert(r.head.clone()),
                    HeadKind::Next => next.insert(r.head.clone()),
                };
            }
        }
        (now, next)
    }

    pub fn app_now(&self, i: usize, input: &Input, holds: &dyn Fn(usize, &Atom) -> bool) -> BTreeSet<Atom> {
        self.rules_of(i)
            .filter(|r| r.kind == HeadKind::Now && applicable(r, input, holds))
            .map(|r| r.head.clone())
            .collect()
    }

    pub fn is_equilibrium(&self, config: &KbConfig, input: &Input, state: &BeliefState) -> Result<bool> {
        self.check_state(state)?;
        for (i, c) in self.contexts.iter().enumerate() {
            let (now, _) = self.app_sets(i, input, state);
            let kb = c.manage(&now, &config.0[i])?;
            if !c.accept(&kb)?.contains(&state.0[i]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn update_config(&self, config: &KbConfig, input: &Input, state: &BeliefState) -> Result<KbConfig> {
        self.check_state(state)?;
        let mut out = Vec::with_capacity(self.contexts.len());
        for (i, c) in self.contexts.iter().enumerate() {
            let (_, next) = self.app_sets(i, input, state);
            out.push(c.manage(&next, &config.0[i])?);
        }
        Ok(KbConfig(out))
    }
}

/// Literal satisfaction.
pub fn satisfies(input: &Input, state: &BeliefState, lit: &BridgeLiteral) -> Result<bool> {
    let holds = match lit.source {
        LiteralSource::Context(c) => {
            state.0.get(c).ok_or_else(|| Error::Structural(format!("no context with index {c}")))?.contains(&lit.atom)
        }
        LiteralSource::Input(s) => input
            .0
            .get(s)
            .ok_or_else(|| Error::Structural(format!("no input language with index {s}")))?
            .contains(&lit.atom),
    };
    Ok(holds != lit.negated)
}

pub(crate) fn applicable(r: &BridgeRule, input: &Input, holds: &dyn Fn(usize, &Atom) -> bool) -> bool {
    r.body.iter().all(|l| {
        let v = match l.source {
            LiteralSource::Context(c) => holds(c, &l.atom),
            LiteralSource::Input(s) => input.0[s].contains(&l.atom),
        };
        v != l.negated
    })
}
