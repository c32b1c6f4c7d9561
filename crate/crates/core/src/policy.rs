//! Declarative management policies: the deterministic `mng` of a context.
//!
//! Application order for one operation set: `clear` wins outright; transient
//! facts are dropped; removals and additions are resolved per atom by
//! priority (ties go to the addition); additions displace other members of
//! their exclusive group; `keep max` groups are trimmed; `addcons` data is
//! merged last.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::logic::merge::{consistent_merge, no_complementary_pair, MergeMode};
use crate::logic::{Formula, KnowledgeBase};
use crate::term::{Atom, PTerm, Subst, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Effect {
    Add(PTerm),
    Remove(PTerm),
    Clear,
    AddCons { elem: PTerm, source: PTerm },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpSpec {
    pub pattern: PTerm,
    pub effects: Vec<Effect>,
    pub priority: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    /// New additions displace the other members.
    Latest,
    /// Only the greatest member survives.
    Max,
}

/// Atoms matching `pattern` and agreeing on its variables form one group;
/// wildcard positions vary within the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exclusive {
    pub pattern: PTerm,
    pub keep: Keep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeSpec {
    pub order: Vec<Term>,
    pub mode: MergeMode,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ManagementPolicy {
    pub ops: Vec<OpSpec>,
    pub transient: Vec<PTerm>,
    pub exclusive: Vec<Exclusive>,
    pub merge: Option<MergeSpec>,
}

fn group_key(pattern: &PTerm, a: &Atom) -> Option<Subst> {
    pattern.match_atom(a, &Subst::new())
}

fn op(name: &str, effect: fn(PTerm) -> Effect) -> OpSpec {
    let x = PTerm::var("X");
    OpSpec { pattern: PTerm::App(crate::term::sym(name), vec![x.clone()]), effects: vec![effect(x)], priority: 0 }
}

impl ManagementPolicy {
    /// `add(X)`, `rm(X)`, `del(X)` and `clear` over facts.
    pub fn generic() -> Self {
        ManagementPolicy {
            ops: vec![
                op("add", Effect::Add),
                op("rm", Effect::Remove),
                op("del", Effect::Remove),
                OpSpec { pattern: PTerm::Sym(crate::term::sym("clear")), effects: vec![Effect::Clear], priority: 0 },
            ],
            ..Default::default()
        }
    }

    fn resolve(&self, op: &Atom) -> Option<(&OpSpec, Subst)> {
        self.ops.iter().find_map(|spec| spec.pattern.match_atom(op, &Subst::new()).map(|s| (spec, s)))
    }

    /// Operation vocabulary membership.
    pub fn accepts(&self, op: &Atom) -> bool {
        self.resolve(op).is_some()
    }

    pub fn is_transient(&self, a: &Atom) -> bool {
        self.transient.iter().any(|p| p.matches_atom(a))
    }

    fn same_group(&self, x: &Atom, y: &Atom) -> bool {
        self.exclusive.iter().any(|g| match (group_key(&g.pattern, x), group_key(&g.pattern, y)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
    }

    /// Conservative test whether `op` can change membership of `b` in the result.
    pub fn touches(&self, op: &Atom, b: &Atom) -> bool {
        let Some((spec, s)) = self.resolve(op) else { return false };
        spec.effects.iter().any(|e| match e {
            Effect::Clear | Effect::AddCons { .. } => true,
            Effect::Add(p) => match p.ground_atom(&s) {
                Ok(Some(g)) => &g == b || self.same_group(&g, b),
                _ => false,
            },
            Effect::Remove(p) => p.substitute(&s).matches_atom(b),
        })
    }

    /// Atoms possibly affected by `op`, or `None` when it may affect anything.
    pub fn influence<'a>(&self, op: &Atom, vocab: &'a BTreeSet<Atom>) -> Option<Vec<&'a Atom>> {
        let (spec, _) = self.resolve(op)?;
        if spec.effects.iter().any(|e| matches!(e, Effect::Clear | Effect::AddCons { .. })) {
            return None;
        }
        Some(vocab.iter().filter(|b| self.touches(op, b)).collect())
    }

    /// Why a set of now-operations could remove kb content, if it could.
    pub fn removal_reason(&self, op: &Atom) -> Option<String> {
        let (spec, s) = self.resolve(op)?;
        for e in &spec.effects {
            match e {
                Effect::Clear => return Some(format!("{op} clears the kb")),
                Effect::Remove(_) => return Some(format!("{op} removes content")),
                Effect::Add(p) => {
                    if let Ok(Some(g)) = p.ground_atom(&s) {
                        if self.exclusive.iter().any(|x| x.pattern.matches_atom(&g)) {
                            return Some(format!("{op} displaces members of an exclusive group"));
                        }
                    }
                }
                Effect::AddCons { .. } => {}
            }
        }
        None
    }

    /// `mng(ops, kb)`.
    pub fn apply(&self, ops: &BTreeSet<Atom>, kb: &KnowledgeBase) -> Result<KnowledgeBase> {
        let mut adds: BTreeMap<Atom, i64> = BTreeMap::new();
        let mut removes: Vec<(PTerm, i64)> = Vec::new();
        let mut incoming: Vec<(Atom, Term)> = Vec::new();
        let mut clear = false;
        for op in ops {
            let (spec, s) = self.resolve(op).ok_or_else(|| Error::Config(format!("unknown operation {op}")))?;
            for e in &spec.effects {
                match e {
                    Effect::Clear => clear = true,
                    Effect::Add(p) => {
                        let a = p
                            .ground_atom(&s)?
                            .ok_or_else(|| Error::Config(format!("operation {op} yields a non-ground addition {p}")))?;
                        let pr = adds.entry(a).or_insert(spec.priority);
                        *pr = (*pr).max(spec.priority);
                    }
                    Effect::Remove(p) => removes.push((p.substitute(&s), spec.priority)),
                    Effect::AddCons { elem, source } => {
                        let (Some(a), Some(src)) = (elem.ground_atom(&s)?, source.ground(&s)?) else {
                            return Err(Error::Config(format!("operation {op} yields a non-ground merge element")));
                        };
                        incoming.push((a, src));
                    }
                }
            }
        }
        if clear {
            return Ok(KnowledgeBase::new());
        }

        let mut facts: BTreeSet<Atom> = kb.facts().filter(|a| !self.is_transient(a)).cloned().collect();
        adds.retain(|a, pr| !removes.iter().any(|(p, rp)| rp > pr && p.matches_atom(a)));
        facts.retain(|a| !removes.iter().any(|(p, _)| p.matches_atom(a)));
        for g in self.exclusive.iter().filter(|g| g.keep == Keep::Latest) {
            for a in adds.keys() {
                if let Some(key) = group_key(&g.pattern, a) {
                    facts.retain(|f| adds.contains_key(f) || group_key(&g.pattern, f).as_ref() != Some(&key));
                }
            }
        }
        facts.extend(adds.into_keys());
        for g in self.exclusive.iter().filter(|g| g.keep == Keep::Max) {
            let mut best: BTreeMap<Subst, Atom> = BTreeMap::new();
            for f in &facts {
                if let Some(key) = group_key(&g.pattern, f) {
                    let e = best.entry(key).or_insert_with(|| f.clone());
                    if f > e {
                        *e = f.clone();
                    }
                }
            }
            facts.retain(|f| match group_key(&g.pattern, f) {
                Some(key) => best.get(&key) == Some(f),
                None => true,
            });
        }
        if !incoming.is_empty() {
            let (order, mode) = match &self.merge {
                Some(m) => (m.order.clone(), m.mode),
                None => (Vec::new(), MergeMode::default()),
            };
            facts = consistent_merge(&order, &incoming, &facts, &no_complementary_pair, mode);
        }

        let mut out = KnowledgeBase::new();
        for f in kb.non_facts() {
            out.insert(f.clone());
        }
        for a in facts {
            out.insert(Formula::Fact(a));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::sym;

    fn c(s: &str) -> Atom {
        Atom::constant(s)
    }
    fn f1(f: &str, a: &str) -> Atom {
        Atom::new(f, vec![Term::sym(a)])
    }

    fn stove() -> ManagementPolicy {
        let t = PTerm::var("T");
        ManagementPolicy {
            ops: vec![
                OpSpec {
                    pattern: PTerm::App(sym("setPower"), vec![PTerm::Sym(sym("on"))]),
                    effects: vec![Effect::Add(PTerm::Sym(sym("pw")))],
                    priority: 1,
                },
                OpSpec {
                    pattern: PTerm::App(sym("setPower"), vec![PTerm::Sym(sym("off"))]),
                    effects: vec![Effect::Remove(PTerm::Sym(sym("pw")))],
                    priority: 0,
                },
                OpSpec {
                    pattern: PTerm::App(sym("setTemp"), vec![t.clone()]),
                    effects: vec![Effect::Add(PTerm::App(sym("tm"), vec![t]))],
                    priority: 0,
                },
            ],
            transient: vec![PTerm::App(sym("tm"), vec![PTerm::Wild])],
            ..Default::default()
        }
    }

    #[test]
    fn stove_management() {
        let p = stove();
        let ops: BTreeSet<Atom> = [f1("setPower", "on"), f1("setTemp", "hot")].into();
        let kb = KnowledgeBase::from_facts([f1("tm", "cold")]);
        assert_eq!(p.apply(&ops, &kb).unwrap(), KnowledgeBase::from_facts([c("pw"), f1("tm", "hot")]));
        let both: BTreeSet<Atom> = [f1("setPower", "on"), f1("setPower", "off")].into();
        assert!(p.apply(&both, &KnowledgeBase::new()).unwrap().has_fact(&c("pw")));
    }

    #[test]
    fn generic_add_after_remove() {
        let p = ManagementPolicy::generic();
        let ops: BTreeSet<Atom> = [f1("add", "x"), f1("rm", "x")].into();
        assert_eq!(p.apply(&ops, &KnowledgeBase::new()).unwrap(), KnowledgeBase::from_facts([c("x")]));
        let kb = KnowledgeBase::from_facts([c("y")]);
        assert_eq!(p.apply(&BTreeSet::new(), &kb).unwrap(), kb);
        let ops: BTreeSet<Atom> = [f1("add", "x"), c("clear")].into();
        assert!(p.apply(&ops, &kb).unwrap().is_empty());
    }

    #[test]
    fn unknown_operation_is_config_error() {
        let p = ManagementPolicy::generic();
        let ops: BTreeSet<Atom> = [c("bogus")].into();
        assert!(matches!(p.apply(&ops, &KnowledgeBase::new()), Err(Error::Config(_))));
    }

    #[test]
    fn exclusive_and_keep_max() {
        let mut p = ManagementPolicy::generic();
        p.exclusive.push(Exclusive { pattern: PTerm::App(sym("pos"), vec![PTerm::Wild]), keep: Keep::Latest });
        let kb = KnowledgeBase::from_facts([f1("pos", "kitchen")]);
        let ops: BTreeSet<Atom> = [Atom::new("add", vec![f1("pos", "bedroom").into_term()])].into();
        assert_eq!(p.apply(&ops, &kb).unwrap(), KnowledgeBase::from_facts([f1("pos", "bedroom")]));

        let mut q = ManagementPolicy::generic();
        q.exclusive.push(Exclusive { pattern: PTerm::App(sym("now"), vec![PTerm::Wild]), keep: Keep::Max });
        let now = |v| Atom::new("now", vec![Term::int(v)]);
        let kb = KnowledgeBase::from_facts([now(3)]);
        let ops: BTreeSet<Atom> = [Atom::new("add", vec![now(0).into_term()])].into();
        assert_eq!(q.apply(&ops, &kb).unwrap(), KnowledgeBase::from_facts([now(3)]));
    }
}
