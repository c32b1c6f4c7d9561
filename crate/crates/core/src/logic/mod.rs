//! Context logics: storage, Horn, propositional and ground answer-set programs.

mod asp;
mod horn;
pub mod merge;
mod prop;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::term::{Atom, PTerm};

pub use prop::Prop;

pub type BeliefSet = BTreeSet<Atom>;

/// A rule `head :- pos, not neg`. Horn rules may contain variables; ASP rules are ground.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: PTerm,
    pub pos: Vec<PTerm>,
    pub neg: Vec<PTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Fact(Atom),
    Rule(Rule),
    Prop(Prop),
}

impl Formula {
    /// Builds a rule, collapsing ground body-free rules to facts.
    pub fn rule(head: PTerm, pos: Vec<PTerm>, neg: Vec<PTerm>) -> Formula {
        if pos.is_empty() && neg.is_empty() && head.is_ground() && !head.has_arith() {
            if let Ok(Some(a)) = head.ground_atom(&Default::default()) {
                return Formula::Fact(a);
            }
        }
        Formula::Rule(Rule { head, pos, neg })
    }

    pub fn as_fact(&self) -> Option<&Atom> {
        match self {
            Formula::Fact(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Fact(a) => write!(f, "{a}."),
            Formula::Rule(r) => {
                write!(f, "{} :- ", r.head)?;
                let mut first = true;
                for p in &r.pos {
                    if !first {
                        write!(f, ", ")?;
                    }
                    first = false;
                    write!(f, "{p}")?;
                }
                for n in &r.neg {
                    if !first {
                        write!(f, ", ")?;
                    }
                    first = false;
                    write!(f, "not {n}")?;
                }
                write!(f, ".")
            }
            Formula::Prop(p) => write!(f, "{p}."),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KnowledgeBase {
    pub formulas: BTreeSet<Formula>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_facts<I: IntoIterator<Item = Atom>>(facts: I) -> Self {
        KnowledgeBase { formulas: facts.into_iter().map(Formula::Fact).collect() }
    }

    pub fn facts(&self) -> impl Iterator<Item = &Atom> {
        self.formulas.iter().filter_map(Formula::as_fact)
    }

    pub fn fact_set(&self) -> BTreeSet<Atom> {
        self.facts().cloned().collect()
    }

    pub fn has_fact(&self, a: &Atom) -> bool {
        self.formulas.contains(&Formula::Fact(a.clone()))
    }

    pub fn insert(&mut self, f: Formula) {
        self.formulas.insert(f);
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    /// Non-fact formulas (rules, propositional formulas).
    pub fn non_facts(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter().filter(|f| f.as_fact().is_none())
    }

    pub fn is_subset(&self, other: &KnowledgeBase) -> bool {
        self.formulas.is_subset(&other.formulas)
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .formulas
            .iter()
            .map(|x| match x {
                Formula::Fact(a) => a.to_string(),
                other => {
                    let s = other.to_string();
                    s.trim_end_matches('.').to_string()
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogicKind {
    Storage,
    Horn,
    Propositional,
    Asp,
}

impl LogicKind {
    pub fn name(self) -> &'static str {
        match self {
            LogicKind::Storage => "storage",
            LogicKind::Horn => "horn",
            LogicKind::Propositional => "propositional",
            LogicKind::Asp => "asp",
        }
    }

    pub fn from_name(s: &str) -> Option<LogicKind> {
        Some(match s {
            "storage" => LogicKind::Storage,
            "horn" => LogicKind::Horn,
            "propositional" | "prop" => LogicKind::Propositional,
            "asp" => LogicKind::Asp,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub deterministic: bool,
    pub totally_coherent: bool,
    pub monotonic: bool,
    pub reducible: bool,
    pub has_least_element: bool,
    /// Reduction is the identity map.
    pub identity_reduction: bool,
}

/// A logic together with the finite belief vocabulary of its context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Logic {
    pub kind: LogicKind,
    pub vocabulary: BTreeSet<Atom>,
}

impl Logic {
    pub fn new(kind: LogicKind, vocabulary: BTreeSet<Atom>) -> Self {
        Logic { kind, vocabulary }
    }

    pub fn capabilities(&self) -> Capabilities {
        let closure = !matches!(self.kind, LogicKind::Asp);
        Capabilities {
            deterministic: closure,
            totally_coherent: closure,
            monotonic: closure,
            reducible: true,
            has_least_element: true,
            identity_reduction: closure,
        }
    }

    /// Checks kb membership in the admissible knowledge bases of this logic.
    pub fn admissible(&self, kb: &KnowledgeBase) -> std::result::Result<(), String> {
        match self.kind {
            LogicKind::Storage => {
                for f in &kb.formulas {
                    match f {
                        Formula::Fact(a) if self.vocabulary.contains(a) => {}
                        Formula::Fact(a) => return Err(format!("{a} is outside the vocabulary")),
                        other => return Err(format!("storage kb holds only facts, found {other}")),
                    }
                }
                Ok(())
            }
            LogicKind::Horn => horn::admissible(kb),
            LogicKind::Propositional => prop::admissible(kb),
            LogicKind::Asp => asp::admissible(kb, &self.vocabulary),
        }
    }

    /// Acceptable belief sets, projected onto the vocabulary, sorted.
    pub fn acceptable(&self, kb: &KnowledgeBase) -> std::result::Result<Vec<BeliefSet>, String> {
        self.admissible(kb)?;
        let mut out = match self.kind {
            LogicKind::Storage => vec![kb.fact_set()],
            LogicKind::Horn => vec![horn::closure(kb)?],
            LogicKind::Propositional => vec![prop::entailed(kb, &self.vocabulary)?],
            LogicKind::Asp => asp::answer_sets(kb)?,
        };
        for s in out.iter_mut() {
            s.retain(|a| self.vocabulary.contains(a));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Reduction w.r.t. a candidate belief set: identity except GL reduct for ASP.
    pub fn reduce(&self, kb: &KnowledgeBase, candidate: &BeliefSet) -> Result<KnowledgeBase> {
        if !self.capabilities().reducible {
            return Err(Error::Capability(format!("{} logic is not reducible", self.kind.name())));
        }
        Ok(match self.kind {
            LogicKind::Asp => asp::gl_reduct(kb, candidate),
            _ => kb.clone(),
        })
    }

    /// True when `reduce(kb, S) = kb` for every S.
    pub fn is_reduced(&self, kb: &KnowledgeBase) -> bool {
        match self.kind {
            LogicKind::Asp => kb.formulas.iter().all(|f| !matches!(f, Formula::Rule(r) if !r.neg.is_empty())),
            _ => true,
        }
    }

    pub fn least_belief_set(&self) -> Result<BeliefSet> {
        if !self.capabilities().has_least_element {
            return Err(Error::Capability(format!("{} logic has no least belief set", self.kind.name())));
        }
        Ok(BeliefSet::new())
    }
}
