use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Formula, KnowledgeBase};
use crate::term::Atom;

const MAX_VARS: usize = 20;

/// Ground propositional formula over atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prop {
    Atom(Atom),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn atoms<'a>(&'a self, out: &mut BTreeSet<&'a Atom>) {
        match self {
            Prop::Atom(a) => {
                out.insert(a);
            }
            Prop::Not(p) => p.atoms(out),
            Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    fn eval(&self, m: &BTreeMap<&Atom, bool>) -> bool {
        match self {
            Prop::Atom(a) => m.get(a).copied().unwrap_or(false),
            Prop::Not(p) => !p.eval(m),
            Prop::And(a, b) => a.eval(m) && b.eval(m),
            Prop::Or(a, b) => a.eval(m) || b.eval(m),
            Prop::Implies(a, b) => !a.eval(m) || b.eval(m),
        }
    }

    fn conj_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) -> bool {
        match self {
            Prop::Atom(a) => {
                out.push(a);
                true
            }
            Prop::And(a, b) => a.conj_atoms(out) && b.conj_atoms(out),
            _ => false,
        }
    }

    /// `(body, head)` when the formula is a definite Horn clause.
    fn as_horn(&self) -> Option<(Vec<&Atom>, &Atom)> {
        match self {
            Prop::Atom(a) => Some((vec![], a)),
            Prop::Implies(b, h) => {
                let Prop::Atom(h) = h.as_ref() else { return None };
                let mut body = Vec::new();
                b.conj_atoms(&mut body).then_some((body, h))
            }
            _ => None,
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Prop::Implies(..) => 0,
            Prop::Or(..) => 1,
            Prop::And(..) => 2,
            _ => 3,
        }
    }
}

fn fmt_sub(p: &Prop, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.prec() < min {
        write!(f, "({p})")
    } else {
        write!(f, "{p}")
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Atom(a) => write!(f, "{a}"),
            Prop::Not(p) => {
                write!(f, "~")?;
                fmt_sub(p, 3, f)
            }
            Prop::And(a, b) => {
                fmt_sub(a, 2, f)?;
                write!(f, " & ")?;
                fmt_sub(b, 3, f)
            }
            Prop::Or(a, b) => {
                fmt_sub(a, 1, f)?;
                write!(f, " | ")?;
                fmt_sub(b, 2, f)
            }
            Prop::Implies(a, b) => {
                fmt_sub(a, 1, f)?;
                write!(f, " -> ")?;
                fmt_sub(b, 0, f)
            }
        }
    }
}

pub(super) fn admissible(kb: &KnowledgeBase) -> Result<(), String> {
    for f in &kb.formulas {
        if let Formula::Rule(_) = f {
            return Err(format!("propositional kb cannot hold rule {f}"));
        }
    }
    Ok(())
}

fn as_prop(f: &Formula) -> Prop {
    match f {
        Formula::Fact(a) => Prop::Atom(a.clone()),
        Formula::Prop(p) => p.clone(),
        Formula::Rule(_) => unreachable!("rejected by admissible"),
    }
}

/// Vocabulary atoms entailed by kb. An inconsistent kb entails everything.
pub(super) fn entailed(kb: &KnowledgeBase, vocab: &BTreeSet<Atom>) -> Result<BTreeSet<Atom>, String> {
    let props: Vec<Prop> = kb.formulas.iter().map(as_prop).collect();
    if let Some(clauses) = props.iter().map(Prop::as_horn).collect::<Option<Vec<_>>>() {
        let mut m: BTreeSet<&Atom> = BTreeSet::new();
        loop {
            let before = m.len();
            for (body, head) in &clauses {
                if body.iter().all(|a| m.contains(a)) {
                    m.insert(head);
                }
            }
            if m.len() == before {
                break;
            }
        }
        return Ok(vocab.iter().filter(|a| m.contains(a)).cloned().collect());
    }
    let mut atoms = BTreeSet::new();
    props.iter().for_each(|p| p.atoms(&mut atoms));
    let atoms: Vec<&Atom> = atoms.into_iter().collect();
    if atoms.len() > MAX_VARS {
        return Err(format!("{} variables exceed the model-checking limit of {MAX_VARS}", atoms.len()));
    }
    let mut common: Option<BTreeSet<&Atom>> = None;
    for mask in 0u32..(1u32 << atoms.len()) {
        let m: BTreeMap<&Atom, bool> = atoms.iter().enumerate().map(|(i, a)| (*a, mask >> i & 1 == 1)).collect();
        if props.iter().all(|p| p.eval(&m)) {
            let true_atoms: BTreeSet<&Atom> = m.iter().filter(|(_, v)| **v).map(|(a, _)| *a).collect();
            common = Some(match common {
                None => true_atoms,
                Some(c) => c.intersection(&true_atoms).copied().collect(),
            });
        }
    }
    Ok(match common {
        None => vocab.clone(),
        Some(c) => vocab.iter().filter(|a| c.contains(a)).cloned().collect(),
    })
}
