use std::collections::BTreeSet;

use super::{Formula, KnowledgeBase};
use crate::term::{Atom, Subst};

const MAX_GUESS: usize = 24;

/// Ground normal rule with resolved atoms.
struct GRule {
    head: Atom,
    pos: Vec<Atom>,
    neg: Vec<Atom>,
}

fn ground_rules(kb: &KnowledgeBase) -> Result<Vec<GRule>, String> {
    let s = Subst::new();
    let mut out = Vec::new();
    for f in &kb.formulas {
        match f {
            Formula::Fact(a) => out.push(GRule { head: a.clone(), pos: vec![], neg: vec![] }),
            Formula::Rule(r) => {
                let g = |p: &crate::term::PTerm| -> Result<Atom, String> {
                    if !p.is_ground() || p.has_arith() {
                        return Err(format!("asp programs must be ground: {f}"));
                    }
                    p.ground_atom(&s).ok().flatten().ok_or_else(|| format!("bad atom in {f}"))
                };
                out.push(GRule {
                    head: g(&r.head)?,
                    pos: r.pos.iter().map(g).collect::<Result<_, _>>()?,
                    neg: r.neg.iter().map(g).collect::<Result<_, _>>()?,
                });
            }
            Formula::Prop(_) => return Err(format!("asp kb cannot hold {f}")),
        }
    }
    Ok(out)
}

pub(super) fn admissible(kb: &KnowledgeBase, vocab: &BTreeSet<Atom>) -> Result<(), String> {
    for r in ground_rules(kb)? {
        for a in std::iter::once(&r.head).chain(&r.pos).chain(&r.neg) {
            if !vocab.contains(a) {
                return Err(format!("atom {a} is outside the vocabulary"));
            }
        }
    }
    Ok(())
}

fn least_model<'a>(rules: impl Iterator<Item = &'a GRule> + Clone) -> BTreeSet<Atom> {
    let mut m = BTreeSet::new();
    loop {
        let mut changed = false;
        for r in rules.clone() {
            if !m.contains(&r.head) && r.pos.iter().all(|a| m.contains(a)) {
                m.insert(r.head.clone());
                changed = true;
            }
        }
        if !changed {
            return m;
        }
    }
}

/// Answer sets by guessing the truth of negated atoms and checking stability.
pub(super) fn answer_sets(kb: &KnowledgeBase) -> Result<Vec<BTreeSet<Atom>>, String> {
    let rules = ground_rules(kb)?;
    let heads: BTreeSet<&Atom> = rules.iter().map(|r| &r.head).collect();
    let guess_atoms: Vec<Atom> = rules
        .iter()
        .flat_map(|r| r.neg.iter())
        .filter(|a| heads.contains(a))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = Vec::new();
    let n = guess_atoms.len();
    if n > MAX_GUESS {
        return Err(format!("{n} negated atoms exceed the enumeration limit of {MAX_GUESS}"));
    }
    for mask in 0u64..(1u64 << n) {
        let guess: BTreeSet<&Atom> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &guess_atoms[i]).collect();
        let kept = rules.iter().filter(|r| r.neg.iter().all(|a| !guess.contains(a)));
        let m = least_model(kept);
        let consistent = guess_atoms.iter().all(|a| m.contains(a) == guess.contains(a));
        if consistent {
            out.push(m);
        }
    }
    Ok(out)
}

pub(super) fn gl_reduct(kb: &KnowledgeBase, s: &BTreeSet<Atom>) -> KnowledgeBase {
    let mut out = KnowledgeBase::new();
    let empty = Subst::new();
    for f in &kb.formulas {
        match f {
            Formula::Rule(r) => {
                let blocked =
                    r.neg.iter().any(|n| n.ground_atom(&empty).ok().flatten().is_some_and(|a| s.contains(&a)));
                if !blocked {
                    out.insert(Formula::rule(r.head.clone(), r.pos.clone(), vec![]));
                }
            }
            other => out.insert(other.clone()),
        }
    }
    out
}
