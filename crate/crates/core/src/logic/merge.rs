//! Priority-ordered consistent merging of incoming stream data.

use std::collections::BTreeSet;

use crate::term::{Atom, Term};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MergeMode {
    /// Start accumulation from the current kb instead of the empty set.
    pub from_kb: bool,
    /// Record `incons(j)` when source j is rejected.
    pub mark_incons: bool,
    /// Add a source's elements one by one, keeping a maximal consistent subset.
    pub maximal: bool,
}

/// Complement of a literal atom: `neg(x)` and `x`, or `neg_p` and `p`.
pub fn complement(a: &Atom) -> Atom {
    if &*a.functor == "neg" && a.args.len() == 1 {
        if let Some(inner) = Atom::from_term(a.args[0].clone()) {
            return inner;
        }
    }
    if a.args.is_empty() {
        if let Some(rest) = a.functor.strip_prefix("neg_") {
            return Atom::constant(rest);
        }
    }
    Atom::new("neg", vec![a.to_term()])
}

pub fn no_complementary_pair(set: &BTreeSet<Atom>) -> bool {
    set.iter().all(|a| !set.contains(&complement(a)))
}

pub fn incons_marker(source: &Term) -> Atom {
    Atom::new("incons", vec![source.clone()])
}

/// Folds sources in priority order (highest first) and returns `kb ∪ inp`.
pub fn consistent_merge(
    order: &[Term],
    incoming: &[(Atom, Term)],
    kb: &BTreeSet<Atom>,
    cons: &dyn Fn(&BTreeSet<Atom>) -> bool,
    mode: MergeMode,
) -> BTreeSet<Atom> {
    let mut sources: Vec<Term> = order.to_vec();
    let extra: BTreeSet<&Term> = incoming.iter().map(|(_, s)| s).filter(|s| !order.contains(s)).collect();
    sources.extend(extra.into_iter().cloned());

    let mut acc: BTreeSet<Atom> = if mode.from_kb { kb.clone() } else { BTreeSet::new() };
    for j in &sources {
        let elems: BTreeSet<&Atom> = incoming.iter().filter(|(_, s)| s == j).map(|(a, _)| a).collect();
        if elems.is_empty() {
            continue;
        }
        let mut rejected = false;
        if mode.maximal {
            for e in elems {
                let mut cand = acc.clone();
                cand.insert(e.clone());
                if cons(&cand) {
                    acc = cand;
                } else {
                    rejected = true;
                }
            }
        } else {
            let mut cand = acc.clone();
            cand.extend(elems.into_iter().cloned());
            if cons(&cand) {
                acc = cand;
            } else {
                rejected = true;
            }
        }
        if rejected && mode.mark_incons {
            acc.insert(incons_marker(j));
        }
    }
    let mut out = kb.clone();
    out.extend(acc);
    out
}
