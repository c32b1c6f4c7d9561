use std::collections::{BTreeSet, HashMap};

use super::{Formula, KnowledgeBase, Rule};
use crate::term::{Atom, PTerm, Subst, Symbol};

pub(super) fn admissible(kb: &KnowledgeBase) -> Result<(), String> {
    for f in &kb.formulas {
        match f {
            Formula::Fact(_) => {}
            Formula::Rule(r) => {
                if !r.neg.is_empty() {
                    return Err(format!("horn rule with negation: {f}"));
                }
                if r.head.has_arith() || r.pos.iter().any(|p| p.has_arith() || p.has_wild()) || r.head.has_wild() {
                    return Err(format!("horn rule with arithmetic or wildcard: {f}"));
                }
                let mut body_vars = BTreeSet::new();
                r.pos.iter().for_each(|p| p.vars(&mut body_vars));
                if !r.head.var_set().is_subset(&body_vars) {
                    return Err(format!("unsafe horn rule: {f}"));
                }
            }
            Formula::Prop(_) => return Err(format!("horn kb cannot hold {f}")),
        }
    }
    Ok(())
}

type Index = HashMap<(Symbol, usize), Vec<Atom>>;

fn join(body: &[PTerm], idx: &Index, s: Subst, out: &mut Vec<Subst>) {
    let Some((first, rest)) = body.split_first() else {
        out.push(s);
        return;
    };
    let Some((f, n)) = first.signature() else { return };
    if let Some(cands) = idx.get(&(f.clone(), n)) {
        for c in cands {
            if let Some(s2) = first.match_atom(c, &s) {
                join(rest, idx, s2, out);
            }
        }
    }
}

/// Least model of facts and (possibly non-ground) definite rules.
pub(super) fn closure(kb: &KnowledgeBase) -> Result<BTreeSet<Atom>, String> {
    let mut model: BTreeSet<Atom> = kb.fact_set();
    let rules: Vec<&Rule> = kb
        .formulas
        .iter()
        .filter_map(|f| match f {
            Formula::Rule(r) => Some(r),
            _ => None,
        })
        .collect();
    loop {
        let mut idx: Index = HashMap::new();
        for a in &model {
            idx.entry((a.functor.clone(), a.args.len())).or_default().push(a.clone());
        }
        let mut fresh = Vec::new();
        for r in &rules {
            let mut substs = Vec::new();
            join(&r.pos, &idx, Subst::new(), &mut substs);
            for s in substs {
                if let Ok(Some(h)) = r.head.ground_atom(&s) {
                    if !model.contains(&h) {
                        fresh.push(h);
                    }
                }
            }
        }
        if fresh.is_empty() {
            return Ok(model);
        }
        model.extend(fresh);
    }
}
