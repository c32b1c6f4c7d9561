//! Rule schemata and their instantiation into ground bridge rules.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::LogicKind;
use crate::model::{BridgeLiteral, BridgeRule, Context, HeadKind, InputLanguage, LiteralSource, ReactiveMcs};
use crate::policy::Effect;
use crate::term::{Atom, PTerm, Subst, Symbol, Term};

/// Where a body literal reads from. Integers are 1-based positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceRef {
    Named(Symbol),
    Index(i64),
    Param(Symbol),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralTemplate {
    pub source: SourceRef,
    /// `s::b` when true, `c:b` otherwise.
    pub input: bool,
    pub atom: PTerm,
    pub negated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Eq => "=",
            RelOp::Ne => "!=",
            RelOp::Ge => ">=",
            RelOp::Gt => ">",
        }
    }
}

/// Comparison between two equally long tuples of integer expressions,
/// ordered lexicographically. Single expressions are 1-tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directive {
    pub op: RelOp,
    pub lhs: Vec<PTerm>,
    pub rhs: Vec<PTerm>,
}

impl Directive {
    pub fn new(op: RelOp, lhs: PTerm, rhs: PTerm) -> Self {
        Directive { op, lhs: vec![lhs], rhs: vec![rhs] }
    }

    fn vars(&self) -> BTreeSet<Symbol> {
        let mut s = BTreeSet::new();
        self.lhs.iter().chain(&self.rhs).for_each(|p| p.vars(&mut s));
        s
    }

    /// Ill-typed or unbound sides evaluate to false.
    pub fn holds(&self, s: &Subst) -> Result<bool> {
        if self.lhs.len() != self.rhs.len() {
            return Ok(false);
        }
        let mut l = Vec::new();
        let mut r = Vec::new();
        for (a, b) in self.lhs.iter().zip(&self.rhs) {
            match (a.ground(s)?, b.ground(s)?) {
                (Some(x), Some(y)) => {
                    l.push(x);
                    r.push(y);
                }
                _ => return Ok(false),
            }
        }
        if matches!(self.op, RelOp::Eq | RelOp::Ne) {
            return Ok((l == r) == (self.op == RelOp::Eq));
        }
        let mut ord = Ordering::Equal;
        for (x, y) in l.iter().zip(&r) {
            let (Some(x), Some(y)) = (x.as_int(), y.as_int()) else { return Ok(false) };
            ord = x.cmp(&y);
            if ord != Ordering::Equal {
                break;
            }
        }
        Ok(match self.op {
            RelOp::Lt => ord == Ordering::Less,
            RelOp::Le => ord != Ordering::Greater,
            RelOp::Ge => ord != Ordering::Less,
            RelOp::Gt => ord == Ordering::Greater,
            _ => unreachable!(),
        })
    }
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[PTerm]| -> String {
            let parts: Vec<String> = v.iter().map(|p| p.to_string()).collect();
            if v.len() == 1 {
                parts[0].clone()
            } else {
                format!("({})", parts.join(","))
            }
        };
        write!(f, "{} {} {}", side(&self.lhs), self.op.symbol(), side(&self.rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Range(i64, i64),
    Set(Vec<Term>),
}

impl Domain {
    pub fn values(&self) -> Vec<Term> {
        match self {
            Domain::Range(a, b) => (*a..=*b).map(Term::Int).collect(),
            Domain::Set(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    pub label: Symbol,
    pub target: usize,
    pub kind: HeadKind,
    pub head: PTerm,
    pub body: Vec<LiteralTemplate>,
    pub directives: Vec<Directive>,
    pub domains: BTreeMap<Symbol, Domain>,
}

impl RuleSchema {
    pub fn params(&self) -> BTreeSet<Symbol> {
        let mut s = self.head.var_set();
        for l in &self.body {
            l.atom.vars(&mut s);
            if let SourceRef::Param(p) = &l.source {
                s.insert(p.clone());
            }
        }
        for d in &self.directives {
            s.extend(d.vars());
        }
        s.extend(self.domains.keys().cloned());
        s
    }
}

fn resolve_source(
    src: &SourceRef,
    input: bool,
    s: &Subst,
    contexts: &[Context],
    inputs: &[InputLanguage],
) -> Option<LiteralSource> {
    let by_term = |t: &Term| -> Option<usize> {
        match t {
            Term::Int(k) if *k >= 1 => {
                let k = (*k - 1) as usize;
                let n = if input { inputs.len() } else { contexts.len() };
                (k < n).then_some(k)
            }
            Term::Sym(name) => {
                if input {
                    inputs.iter().position(|l| &l.name == name)
                } else {
                    contexts.iter().position(|c| &c.name == name)
                }
            }
            _ => None,
        }
    };
    let idx = match src {
        SourceRef::Named(n) => by_term(&Term::Sym(n.clone()))?,
        SourceRef::Index(k) => by_term(&Term::Int(*k))?,
        SourceRef::Param(p) => by_term(s.get(p)?)?,
    };
    Some(if input { LiteralSource::Input(idx) } else { LiteralSource::Context(idx) })
}

fn elements<'a>(src: LiteralSource, contexts: &'a [Context], inputs: &'a [InputLanguage]) -> &'a BTreeSet<Atom> {
    match src {
        LiteralSource::Context(c) => &contexts[c].logic.vocabulary,
        LiteralSource::Input(l) => &inputs[l].elements,
    }
}

fn source_choices(src: &SourceRef, input: bool, contexts: &[Context], inputs: &[InputLanguage]) -> Vec<Term> {
    match src {
        SourceRef::Param(_) if input => inputs.iter().map(|l| Term::Sym(l.name.clone())).collect(),
        SourceRef::Param(_) => contexts.iter().map(|c| Term::Sym(c.name.clone())).collect(),
        _ => vec![],
    }
}

struct Instantiator<'a> {
    schema: &'a RuleSchema,
    contexts: &'a [Context],
    inputs: &'a [InputLanguage],
    /// Positive literals first.
    order: Vec<&'a LiteralTemplate>,
    out: Vec<Subst>,
}

impl Instantiator<'_> {
    fn directives_ok(&self, s: &Subst, checked: &mut [bool]) -> Result<bool> {
        for (k, d) in self.schema.directives.iter().enumerate() {
            if !checked[k] && d.vars().iter().all(|v| s.contains_key(v)) {
                if !d.holds(s)? {
                    return Ok(false);
                }
                checked[k] = true;
            }
        }
        Ok(true)
    }

    fn join(&mut self, step: usize, s: Subst, checked: Vec<bool>) -> Result<()> {
        let mut checked = checked;
        if !self.directives_ok(&s, &mut checked)? {
            return Ok(());
        }
        let Some(lit) = self.order.get(step).copied() else {
            self.out.push(s);
            return Ok(());
        };
        // source parameter without a value: branch over all sources
        if let SourceRef::Param(p) = &lit.source {
            if !s.contains_key(p) {
                for v in source_choices(&lit.source, lit.input, self.contexts, self.inputs) {
                    let mut s2 = s.clone();
                    s2.insert(p.clone(), v);
                    self.join(step, s2, checked.clone())?;
                }
                return Ok(());
            }
        }
        let Some(src) = resolve_source(&lit.source, lit.input, &s, self.contexts, self.inputs) else {
            return Ok(());
        };
        let elems = elements(src, self.contexts, self.inputs);
        let bound_atom =
            if lit.atom.var_set().iter().all(|v| s.contains_key(v)) { lit.atom.ground_atom(&s)? } else { None };
        if let Some(a) = bound_atom {
            if elems.contains(&a) {
                self.join(step + 1, s, checked)?;
            }
            return Ok(());
        }
        for e in elems {
            if let Some(s2) = lit.atom.match_atom(e, &s) {
                self.join(step + 1, s2, checked.clone())?;
            }
        }
        Ok(())
    }
}

fn head_well_formed(ctx: &Context, op: &Atom) -> bool {
    let policy = &ctx.policy;
    if !policy.accepts(op) {
        return false;
    }
    if ctx.logic.kind != LogicKind::Storage && ctx.logic.kind != LogicKind::Asp {
        return true;
    }
    // additions must stay inside the vocabulary
    let Some(spec) = policy.ops.iter().find(|o| o.pattern.matches_atom(op)) else { return false };
    let s = spec.pattern.match_atom(op, &Subst::new()).unwrap_or_default();
    spec.effects.iter().all(|e| match e {
        Effect::Add(p) | Effect::AddCons { elem: p, .. } => {
            matches!(p.ground_atom(&s), Ok(Some(a)) if ctx.logic.vocabulary.contains(&a))
        }
        _ => true,
    })
}

fn instance_id(label: &str, s: &Subst) -> Symbol {
    if s.is_empty() {
        return crate::term::sym(label);
    }
    let parts: Vec<String> = s.iter().map(|(k, v)| format!("{k}={v}")).collect();
    crate::term::sym(&format!("{label}[{}]", parts.join(",")))
}

/// Builds the ground rule for a full substitution, or `None` if ill-formed.
pub(crate) fn build_instance(
    schema: &RuleSchema,
    s: &Subst,
    contexts: &[Context],
    inputs: &[InputLanguage],
) -> Result<Option<BridgeRule>> {
    for d in &schema.directives {
        if !d.holds(s)? {
            return Ok(None);
        }
    }
    let Some(head) = schema.head.ground_atom(s)? else { return Ok(None) };
    if !head_well_formed(&contexts[schema.target], &head) {
        return Ok(None);
    }
    let mut body = Vec::with_capacity(schema.body.len());
    for l in &schema.body {
        let Some(src) = resolve_source(&l.source, l.input, s, contexts, inputs) else { return Ok(None) };
        let Some(atom) = l.atom.ground_atom(s)? else { return Ok(None) };
        if !elements(src, contexts, inputs).contains(&atom) {
            return Ok(None);
        }
        body.push(BridgeLiteral { source: src, atom, negated: l.negated });
    }
    Ok(Some(BridgeRule { id: instance_id(&schema.label, s), target: schema.target, kind: schema.kind, head, body }))
}

/// All well-formed ground instances, ordered by substitution.
pub fn instantiate_parts(
    schema: &RuleSchema,
    contexts: &[Context],
    inputs: &[InputLanguage],
) -> Result<Vec<BridgeRule>> {
    if schema.target >= contexts.len() {
        return Err(Error::Structural(format!("schema {} targets a missing context", schema.label)));
    }
    let params = schema.params();
    let mut in_positive = BTreeSet::new();
    for l in schema.body.iter().filter(|l| !l.negated) {
        l.atom.vars(&mut in_positive);
        if let SourceRef::Param(p) = &l.source {
            in_positive.insert(p.clone());
        }
    }
    let mut in_negative = BTreeSet::new();
    for l in schema.body.iter().filter(|l| l.negated) {
        l.atom.vars(&mut in_negative);
        if let SourceRef::Param(p) = &l.source {
            in_negative.insert(p.clone());
        }
    }
    for p in &params {
        if !schema.domains.contains_key(p) && !in_positive.contains(p) && !in_negative.contains(p) {
            return Err(Error::Config(format!("schema {}: parameter {p} is unbounded", schema.label)));
        }
    }

    // explicit domains first, then positive literals, then negative ones
    let mut seeds = vec![Subst::new()];
    for (p, d) in &schema.domains {
        let vals = d.values();
        seeds = seeds
            .into_iter()
            .flat_map(|s| {
                vals.iter().map(move |v| {
                    let mut s2 = s.clone();
                    s2.insert(p.clone(), v.clone());
                    s2
                })
            })
            .collect();
    }
    let mut order: Vec<&LiteralTemplate> = schema.body.iter().filter(|l| !l.negated).collect();
    order.extend(schema.body.iter().filter(|l| l.negated));
    let mut inst = Instantiator { schema, contexts, inputs, order, out: Vec::new() };
    for s in seeds {
        inst.join(0, s, vec![false; schema.directives.len()])?;
    }
    let mut substs = inst.out;
    substs.sort();
    substs.dedup();
    let mut rules = Vec::new();
    for s in &substs {
        if let Some(r) = build_instance(schema, s, contexts, inputs)? {
            rules.push(r);
        }
    }
    Ok(rules)
}

pub fn instantiate(schema: &RuleSchema, m: &ReactiveMcs) -> Result<Vec<BridgeRule>> {
    instantiate_parts(schema, m.contexts(), m.inputs())
}
