//! Ground terms, atoms and parametrised term patterns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Symbol = Arc<str>;

pub fn sym(s: &str) -> Symbol {
    Arc::from(s)
}

/// Ground term. Compound terms are stored as atoms with at least one argument.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Int(i64),
    Sym(Symbol),
    App(Atom),
}

/// Ground atom. Used for beliefs, operations, input elements and kb facts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub functor: Symbol,
    pub args: Vec<Term>,
}

pub type Belief = Atom;

impl Atom {
    pub fn new(functor: &str, args: Vec<Term>) -> Atom {
        Atom { functor: sym(functor), args }
    }

    pub fn constant(name: &str) -> Atom {
        Atom { functor: sym(name), args: Vec::new() }
    }

    pub fn into_term(self) -> Term {
        if self.args.is_empty() {
            Term::Sym(self.functor)
        } else {
            Term::App(self)
        }
    }

    pub fn to_term(&self) -> Term {
        self.clone().into_term()
    }

    pub fn from_term(t: Term) -> Option<Atom> {
        match t {
            Term::Int(_) => None,
            Term::Sym(s) => Some(Atom { functor: s, args: Vec::new() }),
            Term::App(a) => Some(a),
        }
    }
}

impl Term {
    pub fn int(v: i64) -> Term {
        Term::Int(v)
    }
    pub fn sym(s: &str) -> Term {
        Term::Sym(sym(s))
    }
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(v) => Some(*v),
            _ => None,
        }
    }
}

pub(crate) fn is_plain_ident(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    cs.all(|c| c.is_ascii_alphanumeric() || c == '_') && !matches!(s, "not" | "next" | "in" | "abs")
}

pub(crate) fn fmt_symbol(s: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_plain_ident(s) {
        write!(f, "{s}")
    } else {
        write!(f, "'")?;
        for c in s.chars() {
            if c == '\'' || c == '\\' {
                write!(f, "\\")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "'")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(v) => write!(f, "{v}"),
            Term::Sym(s) => fmt_symbol(s, f),
            Term::App(a) => write!(f, "{a}"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_symbol(&self.functor, f)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Formats a set of atoms as `{a,b}`.
pub fn fmt_set<'a, I: IntoIterator<Item = &'a Atom>>(items: I) -> String {
    let parts: Vec<String> = items.into_iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub type Subst = BTreeMap<Symbol, Term>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Term pattern with variables, wildcards and integer arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PTerm {
    Int(i64),
    Sym(Symbol),
    Var(Symbol),
    Wild,
    App(Symbol, Vec<PTerm>),
    Arith(ArithOp, Box<PTerm>, Box<PTerm>),
    Abs(Box<PTerm>),
}

impl PTerm {
    pub fn var(name: &str) -> PTerm {
        PTerm::Var(sym(name))
    }

    pub fn from_term(t: &Term) -> PTerm {
        match t {
            Term::Int(v) => PTerm::Int(*v),
            Term::Sym(s) => PTerm::Sym(s.clone()),
            Term::App(a) => PTerm::from_atom(a),
        }
    }

    pub fn from_atom(a: &Atom) -> PTerm {
        if a.args.is_empty() {
            PTerm::Sym(a.functor.clone())
        } else {
            PTerm::App(a.functor.clone(), a.args.iter().map(PTerm::from_term).collect())
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            PTerm::Var(v) => {
                out.insert(v.clone());
            }
            PTerm::App(_, args) => args.iter().for_each(|a| a.vars(out)),
            PTerm::Arith(_, a, b) => {
                a.vars(out);
                b.vars(out);
            }
            PTerm::Abs(a) => a.vars(out),
            _ => {}
        }
    }

    pub fn var_set(&self) -> BTreeSet<Symbol> {
        let mut s = BTreeSet::new();
        self.vars(&mut s);
        s
    }

    pub fn is_ground(&self) -> bool {
        match self {
            PTerm::Var(_) | PTerm::Wild => false,
            PTerm::App(_, args) => args.iter().all(|a| a.is_ground()),
            PTerm::Arith(_, a, b) => a.is_ground() && b.is_ground(),
            PTerm::Abs(a) => a.is_ground(),
            _ => true,
        }
    }

    pub fn has_arith(&self) -> bool {
        match self {
            PTerm::Arith(..) | PTerm::Abs(_) => true,
            PTerm::App(_, args) => args.iter().any(|a| a.has_arith()),
            _ => false,
        }
    }

    pub fn has_wild(&self) -> bool {
        match self {
            PTerm::Wild => true,
            PTerm::App(_, args) => args.iter().any(|a| a.has_wild()),
            PTerm::Arith(_, a, b) => a.has_wild() || b.has_wild(),
            PTerm::Abs(a) => a.has_wild(),
            _ => false,
        }
    }

    /// Functor and arity when the pattern denotes an atom.
    pub fn signature(&self) -> Option<(&Symbol, usize)> {
        match self {
            PTerm::Sym(s) => Some((s, 0)),
            PTerm::App(f, args) => Some((f, args.len())),
            _ => None,
        }
    }

    /// Replaces bound variables, leaving unbound ones and wildcards in place.
    pub fn substitute(&self, s: &Subst) -> PTerm {
        match self {
            PTerm::Var(v) => s.get(v).map(PTerm::from_term).unwrap_or_else(|| self.clone()),
            PTerm::App(f, args) => PTerm::App(f.clone(), args.iter().map(|a| a.substitute(s)).collect()),
            PTerm::Arith(op, a, b) => PTerm::Arith(*op, Box::new(a.substitute(s)), Box::new(b.substitute(s))),
            PTerm::Abs(a) => PTerm::Abs(Box::new(a.substitute(s))),
            other => other.clone(),
        }
    }

    /// Substitutes and evaluates. `Ok(None)` means unbound variable, wildcard
    /// or ill-typed arithmetic.
    pub fn ground(&self, s: &Subst) -> Result<Option<Term>> {
        Ok(match self {
            PTerm::Int(v) => Some(Term::Int(*v)),
            PTerm::Sym(x) => Some(Term::Sym(x.clone())),
            PTerm::Var(v) => s.get(v).cloned(),
            PTerm::Wild => None,
            PTerm::App(f, args) => {
                let mut out = Vec::with_capacity(args.len());
                for a in args {
                    match a.ground(s)? {
                        Some(t) => out.push(t),
                        None => return Ok(None),
                    }
                }
                Some(Term::App(Atom { functor: f.clone(), args: out }))
            }
            PTerm::Arith(op, a, b) => {
                let (Some(Term::Int(x)), Some(Term::Int(y))) = (a.ground(s)?, b.ground(s)?) else {
                    return Ok(None);
                };
                let r = match op {
                    ArithOp::Add => x.checked_add(y),
                    ArithOp::Sub => x.checked_sub(y),
                    ArithOp::Mul => x.checked_mul(y),
                };
                Some(Term::Int(r.ok_or_else(|| Error::Overflow(format!("{self}")))?))
            }
            PTerm::Abs(a) => match a.ground(s)? {
                Some(Term::Int(x)) => {
                    Some(Term::Int(x.checked_abs().ok_or_else(|| Error::Overflow(format!("{self}")))?))
                }
                _ => None,
            },
        })
    }

    pub fn ground_atom(&self, s: &Subst) -> Result<Option<Atom>> {
        Ok(self.ground(s)?.and_then(Atom::from_term))
    }

    /// Matches against a ground term, extending `s`. Arithmetic sub-patterns
    /// must already be fully bound.
    pub fn match_term(&self, t: &Term, s: &mut Subst) -> bool {
        match (self, t) {
            (PTerm::Wild, _) => true,
            (PTerm::Var(v), _) => match s.get(v) {
                Some(bound) => bound == t,
                None => {
                    s.insert(v.clone(), t.clone());
                    true
                }
            },
            (PTerm::Int(a), Term::Int(b)) => a == b,
            (PTerm::Sym(a), Term::Sym(b)) => a == b,
            (PTerm::App(f, args), Term::App(at)) => {
                f == &at.functor
                    && args.len() == at.args.len()
                    && args.iter().zip(&at.args).all(|(p, x)| p.match_term(x, s))
            }
            (PTerm::Arith(..) | PTerm::Abs(_), _) => matches!(self.ground(s), Ok(Some(ref g)) if g == t),
            _ => false,
        }
    }

    /// Matches against an atom; returns the extended substitution on success.
    pub fn match_atom(&self, a: &Atom, s: &Subst) -> Option<Subst> {
        let mut out = s.clone();
        let ok = match self {
            PTerm::Sym(f) => a.args.is_empty() && f == &a.functor,
            PTerm::App(f, args) => {
                f == &a.functor
                    && args.len() == a.args.len()
                    && args.iter().zip(&a.args).all(|(p, x)| p.match_term(x, &mut out))
            }
            PTerm::Var(_) | PTerm::Wild => self.match_term(&a.to_term(), &mut out),
            _ => false,
        };
        ok.then_some(out)
    }

    pub fn matches_atom(&self, a: &Atom) -> bool {
        self.match_atom(a, &Subst::new()).is_some()
    }
}

fn fmt_arith(p: &PTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        PTerm::Arith(..) => write!(f, "({p})"),
        _ => write!(f, "{p}"),
    }
}

impl fmt::Display for PTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PTerm::Int(v) => write!(f, "{v}"),
            PTerm::Sym(s) => fmt_symbol(s, f),
            PTerm::Var(v) => write!(f, "{v}"),
            PTerm::Wild => write!(f, "_"),
            PTerm::App(fun, args) => {
                fmt_symbol(fun, f)?;
                write!(f, "(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            PTerm::Arith(op, a, b) => {
                fmt_arith(a, f)?;
                let o = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                    ArithOp::Mul => "*",
                };
                write!(f, "{o}")?;
                fmt_arith(b, f)
            }
            PTerm::Abs(a) => write!(f, "abs({a})"),
        }
    }
}
