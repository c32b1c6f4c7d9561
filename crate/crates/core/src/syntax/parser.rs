use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{lex, Tok, Token};
use crate::error::{Error, Result};
use crate::logic::merge::MergeMode;
use crate::logic::{Formula, KnowledgeBase, Logic, LogicKind, Prop};
use crate::model::{Context, HeadKind, InputLanguage, KbConfig, ReactiveMcs};
use crate::policy::{Effect, Exclusive, Keep, ManagementPolicy, MergeSpec, OpSpec};
use crate::schema::{instantiate_parts, Directive, Domain, LiteralTemplate, RelOp, RuleSchema, SourceRef};
use crate::term::{sym, ArithOp, Atom, PTerm, Subst, Symbol, Term};

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type Generator = (PTerm, Vec<(Symbol, Domain)>, Vec<Directive>);

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        let t = &self.toks[pos.min(self.toks.len() - 1)];
        Error::Parse { line: t.line, col: t.col, msg: msg.into() }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        self.error_at(self.pos, msg)
    }

    fn is_p(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::P(q) if *q == p)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_p(&mut self, p: &str) -> bool {
        if self.is_p(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_p(&mut self, p: &str) -> Result<()> {
        if self.eat_p(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`, found {}", describe(self.peek()))))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected `{kw}`, found {}", describe(self.peek()))))
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn name(&mut self) -> Result<Symbol> {
        match self.bump() {
            Tok::Ident(s) | Tok::Quoted(s) => Ok(sym(&s)),
            t => {
                self.pos -= 1;
                Err(self.error(format!("expected a name, found {}", describe(&t))))
            }
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat_p("-");
        match self.bump() {
            Tok::Int(v) => Ok(if neg { -v } else { v }),
            t => {
                self.pos -= 1;
                Err(self.error(format!("expected an integer, found {}", describe(&t))))
            }
        }
    }

    // ---- terms ----

    pub(crate) fn expr(&mut self) -> Result<PTerm> {
        let mut left = self.product()?;
        loop {
            let op = if self.is_p("+") {
                ArithOp::Add
            } else if self.is_p("-") {
                ArithOp::Sub
            } else {
                return Ok(left);
            };
            self.bump();
            let right = self.product()?;
            left = PTerm::Arith(op, Box::new(left), Box::new(right));
        }
    }

    fn product(&mut self) -> Result<PTerm> {
        let mut left = self.factor()?;
        while self.eat_p("*") {
            let right = self.factor()?;
            left = PTerm::Arith(ArithOp::Mul, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<PTerm> {
        let start = self.pos;
        match self.bump() {
            Tok::P("-") => match self.peek().clone() {
                Tok::Int(v) => {
                    self.bump();
                    Ok(PTerm::Int(-v))
                }
                _ => {
                    let inner = self.factor()?;
                    Ok(PTerm::Arith(ArithOp::Sub, Box::new(PTerm::Int(0)), Box::new(inner)))
                }
            },
            Tok::Int(v) => Ok(PTerm::Int(v)),
            Tok::Var(v) if v == "_" => Ok(PTerm::Wild),
            Tok::Var(v) => Ok(PTerm::Var(sym(&v))),
            Tok::Quoted(s) => Ok(PTerm::Sym(sym(&s))),
            Tok::Ident(s) if s == "abs" && self.is_p("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_p(")")?;
                Ok(PTerm::Abs(Box::new(e)))
            }
            Tok::Ident(s) => {
                if self.eat_p("(") {
                    let mut args = vec![self.expr()?];
                    while self.eat_p(",") {
                        args.push(self.expr()?);
                    }
                    self.expect_p(")")?;
                    Ok(PTerm::App(sym(&s), args))
                } else {
                    Ok(PTerm::Sym(sym(&s)))
                }
            }
            Tok::P("(") => {
                let e = self.expr()?;
                self.expect_p(")")?;
                Ok(e)
            }
            t => Err(self.error_at(start, format!("expected a term, found {}", describe(&t)))),
        }
    }

    /// An atom pattern: a symbol or compound term, optionally quoted.
    pub(crate) fn atom_pattern(&mut self) -> Result<PTerm> {
        let start = self.pos;
        let p = self.expr()?;
        if p.signature().is_none() {
            return Err(self.error_at(start, format!("expected an atom, found {p}")));
        }
        Ok(p)
    }

    /// An atom pattern or a bare parameter standing for a whole atom.
    fn atom_or_param(&mut self) -> Result<PTerm> {
        if let Tok::Var(v) = self.peek().clone() {
            if v != "_" && !matches!(self.peek_at(1), Tok::P("(")) {
                self.bump();
                return Ok(PTerm::Var(sym(&v)));
            }
        }
        self.atom_pattern()
    }

    pub(crate) fn ground_atom(&mut self) -> Result<Atom> {
        let start = self.pos;
        let p = self.atom_pattern()?;
        match p.ground_atom(&Subst::new())? {
            Some(a) if p.is_ground() => Ok(a),
            _ => Err(self.error_at(start, format!("expected a ground atom, found {p}"))),
        }
    }

    fn ground_term(&mut self) -> Result<Term> {
        let start = self.pos;
        let p = self.expr()?;
        match p.ground(&Subst::new())? {
            Some(t) if p.is_ground() => Ok(t),
            _ => Err(self.error_at(start, format!("expected a ground term, found {p}"))),
        }
    }

    fn domain(&mut self) -> Result<Domain> {
        if self.eat_p("{") {
            let mut v = Vec::new();
            if !self.is_p("}") {
                v.push(self.ground_term()?);
                while self.eat_p(",") {
                    v.push(self.ground_term()?);
                }
            }
            self.expect_p("}")?;
            return Ok(Domain::Set(v));
        }
        let a = self.int()?;
        self.expect_p("..")?;
        let b = self.int()?;
        Ok(Domain::Range(a, b))
    }

    fn relop(&mut self) -> Option<RelOp> {
        let op = match self.peek() {
            Tok::P("<") => RelOp::Lt,
            Tok::P("<=") => RelOp::Le,
            Tok::P("=") => RelOp::Eq,
            Tok::P("!=") => RelOp::Ne,
            Tok::P(">=") => RelOp::Ge,
            Tok::P(">") => RelOp::Gt,
            _ => return None,
        };
        self.bump();
        Some(op)
    }

    fn side(&mut self) -> Result<Vec<PTerm>> {
        if self.is_p("(") {
            let save = self.pos;
            self.bump();
            let first = self.expr()?;
            if self.eat_p(",") {
                let mut v = vec![first, self.expr()?];
                while self.eat_p(",") {
                    v.push(self.expr()?);
                }
                self.expect_p(")")?;
                return Ok(v);
            }
            self.pos = save;
        }
        Ok(vec![self.expr()?])
    }

    /// `a < b <= c` becomes one directive per adjacent pair.
    fn comparison(&mut self) -> Result<Vec<Directive>> {
        let mut out = Vec::new();
        let mut left = self.side()?;
        let Some(mut op) = self.relop() else {
            return Err(self.error(format!("expected a comparison operator, found {}", describe(self.peek()))));
        };
        loop {
            let right = self.side()?;
            out.push(Directive { op, lhs: left, rhs: right.clone() });
            left = right;
            match self.relop() {
                Some(o) => op = o,
                None => return Ok(out),
            }
        }
    }

    /// `pattern [: V in dom, directive, ...]`
    fn generator(&mut self) -> Result<Generator> {
        let pat = self.atom_pattern()?;
        let mut doms = Vec::new();
        let mut dirs = Vec::new();
        if self.eat_p(":") {
            loop {
                if matches!(self.peek(), Tok::Var(_)) && matches!(self.peek_at(1), Tok::Ident(s) if s == "in") {
                    let Tok::Var(v) = self.bump() else { unreachable!() };
                    self.bump();
                    doms.push((sym(&v), self.domain()?));
                } else {
                    dirs.extend(self.comparison()?);
                }
                if !self.eat_p(",") {
                    break;
                }
            }
        }
        Ok((pat, doms, dirs))
    }

    fn expand(&self, start: usize, g: &Generator) -> Result<Vec<Atom>> {
        let (pat, doms, dirs) = g;
        let mut substs = vec![Subst::new()];
        for (v, d) in doms {
            let vals = d.values();
            substs = substs
                .into_iter()
                .flat_map(|s| {
                    vals.iter().map(move |x| {
                        let mut s2 = s.clone();
                        s2.insert(v.clone(), x.clone());
                        s2
                    })
                })
                .collect();
        }
        let unbound: Vec<_> = pat.var_set().into_iter().filter(|v| !doms.iter().any(|(d, _)| d == v)).collect();
        if !unbound.is_empty() {
            return Err(self.error_at(start, format!("parameter {} has no domain", unbound[0])));
        }
        let mut out = Vec::new();
        'outer: for s in substs {
            for d in dirs {
                if !d.holds(&s)? {
                    continue 'outer;
                }
            }
            if let Some(a) = pat.ground_atom(&s)? {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// `{ item; item; ... }` of possibly parametrised atoms.
    fn atom_block(&mut self) -> Result<BTreeSet<Atom>> {
        self.expect_p("{")?;
        let mut out = BTreeSet::new();
        while !self.is_p("}") {
            let start = self.pos;
            let g = self.generator()?;
            out.extend(self.expand(start, &g)?);
            if !self.eat_p(";") && !self.is_p("}") {
                return Err(self.error(format!("expected `;` or `}}`, found {}", describe(self.peek()))));
            }
        }
        self.expect_p("}")?;
        Ok(out)
    }

    // ---- knowledge bases ----

    fn prop(&mut self) -> Result<Prop> {
        let left = self.prop_or()?;
        if self.eat_p("->") {
            let right = self.prop()?;
            return Ok(Prop::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn prop_or(&mut self) -> Result<Prop> {
        let mut left = self.prop_and()?;
        while self.eat_p("|") {
            let right = self.prop_and()?;
            left = Prop::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn prop_and(&mut self) -> Result<Prop> {
        let mut left = self.prop_unary()?;
        while self.eat_p("&") {
            let right = self.prop_unary()?;
            left = Prop::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn prop_unary(&mut self) -> Result<Prop> {
        if self.eat_p("~") {
            return Ok(Prop::Not(Box::new(self.prop_unary()?)));
        }
        if self.eat_p("(") {
            let p = self.prop()?;
            self.expect_p(")")?;
            return Ok(p);
        }
        Ok(Prop::Atom(self.ground_atom()?))
    }

    fn formula(&mut self, kind: LogicKind) -> Result<Formula> {
        if kind == LogicKind::Propositional {
            let p = self.prop()?;
            self.expect_p(".")?;
            return Ok(match p {
                Prop::Atom(a) => Formula::Fact(a),
                other => Formula::Prop(other),
            });
        }
        let head = self.atom_pattern()?;
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        if self.eat_p(":-") {
            loop {
                if self.is_kw("not") {
                    self.bump();
                    neg.push(self.atom_pattern()?);
                } else {
                    pos.push(self.atom_pattern()?);
                }
                if !self.eat_p(",") {
                    break;
                }
            }
        }
        self.expect_p(".")?;
        Ok(Formula::rule(head, pos, neg))
    }

    // ---- policies ----

    fn policy(&mut self, policy: &mut ManagementPolicy) -> Result<()> {
        self.expect_p("{")?;
        while !self.is_p("}") {
            let kw_stmt =
                matches!(self.peek(), Tok::Ident(_)) && !matches!(self.peek_at(1), Tok::P("=>") | Tok::P("("));
            if kw_stmt && self.is_kw("generic") {
                self.bump();
                policy.ops.extend(ManagementPolicy::generic().ops);
            } else if kw_stmt && self.is_kw("transient") {
                self.bump();
                let p = self.atom_pattern()?;
                policy.transient.push(p);
            } else if kw_stmt && self.is_kw("exclusive") {
                self.bump();
                let p = self.atom_pattern()?;
                let mut keep = Keep::Latest;
                if self.is_kw("keep") {
                    self.bump();
                    self.expect_kw("max")?;
                    keep = Keep::Max;
                }
                policy.exclusive.push(Exclusive { pattern: p, keep });
            } else if kw_stmt && self.is_kw("merge") {
                self.bump();
                self.expect_kw("order")?;
                self.expect_p("[")?;
                let mut order = Vec::new();
                if !self.is_p("]") {
                    order.push(self.ground_term()?);
                    while self.eat_p(",") {
                        order.push(self.ground_term()?);
                    }
                }
                self.expect_p("]")?;
                let mut mode = MergeMode::default();
                loop {
                    if self.is_kw("from") {
                        self.bump();
                        self.expect_kw("kb")?;
                        mode.from_kb = true;
                    } else if self.is_kw("mark") {
                        self.bump();
                        mode.mark_incons = true;
                    } else if self.is_kw("maximal") {
                        self.bump();
                        mode.maximal = true;
                    } else {
                        break;
                    }
                }
                policy.merge = Some(MergeSpec { order, mode });
            } else {
                let pattern = self.atom_pattern()?;
                self.expect_p("=>")?;
                let mut spec = OpSpec { pattern, effects: Vec::new(), priority: 0 };
                loop {
                    let start = self.pos;
                    match self.bump() {
                        Tok::Ident(k) if k == "add" => spec.effects.push(Effect::Add(self.atom_or_param()?)),
                        Tok::Ident(k) if k == "remove" => spec.effects.push(Effect::Remove(self.atom_or_param()?)),
                        Tok::Ident(k) if k == "clear" => spec.effects.push(Effect::Clear),
                        Tok::Ident(k) if k == "addcons" => {
                            let elem = self.atom_or_param()?;
                            self.expect_kw("from")?;
                            let source = self.expr()?;
                            spec.effects.push(Effect::AddCons { elem, source });
                        }
                        Tok::Ident(k) if k == "priority" => spec.priority = self.int()?,
                        t => return Err(self.error_at(start, format!("expected an effect, found {}", describe(&t)))),
                    }
                    if !self.eat_p(",") {
                        break;
                    }
                }
                policy.ops.push(spec);
            }
            self.expect_p(".")?;
        }
        self.expect_p("}")?;
        Ok(())
    }

    // ---- bridge rules ----

    fn is_literal_start(&self, k: usize) -> bool {
        matches!(self.peek_at(k), Tok::Ident(_) | Tok::Int(_) | Tok::Var(_) | Tok::Quoted(_))
            && matches!(self.peek_at(k + 1), Tok::P(":") | Tok::P("::"))
    }

    fn literal(&mut self, negated: bool, names: &Names) -> Result<LiteralTemplate> {
        let start = self.pos;
        let src_tok = self.bump();
        let input = matches!(self.bump(), Tok::P("::"));
        let source = match src_tok {
            Tok::Ident(s) | Tok::Quoted(s) => {
                let known = if input { names.inputs.contains(&*s) } else { names.contexts.contains(&*s) };
                if !known {
                    let what = if input { "input language" } else { "context" };
                    return Err(self.error_at(start, format!("unresolved {what} {s}")));
                }
                SourceRef::Named(sym(&s))
            }
            Tok::Int(k) => {
                let n = if input { names.inputs.len() } else { names.contexts.len() };
                if k < 1 || k as usize > n {
                    return Err(self.error_at(start, format!("source index {k} out of range")));
                }
                SourceRef::Index(k)
            }
            Tok::Var(v) => SourceRef::Param(sym(&v)),
            _ => unreachable!(),
        };
        let atom = self.atom_or_param()?;
        Ok(LiteralTemplate { source, input, atom, negated })
    }

    fn bridge_rule(
        &mut self,
        target: usize,
        target_name: &str,
        counter: &mut usize,
        names: &Names,
    ) -> Result<RuleSchema> {
        *counter += 1;
        let mut label = sym(&format!("{target_name}.{counter}"));
        if matches!(self.peek(), Tok::Ident(_) | Tok::Quoted(_)) && matches!(self.peek_at(1), Tok::P(":")) {
            label = self.name()?;
            self.bump();
        }
        let kind =
            if self.is_kw("next") && matches!(self.peek_at(1), Tok::P("(")) { HeadKind::Next } else { HeadKind::Now };
        let head = if kind == HeadKind::Next {
            self.bump();
            self.bump();
            let h = self.atom_pattern()?;
            self.expect_p(")")?;
            h
        } else {
            self.atom_pattern()?
        };
        let mut body = Vec::new();
        let mut directives = Vec::new();
        let mut domains = BTreeMap::new();
        if self.eat_p("<-") {
            loop {
                if self.is_kw("not") && self.is_literal_start(1) {
                    self.bump();
                    body.push(self.literal(true, names)?);
                } else if self.is_literal_start(0) {
                    body.push(self.literal(false, names)?);
                } else if matches!(self.peek(), Tok::Var(_)) && matches!(self.peek_at(1), Tok::Ident(s) if s == "in") {
                    let Tok::Var(v) = self.bump() else { unreachable!() };
                    self.bump();
                    domains.insert(sym(&v), self.domain()?);
                } else {
                    directives.extend(self.comparison()?);
                }
                if !self.eat_p(",") {
                    break;
                }
            }
        }
        self.expect_p(".")?;
        Ok(RuleSchema { label, target, kind, head, body, directives, domains })
    }

    // ---- stream lines ----

    /// Comma separated ground atoms up to the end of input.
    pub(crate) fn atom_list(&mut self) -> Result<Vec<Atom>> {
        let mut atoms = Vec::new();
        if !self.at_eof() {
            atoms.push(self.ground_atom()?);
            while self.eat_p(",") {
                atoms.push(self.ground_atom()?);
            }
        }
        if !self.at_eof() {
            return Err(self.error(format!("unexpected {}", describe(self.peek()))));
        }
        Ok(atoms)
    }

    pub(crate) fn stream_record(&mut self) -> Result<(i64, Symbol, Vec<Atom>)> {
        let t = self.int()?;
        let lang = self.name()?;
        Ok((t, lang, self.atom_list()?))
    }
}

struct Names {
    contexts: BTreeSet<String>,
    inputs: BTreeSet<String>,
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
        Tok::Quoted(s) => format!("'{s}'"),
        Tok::Int(v) => format!("`{v}`"),
        Tok::P(p) => format!("`{p}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parsed system file before rule instantiation.
pub struct SystemFile {
    pub contexts: Vec<Context>,
    pub inputs: Vec<InputLanguage>,
    pub schemas: Vec<RuleSchema>,
    /// Line and column where each schema starts.
    pub positions: Vec<(usize, usize)>,
    pub config: KbConfig,
}

pub fn parse_system_file(src: &str) -> Result<SystemFile> {
    let mut p = Parser::new(src)?;
    let mut contexts: Vec<Context> = Vec::new();
    let mut kbs: Vec<KnowledgeBase> = Vec::new();
    let mut inputs: Vec<InputLanguage> = Vec::new();
    let mut pending: Vec<(usize, Symbol, usize)> = Vec::new();
    while !p.at_eof() {
        let start = p.pos;
        if p.is_kw("input") {
            p.bump();
            let name = p.name()?;
            if inputs.iter().any(|l| l.name == name) {
                return Err(p.error_at(start, format!("duplicate input language {name}")));
            }
            let elements = p.atom_block()?;
            inputs.push(InputLanguage { name, elements });
        } else if p.is_kw("context") {
            p.bump();
            let name = p.name()?;
            if contexts.iter().any(|c| c.name == name) {
                return Err(p.error_at(start, format!("duplicate context {name}")));
            }
            let kpos = p.pos;
            let kind_name = p.name()?;
            let kind = LogicKind::from_name(&kind_name)
                .ok_or_else(|| p.error_at(kpos, format!("unknown logic {kind_name}")))?;
            p.expect_p("{")?;
            let mut vocabulary = BTreeSet::new();
            let mut kb = KnowledgeBase::new();
            let mut policy = ManagementPolicy::default();
            while !p.is_p("}") {
                if p.is_kw("vocabulary") {
                    p.bump();
                    vocabulary.extend(p.atom_block()?);
                } else if p.is_kw("kb") {
                    p.bump();
                    p.expect_p("{")?;
                    while !p.is_p("}") {
                        kb.insert(p.formula(kind)?);
                    }
                    p.expect_p("}")?;
                } else if p.is_kw("policy") {
                    p.bump();
                    p.policy(&mut policy)?;
                } else {
                    return Err(p.error(format!("expected a context section, found {}", describe(p.peek()))));
                }
            }
            p.expect_p("}")?;
            let ctx = Context { name: name.clone(), logic: Logic::new(kind, vocabulary), policy };
            ctx.logic.admissible(&kb).map_err(|m| p.error_at(start, format!("initial kb of {name}: {m}")))?;
            contexts.push(ctx);
            kbs.push(kb);
        } else if p.is_kw("rules") {
            p.bump();
            let npos = p.pos;
            let name = p.name()?;
            let target = contexts
                .iter()
                .position(|c| c.name == name)
                .ok_or_else(|| p.error_at(npos, format!("unresolved context {name}")))?;
            pending.push((target, name, p.pos));
            // skip the block for now; bodies may name later contexts
            p.expect_p("{")?;
            let mut depth = 1;
            while depth > 0 {
                match p.bump() {
                    Tok::P("{") => depth += 1,
                    Tok::P("}") => depth -= 1,
                    Tok::Eof => return Err(p.error("unterminated rules block")),
                    _ => {}
                }
            }
        } else {
            return Err(p.error(format!("expected `input`, `context` or `rules`, found {}", describe(p.peek()))));
        }
    }
    if contexts.is_empty() {
        return Err(p.error("a system needs at least one context"));
    }
    let names = Names {
        contexts: contexts.iter().map(|c| c.name.to_string()).collect(),
        inputs: inputs.iter().map(|l| l.name.to_string()).collect(),
    };
    let mut schemas = Vec::new();
    let mut positions = Vec::new();
    let mut counters = vec![0usize; contexts.len()];
    for (target, name, pos) in pending {
        p.pos = pos;
        p.expect_p("{")?;
        while !p.is_p("}") {
            let t = &p.toks[p.pos.min(p.toks.len() - 1)];
            positions.push((t.line, t.col));
            schemas.push(p.bridge_rule(target, &name, &mut counters[target], &names)?);
        }
    }
    Ok(SystemFile { contexts, inputs, schemas, positions, config: KbConfig(kbs) })
}

/// Parses and instantiates a system file.
pub fn parse_system(src: &str) -> Result<(ReactiveMcs, KbConfig)> {
    let f = parse_system_file(src)?;
    let mut rules = Vec::new();
    for (s, &(line, col)) in f.schemas.iter().zip(&f.positions) {
        let inst = instantiate_parts(s, &f.contexts, &f.inputs).map_err(|e| match e {
            Error::Config(msg) | Error::Structural(msg) => Error::Parse { line, col, msg },
            other => other,
        })?;
        rules.extend(inst);
    }
    let m = ReactiveMcs::new(f.contexts, f.inputs, rules)?;
    Ok((m, f.config))
}
