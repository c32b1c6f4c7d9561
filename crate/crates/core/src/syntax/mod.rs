//! Text formats for systems and input streams.
//!
//! System files:
//!
//! ```text
//! % comment
//! input st { switch; tmp(T) : T in 0..60 }
//! context st storage {
//!   vocabulary { pw; tm(cold); tm(hot) }
//!   kb { }
//!   policy { setPower(on) => add pw, priority 1. setPower(off) => remove pw. transient tm(_). }
//! }
//! rules st {
//!   on: next(setPower(on)) <- st::switch, not st:pw.
//!   setTemp(cold) <- st::tmp(T), T <= 45.
//! }
//! ```
//!
//! Stream files hold a horizon line and sparse records `t language elements`:
//!
//! ```text
//! horizon 3
//! 1 st switch
//! 3 st switch
//! ```

mod lexer;
mod parser;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::logic::KnowledgeBase;
use crate::model::{HeadKind, Input, InputStream, KbConfig, LiteralSource, ReactiveMcs};
use crate::policy::{Effect, Keep};
use crate::term::{Atom, PTerm, Term};

pub use parser::{parse_system, parse_system_file, SystemFile};

struct Sym<'a>(&'a str);

impl std::fmt::Display for Sym<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        crate::term::fmt_symbol(self.0, f)
    }
}

/// Parses a single ground atom such as `tm(cold)`.
pub fn parse_atom(src: &str) -> Result<Atom> {
    let mut p = parser::Parser::new(src)?;
    let a = p.ground_atom()?;
    if !p.at_eof() {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("trailing input after {a}") });
    }
    Ok(a)
}

/// Parses an atom pattern such as `bp(_)` or `tm(T)`.
pub fn parse_pattern(src: &str) -> Result<PTerm> {
    let mut p = parser::Parser::new(src)?;
    let a = p.atom_pattern()?;
    if !p.at_eof() {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("trailing input after {a}") });
    }
    Ok(a)
}

/// Parses `{a, b}` or a comma separated list of ground atoms.
pub fn parse_atom_set(src: &str) -> Result<BTreeSet<Atom>> {
    let inner = src.trim().trim_start_matches('{').trim_end_matches('}');
    let mut p = parser::Parser::new(inner)?;
    Ok(p.atom_list()?.into_iter().collect())
}

fn line_error(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { col, msg, .. } => Error::Parse { line, col, msg },
        other => other,
    }
}

/// Parses a stream file against the input languages of `m`.
pub fn parse_stream(src: &str, m: &ReactiveMcs) -> Result<InputStream> {
    let mut horizon: Option<usize> = None;
    let mut records = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let text = raw.split('%').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        let mut words = text.split_whitespace();
        if words.next() == Some("horizon") {
            let v = words.next().unwrap_or("");
            if matches!(v, "inf" | "infinite" | "omega") {
                return Err(Error::Parse { line, col: 1, msg: "infinite input streams are not supported".into() });
            }
            let tau: usize = v.parse().ok().filter(|t| *t > 0).ok_or_else(|| Error::Parse {
                line,
                col: 1,
                msg: format!("bad horizon {v:?}"),
            })?;
            horizon = Some(tau);
            continue;
        }
        let mut p = parser::Parser::new(text).map_err(|e| line_error(line, e))?;
        let rec = p.stream_record().map_err(|e| line_error(line, e))?;
        records.push((line, rec));
    }
    let tau = horizon.ok_or(Error::Parse { line: 1, col: 1, msg: "missing horizon line".into() })?;
    let mut inputs = vec![m.empty_input(); tau];
    for (line, (t, lang, atoms)) in records {
        if t < 1 || t as usize > tau {
            return Err(Error::Parse { line, col: 1, msg: format!("instant {t} outside 1..{tau}") });
        }
        let s = m.input_index(&lang).ok_or_else(|| Error::Parse {
            line,
            col: 1,
            msg: format!("unresolved input language {lang}"),
        })?;
        for a in atoms {
            if !m.inputs()[s].elements.contains(&a) {
                return Err(Error::Parse { line, col: 1, msg: format!("{a} is not in input language {lang}") });
            }
            inputs[t as usize - 1].0[s].insert(a);
        }
    }
    InputStream::new(inputs)
}

fn set_block(items: &BTreeSet<Atom>) -> String {
    let parts: Vec<String> = items.iter().map(|a| a.to_string()).collect();
    format!("{{ {} }}", parts.join("; "))
}

/// Writes a system file that parses back to an equal system and configuration.
pub fn emit_system(m: &ReactiveMcs, config: &KbConfig) -> String {
    let mut out = String::new();
    for l in m.inputs() {
        let _ = writeln!(out, "input {} {}", Sym(&l.name), set_block(&l.elements));
    }
    for (i, c) in m.contexts().iter().enumerate() {
        let _ = writeln!(out, "context {} {} {{", Sym(&c.name), c.logic.kind.name());
        let _ = writeln!(out, "  vocabulary {}", set_block(&c.logic.vocabulary));
        let kb: &KnowledgeBase = &config.0[i];
        let _ = writeln!(out, "  kb {{");
        for f in &kb.formulas {
            let _ = writeln!(out, "    {f}");
        }
        let _ = writeln!(out, "  }}");
        let _ = writeln!(out, "  policy {{");
        for op in &c.policy.ops {
            let mut effects: Vec<String> = op
                .effects
                .iter()
                .map(|e| match e {
                    Effect::Add(p) => format!("add {p}"),
                    Effect::Remove(p) => format!("remove {p}"),
                    Effect::Clear => "clear".to_string(),
                    Effect::AddCons { elem, source } => format!("addcons {elem} from {source}"),
                })
                .collect();
            if op.priority != 0 {
                effects.push(format!("priority {}", op.priority));
            }
            let _ = writeln!(out, "    {} => {}.", op.pattern, effects.join(", "));
        }
        for t in &c.policy.transient {
            let _ = writeln!(out, "    transient {t}.");
        }
        for g in &c.policy.exclusive {
            let keep = if g.keep == Keep::Max { " keep max" } else { "" };
            let _ = writeln!(out, "    exclusive {}{keep}.", g.pattern);
        }
        if let Some(mg) = &c.policy.merge {
            let order: Vec<String> = mg.order.iter().map(Term::to_string).collect();
            let mut flags = String::new();
            if mg.mode.from_kb {
                flags.push_str(" from kb");
            }
            if mg.mode.mark_incons {
                flags.push_str(" mark");
            }
            if mg.mode.maximal {
                flags.push_str(" maximal");
            }
            let _ = writeln!(out, "    merge order [{}]{flags}.", order.join(","));
        }
        let _ = writeln!(out, "  }}");
        let _ = writeln!(out, "}}");
    }
    for (i, c) in m.contexts().iter().enumerate() {
        if m.rule_indices_of(i).is_empty() {
            continue;
        }
        let _ = writeln!(out, "rules {} {{", Sym(&c.name));
        for r in m.rules_of(i) {
            let head = match r.kind {
                HeadKind::Now => r.head.to_string(),
                HeadKind::Next => format!("next({})", r.head),
            };
            let body: Vec<String> = r
                .body
                .iter()
                .map(|l| {
                    let (name, sep) = match l.source {
                        LiteralSource::Context(k) => (&m.contexts()[k].name, ":"),
                        LiteralSource::Input(k) => (&m.inputs()[k].name, "::"),
                    };
                    let neg = if l.negated { "not " } else { "" };
                    format!("{neg}{}{sep}{}", Sym(name), l.atom)
                })
                .collect();
            if body.is_empty() {
                let _ = writeln!(out, "  {}: {head}.", Sym(&r.id));
            } else {
                let _ = writeln!(out, "  {}: {head} <- {}.", Sym(&r.id), body.join(", "));
            }
        }
        let _ = writeln!(out, "}}");
    }
    out
}

pub fn emit_stream(m: &ReactiveMcs, stream: &InputStream) -> String {
    let mut out = format!("horizon {}\n", stream.horizon());
    for (t, input) in stream.inputs().iter().enumerate() {
        for (s, set) in input.0.iter().enumerate() {
            if set.is_empty() {
                continue;
            }
            let parts: Vec<String> = set.iter().map(|a| a.to_string()).collect();
            let _ = writeln!(out, "{} {} {}", t + 1, Sym(&m.inputs()[s].name), parts.join(", "));
        }
    }
    out
}

/// Builds an input from `(language, atoms)` pairs.
pub fn input_of(m: &ReactiveMcs, parts: &[(&str, &[&str])]) -> Result<Input> {
    let mut input = m.empty_input();
    for (lang, atoms) in parts {
        let s = m.input_index(lang).ok_or_else(|| Error::Config(format!("unknown input language {lang}")))?;
        for a in *atoms {
            input.0[s].insert(parse_atom(a)?);
        }
    }
    m.check_input(&input)?;
    Ok(input)
}
