//! Per-instant trace tables: configuration, input, applicable operations,
//! equilibrium and next operations, rendered as TSV or JSON.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::logic::Formula;
use crate::model::{BeliefState, Input, InputStream, KbConfig, ReactiveMcs};
use crate::repair::Repair;
use crate::stream::{EquilibriaStream, PartialStream};
use crate::term::{Atom, PTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub t: usize,
    pub config: KbConfig,
    pub input: Input,
    pub app_now: Vec<BTreeSet<Atom>>,
    /// `None` at undefined instants of a partial stream.
    pub state: Option<BeliefState>,
    pub app_next: Vec<BTreeSet<Atom>>,
    /// Ids of bridge rules removed at this instant by a repair.
    pub removed: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTable {
    pub contexts: Vec<String>,
    pub inputs: Vec<String>,
    pub rows: Vec<TraceRow>,
}

/// Which entries to leave out when rendering.
#[derive(Clone, Debug, Default)]
pub struct TraceFilter {
    /// Drop formulas present in every configuration of a context and beliefs
    /// present in every one of its belief sets.
    pub omit_fixed: bool,
    /// `(context, pattern)`: matching beliefs are dropped from equilibria.
    pub hide: Vec<(usize, PTerm)>,
}

#[derive(Serialize)]
struct RowView {
    t: usize,
    config: Vec<Vec<String>>,
    input: Vec<Vec<String>>,
    app_now: Vec<Vec<String>>,
    equilibrium: Option<Vec<Vec<String>>>,
    app_next: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    removed: Option<Vec<String>>,
}

fn sorted<I: IntoIterator<Item = String>>(items: I) -> Vec<String> {
    let mut v: Vec<String> = items.into_iter().collect();
    v.sort();
    v
}

fn atoms(set: &BTreeSet<Atom>) -> Vec<String> {
    sorted(set.iter().map(Atom::to_string))
}

fn tuple(cells: &[Vec<String>]) -> String {
    let parts: Vec<String> = cells.iter().map(|c| format!("{{{}}}", c.join(","))).collect();
    format!("<{}>", parts.join(","))
}

impl TraceTable {
    fn empty(m: &ReactiveMcs) -> Self {
        TraceTable {
            contexts: m.contexts().iter().map(|c| c.name.to_string()).collect(),
            inputs: m.inputs().iter().map(|l| l.name.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, m: &ReactiveMcs, t: usize, config: &KbConfig, input: &Input, state: Option<&BeliefState>) {
        let n = m.contexts().len();
        let (mut now, mut next) = (vec![BTreeSet::new(); n], vec![BTreeSet::new(); n]);
        if let Some(s) = state {
            for i in 0..n {
                (now[i], next[i]) = m.app_sets(i, input, s);
            }
        }
        self.rows.push(TraceRow {
            t,
            config: config.clone(),
            input: input.clone(),
            app_now: now,
            state: state.cloned(),
            app_next: next,
            removed: None,
        });
    }

    pub fn from_stream(m: &ReactiveMcs, stream: &InputStream, es: &EquilibriaStream) -> Self {
        let mut table = Self::empty(m);
        for t in 1..=es.horizon() {
            table.push(m, t, &es.configs[t - 1], stream.at(t), Some(&es.states[t - 1]));
        }
        table
    }

    pub fn from_partial(m: &ReactiveMcs, stream: &InputStream, ps: &PartialStream) -> Self {
        let mut table = Self::empty(m);
        for t in 1..=ps.states.len() {
            table.push(m, t, &ps.configs[t - 1], stream.at(t), ps.states[t - 1].as_ref());
        }
        table
    }

    /// Operations are those of the repaired system at each instant.
    pub fn from_repair(m: &ReactiveMcs, stream: &InputStream, repair: &Repair, es: &EquilibriaStream) -> Self {
        let mut table = Self::empty(m);
        for t in 1..=es.horizon() {
            let removed = &repair.per_instant[t - 1];
            let mt = m.without_rules(removed);
            table.push(&mt, t, &es.configs[t - 1], stream.at(t), Some(&es.states[t - 1]));
            let ids = sorted(removed.iter().map(|&k| m.rules()[k].id.to_string()));
            table.rows.last_mut().expect("row just pushed").removed = Some(ids);
        }
        table
    }

    fn views(&self, filter: &TraceFilter) -> Vec<RowView> {
        let n = self.contexts.len();
        let hidden = |i: usize, a: &Atom| filter.hide.iter().any(|(c, p)| *c == i && p.matches_atom(a));
        // formulas and beliefs common to every row
        let mut fixed_kb: Vec<Option<BTreeSet<Formula>>> = vec![None; n];
        let mut fixed_bel: Vec<Option<BTreeSet<Atom>>> = vec![None; n];
        if filter.omit_fixed {
            for row in &self.rows {
                for i in 0..n {
                    let f: BTreeSet<Formula> = row.config.0[i].formulas.iter().cloned().collect();
                    fixed_kb[i] = Some(match fixed_kb[i].take() {
                        None => f,
                        Some(acc) => acc.intersection(&f).cloned().collect(),
                    });
                    if let Some(s) = &row.state {
                        fixed_bel[i] = Some(match fixed_bel[i].take() {
                            None => s.0[i].clone(),
                            Some(acc) => acc.intersection(&s.0[i]).cloned().collect(),
                        });
                    }
                }
            }
        }
        let keep_formula = |i: usize, f: &Formula| !fixed_kb[i].as_ref().is_some_and(|s| s.contains(f));
        let show = |f: &Formula| f.as_fact().map(Atom::to_string).unwrap_or_else(|| f.to_string());
        let keep_belief = |i: usize, a: &Atom| !hidden(i, a) && !fixed_bel[i].as_ref().is_some_and(|s| s.contains(a));
        self.rows
            .iter()
            .map(|row| RowView {
                t: row.t,
                config: (0..n)
                    .map(|i| sorted(row.config.0[i].formulas.iter().filter(|f| keep_formula(i, f)).map(show)))
                    .collect(),
                input: row.input.0.iter().map(atoms).collect(),
                app_now: row.app_now.iter().map(atoms).collect(),
                equilibrium: row.state.as_ref().map(|s| {
                    (0..n).map(|i| sorted(s.0[i].iter().filter(|a| keep_belief(i, a)).map(Atom::to_string))).collect()
                }),
                app_next: row.app_next.iter().map(atoms).collect(),
                removed: row.removed.clone(),
            })
            .collect()
    }

    /// Tab separated table, one row per instant. Undefined equilibria print as `undefined`.
    pub fn to_tsv(&self, filter: &TraceFilter) -> String {
        let repaired = self.rows.iter().any(|r| r.removed.is_some());
        let mut out = String::from("t\tconfig\tinput\tapp_now\tequilibrium\tapp_next");
        if repaired {
            out.push_str("\tremoved");
        }
        out.push('\n');
        for v in self.views(filter) {
            let eq = v.equilibrium.as_deref().map(tuple).unwrap_or_else(|| "undefined".into());
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}",
                v.t,
                tuple(&v.config),
                tuple(&v.input),
                tuple(&v.app_now),
                eq,
                tuple(&v.app_next)
            ));
            if let Some(r) = &v.removed {
                out.push_str(&format!("\t{{{}}}", r.join(",")));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, filter: &TraceFilter) -> serde_json::Value {
        serde_json::json!({
            "contexts": self.contexts,
            "inputs": self.inputs,
            "rows": self.views(filter),
        })
    }
}
