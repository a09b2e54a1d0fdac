//! Table files: a `k = <int>` header, then one line per defined cell,
//! `<Nonterminal> | <lookahead or eps> | <rule>`, sorted by nonterminal name
//! and lookahead.

use std::collections::HashMap;

use thiserror::Error;

use super::LlTable;
use crate::grammar::{show_word, Grammar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableFormatError {
    #[error("{line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("{line}: duplicate entry for ({nonterminal}, {lookahead})")]
    Duplicate {
        line: usize,
        nonterminal: String,
        lookahead: String,
    },
    #[error("missing `k = <int>` header")]
    MissingHeader,
}

pub fn store_table(t: &LlTable, g: &Grammar) -> String {
    let mut out = format!("k = {}\n", t.k());
    for (a, x, r) in t.sorted_entries(g) {
        out.push_str(&format!(
            "{} | {} | {}\n",
            g.name(a),
            show_word(x),
            g.display_rule(r)
        ));
    }
    out
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Reads a table for `g`; rules are matched against `g`'s rules by their
/// rendering.
pub fn load_table(doc: &str, g: &Grammar) -> Result<LlTable, TableFormatError> {
    let mut by_text: HashMap<String, usize> = HashMap::new();
    for r in g.rules().iter().rev() {
        by_text.insert(normalize(&g.display_rule(r.id)), r.id);
    }
    let mut table: Option<LlTable> = None;
    for (idx, raw) in doc.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        let malformed = |msg: String| TableFormatError::Malformed { line, msg };
        let Some(t) = table.as_mut() else {
            let k = text
                .split_once('=')
                .filter(|(key, _)| key.trim() == "k")
                .and_then(|(_, v)| v.trim().parse::<usize>().ok())
                .filter(|&k| k > 0)
                .ok_or(TableFormatError::MissingHeader)?;
            table = Some(LlTable::new(k));
            continue;
        };
        let fields: Vec<&str> = text.splitn(3, '|').map(str::trim).collect();
        let [name, look, rule] = fields[..] else {
            return Err(malformed(
                "expected `<Nonterminal> | <lookahead> | <rule>`".into(),
            ));
        };
        let a = g
            .lookup_name(name)
            .ok_or_else(|| malformed(format!("unknown nonterminal `{name}`")))?;
        let x: Vec<char> = if look == "eps" {
            Vec::new()
        } else {
            look.chars().collect()
        };
        if x.len() > t.k() {
            return Err(malformed(format!(
                "lookahead `{look}` is longer than k = {}",
                t.k()
            )));
        }
        if let Some(&c) = x.iter().find(|&&c| !g.has_terminal(c)) {
            return Err(malformed(format!(
                "lookahead symbol {c:?} is not in the alphabet"
            )));
        }
        let r = *by_text
            .get(&normalize(rule))
            .ok_or_else(|| malformed(format!("no rule `{rule}` in the grammar")))?;
        if g.rule(r).lhs != a {
            return Err(malformed(format!("rule `{rule}` is not a rule for {name}")));
        }
        if t.insert(a, x, r).is_some() {
            return Err(TableFormatError::Duplicate {
                line,
                nonterminal: name.to_string(),
                lookahead: look.to_string(),
            });
        }
    }
    table.ok_or(TableFormatError::MissingHeader)
}
