use std::collections::{HashMap, HashSet, VecDeque};

use super::TransformError;
use crate::grammar::{Conjunct, Grammar, NtId, RuleBody, Word};

#[derive(Debug, Clone)]
pub struct Alignment {
    pub grammar: Grammar,
    /// Rules removed because their conjuncts start with different
    /// terminals (they define the empty set).
    pub dropped: Vec<String>,
}

/// Factors each conjunct `a u B v` with `|u| >= 1` into `a C` with a fresh
/// `C -> u B v`, until every conjunctive rule starts all its conjuncts with
/// the same single terminal.
pub fn align(g: &Grammar) -> Result<Alignment, TransformError> {
    if let Some(&r) = g.left_recursive_rules().first() {
        return Err(TransformError::LeftRecursive(g.display_rule(r)));
    }
    let mut b = g.empty_like();
    let mut taken: HashSet<String> = g.nonterminals().map(|a| g.name(a).to_string()).collect();
    let mut fresh: HashMap<(Word, NtId, Word), NtId> = HashMap::new();
    let mut counter = 0usize;
    let mut dropped = Vec::new();

    let mut queue: VecDeque<(NtId, RuleBody)> =
        g.rules().iter().map(|r| (r.lhs, r.body.clone())).collect();
    while let Some((lhs, body)) = queue.pop_front() {
        let cs = match body {
            RuleBody::Terminal(_) => {
                b.rule_once(lhs, body);
                continue;
            }
            RuleBody::Conjunction(cs) => cs,
        };
        let lead = cs[0].prefix[0];
        if cs.iter().any(|c| c.prefix[0] != lead) {
            let text = cs
                .iter()
                .map(|c| conjunct_text(&b, c))
                .collect::<Vec<_>>()
                .join(" & ");
            dropped.push(format!("{} -> {}", b.name(lhs), text));
            continue;
        }
        let mut aligned = Vec::with_capacity(cs.len());
        for c in cs {
            if c.prefix.len() == 1 {
                aligned.push(c);
                continue;
            }
            let key = (c.prefix[1..].to_vec(), c.body, c.suffix.clone());
            let next = match fresh.get(&key) {
                Some(&n) => n,
                None => {
                    let name = loop {
                        let candidate = format!("{}_f{}", b.name(lhs), counter);
                        counter += 1;
                        if taken.insert(candidate.clone()) {
                            break candidate;
                        }
                    };
                    let n = b.nonterminal(&name);
                    fresh.insert(key.clone(), n);
                    queue.push_back((
                        n,
                        RuleBody::Conjunction(vec![Conjunct::new(key.0, key.1, key.2)]),
                    ));
                    n
                }
            };
            aligned.push(Conjunct::new(vec![c.prefix[0]], next, Vec::new()));
        }
        b.rule_once(lhs, RuleBody::Conjunction(aligned));
    }
    Ok(Alignment {
        grammar: b.build()?,
        dropped,
    })
}

fn conjunct_text(b: &crate::grammar::GrammarBuilder, c: &Conjunct) -> String {
    let mut parts: Vec<String> = c.prefix.iter().map(|t| t.to_string()).collect();
    parts.push(b.name(c.body).to_string());
    parts.extend(c.suffix.iter().map(|t| t.to_string()));
    parts.join(" ")
}
