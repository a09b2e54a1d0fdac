//! A literal stack-set recognizer that keeps every tail as a string and
//! compares terminal rules against the whole unread suffix. It is slower
//! than [`Parser`](super::Parser) and has no tail-conflict rule, which
//! makes it an independent second route to the same verdicts.

use std::collections::BTreeSet;

use crate::grammar::{Grammar, NtId, RuleBody, Word};
use crate::table::LlTable;

/// Stack sets `Z_0 .. Z_{n+1}` of an accepting run, or `None` on
/// rejection.
pub fn run(g: &Grammar, t1: &LlTable, w: &[char]) -> Option<Vec<BTreeSet<(NtId, Word)>>> {
    let mut z: BTreeSet<(NtId, Word)> = BTreeSet::new();
    z.insert((g.start(), Vec::new()));
    let mut history = vec![z.clone()];
    for i in 0..=w.len() {
        let rest = &w[i..];
        let a: Vec<char> = rest.first().copied().into_iter().collect();
        let mut next = BTreeSet::new();
        for (nt, v) in &z {
            let r = t1.lookup(*nt, &a)?;
            match &g.rule(r).body {
                RuleBody::Terminal(y) => {
                    let mut yv = y.clone();
                    yv.extend_from_slice(v);
                    if yv != rest {
                        return None;
                    }
                }
                RuleBody::Conjunction(cs) => {
                    if a.is_empty() || cs.iter().any(|c| c.prefix != a) {
                        return None;
                    }
                    for c in cs {
                        let mut tail = c.suffix.clone();
                        tail.extend_from_slice(v);
                        next.insert((c.body, tail));
                    }
                }
            }
        }
        z = next;
        history.push(z.clone());
    }
    z.is_empty().then_some(history)
}

pub fn recognize(g: &Grammar, t1: &LlTable, w: &[char]) -> bool {
    run(g, t1, w).is_some()
}
