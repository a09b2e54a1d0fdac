use std::collections::{HashMap, VecDeque};

use super::{buffered_name, concat, TransformError};
use crate::grammar::{show_word, Conjunct, Grammar, GrammarBuilder, NtId, RuleBody, Word};
use crate::table::LlTable;

/// Builds `_uA` (`A` with the buffered prefix `u`, `|u| <= k - 1`) so that
/// an LL(1) parser can postpone the choice of `A`'s rule until the buffer
/// and the next symbol together give the `k` symbols the table needs.
///
/// * `|u| < k - 1`: `_uA -> b _{ub}A` for each `b`, and `_uA -> eps` if
///   `T(A, u)` is defined (input ends inside the buffer).
/// * `|u| = k - 1`: for each `b` in the alphabet or `eps` with `T(A, ub)`
///   defined, the rule with `u` removed: `A -> u x` gives `_uA -> x`, and
///   `A -> a B1 v1 & ...` with `u = a u'` gives `_uA -> _{u'}B1 v1 & ...`.
///   Entries whose `u` does not begin with `a` are skipped. With `k = 1` the
///   buffer is always empty and the rule keeps its `a`.
///
/// Only nonterminals reachable from `_eps S` are generated. The output has
/// lookahead 1.
pub fn reduce_to_ll1(g: &Grammar, t: &LlTable) -> Result<Grammar, TransformError> {
    let (ok, bad) = g.is_aligned();
    if !ok {
        return Err(TransformError::NotAligned(g.display_rule(bad[0])));
    }
    let k = t.k();
    let mut b = GrammarBuilder::new(1);
    b.alphabet(g.alphabet().iter().copied());
    let mut ids: HashMap<(Word, NtId), NtId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |b: &mut GrammarBuilder, queue: &mut VecDeque<_>, u: Word, a: NtId| {
        *ids.entry((u.clone(), a)).or_insert_with(|| {
            queue.push_back((u.clone(), a));
            b.nonterminal(&buffered_name(&u, g.name(a)))
        })
    };
    let start = intern(&mut b, &mut queue, Vec::new(), g.start());
    b.set_start(start);

    while let Some((u, a)) = queue.pop_front() {
        let lhs = intern(&mut b, &mut queue, u.clone(), a);
        if u.len() + 1 < k {
            for &c in g.alphabet() {
                let next = intern(&mut b, &mut queue, concat(&u, &[c]), a);
                b.rule_once(
                    lhs,
                    RuleBody::Conjunction(vec![Conjunct::new(vec![c], next, Vec::new())]),
                );
            }
            if t.lookup(a, &u).is_some() {
                b.rule_once(lhs, RuleBody::Terminal(Vec::new()));
            }
            continue;
        }
        let windows =
            std::iter::once(u.clone()).chain(g.alphabet().iter().map(|&c| concat(&u, &[c])));
        for x in windows {
            let Some(r) = t.lookup(a, &x) else { continue };
            let body = match &g.rule(r).body {
                RuleBody::Terminal(y) => {
                    if !y.starts_with(&u) {
                        return Err(TransformError::ShortRuleResidue {
                            nonterminal: g.name(a).to_string(),
                            lookahead: show_word(&x),
                            rule: g.display_rule(r),
                            buffer: show_word(&u),
                        });
                    }
                    RuleBody::Terminal(y[u.len()..].to_vec())
                }
                RuleBody::Conjunction(cs) => {
                    let lead = cs[0].prefix[0];
                    if !u.is_empty() && u[0] != lead {
                        continue;
                    }
                    let rest = if u.is_empty() {
                        Vec::new()
                    } else {
                        u[1..].to_vec()
                    };
                    let kept = if u.is_empty() { vec![lead] } else { Vec::new() };
                    RuleBody::Conjunction(
                        cs.iter()
                            .map(|c| {
                                let body = intern(&mut b, &mut queue, rest.clone(), c.body);
                                Conjunct::new(kept.clone(), body, c.suffix.clone())
                            })
                            .collect(),
                    )
                }
            };
            b.rule_once(lhs, body);
        }
    }
    Ok(b.build()?)
}
