use std::collections::{HashMap, VecDeque};

use super::{concat, suffixed_name, TransformError};
use crate::grammar::{first_k, Conjunct, Grammar, GrammarBuilder, NtId, RuleBody, RuleId, Word};
use crate::oracle::OracleError;
use crate::table::{for_each_subtree, Witness};

/// Builds `A_u` with `L(A_u) = L(A) u` for `|u| <= k - 1`, starting from
/// `S_eps`; only copies reachable from the start are generated.
///
/// `A -> y` becomes `A_u -> y u`. In `A -> a B v & ...` each conjunct
/// becomes `a B_s t`, where `s` is the first `k - 1` symbols of `v u` and
/// `t` the rest.
pub fn eliminate_short_rules(g: &Grammar, k: usize) -> Result<Grammar, TransformError> {
    let (ok, bad) = g.is_aligned();
    if !ok {
        return Err(TransformError::NotAligned(g.display_rule(bad[0])));
    }
    let mut b = GrammarBuilder::new(k);
    b.alphabet(g.alphabet().iter().copied());
    let mut ids: HashMap<(NtId, Word), NtId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |b: &mut GrammarBuilder, queue: &mut VecDeque<_>, a: NtId, u: Word| {
        *ids.entry((a, u.clone())).or_insert_with(|| {
            queue.push_back((a, u.clone()));
            b.nonterminal(&suffixed_name(g.name(a), &u))
        })
    };
    let start = intern(&mut b, &mut queue, g.start(), Vec::new());
    b.set_start(start);

    while let Some((a, u)) = queue.pop_front() {
        let lhs = intern(&mut b, &mut queue, a, u.clone());
        for r in g.rules_for(a) {
            let body = match &r.body {
                RuleBody::Terminal(y) => RuleBody::Terminal(concat(y, &u)),
                RuleBody::Conjunction(cs) => RuleBody::Conjunction(
                    cs.iter()
                        .map(|c| {
                            let vu = concat(&c.suffix, &u);
                            let s = first_k(&vu, k.saturating_sub(1)).to_vec();
                            let t = vu[s.len()..].to_vec();
                            let body = intern(&mut b, &mut queue, c.body, s);
                            Conjunct::new(c.prefix.clone(), body, t)
                        })
                        .collect(),
                ),
            };
            b.rule_once(lhs, body);
        }
    }
    Ok(b.build()?)
}

/// A terminal rule `A -> y` with `|y| < k - 1` applied at a subtree that is
/// followed by a nonempty string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortRuleUse {
    pub rule: RuleId,
    pub witness: Witness,
}

/// Scans every tree of every member up to `max_len` for short-rule uses,
/// returning the first witness per rule, ordered by rule id.
pub fn short_rule_uses(
    g: &Grammar,
    k: usize,
    max_len: usize,
    cap: usize,
) -> Result<Vec<ShortRuleUse>, OracleError> {
    let mut found: HashMap<RuleId, Witness> = HashMap::new();
    for_each_subtree(g, k, max_len, cap, |_, _, wit| {
        if let RuleBody::Terminal(y) = &g.rule(wit.rule).body {
            if y.len() + 1 < k && wit.end < wit.word.len() {
                found.entry(wit.rule).or_insert(wit);
            }
        }
        true
    })?;
    let mut uses: Vec<ShortRuleUse> = found
        .into_iter()
        .map(|(rule, witness)| ShortRuleUse { rule, witness })
        .collect();
    uses.sort_by_key(|u| u.rule);
    Ok(uses)
}
