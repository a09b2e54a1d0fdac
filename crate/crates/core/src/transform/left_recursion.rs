use super::{concat, TransformError};
use crate::grammar::{show_word, Conjunct, Grammar, NtId, RuleBody, Word};
use crate::table::LlTable;

/// Replaces every table entry `(A, x)` by one rule that inlines all left
/// chains starting at `A` under lookahead `x`.
///
/// A chain descends through conjuncts `B t` (nonterminal first). Every
/// vertex on it shares its first leaf with `A`, so the same `x` selects the
/// rule at each step. Normal conjuncts `u C v` met along the way are emitted
/// as `u C v t_m ... t_1`; if a terminal rule `y` is met instead, the whole
/// rule becomes `A -> y t_m ... t_1`.
pub fn eliminate_left_recursion(g: &Grammar, t: &LlTable) -> Result<Grammar, TransformError> {
    let mut b = g.empty_like();
    for (a, x, _) in t.entries() {
        let mut walk = ChainWalk {
            g,
            t,
            origin: a,
            x,
            path: Vec::new(),
            sigma: None,
            conjuncts: Vec::new(),
        };
        walk.explore(a, Vec::new())?;
        let body = match walk.sigma {
            Some(y) => RuleBody::Terminal(y),
            None => RuleBody::Conjunction(walk.conjuncts),
        };
        b.rule_once(a, body);
    }
    Ok(b.build()?)
}

struct ChainWalk<'a> {
    g: &'a Grammar,
    t: &'a LlTable,
    origin: NtId,
    x: &'a [char],
    path: Vec<NtId>,
    sigma: Option<Word>,
    conjuncts: Vec<Conjunct>,
}

impl ChainWalk<'_> {
    /// `tail` is the accumulated `t_j ... t_1` following the current vertex.
    fn explore(&mut self, at: NtId, tail: Word) -> Result<(), TransformError> {
        let g = self.g;
        if let Some(pos) = self.path.iter().position(|&n| n == at) {
            let cycle: Vec<&str> = self.path[pos..]
                .iter()
                .chain([&at])
                .map(|&n| g.name(n))
                .collect();
            return Err(TransformError::ChainCycle {
                origin: g.name(self.origin).to_string(),
                lookahead: show_word(self.x),
                cycle: cycle.join(" -> "),
            });
        }
        let Some(r) = self.t.lookup(at, self.x) else {
            return Err(TransformError::MissingEntry {
                origin: g.name(self.origin).to_string(),
                lookahead: show_word(self.x),
                at: g.name(at).to_string(),
            });
        };
        self.path.push(at);
        match &g.rule(r).body {
            RuleBody::Terminal(y) => {
                if self.sigma.is_none() {
                    self.sigma = Some(concat(y, &tail));
                }
            }
            RuleBody::Conjunction(cs) => {
                for c in cs {
                    let suffix = concat(&c.suffix, &tail);
                    if c.is_left_recursive() {
                        self.explore(c.body, suffix)?;
                    } else {
                        let emitted = Conjunct::new(c.prefix.clone(), c.body, suffix);
                        if !self.conjuncts.contains(&emitted) {
                            self.conjuncts.push(emitted);
                        }
                    }
                }
            }
        }
        self.path.pop();
        Ok(())
    }
}
