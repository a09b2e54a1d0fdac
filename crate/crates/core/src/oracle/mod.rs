//! Brute-force recognizer: dynamic programming over every substring of the
//! input, independent of any LL machinery. Every differential test compares
//! against this module.
//!
//! Entries are filled by increasing span length. Rules whose conjuncts all
//! have empty context (`A -> B & C`) depend on entries of the same span;
//! those are resolved by rounds until nothing changes. The round in which an
//! entry first became true is kept as its rank, which lets tree building
//! avoid looping through such chains.

use std::collections::HashMap;

use thiserror::Error;

use crate::grammar::{Conjunct, Grammar, NtId, ParseTree, RuleBody, RuleId, TreeNode, Word};

mod language;

pub use language::LanguageTable;

/// Default budget for [`enumerate_trees`].
pub const DEFAULT_TREE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("symbol {symbol:?} at position {position} is not in the alphabet")]
    SymbolOutsideAlphabet { symbol: char, position: usize },
    #[error("more than {cap} parse trees")]
    TooManyTrees { cap: usize },
}

const ABSENT: u32 = u32::MAX;

/// `M(A, i, j)`: whether `w[i..j)` is in `L(A)`.
#[derive(Debug, Clone)]
pub struct MembershipTable {
    width: usize,
    rank: Vec<u32>,
}

impl MembershipTable {
    fn idx(&self, a: NtId, i: usize, j: usize) -> usize {
        (a.0 * self.width + i) * self.width + j
    }

    /// Length of the input the table was computed for.
    pub fn input_len(&self) -> usize {
        self.width - 1
    }

    pub fn holds(&self, a: NtId, i: usize, j: usize) -> bool {
        self.rank[self.idx(a, i, j)] != ABSENT
    }

    /// Fixpoint round in which the entry became true.
    pub fn rank(&self, a: NtId, i: usize, j: usize) -> Option<u32> {
        match self.rank[self.idx(a, i, j)] {
            ABSENT => None,
            r => Some(r),
        }
    }
}

/// A grammar prepared for repeated membership queries.
pub struct Oracle<'g> {
    g: &'g Grammar,
    direct: Vec<RuleId>,
    chained: Vec<RuleId>,
}

fn same_span(c: &Conjunct) -> bool {
    c.context_len() == 0
}

impl<'g> Oracle<'g> {
    pub fn new(g: &'g Grammar) -> Self {
        let (chained, direct) = g.rules().iter().map(|r| r.id).partition(
            |&r| matches!(&g.rule(r).body, RuleBody::Conjunction(cs) if cs.iter().any(same_span)),
        );
        Oracle { g, direct, chained }
    }

    pub fn grammar(&self) -> &'g Grammar {
        self.g
    }

    fn check_alphabet(&self, w: &[char]) -> Result<(), OracleError> {
        match w.iter().position(|&c| !self.g.has_terminal(c)) {
            Some(position) => Err(OracleError::SymbolOutsideAlphabet {
                symbol: w[position],
                position,
            }),
            None => Ok(()),
        }
    }

    pub fn membership(&self, w: &[char]) -> Result<MembershipTable, OracleError> {
        self.check_alphabet(w)?;
        let n = w.len();
        let mut m = MembershipTable {
            width: n + 1,
            rank: vec![ABSENT; self.g.nonterminal_count() * (n + 1) * (n + 1)],
        };
        let mut fresh = Vec::new();
        for len in 0..=n {
            for i in 0..=n - len {
                let j = i + len;
                for &r in &self.direct {
                    let rule = self.g.rule(r);
                    let at = m.idx(rule.lhs, i, j);
                    if m.rank[at] == ABSENT && self.rule_holds(&rule.body, w, i, j, &m, 0) {
                        m.rank[at] = 0;
                    }
                }
                let mut round = 1;
                loop {
                    fresh.clear();
                    for &r in &self.chained {
                        let rule = self.g.rule(r);
                        if m.rank[m.idx(rule.lhs, i, j)] == ABSENT
                            && self.rule_holds(&rule.body, w, i, j, &m, round)
                        {
                            fresh.push(rule.lhs);
                        }
                    }
                    if fresh.is_empty() {
                        break;
                    }
                    for &a in &fresh {
                        let at = m.idx(a, i, j);
                        if m.rank[at] == ABSENT {
                            m.rank[at] = round;
                        }
                    }
                    round += 1;
                }
            }
        }
        Ok(m)
    }

    /// Whether `body` derives `w[i..j)`, allowing same-span children only if
    /// their rank is below `below`.
    fn rule_holds(
        &self,
        body: &RuleBody,
        w: &[char],
        i: usize,
        j: usize,
        m: &MembershipTable,
        below: u32,
    ) -> bool {
        match body {
            RuleBody::Terminal(y) => &w[i..j] == y.as_slice(),
            RuleBody::Conjunction(cs) => cs.iter().all(|c| {
                if same_span(c) {
                    m.rank[m.idx(c.body, i, j)] < below
                } else {
                    conjunct_fits(c, w, i, j)
                        && m.holds(c.body, i + c.prefix.len(), j - c.suffix.len())
                }
            }),
        }
    }

    pub fn recognize(&self, w: &[char]) -> Result<bool, OracleError> {
        let m = self.membership(w)?;
        Ok(m.holds(self.g.start(), 0, w.len()))
    }

    /// Like [`recognize`](Self::recognize), but symbols outside the alphabet
    /// simply make the word a non-member.
    pub fn accepts(&self, w: &[char]) -> bool {
        self.recognize(w).unwrap_or(false)
    }

    pub fn build_tree(&self, w: &[char]) -> Result<Option<ParseTree>, OracleError> {
        let m = self.membership(w)?;
        if !m.holds(self.g.start(), 0, w.len()) {
            return Ok(None);
        }
        Ok(Some(ParseTree {
            root: self.build_node(&m, w, self.g.start(), 0, w.len()),
        }))
    }

    fn build_node(&self, m: &MembershipTable, w: &[char], a: NtId, i: usize, j: usize) -> TreeNode {
        let own = m.rank(a, i, j).expect("node is a member");
        let rule = self
            .g
            .rules_for(a)
            .find(|r| self.rule_holds(&r.body, w, i, j, m, own))
            .expect("a justifying rule exists for every member entry");
        let children = match &rule.body {
            RuleBody::Terminal(_) => Vec::new(),
            RuleBody::Conjunction(cs) => cs
                .iter()
                .map(|c| self.build_node(m, w, c.body, i + c.prefix.len(), j - c.suffix.len()))
                .collect(),
        };
        TreeNode {
            label: a,
            start: i,
            end: j,
            rule: rule.id,
            children,
        }
    }

    /// Rules of `a` satisfied on `w[i..j)`, whatever the rank.
    fn satisfied<'s>(
        &'s self,
        m: &'s MembershipTable,
        w: &'s [char],
        a: NtId,
        i: usize,
        j: usize,
    ) -> impl Iterator<Item = RuleId> + 's {
        self.g
            .rules_for(a)
            .filter(move |r| self.rule_holds(&r.body, w, i, j, m, ABSENT))
            .map(|r| r.id)
    }

    /// Number of parse trees, saturating at `cap + 1`. A cycle through a
    /// member entry means infinitely many trees.
    pub fn count_trees(&self, w: &[char], cap: usize) -> Result<usize, OracleError> {
        let m = self.membership(w)?;
        if !m.holds(self.g.start(), 0, w.len()) {
            return Ok(0);
        }
        let mut memo = HashMap::new();
        self.count_node(&m, w, self.g.start(), 0, w.len(), cap, &mut memo)
    }

    #[allow(clippy::too_many_arguments)]
    fn count_node(
        &self,
        m: &MembershipTable,
        w: &[char],
        a: NtId,
        i: usize,
        j: usize,
        cap: usize,
        memo: &mut HashMap<(NtId, usize, usize), Option<usize>>,
    ) -> Result<usize, OracleError> {
        match memo.get(&(a, i, j)) {
            Some(Some(c)) => return Ok(*c),
            Some(None) => return Err(OracleError::TooManyTrees { cap }),
            None => {}
        }
        memo.insert((a, i, j), None);
        let limit = cap + 1;
        let mut total = 0usize;
        let rules: Vec<RuleId> = self.satisfied(m, w, a, i, j).collect();
        for r in rules {
            let mut product = 1usize;
            if let RuleBody::Conjunction(cs) = &self.g.rule(r).body {
                for c in cs {
                    let sub = self.count_node(
                        m,
                        w,
                        c.body,
                        i + c.prefix.len(),
                        j - c.suffix.len(),
                        cap,
                        memo,
                    )?;
                    product = product.saturating_mul(sub).min(limit);
                }
            }
            total = total.saturating_add(product).min(limit);
        }
        memo.insert((a, i, j), Some(total));
        Ok(total)
    }

    pub fn enumerate_trees(&self, w: &[char], cap: usize) -> Result<Vec<ParseTree>, OracleError> {
        let count = self.count_trees(w, cap)?;
        if count > cap {
            return Err(OracleError::TooManyTrees { cap });
        }
        if count == 0 {
            return Ok(Vec::new());
        }
        let m = self.membership(w)?;
        let mut memo = HashMap::new();
        Ok(self
            .all_nodes(&m, w, self.g.start(), 0, w.len(), &mut memo)
            .into_iter()
            .map(|root| ParseTree { root })
            .collect())
    }

    fn all_nodes(
        &self,
        m: &MembershipTable,
        w: &[char],
        a: NtId,
        i: usize,
        j: usize,
        memo: &mut HashMap<(NtId, usize, usize), Vec<TreeNode>>,
    ) -> Vec<TreeNode> {
        if let Some(v) = memo.get(&(a, i, j)) {
            return v.clone();
        }
        let mut out = Vec::new();
        let rules: Vec<RuleId> = self.satisfied(m, w, a, i, j).collect();
        for r in rules {
            match &self.g.rule(r).body {
                RuleBody::Terminal(_) => out.push(TreeNode {
                    label: a,
                    start: i,
                    end: j,
                    rule: r,
                    children: Vec::new(),
                }),
                RuleBody::Conjunction(cs) => {
                    let mut partial: Vec<Vec<TreeNode>> = vec![Vec::new()];
                    for c in cs {
                        let subs = self.all_nodes(
                            m,
                            w,
                            c.body,
                            i + c.prefix.len(),
                            j - c.suffix.len(),
                            memo,
                        );
                        partial = partial
                            .into_iter()
                            .flat_map(|p| {
                                subs.iter().map(move |s| {
                                    let mut p = p.clone();
                                    p.push(s.clone());
                                    p
                                })
                            })
                            .collect();
                    }
                    out.extend(partial.into_iter().map(|children| TreeNode {
                        label: a,
                        start: i,
                        end: j,
                        rule: r,
                        children,
                    }));
                }
            }
        }
        memo.insert((a, i, j), out.clone());
        out
    }

    /// All members of length at most `max_len`, shortlex order.
    pub fn enumerate_language(&self, max_len: usize) -> Vec<Word> {
        LanguageTable::new(self.g, self.g.alphabet(), max_len).members()
    }
}

fn conjunct_fits(c: &Conjunct, w: &[char], i: usize, j: usize) -> bool {
    c.context_len() <= j - i && w[i..j].starts_with(&c.prefix) && w[i..j].ends_with(&c.suffix)
}

pub fn membership(g: &Grammar, w: &[char]) -> Result<MembershipTable, OracleError> {
    Oracle::new(g).membership(w)
}

pub fn recognize(g: &Grammar, w: &[char]) -> Result<bool, OracleError> {
    Oracle::new(g).recognize(w)
}

/// The parse tree choosing, at every node, the lowest-id applicable rule.
pub fn build_tree(g: &Grammar, w: &[char]) -> Result<Option<ParseTree>, OracleError> {
    Oracle::new(g).build_tree(w)
}

/// Every parse tree of `w`, or [`OracleError::TooManyTrees`] beyond `cap`.
pub fn enumerate_trees(g: &Grammar, w: &[char], cap: usize) -> Result<Vec<ParseTree>, OracleError> {
    Oracle::new(g).enumerate_trees(w, cap)
}

pub fn enumerate_language(g: &Grammar, max_len: usize) -> Vec<Word> {
    Oracle::new(g).enumerate_language(max_len)
}

/// The alphabet of both grammars, sorted.
pub fn union_alphabet(a: &Grammar, b: &Grammar) -> Vec<char> {
    let mut s: Vec<char> = a.alphabet().iter().chain(b.alphabet()).copied().collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Shortest (then lexicographically first) word of length at most `max_len`
/// over the union alphabet on which the two grammars disagree.
pub fn first_difference(a: &Grammar, b: &Grammar, max_len: usize) -> Option<Word> {
    let alphabet = union_alphabet(a, b);
    let (ta, tb) = (
        LanguageTable::new(a, &alphabet, max_len),
        LanguageTable::new(b, &alphabet, max_len),
    );
    (0..ta.word_count())
        .find(|&i| ta.contains_index(i) != tb.contains_index(i))
        .map(|i| ta.word(i))
}
