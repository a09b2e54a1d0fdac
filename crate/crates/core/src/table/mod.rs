//! LL(k) tables: the partial map `(A, x) -> rule` with `|x| <= k`.
//!
//! There is no closed-form First/Follow computation for conjunctive
//! grammars, so tables are inferred from parse trees of every member up to a
//! length bound. Inference can prove a grammar is not LL(k) (a conflict is a
//! concrete pair of witnesses) but only gives bounded evidence that it is.

mod format;

use std::collections::BTreeMap;

use crate::grammar::{first_k, show_word, Grammar, NtId, RuleId, Word};
use crate::oracle::{Oracle, OracleError};

pub use format::{load_table, store_table, TableFormatError};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LlTable {
    k: usize,
    entries: BTreeMap<NtId, BTreeMap<Word, RuleId>>,
}

impl LlTable {
    pub fn new(k: usize) -> Self {
        LlTable {
            k,
            entries: BTreeMap::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Sets `(a, x) -> rule`, returning the previous entry.
    pub fn insert(&mut self, a: NtId, x: Word, rule: RuleId) -> Option<RuleId> {
        assert!(x.len() <= self.k, "lookahead longer than k");
        self.entries.entry(a).or_default().insert(x, rule)
    }

    pub fn lookup(&self, a: NtId, x: &[char]) -> Option<RuleId> {
        self.entries.get(&a)?.get(x).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries ordered by nonterminal id, then lookahead.
    pub fn entries(&self) -> impl Iterator<Item = (NtId, &[char], RuleId)> + '_ {
        self.entries
            .iter()
            .flat_map(|(&a, row)| row.iter().map(move |(x, &r)| (a, x.as_slice(), r)))
    }

    /// Entries ordered by nonterminal name, then lookahead.
    pub fn sorted_entries<'a>(&'a self, g: &Grammar) -> Vec<(NtId, &'a [char], RuleId)> {
        let mut v: Vec<_> = self.entries().collect();
        v.sort_by(|a, b| g.name(a.0).cmp(g.name(b.0)).then_with(|| a.1.cmp(b.1)));
        v
    }
}

/// A subtree observed in some parse tree of some member string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub word: Word,
    pub start: usize,
    pub end: usize,
    pub rule: RuleId,
}

impl Witness {
    pub fn describe(&self, g: &Grammar) -> String {
        format!(
            "in \"{}\" the subtree [{}, {}) applies {}",
            self.word.iter().collect::<String>(),
            self.start,
            self.end,
            g.display_rule(self.rule)
        )
    }
}

/// Two subtrees with the same nonterminal and lookahead window but
/// different rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableConflict {
    pub nonterminal: NtId,
    pub lookahead: Word,
    pub first: Witness,
    pub second: Witness,
}

impl TableConflict {
    pub fn describe(&self, g: &Grammar) -> String {
        format!(
            "conflict at ({}, {}): {}; {}",
            g.name(self.nonterminal),
            show_word(&self.lookahead),
            self.first.describe(g),
            self.second.describe(g)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inference {
    Table(LlTable),
    Conflict(Box<TableConflict>),
}

impl Inference {
    pub fn table(self) -> Option<LlTable> {
        match self {
            Inference::Table(t) => Some(t),
            Inference::Conflict(_) => None,
        }
    }
}

/// A subtree whose rule disagrees with the table (`expected` is `None` when
/// the cell is undefined).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableViolation {
    pub nonterminal: NtId,
    pub lookahead: Word,
    pub expected: Option<RuleId>,
    pub found: Witness,
}

impl TableViolation {
    pub fn describe(&self, g: &Grammar) -> String {
        let cell = match self.expected {
            Some(r) => format!("table holds {}", g.display_rule(r)),
            None => "table cell is undefined".to_string(),
        };
        format!(
            "violation at ({}, {}): {}, but {}",
            g.name(self.nonterminal),
            show_word(&self.lookahead),
            cell,
            self.found.describe(g)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Valid,
    Violation(Box<TableViolation>),
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

/// Calls `f(nonterminal, window, witness)` for every subtree of every parse
/// tree of every member of length at most `max_len`, in shortlex order.
pub(crate) fn for_each_subtree(
    g: &Grammar,
    k: usize,
    max_len: usize,
    cap: usize,
    mut f: impl FnMut(NtId, &[char], Witness) -> bool,
) -> Result<(), OracleError> {
    let oracle = Oracle::new(g);
    for w in oracle.enumerate_language(max_len) {
        for tree in oracle.enumerate_trees(&w, cap)? {
            for node in tree.nodes() {
                let x = first_k(&w[node.start..], k);
                let witness = Witness {
                    word: w.clone(),
                    start: node.start,
                    end: node.end,
                    rule: node.rule,
                };
                if !f(node.label, x, witness) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

/// Reads a table off every parse tree of every member up to `max_len`.
///
/// When some `(A, x)` is seen with two rules, the conflict at the smallest
/// `(name, x)` is returned, with the first witness of each of its two
/// lowest rule ids.
pub fn infer_table(
    g: &Grammar,
    k: usize,
    max_len: usize,
    cap: usize,
) -> Result<Inference, OracleError> {
    let mut seen: BTreeMap<(NtId, Word), BTreeMap<RuleId, Witness>> = BTreeMap::new();
    for_each_subtree(g, k, max_len, cap, |a, x, wit| {
        seen.entry((a, x.to_vec()))
            .or_default()
            .entry(wit.rule)
            .or_insert(wit);
        true
    })?;

    let conflict =
        seen.iter()
            .filter(|(_, rules)| rules.len() > 1)
            .min_by(|((a1, x1), _), ((a2, x2), _)| {
                g.name(*a1).cmp(g.name(*a2)).then_with(|| x1.cmp(x2))
            });
    if let Some(((a, x), rules)) = conflict {
        let mut it = rules.values();
        return Ok(Inference::Conflict(Box::new(TableConflict {
            nonterminal: *a,
            lookahead: x.clone(),
            first: it.next().unwrap().clone(),
            second: it.next().unwrap().clone(),
        })));
    }

    let mut table = LlTable::new(k);
    for ((a, x), rules) in seen {
        let (&r, _) = rules.iter().next().unwrap();
        table.insert(a, x, r);
    }
    Ok(Inference::Table(table))
}

/// Checks every subtree of every member up to `max_len` against `t`,
/// reporting the first disagreement in shortlex order.
pub fn validate_table(
    g: &Grammar,
    t: &LlTable,
    max_len: usize,
    cap: usize,
) -> Result<Validation, OracleError> {
    let mut outcome = Validation::Valid;
    for_each_subtree(g, t.k(), max_len, cap, |a, x, wit| {
        let expected = t.lookup(a, x);
        if expected == Some(wit.rule) {
            return true;
        }
        outcome = Validation::Violation(Box::new(TableViolation {
            nonterminal: a,
            lookahead: x.to_vec(),
            expected,
            found: wit,
        }));
        false
    })?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse_grammar, word};
    use crate::oracle::DEFAULT_TREE_CAP;

    const EXAMPLE: &str = "\
k = 1
alphabet = a b c
S -> A & C
A -> a A | D
D -> b D c | eps
C -> a C c | B
B -> b B | eps
";

    fn cell(g: &Grammar, t: &LlTable, a: &str, x: &str) -> Option<String> {
        t.lookup(g.lookup_name(a).unwrap(), &word(x))
            .map(|r| g.display_rule(r))
    }

    #[test]
    fn example_table() {
        let g = parse_grammar(EXAMPLE).unwrap();
        let t = infer_table(&g, 1, 9, DEFAULT_TREE_CAP)
            .unwrap()
            .table()
            .unwrap();
        assert_eq!(t.len(), 14);
        assert_eq!(cell(&g, &t, "S", "a").unwrap(), "S -> A & C");
        assert_eq!(cell(&g, &t, "D", "c").unwrap(), "D -> eps");
        assert_eq!(cell(&g, &t, "B", "b").unwrap(), "B -> b B");
        assert_eq!(cell(&g, &t, "D", "a"), None);
        assert_eq!(cell(&g, &t, "S", "b"), None);
    }

    #[test]
    fn end_of_input_entries_only() {
        let g = parse_grammar(EXAMPLE).unwrap();
        let t = infer_table(&g, 1, 0, DEFAULT_TREE_CAP)
            .unwrap()
            .table()
            .unwrap();
        let cells: Vec<(String, usize)> = t
            .entries()
            .map(|(a, x, _)| (g.name(a).to_string(), x.len()))
            .collect();
        assert_eq!(cells.len(), 5);
        assert!(cells.iter().all(|(_, l)| *l == 0));
        for a in ["S", "A", "D", "C", "B"] {
            assert!(cells.iter().any(|(n, _)| n == a));
        }
    }

    #[test]
    fn conflict_on_shared_lookahead() {
        let g = parse_grammar("alphabet = a\nS -> a A | a B\nA -> eps\nB -> eps").unwrap();
        match infer_table(&g, 1, 3, DEFAULT_TREE_CAP).unwrap() {
            Inference::Conflict(c) => {
                assert_eq!(g.name(c.nonterminal), "S");
                assert_eq!(c.lookahead, word("a"));
                assert_ne!(c.first.rule, c.second.rule);
                assert_eq!(c.first.word, word("a"));
            }
            other => panic!("expected a conflict, got {other:?}"),
        }
    }

    #[test]
    fn validation() {
        let g = parse_grammar(EXAMPLE).unwrap();
        let t = infer_table(&g, 1, 9, DEFAULT_TREE_CAP)
            .unwrap()
            .table()
            .unwrap();
        assert!(validate_table(&g, &t, 9, DEFAULT_TREE_CAP)
            .unwrap()
            .is_valid());

        let mut bad = t.clone();
        let a = g.lookup_name("A").unwrap();
        let a_to_d = g
            .rules()
            .iter()
            .find(|r| g.display_rule(r.id) == "A -> D")
            .unwrap()
            .id;
        bad.insert(a, word("a"), a_to_d);
        match validate_table(&g, &bad, 9, DEFAULT_TREE_CAP).unwrap() {
            Validation::Violation(v) => {
                assert_eq!(v.nonterminal, a);
                assert_eq!(v.lookahead, word("a"));
                assert_eq!(v.expected, Some(a_to_d));
                assert_eq!(v.found.word, word("abc"));
                assert_eq!(g.display_rule(v.found.rule), "A -> a A");
            }
            Validation::Valid => panic!("rewired table accepted"),
        }

        match validate_table(&g, &LlTable::new(1), 0, DEFAULT_TREE_CAP).unwrap() {
            Validation::Violation(v) => assert_eq!(v.expected, None),
            Validation::Valid => panic!("empty table accepted"),
        }
    }
}
