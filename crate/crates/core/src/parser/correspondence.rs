//! Checks a run against a parse tree: `(A, |v|)` is in the stack set after
//! `i` steps exactly when the tree has an `A`-subtree starting at `i` and
//! followed by `v`.

use std::collections::BTreeSet;

use super::{Parser, StackConjunct, Verdict};
use crate::grammar::{Grammar, ParseTree};
use crate::oracle::Oracle;
use crate::table::LlTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Correspondence {
    Holds,
    /// At stack set `Z_step`, `conjunct` is present on one side only.
    Discrepancy {
        step: usize,
        conjunct: StackConjunct,
        in_tree: bool,
    },
    /// The run rejected, or the oracle found no tree.
    NoComputation,
}

impl Correspondence {
    pub fn holds(&self) -> bool {
        matches!(self, Correspondence::Holds)
    }
}

/// For `i = 0..=|w|`, the pairs `(label, |w| - end)` of subtree nodes
/// starting at `i`.
pub fn expected_sets(tree: &ParseTree, n: usize) -> Vec<BTreeSet<StackConjunct>> {
    let mut sets = vec![BTreeSet::new(); n + 1];
    for node in tree.nodes() {
        sets[node.start].insert(StackConjunct {
            nonterminal: node.label,
            tail_len: n - node.end,
        });
    }
    sets
}

/// Compares the stack sets `Z_0 .. Z_n` of a run with a tree.
pub fn compare_with_tree(tree: &ParseTree, n: usize, zs: &[Vec<StackConjunct>]) -> Correspondence {
    let expected = expected_sets(tree, n);
    if zs.len() != expected.len() {
        return Correspondence::NoComputation;
    }
    for (i, (want, got)) in expected.iter().zip(zs).enumerate() {
        let got: BTreeSet<StackConjunct> = got.iter().copied().collect();
        if let Some(&c) = want.difference(&got).next() {
            return Correspondence::Discrepancy {
                step: i,
                conjunct: c,
                in_tree: true,
            };
        }
        if let Some(&c) = got.difference(want).next() {
            return Correspondence::Discrepancy {
                step: i,
                conjunct: c,
                in_tree: false,
            };
        }
    }
    Correspondence::Holds
}

/// Runs the parser on `w`, builds the oracle's tree and compares the two.
pub fn check_correspondence(g: &Grammar, t1: &LlTable, w: &[char]) -> Correspondence {
    let Ok(parser) = Parser::new(g, t1) else {
        return Correspondence::NoComputation;
    };
    let Ok(out) = parser.run(w, true) else {
        return Correspondence::NoComputation;
    };
    if out.verdict != Verdict::Accept {
        return Correspondence::NoComputation;
    }
    let Ok(Some(tree)) = Oracle::new(g).build_tree(w) else {
        return Correspondence::NoComputation;
    };
    let trace = out.trace.expect("trace requested");
    let mut zs = vec![parser.init(w).expect("run succeeded").z];
    // the last trace entry is the empty set after the end-of-input step
    zs.extend(trace.steps[..w.len()].iter().map(|s| s.z.clone()));
    compare_with_tree(&tree, w.len(), &zs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse_grammar, word};
    use crate::oracle::DEFAULT_TREE_CAP;
    use crate::table::infer_table;

    const ANBNCN: &str = "\
alphabet = a b c
S -> a A & a C c | eps
A -> a A | b D c | eps
D -> b D c | eps
C -> a C c | b B | eps
B -> b B | eps
";

    #[test]
    fn holds_on_members() {
        let g = parse_grammar(ANBNCN).unwrap();
        let t = infer_table(&g, 1, 9, DEFAULT_TREE_CAP)
            .unwrap()
            .table()
            .unwrap();
        for w in ["", "abc", "aabbcc", "aaabbbccc"] {
            assert!(check_correspondence(&g, &t, &word(w)).holds(), "{w:?}");
        }
        assert_eq!(
            check_correspondence(&g, &t, &word("abcabc")),
            Correspondence::NoComputation
        );
    }

    #[test]
    fn mutation_is_located() {
        let g = parse_grammar(ANBNCN).unwrap();
        let t = infer_table(&g, 1, 9, DEFAULT_TREE_CAP)
            .unwrap()
            .table()
            .unwrap();
        let w = word("abc");
        let p = Parser::new(&g, &t).unwrap();
        let trace = p.run(&w, true).unwrap().trace.unwrap();
        let tree = Oracle::new(&g).build_tree(&w).unwrap().unwrap();
        let mut zs = vec![p.init(&w).unwrap().z];
        zs.extend(trace.steps[..3].iter().map(|s| s.z.clone()));
        assert!(compare_with_tree(&tree, 3, &zs).holds());

        zs[1][1].tail_len += 1;
        let c = g.lookup_name("C").unwrap();
        assert_eq!(
            compare_with_tree(&tree, 3, &zs),
            Correspondence::Discrepancy {
                step: 1,
                conjunct: StackConjunct {
                    nonterminal: c,
                    tail_len: 1
                },
                in_tree: true,
            }
        );
    }
}
