#![allow(dead_code)]

use conjll::oracle::DEFAULT_TREE_CAP;
use conjll::table::LlTable;
use conjll::transform::{run_pipeline, Stage};
use conjll::{parse_grammar, Grammar};

/// `{a^n b^n c^n : n >= 0}` as the intersection of `a* b^n c^n` and
/// `a^n b* c^n`.
pub const EXAMPLE: &str = "\
k = 1
alphabet = a b c
S -> A & C
A -> a A | D
D -> b D c | eps
C -> a C c | B
B -> b B | eps
";

/// `{a^{n+1} b^n c^n : n >= 1}`; LL(2) but not LL(1), with a short rule.
pub const TWO: &str = "\
k = 2
alphabet = a b c
S -> X & Y
X -> a X | a Z
Z -> b Z c | b c
Y -> a Y c | a b B
B -> b B | eps
";

/// `{a^{n+2} b^{n+1} : n >= 1}`; LL(3), with a short rule at k = 3.
pub const THREE: &str = "\
k = 3
alphabet = a b
S -> P & Q
P -> a P b | a a b
Q -> R b
R -> a R | b T
T -> b T | eps
";

/// `{a^{2n} c b^n}`; LL(1) but neither aligned nor free of left recursion.
pub const ONE: &str = "\
k = 1
alphabet = a b c
S -> T & U
T -> a a T b | c
U -> a U | c V
V -> b V | eps
";

/// Every hand-written LL(k) grammar in the test set, with its k.
pub fn grammars() -> Vec<(&'static str, Grammar)> {
    [
        ("example", EXAMPLE),
        ("two", TWO),
        ("three", THREE),
        ("one", ONE),
    ]
    .into_iter()
    .map(|(name, text)| (name, parse_grammar(text).unwrap()))
    .collect()
}

pub fn example() -> Grammar {
    parse_grammar(EXAMPLE).unwrap()
}

/// Full pipeline output: final grammar and its k = 1 table.
pub fn pipelined(g: &Grammar, bound: usize) -> (Grammar, LlTable) {
    let out = run_pipeline(g, g.k(), bound, DEFAULT_TREE_CAP, Stage::Full).unwrap();
    (out.grammar().clone(), out.table.unwrap())
}
