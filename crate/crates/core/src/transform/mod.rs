//! Grammar transformations that take an LL(k) linear conjunctive grammar to
//! an aligned LL(1) one defining the same language.
//!
//! Each stage is a deterministic function of its input grammar (and table,
//! where one is needed). Generated nonterminals get collision-free names:
//! `A__u` for a suffixed copy of `A`, `u__A` for a buffered one (`eps` for
//! the empty string), and `<lhs>_f<n>` for nonterminals introduced by
//! alignment.

mod align;
mod buffer;
mod left_recursion;
mod pipeline;
mod short_rules;

use thiserror::Error;

use crate::grammar::GrammarError;

pub use align::{align, Alignment};
pub use buffer::reduce_to_ll1;
pub use left_recursion::eliminate_left_recursion;
pub use pipeline::{
    run_pipeline, Manifest, PipelineError, PipelineOutput, Stage, StageFailure, StageRecord,
};
pub use short_rules::{eliminate_short_rules, short_rule_uses, ShortRuleUse};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("left chain from ({origin}, {lookahead}) cycles: {cycle}")]
    ChainCycle {
        origin: String,
        lookahead: String,
        cycle: String,
    },
    #[error("left chain from ({origin}, {lookahead}) reaches {at}, which has no table entry")]
    MissingEntry {
        origin: String,
        lookahead: String,
        at: String,
    },
    #[error("rule `{0}` is left-recursive")]
    LeftRecursive(String),
    #[error("rule `{0}` is not aligned")]
    NotAligned(String),
    #[error("table entry ({nonterminal}, {lookahead}) -> `{rule}` does not start with buffer {buffer}; the grammar still has short rules")]
    ShortRuleResidue {
        nonterminal: String,
        lookahead: String,
        rule: String,
        buffer: String,
    },
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// Name of `A_u`.
pub(crate) fn suffixed_name(a: &str, u: &[char]) -> String {
    format!("{a}__{}", crate::grammar::show_word(u))
}

/// Name of `_uA`.
pub(crate) fn buffered_name(u: &[char], a: &str) -> String {
    format!("{}__{a}", crate::grammar::show_word(u))
}

fn concat(a: &[char], b: &[char]) -> Vec<char> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}
