//! Toolkit for LL(k) linear conjunctive grammars.
//!
//! * [`grammar`]: data model, file format and structural checks.
//! * [`oracle`]: brute-force recognizer over all substrings, used as ground
//!   truth.
//! * [`table`]: LL(k) tables, bounded inference and validation.
//! * [`transform`]: left-recursion elimination, alignment, short-rule
//!   elimination and the reduction to LL(1), plus the full pipeline.
//! * [`parser`]: the stack-set LL(1) recognizer storing tails as lengths.

pub mod grammar;
pub mod oracle;
pub mod parser;
pub mod table;
pub mod transform;
pub mod words;

pub use grammar::{parse_grammar, serialize_grammar, Grammar, NtId, RuleId, Word};
