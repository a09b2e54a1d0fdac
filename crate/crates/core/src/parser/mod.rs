//! The stack-set LL(1) recognizer for aligned linear conjunctive grammars,
//! in its logspace form.
//!
//! A configuration is a set of pending conjuncts `A v`, each asserting that
//! the unread input lies in `L(A) v`. Every tail `v` is checked against the
//! end of the input when it is created, so only its length is kept. Each
//! nonterminal occurs at most once in the set, which bounds the state by
//! `|N|` pairs `(nonterminal, integer <= |w|)`.

mod correspondence;
pub mod reference;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::grammar::{Grammar, NtId, RuleBody, RuleId};
use crate::table::LlTable;

pub use correspondence::{check_correspondence, compare_with_tree, expected_sets, Correspondence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParserError {
    #[error("grammar is not aligned: rule `{0}`")]
    NotAligned(String),
    #[error("table has lookahead {0}, the parser needs 1")]
    NotLl1(usize),
    #[error(
        "table entry ({nonterminal}, {lookahead}) names rule {rule}, which is not a rule for it"
    )]
    ForeignRule {
        nonterminal: String,
        lookahead: String,
        rule: RuleId,
    },
    #[error("symbol {symbol:?} at position {position} is not in the alphabet")]
    SymbolOutsideAlphabet { symbol: char, position: usize },
}

/// A pending conjunct `A v`, stored as `A` and `|v|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StackConjunct {
    pub nonterminal: NtId,
    pub tail_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    /// Sorted by nonterminal id; at most one entry per nonterminal.
    pub z: Vec<StackConjunct>,
    /// Next unread input position; `|w| + 1` once the end-of-input step ran.
    pub pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    NoTableEntry,
    TerminalMismatch,
    LengthMismatch,
    TailMismatch,
    TailConflict,
    NonemptyFinalSet,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::NoTableEntry => "no-table-entry",
            RejectReason::TerminalMismatch => "terminal-mismatch",
            RejectReason::LengthMismatch => "length-mismatch",
            RejectReason::TailMismatch => "tail-mismatch",
            RejectReason::TailConflict => "tail-conflict",
            RejectReason::NonemptyFinalSet => "nonempty-final-set",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reject {
    /// 1-based index of the failing step.
    pub step: usize,
    pub reason: RejectReason,
    pub nonterminal: NtId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Reject),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Configuration after one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub read: Option<char>,
    pub z: Vec<StackConjunct>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub verdict: Verdict,
}

impl Trace {
    /// One line per step, `step=<i> read=<sym|eps> Z={(A,len),...}`, then the
    /// verdict line.
    pub fn render(&self, g: &Grammar) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let read = s.read.map_or("eps".to_string(), |c| c.to_string());
            out.push_str(&format!(
                "step={} read={} Z={}\n",
                s.step,
                read,
                render_set(g, &s.z)
            ));
        }
        match self.verdict {
            Verdict::Accept => out.push_str("verdict=accept reason=none\n"),
            Verdict::Reject(r) => out.push_str(&format!(
                "verdict=reject reason={} step={} nonterminal={}\n",
                r.reason,
                r.step,
                g.name(r.nonterminal)
            )),
        }
        out
    }
}

/// `{(A,0),(B,2)}`, sorted by name then tail length.
pub fn render_set(g: &Grammar, z: &[StackConjunct]) -> String {
    let mut items: Vec<(&str, usize)> = z
        .iter()
        .map(|c| (g.name(c.nonterminal), c.tail_len))
        .collect();
    items.sort();
    let parts: Vec<String> = items.iter().map(|(a, l)| format!("({a},{l})")).collect();
    format!("{{{}}}", parts.join(","))
}

/// Resource counters for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunStats {
    pub steps: usize,
    /// Table lookups, spawned conjuncts and compared symbols, summed.
    pub conjunct_ops: usize,
    pub max_step_ops: usize,
    /// Largest stack set seen, including the initial one.
    pub max_stack: usize,
    pub max_tail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub verdict: Verdict,
    pub trace: Option<Trace>,
    pub stats: RunStats,
}

#[derive(Debug, Clone)]
enum Compiled {
    Terminal(Vec<char>),
    Conjunction {
        lead: char,
        parts: Vec<(NtId, Vec<char>)>,
    },
}

pub struct Parser<'g> {
    g: &'g Grammar,
    symbols: HashMap<char, usize>,
    /// `cells[a * width + s]`, where `s = 0` is end of input.
    cells: Vec<Option<RuleId>>,
    width: usize,
    rules: Vec<Compiled>,
}

/// Per-nonterminal scratch used to merge spawned conjuncts.
struct Scratch {
    tail_of: Vec<usize>,
}

const FREE: usize = usize::MAX;

impl<'g> Parser<'g> {
    pub fn new(g: &'g Grammar, t1: &LlTable) -> Result<Self, ParserError> {
        let (aligned, bad) = g.is_aligned();
        if !aligned {
            return Err(ParserError::NotAligned(g.display_rule(bad[0])));
        }
        if t1.k() != 1 {
            return Err(ParserError::NotLl1(t1.k()));
        }
        let symbols: HashMap<char, usize> = g
            .alphabet()
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i + 1))
            .collect();
        let width = symbols.len() + 1;
        let mut cells = vec![None; g.nonterminal_count() * width];
        for (a, x, r) in t1.entries() {
            if g.rule(r).lhs != a {
                return Err(ParserError::ForeignRule {
                    nonterminal: g.name(a).to_string(),
                    lookahead: crate::grammar::show_word(x),
                    rule: r,
                });
            }
            let s = match x.first() {
                None => 0,
                Some(c) => match symbols.get(c) {
                    Some(&s) => s,
                    None => continue,
                },
            };
            cells[a.0 * width + s] = Some(r);
        }
        let rules = g
            .rules()
            .iter()
            .map(|r| match &r.body {
                RuleBody::Terminal(y) => Compiled::Terminal(y.clone()),
                RuleBody::Conjunction(cs) => Compiled::Conjunction {
                    lead: cs[0].prefix[0],
                    parts: cs.iter().map(|c| (c.body, c.suffix.clone())).collect(),
                },
            })
            .collect();
        Ok(Parser {
            g,
            symbols,
            cells,
            width,
            rules,
        })
    }

    pub fn grammar(&self) -> &'g Grammar {
        self.g
    }

    pub fn init(&self, w: &[char]) -> Result<Configuration, ParserError> {
        if let Some((position, &symbol)) = w
            .iter()
            .enumerate()
            .find(|(_, c)| !self.symbols.contains_key(c))
        {
            return Err(ParserError::SymbolOutsideAlphabet { symbol, position });
        }
        Ok(Configuration {
            z: vec![StackConjunct {
                nonterminal: self.g.start(),
                tail_len: 0,
            }],
            pos: 0,
        })
    }

    fn scratch(&self) -> Scratch {
        Scratch {
            tail_of: vec![FREE; self.g.nonterminal_count()],
        }
    }

    /// One step from `c`, which must not be past the end-of-input step.
    pub fn step(&self, c: &Configuration, w: &[char]) -> Result<Configuration, Reject> {
        self.step_with(c, w, &mut self.scratch(), &mut 0)
    }

    fn step_with(
        &self,
        c: &Configuration,
        w: &[char],
        scratch: &mut Scratch,
        ops: &mut usize,
    ) -> Result<Configuration, Reject> {
        let n = w.len();
        assert!(c.pos <= n, "step past the end of input");
        let step = c.pos + 1;
        let read = w.get(c.pos).copied();
        let s = read.map_or(0, |ch| self.symbols[&ch]);
        let mut next: Vec<StackConjunct> = Vec::new();
        let reject = |reason, nonterminal| Reject {
            step,
            reason,
            nonterminal,
        };
        let mut outcome = Ok(());
        for sc in &c.z {
            let a = sc.nonterminal;
            let l = sc.tail_len;
            *ops += 1;
            let Some(r) = self.cells[a.0 * self.width + s] else {
                outcome = Err(reject(RejectReason::NoTableEntry, a));
                break;
            };
            match &self.rules[r] {
                Compiled::Terminal(y) => {
                    *ops += y.len();
                    if c.pos + y.len() + l != n {
                        outcome = Err(reject(RejectReason::LengthMismatch, a));
                        break;
                    }
                    if w[c.pos..c.pos + y.len()] != y[..] {
                        outcome = Err(reject(RejectReason::TerminalMismatch, a));
                        break;
                    }
                }
                Compiled::Conjunction { lead, parts } => {
                    if read != Some(*lead) {
                        outcome = Err(reject(RejectReason::TerminalMismatch, a));
                        break;
                    }
                    for (b, v) in parts {
                        *ops += 1 + v.len();
                        let new_len = l + v.len();
                        // the B-subtree must start at pos + 1 and end before the tail
                        if c.pos + 1 + new_len > n {
                            outcome = Err(reject(RejectReason::LengthMismatch, *b));
                            break;
                        }
                        if w[n - new_len..n - l] != v[..] {
                            outcome = Err(reject(RejectReason::TailMismatch, *b));
                            break;
                        }
                        match scratch.tail_of[b.0] {
                            FREE => {
                                scratch.tail_of[b.0] = new_len;
                                next.push(StackConjunct {
                                    nonterminal: *b,
                                    tail_len: new_len,
                                });
                            }
                            t if t == new_len => {}
                            _ => {
                                outcome = Err(reject(RejectReason::TailConflict, *b));
                                break;
                            }
                        }
                    }
                    if outcome.is_err() {
                        break;
                    }
                }
            }
        }
        for sc in &next {
            scratch.tail_of[sc.nonterminal.0] = FREE;
        }
        outcome?;
        if read.is_none() && !next.is_empty() {
            return Err(reject(RejectReason::NonemptyFinalSet, next[0].nonterminal));
        }
        next.sort();
        Ok(Configuration {
            z: next,
            pos: c.pos + 1,
        })
    }

    /// Runs all `|w| + 1` steps, or up to the first rejection.
    pub fn run(&self, w: &[char], emit_trace: bool) -> Result<RunOutput, ParserError> {
        let mut c = self.init(w)?;
        let mut scratch = self.scratch();
        let mut stats = RunStats {
            max_stack: c.z.len(),
            ..RunStats::default()
        };
        let mut steps = Vec::new();
        let mut verdict = Verdict::Accept;
        while c.pos <= w.len() {
            let mut ops = 0;
            let read = w.get(c.pos).copied();
            let outcome = self.step_with(&c, w, &mut scratch, &mut ops);
            stats.steps += 1;
            stats.conjunct_ops += ops;
            stats.max_step_ops = stats.max_step_ops.max(ops);
            match outcome {
                Ok(next) => {
                    stats.max_stack = stats.max_stack.max(next.z.len());
                    if let Some(t) = next.z.iter().map(|sc| sc.tail_len).max() {
                        stats.max_tail = stats.max_tail.max(t);
                    }
                    if emit_trace {
                        steps.push(TraceStep {
                            step: c.pos + 1,
                            read,
                            z: next.z.clone(),
                        });
                    }
                    c = next;
                }
                Err(r) => {
                    verdict = Verdict::Reject(r);
                    break;
                }
            }
        }
        let trace = emit_trace.then_some(Trace { steps, verdict });
        Ok(RunOutput {
            verdict,
            trace,
            stats,
        })
    }

    /// Recognizes `w`; symbols outside the alphabet reject.
    pub fn accepts(&self, w: &[char]) -> bool {
        self.run(w, false).is_ok_and(|o| o.verdict.is_accept())
    }
}
