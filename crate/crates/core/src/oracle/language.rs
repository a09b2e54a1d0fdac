//! Membership of every word in `Σ^{≤L}` at once. Words are indexed in
//! shortlex order and every substring of such a word is a shorter word of
//! the same set, so one bitset of deriving nonterminals per word, filled
//! shortest first, answers all substring queries by lookup.

use rayon::prelude::*;

use crate::grammar::{Grammar, NtId, RuleBody, Word};
use crate::words;

/// A conjunct with its context given as alphabet indices; `None` when the
/// context uses a symbol outside the alphabet.
struct Coded {
    prefix: Vec<usize>,
    body: NtId,
    suffix: Vec<usize>,
}

enum CodedBody {
    Terminal(Vec<usize>),
    Conjunction(Vec<Coded>),
}

struct CodedRule {
    lhs: NtId,
    body: CodedBody,
}

pub struct LanguageTable {
    alphabet: Vec<char>,
    max_len: usize,
    start: NtId,
    /// `offsets[l]`: index of the first word of length `l`.
    offsets: Vec<usize>,
    stride: usize,
    bits: Vec<u64>,
}

fn code(alphabet: &[char], s: &[char]) -> Option<Vec<usize>> {
    s.iter().map(|c| alphabet.binary_search(c).ok()).collect()
}

fn value(base: usize, digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

impl LanguageTable {
    /// `alphabet` must be sorted and free of duplicates.
    pub fn new(g: &Grammar, alphabet: &[char], max_len: usize) -> Self {
        debug_assert!(alphabet.windows(2).all(|p| p[0] < p[1]));
        let base = alphabet.len();
        let max_len = if base == 0 { 0 } else { max_len };
        let mut offsets = vec![0];
        for l in 0..=max_len {
            offsets.push(offsets[l] + words::count_of_len(base, l));
        }
        let stride = g.nonterminal_count().div_ceil(64).max(1);
        let mut bits = vec![0u64; offsets[max_len + 1] * stride];

        let mut direct = Vec::new();
        let mut chained = Vec::new();
        for r in g.rules() {
            let body = match &r.body {
                RuleBody::Terminal(y) => code(alphabet, y).map(CodedBody::Terminal),
                RuleBody::Conjunction(cs) => cs
                    .iter()
                    .map(|c| {
                        Some(Coded {
                            prefix: code(alphabet, &c.prefix)?,
                            body: c.body,
                            suffix: code(alphabet, &c.suffix)?,
                        })
                    })
                    .collect::<Option<Vec<_>>>()
                    .map(CodedBody::Conjunction),
            };
            let Some(body) = body else { continue };
            let same_span = matches!(&body, CodedBody::Conjunction(cs)
                if cs.iter().any(|c| c.prefix.is_empty() && c.suffix.is_empty()));
            let rule = CodedRule { lhs: r.lhs, body };
            if same_span {
                chained.push(rule);
            } else {
                direct.push(rule);
            }
        }

        for len in 0..=max_len {
            let (done, rest) = bits.split_at_mut(offsets[len] * stride);
            let current = &mut rest[..(offsets[len + 1] - offsets[len]) * stride];
            let done: &[u64] = done;
            let offsets = &offsets;
            current
                .par_chunks_mut(stride)
                .enumerate()
                .for_each(|(idx, set)| {
                    let mut digits = vec![0usize; len];
                    let mut rem = idx;
                    for d in digits.iter_mut().rev() {
                        *d = rem % base.max(1);
                        rem /= base.max(1);
                    }
                    let shorter = |a: NtId, from: usize, to: usize| {
                        let at = offsets[to - from] + value(base, &digits[from..to]);
                        done[at * stride + a.0 / 64] >> (a.0 % 64) & 1 == 1
                    };
                    let holds = |rule: &CodedRule, set: &[u64]| match &rule.body {
                        CodedBody::Terminal(y) => *y == digits,
                        CodedBody::Conjunction(cs) => cs.iter().all(|c| {
                            let ctx = c.prefix.len() + c.suffix.len();
                            if ctx == 0 {
                                set[c.body.0 / 64] >> (c.body.0 % 64) & 1 == 1
                            } else {
                                ctx <= len
                                    && digits.starts_with(&c.prefix)
                                    && digits.ends_with(&c.suffix)
                                    && shorter(c.body, c.prefix.len(), len - c.suffix.len())
                            }
                        }),
                    };
                    let mark = |set: &mut [u64], a: NtId| set[a.0 / 64] |= 1 << (a.0 % 64);
                    let has = |set: &[u64], a: NtId| set[a.0 / 64] >> (a.0 % 64) & 1 == 1;
                    for r in &direct {
                        if !has(set, r.lhs) && holds(r, set) {
                            mark(set, r.lhs);
                        }
                    }
                    loop {
                        let mut changed = false;
                        for r in &chained {
                            if !has(set, r.lhs) && holds(r, set) {
                                mark(set, r.lhs);
                                changed = true;
                            }
                        }
                        if !changed {
                            break;
                        }
                    }
                });
        }

        LanguageTable {
            alphabet: alphabet.to_vec(),
            max_len,
            start: g.start(),
            offsets,
            stride,
            bits,
        }
    }

    /// Shortlex index of `w`, if it is covered by the table.
    pub fn index(&self, w: &[char]) -> Option<usize> {
        if w.len() > self.max_len {
            return None;
        }
        let digits = code(&self.alphabet, w)?;
        Some(self.offsets[w.len()] + value(self.alphabet.len(), &digits))
    }

    pub fn word_count(&self) -> usize {
        self.offsets[self.max_len + 1]
    }

    /// The word with shortlex index `idx`.
    pub fn word(&self, idx: usize) -> Word {
        let len = self.offsets.partition_point(|&o| o <= idx) - 1;
        words::word_at(&self.alphabet, len, idx - self.offsets[len])
    }

    fn bit(&self, idx: usize, a: NtId) -> bool {
        self.bits[idx * self.stride + a.0 / 64] >> (a.0 % 64) & 1 == 1
    }

    /// Whether `a` derives `w`. Words outside the table are reported as
    /// non-members.
    pub fn derives(&self, a: NtId, w: &[char]) -> bool {
        self.index(w).is_some_and(|i| self.bit(i, a))
    }

    pub fn contains(&self, w: &[char]) -> bool {
        self.derives(self.start, w)
    }

    /// Whether the start symbol derives the word with index `idx`.
    pub fn contains_index(&self, idx: usize) -> bool {
        self.bit(idx, self.start)
    }

    /// Members of the start symbol, shortlex order.
    pub fn members(&self) -> Vec<Word> {
        (0..self.word_count())
            .filter(|&i| self.contains_index(i))
            .map(|i| self.word(i))
            .collect()
    }
}
