//! Grammar data model: terminals, nonterminals, conjuncts, rules and the
//! structural checks (aligned form, left recursion) the transformations rely
//! on.

mod format;
mod tree;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub use format::{parse_grammar, serialize_grammar, FormatError};
pub use tree::{check_tree, ParseTree, TreeNode};

/// A string over the terminal alphabet. Terminals are single `char`s.
pub type Word = Vec<char>;

/// Convenience conversion from `&str`.
pub fn word(s: &str) -> Word {
    s.chars().collect()
}

/// Renders a terminal string, `eps` for the empty one.
pub fn show_word(w: &[char]) -> String {
    if w.is_empty() {
        "eps".to_string()
    } else {
        w.iter().collect()
    }
}

/// The prefix of `s` of length `min(j, |s|)`.
pub fn first_k(s: &[char], j: usize) -> &[char] {
    &s[..j.min(s.len())]
}

/// Index of a nonterminal inside its grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NtId(pub usize);

/// Index of a rule inside its grammar.
pub type RuleId = usize;

/// One conjunct `u B v` of a conjunctive rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conjunct {
    pub prefix: Word,
    pub body: NtId,
    pub suffix: Word,
}

impl Conjunct {
    pub fn new(prefix: Word, body: NtId, suffix: Word) -> Self {
        Conjunct {
            prefix,
            body,
            suffix,
        }
    }

    /// Left-recursive conjuncts start with their nonterminal.
    pub fn is_left_recursive(&self) -> bool {
        self.prefix.is_empty()
    }

    /// Number of terminals around the nonterminal.
    pub fn context_len(&self) -> usize {
        self.prefix.len() + self.suffix.len()
    }
}

/// Right-hand side of a rule: either a bare terminal string `A -> y`, or a
/// nonempty conjunction `u1 B1 v1 & ... & um Bm vm`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleBody {
    Terminal(Word),
    Conjunction(Vec<Conjunct>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: RuleId,
    pub lhs: NtId,
    pub body: RuleBody,
}

impl Rule {
    /// Indices of conjuncts of the form `B t`. Empty for terminal rules.
    pub fn left_recursive_conjuncts(&self) -> Vec<usize> {
        match &self.body {
            RuleBody::Terminal(_) => Vec::new(),
            RuleBody::Conjunction(cs) => cs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.is_left_recursive())
                .map(|(i, _)| i)
                .collect(),
        }
    }

    pub fn is_left_recursive(&self) -> bool {
        !self.left_recursive_conjuncts().is_empty()
    }

    /// `A -> y`, or `A -> a C1 v1 & ... & a Cm vm` with one shared leading
    /// terminal.
    pub fn is_aligned(&self) -> bool {
        match &self.body {
            RuleBody::Terminal(_) => true,
            RuleBody::Conjunction(cs) => {
                let lead = &cs[0].prefix;
                lead.len() == 1 && cs.iter().all(|c| &c.prefix == lead)
            }
        }
    }

    /// The shared leading terminal of an aligned conjunctive rule.
    pub fn leading_terminal(&self) -> Option<char> {
        match &self.body {
            RuleBody::Conjunction(cs) if self.is_aligned() => Some(cs[0].prefix[0]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("lookahead k must be positive")]
    ZeroLookahead,
    #[error("no start symbol")]
    NoStart,
    #[error("terminal {0:?} is not in the alphabet")]
    UnknownTerminal(char),
    #[error("rule for {0} has an empty conjunction")]
    EmptyConjunction(String),
    #[error("invalid nonterminal name {0:?}")]
    InvalidName(String),
    #[error("invalid terminal {0:?}")]
    InvalidTerminal(char),
}

/// Characters that carry meaning in the grammar file format and therefore
/// cannot be terminals.
pub(crate) fn is_reserved_char(c: char) -> bool {
    c.is_whitespace() || matches!(c, '|' | '&' | '#' | '=')
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if name == "eps" || name.contains("->") || name.chars().any(is_reserved_char) {
        return false;
    }
    // single-character names would be indistinguishable from terminals
    chars.next().is_some() || first.is_ascii_uppercase()
}

/// A linear conjunctive grammar together with its lookahead parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    alphabet: Vec<char>,
    names: Vec<String>,
    rules: Vec<Rule>,
    by_lhs: Vec<Vec<RuleId>>,
    start: NtId,
    k: usize,
}

impl Grammar {
    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn has_terminal(&self, c: char) -> bool {
        self.alphabet.binary_search(&c).is_ok()
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = NtId> + '_ {
        (0..self.names.len()).map(NtId)
    }

    pub fn name(&self, a: NtId) -> &str {
        &self.names[a.0]
    }

    pub fn lookup_name(&self, name: &str) -> Option<NtId> {
        self.names.iter().position(|n| n == name).map(NtId)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: RuleId) -> &Rule {
        &self.rules[id]
    }

    pub fn rules_for(&self, a: NtId) -> impl Iterator<Item = &Rule> + '_ {
        self.by_lhs[a.0].iter().map(move |&r| &self.rules[r])
    }

    pub fn start(&self) -> NtId {
        self.start
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Same grammar with a different lookahead annotation.
    pub fn with_k(mut self, k: usize) -> Result<Self, GrammarError> {
        if k == 0 {
            return Err(GrammarError::ZeroLookahead);
        }
        self.k = k;
        Ok(self)
    }

    /// Total number of symbols on all right-hand sides plus one per rule.
    pub fn size(&self) -> usize {
        self.rules
            .iter()
            .map(|r| match &r.body {
                RuleBody::Terminal(y) => 1 + y.len(),
                RuleBody::Conjunction(cs) => {
                    1 + cs.iter().map(|c| c.context_len() + 1).sum::<usize>()
                }
            })
            .sum()
    }

    /// Verdict plus the ids of every rule violating the aligned form.
    pub fn is_aligned(&self) -> (bool, Vec<RuleId>) {
        let bad: Vec<RuleId> = self
            .rules
            .iter()
            .filter(|r| !r.is_aligned())
            .map(|r| r.id)
            .collect();
        (bad.is_empty(), bad)
    }

    pub fn left_recursive_rules(&self) -> Vec<RuleId> {
        self.rules
            .iter()
            .filter(|r| r.is_left_recursive())
            .map(|r| r.id)
            .collect()
    }

    /// Nonterminals reachable from the start symbol, in discovery order.
    pub fn reachable(&self) -> Vec<NtId> {
        let mut seen = vec![false; self.names.len()];
        let mut order = vec![self.start];
        seen[self.start.0] = true;
        let mut next = 0;
        while next < order.len() {
            let a = order[next];
            next += 1;
            for r in self.rules_for(a) {
                if let RuleBody::Conjunction(cs) = &r.body {
                    for c in cs {
                        if !seen[c.body.0] {
                            seen[c.body.0] = true;
                            order.push(c.body);
                        }
                    }
                }
            }
        }
        order
    }

    /// Renders one rule in the surface syntax, `A -> a B c & D`.
    pub fn display_rule(&self, id: RuleId) -> String {
        let rule = &self.rules[id];
        format!(
            "{} -> {}",
            self.name(rule.lhs),
            self.display_body(&rule.body)
        )
    }

    pub fn display_body(&self, body: &RuleBody) -> String {
        match body {
            RuleBody::Terminal(y) if y.is_empty() => "eps".to_string(),
            RuleBody::Terminal(y) => join_chars(y),
            RuleBody::Conjunction(cs) => cs
                .iter()
                .map(|c| self.display_conjunct(c))
                .collect::<Vec<_>>()
                .join(" & "),
        }
    }

    pub fn display_conjunct(&self, c: &Conjunct) -> String {
        let mut parts: Vec<String> = c.prefix.iter().map(|t| t.to_string()).collect();
        parts.push(self.name(c.body).to_string());
        parts.extend(c.suffix.iter().map(|t| t.to_string()));
        parts.join(" ")
    }

    /// Builder pre-populated with this grammar's alphabet, lookahead and
    /// nonterminal names (but no rules).
    pub fn empty_like(&self) -> GrammarBuilder {
        let mut b = GrammarBuilder::new(self.k);
        b.alphabet(self.alphabet.iter().copied());
        for name in &self.names {
            b.nonterminal(name);
        }
        b.set_start(self.start);
        b
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_grammar(self))
    }
}

fn join_chars(y: &[char]) -> String {
    y.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Incremental construction of a [`Grammar`].
///
/// `build` drops rules that mention a nonterminal without rules (they define
/// the empty set), repeating until stable, and renumbers nonterminals by
/// first appearance as a left-hand side so that equal rule lists always give
/// equal grammars.
#[derive(Debug, Clone)]
pub struct GrammarBuilder {
    alphabet: BTreeSet<char>,
    names: Vec<String>,
    index: HashMap<String, NtId>,
    rules: Vec<(NtId, RuleBody)>,
    seen: HashSet<(NtId, RuleBody)>,
    start: Option<NtId>,
    k: usize,
}

impl GrammarBuilder {
    pub fn new(k: usize) -> Self {
        GrammarBuilder {
            alphabet: BTreeSet::new(),
            names: Vec::new(),
            index: HashMap::new(),
            rules: Vec::new(),
            seen: HashSet::new(),
            start: None,
            k,
        }
    }

    pub fn alphabet(&mut self, symbols: impl IntoIterator<Item = char>) -> &mut Self {
        self.alphabet.extend(symbols);
        self
    }

    /// Interns `name`, returning its id.
    pub fn nonterminal(&mut self, name: &str) -> NtId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = NtId(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn name(&self, a: NtId) -> &str {
        &self.names[a.0]
    }

    pub fn set_start(&mut self, a: NtId) -> &mut Self {
        self.start = Some(a);
        self
    }

    pub fn rule(&mut self, lhs: NtId, body: RuleBody) -> &mut Self {
        self.seen.insert((lhs, body.clone()));
        self.rules.push((lhs, body));
        self
    }

    /// Adds the rule unless an identical one is already present.
    pub fn rule_once(&mut self, lhs: NtId, body: RuleBody) -> bool {
        if !self.seen.insert((lhs, body.clone())) {
            return false;
        }
        self.rules.push((lhs, body));
        true
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn build(self) -> Result<Grammar, GrammarError> {
        if self.k == 0 {
            return Err(GrammarError::ZeroLookahead);
        }
        let start = self.start.ok_or(GrammarError::NoStart)?;
        for name in &self.names {
            if !is_valid_name(name) {
                return Err(GrammarError::InvalidName(name.clone()));
            }
        }
        if let Some(&c) = self.alphabet.iter().find(|&&c| is_reserved_char(c)) {
            return Err(GrammarError::InvalidTerminal(c));
        }
        for (lhs, body) in &self.rules {
            let terminals: Box<dyn Iterator<Item = &char>> = match body {
                RuleBody::Terminal(y) => Box::new(y.iter()),
                RuleBody::Conjunction(cs) => {
                    if cs.is_empty() {
                        return Err(GrammarError::EmptyConjunction(self.names[lhs.0].clone()));
                    }
                    Box::new(cs.iter().flat_map(|c| c.prefix.iter().chain(&c.suffix)))
                }
            };
            for &t in terminals {
                if !self.alphabet.contains(&t) {
                    return Err(GrammarError::UnknownTerminal(t));
                }
            }
        }

        // drop rules over nonterminals that have no rules at all
        let mut rules = self.rules;
        loop {
            let mut has_rule = vec![false; self.names.len()];
            for (lhs, _) in &rules {
                has_rule[lhs.0] = true;
            }
            let before = rules.len();
            rules.retain(|(_, body)| match body {
                RuleBody::Terminal(_) => true,
                RuleBody::Conjunction(cs) => cs.iter().all(|c| has_rule[c.body.0]),
            });
            if rules.len() == before {
                break;
            }
        }

        // canonical numbering: left-hand sides in rule order, then the start
        let mut remap: Vec<Option<NtId>> = vec![None; self.names.len()];
        let mut names = Vec::new();
        let mut assign = |old: NtId, names: &mut Vec<String>| {
            if remap[old.0].is_none() {
                remap[old.0] = Some(NtId(names.len()));
                names.push(self.names[old.0].clone());
            }
        };
        for (lhs, _) in &rules {
            assign(*lhs, &mut names);
        }
        assign(start, &mut names);
        let map = |a: NtId| remap[a.0].expect("every referenced nonterminal has a rule");

        let rules: Vec<Rule> = rules
            .into_iter()
            .enumerate()
            .map(|(id, (lhs, body))| Rule {
                id,
                lhs: map(lhs),
                body: match body {
                    RuleBody::Terminal(y) => RuleBody::Terminal(y),
                    RuleBody::Conjunction(cs) => RuleBody::Conjunction(
                        cs.into_iter()
                            .map(|c| Conjunct::new(c.prefix, map(c.body), c.suffix))
                            .collect(),
                    ),
                },
            })
            .collect();
        let mut by_lhs = vec![Vec::new(); names.len()];
        for r in &rules {
            by_lhs[r.lhs.0].push(r.id);
        }
        Ok(Grammar {
            alphabet: self.alphabet.into_iter().collect(),
            names,
            rules,
            by_lhs,
            start: map(start),
            k: self.k,
        })
    }
}
