//! Line-oriented grammar file format.
//!
//! ```text
//! k = 1
//! alphabet = a b c
//! start = S
//! S -> A & C          # conjunction
//! A -> a A | D        # each alternative is a separate rule
//! D -> b D c | eps
//! ```

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{
    is_reserved_char, is_valid_name, Conjunct, Grammar, GrammarBuilder, GrammarError, NtId,
    RuleBody,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: undeclared symbol `{symbol}`")]
    Undeclared {
        line: usize,
        col: usize,
        symbol: String,
    },
    #[error("{line}: duplicate `{directive}` directive")]
    Duplicate { line: usize, directive: String },
    #[error("invalid grammar: {0}")]
    Grammar(#[from] GrammarError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Arrow,
    Bar,
    Amp,
    Sym(String),
}

/// Tokens of one line with their 1-based columns. Comments are stripped.
fn tokenize(line: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let col = i + 1;
        match c {
            '|' => {
                out.push((col, Tok::Bar));
                i += 1;
            }
            '&' => {
                out.push((col, Tok::Amp));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((col, Tok::Arrow));
                i += 2;
            }
            _ => {
                let mut s = String::new();
                while i < chars.len() {
                    let c = chars[i];
                    if c.is_whitespace() || matches!(c, '|' | '&' | '#') {
                        break;
                    }
                    if c == '-' && chars.get(i + 1) == Some(&'>') {
                        break;
                    }
                    s.push(c);
                    i += 1;
                }
                out.push((col, Tok::Sym(s)));
            }
        }
    }
    out
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    }
}

struct RuleLine {
    line: usize,
    lhs: String,
    alts: Vec<Vec<Vec<(usize, String)>>>,
}

/// Parses a grammar document. Rule ids follow source order, one per `|`
/// alternative.
pub fn parse_grammar(text: &str) -> Result<Grammar, FormatError> {
    let mut k: Option<usize> = None;
    let mut start: Option<(usize, usize, String)> = None;
    let mut alphabet: Option<BTreeSet<char>> = None;
    let mut rule_lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        if toks.iter().any(|(_, t)| *t == Tok::Arrow) {
            rule_lines.push(parse_rule_line(line, toks)?);
            continue;
        }
        let body = strip_comment(raw);
        let Some(eq) = body.find('=') else {
            return Err(FormatError::Syntax {
                line,
                col: toks[0].0,
                msg: "expected `->` or a `key = value` header".into(),
            });
        };
        let key = body[..eq].trim();
        let value = body[eq + 1..].trim();
        let value_col = body[..eq + 1].chars().count() + 1;
        match key {
            "k" => {
                if k.is_some() {
                    return Err(FormatError::Duplicate {
                        line,
                        directive: "k".into(),
                    });
                }
                match value.parse::<usize>() {
                    Ok(v) if v > 0 => k = Some(v),
                    _ => {
                        return Err(FormatError::Syntax {
                            line,
                            col: value_col,
                            msg: format!("k must be a positive integer, got `{value}`"),
                        })
                    }
                }
            }
            "start" => {
                if start.is_some() {
                    return Err(FormatError::Duplicate {
                        line,
                        directive: "start".into(),
                    });
                }
                if value.is_empty() || value.split_whitespace().count() != 1 {
                    return Err(FormatError::Syntax {
                        line,
                        col: value_col,
                        msg: "start expects one nonterminal".into(),
                    });
                }
                start = Some((line, value_col, value.to_string()));
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(FormatError::Duplicate {
                        line,
                        directive: "alphabet".into(),
                    });
                }
                let mut set = BTreeSet::new();
                for sym in value.split_whitespace() {
                    let mut cs = sym.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) if !is_reserved_char(c) => {
                            set.insert(c);
                        }
                        _ => {
                            return Err(FormatError::Syntax {
                                line,
                                col: value_col,
                                msg: format!("alphabet symbols are single characters, got `{sym}`"),
                            })
                        }
                    }
                }
                alphabet = Some(set);
            }
            other => {
                return Err(FormatError::Syntax {
                    line,
                    col: 1,
                    msg: format!("unknown directive `{other}`"),
                })
            }
        }
    }

    let mut b = GrammarBuilder::new(k.unwrap_or(1));
    let mut declared: HashMap<String, NtId> = HashMap::new();
    for rl in &rule_lines {
        let bad_single = rl.lhs.chars().count() == 1
            && alphabet
                .as_ref()
                .is_some_and(|a| a.contains(&rl.lhs.chars().next().unwrap()));
        if !is_valid_name(&rl.lhs) || bad_single {
            return Err(FormatError::Syntax {
                line: rl.line,
                col: 1,
                msg: format!("`{}` is not a valid nonterminal name", rl.lhs),
            });
        }
        let id = b.nonterminal(&rl.lhs);
        declared.insert(rl.lhs.clone(), id);
    }
    let start_id = match &start {
        Some((line, col, name)) => {
            if !is_valid_name(name) {
                return Err(FormatError::Syntax {
                    line: *line,
                    col: *col,
                    msg: format!("`{name}` is not a valid nonterminal name"),
                });
            }
            let id = b.nonterminal(name);
            declared.insert(name.clone(), id);
            id
        }
        None => match rule_lines.first() {
            Some(rl) => declared[&rl.lhs],
            None => {
                return Err(FormatError::Syntax {
                    line: 1,
                    col: 1,
                    msg: "grammar has no rules and no start symbol".into(),
                })
            }
        },
    };
    b.set_start(start_id);

    let mut used_terminals = BTreeSet::new();
    for rl in &rule_lines {
        let lhs = declared[&rl.lhs];
        for alt in &rl.alts {
            let body = resolve_alt(rl.line, alt, &declared, alphabet.as_ref())?;
            match &body {
                RuleBody::Terminal(y) => used_terminals.extend(y.iter().copied()),
                RuleBody::Conjunction(cs) => {
                    for c in cs {
                        used_terminals.extend(c.prefix.iter().chain(&c.suffix).copied());
                    }
                }
            }
            b.rule(lhs, body);
        }
    }
    b.alphabet(alphabet.unwrap_or(used_terminals));
    Ok(b.build()?)
}

fn parse_rule_line(line: usize, toks: Vec<(usize, Tok)>) -> Result<RuleLine, FormatError> {
    let mut it = toks.into_iter();
    let lhs = match (it.next(), it.next()) {
        (Some((_, Tok::Sym(name))), Some((_, Tok::Arrow))) => name,
        (Some((col, _)), _) => {
            return Err(FormatError::Syntax {
                line,
                col,
                msg: "rule must start with `<Nonterminal> ->`".into(),
            })
        }
        (None, _) => unreachable!("rule lines contain an arrow"),
    };
    let mut alts = vec![vec![vec![]]];
    for (col, tok) in it {
        match tok {
            Tok::Sym(s) => alts.last_mut().unwrap().last_mut().unwrap().push((col, s)),
            Tok::Amp => alts.last_mut().unwrap().push(vec![]),
            Tok::Bar => alts.push(vec![vec![]]),
            Tok::Arrow => {
                return Err(FormatError::Syntax {
                    line,
                    col,
                    msg: "unexpected `->`".into(),
                })
            }
        }
    }
    for alt in &alts {
        if alt.iter().any(|c| c.is_empty()) {
            return Err(FormatError::Syntax {
                line,
                col: 1,
                msg: "empty alternative or conjunct (write `eps` for the empty string)".into(),
            });
        }
    }
    Ok(RuleLine { line, lhs, alts })
}

enum Sym {
    T(char),
    N(NtId),
    Eps,
}

fn classify(
    line: usize,
    col: usize,
    s: &str,
    declared: &HashMap<String, NtId>,
    alphabet: Option<&BTreeSet<char>>,
) -> Result<Sym, FormatError> {
    if s == "eps" {
        return Ok(Sym::Eps);
    }
    if let Some(&id) = declared.get(s) {
        return Ok(Sym::N(id));
    }
    let mut cs = s.chars();
    if let (Some(c), None) = (cs.next(), cs.next()) {
        let is_terminal = match alphabet {
            Some(a) => a.contains(&c),
            None => !c.is_ascii_uppercase() && !is_reserved_char(c),
        };
        if is_terminal {
            return Ok(Sym::T(c));
        }
    }
    Err(FormatError::Undeclared {
        line,
        col,
        symbol: s.to_string(),
    })
}

fn resolve_alt(
    line: usize,
    alt: &[Vec<(usize, String)>],
    declared: &HashMap<String, NtId>,
    alphabet: Option<&BTreeSet<char>>,
) -> Result<RuleBody, FormatError> {
    if let [conj] = alt {
        if let [(col, s)] = conj.as_slice() {
            if let Sym::Eps = classify(line, *col, s, declared, alphabet)? {
                return Ok(RuleBody::Terminal(vec![]));
            }
        }
    }
    let mut conjuncts = Vec::new();
    let mut terminal_only = None;
    for conj in alt {
        let mut prefix = Vec::new();
        let mut suffix = Vec::new();
        let mut body: Option<NtId> = None;
        for (col, s) in conj {
            match classify(line, *col, s, declared, alphabet)? {
                Sym::Eps => {
                    return Err(FormatError::Syntax {
                        line,
                        col: *col,
                        msg: "`eps` must stand alone".into(),
                    })
                }
                Sym::T(c) if body.is_none() => prefix.push(c),
                Sym::T(c) => suffix.push(c),
                Sym::N(id) if body.is_none() => body = Some(id),
                Sym::N(_) => {
                    return Err(FormatError::Syntax {
                        line,
                        col: *col,
                        msg: "a conjunct holds at most one nonterminal".into(),
                    })
                }
            }
        }
        match body {
            Some(b) => conjuncts.push(Conjunct::new(prefix, b, suffix)),
            None => terminal_only = Some((conj[0].0, prefix)),
        }
    }
    match terminal_only {
        Some((_, y)) if alt.len() == 1 => Ok(RuleBody::Terminal(y)),
        Some((col, _)) => Err(FormatError::Syntax {
            line,
            col,
            msg: "a terminal-only conjunct cannot be conjoined with others".into(),
        }),
        None => Ok(RuleBody::Conjunction(conjuncts)),
    }
}

/// Serializes a grammar so that [`parse_grammar`] gives it back unchanged.
/// Consecutive rules with the same left-hand side share one line.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = String::new();
    out.push_str(&format!("k = {}\n", g.k()));
    out.push_str("alphabet =");
    for c in g.alphabet() {
        out.push(' ');
        out.push(*c);
    }
    out.push('\n');
    out.push_str(&format!("start = {}\n", g.name(g.start())));
    let mut i = 0;
    let rules = g.rules();
    while i < rules.len() {
        let lhs = rules[i].lhs;
        let mut alts = vec![g.display_body(&rules[i].body)];
        i += 1;
        while i < rules.len() && rules[i].lhs == lhs {
            alts.push(g.display_body(&rules[i].body));
            i += 1;
        }
        out.push_str(&format!("{} -> {}\n", g.name(lhs), alts.join(" | ")));
    }
    out
}
