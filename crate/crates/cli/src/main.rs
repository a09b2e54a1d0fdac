//! `conjll`: command-line front end for LL(k) linear conjunctive grammars.
//!
//! Exit codes: 0 accept/equal/ok, 1 reject/unequal, 2 usage or format
//! error, 3 table conflict or transformation error.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use conjll::grammar::show_word;
use conjll::oracle::{union_alphabet, LanguageTable, Oracle, OracleError, DEFAULT_TREE_CAP};
use conjll::parser::{Parser as StackParser, Verdict};
use conjll::table::{infer_table, load_table, store_table, Inference};
use conjll::transform::{run_pipeline, short_rule_uses, Stage};
use conjll::{parse_grammar, serialize_grammar, Grammar};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const CONFLICT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "conjll",
    version,
    about = "LL(k) linear conjunctive grammar toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report: aligned form, left recursion, optional short-rule scan.
    Check {
        grammar: PathBuf,
        /// Scan for short rules at this lookahead (needs --max-len too).
        #[arg(long, requires = "max_len")]
        k: Option<usize>,
        #[arg(long, requires = "k")]
        max_len: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TREE_CAP)]
        tree_cap: usize,
    },
    /// Infers an LL(k) table from member strings up to a bound.
    InferTable {
        grammar: PathBuf,
        #[command(flatten)]
        bound: Bound,
        /// Output file; standard output if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Runs the transformation pipeline up to a stage.
    Transform {
        grammar: PathBuf,
        #[arg(long, default_value = "full", value_parser = parse_stage)]
        stage: Stage,
        #[arg(long)]
        k: Option<usize>,
        /// Member-string bound for every table inference [default: 2k + 8].
        #[arg(long)]
        infer_bound: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TREE_CAP)]
        tree_cap: usize,
        /// Grammar output file; the table and manifest go next to it with
        /// `.table` and `.manifest` appended. Standard output if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Runs the stack-set LL(1) parser.
    Parse {
        grammar: PathBuf,
        #[arg(long)]
        table: PathBuf,
        #[command(flatten)]
        input: Input,
        /// Writes the step trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Brute-force membership, parse trees and language listing.
    Oracle {
        grammar: PathBuf,
        #[command(flatten)]
        input: OptionalInput,
        /// Prints the parse tree of each member.
        #[arg(long)]
        tree: bool,
        /// Prints the number of parse trees, up to --tree-cap.
        #[arg(long)]
        count_trees: bool,
        #[arg(long, default_value_t = DEFAULT_TREE_CAP)]
        tree_cap: usize,
        /// Lists every member of length at most this bound.
        #[arg(long, conflicts_with_all = ["input", "stdin"])]
        enumerate: Option<usize>,
    },
    /// Compares two languages on every string up to a length.
    Diff {
        a: PathBuf,
        b: PathBuf,
        /// [default: 2k + 8 for the larger k]
        #[arg(long)]
        max_len: Option<usize>,
    },
}

#[derive(Args)]
struct Bound {
    /// Lookahead length [default: the grammar's k].
    #[arg(long)]
    k: Option<usize>,
    /// Member-string bound [default: 2k + 8].
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TREE_CAP)]
    tree_cap: usize,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Input string; symbols are single characters.
    input: Option<String>,
    /// Reads one input string per line.
    #[arg(long)]
    stdin: bool,
}

#[derive(Args)]
struct OptionalInput {
    #[arg(conflicts_with = "stdin")]
    input: Option<String>,
    #[arg(long)]
    stdin: bool,
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    Stage::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Stage::ALL.iter().map(|s| s.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

/// A failed command: exit code and message for the error stream.
struct Fail(u8, String);

type Res = Result<u8, Fail>;

fn usage(msg: impl Into<String>) -> Fail {
    Fail(USAGE, msg.into())
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_grammar(path: &Path) -> Result<Grammar, Fail> {
    parse_grammar(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn default_bound(k: usize) -> usize {
    2 * k + 8
}

fn inputs(inline: Option<String>, stdin: bool) -> Result<Vec<Vec<char>>, Fail> {
    if stdin {
        io::stdin()
            .lock()
            .lines()
            .map(|l| {
                l.map(|s| s.chars().collect())
                    .map_err(|e| usage(format!("stdin: {e}")))
            })
            .collect()
    } else {
        Ok(inline.into_iter().map(|s| s.chars().collect()).collect())
    }
}

fn oracle_failure(e: OracleError) -> Fail {
    match e {
        OracleError::SymbolOutsideAlphabet { .. } => usage(e.to_string()),
        OracleError::TooManyTrees { .. } => Fail(CONFLICT, e.to_string()),
    }
}

fn check(path: &Path, scan: Option<(usize, usize)>, cap: usize, out: &mut impl Write) -> Res {
    let g = load_grammar(path)?;
    let (aligned, bad) = g.is_aligned();
    let left = g.left_recursive_rules();
    let mut text = format!(
        "aligned: {}; left-recursive rules: {}\n",
        if aligned { "yes" } else { "no" },
        left.len()
    );
    for r in &bad {
        text.push_str(&format!("  not aligned: {}\n", g.display_rule(*r)));
    }
    for r in &left {
        text.push_str(&format!("  left-recursive: {}\n", g.display_rule(*r)));
    }
    if let Some((k, max_len)) = scan {
        let uses = short_rule_uses(&g, k, max_len, cap).map_err(oracle_failure)?;
        text.push_str(&format!(
            "short rules (k = {k}, max-len {max_len}): {}\n",
            uses.len()
        ));
        for u in &uses {
            text.push_str(&format!(
                "  {}: {}\n",
                g.display_rule(u.rule),
                u.witness.describe(&g)
            ));
        }
    }
    out.write_all(text.as_bytes())
        .map_err(|e| usage(e.to_string()))?;
    Ok(OK)
}

fn emit(output: Option<&Path>, text: &str, out: &mut impl Write) -> Result<(), Fail> {
    match output {
        Some(p) => write(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| usage(e.to_string())),
    }
}

fn infer(path: &Path, bound: Bound, output: Option<PathBuf>, out: &mut impl Write) -> Res {
    let g = load_grammar(path)?;
    let k = bound.k.unwrap_or(g.k());
    if k == 0 {
        return Err(usage("k must be positive"));
    }
    let max_len = bound.max_len.unwrap_or(default_bound(k));
    match infer_table(&g, k, max_len, bound.tree_cap).map_err(oracle_failure)? {
        Inference::Table(t) => {
            emit(output.as_deref(), &store_table(&t, &g), out)?;
            Ok(OK)
        }
        Inference::Conflict(c) => Err(Fail(CONFLICT, c.describe(&g))),
    }
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn transform(
    path: &Path,
    stage: Stage,
    k: Option<usize>,
    bound: Option<usize>,
    cap: usize,
    output: Option<PathBuf>,
    out: &mut impl Write,
) -> Res {
    let g = load_grammar(path)?;
    let k = k.unwrap_or(g.k());
    if k == 0 {
        return Err(usage("k must be positive"));
    }
    let bound = bound.unwrap_or(default_bound(k));
    let result =
        run_pipeline(&g, k, bound, cap, stage).map_err(|e| Fail(CONFLICT, e.to_string()))?;
    let grammar = serialize_grammar(result.grammar());
    let manifest = result.manifest.to_string();
    let table = result
        .table
        .as_ref()
        .map(|t| store_table(t, result.grammar()));
    match output {
        Some(p) => {
            write(&p, &grammar)?;
            write(&with_suffix(&p, ".manifest"), &manifest)?;
            if let Some(t) = &table {
                write(&with_suffix(&p, ".table"), t)?;
            }
        }
        None => {
            let mut text = grammar;
            if let Some(t) = &table {
                text.push_str("\n# table\n");
                text.push_str(t);
            }
            text.push_str("\n# manifest\n");
            text.push_str(&manifest);
            emit(None, &text, out)?;
        }
    }
    Ok(OK)
}

fn parse(
    path: &Path,
    table: &Path,
    input: Input,
    trace: Option<PathBuf>,
    out: &mut impl Write,
) -> Res {
    let g = load_grammar(path)?;
    let t =
        load_table(&read(table)?, &g).map_err(|e| usage(format!("{}: {e}", table.display())))?;
    let p = StackParser::new(&g, &t).map_err(|e| usage(e.to_string()))?;
    let words = inputs(input.input, input.stdin)?;
    let mut traces = String::new();
    let mut report = String::new();
    let mut all_accepted = true;
    for w in &words {
        let run = p
            .run(w, trace.is_some())
            .map_err(|e| usage(format!("{:?}: {e}", show_word(w))))?;
        if let Some(tr) = &run.trace {
            traces.push_str(&tr.render(&g));
        }
        let verdict = match run.verdict {
            Verdict::Accept => "accept".to_string(),
            Verdict::Reject(r) => {
                all_accepted = false;
                format!(
                    "reject: {} at step {} ({})",
                    r.reason.as_str(),
                    r.step,
                    g.name(r.nonterminal)
                )
            }
        };
        if input.stdin {
            report.push_str(&format!("{}: {verdict}\n", show_word(w)));
        } else {
            report.push_str(&format!("{verdict}\n"));
        }
    }
    if let Some(tp) = trace {
        write(&tp, &traces)?;
    }
    emit(None, &report, out)?;
    Ok(if all_accepted { OK } else { NEGATIVE })
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    path: &Path,
    input: OptionalInput,
    tree: bool,
    count_trees: bool,
    cap: usize,
    enumerate: Option<usize>,
    out: &mut impl Write,
) -> Res {
    let g = load_grammar(path)?;
    if let Some(l) = enumerate {
        let mut text = String::new();
        for w in LanguageTable::new(&g, g.alphabet(), l).members() {
            text.push_str(&show_word(&w));
            text.push('\n');
        }
        emit(None, &text, out)?;
        return Ok(OK);
    }
    if input.input.is_none() && !input.stdin {
        return Err(usage("give an input string, --stdin or --enumerate"));
    }
    let o = Oracle::new(&g);
    let mut text = String::new();
    let mut all_members = true;
    for w in inputs(input.input, input.stdin)? {
        let member = o.recognize(&w).map_err(oracle_failure)?;
        all_members &= member;
        if input.stdin {
            text.push_str(&format!("{}: ", show_word(&w)));
        }
        text.push_str(if member { "member" } else { "non-member" });
        if count_trees {
            match o.count_trees(&w, cap) {
                Ok(n) if n <= cap => text.push_str(&format!("; trees: {n}")),
                _ => text.push_str(&format!("; trees: more than {cap}")),
            }
        }
        text.push('\n');
        if tree && member {
            let t = o
                .build_tree(&w)
                .map_err(oracle_failure)?
                .expect("member has a tree");
            text.push_str(&t.render(&g, &w));
        }
    }
    emit(None, &text, out)?;
    Ok(if all_members { OK } else { NEGATIVE })
}

fn diff(a: &Path, b: &Path, max_len: Option<usize>, out: &mut impl Write) -> Res {
    let (ga, gb) = (load_grammar(a)?, load_grammar(b)?);
    let max_len = max_len.unwrap_or(default_bound(ga.k().max(gb.k())));
    let alphabet = union_alphabet(&ga, &gb);
    let (ta, tb) = (
        LanguageTable::new(&ga, &alphabet, max_len),
        LanguageTable::new(&gb, &alphabet, max_len),
    );
    let text = match (0..ta.word_count()).find(|&i| ta.contains_index(i) != tb.contains_index(i)) {
        None => format!(
            "equal on all {} strings up to length {max_len}\n",
            ta.word_count()
        ),
        Some(i) => {
            let (first, second) = if ta.contains_index(i) { (a, b) } else { (b, a) };
            format!(
                "differ on {}: in {}, not in {}\n",
                show_word(&ta.word(i)),
                first.display(),
                second.display()
            )
        }
    };
    emit(None, &text, out)?;
    Ok(if text.starts_with("equal") {
        OK
    } else {
        NEGATIVE
    })
}

fn run(cli: Cli, out: &mut impl Write) -> Res {
    match cli.command {
        Command::Check {
            grammar,
            k,
            max_len,
            tree_cap,
        } => check(&grammar, k.zip(max_len), tree_cap, out),
        Command::InferTable {
            grammar,
            bound,
            output,
        } => infer(&grammar, bound, output, out),
        Command::Transform {
            grammar,
            stage,
            k,
            infer_bound,
            tree_cap,
            output,
        } => transform(&grammar, stage, k, infer_bound, tree_cap, output, out),
        Command::Parse {
            grammar,
            table,
            input,
            trace,
        } => parse(&grammar, &table, input, trace, out),
        Command::Oracle {
            grammar,
            input,
            tree,
            count_trees,
            tree_cap,
            enumerate,
        } => oracle(&grammar, input, tree, count_trees, tree_cap, enumerate, out),
        Command::Diff { a, b, max_len } => diff(&a, &b, max_len, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("conjll: {msg}");
            ExitCode::from(code)
        }
    }
}
