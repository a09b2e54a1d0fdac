use std::fmt;

use thiserror::Error;

use super::{
    align, eliminate_left_recursion, eliminate_short_rules, reduce_to_ll1, TransformError,
};
use crate::grammar::{Grammar, GrammarError};
use crate::oracle::OracleError;
use crate::table::{infer_table, Inference, LlTable};

/// Points at which the pipeline can stop; each includes all earlier ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    NoLeftRec,
    Aligned,
    NoShort,
    Ll1,
    Full,
}

impl Stage {
    pub const ALL: [Stage; 5] = [
        Stage::NoLeftRec,
        Stage::Aligned,
        Stage::NoShort,
        Stage::Ll1,
        Stage::Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::NoLeftRec => "noleftrec",
            Stage::Aligned => "aligned",
            Stage::NoShort => "noshort",
            Stage::Ll1 => "ll1",
            Stage::Full => "full",
        }
    }

    pub fn from_name(s: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|st| st.name() == s)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StageFailure {
    #[error("{0}")]
    Conflict(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A failure inside one step of the pipeline. `step` is the step name as
/// listed in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("stage {step}: {failure}")]
pub struct PipelineError {
    pub step: &'static str,
    pub failure: StageFailure,
}

/// One executed step: either a grammar rewrite or a table inference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub step: &'static str,
    pub k: usize,
    pub nonterminals: usize,
    pub rules: usize,
    /// Table size for inference steps.
    pub entries: Option<usize>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub k: usize,
    pub bound: usize,
    pub cap: usize,
    pub records: Vec<StageRecord>,
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}", self.k)?;
        writeln!(f, "infer-bound = {}", self.bound)?;
        writeln!(f, "tree-cap = {}", self.cap)?;
        for r in &self.records {
            write!(
                f,
                "{}: k={} nonterminals={} rules={}",
                r.step, r.k, r.nonterminals, r.rules
            )?;
            if let Some(e) = r.entries {
                write!(f, " entries={e}")?;
            }
            writeln!(f)?;
            for n in &r.notes {
                writeln!(f, "  note: {n}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// Output grammar of each stage reached, in order.
    pub stages: Vec<(Stage, Grammar)>,
    /// The final `k = 1` table, present when `Full` was reached.
    pub table: Option<LlTable>,
    pub manifest: Manifest,
}

impl PipelineOutput {
    pub fn grammar(&self) -> &Grammar {
        &self.stages.last().expect("at least one stage").1
    }

    pub fn stage(&self, s: Stage) -> Option<&Grammar> {
        self.stages.iter().find(|(st, _)| *st == s).map(|(_, g)| g)
    }
}

struct Runner {
    bound: usize,
    cap: usize,
    manifest: Manifest,
}

impl Runner {
    fn record(
        &mut self,
        step: &'static str,
        g: &Grammar,
        entries: Option<usize>,
        notes: Vec<String>,
    ) {
        self.manifest.records.push(StageRecord {
            step,
            k: g.k(),
            nonterminals: g.nonterminal_count(),
            rules: g.rules().len(),
            entries,
            notes,
        });
    }

    fn infer(
        &mut self,
        step: &'static str,
        g: &Grammar,
        k: usize,
    ) -> Result<LlTable, PipelineError> {
        let fail = |failure| PipelineError { step, failure };
        match infer_table(g, k, self.bound, self.cap).map_err(|e| fail(e.into()))? {
            Inference::Table(t) => {
                self.record(step, g, Some(t.len()), Vec::new());
                Ok(t)
            }
            Inference::Conflict(c) => Err(fail(StageFailure::Conflict(c.describe(g)))),
        }
    }

    fn rewrite(
        &mut self,
        step: &'static str,
        out: Result<Grammar, TransformError>,
        k: usize,
    ) -> Result<Grammar, PipelineError> {
        let g = out
            .and_then(|g| g.with_k(k).map_err(TransformError::from))
            .map_err(|e| PipelineError {
                step,
                failure: e.into(),
            })?;
        self.record(step, &g, None, Vec::new());
        Ok(g)
    }

    fn align(&mut self, step: &'static str, g: &Grammar) -> Result<Grammar, PipelineError> {
        let out = align(g).map_err(|e| PipelineError {
            step,
            failure: e.into(),
        })?;
        let notes = out
            .dropped
            .iter()
            .map(|r| format!("dropped empty rule {r}"))
            .collect();
        self.record(step, &out.grammar, None, notes);
        Ok(out.grammar)
    }
}

/// Runs the stages up to and including `until`:
///
/// 1. infer a `k` table, eliminate left recursion (`noleftrec`), align
///    (`aligned`), eliminate short rules (`noshort`);
/// 2. re-infer at `k` and reduce to LL(1) (`ll1`);
/// 3. infer a `k = 1` table, eliminate the left recursion the reduction
///    introduces, align again and infer the final `k = 1` table (`full`).
///
/// Every inference uses member strings up to `bound` and at most `cap`
/// trees per string.
pub fn run_pipeline(
    g: &Grammar,
    k: usize,
    bound: usize,
    cap: usize,
    until: Stage,
) -> Result<PipelineOutput, PipelineError> {
    let mut run = Runner {
        bound,
        cap,
        manifest: Manifest {
            k,
            bound,
            cap,
            records: Vec::new(),
        },
    };
    let mut stages = Vec::new();
    let input = g
        .clone()
        .with_k(k)
        .map_err(|e: GrammarError| PipelineError {
            step: "input",
            failure: TransformError::from(e).into(),
        })?;
    run.record("input", &input, None, Vec::new());

    let t = run.infer("infer", &input, k)?;
    let g1 = run.rewrite("noleftrec", eliminate_left_recursion(&input, &t), k)?;
    stages.push((Stage::NoLeftRec, g1.clone()));
    let done = |stages: Vec<(Stage, Grammar)>, run: Runner, table| PipelineOutput {
        stages,
        table,
        manifest: run.manifest,
    };
    if until == Stage::NoLeftRec {
        return Ok(done(stages, run, None));
    }

    let g2 = run.align("aligned", &g1)?;
    stages.push((Stage::Aligned, g2.clone()));
    if until == Stage::Aligned {
        return Ok(done(stages, run, None));
    }

    let g3 = run.rewrite("noshort", eliminate_short_rules(&g2, k), k)?;
    stages.push((Stage::NoShort, g3.clone()));
    if until == Stage::NoShort {
        return Ok(done(stages, run, None));
    }

    let t3 = run.infer("noshort-infer", &g3, k)?;
    let g4 = run.rewrite("ll1", reduce_to_ll1(&g3, &t3), 1)?;
    stages.push((Stage::Ll1, g4.clone()));
    if until == Stage::Ll1 {
        return Ok(done(stages, run, None));
    }

    let t4 = run.infer("ll1-infer", &g4, 1)?;
    let g5 = run.rewrite("full-noleftrec", eliminate_left_recursion(&g4, &t4), 1)?;
    let g6 = run.align("full-aligned", &g5)?;
    let t6 = run.infer("full-infer", &g6, 1)?;
    stages.push((Stage::Full, g6));
    Ok(done(stages, run, Some(t6)))
}
