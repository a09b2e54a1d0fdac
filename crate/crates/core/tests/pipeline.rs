mod common;

use conjll::oracle::{first_difference, DEFAULT_TREE_CAP};
use conjll::serialize_grammar;
use conjll::table::{infer_table, validate_table, Inference};
use conjll::transform::{run_pipeline, short_rule_uses, Stage};

#[test]
fn every_stage_preserves_the_language() {
    for (name, g) in common::grammars() {
        let out = run_pipeline(&g, g.k(), 10, DEFAULT_TREE_CAP, Stage::Full).unwrap();
        assert_eq!(out.stages.len(), Stage::ALL.len(), "{name}");
        for (stage, h) in &out.stages {
            assert_eq!(
                first_difference(&g, h, 8),
                None,
                "{name} after {stage}:\n{h}"
            );
        }
    }
}

#[test]
fn stage_shapes() {
    for (name, g) in common::grammars() {
        let out = run_pipeline(&g, g.k(), 10, DEFAULT_TREE_CAP, Stage::Full).unwrap();
        for (stage, h) in &out.stages {
            // the buffer nonterminals of the ll1 stage reintroduce left recursion
            if *stage != Stage::Ll1 {
                assert!(h.left_recursive_rules().is_empty(), "{name} {stage}");
            }
            if *stage >= Stage::Aligned && *stage != Stage::Ll1 {
                assert!(h.is_aligned().0, "{name} {stage}");
            }
            let expected_k = if *stage >= Stage::Ll1 { 1 } else { g.k() };
            assert_eq!(h.k(), expected_k, "{name} {stage}");
        }
        let h = out.grammar();
        let t = out.table.as_ref().unwrap();
        assert_eq!(t.k(), 1);
        assert!(
            validate_table(h, t, 10, DEFAULT_TREE_CAP)
                .unwrap()
                .is_valid(),
            "{name}"
        );
    }
}

#[test]
fn grammars_are_ll_at_their_k_only() {
    for (name, g) in common::grammars() {
        let at_k = infer_table(&g, g.k(), 10, DEFAULT_TREE_CAP).unwrap();
        assert!(matches!(at_k, Inference::Table(_)), "{name}");
        if g.k() > 1 {
            let below = infer_table(&g, g.k() - 1, 10, DEFAULT_TREE_CAP).unwrap();
            assert!(matches!(below, Inference::Conflict(_)), "{name}");
        }
    }
}

#[test]
fn short_rules_gone_after_noshort() {
    for (name, g) in common::grammars() {
        let out = run_pipeline(&g, g.k(), 10, DEFAULT_TREE_CAP, Stage::NoShort).unwrap();
        let before = out.stage(Stage::Aligned).unwrap();
        let after = out.stage(Stage::NoShort).unwrap();
        assert!(
            short_rule_uses(after, g.k(), 8, DEFAULT_TREE_CAP)
                .unwrap()
                .is_empty(),
            "{name}"
        );
        if g.k() >= 2 {
            let uses = short_rule_uses(before, g.k(), 8, DEFAULT_TREE_CAP).unwrap();
            assert!(!uses.is_empty(), "{name} has no short rule to remove");
        }
    }
}

#[test]
fn output_is_deterministic() {
    for (name, g) in common::grammars() {
        let a = run_pipeline(&g, g.k(), 9, DEFAULT_TREE_CAP, Stage::Full).unwrap();
        let b = run_pipeline(&g, g.k(), 9, DEFAULT_TREE_CAP, Stage::Full).unwrap();
        for ((sa, ga), (sb, gb)) in a.stages.iter().zip(&b.stages) {
            assert_eq!(sa, sb);
            assert_eq!(serialize_grammar(ga), serialize_grammar(gb), "{name} {sa}");
        }
        assert_eq!(a.table, b.table);
        assert_eq!(a.manifest.to_string(), b.manifest.to_string());
    }
}

#[test]
fn manifest_lists_every_step() {
    let g = common::example();
    let out = run_pipeline(&g, 1, 9, DEFAULT_TREE_CAP, Stage::Full).unwrap();
    let steps: Vec<&str> = out.manifest.records.iter().map(|r| r.step).collect();
    assert_eq!(
        steps,
        [
            "input",
            "infer",
            "noleftrec",
            "aligned",
            "noshort",
            "noshort-infer",
            "ll1",
            "ll1-infer",
            "full-noleftrec",
            "full-aligned",
            "full-infer"
        ]
    );
    assert_eq!(out.manifest.records[1].entries, Some(14));
    let last = out.manifest.records.last().unwrap();
    assert_eq!(last.entries, Some(out.table.as_ref().unwrap().len()));
}
