use std::collections::BTreeMap;

use lfgmc_core::fixtures;
use lfgmc_core::grammar::{coherence_axioms, compile_lex_entry};
use lfgmc_core::model::{FStructure, Label, Model, TreeBuilder};
use lfgmc_core::{check_parse, parse_formula, parse_grammar, render_formula, valid, FNodeId, Node, Section, TreeId};

fn relabel(m: Model, t: TreeId, cat: &str) -> Model {
    let (sig, cs, fs, z) = m.into_parts();
    let (root, mut nodes) = cs.into_parts();
    nodes.get_mut(&t).unwrap().label = Label::Cat(cat.into());
    Model::new(sig, lfgmc_core::CStructure::from_parts(root, nodes), fs, z)
}

#[test]
fn every_formula_of_the_fragment_holds_on_its_sentence() {
    let theory = fixtures::figure1_grammar().compile().unwrap();
    let report = check_parse(&theory, &fixtures::a_girl_walks());
    assert!(report.all_valid(), "{:?}", report.failures().collect::<Vec<_>>());
    assert_eq!(report.entries.len(), 4);
}

#[test]
fn verb_relabeled_as_noun_is_caught_at_the_vp() {
    let theory = fixtures::figure1_grammar().compile().unwrap();
    // V is tree node 7, VP is 6
    let m = relabel(fixtures::a_girl_walks(), TreeId(7), "N");
    assert!(m.validate().is_valid());
    assert_eq!(valid(&m, theory.licensing.as_ref().unwrap()), Ok(Some(Node::Tree(TreeId(6)))));
}

#[test]
fn grammar_with_only_the_np_rule_rejects_the_sentence_at_s() {
    let text = fixtures::FIGURE1
        .lines()
        .filter(|l| !l.starts_with("rule S") && !l.starts_with("rule VP"))
        .collect::<Vec<_>>()
        .join("\n");
    let g = parse_grammar(&text).unwrap();
    let theory = g.compile().unwrap();
    assert_eq!(g.rules().len(), 1);
    assert_eq!(valid(&fixtures::a_girl_walks(), theory.licensing.as_ref().unwrap()), Ok(Some(Node::Tree(TreeId(0)))));
}

#[test]
fn unbranching_tree_licenses_vacuously() {
    let g = fixtures::figure1_grammar();
    let theory = g.compile().unwrap();
    let mut tb = TreeBuilder::new();
    let root = tb.leaf(Label::Cat("S".into()));
    let fs = FStructure::from_nodes(FNodeId(0), BTreeMap::from([(FNodeId(0), Default::default())]));
    let m = Model::new(g.sig().clone(), tb.finish(root), fs, BTreeMap::new());
    assert!(m.validate().is_valid());
    assert_eq!(valid(&m, theory.licensing.as_ref().unwrap()), Ok(None));
}

#[test]
fn girl_entry_holds_at_the_noun() {
    let g = fixtures::figure1_grammar();
    let girl = g.lexicon().iter().find(|e| e.word == "girl").unwrap();
    let f = compile_lex_entry(girl, g.sig()).unwrap();
    let m = fixtures::a_girl_walks();
    assert_eq!(lfgmc_core::satisfies(&m, Node::Tree(TreeId(4)), &f), Ok(true));
    assert_eq!(lfgmc_core::satisfies(&m, Node::Tree(TreeId(7)), &f), Ok(false));
}

#[test]
fn coherence_fails_without_the_subject_argument() {
    let g = fixtures::figure1_grammar();
    let m = fixtures::a_girl_walks();
    let (sig, cs, fs, z) = m.into_parts();
    let (initial, mut nodes, finals) = fs.into_parts();
    // f1 is the verb's semantic form
    nodes.get_mut(&FNodeId(1)).unwrap().trans.remove("subj");
    let m = Model::new(sig, cs, FStructure::from_parts(initial, nodes, finals), z);
    assert!(m.validate().is_valid());
    let [axiom] = coherence_axioms(g.sig()).try_into().unwrap();
    assert_eq!(valid(&m, &axiom), Ok(Some(Node::F(FNodeId(0)))));

    let text = fixtures::FIGURE1.replace("walk(subj)", "walk");
    let g = parse_grammar(&text).unwrap();
    let out =
        lfgmc_core::parse_sentence(&g.compile().unwrap(), &g, &["a", "girl", "walks"], Default::default()).unwrap();
    assert!(out.models.is_empty());
    assert!(out.rejections.iter().any(|r| matches!(
        r.reason,
        lfgmc_core::search::RejectReason::Unsatisfied { section: Section::Coherence, .. }
    )));
}

#[test]
fn coherence_for_obj_holds_on_the_sentence() {
    let sig = fixtures::devour_grammar().sig().clone();
    let only_obj = lfgmc_core::Signature::new(sig.cats().clone(), sig.atoms().clone(), sig.feats().clone())
        .with_words(sig.words().clone())
        .with_gf([vec!["obj"]]);
    let (_, cs, fs, z) = fixtures::a_girl_walks().into_parts();
    let m = Model::new(only_obj.clone(), cs, fs, z);
    for ax in coherence_axioms(&only_obj) {
        assert_eq!(valid(&m, &ax), Ok(None));
    }
}

#[test]
fn changing_num_breaks_the_lexical_axiom() {
    // the determiner and the noun both demand num sing of the NP's f-structure
    let text = fixtures::FIGURE1.replace("atom: a sing", "atom: a pl sing");
    let g = parse_grammar(&text).unwrap();
    let (_, cs, fs, z) = fixtures::a_girl_walks().into_parts();
    let (initial, mut nodes, finals) = fs.into_parts();
    // f5 is the subject's num value
    nodes.get_mut(&FNodeId(5)).unwrap().atom = Some("pl".into());
    let m = Model::new(g.sig().clone(), cs, FStructure::from_parts(initial, nodes, finals), z);
    assert!(m.validate().is_valid());
    let report = check_parse(&g.compile().unwrap(), &m);
    let fails: Vec<_> = report.failures().map(|e| (e.section, e.result.clone())).collect();
    assert_eq!(fails, vec![(Section::Lexical, Ok(Some(Node::Tree(TreeId(2)))))]);
}

#[test]
fn compiled_theories_reparse() {
    for g in [fixtures::figure1_grammar(), fixtures::devour_grammar()] {
        let theory = g.compile().unwrap();
        for tf in theory.formulas() {
            let text = render_formula(tf.formula);
            assert_eq!(parse_formula(&text, g.sig()).as_ref(), Ok(tf.formula), "{text}");
        }
    }
}

#[test]
fn empty_gf_gives_no_well_formedness_axioms() {
    let text = fixtures::FIGURE1.replace("gf: subj;", "").replace("walk(subj)", "walk");
    let theory = parse_grammar(&text).unwrap().compile().unwrap();
    assert!(theory.completeness.is_empty() && theory.coherence.is_empty());
    assert!(theory.licensing.is_some() && theory.lexical.is_some());
}
