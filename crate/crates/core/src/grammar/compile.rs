use crate::formula::{Formula, PathTerm, TreeStep};
use crate::model::{FeaturePath, Signature};

use super::{AnnotatedRule, GrammarError, LexEntry, LexSchema, Schema, SemForm, Theory, PRED, REL};

fn check_feats<'a>(sig: &Signature, paths: impl IntoIterator<Item = &'a FeaturePath>) -> Result<(), GrammarError> {
    for f in paths.into_iter().flatten() {
        if !sig.is_feat(f) {
            return Err(GrammarError::UnknownName { kind: "feature", name: f.clone() });
        }
    }
    Ok(())
}

fn check_cat(sig: &Signature, c: &str) -> Result<(), GrammarError> {
    if sig.is_cat(c) {
        Ok(())
    } else {
        Err(GrammarError::UnknownName { kind: "category", name: c.to_string() })
    }
}

fn check_atom(sig: &Signature, a: &str) -> Result<(), GrammarError> {
    if sig.is_atom(a) {
        Ok(())
    } else {
        Err(GrammarError::UnknownName { kind: "atom", name: a.to_string() })
    }
}

/// A rule schema as evaluated at the daughter it annotates.
pub fn compile_schema(s: &Schema) -> Formula {
    match s {
        Schema::UpPathEqDown { up, down } => {
            Formula::path_eq(PathTerm::new([TreeStep::Up], up.clone()), PathTerm::new([], down.clone()))
        }
        Schema::UpPathAtom { up, value } => Formula::up(Formula::zoomin(Formula::feats(up, Formula::atom(value)))),
    }
}

/// `lhs & bullet(c1 & schemata1, …, ck & schematak)`.
pub fn compile_rule(r: &AnnotatedRule, sig: &Signature) -> Result<Formula, GrammarError> {
    check_cat(sig, &r.lhs)?;
    let mut args = Vec::with_capacity(r.rhs.len());
    for d in &r.rhs {
        check_cat(sig, &d.cat)?;
        for s in &d.schemata {
            match s {
                Schema::UpPathEqDown { up, down } => check_feats(sig, [up, down])?,
                Schema::UpPathAtom { up, value } => {
                    check_feats(sig, [up])?;
                    check_atom(sig, value)?;
                }
            }
        }
        let parts = std::iter::once(Formula::cat(&d.cat)).chain(d.schemata.iter().map(compile_schema));
        args.push(Formula::conjoin(parts).expect("at least the category"));
    }
    let bullet = Formula::bullet(args).map_err(|_| GrammarError::EmptyRhs(r.lhs.clone()))?;
    Ok(Formula::and(Formula::cat(&r.lhs), bullet))
}

/// `up zoomin <p> φ`, where `↑` of a word is its preterminal's mother.
fn up_image(path: &[String], f: Formula) -> Formula {
    Formula::up(Formula::zoomin(Formula::feats(path, f)))
}

fn compile_sem_form(f: &SemForm) -> Formula {
    let value = std::iter::once(Formula::feat(REL, Formula::atom(&f.rel)))
        .chain(f.args.iter().map(|g| Formula::feats(g, Formula::True)));
    let mut parts = vec![up_image(&[PRED.to_string()], Formula::conjoin(value).expect("rel conjunct"))];
    // an argument present at the clause level is the governed one
    for g in &f.args {
        let governed: Vec<String> = std::iter::once(PRED.to_string()).chain(g.iter().cloned()).collect();
        parts.push(Formula::implies(
            up_image(g, Formula::True),
            Formula::path_eq(PathTerm::new([TreeStep::Up], governed), PathTerm::new([TreeStep::Up], g.clone())),
        ));
    }
    Formula::conjoin(parts).expect("nonempty")
}

/// The disjunct for one entry: `cat & bullet("word") & schemata`.
pub fn compile_lex_entry(e: &LexEntry, sig: &Signature) -> Result<Formula, GrammarError> {
    check_cat(sig, &e.cat)?;
    if !sig.is_word(&e.word) {
        return Err(GrammarError::UnknownName { kind: "word", name: e.word.clone() });
    }
    let mut parts = vec![Formula::cat(&e.cat), Formula::bullet(vec![Formula::word(&e.word)]).expect("one argument")];
    for s in &e.schemata {
        match s {
            LexSchema::UpPathAtom { up, value } => {
                check_feats(sig, [up])?;
                check_atom(sig, value)?;
                parts.push(up_image(up, Formula::atom(value)));
            }
            LexSchema::SemForm(f) => {
                check_feats(sig, [&vec![PRED.to_string(), REL.to_string()]])?;
                check_atom(sig, &f.rel)?;
                for g in &f.args {
                    if !sig.gf().contains(g) {
                        return Err(GrammarError::NotGovernable(g.join(".")));
                    }
                }
                parts.push(compile_sem_form(f));
            }
        }
    }
    Ok(Formula::conjoin(parts).expect("nonempty"))
}

fn lexical_antecedent() -> Formula {
    Formula::and(
        Formula::and(Formula::CStruct, Formula::down(Formula::True)),
        Formula::not(Formula::down(Formula::down(Formula::True))),
    )
}

/// Every preterminal (a tree node whose daughters are all leaves) matches
/// some entry of the lexicon.
pub fn compile_lexicon(lexicon: &[LexEntry], sig: &Signature) -> Result<Formula, GrammarError> {
    let disjuncts = lexicon.iter().map(|e| compile_lex_entry(e, sig)).collect::<Result<Vec<_>, _>>()?;
    let body = Formula::disjoin(disjuncts).ok_or(GrammarError::EmptyLexicon)?;
    Ok(Formula::implies(lexical_antecedent(), body))
}

/// `<pred> g true -> g true` for every governable function `g`.
pub fn completeness_axioms(sig: &Signature) -> Vec<Formula> {
    sig.gf()
        .iter()
        .map(|g| {
            Formula::implies(Formula::feat(PRED, Formula::feats(g, Formula::True)), Formula::feats(g, Formula::True))
        })
        .collect()
}

/// `(g true & <pred> true) -> <pred> g true` for every governable function `g`.
pub fn coherence_axioms(sig: &Signature) -> Vec<Formula> {
    sig.gf()
        .iter()
        .map(|g| {
            Formula::implies(
                Formula::and(Formula::feats(g, Formula::True), Formula::feat(PRED, Formula::True)),
                Formula::feat(PRED, Formula::feats(g, Formula::True)),
            )
        })
        .collect()
}

/// Compiles rules and lexicon into a theory. Phrase licensing applies at
/// tree nodes with a granddaughter, lexical licensing at preterminals.
pub fn compile_grammar(rules: &[AnnotatedRule], lexicon: &[LexEntry], sig: &Signature) -> Result<Theory, GrammarError> {
    let disjuncts = rules.iter().map(|r| compile_rule(r, sig)).collect::<Result<Vec<_>, _>>()?;
    let body = Formula::disjoin(disjuncts).ok_or(GrammarError::EmptyRules)?;
    let licensing = Formula::implies(Formula::and(Formula::CStruct, Formula::down(Formula::down(Formula::True))), body);
    let lexical = compile_lexicon(lexicon, sig)?;
    if !sig.gf().is_empty() && !sig.is_feat(PRED) {
        return Err(GrammarError::UnknownName { kind: "feature", name: PRED.to_string() });
    }
    Ok(Theory {
        licensing: Some(licensing),
        lexical: Some(lexical),
        completeness: completeness_axioms(sig),
        coherence: coherence_axioms(sig),
        axioms: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::parse_formula;

    fn parsed(text: &str, sig: &Signature) -> Formula {
        parse_formula(text, sig).unwrap()
    }

    #[test]
    fn figure1_rules() {
        let g = fixtures::figure1_grammar();
        let sig = g.sig();
        let expect = [
            "S & bullet(NP & (up zoomin subj ~ zoomin), VP & (up zoomin ~ zoomin))",
            "NP & bullet(Det, N)",
            "VP & bullet(V & (up zoomin ~ zoomin))",
        ];
        for (r, text) in g.rules().iter().zip(expect) {
            assert_eq!(compile_rule(r, sig).unwrap(), parsed(text, sig));
        }
    }

    #[test]
    fn walks_entry() {
        let g = fixtures::figure1_grammar();
        let walks = g.lexicon().iter().find(|e| e.word == "walks").unwrap();
        let expect = "V & bullet(\"walks\") \
            & (up zoomin <pred> (<rel> walk & <subj> true) & (up zoomin <subj> true -> up zoomin pred subj ~ up zoomin subj)) \
            & up zoomin <tense> pst";
        assert_eq!(compile_lex_entry(walks, g.sig()).unwrap(), parsed(expect, g.sig()));
    }

    #[test]
    fn entry_without_schemata() {
        let sig = Signature::new(["N"], ["x"], ["f"]).with_words(["dog"]);
        let e = LexEntry { word: "dog".into(), cat: "N".into(), schemata: vec![] };
        assert_eq!(compile_lex_entry(&e, &sig).unwrap(), parsed("N & bullet(\"dog\")", &sig));
    }

    #[test]
    fn well_formedness_axioms() {
        let sig = Signature::new(["S"], ["x"], ["subj", "pred", "obl", "obj"]).with_gf([vec!["subj"]]);
        assert_eq!(completeness_axioms(&sig), vec![parsed("<pred> <subj> true -> <subj> true", &sig)]);
        assert_eq!(coherence_axioms(&sig), vec![parsed("(<subj> true & <pred> true) -> <pred> <subj> true", &sig)]);
        let two = sig.clone().with_gf([vec!["obl", "obj"]]);
        assert!(completeness_axioms(&two).contains(&parsed("<pred> <obl> <obj> true -> <obl> <obj> true", &two)));
        let none = Signature::new(["S"], ["x"], ["subj"]);
        assert!(completeness_axioms(&none).is_empty());
        assert!(coherence_axioms(&none).is_empty());
    }

    #[test]
    fn empty_inputs_are_errors() {
        let g = fixtures::figure1_grammar();
        assert_eq!(compile_grammar(&[], g.lexicon(), g.sig()), Err(GrammarError::EmptyRules));
        assert_eq!(compile_lexicon(&[], g.sig()), Err(GrammarError::EmptyLexicon));
    }

    #[test]
    fn unknown_names_are_errors() {
        let g = fixtures::figure1_grammar();
        let r = AnnotatedRule::new("S", vec![super::super::Daughter { cat: "PP".into(), schemata: vec![] }]);
        assert!(matches!(compile_rule(&r, g.sig()), Err(GrammarError::UnknownName { kind: "category", .. })));
    }
}
