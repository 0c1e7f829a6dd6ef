//! The "a girl walks" fragment as grammar text and as hand-built models.

use std::collections::BTreeMap;

use crate::grammar::{parse_grammar, Grammar};
use crate::model::{CStructure, FNodeId, FStructureBuilder, Model, Signature, TreeId};

pub const FIGURE1: &str = include_str!("../fixtures/figure1.lfg");

/// The fragment plus a transitive `devours` whose object nothing supplies.
pub const DEVOUR: &str = include_str!("../fixtures/devour.lfg");

pub fn figure1_grammar() -> Grammar {
    parse_grammar(FIGURE1).expect("fixture grammar parses")
}

pub fn devour_grammar() -> Grammar {
    parse_grammar(DEVOUR).expect("fixture grammar parses")
}

fn tree(sig: &Signature, verb: &str) -> CStructure {
    let text = format!("(S (NP (Det \"a\") (N \"girl\")) (VP (V \"{verb}\")))");
    CStructure::parse_bracketed(&text, sig).expect("fixture tree parses")
}

/// Tree ids: S=0 NP=1 Det=2 a=3 N=4 girl=5 VP=6 V=7 walks=8.
fn zoomin(clause: FNodeId, subj: FNodeId) -> BTreeMap<TreeId, FNodeId> {
    BTreeMap::from([(TreeId(0), clause), (TreeId(1), subj), (TreeId(6), clause), (TreeId(7), clause)])
}

/// The sentence structure of "a girl walks", ids already canonical.
///
/// ```text
/// f0 [pred f1 [rel walk, subj f2], subj f2 [num sing, pred [rel girl], spec a], tense pst]
/// ```
pub fn a_girl_walks() -> Model {
    let sig = figure1_grammar().sig().clone();
    let mut b = FStructureBuilder::new();
    let clause = b.node();
    let pred = b.node();
    let subj = b.node();
    let pst = b.atom("pst");
    let walk = b.atom("walk");
    let sing = b.atom("sing");
    let girl_pred = b.node();
    let a = b.atom("a");
    let girl = b.atom("girl");
    b.edge(clause, "pred", pred).edge(clause, "subj", subj).edge(clause, "tense", pst);
    b.edge(pred, "rel", walk).edge(pred, "subj", subj);
    b.edge(subj, "num", sing).edge(subj, "pred", girl_pred).edge(subj, "spec", a);
    b.edge(girl_pred, "rel", girl);
    let fstruct = b.finish(clause);
    let cstruct = tree(&sig, "walks");
    Model::new(sig, cstruct, fstruct, zoomin(clause, subj))
}

/// "a girl devours" with the verb's object present only inside its semantic
/// form; completeness fails at the clause.
pub fn a_girl_devours() -> Model {
    let sig = devour_grammar().sig().clone();
    let mut b = FStructureBuilder::new();
    let clause = b.node();
    let pred = b.node();
    let subj = b.node();
    let pst = b.atom("pst");
    let obj = b.node();
    let devour = b.atom("devour");
    let sing = b.atom("sing");
    let girl_pred = b.node();
    let a = b.atom("a");
    let girl = b.atom("girl");
    b.edge(clause, "pred", pred).edge(clause, "subj", subj).edge(clause, "tense", pst);
    b.edge(pred, "obj", obj).edge(pred, "rel", devour).edge(pred, "subj", subj);
    b.edge(subj, "num", sing).edge(subj, "pred", girl_pred).edge(subj, "spec", a);
    b.edge(girl_pred, "rel", girl);
    let fstruct = b.finish(clause);
    let cstruct = tree(&sig, "devours");
    Model::new(sig, cstruct, fstruct, zoomin(clause, subj))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid_and_canonical() {
        for m in [a_girl_walks(), a_girl_devours()] {
            assert!(m.validate().is_valid(), "{:?}", m.validate());
            assert_eq!(m.canonical(), m);
        }
        assert_eq!(a_girl_walks().fstruct().len(), 9);
    }
}
