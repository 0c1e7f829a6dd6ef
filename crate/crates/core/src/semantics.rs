//! The satisfaction relation `M, n ⊨ φ` and validity `M ⊨ φ`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{Formula, FormulaError, PathEq, PathTerm, TreeStep};
use crate::model::{FNodeId, Label, Model, Node, TreeId};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum EvalError {
    #[error(transparent)]
    Name(#[from] FormulaError),
    #[error("node {0} is not in the model")]
    UnknownNode(Node),
}

/// Whether `phi` holds at node `n` of `m`.
pub fn satisfies(m: &Model, n: Node, phi: &Formula) -> Result<bool, EvalError> {
    phi.check_names(m.sig())?;
    if !m.contains(n) {
        return Err(EvalError::UnknownNode(n));
    }
    Ok(holds(m, n, phi))
}

/// Whether the path equality holds at tree node `n`.
pub fn eval_patheq(m: &Model, n: TreeId, eq: &PathEq) -> Result<bool, EvalError> {
    satisfies(m, Node::Tree(n), &Formula::PathEq(eq.clone()))
}

/// `None` when `phi` holds at every node of both domains, otherwise the
/// least falsifying node in node order.
pub fn valid(m: &Model, phi: &Formula) -> Result<Option<Node>, EvalError> {
    phi.check_names(m.sig())?;
    let nodes: Vec<Node> = m.nodes().collect();
    // small models are cheaper to scan than to fan out
    if nodes.len() < 256 {
        return Ok(nodes.into_iter().find(|n| !holds(m, *n, phi)));
    }
    Ok(nodes.into_par_iter().find_first(|n| !holds(m, *n, phi)))
}

/// Evaluation without name or node checks; callers guarantee both.
pub(crate) fn holds(m: &Model, n: Node, phi: &Formula) -> bool {
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::CStruct => matches!(n, Node::Tree(_)),
        Formula::FStruct => matches!(n, Node::F(_)),
        Formula::Cat(c) => match n {
            Node::Tree(t) => matches!(m.cstruct().label(t), Some(Label::Cat(l)) if l == c),
            Node::F(_) => false,
        },
        Formula::Word(w) => match n {
            Node::Tree(t) => matches!(m.cstruct().label(t), Some(Label::Word(l)) if l == w),
            Node::F(_) => false,
        },
        Formula::Atom(a) => match n {
            Node::F(w) => m.fstruct().atom(w) == Some(a.as_str()),
            Node::Tree(_) => false,
        },
        Formula::Not(g) => !holds(m, n, g),
        Formula::And(a, b) => holds(m, n, a) && holds(m, n, b),
        Formula::Or(a, b) => holds(m, n, a) || holds(m, n, b),
        Formula::Implies(a, b) => !holds(m, n, a) || holds(m, n, b),
        Formula::Iff(a, b) => holds(m, n, a) == holds(m, n, b),
        Formula::Feat(feat, g) => match n {
            Node::F(w) => m.fstruct().step(w, feat).is_some_and(|v| holds(m, Node::F(v), g)),
            Node::Tree(_) => false,
        },
        Formula::Up(g) => match n {
            Node::Tree(t) => m.cstruct().mother(t).is_some_and(|p| holds(m, Node::Tree(p), g)),
            Node::F(_) => false,
        },
        Formula::Down(g) => match n {
            Node::Tree(t) => m.cstruct().daughters(t).iter().any(|d| holds(m, Node::Tree(*d), g)),
            Node::F(_) => false,
        },
        Formula::Zoomin(g) => match n {
            Node::Tree(t) => m.zoom(t).is_some_and(|w| holds(m, Node::F(w), g)),
            Node::F(_) => false,
        },
        Formula::Bullet(args) => match n {
            Node::Tree(t) => {
                let ds = m.cstruct().daughters(t);
                ds.len() == args.len() && ds.iter().zip(args.iter()).all(|(d, g)| holds(m, Node::Tree(*d), g))
            }
            Node::F(_) => false,
        },
        Formula::PathEq(eq) => match n {
            Node::Tree(t) => {
                let left = image(m, t, &eq.left);
                !left.is_empty() && !image(m, t, &eq.right).is_disjoint(&left)
            }
            Node::F(_) => false,
        },
    }
}

/// The f-nodes reached from `t` along `term`: tree steps, zoomin, then features.
pub fn image(m: &Model, t: TreeId, term: &PathTerm) -> BTreeSet<FNodeId> {
    let mut here: BTreeSet<TreeId> = BTreeSet::from([t]);
    for step in &term.tree {
        here = match step {
            TreeStep::Up => here.iter().filter_map(|x| m.cstruct().mother(*x)).collect(),
            TreeStep::Down => here.iter().flat_map(|x| m.cstruct().daughters(*x).iter().copied()).collect(),
        };
    }
    let mut fs: BTreeSet<FNodeId> = here.iter().filter_map(|x| m.zoom(*x)).collect();
    for feat in &term.feats {
        fs = fs.iter().filter_map(|w| m.fstruct().step(*w, feat)).collect();
    }
    fs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::parse_formula;

    fn check(m: &Model, n: Node, text: &str) -> bool {
        let f = parse_formula(text, m.sig()).unwrap();
        satisfies(m, n, &f).unwrap()
    }

    #[test]
    fn figure1_examples() {
        let m = fixtures::a_girl_walks();
        let (s, np, det, n, vp, v) = (TreeId(0), TreeId(1), TreeId(2), TreeId(4), TreeId(6), TreeId(7));
        assert!(check(&m, Node::Tree(s), "bullet(NP, VP)"));
        assert!(check(&m, Node::Tree(np), "up zoomin subj ~ zoomin"));
        assert!(!check(&m, Node::Tree(vp), "<subj> true"));
        assert!(check(&m, Node::Tree(vp), "up zoomin ~ zoomin"));
        assert!(check(&m, Node::Tree(v), "up zoomin ~ zoomin"));
        assert!(!check(&m, Node::Tree(det), "up zoomin ~ zoomin"));
        assert!(!check(&m, Node::Tree(n), "zoomin true"));
        for node in m.nodes() {
            assert!(check(&m, node, "true"));
            assert!(!check(&m, node, "false"));
        }
    }

    #[test]
    fn empty_path_equality_needs_a_zoomin_image() {
        let m = fixtures::a_girl_walks();
        assert!(check(&m, Node::Tree(TreeId(0)), "zoomin ~ zoomin"));
        assert!(!check(&m, Node::Tree(TreeId(2)), "zoomin ~ zoomin"));
    }

    #[test]
    fn sorted_clauses_are_false_in_the_other_domain() {
        let m = fixtures::a_girl_walks();
        let w = Node::F(m.fstruct().initial());
        assert!(!check(&m, w, "up true"));
        assert!(!check(&m, w, "down true"));
        assert!(!check(&m, w, "zoomin true"));
        assert!(!check(&m, w, "bullet(true)"));
        assert!(!check(&m, w, "zoomin ~ zoomin"));
        assert!(!check(&m, w, "S"));
        assert!(check(&m, w, "fstruct & <tense> pst"));
        assert!(!check(&m, Node::Tree(TreeId(0)), "pst"));
    }

    #[test]
    fn valid_returns_least_counterexample() {
        let m = fixtures::a_girl_walks();
        assert_eq!(valid(&m, &Formula::True).unwrap(), None);
        assert_eq!(valid(&m, &Formula::False).unwrap(), Some(Node::Tree(TreeId(0))));
        assert_eq!(valid(&m, &Formula::CStruct).unwrap(), Some(Node::F(FNodeId(0))));
    }

    #[test]
    fn errors_for_unknown_names_and_nodes() {
        let m = fixtures::a_girl_walks();
        let f = Formula::feat("case", Formula::True);
        assert!(matches!(satisfies(&m, Node::Tree(TreeId(0)), &f), Err(EvalError::Name(_))));
        assert!(matches!(valid(&m, &f), Err(EvalError::Name(_))));
        assert_eq!(
            satisfies(&m, Node::Tree(TreeId(99)), &Formula::True),
            Err(EvalError::UnknownNode(Node::Tree(TreeId(99))))
        );
    }

    #[test]
    fn eval_patheq_directly() {
        let m = fixtures::a_girl_walks();
        let eq = PathEq::new(PathTerm::new([TreeStep::Up], Vec::<String>::new()), PathTerm::default());
        assert!(eval_patheq(&m, TreeId(6), &eq).unwrap());
        assert!(!eval_patheq(&m, TreeId(2), &eq).unwrap());
    }
}
