use std::ops::Deref;

use thiserror::Error;

use crate::model::Signature;

/// One step through the tree in the prefix of a path equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeStep {
    Up,
    Down,
}

/// `tree zoomin feats`: a tree walk, the zoomin link, then a feature path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PathTerm {
    pub tree: Vec<TreeStep>,
    pub feats: Vec<String>,
}

impl PathTerm {
    pub fn new(tree: impl Into<Vec<TreeStep>>, feats: impl IntoIterator<Item = impl Into<String>>) -> Self {
        PathTerm { tree: tree.into(), feats: feats.into_iter().map(Into::into).collect() }
    }
}

/// `left ≈ right`, true at a tree node when both composite walks can end at
/// a common f-node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathEq {
    pub left: PathTerm,
    pub right: PathTerm,
}

impl PathEq {
    pub fn new(left: PathTerm, right: PathTerm) -> Self {
        PathEq { left, right }
    }

    pub fn swapped(&self) -> PathEq {
        PathEq { left: self.right.clone(), right: self.left.clone() }
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum FormulaError {
    #[error("bullet needs at least one argument")]
    EmptyBullet,
    #[error("{kind} {name:?} is not declared in the signature")]
    UnknownName { kind: &'static str, name: String },
}

/// The arguments of a bullet; never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BulletArgs(Vec<Formula>);

impl BulletArgs {
    pub fn new(args: Vec<Formula>) -> Result<Self, FormulaError> {
        if args.is_empty() {
            Err(FormulaError::EmptyBullet)
        } else {
            Ok(BulletArgs(args))
        }
    }

    pub fn into_vec(self) -> Vec<Formula> {
        self.0
    }
}

impl Deref for BulletArgs {
    type Target = [Formula];
    fn deref(&self) -> &[Formula] {
        &self.0
    }
}

/// A formula of the specification language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    CStruct,
    FStruct,
    Cat(String),
    Atom(String),
    /// Word-form literal, true at a leaf labeled with that word.
    Word(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `<feat> φ`
    Feat(String, Box<Formula>),
    Up(Box<Formula>),
    Down(Box<Formula>),
    Zoomin(Box<Formula>),
    Bullet(BulletArgs),
    PathEq(PathEq),
}

impl Formula {
    pub fn cat(name: impl Into<String>) -> Self {
        Formula::Cat(name.into())
    }

    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn word(name: impl Into<String>) -> Self {
        Formula::Word(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn feat(name: impl Into<String>, f: Formula) -> Self {
        Formula::Feat(name.into(), Box::new(f))
    }

    /// `<p1> … <pn> f`.
    pub fn feats<S: AsRef<str>>(path: &[S], f: Formula) -> Self {
        path.iter().rev().fold(f, |acc, p| Formula::feat(p.as_ref(), acc))
    }

    pub fn up(f: Formula) -> Self {
        Formula::Up(Box::new(f))
    }

    pub fn down(f: Formula) -> Self {
        Formula::Down(Box::new(f))
    }

    pub fn zoomin(f: Formula) -> Self {
        Formula::Zoomin(Box::new(f))
    }

    pub fn bullet(args: Vec<Formula>) -> Result<Self, FormulaError> {
        BulletArgs::new(args).map(Formula::Bullet)
    }

    pub fn path_eq(left: PathTerm, right: PathTerm) -> Self {
        Formula::PathEq(PathEq::new(left, right))
    }

    /// Left-nested conjunction in iteration order; `None` when empty.
    pub fn conjoin(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction in iteration order; `None` when empty.
    pub fn disjoin(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// Nesting depth; literals and constants have depth 0.
    pub fn depth(&self) -> usize {
        use Formula::*;
        match self {
            True | False | CStruct | FStruct | Cat(_) | Atom(_) | Word(_) | PathEq(_) => 0,
            Not(f) | Feat(_, f) | Up(f) | Down(f) | Zoomin(f) => 1 + f.depth(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => 1 + a.depth().max(b.depth()),
            Bullet(args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    /// Direct subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | CStruct | FStruct | Cat(_) | Atom(_) | Word(_) | PathEq(_) => Vec::new(),
            Not(f) | Feat(_, f) | Up(f) | Down(f) | Zoomin(f) => vec![f],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => vec![a, b],
            Bullet(args) => args.iter().collect(),
        }
    }

    /// Checks that every name used is declared in `sig` with the right kind.
    pub fn check_names(&self, sig: &Signature) -> Result<(), FormulaError> {
        let unknown = |kind: &'static str, name: &str| FormulaError::UnknownName { kind, name: name.to_string() };
        match self {
            Formula::Cat(c) if !sig.is_cat(c) => return Err(unknown("category", c)),
            Formula::Atom(a) if !sig.is_atom(a) => return Err(unknown("atom", a)),
            Formula::Word(w) if !sig.is_word(w) => return Err(unknown("word", w)),
            Formula::Feat(f, _) if !sig.is_feat(f) => return Err(unknown("feature", f)),
            Formula::PathEq(eq) => {
                for f in eq.left.feats.iter().chain(&eq.right.feats) {
                    if !sig.is_feat(f) {
                        return Err(unknown("feature", f));
                    }
                }
            }
            _ => {}
        }
        self.children().into_iter().try_for_each(|c| c.check_names(sig))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bullet_rejects_zero_arity() {
        assert_eq!(Formula::bullet(vec![]), Err(FormulaError::EmptyBullet));
        assert!(Formula::bullet(vec![Formula::True]).is_ok());
    }

    #[test]
    fn feats_nests_in_order() {
        let f = Formula::feats(&["obl", "obj"], Formula::True);
        assert_eq!(f, Formula::feat("obl", Formula::feat("obj", Formula::True)));
    }

    #[test]
    fn conjoin_is_left_nested() {
        let f = Formula::conjoin([Formula::cat("A"), Formula::cat("B"), Formula::cat("C")]).unwrap();
        assert_eq!(f, Formula::and(Formula::and(Formula::cat("A"), Formula::cat("B")), Formula::cat("C")));
        assert_eq!(Formula::conjoin([]), None);
    }

    #[test]
    fn name_checks() {
        let sig = Signature::new(["S"], ["sg"], ["num"]);
        assert!(Formula::feat("num", Formula::atom("sg")).check_names(&sig).is_ok());
        let err = Formula::feat("case", Formula::True).check_names(&sig).unwrap_err();
        assert_eq!(err, FormulaError::UnknownName { kind: "feature", name: "case".into() });
        let eq = Formula::path_eq(PathTerm::new([TreeStep::Up], ["subj"]), PathTerm::default());
        assert!(eq.check_names(&sig).is_err());
    }
}
