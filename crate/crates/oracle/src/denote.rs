//! Denotation sets `{n : M, n ⊨ φ}` computed bottom-up, with path
//! equalities evaluated by composing whole relations.

use std::collections::BTreeSet;

use lfgmc_core::model::{Label, Model, Node};
use lfgmc_core::{Formula, PathTerm, TreeStep};

type Rel = BTreeSet<(Node, Node)>;

fn tree_rel(m: &Model, step: TreeStep) -> Rel {
    let mut r = Rel::new();
    for t in m.cstruct().ids() {
        for d in m.cstruct().daughters(t) {
            match step {
                TreeStep::Down => r.insert((Node::Tree(t), Node::Tree(*d))),
                TreeStep::Up => r.insert((Node::Tree(*d), Node::Tree(t))),
            };
        }
    }
    r
}

fn feat_rel(m: &Model, feat: &str) -> Rel {
    m.fstruct().nodes().filter_map(|(w, n)| n.trans.get(feat).map(|v| (Node::F(w), Node::F(*v)))).collect()
}

fn zoom_rel(m: &Model) -> Rel {
    m.zoomin().iter().map(|(t, w)| (Node::Tree(*t), Node::F(*w))).collect()
}

fn compose(a: &Rel, b: &Rel) -> Rel {
    let mut out = Rel::new();
    for (x, y) in a {
        for (y2, z) in b.range((*y, Node::Tree(lfgmc_core::TreeId(0)))..) {
            if y2 != y {
                break;
            }
            out.insert((*x, *z));
        }
    }
    out
}

fn term_rel(m: &Model, t: &PathTerm) -> Rel {
    let mut r: Rel = m.cstruct().ids().map(|x| (Node::Tree(x), Node::Tree(x))).collect();
    for s in &t.tree {
        r = compose(&r, &tree_rel(m, *s));
    }
    r = compose(&r, &zoom_rel(m));
    for f in &t.feats {
        r = compose(&r, &feat_rel(m, f));
    }
    r
}

pub fn universe(m: &Model) -> BTreeSet<Node> {
    m.nodes().collect()
}

/// The set of nodes of `m` where `phi` holds.
pub fn denotation(m: &Model, phi: &Formula) -> BTreeSet<Node> {
    let all = universe(m);
    let trees: BTreeSet<Node> = all.iter().copied().filter(|n| matches!(n, Node::Tree(_))).collect();
    let fs: BTreeSet<Node> = all.iter().copied().filter(|n| matches!(n, Node::F(_))).collect();
    let pre = |r: &Rel, target: &BTreeSet<Node>| -> BTreeSet<Node> {
        r.iter().filter(|(_, y)| target.contains(y)).map(|(x, _)| *x).collect()
    };
    match phi {
        Formula::True => all,
        Formula::False => BTreeSet::new(),
        Formula::CStruct => trees,
        Formula::FStruct => fs,
        Formula::Cat(c) => trees
            .into_iter()
            .filter(|n| match n {
                Node::Tree(t) => matches!(m.cstruct().label(*t), Some(Label::Cat(l)) if l == c),
                _ => false,
            })
            .collect(),
        Formula::Word(w) => trees
            .into_iter()
            .filter(|n| match n {
                Node::Tree(t) => matches!(m.cstruct().label(*t), Some(Label::Word(l)) if l == w),
                _ => false,
            })
            .collect(),
        Formula::Atom(a) => fs
            .into_iter()
            .filter(|n| match n {
                Node::F(w) => {
                    m.fstruct().finals().contains(w) && m.fstruct().node(*w).and_then(|x| x.atom.as_deref()) == Some(a)
                }
                _ => false,
            })
            .collect(),
        Formula::Not(g) => all.difference(&denotation(m, g)).copied().collect(),
        Formula::And(a, b) => denotation(m, a).intersection(&denotation(m, b)).copied().collect(),
        Formula::Or(a, b) => denotation(m, a).union(&denotation(m, b)).copied().collect(),
        Formula::Implies(a, b) => {
            let na: BTreeSet<Node> = all.difference(&denotation(m, a)).copied().collect();
            na.union(&denotation(m, b)).copied().collect()
        }
        Formula::Iff(a, b) => {
            let (da, db) = (denotation(m, a), denotation(m, b));
            all.into_iter().filter(|n| da.contains(n) == db.contains(n)).collect()
        }
        Formula::Feat(f, g) => pre(&feat_rel(m, f), &denotation(m, g)),
        Formula::Up(g) => pre(&tree_rel(m, TreeStep::Up), &denotation(m, g)),
        Formula::Down(g) => pre(&tree_rel(m, TreeStep::Down), &denotation(m, g)),
        Formula::Zoomin(g) => pre(&zoom_rel(m), &denotation(m, g)),
        Formula::Bullet(args) => {
            let ds: Vec<BTreeSet<Node>> = args.iter().map(|g| denotation(m, g)).collect();
            trees
                .into_iter()
                .filter(|n| {
                    let Node::Tree(t) = n else { return false };
                    let kids = m.cstruct().daughters(*t);
                    kids.len() == ds.len() && kids.iter().zip(&ds).all(|(k, d)| d.contains(&Node::Tree(*k)))
                })
                .collect()
        }
        Formula::PathEq(eq) => {
            let common: Rel = term_rel(m, &eq.left).intersection(&term_rel(m, &eq.right)).copied().collect();
            common.into_iter().map(|(x, _)| x).collect()
        }
    }
}

/// `None` when `phi` denotes every node, else the least node outside it.
pub fn counterexample(m: &Model, phi: &Formula) -> Option<Node> {
    let d = denotation(m, phi);
    universe(m).into_iter().find(|n| !d.contains(n))
}
