//! Targeted corruptions of valid models, one per violation kind.

use std::collections::BTreeSet;

use lfgmc_core::model::{CStructure, FNode, FNodeId, FStructure, Label, Model, Signature, TreeId, TreeNode};
use lfgmc_core::ViolationKind;

pub const ALL_KINDS: [ViolationKind; 26] = {
    use ViolationKind::*;
    [
        EmptySignatureSet,
        BadSymbolName,
        SignatureOverlap,
        EmptyGfPath,
        UnknownGfFeature,
        MissingRoot,
        RootHasMother,
        DanglingDaughter,
        MotherMismatch,
        MultipleMothers,
        DetachedTreeNode,
        TreeCycle,
        UnknownLabel,
        WordOnInternalNode,
        MissingInitial,
        DanglingTransition,
        UnknownFeature,
        UnreachableFNode,
        CyclicFStructure,
        TransitionFromFinal,
        FinalWithoutValuation,
        ValuationOnNonFinal,
        UnknownAtom,
        UnknownFinal,
        ZoominUnknownTreeNode,
        ZoominUnknownFNode,
    ]
};

struct Sig {
    cats: BTreeSet<String>,
    atoms: BTreeSet<String>,
    feats: BTreeSet<String>,
    words: BTreeSet<String>,
    gf: Vec<Vec<String>>,
}

impl Sig {
    fn of(s: &Signature) -> Self {
        Sig {
            cats: s.cats().clone(),
            atoms: s.atoms().clone(),
            feats: s.feats().clone(),
            words: s.words().clone(),
            gf: s.gf().iter().map(|p| p.to_vec()).collect(),
        }
    }

    fn build(self) -> Signature {
        Signature::new(self.cats, self.atoms, self.feats).with_words(self.words).with_gf(self.gf)
    }
}

/// Adds an edge from `from` to `to`, on a free feature when there is one.
fn attach(sig: &Signature, nodes: &mut std::collections::BTreeMap<FNodeId, FNode>, from: FNodeId, to: FNodeId) {
    let node = nodes.get_mut(&from).expect("source exists");
    let feat = sig
        .feats()
        .iter()
        .find(|f| !node.trans.contains_key(*f))
        .or_else(|| sig.feats().iter().next())
        .expect("signature has features")
        .clone();
    node.trans.insert(feat, to);
}

/// `m` (assumed valid) changed so that its report contains `kind`.
pub fn corrupt(m: &Model, kind: ViolationKind) -> Model {
    use ViolationKind::*;
    let (sig, cs, fs, mut zoomin) = m.clone().into_parts();
    let (root, mut tnodes) = cs.into_parts();
    let (initial, mut fnodes, mut finals) = fs.into_parts();
    let new_t = TreeId(tnodes.keys().map(|t| t.0).max().map_or(0, |x| x + 1));
    let new_t2 = TreeId(new_t.0 + 1);
    let new_f = FNodeId(fnodes.keys().map(|w| w.0).max().map_or(0, |x| x + 1));
    let mut s = Sig::of(&sig);
    let leaf = |mother: Option<TreeId>| TreeNode {
        label: Label::Cat(sig.cats().iter().next().expect("a category").clone()),
        mother,
        daughters: Vec::new(),
    };
    let mut sig_changed = true;
    match kind {
        EmptySignatureSet => s.atoms.clear(),
        BadSymbolName => {
            s.cats.insert("9bad".into());
        }
        SignatureOverlap => {
            let f = s.feats.iter().next().expect("a feature").clone();
            s.cats.insert(f);
        }
        EmptyGfPath => s.gf.push(Vec::new()),
        UnknownGfFeature => s.gf.push(vec!["zz_unknown".into()]),
        _ => sig_changed = false,
    }
    let mut new_sig = if sig_changed { s.build() } else { sig.clone() };
    let mut root_id = root;
    let mut initial_id = initial;
    match kind {
        MissingRoot => root_id = new_t,
        RootHasMother => tnodes.get_mut(&root).expect("root").mother = Some(root),
        DanglingDaughter => tnodes.get_mut(&root).expect("root").daughters.push(new_t),
        MotherMismatch => {
            tnodes.insert(new_t, leaf(Some(root)));
        }
        MultipleMothers => {
            tnodes.insert(new_t, leaf(Some(root)));
            let r = tnodes.get_mut(&root).expect("root");
            r.daughters.push(new_t);
            r.daughters.push(new_t);
        }
        DetachedTreeNode => {
            tnodes.insert(new_t, leaf(None));
        }
        TreeCycle => {
            let mut a = leaf(Some(new_t2));
            a.daughters.push(new_t2);
            let mut b = leaf(Some(new_t));
            b.daughters.push(new_t);
            tnodes.insert(new_t, a);
            tnodes.insert(new_t2, b);
        }
        UnknownLabel => tnodes.get_mut(&root).expect("root").label = Label::Cat("ZzUnknown".into()),
        WordOnInternalNode => {
            let word = match sig.words().iter().next() {
                Some(w) => w.clone(),
                None => {
                    new_sig = Sig { words: ["w0".to_string()].into(), ..Sig::of(&sig) }.build();
                    "w0".to_string()
                }
            };
            tnodes.insert(new_t, leaf(Some(root)));
            let r = tnodes.get_mut(&root).expect("root");
            r.daughters.push(new_t);
            r.label = Label::Word(word);
        }
        MissingInitial => initial_id = new_f,
        DanglingTransition => attach(&sig, &mut fnodes, initial, new_f),
        UnknownFeature => {
            fnodes.insert(new_f, FNode::default());
            fnodes.get_mut(&initial).expect("initial").trans.insert("zz_unknown".into(), new_f);
        }
        UnreachableFNode => {
            fnodes.insert(new_f, FNode::default());
        }
        CyclicFStructure => attach(&sig, &mut fnodes, initial, initial),
        TransitionFromFinal => {
            fnodes.insert(new_f, FNode::default());
            attach(&sig, &mut fnodes, initial, new_f);
            finals.insert(initial);
        }
        FinalWithoutValuation => {
            fnodes.insert(new_f, FNode::default());
            attach(&sig, &mut fnodes, initial, new_f);
            finals.insert(new_f);
        }
        ValuationOnNonFinal => {
            let atom = sig.atoms().iter().next().expect("an atom").clone();
            fnodes.insert(new_f, FNode { trans: Default::default(), atom: Some(atom) });
            attach(&sig, &mut fnodes, initial, new_f);
        }
        UnknownAtom => {
            fnodes.insert(new_f, FNode { trans: Default::default(), atom: Some("zz_unknown".into()) });
            attach(&sig, &mut fnodes, initial, new_f);
            finals.insert(new_f);
        }
        UnknownFinal => {
            finals.insert(new_f);
        }
        ZoominUnknownTreeNode => {
            zoomin.insert(new_t, initial);
        }
        ZoominUnknownFNode => {
            zoomin.insert(root, new_f);
        }
        _ => {}
    }
    Model::new(
        new_sig,
        CStructure::from_parts(root_id, tnodes),
        FStructure::from_parts(initial_id, fnodes, finals),
        zoomin,
    )
}
