use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::ids::{FNodeId, Node, TreeId};
use super::tree::Label;
use super::Model;

/// Class of a structural invariant violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    // signature
    EmptySignatureSet,
    BadSymbolName,
    SignatureOverlap,
    EmptyGfPath,
    UnknownGfFeature,
    // c-structure
    MissingRoot,
    RootHasMother,
    DanglingDaughter,
    MotherMismatch,
    MultipleMothers,
    DetachedTreeNode,
    TreeCycle,
    UnknownLabel,
    WordOnInternalNode,
    // f-structure
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
    // zoomin
    ZoominUnknownTreeNode,
    ZoominUnknownFNode,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        use ViolationKind::*;
        match self {
            EmptySignatureSet => "empty signature set",
            BadSymbolName => "bad symbol name",
            SignatureOverlap => "signature overlap",
            EmptyGfPath => "empty governable function",
            UnknownGfFeature => "unknown feature in governable function",
            MissingRoot => "missing root",
            RootHasMother => "root has a mother",
            DanglingDaughter => "dangling daughter",
            MotherMismatch => "mother/daughter mismatch",
            MultipleMothers => "multiple mothers",
            DetachedTreeNode => "tree node unreachable from root",
            TreeCycle => "cycle in tree",
            UnknownLabel => "unknown label",
            WordOnInternalNode => "word form on internal node",
            MissingInitial => "missing initial node",
            DanglingTransition => "dangling transition",
            UnknownFeature => "unknown feature",
            UnreachableFNode => "f-node unreachable from initial",
            CyclicFStructure => "cyclic f-structure",
            TransitionFromFinal => "transition from final node",
            FinalWithoutValuation => "final node without valuation",
            ValuationOnNonFinal => "valuation on non-final node",
            UnknownAtom => "unknown atom",
            UnknownFinal => "final set names unknown node",
            ZoominUnknownTreeNode => "zoomin from unknown tree node",
            ZoominUnknownFNode => "zoomin to unknown f-node",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub nodes: Vec<Node>,
    pub detail: String,
}

impl Violation {
    pub fn new(kind: ViolationKind, detail: impl Into<String>) -> Self {
        Violation { kind, nodes: Vec::new(), detail: detail.into() }
    }

    pub fn at(kind: ViolationKind, nodes: impl IntoIterator<Item = Node>, detail: impl Into<String>) -> Self {
        Violation { kind, nodes: nodes.into_iter().collect(), detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.nodes.is_empty() {
            let ids: Vec<_> = self.nodes.iter().map(ToString::to_string).collect();
            write!(f, " [{}]", ids.join(" "))?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// All violations found in a candidate model; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn kinds(&self) -> BTreeSet<ViolationKind> {
        self.violations.iter().map(|v| v.kind).collect()
    }
}

/// Checks every structural invariant of `m` and reports each violation.
pub fn validate_model(m: &Model) -> ValidationReport {
    let mut out = m.sig.violations();
    check_tree(m, &mut out);
    check_fstruct(m, &mut out);
    check_zoomin(m, &mut out);
    ValidationReport { violations: out }
}

fn check_tree(m: &Model, out: &mut Vec<Violation>) {
    use ViolationKind::*;
    let t = &m.cstruct;
    let root = t.root();
    match t.node(root) {
        None => out.push(Violation::at(MissingRoot, [Node::Tree(root)], "root id is not a tree node")),
        Some(n) if n.mother.is_some() => {
            out.push(Violation::at(RootHasMother, [Node::Tree(root)], "root has a stored mother"))
        }
        Some(_) => {}
    }

    let mut listed: BTreeMap<TreeId, Vec<TreeId>> = BTreeMap::new();
    for (id, node) in t.nodes() {
        for d in &node.daughters {
            listed.entry(*d).or_default().push(id);
            match t.node(*d) {
                None => out.push(Violation::at(
                    DanglingDaughter,
                    [Node::Tree(id), Node::Tree(*d)],
                    "daughter id is not a tree node",
                )),
                Some(dn) if dn.mother != Some(id) => out.push(Violation::at(
                    MotherMismatch,
                    [Node::Tree(id), Node::Tree(*d)],
                    "daughter does not record this node as its mother",
                )),
                Some(_) => {}
            }
        }
        if let Some(mother) = node.mother {
            let ok = t.node(mother).map(|mn| mn.daughters.contains(&id)).unwrap_or(false);
            if !ok {
                out.push(Violation::at(
                    MotherMismatch,
                    [Node::Tree(id), Node::Tree(mother)],
                    "stored mother does not list this node as a daughter",
                ));
            }
        }
        match &node.label {
            Label::Cat(c) if !m.sig.is_cat(c) => {
                out.push(Violation::at(UnknownLabel, [Node::Tree(id)], format!("category {c:?} not declared")))
            }
            Label::Word(w) if !m.sig.is_word(w) => {
                out.push(Violation::at(UnknownLabel, [Node::Tree(id)], format!("word {w:?} not declared")))
            }
            Label::Word(w) if !node.daughters.is_empty() => out.push(Violation::at(
                WordOnInternalNode,
                [Node::Tree(id)],
                format!("word {w:?} labels a node with daughters"),
            )),
            _ => {}
        }
    }
    for (d, mothers) in &listed {
        if mothers.len() > 1 {
            let mut nodes = vec![Node::Tree(*d)];
            nodes.extend(mothers.iter().map(|x| Node::Tree(*x)));
            out.push(Violation::at(MultipleMothers, nodes, "node is listed as a daughter more than once"));
        }
    }

    // connectedness and acyclicity of the daughter relation
    let reached: BTreeSet<TreeId> = t.preorder().into_iter().collect();
    for id in t.ids() {
        if !reached.contains(&id) {
            out.push(Violation::at(DetachedTreeNode, [Node::Tree(id)], "not a descendant of the root"));
        }
    }
    if let Some(cycle) = find_cycle(t.ids(), |id| t.daughters(id).to_vec()) {
        out.push(Violation::at(TreeCycle, cycle.into_iter().map(Node::Tree), "daughter relation has a cycle"));
    }
}

fn check_fstruct(m: &Model, out: &mut Vec<Violation>) {
    use ViolationKind::*;
    let f = &m.fstruct;
    if !f.contains(f.initial()) {
        out.push(Violation::at(MissingInitial, [Node::F(f.initial())], "initial id is not an f-node"));
    }
    for w in f.finals() {
        if !f.contains(*w) {
            out.push(Violation::at(UnknownFinal, [Node::F(*w)], "listed as final but not an f-node"));
        }
    }
    for (id, node) in f.nodes() {
        for (feat, target) in &node.trans {
            if !m.sig.is_feat(feat) {
                out.push(Violation::at(UnknownFeature, [Node::F(id)], format!("feature {feat:?} not declared")));
            }
            if !f.contains(*target) {
                out.push(Violation::at(
                    DanglingTransition,
                    [Node::F(id), Node::F(*target)],
                    format!("{feat} leads to a missing node"),
                ));
            }
        }
        let is_final = f.is_final(id);
        if is_final && !node.trans.is_empty() {
            let feats: Vec<_> = node.trans.keys().cloned().collect();
            out.push(Violation::at(
                TransitionFromFinal,
                [Node::F(id)],
                format!("final node has outgoing {}", feats.join(", ")),
            ));
        }
        match (&node.atom, is_final) {
            (None, true) => out.push(Violation::at(FinalWithoutValuation, [Node::F(id)], "final node has no atom")),
            (Some(a), false) => {
                out.push(Violation::at(ValuationOnNonFinal, [Node::F(id)], format!("atom {a:?} on a non-final node")))
            }
            _ => {}
        }
        if let Some(a) = &node.atom {
            if !m.sig.is_atom(a) {
                out.push(Violation::at(UnknownAtom, [Node::F(id)], format!("atom {a:?} not declared")));
            }
        }
    }
    if f.contains(f.initial()) {
        let reached: BTreeSet<FNodeId> = f.bfs().into_iter().map(|(w, _)| w).collect();
        for id in f.ids() {
            if !reached.contains(&id) {
                out.push(Violation::at(UnreachableFNode, [Node::F(id)], "not reachable from initial"));
            }
        }
    }
    let succ = |w: FNodeId| -> Vec<FNodeId> {
        f.node(w).map(|n| n.trans.values().copied().filter(|t| f.contains(*t)).collect()).unwrap_or_default()
    };
    if let Some(cycle) = find_cycle(f.ids(), succ) {
        out.push(Violation::at(CyclicFStructure, cycle.into_iter().map(Node::F), "feature graph has a cycle"));
    }
}

fn check_zoomin(m: &Model, out: &mut Vec<Violation>) {
    for (t, w) in &m.zoomin {
        if !m.cstruct.contains(*t) {
            out.push(Violation::at(ViolationKind::ZoominUnknownTreeNode, [Node::Tree(*t)], "not a tree node"));
        }
        if !m.fstruct.contains(*w) {
            out.push(Violation::at(
                ViolationKind::ZoominUnknownFNode,
                [Node::Tree(*t), Node::F(*w)],
                "image is not an f-node",
            ));
        }
    }
}

/// Returns the nodes of some cycle, if the graph has one. Iterative
/// three-colour DFS; successors outside `ids` are ignored by the caller.
fn find_cycle<I, F>(ids: impl Iterator<Item = I>, succ: F) -> Option<Vec<I>>
where
    I: Copy + Ord,
    F: Fn(I) -> Vec<I>,
{
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        Grey,
        Black,
    }
    let mut colour: BTreeMap<I, Colour> = BTreeMap::new();
    for start in ids {
        if colour.contains_key(&start) {
            continue;
        }
        let mut path: Vec<I> = vec![start];
        let mut stack: Vec<(I, Vec<I>)> = vec![(start, succ(start))];
        colour.insert(start, Colour::Grey);
        while let Some((_, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(next) => match colour.get(&next) {
                    Some(Colour::Grey) => {
                        let pos = path.iter().position(|x| *x == next).expect("grey nodes are on the path");
                        return Some(path[pos..].to_vec());
                    }
                    Some(Colour::Black) => {}
                    None => {
                        colour.insert(next, Colour::Grey);
                        path.push(next);
                        stack.push((next, succ(next)));
                    }
                },
                None => {
                    let (done, _) = stack.pop().expect("non-empty");
                    colour.insert(done, Colour::Black);
                    path.pop();
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_finder() {
        let edges = |n: u32| -> Vec<u32> {
            match n {
                0 => vec![1],
                1 => vec![2],
                2 => vec![0],
                _ => vec![],
            }
        };
        let c = find_cycle(0..4u32, edges).unwrap();
        assert_eq!(c.len(), 3);
        assert!(find_cycle(0..4u32, |n| if n < 3 { vec![n + 1] } else { vec![] }).is_none());
        assert!(find_cycle(0..1u32, |_| vec![0]).is_some());
    }
}
