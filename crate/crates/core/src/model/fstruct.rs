use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::ids::FNodeId;
use super::signature::Signature;
use super::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FNode {
    /// `f_α` restricted to this node; a map, so each feature has at most one value.
    pub trans: BTreeMap<String, FNodeId>,
    pub atom: Option<String>,
}

/// A rooted feature graph: partial feature functions, a distinguished initial
/// node, final nodes and their atomic values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FStructure {
    initial: FNodeId,
    nodes: BTreeMap<FNodeId, FNode>,
    finals: BTreeSet<FNodeId>,
}

impl FStructure {
    pub fn from_parts(initial: FNodeId, nodes: BTreeMap<FNodeId, FNode>, finals: BTreeSet<FNodeId>) -> Self {
        FStructure { initial, nodes, finals }
    }

    /// Final nodes are exactly the ones carrying an atom.
    pub fn from_nodes(initial: FNodeId, nodes: BTreeMap<FNodeId, FNode>) -> Self {
        let finals = nodes.iter().filter(|(_, n)| n.atom.is_some()).map(|(id, _)| *id).collect();
        FStructure { initial, nodes, finals }
    }

    pub fn into_parts(self) -> (FNodeId, BTreeMap<FNodeId, FNode>, BTreeSet<FNodeId>) {
        (self.initial, self.nodes, self.finals)
    }

    pub fn initial(&self) -> FNodeId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<FNodeId> {
        &self.finals
    }

    pub fn is_final(&self, w: FNodeId) -> bool {
        self.finals.contains(&w)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, w: FNodeId) -> bool {
        self.nodes.contains_key(&w)
    }

    pub fn node(&self, w: FNodeId) -> Option<&FNode> {
        self.nodes.get(&w)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (FNodeId, &FNode)> + '_ {
        self.nodes.iter().map(|(k, v)| (*k, v))
    }

    pub fn ids(&self) -> impl Iterator<Item = FNodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn transition_count(&self) -> usize {
        self.nodes.values().map(|n| n.trans.len()).sum()
    }

    /// `f_feat(w)`.
    pub fn step(&self, w: FNodeId, feat: &str) -> Option<FNodeId> {
        self.nodes.get(&w).and_then(|n| n.trans.get(feat)).copied()
    }

    /// The atom `V_f(w)`, defined on final nodes only.
    pub fn atom(&self, w: FNodeId) -> Option<&str> {
        if !self.finals.contains(&w) {
            return None;
        }
        self.nodes.get(&w).and_then(|n| n.atom.as_deref())
    }

    /// Composes the feature functions along `path` starting at `start`.
    /// `Ok(None)` means some step is undefined.
    pub fn feature_image<S: AsRef<str>>(
        &self,
        sig: &Signature,
        start: FNodeId,
        path: &[S],
    ) -> Result<Option<FNodeId>, ModelError> {
        if let Some(bad) = path.iter().find(|f| !sig.is_feat(f.as_ref())) {
            return Err(ModelError::UnknownFeature(bad.as_ref().to_string()));
        }
        if !self.contains(start) {
            return Err(ModelError::UnknownFNode(start));
        }
        let mut cur = start;
        for f in path {
            match self.step(cur, f.as_ref()) {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// BFS from the initial node, visiting features in name order. Each
    /// reached node is paired with the first path that reaches it.
    pub fn bfs(&self) -> Vec<(FNodeId, Vec<String>)> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        if self.contains(self.initial) {
            seen.insert(self.initial);
            queue.push_back((self.initial, Vec::new()));
        }
        while let Some((w, path)) = queue.pop_front() {
            if let Some(node) = self.nodes.get(&w) {
                for (feat, next) in &node.trans {
                    if self.contains(*next) && seen.insert(*next) {
                        let mut p = path.clone();
                        p.push(feat.clone());
                        queue.push_back((*next, p));
                    }
                }
            }
            out.push((w, path));
        }
        out
    }
}

/// Incremental construction of f-structures; ids are handed out in creation order.
#[derive(Debug, Default)]
pub struct FStructureBuilder {
    nodes: BTreeMap<FNodeId, FNode>,
    next: u32,
}

impl FStructureBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self) -> FNodeId {
        let id = FNodeId(self.next);
        self.next += 1;
        self.nodes.insert(id, FNode::default());
        id
    }

    /// A final node valued `atom`.
    pub fn atom(&mut self, atom: impl Into<String>) -> FNodeId {
        let id = self.node();
        self.nodes.get_mut(&id).expect("just added").atom = Some(atom.into());
        id
    }

    pub fn edge(&mut self, from: FNodeId, feat: impl Into<String>, to: FNodeId) -> &mut Self {
        self.nodes.entry(from).or_default().trans.insert(feat.into(), to);
        self
    }

    pub fn finish(self, initial: FNodeId) -> FStructure {
        FStructure::from_nodes(initial, self.nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Signature, FStructure) {
        let sig = Signature::new(["S"], ["sg", "pst"], ["subj", "num", "tense"]);
        let mut b = FStructureBuilder::new();
        let root = b.node();
        let subj = b.node();
        let sg = b.atom("sg");
        let pst = b.atom("pst");
        b.edge(root, "subj", subj).edge(subj, "num", sg).edge(root, "tense", pst);
        (sig, b.finish(root))
    }

    #[test]
    fn feature_image_follows_paths() {
        let (sig, f) = sample();
        let w = f.feature_image(&sig, f.initial(), &["subj", "num"]).unwrap().unwrap();
        assert_eq!(f.atom(w), Some("sg"));
        assert_eq!(f.feature_image::<&str>(&sig, FNodeId(1), &[]).unwrap(), Some(FNodeId(1)));
        assert_eq!(f.feature_image(&sig, f.initial(), &["num"]).unwrap(), None);
    }

    #[test]
    fn feature_image_rejects_unknown_features() {
        let (sig, f) = sample();
        assert!(matches!(
            f.feature_image(&sig, f.initial(), &["obj"]),
            Err(ModelError::UnknownFeature(name)) if name == "obj"
        ));
    }

    #[test]
    fn bfs_records_first_paths() {
        let (_, f) = sample();
        let order: Vec<_> = f.bfs().into_iter().map(|(w, p)| (w.0, p.join("."))).collect();
        assert_eq!(order, vec![(0, "".into()), (1, "subj".into()), (3, "tense".into()), (2, "subj.num".into())]);
    }

    #[test]
    fn atom_is_undefined_off_final() {
        let (_, f) = sample();
        let (init, mut nodes, finals) = f.into_parts();
        nodes.get_mut(&FNodeId(0)).unwrap().atom = Some("sg".into());
        let f = FStructure::from_parts(init, nodes, finals);
        assert_eq!(f.atom(FNodeId(0)), None);
    }
}
