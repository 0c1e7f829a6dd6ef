//! Signatures and the tripartite model: a c-structure tree, an f-structure
//! and the partial `zoomin` link from tree nodes to f-nodes.
//!
//! Constructors do not check invariants, so arbitrary candidates can be
//! built; [`validate_model`] reports everything that is wrong with one.

mod fstruct;
mod ids;
mod serial;
mod signature;
mod tree;
mod validate;

use std::collections::BTreeMap;

use thiserror::Error;

pub use fstruct::{FNode, FStructure, FStructureBuilder};
pub use ids::{FNodeId, Node, TreeId};
pub use signature::{FeaturePath, Signature, RESERVED};
pub use tree::{CStructure, Label, TreeBuilder, TreeNode};
pub use validate::{validate_model, ValidationReport, Violation, ViolationKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("unknown tree node {0}")]
    UnknownTreeNode(TreeId),
    #[error("unknown f-structure node {0}")]
    UnknownFNode(FNodeId),
    #[error("malformed bracketed tree: {0}")]
    Bracketed(String),
    #[error("malformed model document: {0}")]
    Document(String),
}

/// A c-structure, an f-structure and the zoomin link, over one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub(crate) sig: Signature,
    pub(crate) cstruct: CStructure,
    pub(crate) fstruct: FStructure,
    pub(crate) zoomin: BTreeMap<TreeId, FNodeId>,
}

impl Model {
    pub fn new(sig: Signature, cstruct: CStructure, fstruct: FStructure, zoomin: BTreeMap<TreeId, FNodeId>) -> Self {
        Model { sig, cstruct, fstruct, zoomin }
    }

    /// Builds the model and rejects it unless it is structurally valid.
    pub fn validated(
        sig: Signature,
        cstruct: CStructure,
        fstruct: FStructure,
        zoomin: BTreeMap<TreeId, FNodeId>,
    ) -> Result<Self, ValidationReport> {
        let m = Model::new(sig, cstruct, fstruct, zoomin);
        let report = m.validate();
        if report.is_valid() {
            Ok(m)
        } else {
            Err(report)
        }
    }

    pub fn into_parts(self) -> (Signature, CStructure, FStructure, BTreeMap<TreeId, FNodeId>) {
        (self.sig, self.cstruct, self.fstruct, self.zoomin)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn cstruct(&self) -> &CStructure {
        &self.cstruct
    }

    pub fn fstruct(&self) -> &FStructure {
        &self.fstruct
    }

    pub fn zoomin(&self) -> &BTreeMap<TreeId, FNodeId> {
        &self.zoomin
    }

    pub fn zoom(&self, t: TreeId) -> Option<FNodeId> {
        self.zoomin.get(&t).copied()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_model(self)
    }

    /// All nodes of both domains in the deterministic order: tree nodes by
    /// id, then f-nodes by id.
    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.cstruct.ids().map(Node::Tree).chain(self.fstruct.ids().map(Node::F))
    }

    pub fn node_count(&self) -> usize {
        self.cstruct.len() + self.fstruct.len()
    }

    pub fn contains(&self, n: Node) -> bool {
        match n {
            Node::Tree(t) => self.cstruct.contains(t),
            Node::F(w) => self.fstruct.contains(w),
        }
    }

    pub fn feature_image<S: AsRef<str>>(&self, start: FNodeId, path: &[S]) -> Result<Option<FNodeId>, ModelError> {
        self.fstruct.feature_image(&self.sig, start, path)
    }

    /// Renames nodes canonically: tree nodes in preorder from the root,
    /// f-nodes in BFS order from initial (features visited in name order).
    /// Nodes the traversals miss keep their relative order after the rest.
    /// Two valid models are isomorphic iff their canonical forms are equal.
    pub fn canonical(&self) -> Model {
        let mut tmap: BTreeMap<TreeId, TreeId> = BTreeMap::new();
        for id in self.cstruct.preorder().into_iter().chain(self.cstruct.ids()) {
            let next = TreeId(tmap.len() as u32);
            tmap.entry(id).or_insert(next);
        }
        let mut fmap: BTreeMap<FNodeId, FNodeId> = BTreeMap::new();
        for id in self.fstruct.bfs().into_iter().map(|(w, _)| w).chain(self.fstruct.ids()) {
            let next = FNodeId(fmap.len() as u32);
            fmap.entry(id).or_insert(next);
        }
        let rt = |t: &TreeId| tmap.get(t).copied().unwrap_or(*t);
        let rf = |w: &FNodeId| fmap.get(w).copied().unwrap_or(*w);

        let nodes = self
            .cstruct
            .nodes()
            .map(|(id, n)| {
                (
                    rt(&id),
                    TreeNode {
                        label: n.label.clone(),
                        mother: n.mother.as_ref().map(rt),
                        daughters: n.daughters.iter().map(rt).collect(),
                    },
                )
            })
            .collect();
        let cstruct = CStructure::from_parts(rt(&self.cstruct.root()), nodes);

        let fnodes = self
            .fstruct
            .nodes()
            .map(|(id, n)| {
                (
                    rf(&id),
                    FNode { trans: n.trans.iter().map(|(k, v)| (k.clone(), rf(v))).collect(), atom: n.atom.clone() },
                )
            })
            .collect();
        let finals = self.fstruct.finals().iter().map(rf).collect();
        let fstruct = FStructure::from_parts(rf(&self.fstruct.initial()), fnodes, finals);
        let zoomin = self.zoomin.iter().map(|(t, w)| (rt(t), rf(w))).collect();
        Model { sig: self.sig.clone(), cstruct, fstruct, zoomin }
    }

    pub fn to_json(&self) -> String {
        serial::to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        serial::from_json(text)
    }
}
