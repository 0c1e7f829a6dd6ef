use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a c-structure node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeId(pub u32);

/// Identifier of an f-structure node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FNodeId(pub u32);

/// A node of either domain. Tree nodes order before f-nodes, which gives the
/// deterministic node order used for counterexamples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Tree(TreeId),
    F(FNodeId),
}

impl fmt::Display for TreeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

impl fmt::Display for FNodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Tree(t) => t.fmt(f),
            Node::F(w) => w.fmt(f),
        }
    }
}

impl From<TreeId> for Node {
    fn from(t: TreeId) -> Self {
        Node::Tree(t)
    }
}

impl From<FNodeId> for Node {
    fn from(w: FNodeId) -> Self {
        Node::F(w)
    }
}

impl Serialize for Node {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
