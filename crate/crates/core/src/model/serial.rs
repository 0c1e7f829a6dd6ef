//! The JSON model document:
//!
//! ```json
//! {
//!   "signature": {"cats": [..], "atoms": [..], "feats": [..], "gf": [["subj"]], "words": [..]},
//!   "tree": {"root": 0, "nodes": [{"id": 0, "label": "S", "daughters": [1, 6]}, ..]},
//!   "fstruct": {"initial": 0, "nodes": [{"id": 0, "trans": {"subj": 1}}, {"id": 3, "trans": {}, "atom": "sing"}, ..]},
//!   "zoomin": {"0": 0, "1": 1}
//! }
//! ```
//!
//! Unknown keys and repeated feature keys are rejected. Mothers are derived
//! from the daughter lists and final nodes from the presence of `atom`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use super::{CStructure, FNode, FNodeId, FStructure, Label, Model, ModelError, Signature, TreeId, TreeNode};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    signature: SigDoc,
    tree: TreeDoc,
    fstruct: FDoc,
    zoomin: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SigDoc {
    cats: Vec<String>,
    atoms: Vec<String>,
    feats: Vec<String>,
    #[serde(default)]
    gf: Vec<Vec<String>>,
    #[serde(default)]
    words: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    root: u32,
    nodes: Vec<TreeNodeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeNodeDoc {
    id: u32,
    label: String,
    #[serde(default)]
    daughters: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FDoc {
    initial: u32,
    nodes: Vec<FNodeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FNodeDoc {
    id: u32,
    #[serde(default, deserialize_with = "unique_keys")]
    trans: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atom: Option<String>,
}

/// A feature map that refuses repeated keys: a second value for the same
/// feature would break functionality of `f_α`.
fn unique_keys<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, u32>, D::Error> {
    struct V;
    impl<'de> Visitor<'de> for V {
        type Value = BTreeMap<String, u32>;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a map from feature names to f-node ids")
        }
        fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
            let mut out = BTreeMap::new();
            while let Some((k, v)) = map.next_entry::<String, u32>()? {
                if out.insert(k.clone(), v).is_some() {
                    return Err(serde::de::Error::custom(format!(
                        "feature {k:?} has two values (f_α must be a function)"
                    )));
                }
            }
            Ok(out)
        }
    }
    d.deserialize_map(V)
}

pub(super) fn to_json(m: &Model) -> String {
    let sig = &m.sig;
    let doc = Doc {
        signature: SigDoc {
            cats: sig.cats().iter().cloned().collect(),
            atoms: sig.atoms().iter().cloned().collect(),
            feats: sig.feats().iter().cloned().collect(),
            gf: sig.gf().to_vec(),
            words: sig.words().iter().cloned().collect(),
        },
        tree: TreeDoc {
            root: m.cstruct.root().0,
            nodes: m
                .cstruct
                .nodes()
                .map(|(id, n)| TreeNodeDoc {
                    id: id.0,
                    label: n.label.name().to_string(),
                    daughters: n.daughters.iter().map(|d| d.0).collect(),
                })
                .collect(),
        },
        fstruct: FDoc {
            initial: m.fstruct.initial().0,
            nodes: m
                .fstruct
                .nodes()
                .map(|(id, n)| FNodeDoc {
                    id: id.0,
                    trans: n.trans.iter().map(|(k, v)| (k.clone(), v.0)).collect(),
                    atom: n.atom.clone(),
                })
                .collect(),
        },
        zoomin: m.zoomin.iter().map(|(t, w)| (t.0.to_string(), w.0)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("model documents always serialize")
}

pub(super) fn from_json(text: &str) -> Result<Model, ModelError> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| ModelError::Document(e.to_string()))?;
    let sig = Signature::new(doc.signature.cats, doc.signature.atoms, doc.signature.feats)
        .with_gf(doc.signature.gf)
        .with_words(doc.signature.words);

    let mut nodes: BTreeMap<TreeId, TreeNode> = BTreeMap::new();
    for n in &doc.tree.nodes {
        let node = TreeNode {
            label: Label::classify(&n.label, &sig),
            mother: None,
            daughters: n.daughters.iter().map(|d| TreeId(*d)).collect(),
        };
        if nodes.insert(TreeId(n.id), node).is_some() {
            return Err(ModelError::Document(format!("tree node id {} appears twice", n.id)));
        }
    }
    // first listing wins; any further listing shows up as a validation error
    let links: Vec<(TreeId, TreeId)> =
        nodes.iter().flat_map(|(m, n)| n.daughters.iter().map(move |d| (*m, *d))).collect();
    for (mother, d) in links {
        if let Some(dn) = nodes.get_mut(&d) {
            dn.mother.get_or_insert(mother);
        }
    }
    let cstruct = CStructure::from_parts(TreeId(doc.tree.root), nodes);

    let mut fnodes: BTreeMap<FNodeId, FNode> = BTreeMap::new();
    for n in doc.fstruct.nodes {
        let node = FNode { trans: n.trans.into_iter().map(|(k, v)| (k, FNodeId(v))).collect(), atom: n.atom };
        if fnodes.insert(FNodeId(n.id), node).is_some() {
            return Err(ModelError::Document(format!("f-node id {} appears twice", n.id)));
        }
    }
    let fstruct = FStructure::from_nodes(FNodeId(doc.fstruct.initial), fnodes);

    let mut zoomin = BTreeMap::new();
    for (k, v) in doc.zoomin {
        let t: u32 = k.parse().map_err(|_| ModelError::Document(format!("zoomin key {k:?} is not a tree node id")))?;
        zoomin.insert(TreeId(t), FNodeId(v));
    }
    Ok(Model { sig, cstruct, fstruct, zoomin })
}
