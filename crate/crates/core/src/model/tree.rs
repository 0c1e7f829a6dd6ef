use std::collections::BTreeMap;
use std::fmt;

use super::ids::TreeId;
use super::signature::Signature;
use super::ModelError;

/// Label of a c-structure node: a syntactic category, or a word form on a leaf.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Cat(String),
    Word(String),
}

impl Label {
    pub fn name(&self) -> &str {
        match self {
            Label::Cat(s) | Label::Word(s) => s,
        }
    }

    pub fn is_word(&self) -> bool {
        matches!(self, Label::Word(_))
    }

    /// Word forms win over categories; a well-formed signature keeps the two apart.
    pub fn classify(name: &str, sig: &Signature) -> Label {
        if sig.is_word(name) {
            Label::Word(name.to_string())
        } else {
            Label::Cat(name.to_string())
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Cat(c) => f.write_str(c),
            Label::Word(w) => write!(f, "{w:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub label: Label,
    pub mother: Option<TreeId>,
    pub daughters: Vec<TreeId>,
}

/// A finite ordered tree with labeled nodes. Mother and daughter links are
/// both stored, so inconsistent candidates can be represented and reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CStructure {
    root: TreeId,
    nodes: BTreeMap<TreeId, TreeNode>,
}

impl CStructure {
    pub fn from_parts(root: TreeId, nodes: BTreeMap<TreeId, TreeNode>) -> Self {
        CStructure { root, nodes }
    }

    pub fn into_parts(self) -> (TreeId, BTreeMap<TreeId, TreeNode>) {
        (self.root, self.nodes)
    }

    pub fn root(&self) -> TreeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: TreeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn node(&self, id: TreeId) -> Option<&TreeNode> {
        self.nodes.get(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (TreeId, &TreeNode)> + '_ {
        self.nodes.iter().map(|(k, v)| (*k, v))
    }

    pub fn ids(&self) -> impl Iterator<Item = TreeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn label(&self, id: TreeId) -> Option<&Label> {
        self.nodes.get(&id).map(|n| &n.label)
    }

    pub fn mother(&self, id: TreeId) -> Option<TreeId> {
        self.nodes.get(&id).and_then(|n| n.mother)
    }

    pub fn daughters(&self, id: TreeId) -> &[TreeId] {
        self.nodes.get(&id).map(|n| n.daughters.as_slice()).unwrap_or(&[])
    }

    /// The stored mother and ordered daughters of `id`.
    pub fn relatives(&self, id: TreeId) -> Result<(Option<TreeId>, &[TreeId]), ModelError> {
        let node = self.nodes.get(&id).ok_or(ModelError::UnknownTreeNode(id))?;
        Ok((node.mother, &node.daughters))
    }

    /// Node ids in preorder from the root. Nodes not reachable from the root
    /// are omitted; the walk tolerates cycles.
    pub fn preorder(&self) -> Vec<TreeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if !self.nodes.contains_key(&id) || !seen.insert(id) {
                continue;
            }
            out.push(id);
            stack.extend(self.daughters(id).iter().rev().copied());
        }
        out
    }

    /// Left-to-right leaf labels.
    pub fn leaf_labels(&self) -> Vec<&Label> {
        self.preorder()
            .into_iter()
            .filter(|id| self.daughters(*id).is_empty())
            .filter_map(|id| self.label(id))
            .collect()
    }

    /// The word yield, or `None` when some leaf is not a word form.
    pub fn word_yield(&self) -> Option<Vec<&str>> {
        self.leaf_labels()
            .into_iter()
            .map(|l| match l {
                Label::Word(w) => Some(w.as_str()),
                Label::Cat(_) => None,
            })
            .collect()
    }

    /// Reads a bracketed tree such as `(S (NP (Det a) (N girl)) (VP (V walks)))`.
    /// Ids are assigned in preorder. Bare atoms are leaves; a label is a word
    /// form if the signature declares it as one (or if it is quoted).
    pub fn parse_bracketed(text: &str, sig: &Signature) -> Result<CStructure, ModelError> {
        let tokens = bracket_tokens(text)?;
        let mut pos = 0;
        let mut builder = TreeBuilder::new();
        let root = parse_bracket_node(&tokens, &mut pos, sig, &mut builder, None)?;
        if pos != tokens.len() {
            return Err(ModelError::Bracketed(format!("trailing input after tree at token {pos}")));
        }
        Ok(builder.finish(root))
    }

    /// Renders the tree in the bracketed notation accepted by [`CStructure::parse_bracketed`].
    pub fn to_bracketed(&self) -> String {
        fn go(t: &CStructure, id: TreeId, out: &mut String, depth: usize) {
            if depth > t.nodes.len() {
                out.push_str("...");
                return;
            }
            let Some(node) = t.node(id) else {
                out.push('?');
                return;
            };
            if node.daughters.is_empty() {
                out.push_str(&node.label.to_string());
                return;
            }
            out.push('(');
            out.push_str(&node.label.to_string());
            for d in &node.daughters {
                out.push(' ');
                go(t, *d, out, depth + 1);
            }
            out.push(')');
        }
        let mut out = String::new();
        go(self, self.root, &mut out, 0);
        out
    }
}

#[derive(Debug, PartialEq)]
enum BTok {
    Open,
    Close,
    Name(String, bool),
}

fn bracket_tokens(text: &str) -> Result<Vec<BTok>, ModelError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                out.push(BTok::Open);
            }
            ')' => {
                chars.next();
                out.push(BTok::Close);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(ModelError::Bracketed("unterminated quoted word".into())),
                    }
                }
                out.push(BTok::Name(s, true));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push(BTok::Name(s, false));
            }
        }
    }
    Ok(out)
}

fn parse_bracket_node(
    tokens: &[BTok],
    pos: &mut usize,
    sig: &Signature,
    b: &mut TreeBuilder,
    mother: Option<TreeId>,
) -> Result<TreeId, ModelError> {
    let label_of = |name: &str, quoted: bool| {
        if quoted {
            Label::Word(name.to_string())
        } else {
            Label::classify(name, sig)
        }
    };
    match tokens.get(*pos) {
        Some(BTok::Name(name, quoted)) => {
            *pos += 1;
            let id = b.push(label_of(name, *quoted), mother);
            Ok(id)
        }
        Some(BTok::Open) => {
            *pos += 1;
            let Some(BTok::Name(name, quoted)) = tokens.get(*pos) else {
                return Err(ModelError::Bracketed(format!("expected a label at token {}", *pos)));
            };
            *pos += 1;
            let id = b.push(label_of(name, *quoted), mother);
            loop {
                match tokens.get(*pos) {
                    Some(BTok::Close) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => {
                        let d = parse_bracket_node(tokens, pos, sig, b, Some(id))?;
                        b.nodes.get_mut(&id).expect("just pushed").daughters.push(d);
                    }
                    None => return Err(ModelError::Bracketed("unbalanced parentheses".into())),
                }
            }
            Ok(id)
        }
        Some(BTok::Close) => Err(ModelError::Bracketed(format!("unexpected ')' at token {}", *pos))),
        None => Err(ModelError::Bracketed("empty tree".into())),
    }
}

/// Incremental construction of consistent trees; ids are handed out in
/// creation order.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: BTreeMap<TreeId, TreeNode>,
    next: u32,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, label: Label, mother: Option<TreeId>) -> TreeId {
        let id = TreeId(self.next);
        self.next += 1;
        self.nodes.insert(id, TreeNode { label, mother, daughters: Vec::new() });
        id
    }

    pub fn leaf(&mut self, label: Label) -> TreeId {
        self.push(label, None)
    }

    /// Adds a node over already-created daughters and links them to it.
    pub fn branch(&mut self, label: Label, daughters: &[TreeId]) -> TreeId {
        let id = self.push(label, None);
        for d in daughters {
            if let Some(n) = self.nodes.get_mut(d) {
                n.mother = Some(id);
            }
        }
        self.nodes.get_mut(&id).expect("just pushed").daughters = daughters.to_vec();
        id
    }

    pub fn finish(self, root: TreeId) -> CStructure {
        CStructure { root, nodes: self.nodes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(["S", "NP", "VP", "Det", "N", "V"], ["sing"], ["num"]).with_words(["a", "girl", "walks"])
    }

    #[test]
    fn bracketed_round_trip_and_preorder_ids() {
        let t = CStructure::parse_bracketed("(S (NP (Det a) (N girl)) (VP (V walks)))", &sig()).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t.root(), TreeId(0));
        assert_eq!(t.preorder(), (0..9).map(TreeId).collect::<Vec<_>>());
        assert_eq!(t.to_bracketed(), r#"(S (NP (Det "a") (N "girl")) (VP (V "walks")))"#);
        assert_eq!(t.word_yield().unwrap(), vec!["a", "girl", "walks"]);
    }

    #[test]
    fn relatives_of_np_v_and_root() {
        let t = CStructure::parse_bracketed("(S (NP (Det a) (N girl)) (VP (V walks)))", &sig()).unwrap();
        let (m, d) = t.relatives(TreeId(1)).unwrap();
        assert_eq!(m, Some(TreeId(0)));
        assert_eq!(d, &[TreeId(2), TreeId(4)]);
        assert_eq!(t.label(TreeId(1)), Some(&Label::Cat("NP".into())));

        let (m, d) = t.relatives(TreeId(7)).unwrap();
        assert_eq!(t.label(TreeId(7)), Some(&Label::Cat("V".into())));
        assert_eq!(m, Some(TreeId(6)));
        assert_eq!(d, &[TreeId(8)]);
        assert_eq!(t.label(TreeId(8)), Some(&Label::Word("walks".into())));

        let (m, d) = t.relatives(t.root()).unwrap();
        assert_eq!(m, None);
        assert_eq!(d, &[TreeId(1), TreeId(6)]);
    }

    #[test]
    fn unknown_node_is_an_error() {
        let t = CStructure::parse_bracketed("S", &sig()).unwrap();
        assert!(matches!(t.relatives(TreeId(5)), Err(ModelError::UnknownTreeNode(TreeId(5)))));
    }

    #[test]
    fn malformed_brackets() {
        for bad in ["", "(S (NP", "(S))", "()", "(S \"a)"] {
            assert!(CStructure::parse_bracketed(bad, &sig()).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn builder_links_mothers() {
        let mut b = TreeBuilder::new();
        let w = b.leaf(Label::Word("walks".into()));
        let v = b.branch(Label::Cat("V".into()), &[w]);
        let t = b.finish(v);
        assert_eq!(t.mother(w), Some(v));
        assert_eq!(t.daughters(v), &[w]);
    }
}
