use std::collections::BTreeSet;
use std::fmt;

use super::validate::{Violation, ViolationKind};

/// Keywords of the formula syntax; no signature name may collide with them.
pub const RESERVED: &[&str] = &["true", "false", "cstruct", "fstruct", "up", "down", "zoomin", "bullet"];

/// A sequence of feature names, e.g. `obl.obj`.
pub type FeaturePath = Vec<String>;

/// The vocabulary a model and its formulas are written over: categories,
/// atomic values, features, the governable functions and the word forms that
/// may label c-structure leaves.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    cats: BTreeSet<String>,
    atoms: BTreeSet<String>,
    feats: BTreeSet<String>,
    gf: Vec<FeaturePath>,
    words: BTreeSet<String>,
}

fn collect<I, S>(items: I) -> BTreeSet<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(Into::into).collect()
}

impl Signature {
    /// Builds a signature without checking it; see [`Signature::violations`].
    pub fn new<C, A, F>(cats: C, atoms: A, feats: F) -> Self
    where
        C: IntoIterator,
        C::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
        F: IntoIterator,
        F::Item: Into<String>,
    {
        Signature {
            cats: collect(cats),
            atoms: collect(atoms),
            feats: collect(feats),
            gf: Vec::new(),
            words: BTreeSet::new(),
        }
    }

    pub fn with_gf<I, P>(mut self, paths: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: IntoIterator,
        P::Item: Into<String>,
    {
        self.gf = paths.into_iter().map(|p| p.into_iter().map(Into::into).collect()).collect();
        self
    }

    pub fn with_words<I>(mut self, words: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        self.words.extend(words.into_iter().map(Into::into));
        self
    }

    pub fn with_feat(mut self, feat: impl Into<String>) -> Self {
        self.feats.insert(feat.into());
        self
    }

    pub fn with_atom(mut self, atom: impl Into<String>) -> Self {
        self.atoms.insert(atom.into());
        self
    }

    pub fn cats(&self) -> &BTreeSet<String> {
        &self.cats
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.atoms
    }

    pub fn feats(&self) -> &BTreeSet<String> {
        &self.feats
    }

    pub fn gf(&self) -> &[FeaturePath] {
        &self.gf
    }

    pub fn words(&self) -> &BTreeSet<String> {
        &self.words
    }

    pub fn is_cat(&self, name: &str) -> bool {
        self.cats.contains(name)
    }

    pub fn is_atom(&self, name: &str) -> bool {
        self.atoms.contains(name)
    }

    pub fn is_feat(&self, name: &str) -> bool {
        self.feats.contains(name)
    }

    pub fn is_word(&self, name: &str) -> bool {
        self.words.contains(name)
    }

    /// Every well-formedness problem of the signature itself.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (name, set) in [("cat", &self.cats), ("atom", &self.atoms), ("feat", &self.feats)] {
            if set.is_empty() {
                out.push(Violation::new(ViolationKind::EmptySignatureSet, format!("no {name} names declared")));
            }
            for n in set {
                if !is_identifier(n) || RESERVED.contains(&n.as_str()) {
                    out.push(Violation::new(
                        ViolationKind::BadSymbolName,
                        format!("{name} name {n:?} is not a usable identifier"),
                    ));
                }
            }
        }
        let pairs = [
            ("cat", &self.cats, "atom", &self.atoms),
            ("cat", &self.cats, "feat", &self.feats),
            ("atom", &self.atoms, "feat", &self.feats),
            ("word", &self.words, "cat", &self.cats),
        ];
        for (ln, l, rn, r) in pairs {
            for n in l.intersection(r) {
                out.push(Violation::new(ViolationKind::SignatureOverlap, format!("{n:?} is both a {ln} and a {rn}")));
            }
        }
        for w in &self.words {
            if w.is_empty() || w.chars().any(|c| c.is_whitespace() || c.is_control() || c == '"') {
                out.push(Violation::new(
                    ViolationKind::BadSymbolName,
                    format!("word form {w:?} is empty or contains whitespace or quotes"),
                ));
            }
        }
        for path in &self.gf {
            if path.is_empty() {
                out.push(Violation::new(ViolationKind::EmptyGfPath, "empty governable function"));
            }
            for f in path {
                if !self.feats.contains(f) {
                    out.push(Violation::new(
                        ViolationKind::UnknownGfFeature,
                        format!("governable function {} uses undeclared feature {f:?}", path.join(".")),
                    ));
                }
            }
        }
        out
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(" ");
        write!(
            f,
            "cat: {}; atom: {}; feat: {}; gf: {}; word: {}",
            join(&self.cats),
            join(&self.atoms),
            join(&self.feats),
            self.gf.iter().map(|p| p.join(".")).collect::<Vec<_>>().join(" "),
            join(&self.words),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Signature {
        Signature::new(["S", "NP"], ["sg"], ["subj", "num"]).with_gf([vec!["subj"]]).with_words(["walks"])
    }

    #[test]
    fn well_formed_signature_has_no_violations() {
        assert!(base().violations().is_empty());
    }

    #[test]
    fn overlapping_sets_are_reported() {
        let sig = base().with_atom("NP");
        let v = sig.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::SignatureOverlap);

        let sig = base().with_words(["S"]);
        assert!(sig.violations().iter().any(|v| v.kind == ViolationKind::SignatureOverlap));
    }

    #[test]
    fn words_may_coincide_with_atoms() {
        let sig = base().with_words(["sg"]);
        assert!(sig.violations().is_empty());
    }

    #[test]
    fn gf_features_must_be_declared() {
        let sig = base().with_gf([vec!["obl", "obj"]]);
        let kinds: Vec<_> = sig.violations().into_iter().map(|v| v.kind).collect();
        assert_eq!(kinds, vec![ViolationKind::UnknownGfFeature; 2]);
        let sig = base().with_gf([Vec::<String>::new()]);
        assert_eq!(sig.violations()[0].kind, ViolationKind::EmptyGfPath);
    }

    #[test]
    fn empty_sets_and_reserved_names() {
        let sig = Signature::new(["S"], Vec::<String>::new(), ["up"]);
        let kinds: Vec<_> = sig.violations().into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::EmptySignatureSet));
        assert!(kinds.contains(&ViolationKind::BadSymbolName));
    }
}
