//! Annotated phrase-structure grammars and their compilation to theories.
//!
//! Grammar file format:
//!
//! ```text
//! file      = { item } ;
//! item      = signature | start | rule | lex | axiom ;
//! signature = "signature" "{" { field } "}" ;
//! field     = ( "cat" | "atom" | "feat" | "word" ) ":" { name } ";"
//!           | "gf" ":" { path } ";" ;
//! path      = ident { "." ident } ;
//! start     = "start" ident ";" ;
//! rule      = "rule" ident "->" daughter { daughter } ";" ;
//! daughter  = ident [ "{" schemata "}" ] ;
//! lex       = "lex" word ident [ "{" schemata "}" ] ";" ;
//! word      = string | ident ;
//! axiom     = "axiom" formula ";" ;
//! schemata  = [ schema { ";" schema } [ ";" ] ] ;
//! schema    = upper "=" value ;
//! upper     = "up" | "(" "up" { feature } ")" ;
//! value     = "down" | "(" "down" { feature } ")"
//!           | ident | ident "(" [ path { "," path } ] ")" ;
//! feature   = ident | "." ;
//! ```
//!
//! `#` starts a comment running to the end of the line. Constraining
//! equations (`=c`) are rejected. In a lexical entry the value of `(up pred)`
//! is always a semantic form; a bare atom there is a form with no arguments.

mod compile;
mod parse;

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, FormulaError};
use crate::model::{FeaturePath, Signature, Violation};

pub use compile::{
    coherence_axioms, compile_grammar, compile_lex_entry, compile_lexicon, compile_rule, compile_schema,
    completeness_axioms,
};
pub use parse::parse_grammar;

/// Feature holding a semantic form.
pub const PRED: &str = "pred";
/// Feature of a semantic form holding its relation atom; added to the
/// signature whenever semantic forms occur.
pub const REL: &str = "rel";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{kind} {name:?} is not declared in the signature")]
    UnknownName { kind: &'static str, name: String },
    #[error("the grammar has no rules")]
    EmptyRules,
    #[error("the grammar has no lexical entries")]
    EmptyLexicon,
    #[error("rule for {0} has an empty right-hand side")]
    EmptyRhs(String),
    #[error("semantic form argument {0:?} is not a governable function")]
    NotGovernable(String),
    #[error("bad signature: {}", join(.0))]
    Signature(Vec<Violation>),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

fn join(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// A rule annotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Schema {
    /// `(↑ up) = (↓ down)`; `↑ = ↓` when both paths are empty.
    UpPathEqDown { up: FeaturePath, down: FeaturePath },
    /// `(↑ up) = value`
    UpPathAtom { up: FeaturePath, value: String },
}

/// `rel(args…)`, the value of `(↑ pred)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemForm {
    pub rel: String,
    pub args: Vec<FeaturePath>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LexSchema {
    UpPathAtom { up: FeaturePath, value: String },
    SemForm(SemForm),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Daughter {
    pub cat: String,
    pub schemata: Vec<Schema>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnotatedRule {
    pub lhs: String,
    pub rhs: Vec<Daughter>,
}

impl AnnotatedRule {
    pub fn new(lhs: impl Into<String>, rhs: Vec<Daughter>) -> Self {
        AnnotatedRule { lhs: lhs.into(), rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexEntry {
    pub word: String,
    pub cat: String,
    pub schemata: Vec<LexSchema>,
}

/// A grammar over a signature whose `words` include every lexical word form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    sig: Signature,
    start: String,
    rules: Vec<AnnotatedRule>,
    lexicon: Vec<LexEntry>,
    axioms: Vec<Formula>,
}

impl Grammar {
    /// Checks every name against `sig`. `start` defaults to the first
    /// rule's left-hand side.
    pub fn new(
        sig: Signature,
        start: Option<String>,
        rules: Vec<AnnotatedRule>,
        lexicon: Vec<LexEntry>,
    ) -> Result<Self, GrammarError> {
        let start = match start {
            Some(s) => s,
            None => rules.first().map(|r| r.lhs.clone()).ok_or(GrammarError::EmptyRules)?,
        };
        let g = Grammar { sig, start, rules, lexicon, axioms: Vec::new() };
        g.check()?;
        Ok(g)
    }

    /// Adds formulas that every model must also validate.
    pub fn with_axioms(mut self, axioms: Vec<Formula>) -> Result<Self, GrammarError> {
        for a in &axioms {
            a.check_names(&self.sig)?;
        }
        self.axioms.extend(axioms);
        Ok(self)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn rules(&self) -> &[AnnotatedRule] {
        &self.rules
    }

    pub fn lexicon(&self) -> &[LexEntry] {
        &self.lexicon
    }

    pub fn axioms(&self) -> &[Formula] {
        &self.axioms
    }

    pub fn compile(&self) -> Result<Theory, GrammarError> {
        let mut t = compile_grammar(&self.rules, &self.lexicon, &self.sig)?;
        t.axioms = self.axioms.clone();
        Ok(t)
    }

    fn check(&self) -> Result<(), GrammarError> {
        let vs = self.sig.violations();
        if !vs.is_empty() {
            return Err(GrammarError::Signature(vs));
        }
        let sig = &self.sig;
        let unknown = |kind, name: &str| GrammarError::UnknownName { kind, name: name.to_string() };
        let cat = |c: &str| {
            if sig.is_cat(c) {
                Ok(())
            } else {
                Err(unknown("category", c))
            }
        };
        let path = |p: &FeaturePath| {
            p.iter().try_for_each(|f| if sig.is_feat(f) { Ok(()) } else { Err(unknown("feature", f)) })
        };
        let atom = |a: &str| {
            if sig.is_atom(a) {
                Ok(())
            } else {
                Err(unknown("atom", a))
            }
        };

        cat(&self.start)?;
        for r in &self.rules {
            cat(&r.lhs)?;
            if r.rhs.is_empty() {
                return Err(GrammarError::EmptyRhs(r.lhs.clone()));
            }
            for d in &r.rhs {
                cat(&d.cat)?;
                for s in &d.schemata {
                    match s {
                        Schema::UpPathEqDown { up, down } => {
                            path(up)?;
                            path(down)?;
                        }
                        Schema::UpPathAtom { up, value } => {
                            path(up)?;
                            atom(value)?;
                        }
                    }
                }
            }
        }
        for e in &self.lexicon {
            cat(&e.cat)?;
            if !sig.is_word(&e.word) {
                return Err(unknown("word", &e.word));
            }
            for s in &e.schemata {
                match s {
                    LexSchema::UpPathAtom { up, value } => {
                        path(up)?;
                        atom(value)?;
                    }
                    LexSchema::SemForm(f) => {
                        for feat in [PRED, REL] {
                            if !sig.is_feat(feat) {
                                return Err(unknown("feature", feat));
                            }
                        }
                        atom(&f.rel)?;
                        for a in &f.args {
                            if !sig.gf().contains(a) {
                                return Err(GrammarError::NotGovernable(a.join(".")));
                            }
                        }
                    }
                }
            }
        }
        for a in &self.axioms {
            a.check_names(sig)?;
        }
        Ok(())
    }
}

/// Which part of a theory a formula comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Section {
    Licensing,
    Lexical,
    Completeness,
    Coherence,
    Axiom,
}

impl Section {
    pub fn as_str(self) -> &'static str {
        match self {
            Section::Licensing => "licensing",
            Section::Lexical => "lexical",
            Section::Completeness => "completeness",
            Section::Coherence => "coherence",
            Section::Axiom => "axiom",
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The compiled formulas; a model is a sentence structure of the grammar
/// when all of them are valid in it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Theory {
    pub licensing: Option<Formula>,
    pub lexical: Option<Formula>,
    pub completeness: Vec<Formula>,
    pub coherence: Vec<Formula>,
    pub axioms: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryFormula<'a> {
    pub section: Section,
    /// Position within the section.
    pub index: usize,
    pub formula: &'a Formula,
}

impl Theory {
    /// Every formula with its section, in section order.
    pub fn formulas(&self) -> Vec<TheoryFormula<'_>> {
        let sections: [(Section, Vec<&Formula>); 5] = [
            (Section::Licensing, self.licensing.iter().collect()),
            (Section::Lexical, self.lexical.iter().collect()),
            (Section::Completeness, self.completeness.iter().collect()),
            (Section::Coherence, self.coherence.iter().collect()),
            (Section::Axiom, self.axioms.iter().collect()),
        ];
        sections
            .into_iter()
            .flat_map(|(section, fs)| {
                fs.into_iter().enumerate().map(move |(index, formula)| TheoryFormula { section, index, formula })
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.formulas().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
