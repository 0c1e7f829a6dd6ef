//! Parsing as model finding: every minimal model of a theory over a given
//! word string, within explicit bounds.
//!
//! Candidate c-structures come from the context-free skeleton of the
//! grammar. For each one the defining equations of its rules and lexical
//! entries are solved by identification, which gives the least f-structure
//! they force; the result is kept when it validates and every formula of the
//! theory is valid in it.

mod chart;
mod solve;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::Formula;
use crate::grammar::{Grammar, Section, Theory};
use crate::model::{Model, Node, ViolationKind};
use crate::semantics::{valid, EvalError};

pub use solve::Conflict;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("no tokens to parse")]
    NoTokens,
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("bound {0} must be at least 1")]
    ZeroBound(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_tree_nodes: usize,
    pub max_fnodes: usize,
    pub max_models: usize,
}

impl SearchBounds {
    pub fn new(max_tree_nodes: usize, max_fnodes: usize, max_models: usize) -> Result<Self, SearchError> {
        let b = SearchBounds { max_tree_nodes, max_fnodes, max_models };
        b.check()?;
        Ok(b)
    }

    fn check(&self) -> Result<(), SearchError> {
        for (name, v) in
            [("max_tree_nodes", self.max_tree_nodes), ("max_fnodes", self.max_fnodes), ("max_models", self.max_models)]
        {
            if v == 0 {
                return Err(SearchError::ZeroBound(name));
            }
        }
        Ok(())
    }
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_tree_nodes: 64, max_fnodes: 64, max_models: 1000 }
    }
}

/// Why a candidate c-structure produced no model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    Conflict(Conflict),
    Invalid(Vec<ViolationKind>),
    Unsatisfied { section: Section, index: usize, node: Node },
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::Conflict(Conflict::Clash(msg)) => write!(f, "clash: {msg}"),
            RejectReason::Conflict(Conflict::NoMother(t)) => {
                write!(f, "lexical annotation at root preterminal {t}")
            }
            RejectReason::Conflict(Conflict::NoInitial) => f.write_str("no initial f-node"),
            RejectReason::Conflict(Conflict::Cyclic) => f.write_str("cyclic f-structure"),
            RejectReason::Conflict(Conflict::TooLarge(n)) => write!(f, "needs {n} f-nodes"),
            RejectReason::Invalid(kinds) => {
                let names: Vec<&str> = kinds.iter().map(|k| k.as_str()).collect();
                write!(f, "invalid model: {}", names.join(", "))
            }
            RejectReason::Unsatisfied { section, index, node } => {
                write!(f, "{section} formula {index} fails at {node}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// Bracketed c-structure of the candidate.
    pub tree: String,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchOutcome {
    /// Canonical models in canonical order.
    pub models: Vec<Model>,
    /// Derivable c-structures exceed the tree-node bound.
    pub tree_bound_hit: bool,
    /// Some candidate needed more f-nodes than allowed.
    pub fnode_bound_hit: bool,
    /// More models existed than `max_models`.
    pub truncated: bool,
    pub candidates: usize,
    pub rejections: Vec<Rejection>,
}

impl SearchOutcome {
    /// Search stopped at a size bound before the space was exhausted.
    pub fn bound_hit(&self) -> bool {
        self.tree_bound_hit || self.fnode_bound_hit
    }
}

/// Every minimal model of `theory` whose word yield is `tokens` and whose
/// root carries the start category of `grammar`.
pub fn parse_sentence<S: AsRef<str>>(
    theory: &Theory,
    grammar: &Grammar,
    tokens: &[S],
    bounds: SearchBounds,
) -> Result<SearchOutcome, SearchError> {
    bounds.check()?;
    if tokens.is_empty() {
        return Err(SearchError::NoTokens);
    }
    let tokens: Vec<String> = tokens.iter().map(|t| t.as_ref().to_string()).collect();
    if let Some(t) = tokens.iter().find(|t| !grammar.sig().is_word(t)) {
        return Err(SearchError::UnknownToken(t.clone()));
    }

    let mut chart = chart::Chart::new(grammar, &tokens);
    let tree_bound_hit = match chart.max_size(grammar.start()) {
        Some(Some(max)) => max > bounds.max_tree_nodes,
        Some(None) => true,
        None => false,
    };
    let derivs = chart.derivations(grammar.start(), bounds.max_tree_nodes);

    let results: Vec<Result<(String, Model), Rejection>> = derivs
        .par_iter()
        .map(|d| {
            let built = solve::build_tree(grammar, d);
            let tree = built.cstruct.to_bracketed();
            let reject = |reason| Rejection { tree: tree.clone(), reason };
            let m = solve::solve(grammar, &built, bounds.max_fnodes).map_err(|c| reject(RejectReason::Conflict(c)))?;
            let report = m.validate();
            if !report.is_valid() {
                return Err(reject(RejectReason::Invalid(report.kinds().into_iter().collect())));
            }
            if let Some(fail) = check_parse(theory, &m).first_failure() {
                return Err(reject(fail));
            }
            Ok((m.to_json(), m))
        })
        .collect();

    let mut out = SearchOutcome { tree_bound_hit, candidates: derivs.len(), ..SearchOutcome::default() };
    let mut found: BTreeMap<String, Model> = BTreeMap::new();
    for r in results {
        match r {
            Ok((key, m)) => {
                found.entry(key).or_insert(m);
            }
            Err(rej) => {
                if matches!(rej.reason, RejectReason::Conflict(Conflict::TooLarge(_))) {
                    out.fnode_bound_hit = true;
                }
                out.rejections.push(rej);
            }
        }
    }
    out.truncated = found.len() > bounds.max_models;
    out.models = found.into_values().take(bounds.max_models).collect();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckEntry {
    pub section: Section,
    pub index: usize,
    pub formula: Formula,
    /// `Ok(None)` when valid, otherwise the least counterexample.
    pub result: Result<Option<Node>, EvalError>,
}

impl CheckEntry {
    pub fn is_valid(&self) -> bool {
        matches!(self.result, Ok(None))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn all_valid(&self) -> bool {
        self.entries.iter().all(CheckEntry::is_valid)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.is_valid())
    }

    fn first_failure(&self) -> Option<RejectReason> {
        self.entries.iter().find_map(|e| match e.result {
            Ok(Some(node)) => Some(RejectReason::Unsatisfied { section: e.section, index: e.index, node }),
            _ => None,
        })
    }
}

/// Validity of every theory formula in `model`.
pub fn check_parse(theory: &Theory, model: &Model) -> CheckReport {
    let entries = theory
        .formulas()
        .into_iter()
        .map(|tf| CheckEntry {
            section: tf.section,
            index: tf.index,
            formula: tf.formula.clone(),
            result: valid(model, tf.formula),
        })
        .collect();
    CheckReport { entries }
}
