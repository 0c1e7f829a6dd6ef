//! Model checking for a modal language over LFG structures.
//!
//! A [`Model`] joins a c-structure tree to an f-structure through the
//! partial `zoomin` link. [`Formula`]s are evaluated at nodes of either
//! domain by [`satisfies`]; [`valid`] checks a formula everywhere. Grammars
//! compile to a [`Theory`] whose models are the sentence structures, and
//! [`parse_sentence`] enumerates those over a given word string.

pub mod fixtures;
pub mod formula;
pub mod grammar;
pub mod model;
pub mod search;
pub mod semantics;

pub use formula::{parse_formula, render_formula, Formula, FormulaError, ParseError, PathEq, PathTerm, TreeStep};
pub use grammar::{parse_grammar, Grammar, GrammarError, Section, Theory};
pub use model::{
    validate_model, CStructure, FNodeId, FStructure, Model, ModelError, Node, Signature, TreeId, ValidationReport,
    Violation, ViolationKind,
};
pub use search::{check_parse, parse_sentence, CheckReport, SearchBounds, SearchError, SearchOutcome};
pub use semantics::{eval_patheq, satisfies, valid, EvalError};
