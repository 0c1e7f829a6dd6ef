//! Formulas of the specification language: the AST, a parser for the
//! concrete syntax and a renderer whose output re-parses to the same AST.
//!
//! Concrete syntax, loosest binding first:
//!
//! ```text
//! formula  = implies { "<->" implies } ;
//! implies  = or [ "->" implies ] ;
//! or       = and { "|" and } ;
//! and      = unary { "&" unary } ;
//! unary    = "!" unary | "<" feat ">" unary | "up" unary | "down" unary
//!          | "zoomin" unary | patheq | primary ;
//! patheq   = path "~" path ;
//! path     = { "up" | "down" } "zoomin" { feat } ;
//! primary  = "true" | "false" | "cstruct" | "fstruct" | name | '"' word '"'
//!          | "(" formula ")" | "bullet" "(" formula { "," formula } ")" ;
//! ```

mod ast;
mod parse;
mod render;

pub use ast::{BulletArgs, Formula, FormulaError, PathEq, PathTerm, TreeStep};
pub use parse::{parse_formula, ParseError, ParseErrorKind};
pub use render::render_formula;
