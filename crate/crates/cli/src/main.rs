//! `lfgmc`: validate models, check formulas and grammars against them, parse
//! sentences and print compiled theories.
//!
//! Exit status: 0 success, 1 a semantic failure (invalid model, formula not
//! valid, no parse), 2 bad input, 3 a search bound was reached.

use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lfgmc_core::search::RejectReason;
use lfgmc_core::{
    check_parse, parse_formula, parse_grammar, parse_sentence, render_formula, valid, EvalError, Grammar, GrammarError,
    Model, ModelError, ParseError, SearchBounds, SearchError, Section, ValidationReport,
};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "lfgmc", version, about = "Model checker for LFG structures")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the structural invariants of one or more model documents.
    Validate {
        /// Model file, or `-` for standard input.
        model: PathBuf,
    },
    /// Check a formula, or every formula of a compiled grammar, for validity.
    Check(CheckArgs),
    /// Find the sentence structures of a token string.
    Parse(ParseArgs),
    /// Print the theory a grammar compiles to.
    Compile { grammar: PathBuf },
}

#[derive(Args)]
struct CheckArgs {
    /// Model file, or `-` for standard input.
    model: PathBuf,
    #[arg(long, conflicts_with = "grammar", required_unless_present = "grammar")]
    formula: Option<String>,
    #[arg(long)]
    grammar: Option<PathBuf>,
}

#[derive(Args)]
struct ParseArgs {
    grammar: PathBuf,
    #[arg(required = true)]
    tokens: Vec<String>,
    #[arg(long, default_value_t = 64)]
    max_tree: usize,
    #[arg(long, default_value_t = 64)]
    max_fnodes: usize,
    #[arg(long, default_value_t = 1000)]
    max_models: usize,
    /// Write each model to its own file in this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Model { path: PathBuf, source: ModelError },
    #[error("{}: no model documents", .0.display())]
    NoModels(PathBuf),
    #[error("{}: {source}", path.display())]
    Grammar { path: PathBuf, source: GrammarError },
    #[error("formula: {0}")]
    Formula(#[from] ParseError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("model is not valid: {}", first(.0))]
    InvalidModel(ValidationReport),
}

fn first(r: &ValidationReport) -> String {
    r.violations.first().map(ToString::to_string).unwrap_or_default()
}

const OK: u8 = 0;
const FAILED: u8 = 1;
const BAD_INPUT: u8 = 2;
const BOUND: u8 = 3;

struct Out {
    format: Format,
    color: bool,
}

impl Out {
    fn paint(&self, text: &str, good: bool) -> String {
        if self.color {
            format!("\x1b[{}m{text}\x1b[0m", if good { 32 } else { 31 })
        } else {
            text.to_string()
        }
    }
}

fn use_color() -> bool {
    match std::env::var("LFGMC_COLOR") {
        Ok(v) if v == "0" => false,
        Ok(v) if v == "1" => true,
        _ => io::stdout().is_terminal(),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io { path: path.to_path_buf(), source };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

/// One or more concatenated JSON model documents.
fn read_models(path: &Path) -> Result<Vec<Model>, CliError> {
    let text = read_text(path)?;
    let model_err = |source| CliError::Model { path: path.to_path_buf(), source };
    let mut out = Vec::new();
    for doc in serde_json::Deserializer::from_str(&text).into_iter::<Value>() {
        let doc = doc.map_err(|e| model_err(ModelError::Document(e.to_string())))?;
        out.push(Model::from_json(&doc.to_string()).map_err(model_err)?);
    }
    if out.is_empty() {
        return Err(CliError::NoModels(path.to_path_buf()));
    }
    Ok(out)
}

fn read_grammar(path: &Path) -> Result<Grammar, CliError> {
    parse_grammar(&read_text(path)?).map_err(|source| CliError::Grammar { path: path.to_path_buf(), source })
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn cmd_validate(out: &Out, path: &Path) -> Result<u8, CliError> {
    let models = read_models(path)?;
    let reports: Vec<ValidationReport> = models.iter().map(Model::validate).collect();
    let clean = reports.iter().all(ValidationReport::is_valid);
    match out.format {
        Format::Json => print_json(&json!({
            "valid": clean,
            "models": reports.iter().map(|r| json!({"valid": r.is_valid(), "violations": r.violations})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            for (i, r) in reports.iter().enumerate() {
                let prefix = if reports.len() > 1 { format!("model {i}: ") } else { String::new() };
                if r.is_valid() {
                    println!("{prefix}{}", out.paint("valid", true));
                }
                for v in &r.violations {
                    println!("{prefix}{} {v}", out.paint("violation", false));
                }
            }
        }
    }
    Ok(if clean { OK } else { FAILED })
}

struct Checked {
    label: String,
    formula: String,
    counterexample: Option<String>,
}

fn cmd_check(out: &Out, args: &CheckArgs) -> Result<u8, CliError> {
    let models = read_models(&args.model)?;
    let theory = match &args.grammar {
        Some(g) => Some(read_grammar(g)?.compile().map_err(|source| CliError::Grammar { path: g.clone(), source })?),
        None => None,
    };
    let mut all: Vec<Vec<Checked>> = Vec::new();
    for m in &models {
        let report = m.validate();
        if !report.is_valid() {
            return Err(CliError::InvalidModel(report));
        }
        let mut rows = Vec::new();
        match (&theory, &args.formula) {
            (Some(theory), _) => {
                for e in check_parse(theory, m).entries {
                    rows.push(Checked {
                        label: format!("{}[{}]", e.section, e.index),
                        formula: render_formula(&e.formula),
                        counterexample: e.result?.map(|n| n.to_string()),
                    });
                }
            }
            (None, Some(text)) => {
                let f = parse_formula(text, m.sig())?;
                rows.push(Checked {
                    label: "formula".into(),
                    formula: render_formula(&f),
                    counterexample: valid(m, &f)?.map(|n| n.to_string()),
                });
            }
            (None, None) => unreachable!("clap requires --formula or --grammar"),
        }
        all.push(rows);
    }
    let clean = all.iter().flatten().all(|c| c.counterexample.is_none());
    match out.format {
        Format::Json => print_json(&json!({
            "valid": clean,
            "models": all.iter().map(|rows| rows.iter().map(|c| json!({
                "label": c.label,
                "formula": c.formula,
                "valid": c.counterexample.is_none(),
                "counterexample": c.counterexample,
            })).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        Format::Text => {
            for (i, rows) in all.iter().enumerate() {
                let prefix = if all.len() > 1 { format!("model {i}: ") } else { String::new() };
                for c in rows {
                    match &c.counterexample {
                        None => println!("{prefix}{} {}", out.paint("valid", true), c.label),
                        Some(n) => {
                            println!("{prefix}{} {} at {n}: {}", out.paint("FAIL", false), c.label, c.formula)
                        }
                    }
                }
            }
        }
    }
    Ok(if clean { OK } else { FAILED })
}

fn reason_json(r: &RejectReason) -> Value {
    match r {
        RejectReason::Unsatisfied { section, index, node } => json!({
            "kind": "unsatisfied", "section": section.as_str(), "index": index, "counterexample": node.to_string(),
        }),
        RejectReason::Invalid(kinds) => json!({"kind": "invalid", "violations": kinds}),
        RejectReason::Conflict(_) => json!({"kind": "conflict", "detail": r.to_string()}),
    }
}

fn cmd_parse(out: &Out, args: &ParseArgs) -> Result<u8, CliError> {
    let g = read_grammar(&args.grammar)?;
    let theory = g.compile().map_err(|source| CliError::Grammar { path: args.grammar.clone(), source })?;
    let bounds = SearchBounds::new(args.max_tree, args.max_fnodes, args.max_models)?;
    let res = parse_sentence(&theory, &g, &args.tokens, bounds)?;
    let code = if res.bound_hit() || res.truncated {
        BOUND
    } else if res.models.is_empty() {
        FAILED
    } else {
        OK
    };
    let mut written = Vec::new();
    if let Some(dir) = &args.out {
        let io_err = |path: &Path, source| CliError::Io { path: path.to_path_buf(), source };
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        for (i, m) in res.models.iter().enumerate() {
            let path = dir.join(format!("model-{:03}.json", i + 1));
            fs::write(&path, m.to_json() + "\n").map_err(|e| io_err(&path, e))?;
            written.push(path);
        }
    }
    match out.format {
        Format::Json => print_json(&json!({
            "count": res.models.len(),
            "candidates": res.candidates,
            "tree_bound_hit": res.tree_bound_hit,
            "fnode_bound_hit": res.fnode_bound_hit,
            "truncated": res.truncated,
            "files": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "models": if args.out.is_some() {
                Vec::new()
            } else {
                res.models.iter().map(|m| serde_json::from_str(&m.to_json()).expect("model JSON")).collect::<Vec<Value>>()
            },
            "rejections": res.rejections.iter().map(|r| json!({"tree": r.tree, "reason": reason_json(&r.reason)})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            if args.out.is_none() {
                for m in &res.models {
                    writeln!(lock, "{}", m.to_json()).map_err(|e| CliError::Io { path: "-".into(), source: e })?;
                }
            }
            for p in &written {
                eprintln!("wrote {}", p.display());
            }
            for r in &res.rejections {
                eprintln!("rejected {}: {}", r.tree, r.reason);
            }
            let n = res.models.len();
            eprintln!("{n} model{}", if n == 1 { "" } else { "s" });
            if res.tree_bound_hit {
                eprintln!("{}", out.paint("tree-node bound reached; larger trees were not explored", false));
            }
            if res.fnode_bound_hit {
                eprintln!("{}", out.paint("f-node bound reached; some candidates were skipped", false));
            }
            if res.truncated {
                eprintln!("{}", out.paint("model limit reached; more models exist", false));
            }
        }
    }
    Ok(code)
}

fn cmd_compile(out: &Out, path: &Path) -> Result<u8, CliError> {
    let g = read_grammar(path)?;
    let theory = g.compile().map_err(|source| CliError::Grammar { path: path.to_path_buf(), source })?;
    let sections = [Section::Licensing, Section::Lexical, Section::Completeness, Section::Coherence, Section::Axiom];
    let formulas = theory.formulas();
    let of = |s: Section| formulas.iter().filter(move |tf| tf.section == s).map(|tf| render_formula(tf.formula));
    match out.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for s in sections {
                obj.insert(s.as_str().to_string(), json!(of(s).collect::<Vec<_>>()));
            }
            print_json(&Value::Object(obj));
        }
        Format::Text => {
            for s in sections {
                if s == Section::Axiom && theory.axioms.is_empty() {
                    continue;
                }
                println!("# {s}");
                for f in of(s) {
                    println!("{f}");
                }
            }
        }
    }
    Ok(OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { format: cli.format, color: use_color() };
    let res = match &cli.cmd {
        Cmd::Validate { model } => cmd_validate(&out, model),
        Cmd::Check(args) => cmd_check(&out, args),
        Cmd::Parse(args) => cmd_parse(&out, args),
        Cmd::Compile { grammar } => cmd_compile(&out, grammar),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match out.format {
                Format::Json => print_json(&json!({"error": e.to_string()})),
                Format::Text => eprintln!("{}: {e}", out.paint("error", false)),
            }
            ExitCode::from(BAD_INPUT)
        }
    }
}
