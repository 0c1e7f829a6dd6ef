use std::fmt::{self, Write};

use super::ast::{Formula, PathEq, PathTerm, TreeStep};

/// Renders `f` in the concrete syntax. Binary connectives and path
/// equalities are always parenthesized and words are always quoted, so the
/// output re-parses to the same tree.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f).expect("writing to a String");
    out
}

fn write_formula(out: &mut String, f: &Formula) -> fmt::Result {
    match f {
        Formula::True => out.write_str("true"),
        Formula::False => out.write_str("false"),
        Formula::CStruct => out.write_str("cstruct"),
        Formula::FStruct => out.write_str("fstruct"),
        Formula::Cat(n) | Formula::Atom(n) => out.write_str(n),
        Formula::Word(w) => write_word(out, w),
        Formula::Not(g) => {
            out.write_str("!(")?;
            write_formula(out, g)?;
            out.write_char(')')
        }
        Formula::And(a, b) => binary(out, a, " & ", b),
        Formula::Or(a, b) => binary(out, a, " | ", b),
        Formula::Implies(a, b) => binary(out, a, " -> ", b),
        Formula::Iff(a, b) => binary(out, a, " <-> ", b),
        Formula::Feat(name, g) => {
            write!(out, "<{name}> ")?;
            write_formula(out, g)
        }
        Formula::Up(g) => prefix(out, "up ", g),
        Formula::Down(g) => prefix(out, "down ", g),
        Formula::Zoomin(g) => prefix(out, "zoomin ", g),
        Formula::Bullet(args) => {
            out.write_str("bullet(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.write_str(", ")?;
                }
                write_formula(out, a)?;
            }
            out.write_char(')')
        }
        Formula::PathEq(eq) => write_path_eq(out, eq),
    }
}

fn binary(out: &mut String, a: &Formula, op: &str, b: &Formula) -> fmt::Result {
    out.write_char('(')?;
    write_formula(out, a)?;
    out.write_str(op)?;
    write_formula(out, b)?;
    out.write_char(')')
}

fn prefix(out: &mut String, op: &str, g: &Formula) -> fmt::Result {
    out.write_str(op)?;
    write_formula(out, g)
}

fn write_word(out: &mut String, w: &str) -> fmt::Result {
    out.write_char('"')?;
    for c in w.chars() {
        if c == '"' || c == '\\' {
            out.write_char('\\')?;
        }
        out.write_char(c)?;
    }
    out.write_char('"')
}

fn write_term(out: &mut String, t: &PathTerm) -> fmt::Result {
    for step in &t.tree {
        out.write_str(match step {
            TreeStep::Up => "up ",
            TreeStep::Down => "down ",
        })?;
    }
    out.write_str("zoomin")?;
    for f in &t.feats {
        write!(out, " {f}")?;
    }
    Ok(())
}

fn write_path_eq(out: &mut String, eq: &PathEq) -> fmt::Result {
    out.write_char('(')?;
    write_term(out, &eq.left)?;
    out.write_str(" ~ ")?;
    write_term(out, &eq.right)?;
    out.write_char(')')
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}
