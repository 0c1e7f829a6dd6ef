use std::fmt;

use thiserror::Error;

use super::ast::{BulletArgs, Formula, PathEq, PathTerm, TreeStep};
use crate::model::Signature;

/// Deepest nesting accepted; keeps recursion bounded on hostile input.
const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownName(String),
    EmptyBullet,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownName(n) => write!(f, "unknown name {n:?}"),
            ParseErrorKind::EmptyBullet => f.write_str("bullet needs at least one argument"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    True,
    False,
    CStruct,
    FStruct,
    Up,
    Down,
    Zoomin,
    Bullet,
    Ident(String),
    Str(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Comma,
    Tilde,
    LAngle,
    RAngle,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Str(s) => format!("word {s:?}"),
            Tok::Eof => "end of input".into(),
            other => format!("{:?}", other).to_lowercase(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset, msg: String| ParseError { offset, kind: ParseErrorKind::Syntax(msg) };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = |t| Some((t, 1));
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => single(Tok::Not),
            b'&' => single(Tok::And),
            b'|' => single(Tok::Or),
            b'(' => single(Tok::LParen),
            b')' => single(Tok::RParen),
            b',' => single(Tok::Comma),
            b'~' => single(Tok::Tilde),
            b'>' => single(Tok::RAngle),
            b'-' if bytes.get(i + 1) == Some(&b'>') => Some((Tok::Implies, 2)),
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => Some((Tok::Iff, 3)),
            b'<' => single(Tok::LAngle),
            _ => None,
        };
        if let Some((t, len)) = tok {
            out.push((t, start));
            i += len;
            continue;
        }
        if c == b'"' {
            i += 1;
            let mut s = String::new();
            loop {
                let Some(ch) = text[i..].chars().next() else {
                    return Err(err(start, "unterminated word literal".into()));
                };
                i += ch.len_utf8();
                match ch {
                    '"' => break,
                    '\\' => {
                        let Some(esc) = text[i..].chars().next() else {
                            return Err(err(start, "unterminated word literal".into()));
                        };
                        i += esc.len_utf8();
                        match esc {
                            '"' | '\\' => s.push(esc),
                            _ => return Err(err(i - 1, format!("unknown escape \\{esc}"))),
                        }
                    }
                    _ => s.push(ch),
                }
            }
            out.push((Tok::Str(s), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let t = match word {
                "true" => Tok::True,
                "false" => Tok::False,
                "cstruct" => Tok::CStruct,
                "fstruct" => Tok::FStruct,
                "up" => Tok::Up,
                "down" => Tok::Down,
                "zoomin" => Tok::Zoomin,
                "bullet" => Tok::Bullet,
                _ => Tok::Ident(word.to_string()),
            };
            out.push((t, start));
            continue;
        }
        let ch = text[i..].chars().next().expect("in bounds");
        return Err(err(start, format!("unexpected character {ch:?}")));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), kind: ParseErrorKind::Syntax(msg.into()) })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {what}, found {}", self.peek().describe()))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.syntax("formula nested too deeply");
        }
        Ok(())
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            self.enter()?;
            let rhs = self.implies()?;
            self.depth -= 1;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    /// Whether the tokens from here spell `{up|down} zoomin {feat} ~`.
    fn at_path_eq(&self) -> bool {
        let mut k = 0;
        while matches!(self.peek_at(k), Tok::Up | Tok::Down) {
            k += 1;
        }
        if *self.peek_at(k) != Tok::Zoomin {
            return false;
        }
        k += 1;
        while matches!(self.peek_at(k), Tok::Ident(f) if self.sig.is_feat(f)) {
            k += 1;
        }
        *self.peek_at(k) == Tok::Tilde
    }

    fn path_term(&mut self) -> Result<PathTerm, ParseError> {
        let mut tree = Vec::new();
        loop {
            match self.peek() {
                Tok::Up => tree.push(TreeStep::Up),
                Tok::Down => tree.push(TreeStep::Down),
                _ => break,
            }
            self.bump();
        }
        self.expect(Tok::Zoomin, "'zoomin' in path equality")?;
        let mut feats = Vec::new();
        while let Tok::Ident(f) = self.peek() {
            if !self.sig.is_feat(f) {
                break;
            }
            feats.push(f.clone());
            self.bump();
        }
        Ok(PathTerm { tree, feats })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let f = match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Formula::not(self.unary()?)
            }
            Tok::LAngle => {
                self.bump();
                let at = self.offset();
                let name = match self.bump() {
                    Tok::Ident(n) => n,
                    tree @ (Tok::Up | Tok::Down | Tok::Zoomin) => {
                        // `<up>`, `<down>` and `<zoomin>` spell the tree modalities
                        self.expect(Tok::RAngle, "'>'")?;
                        let body = self.unary()?;
                        let f = match tree {
                            Tok::Up => Formula::up(body),
                            Tok::Down => Formula::down(body),
                            _ => Formula::zoomin(body),
                        };
                        self.depth -= 1;
                        return Ok(f);
                    }
                    other => {
                        return Err(ParseError {
                            offset: at,
                            kind: ParseErrorKind::Syntax(format!(
                                "expected a feature name, found {}",
                                other.describe()
                            )),
                        })
                    }
                };
                if !self.sig.is_feat(&name) {
                    return Err(ParseError { offset: at, kind: ParseErrorKind::UnknownName(name) });
                }
                self.expect(Tok::RAngle, "'>'")?;
                Formula::feat(name, self.unary()?)
            }
            Tok::Up | Tok::Down | Tok::Zoomin if self.at_path_eq() => {
                let left = self.path_term()?;
                self.expect(Tok::Tilde, "'~'")?;
                let right = self.path_term()?;
                Formula::PathEq(PathEq { left, right })
            }
            Tok::Up => {
                self.bump();
                Formula::up(self.unary()?)
            }
            Tok::Down => {
                self.bump();
                Formula::down(self.unary()?)
            }
            Tok::Zoomin => {
                self.bump();
                Formula::zoomin(self.unary()?)
            }
            _ => self.primary()?,
        };
        self.depth -= 1;
        Ok(f)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::CStruct => Ok(Formula::CStruct),
            Tok::FStruct => Ok(Formula::FStruct),
            Tok::Ident(name) => {
                if self.sig.is_cat(&name) {
                    Ok(Formula::Cat(name))
                } else if self.sig.is_atom(&name) {
                    Ok(Formula::Atom(name))
                } else if self.sig.is_word(&name) {
                    Ok(Formula::Word(name))
                } else if self.sig.is_feat(&name) {
                    Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::Syntax(format!("feature {name:?} used as a formula; write <{name}> φ")),
                    })
                } else {
                    Err(ParseError { offset: at, kind: ParseErrorKind::UnknownName(name) })
                }
            }
            Tok::Str(w) => {
                if self.sig.is_word(&w) {
                    Ok(Formula::Word(w))
                } else {
                    Err(ParseError { offset: at, kind: ParseErrorKind::UnknownName(w) })
                }
            }
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Bullet => {
                self.expect(Tok::LParen, "'(' after bullet")?;
                if *self.peek() == Tok::RParen {
                    return Err(ParseError { offset: self.offset(), kind: ParseErrorKind::EmptyBullet });
                }
                let mut args = vec![self.formula()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.formula()?);
                }
                self.expect(Tok::RParen, "',' or ')'")?;
                Ok(Formula::Bullet(BulletArgs::new(args).expect("at least one argument parsed")))
            }
            other => Err(ParseError {
                offset: at,
                kind: ParseErrorKind::Syntax(format!("expected a formula, found {}", other.describe())),
            }),
        }
    }
}

/// Parses the concrete syntax, resolving bare names against `sig`: a name is
/// a category, else an atom, else a word form. Quoted strings are words.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, depth: 0, sig };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.syntax(format!("unexpected {} after formula", p.peek().describe()));
    }
    Ok(f)
}
