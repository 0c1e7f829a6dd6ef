use crate::formula::parse_formula;
use crate::model::{FeaturePath, Signature};

use super::{AnnotatedRule, Daughter, Grammar, GrammarError, LexEntry, LexSchema, Schema, SemForm, PRED, REL};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Colon,
    Eq,
    Comma,
    Dot,
    Arrow,
    /// Raw formula text of an `axiom` item with the byte offset it starts at.
    Formula(String, usize),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Formula(..) => "a formula".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
    (line, col)
}

fn error_at(src: &str, offset: usize, msg: impl Into<String>) -> GrammarError {
    let (line, col) = line_col(src, offset);
    GrammarError::Syntax { line, col, msg: msg.into() }
}

impl<'a> Lexer<'a> {
    fn skip_trivia(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b'#' => {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize), GrammarError> {
        self.skip_trivia();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::Eof, start));
        };
        let single = |t| Ok((t, start));
        self.pos += c.len_utf8();
        match c {
            '{' => single(Tok::LBrace),
            '}' => single(Tok::RBrace),
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            ';' => single(Tok::Semi),
            ':' => single(Tok::Colon),
            '=' => single(Tok::Eq),
            ',' => single(Tok::Comma),
            '.' => single(Tok::Dot),
            '-' if rest.starts_with("->") => {
                self.pos += 1;
                single(Tok::Arrow)
            }
            '"' => {
                let mut out = String::new();
                let mut chars = rest[1..].char_indices();
                loop {
                    match chars.next() {
                        None => return Err(error_at(self.src, start, "unterminated string")),
                        Some((i, '"')) => {
                            self.pos = start + 1 + i + 1;
                            return Ok((Tok::Str(out), start));
                        }
                        Some((_, '\\')) => match chars.next() {
                            Some((_, e @ ('"' | '\\'))) => out.push(e),
                            _ => return Err(error_at(self.src, start, "bad escape in string")),
                        },
                        Some((_, '\n')) => return Err(error_at(self.src, start, "newline in string")),
                        Some((_, ch)) => out.push(ch),
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = rest.find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_')).unwrap_or(rest.len());
                self.pos = start + len;
                Ok((Tok::Ident(rest[..len].to_string()), start))
            }
            other => Err(error_at(self.src, start, format!("unexpected character {other:?}"))),
        }
    }

    /// Everything up to the next `;` outside string literals.
    fn raw_formula(&mut self) -> Result<(Tok, usize), GrammarError> {
        let start = self.pos;
        let mut in_str = false;
        let mut escaped = false;
        for (i, c) in self.src[start..].char_indices() {
            if in_str {
                match c {
                    _ if escaped => escaped = false,
                    '\\' => escaped = true,
                    '"' => in_str = false,
                    _ => {}
                }
            } else if c == '"' {
                in_str = true;
            } else if c == ';' {
                self.pos = start + i;
                return Ok((Tok::Formula(self.src[start..start + i].to_string(), start), start));
            }
        }
        Err(error_at(self.src, start, "axiom is not terminated by `;`"))
    }
}

#[derive(Default)]
struct SigParts {
    cats: Option<Vec<String>>,
    atoms: Option<Vec<String>>,
    feats: Option<Vec<String>>,
    words: Vec<String>,
    gf: Vec<FeaturePath>,
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
}

enum Value {
    Down(FeaturePath),
    Atom(String),
    Form(SemForm),
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(Tok, usize), GrammarError> {
        let (next, at) = self.lex.next()?;
        let prev = std::mem::replace(&mut self.tok, next);
        let prev_at = std::mem::replace(&mut self.at, at);
        Ok((prev, prev_at))
    }

    fn err(&self, msg: impl Into<String>) -> GrammarError {
        error_at(self.lex.src, self.at, msg)
    }

    fn unexpected(&self, wanted: &str) -> GrammarError {
        self.err(format!("expected {wanted}, found {}", self.tok.describe()))
    }

    fn expect(&mut self, t: Tok) -> Result<(), GrammarError> {
        if self.tok == t {
            self.bump()?;
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn ident(&mut self, wanted: &str) -> Result<(String, usize), GrammarError> {
        match &self.tok {
            Tok::Ident(_) => match self.bump()? {
                (Tok::Ident(s), at) => Ok((s, at)),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(&self.tok, Tok::Ident(x) if x == s)
    }

    fn dotted_path(&mut self) -> Result<FeaturePath, GrammarError> {
        let mut path = vec![self.ident("a feature name")?.0];
        while self.tok == Tok::Dot {
            self.bump()?;
            path.push(self.ident("a feature name")?.0);
        }
        Ok(path)
    }

    /// Features after `up`/`down` inside parentheses, separated by spaces or dots.
    fn feature_seq(&mut self) -> Result<FeaturePath, GrammarError> {
        let mut path = Vec::new();
        loop {
            match &self.tok {
                Tok::Ident(_) => path.push(self.ident("a feature name")?.0),
                Tok::Dot if !path.is_empty() => {
                    self.bump()?;
                }
                _ => return Ok(path),
            }
        }
    }

    fn signature(&mut self, parts: &mut SigParts) -> Result<(), GrammarError> {
        self.expect(Tok::LBrace)?;
        while self.tok != Tok::RBrace {
            let (field, at) = self.ident("a signature field")?;
            self.expect(Tok::Colon)?;
            if field == "gf" {
                while self.tok != Tok::Semi {
                    parts.gf.push(self.dotted_path()?);
                }
            } else {
                let mut names = Vec::new();
                while self.tok != Tok::Semi {
                    match self.bump()? {
                        (Tok::Ident(s) | Tok::Str(s), _) => names.push(s),
                        (t, at) => {
                            return Err(error_at(self.lex.src, at, format!("expected a name, found {}", t.describe())))
                        }
                    }
                }
                let slot = match field.as_str() {
                    "cat" => &mut parts.cats,
                    "atom" => &mut parts.atoms,
                    "feat" => &mut parts.feats,
                    "word" => {
                        parts.words.extend(names);
                        self.expect(Tok::Semi)?;
                        continue;
                    }
                    _ => return Err(error_at(self.lex.src, at, format!("unknown signature field `{field}`"))),
                };
                if slot.replace(names).is_some() {
                    return Err(error_at(self.lex.src, at, format!("field `{field}` given twice")));
                }
            }
            self.expect(Tok::Semi)?;
        }
        self.expect(Tok::RBrace)
    }

    fn upper(&mut self) -> Result<FeaturePath, GrammarError> {
        if self.is_ident("up") {
            self.bump()?;
            return Ok(Vec::new());
        }
        self.expect(Tok::LParen)?;
        if !self.is_ident("up") {
            return Err(self.unexpected("`up`"));
        }
        self.bump()?;
        let path = self.feature_seq()?;
        self.expect(Tok::RParen)?;
        Ok(path)
    }

    fn value(&mut self) -> Result<Value, GrammarError> {
        if self.is_ident("down") {
            self.bump()?;
            return Ok(Value::Down(Vec::new()));
        }
        if self.tok == Tok::LParen {
            self.bump()?;
            if !self.is_ident("down") {
                return Err(self.unexpected("`down`"));
            }
            self.bump()?;
            let path = self.feature_seq()?;
            self.expect(Tok::RParen)?;
            return Ok(Value::Down(path));
        }
        let (name, _) = self.ident("a value")?;
        if self.tok != Tok::LParen {
            return Ok(Value::Atom(name));
        }
        self.bump()?;
        let mut args = Vec::new();
        while self.tok != Tok::RParen {
            if !args.is_empty() {
                self.expect(Tok::Comma)?;
            }
            args.push(self.dotted_path()?);
        }
        self.bump()?;
        Ok(Value::Form(SemForm { rel: name, args }))
    }

    /// One `lhs = value`, with the offset of its start.
    fn schema(&mut self) -> Result<(FeaturePath, Value, usize), GrammarError> {
        let at = self.at;
        let up = self.upper()?;
        self.expect(Tok::Eq)?;
        if self.is_ident("c") {
            // `=c v` would read the atom `c` followed by another value
            let (tok, _) = self.lex.clone_peek()?;
            if matches!(tok, Tok::Ident(_) | Tok::LParen | Tok::Str(_)) {
                return Err(self.err("constraining equations (=c) are not supported"));
            }
        }
        let v = self.value()?;
        Ok((up, v, at))
    }

    fn schemata<T>(
        &mut self,
        mut each: impl FnMut(FeaturePath, Value, usize) -> Result<T, GrammarError>,
    ) -> Result<Vec<T>, GrammarError> {
        let mut out = Vec::new();
        if self.tok != Tok::LBrace {
            return Ok(out);
        }
        self.bump()?;
        while self.tok != Tok::RBrace {
            let (up, v, at) = self.schema()?;
            out.push(each(up, v, at)?);
            if self.tok == Tok::Semi {
                self.bump()?;
            } else if self.tok != Tok::RBrace {
                return Err(self.unexpected("`;` or `}`"));
            }
        }
        self.bump()?;
        Ok(out)
    }

    fn rule(&mut self) -> Result<AnnotatedRule, GrammarError> {
        let (lhs, _) = self.ident("a category")?;
        self.expect(Tok::Arrow)?;
        let mut rhs = Vec::new();
        let src = self.lex.src;
        while self.tok != Tok::Semi {
            let (cat, _) = self.ident("a category or `;`")?;
            let schemata = self.schemata(|up, v, at| match v {
                Value::Down(down) => Ok(Schema::UpPathEqDown { up, down }),
                Value::Atom(value) => Ok(Schema::UpPathAtom { up, value }),
                Value::Form(_) => Err(error_at(src, at, "semantic forms belong in lexical entries")),
            })?;
            rhs.push(Daughter { cat, schemata });
        }
        if rhs.is_empty() {
            return Err(self.err(format!("rule for {lhs} has an empty right-hand side")));
        }
        self.expect(Tok::Semi)?;
        Ok(AnnotatedRule { lhs, rhs })
    }

    fn lex_entry(&mut self) -> Result<LexEntry, GrammarError> {
        let word = match self.bump()? {
            (Tok::Ident(s) | Tok::Str(s), _) => s,
            (t, at) => return Err(error_at(self.lex.src, at, format!("expected a word, found {}", t.describe()))),
        };
        let (cat, _) = self.ident("a category")?;
        let src = self.lex.src;
        let schemata = self.schemata(|up, v, at| match v {
            Value::Down(_) => Err(error_at(src, at, "`down` has no meaning in a lexical entry")),
            Value::Atom(rel) if up == [PRED] => Ok(LexSchema::SemForm(SemForm { rel, args: Vec::new() })),
            Value::Atom(value) => Ok(LexSchema::UpPathAtom { up, value }),
            Value::Form(f) if up == [PRED] => Ok(LexSchema::SemForm(f)),
            Value::Form(_) => Err(error_at(src, at, "a semantic form can only be the value of (up pred)")),
        })?;
        self.expect(Tok::Semi)?;
        Ok(LexEntry { word, cat, schemata })
    }
}

impl Lexer<'_> {
    fn clone_peek(&self) -> Result<(Tok, usize), GrammarError> {
        Lexer { src: self.src, pos: self.pos }.next()
    }
}

/// Parses a grammar file. Lexical word forms join the signature's words
/// and `rel` joins its features when the lexicon uses semantic forms.
pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut lex = Lexer { src: text, pos: 0 };
    let (tok, at) = lex.next()?;
    let mut p = Parser { lex, tok, at };

    let mut sig_parts: Option<SigParts> = None;
    let mut start: Option<(String, usize)> = None;
    let mut rules = Vec::new();
    let mut lexicon = Vec::new();
    let mut axioms: Vec<(String, usize)> = Vec::new();

    while p.tok != Tok::Eof {
        if p.is_ident("axiom") {
            // formula text is not made of grammar tokens
            p.lex.pos = p.at + "axiom".len();
            let (tok, _) = p.lex.raw_formula()?;
            let Tok::Formula(f, off) = tok else { unreachable!() };
            axioms.push((f, off));
            let (next, at) = p.lex.next()?;
            p.tok = next;
            p.at = at;
            p.expect(Tok::Semi)?;
            continue;
        }
        let (kw, at) = p.ident("`signature`, `start`, `rule`, `lex` or `axiom`")?;
        match kw.as_str() {
            "signature" => {
                if sig_parts.is_some() {
                    return Err(error_at(text, at, "second signature block"));
                }
                let mut parts = SigParts::default();
                p.signature(&mut parts)?;
                sig_parts = Some(parts);
            }
            "start" => {
                let s = p.ident("a category")?;
                p.expect(Tok::Semi)?;
                if start.replace(s).is_some() {
                    return Err(error_at(text, at, "second start declaration"));
                }
            }
            "rule" => rules.push((p.rule()?, at)),
            "lex" => lexicon.push((p.lex_entry()?, at)),
            other => return Err(error_at(text, at, format!("unknown item `{other}`"))),
        }
    }

    let parts = sig_parts.ok_or_else(|| error_at(text, 0, "missing signature block"))?;
    let sem_forms = lexicon.iter().any(|(e, _)| e.schemata.iter().any(|s| matches!(s, LexSchema::SemForm(_))));
    let mut sig = Signature::new(
        parts.cats.ok_or_else(|| error_at(text, 0, "signature has no `cat` field"))?,
        parts.atoms.ok_or_else(|| error_at(text, 0, "signature has no `atom` field"))?,
        parts.feats.ok_or_else(|| error_at(text, 0, "signature has no `feat` field"))?,
    )
    .with_gf(parts.gf)
    .with_words(parts.words)
    .with_words(lexicon.iter().map(|(e, _)| e.word.clone()));
    if sem_forms && !sig.is_feat(REL) {
        sig = sig.with_feat(REL);
    }
    let vs = sig.violations();
    if !vs.is_empty() {
        return Err(GrammarError::Signature(vs));
    }

    let located = |at: usize, e: GrammarError| match e {
        GrammarError::Syntax { .. } => e,
        other => error_at(text, at, other.to_string()),
    };
    let start_name = match &start {
        Some((s, at)) => {
            if !sig.is_cat(s) {
                return Err(error_at(text, *at, format!("start symbol {s:?} is not a category")));
            }
            Some(s.clone())
        }
        None => None,
    };
    // per-item name checks so errors point at the offending item
    for (r, at) in &rules {
        super::compile_rule(r, &sig).map_err(|e| located(*at, e))?;
    }
    for (e, at) in &lexicon {
        super::compile_lex_entry(e, &sig).map_err(|err| located(*at, err))?;
    }
    let mut formulas = Vec::new();
    for (f, off) in &axioms {
        let parsed = parse_formula(f, &sig).map_err(|e| error_at(text, off + e.offset, e.kind.to_string()))?;
        formulas.push(parsed);
    }
    let g = Grammar::new(
        sig,
        start_name,
        rules.into_iter().map(|(r, _)| r).collect(),
        lexicon.into_iter().map(|(e, _)| e).collect(),
    )?;
    g.with_axioms(formulas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::Formula;

    #[test]
    fn figure1_parses() {
        let g = parse_grammar(fixtures::FIGURE1).unwrap();
        assert_eq!(g.start(), "S");
        assert_eq!(g.rules().len(), 3);
        assert_eq!(g.lexicon().len(), 3);
        assert!(g.sig().is_feat("rel"));
        assert!(g.sig().is_word("walks"));
        assert_eq!(g.rules()[0].rhs[0].schemata, vec![Schema::UpPathEqDown { up: vec!["subj".into()], down: vec![] }]);
        let girl = &g.lexicon()[1];
        assert_eq!(girl.schemata[0], LexSchema::SemForm(SemForm { rel: "girl".into(), args: vec![] }));
    }

    #[test]
    fn errors_carry_line_and_column() {
        let text = "signature { cat: S; atom: x; feat: f; }\nrule S -> S {(up f) = };\n";
        match parse_grammar(text) {
            Err(GrammarError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 23)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constraining_equations_are_rejected() {
        let text = "signature { cat: S N; atom: sg; feat: num; }\nrule S -> N {(up num) =c sg};\nlex \"n\" N;";
        let err = parse_grammar(text).unwrap_err().to_string();
        assert!(err.contains("constraining"), "{err}");
        assert!(err.starts_with("2:"), "{err}");
    }

    #[test]
    fn atom_named_c_is_still_an_atom() {
        let text = "signature { cat: S N; atom: c; feat: num; }\nrule S -> N {(up num)=c};\nlex n N;";
        let g = parse_grammar(text).unwrap();
        assert_eq!(
            g.rules()[0].rhs[0].schemata,
            vec![Schema::UpPathAtom { up: vec!["num".into()], value: "c".into() }]
        );
    }

    #[test]
    fn multi_step_gf_and_semantic_forms() {
        let text = "signature { cat: S V; atom: give; feat: pred obl obj subj; gf: subj obl.obj; }\n\
            rule S -> V {up=down};\n\
            lex gives V {(up pred)=give(subj, obl.obj)};";
        let g = parse_grammar(text).unwrap();
        assert_eq!(g.sig().gf(), &[vec!["subj".to_string()], vec!["obl".to_string(), "obj".to_string()]]);
        let LexSchema::SemForm(f) = &g.lexicon()[0].schemata[0] else { panic!() };
        assert_eq!(f.args[1], vec!["obl".to_string(), "obj".to_string()]);
    }

    #[test]
    fn semantic_form_argument_must_be_governable() {
        let text = "signature { cat: S V; atom: give; feat: pred obj subj; gf: subj; }\n\
            rule S -> V;\nlex gives V {(up pred)=give(obj)};";
        let err = parse_grammar(text).unwrap_err().to_string();
        assert!(err.contains("governable"), "{err}");
    }

    #[test]
    fn unknown_names_point_at_their_item() {
        let text = "signature { cat: S; atom: x; feat: f; }\n\n  rule S -> NP;\n";
        match parse_grammar(text) {
            Err(GrammarError::Syntax { line, col, msg }) => {
                assert_eq!((line, col), (3, 3));
                assert!(msg.contains("NP"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn axioms_and_start() {
        let text = "signature { cat: S N; atom: x; feat: f; }\nstart N;\nrule S -> N;\nlex \"a;b\" N;\naxiom !(\"a;b\") | N; # comment\n";
        let g = parse_grammar(text).unwrap();
        assert_eq!(g.start(), "N");
        assert_eq!(g.axioms(), &[Formula::or(Formula::not(Formula::word("a;b")), Formula::cat("N"))]);
    }

    #[test]
    fn down_in_lexicon_is_rejected() {
        let text = "signature { cat: S N; atom: x; feat: f; }\nrule S -> N;\nlex n N {up=down};";
        assert!(parse_grammar(text).is_err());
    }

    #[test]
    fn missing_pieces() {
        assert!(parse_grammar("").is_err());
        assert!(parse_grammar("signature { cat: S; atom: x; feat: f; }").is_err());
        assert!(parse_grammar("signature { cat: S; atom: x; feat: f; }\nlex n S;").is_err());
        assert!(parse_grammar("signature { cat: S; atom: x; feat: f; }\nrule S -> ;\nlex n S;").is_err());
    }
}
