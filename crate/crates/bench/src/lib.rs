//! Workloads shared by the engine benchmarks.

use lfgmc_core::{parse_grammar, Grammar};

const ADJECTIVES: &str = r#"
signature {
  cat: S NP VP Det N A V;
  atom: a sing pst girl walk tall;
  feat: subj spec num pred tense rel adj;
  gf: subj;
}

rule S -> NP {(up subj)=down} VP {up=down};
rule NP -> Det N {up=down};
rule N -> A N {up=down};
rule VP -> V {up=down};

lex "a" Det {(up spec)=a; (up num)=sing};
lex "tall" A {(up adj)=tall};
lex "girl" N {(up pred)=girl; (up num)=sing};
lex "walks" V {(up pred)=walk(subj); (up tense)=pst};
"#;

/// The fixture fragment with a recursive adjective rule.
pub fn adjective_grammar() -> Grammar {
    parse_grammar(ADJECTIVES).expect("bench grammar parses")
}

/// `a tall ... tall girl walks` with `n` adjectives.
pub fn sentence(n: usize) -> Vec<String> {
    let mut s = vec!["a".to_string()];
    s.extend((0..n).map(|_| "tall".to_string()));
    s.extend(["girl".to_string(), "walks".to_string()]);
    s
}
