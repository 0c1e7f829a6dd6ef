//! Context-free derivations over a token string, ignoring schemata.

use std::collections::HashMap;
use std::sync::Arc;

use crate::grammar::Grammar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Deriv {
    /// Preterminal over one word, licensed by a lexicon entry.
    Lex {
        entry: usize,
    },
    Phrase {
        rule: usize,
        kids: Vec<Arc<Deriv>>,
    },
}

impl Deriv {
    pub(crate) fn size(&self) -> usize {
        match self {
            Deriv::Lex { .. } => 2,
            Deriv::Phrase { kids, .. } => 1 + kids.iter().map(|k| k.size()).sum::<usize>(),
        }
    }
}

type Key = (usize, usize, usize);
type Derivs = Arc<Vec<Arc<Deriv>>>;

/// Splits of `i..j` into `k` nonempty consecutive pieces.
fn splits(i: usize, j: usize, k: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 0 {
        return if i == j { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for mid in i + 1..=j {
        if j - mid < k - 1 {
            break;
        }
        for mut rest in splits(mid, j, k - 1) {
            rest.insert(0, (i, mid));
            out.push(rest);
        }
    }
    out
}

pub(crate) struct Chart<'g> {
    g: &'g Grammar,
    tokens: Vec<String>,
    cat_index: HashMap<String, usize>,
    /// Smallest derivation size per (cat, i, j); absent when underivable.
    min: HashMap<Key, usize>,
    max: HashMap<Key, Option<usize>>,
    memo: HashMap<(usize, usize, usize, usize), Derivs>,
}

impl<'g> Chart<'g> {
    pub(crate) fn new(g: &'g Grammar, tokens: &[String]) -> Self {
        let cat_index = g.sig().cats().iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let mut chart = Chart {
            g,
            tokens: tokens.to_vec(),
            cat_index,
            min: HashMap::new(),
            max: HashMap::new(),
            memo: HashMap::new(),
        };
        chart.compute_min();
        chart
    }

    fn cat(&self, name: &str) -> usize {
        self.cat_index[name]
    }

    fn rule_splits(&self, rule: usize, i: usize, j: usize) -> Vec<Vec<(usize, usize)>> {
        splits(i, j, self.g.rules()[rule].rhs.len())
    }

    fn compute_min(&mut self) {
        let n = self.tokens.len();
        for (i, tok) in self.tokens.iter().enumerate() {
            for e in self.g.lexicon() {
                if &e.word == tok {
                    self.min.insert((self.cat_index[&e.cat], i, i + 1), 2);
                }
            }
        }
        loop {
            let mut changed = false;
            for (r, rule) in self.g.rules().iter().enumerate() {
                let lhs = self.cat(&rule.lhs);
                for i in 0..n {
                    for j in i + 1..=n {
                        for split in self.rule_splits(r, i, j) {
                            let mut total = 1;
                            let mut ok = true;
                            for (d, (a, b)) in rule.rhs.iter().zip(&split) {
                                match self.min.get(&(self.cat(&d.cat), *a, *b)) {
                                    Some(s) => total += s,
                                    None => {
                                        ok = false;
                                        break;
                                    }
                                }
                            }
                            if ok && self.min.get(&(lhs, i, j)).map_or(true, |m| total < *m) {
                                self.min.insert((lhs, i, j), total);
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn min_size(&self, cat: &str) -> Option<usize> {
        self.min.get(&(*self.cat_index.get(cat)?, 0, self.tokens.len())).copied()
    }

    /// Largest derivation size of `cat` over the whole string; `Some(None)`
    /// when derivations are unbounded, `None` when there are none.
    pub(crate) fn max_size(&mut self, cat: &str) -> Option<Option<usize>> {
        let c = *self.cat_index.get(cat)?;
        let key = (c, 0, self.tokens.len());
        self.min.get(&key)?;
        let mut on_stack = Vec::new();
        Some(self.max_of(key, &mut on_stack))
    }

    fn max_of(&mut self, key: Key, on_stack: &mut Vec<Key>) -> Option<usize> {
        if let Some(m) = self.max.get(&key) {
            return *m;
        }
        if on_stack.contains(&key) {
            return None;
        }
        on_stack.push(key);
        let (c, i, j) = key;
        let mut best: Option<usize> = Some(0);
        if j == i + 1 && self.g.lexicon().iter().any(|e| e.word == self.tokens[i] && self.cat(&e.cat) == c) {
            best = Some(2);
        }
        let rules: Vec<usize> = (0..self.g.rules().len()).filter(|r| self.cat(&self.g.rules()[*r].lhs) == c).collect();
        'rules: for r in rules {
            for split in self.rule_splits(r, i, j) {
                let keys: Vec<Key> =
                    self.g.rules()[r].rhs.iter().zip(&split).map(|(d, (a, b))| (self.cat(&d.cat), *a, *b)).collect();
                if keys.iter().any(|k| !self.min.contains_key(k)) {
                    continue;
                }
                let mut total = Some(1usize);
                for k in keys {
                    total = match (total, self.max_of(k, on_stack)) {
                        (Some(t), Some(s)) => Some(t + s),
                        _ => None,
                    };
                }
                best = match (best, total) {
                    (Some(b), Some(t)) => Some(b.max(t)),
                    _ => None,
                };
                if best.is_none() {
                    break 'rules;
                }
            }
        }
        on_stack.pop();
        // reaching an open state means a cycle through this one, so an
        // unbounded answer is final too
        self.max.insert(key, best);
        best
    }

    /// Every derivation of `cat` over the whole string within `budget` nodes.
    pub(crate) fn derivations(&mut self, cat: &str, budget: usize) -> Vec<Arc<Deriv>> {
        let Some(&c) = self.cat_index.get(cat) else {
            return Vec::new();
        };
        self.trees(c, 0, self.tokens.len(), budget).as_ref().clone()
    }

    fn trees(&mut self, c: usize, i: usize, j: usize, budget: usize) -> Derivs {
        let key = (c, i, j, budget);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = Vec::new();
        if self.min.get(&(c, i, j)).is_some_and(|m| *m <= budget) {
            if j == i + 1 && budget >= 2 {
                for (e, entry) in self.g.lexicon().iter().enumerate() {
                    if entry.word == self.tokens[i] && self.cat(&entry.cat) == c {
                        out.push(Arc::new(Deriv::Lex { entry: e }));
                    }
                }
            }
            for r in 0..self.g.rules().len() {
                if self.cat(&self.g.rules()[r].lhs) != c {
                    continue;
                }
                for split in self.rule_splits(r, i, j) {
                    let keys: Vec<Key> = self.g.rules()[r]
                        .rhs
                        .iter()
                        .zip(&split)
                        .map(|(d, (a, b))| (self.cat(&d.cat), *a, *b))
                        .collect();
                    let Some(mins) = keys.iter().map(|k| self.min.get(k).copied()).collect::<Option<Vec<_>>>() else {
                        continue;
                    };
                    if 1 + mins.iter().sum::<usize>() > budget {
                        continue;
                    }
                    let mut partial = Vec::new();
                    self.combine(&keys, &mins, 0, budget - 1, &mut Vec::new(), &mut partial);
                    out.extend(partial.into_iter().map(|kids| Arc::new(Deriv::Phrase { rule: r, kids })));
                }
            }
        }
        let out = Arc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    fn combine(
        &mut self,
        keys: &[Key],
        mins: &[usize],
        at: usize,
        budget: usize,
        acc: &mut Vec<Arc<Deriv>>,
        out: &mut Vec<Vec<Arc<Deriv>>>,
    ) {
        if at == keys.len() {
            out.push(acc.clone());
            return;
        }
        let rest: usize = mins[at + 1..].iter().sum();
        if budget < rest + mins[at] {
            return;
        }
        let (c, a, b) = keys[at];
        let options = self.trees(c, a, b, budget - rest);
        for t in options.iter() {
            let s = t.size();
            acc.push(t.clone());
            self.combine(keys, mins, at + 1, budget - s, acc, out);
            acc.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::grammar::parse_grammar;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn split_counts() {
        assert_eq!(splits(0, 3, 2), vec![vec![(0, 1), (1, 3)], vec![(0, 2), (2, 3)]]);
        assert_eq!(splits(0, 2, 3).len(), 0);
        assert_eq!(splits(0, 4, 1), vec![vec![(0, 4)]]);
    }

    #[test]
    fn figure1_has_one_derivation() {
        let g = fixtures::figure1_grammar();
        let mut chart = Chart::new(&g, &toks("a girl walks"));
        assert_eq!(chart.min_size("S"), Some(9));
        assert_eq!(chart.max_size("S"), Some(Some(9)));
        assert_eq!(chart.derivations("S", 9).len(), 1);
        assert_eq!(chart.derivations("S", 8).len(), 0);
        let mut bad = Chart::new(&g, &toks("walks girl a"));
        assert_eq!(bad.min_size("S"), None);
        assert!(bad.derivations("S", 100).is_empty());
    }

    #[test]
    fn unary_cycles_are_unbounded_but_enumerable() {
        let text = "signature { cat: S A; atom: x; feat: f; }\nrule S -> A;\nrule A -> S;\nlex w A;";
        let g = parse_grammar(text).unwrap();
        let mut chart = Chart::new(&g, &toks("w"));
        assert_eq!(chart.min_size("S"), Some(3));
        assert_eq!(chart.max_size("S"), Some(None));
        // S(A w) and S(A(S(A w)))
        assert_eq!(chart.derivations("S", 6).len(), 2);
    }
}
