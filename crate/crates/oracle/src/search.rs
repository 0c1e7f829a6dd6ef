//! Brute-force parsing. Trees are enumerated over all labelings and
//! shapes, pruned only by a three-valued reading of the theory; each
//! surviving tree gets its equations closed over an explicit term set.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use lfgmc_core::grammar::{Grammar, LexSchema, Schema, Theory, PRED, REL};
use lfgmc_core::model::{CStructure, FNode, FNodeId, FStructure, Label, Model, TreeId, TreeNode};
use lfgmc_core::Formula;

use crate::denote::counterexample;

#[derive(Debug, Clone, PartialEq, Eq)]
enum OTree {
    Word(String),
    Cat(String, Vec<Arc<OTree>>),
}

impl OTree {
    fn size(&self) -> usize {
        match self {
            OTree::Word(_) => 1,
            OTree::Cat(_, kids) => 1 + kids.iter().map(|k| k.size()).sum::<usize>(),
        }
    }
}

fn and3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

fn not3(a: Option<bool>) -> Option<bool> {
    a.map(|x| !x)
}

fn or3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    not3(and3(not3(a), not3(b)))
}

/// Three-valued truth at the root of a tree whose surroundings and
/// f-structure are unknown. `None` means either answer is possible.
fn kleene(t: &OTree, phi: &Formula) -> Option<bool> {
    match phi {
        Formula::True | Formula::CStruct => Some(true),
        Formula::False | Formula::FStruct | Formula::Atom(_) | Formula::Feat(..) => Some(false),
        Formula::Cat(c) => Some(matches!(t, OTree::Cat(l, _) if l == c)),
        Formula::Word(w) => Some(matches!(t, OTree::Word(l) if l == w)),
        Formula::Up(_) | Formula::Zoomin(_) | Formula::PathEq(_) => None,
        Formula::Not(a) => not3(kleene(t, a)),
        Formula::And(a, b) => and3(kleene(t, a), kleene(t, b)),
        Formula::Or(a, b) => or3(kleene(t, a), kleene(t, b)),
        Formula::Implies(a, b) => or3(not3(kleene(t, a)), kleene(t, b)),
        Formula::Iff(a, b) => {
            let (x, y) = (kleene(t, a), kleene(t, b));
            and3(or3(not3(x), y), or3(not3(y), x))
        }
        Formula::Down(a) => {
            let kids = match t {
                OTree::Cat(_, k) => k.as_slice(),
                OTree::Word(_) => &[],
            };
            let mut acc = Some(false);
            for k in kids {
                acc = or3(acc, kleene(k, a));
            }
            acc
        }
        Formula::Bullet(args) => {
            let kids = match t {
                OTree::Cat(_, k) => k.as_slice(),
                OTree::Word(_) => &[],
            };
            if kids.len() != args.len() {
                return Some(false);
            }
            let mut acc = Some(true);
            for (k, a) in kids.iter().zip(args.iter()) {
                acc = and3(acc, kleene(k, a));
            }
            acc
        }
    }
}

type TreeMemo = HashMap<(usize, usize, usize), Arc<Vec<Arc<OTree>>>>;

struct Trees<'a> {
    tokens: &'a [String],
    cats: Vec<String>,
    formulas: Vec<&'a Formula>,
    memo: TreeMemo,
}

impl Trees<'_> {
    fn plausible(&self, t: &OTree) -> bool {
        self.formulas.iter().all(|f| kleene(t, f) != Some(false))
    }

    /// Category-rooted trees over `i..j` with at most `budget` nodes.
    fn over(&mut self, i: usize, j: usize, budget: usize) -> Arc<Vec<Arc<OTree>>> {
        if let Some(v) = self.memo.get(&(i, j, budget)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if budget >= 2 {
            for kids in self.sequences(i, j, budget - 1) {
                for c in self.cats.clone() {
                    let t = OTree::Cat(c, kids.clone());
                    if self.plausible(&t) {
                        out.push(Arc::new(t));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.memo.insert((i, j, budget), out.clone());
        out
    }

    /// Nonempty daughter sequences covering `i..j` within `budget` nodes.
    fn sequences(&mut self, i: usize, j: usize, budget: usize) -> Vec<Vec<Arc<OTree>>> {
        let mut out = Vec::new();
        // first daughter over i..mid, the rest over mid..j
        for mid in i + 1..=j {
            let mut firsts: Vec<Arc<OTree>> = Vec::new();
            if mid == i + 1 {
                firsts.push(Arc::new(OTree::Word(self.tokens[i].clone())));
            }
            firsts.extend(self.over(i, mid, budget).iter().cloned());
            for first in firsts {
                let s = first.size();
                if s > budget {
                    continue;
                }
                if mid == j {
                    out.push(vec![first.clone()]);
                } else {
                    for mut rest in self.sequences(mid, j, budget - s) {
                        rest.insert(0, first.clone());
                        out.push(rest);
                    }
                }
            }
        }
        out
    }
}

fn to_cstruct(t: &OTree) -> CStructure {
    fn go(t: &OTree, mother: Option<TreeId>, nodes: &mut BTreeMap<TreeId, TreeNode>) -> TreeId {
        let id = TreeId(nodes.len() as u32);
        let label = match t {
            OTree::Word(w) => Label::Word(w.clone()),
            OTree::Cat(c, _) => Label::Cat(c.clone()),
        };
        nodes.insert(id, TreeNode { label, mother, daughters: Vec::new() });
        if let OTree::Cat(_, kids) = t {
            let ds = kids.iter().map(|k| go(k, Some(id), nodes)).collect();
            nodes.get_mut(&id).expect("inserted").daughters = ds;
        }
        id
    }
    let mut nodes = BTreeMap::new();
    let root = go(t, None, &mut nodes);
    CStructure::from_parts(root, nodes)
}

#[derive(Debug, Clone, Copy)]
enum Choice {
    Rule(usize),
    Lex(usize),
}

type Term = (TreeId, Vec<String>);

fn path(base: &[String], more: &[String]) -> Vec<String> {
    base.iter().chain(more).cloned().collect()
}

#[derive(Default)]
struct Equations {
    eqs: Vec<(Term, Term)>,
    atoms: Vec<(Term, String)>,
    /// clause tree node and argument path of each semantic form
    conds: Vec<(TreeId, Vec<String>)>,
}

fn equations(g: &Grammar, c: &CStructure, choice: &BTreeMap<TreeId, Choice>) -> Option<Equations> {
    let mut e = Equations::default();
    for (&n, ch) in choice {
        match *ch {
            Choice::Rule(r) => {
                for (d, dtr) in c.daughters(n).iter().zip(&g.rules()[r].rhs) {
                    for s in &dtr.schemata {
                        match s {
                            Schema::UpPathEqDown { up, down } => e.eqs.push(((n, up.clone()), (*d, down.clone()))),
                            Schema::UpPathAtom { up, value } => e.atoms.push(((n, up.clone()), value.clone())),
                        }
                    }
                }
            }
            Choice::Lex(x) => {
                let schemata = &g.lexicon()[x].schemata;
                if schemata.is_empty() {
                    continue;
                }
                // the annotations describe the preterminal's mother
                let m = c.mother(n)?;
                for s in schemata {
                    match s {
                        LexSchema::UpPathAtom { up, value } => e.atoms.push(((m, up.clone()), value.clone())),
                        LexSchema::SemForm(f) => {
                            let pred = vec![PRED.to_string()];
                            e.atoms.push(((m, path(&pred, &[REL.to_string()])), f.rel.clone()));
                            for a in &f.args {
                                let pa = (m, path(&pred, a));
                                e.eqs.push((pa.clone(), pa));
                                e.conds.push((m, a.clone()));
                            }
                            e.eqs.push(((m, pred.clone()), (m, pred)));
                        }
                    }
                }
            }
        }
    }
    Some(e)
}

/// Terms with every prefix, mapped to dense indices.
struct Universe {
    terms: Vec<Term>,
    index: BTreeMap<Term, usize>,
}

impl Universe {
    fn new(e: &Equations) -> Self {
        let mut set = BTreeSet::new();
        let mut add = |t: &Term| {
            for k in 0..=t.1.len() {
                set.insert((t.0, t.1[..k].to_vec()));
            }
        };
        for (a, b) in &e.eqs {
            add(a);
            add(b);
        }
        for (a, _) in &e.atoms {
            add(a);
        }
        let terms: Vec<Term> = set.into_iter().collect();
        let index = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Universe { terms, index }
    }

    fn ext(&self, i: usize, f: &str) -> Option<usize> {
        let (t, p) = &self.terms[i];
        let mut q = p.clone();
        q.push(f.to_string());
        self.index.get(&(*t, q)).copied()
    }
}

/// Quick-find classes: merging relabels the whole class.
fn merge(cls: &mut [usize], a: usize, b: usize) -> bool {
    let (ca, cb) = (cls[a], cls[b]);
    if ca == cb {
        return false;
    }
    for c in cls.iter_mut() {
        if *c == cb {
            *c = ca;
        }
    }
    true
}

/// Class reached from class `c` by `f`, if any member has that extension.
fn step(u: &Universe, cls: &[usize], c: usize, f: &str) -> Option<usize> {
    (0..u.terms.len()).filter(|i| cls[*i] == c).find_map(|i| u.ext(i, f)).map(|j| cls[j])
}

/// Least equivalence over the universe closed under the equations,
/// congruence and argument sharing.
fn close(u: &Universe, e: &Equations, feats: &[String]) -> Vec<usize> {
    let n = u.terms.len();
    let mut cls: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for (a, b) in &e.eqs {
            changed |= merge(&mut cls, u.index[a], u.index[b]);
        }
        for i in 0..n {
            for j in i + 1..n {
                if cls[i] != cls[j] {
                    continue;
                }
                for f in feats {
                    if let (Some(x), Some(y)) = (u.ext(i, f), u.ext(j, f)) {
                        changed |= merge(&mut cls, x, y);
                    }
                }
            }
        }
        for (m, arg) in &e.conds {
            let mut here = Some(cls[u.index[&(*m, Vec::new())]]);
            for f in arg {
                here = here.and_then(|c| step(u, &cls, c, f));
            }
            if let Some(c) = here {
                let target = (0..n).find(|i| cls[*i] == c).expect("class has a member");
                let mut pa = vec![PRED.to_string()];
                pa.extend(arg.iter().cloned());
                changed |= merge(&mut cls, u.index[&(*m, pa)], target);
            }
        }
        if !changed {
            return cls;
        }
    }
}

/// The quotient model, or `Err(true)` when it has too many nodes and
/// `Err(false)` when it has none.
fn quotient(
    g: &Grammar,
    c: &CStructure,
    u: &Universe,
    e: &Equations,
    cls: &[usize],
    max_fnodes: usize,
) -> Result<Model, bool> {
    let classes: Vec<usize> = cls.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let id = |k: usize| FNodeId(classes.iter().position(|x| *x == k).expect("a class") as u32);
    let mut atoms: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for (t, a) in &e.atoms {
        atoms.entry(cls[u.index[t]]).or_default().insert(a.clone());
    }
    let mut nodes: BTreeMap<FNodeId, FNode> = BTreeMap::new();
    for &k in &classes {
        let mut trans = BTreeMap::new();
        for f in g.sig().feats() {
            if let Some(j) = step(u, cls, k, f) {
                trans.insert(f.clone(), id(j));
            }
        }
        let atom = match atoms.get(&k) {
            Some(set) if set.len() > 1 => return Err(false),
            Some(set) => set.iter().next().cloned(),
            None => None,
        };
        if atom.is_some() && !trans.is_empty() {
            return Err(false);
        }
        nodes.insert(id(k), FNode { trans, atom });
    }
    if classes.len() > max_fnodes {
        return Err(true);
    }
    let zoomin: BTreeMap<TreeId, FNodeId> =
        u.index.iter().filter(|((_, p), _)| p.is_empty()).map(|((t, _), i)| (*t, id(cls[*i]))).collect();
    let initial = match zoomin.get(&c.root()) {
        Some(w) => *w,
        None if nodes.is_empty() => {
            nodes.insert(FNodeId(0), FNode::default());
            FNodeId(0)
        }
        None => {
            let targets: BTreeSet<FNodeId> = nodes.values().flat_map(|n| n.trans.values().copied()).collect();
            let sources: Vec<FNodeId> = nodes.keys().copied().filter(|w| !targets.contains(w)).collect();
            match sources.as_slice() {
                [one] => *one,
                _ => return Err(false),
            }
        }
    };
    Ok(Model::new(g.sig().clone(), c.clone(), FStructure::from_nodes(initial, nodes), zoomin))
}

#[derive(Debug, Clone, Default)]
pub struct OracleOutcome {
    /// Canonical models ordered by their JSON rendering.
    pub models: Vec<Model>,
    /// Trees that survived pruning and had the start category at the root.
    pub trees: usize,
    pub fnode_bound_hit: bool,
}

/// Models of `theory` over `tokens`, found without the chart or the solver.
pub fn parse(g: &Grammar, theory: &Theory, tokens: &[String], max_tree: usize, max_fnodes: usize) -> OracleOutcome {
    let formulas: Vec<&Formula> = theory.formulas().into_iter().map(|tf| tf.formula).collect();
    let mut trees = Trees {
        tokens,
        cats: g.sig().cats().iter().cloned().collect(),
        formulas: formulas.clone(),
        memo: HashMap::new(),
    };
    let mut out = OracleOutcome::default();
    if tokens.is_empty() {
        return out;
    }
    let feats: Vec<String> = g.sig().feats().iter().cloned().collect();
    let mut found: BTreeMap<String, Model> = BTreeMap::new();
    for t in trees.over(0, tokens.len(), max_tree).iter() {
        if !matches!(t.as_ref(), OTree::Cat(c, _) if c == g.start()) {
            continue;
        }
        out.trees += 1;
        let c = to_cstruct(t);
        let mut options: Vec<(TreeId, Vec<Choice>)> = Vec::new();
        for n in c.ids() {
            let kids = c.daughters(n);
            if kids.is_empty() {
                continue;
            }
            let Some(Label::Cat(lhs)) = c.label(n) else {
                continue;
            };
            let labels: Vec<&Label> = kids.iter().filter_map(|k| c.label(*k)).collect();
            let opts: Vec<Choice> = match labels.as_slice() {
                [Label::Word(w)] => (0..g.lexicon().len())
                    .filter(|x| &g.lexicon()[*x].word == w && &g.lexicon()[*x].cat == lhs)
                    .map(Choice::Lex)
                    .collect(),
                _ => (0..g.rules().len())
                    .filter(|r| {
                        let rule = &g.rules()[*r];
                        &rule.lhs == lhs
                            && rule.rhs.len() == labels.len()
                            && rule.rhs.iter().zip(&labels).all(|(d, l)| matches!(l, Label::Cat(x) if *x == d.cat))
                    })
                    .map(Choice::Rule)
                    .collect(),
            };
            options.push((n, opts));
        }
        let mut pick = vec![0usize; options.len()];
        if options.iter().any(|(_, o)| o.is_empty()) {
            continue;
        }
        loop {
            let choice: BTreeMap<TreeId, Choice> = options.iter().zip(&pick).map(|((n, o), k)| (*n, o[*k])).collect();
            if let Some(e) = equations(g, &c, &choice) {
                let u = Universe::new(&e);
                let cls = close(&u, &e, &feats);
                match quotient(g, &c, &u, &e, &cls, max_fnodes) {
                    Ok(m) => {
                        if m.validate().is_valid() && formulas.iter().all(|f| counterexample(&m, f).is_none()) {
                            let m = m.canonical();
                            found.entry(m.to_json()).or_insert(m);
                        }
                    }
                    Err(too_large) => out.fnode_bound_hit |= too_large,
                }
            }
            // odometer over the per-node options
            let mut k = 0;
            while k < pick.len() {
                pick[k] += 1;
                if pick[k] < options[k].1.len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
    }
    out.models = found.into_values().collect();
    out
}

fn fstructures(feats: &[String], atoms: &[String], k: usize) -> Vec<FStructure> {
    let per_node: Vec<FNode> = {
        let mut opts: Vec<FNode> =
            atoms.iter().map(|a| FNode { trans: BTreeMap::new(), atom: Some(a.clone()) }).collect();
        let mut partial = vec![BTreeMap::new()];
        for f in feats {
            let mut next = Vec::new();
            for p in &partial {
                next.push(p.clone());
                for v in 0..k {
                    let mut q = p.clone();
                    q.insert(f.clone(), FNodeId(v as u32));
                    next.push(q);
                }
            }
            partial = next;
        }
        opts.extend(partial.into_iter().map(|trans| FNode { trans, atom: None }));
        opts
    };
    let mut out = Vec::new();
    let mut pick = vec![0usize; k];
    loop {
        let nodes = (0..k).map(|i| (FNodeId(i as u32), per_node[pick[i]].clone())).collect();
        out.push(FStructure::from_nodes(FNodeId(0), nodes));
        let mut i = 0;
        while i < k {
            pick[i] += 1;
            if pick[i] < per_node.len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == k {
            return out;
        }
    }
}

/// A map from `small` into `big` fixing the tree and preserving features,
/// atoms and every zoomin link of `small`. The initial node is not
/// preserved: material above the root's image counts as extra.
fn embeds(small: &Model, big: &Model) -> bool {
    let ids: Vec<FNodeId> = small.fstruct().ids().collect();
    let targets: Vec<FNodeId> = big.fstruct().ids().collect();
    let mut h: BTreeMap<FNodeId, FNodeId> = BTreeMap::new();
    fn go(
        i: usize,
        ids: &[FNodeId],
        targets: &[FNodeId],
        h: &mut BTreeMap<FNodeId, FNodeId>,
        s: &Model,
        b: &Model,
    ) -> bool {
        if i == ids.len() {
            let (fs, fb) = (s.fstruct(), b.fstruct());
            return fs.nodes().all(|(w, n)| {
                n.trans.iter().all(|(f, v)| fb.step(h[&w], f) == Some(h[v]))
                    && (n.atom.is_none() || fb.atom(h[&w]) == n.atom.as_deref())
            }) && s.zoomin().iter().all(|(t, w)| b.zoom(*t) == Some(h[w]));
        }
        for t in targets {
            h.insert(ids[i], *t);
            if go(i + 1, ids, targets, h, s, b) {
                return true;
            }
        }
        false
    }
    go(0, &ids, &targets, &mut h, small, big)
}

/// Literal enumerate-and-filter: every surviving tree, every f-structure
/// of at most `max_fnodes` nodes and every zoomin map, keeping the valid
/// models that no other valid model lies strictly below. Only usable for
/// very small signatures.
pub fn enumerate_minimal(
    g: &Grammar,
    theory: &Theory,
    tokens: &[String],
    max_tree: usize,
    max_fnodes: usize,
) -> Vec<Model> {
    let formulas: Vec<&Formula> = theory.formulas().into_iter().map(|tf| tf.formula).collect();
    let mut trees = Trees {
        tokens,
        cats: g.sig().cats().iter().cloned().collect(),
        formulas: formulas.clone(),
        memo: HashMap::new(),
    };
    let feats: Vec<String> = g.sig().feats().iter().cloned().collect();
    let atoms: Vec<String> = g.sig().atoms().iter().cloned().collect();
    let mut minimal: BTreeMap<String, Model> = BTreeMap::new();
    for t in trees.over(0, tokens.len(), max_tree).iter() {
        if !matches!(t.as_ref(), OTree::Cat(c, _) if c == g.start()) {
            continue;
        }
        let c = to_cstruct(t);
        let tids: Vec<TreeId> = c.ids().collect();
        let mut valid_models: BTreeMap<String, Model> = BTreeMap::new();
        for k in 1..=max_fnodes {
            for fs in fstructures(&feats, &atoms, k) {
                let mut pick = vec![0usize; tids.len()];
                loop {
                    let zoomin: BTreeMap<TreeId, FNodeId> = tids
                        .iter()
                        .zip(&pick)
                        .filter(|(_, p)| **p > 0)
                        .map(|(t, p)| (*t, FNodeId(*p as u32 - 1)))
                        .collect();
                    let m = Model::new(g.sig().clone(), c.clone(), fs.clone(), zoomin);
                    if m.validate().is_valid() && formulas.iter().all(|f| counterexample(&m, f).is_none()) {
                        let m = m.canonical();
                        valid_models.entry(m.to_json()).or_insert(m);
                    }
                    let mut i = 0;
                    while i < pick.len() {
                        pick[i] += 1;
                        if pick[i] <= k {
                            break;
                        }
                        pick[i] = 0;
                        i += 1;
                    }
                    if i == pick.len() {
                        break;
                    }
                }
            }
        }
        let all: Vec<&Model> = valid_models.values().collect();
        for (key, m) in &valid_models {
            let below = all.iter().any(|o| o.to_json() != *key && embeds(o, m) && !embeds(m, o));
            if !below {
                minimal.insert(key.clone(), m.clone());
            }
        }
    }
    minimal.into_values().collect()
}
